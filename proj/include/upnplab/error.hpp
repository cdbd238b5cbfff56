// Typed error codes and a minimal value-or-error result type used across the
// library. Every parser and fallible operation reports failures through these
// instead of throwing, so fuzzed inputs can never abort the process.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace upnplab {

enum class Errc {
  // message framing / parsing
  PayloadTooLarge,
  MalformedStartLine,
  MalformedHeaderLine,
  MissingRequiredHeader,
  DuplicateHeader,
  NonUtf8Header,
  TrailingData,
  LengthMismatch,
  InvariantViolation,
  // canonical document encoding
  DuplicateKey,
  NonScalarLeaf,
  BadEscape,
  BadKey,
  MalformedLine,
  EmptyNode,
  NonUtf8Doc,
  NotCanonical,
  BadHex,
  MalformedDocument,
  // simulated network
  DuplicateHost,
  UnknownHost,
  SpoofDenied,
  DivisionByZero,
  // security scheme
  MalformedKey,
  EmptyAttributes,
  NonceReuse,
  BadAttrPath,
  SpecInvalid,
  OwnershipFailed,
  NothingGranted,
  // device / control point
  NotFound,
  UnknownAction,
  BadArgs,
  PortInUse,
  MissingCallback,
  UnknownVariable,
  NotEvented,
  FetchFailed,
  Fault,
  NoToken,
  SubscribeRejected,
  // scenarios / cli
  UnknownScenario,
  BadParams,
  ConfigError,
};

std::string_view errc_name(Errc code);

// An error is a code plus optional context (the offending header name, key
// path, host id, ...). The detail is for humans and tests; dispatch happens
// on the code.
struct Error {
  Errc code;
  std::string detail;
};

inline Error make_error(Errc code, std::string detail = {}) {
  return Error{code, std::move(detail)};
}

// Either a T or an Error. Intentionally tiny: just enough for internal use
// without pulling in an external result library.
template <typename T>
class Expected {
 public:
  Expected(T value) : store_(std::move(value)) {}
  Expected(Error error) : store_(std::move(error)) {}

  bool ok() const { return std::holds_alternative<T>(store_); }
  explicit operator bool() const { return ok(); }

  T& value() & { return std::get<T>(store_); }
  const T& value() const& { return std::get<T>(store_); }
  T&& value() && { return std::get<T>(std::move(store_)); }

  const Error& error() const { return std::get<Error>(store_); }

  T value_or(T fallback) const {
    return ok() ? std::get<T>(store_) : std::move(fallback);
  }

 private:
  std::variant<T, Error> store_;
};

// For operations with no result value: empty optional means success.
using Status = std::optional<Error>;

inline Status ok_status() { return std::nullopt; }

}  // namespace upnplab
