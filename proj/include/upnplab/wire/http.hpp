// HTTP-like request/response exchanges used for description fetch, control
// (action invocation), and eventing (SUBSCRIBE / event NOTIFY callbacks).
// Same framing discipline as SSDP plus an optional body governed by
// CONTENT-LENGTH.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "upnplab/error.hpp"
#include "upnplab/types.hpp"

namespace upnplab {

enum class HttpDirection { Request, Response };

struct HttpExchange {
  HttpDirection direction = HttpDirection::Request;
  // "GET", "POST", "SUBSCRIBE", "NOTIFY" for requests; the numeric status
  // ("200", "404", ...) for responses.
  std::string method_or_status;
  // Request target for requests. Responses have no target, so this slot
  // stores the reason phrase ("OK", "Not Found") to keep serialize∘parse
  // byte-exact.
  std::string path;
  std::vector<std::pair<std::string, std::string>> headers;
  Bytes body;

  std::optional<std::string> header(std::string_view name) const;
  void set_header(const std::string& name, const std::string& value);

  // CALLBACK value with the customary angle brackets stripped.
  std::optional<std::string> callback() const;
  std::optional<std::string> sid() const { return header("SID"); }
  std::optional<std::int64_t> timeout() const;
  std::optional<std::int64_t> content_length() const;

  bool is_request() const { return direction == HttpDirection::Request; }
  bool status_is(std::string_view code) const {
    return direction == HttpDirection::Response && method_or_status == code;
  }

  bool operator==(const HttpExchange&) const = default;
};

// Errors: PayloadTooLarge, MalformedStartLine, MalformedHeaderLine,
// NonUtf8Header, LengthMismatch, MissingRequiredHeader ("CALLBACK" on a
// SUBSCRIBE request).
Expected<HttpExchange> parse_http(const Bytes& raw);

// Errors: InvariantViolation, LengthMismatch (declared CONTENT-LENGTH
// disagrees with the body), PayloadTooLarge.
Expected<Bytes> serialize_http(const HttpExchange& x);

// Constructors; each sets CONTENT-LENGTH to match the body.
HttpExchange make_request(const std::string& method, const std::string& path,
                          Bytes body = {});
HttpExchange make_response(const std::string& status, const std::string& reason,
                           Bytes body = {});
HttpExchange make_subscribe(const std::string& path, const std::string& callback_url,
                            Tick timeout);

// Minimal "http://host/path" splitter for LOCATION and CALLBACK values.
struct Url {
  std::string host;
  std::string path;
  bool operator==(const Url&) const = default;
};
std::optional<Url> parse_url(std::string_view url);

}  // namespace upnplab
