// SSDP datagram model: NOTIFY advertisements, M-SEARCH discovery requests
// and their unicast responses, with bit-exact header framing
// (`Name: value` lines, CRLF endings, blank-line terminator).
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "upnplab/error.hpp"
#include "upnplab/types.hpp"

namespace upnplab {

inline constexpr char kSsdpMulticastGroup[] = "ssdp";
inline constexpr char kSsdpHostValue[] = "239.255.255.250:1900";
inline constexpr char kSsdpManValue[] = "\"ssdp:discover\"";
inline constexpr char kSearchAll[] = "ssdp:all";
// Extension header carrying a hex-encoded CapToken in secured mode.
inline constexpr char kTokenHeader[] = "X-CAPTOKEN";
inline constexpr std::size_t kMaxDatagram = 4096;

enum class SsdpKind { Notify, MSearch, MSearchResponse };

struct SsdpMessage {
  SsdpKind kind = SsdpKind::Notify;
  // Stored in wire order with original casing; lookup is case-insensitive.
  std::vector<std::pair<std::string, std::string>> headers;

  std::optional<std::string> header(std::string_view name) const;
  void set_header(const std::string& name, const std::string& value);

  // Well-known accessors.
  std::optional<std::string> nt() const { return header("NT"); }
  std::optional<std::string> st() const { return header("ST"); }
  std::optional<std::string> usn() const { return header("USN"); }
  std::optional<std::string> location() const { return header("LOCATION"); }
  std::optional<std::string> host() const { return header("HOST"); }
  std::optional<std::string> man() const { return header("MAN"); }
  // Seconds from "max-age=N"; nullopt when absent or non-numeric.
  std::optional<std::int64_t> cache_control() const;
  std::optional<std::int64_t> mx() const;

  bool operator==(const SsdpMessage&) const = default;
};

// Parses one complete datagram payload. Never partially succeeds.
// Errors: PayloadTooLarge, MalformedStartLine, MalformedHeaderLine,
// MissingRequiredHeader(name), DuplicateHeader(name), NonUtf8Header,
// TrailingData.
Expected<SsdpMessage> parse_ssdp(const Bytes& raw);

// Emits start line, then headers in stored order, CRLF endings, blank-line
// terminator. Bit-exact inverse of parse_ssdp on valid inputs.
// Errors: InvariantViolation (required header missing, unframeable header
// bytes), PayloadTooLarge.
Expected<Bytes> serialize_ssdp(const SsdpMessage& msg);

// Constructors for the three message forms, with required headers filled in.
SsdpMessage make_notify(const std::string& nt, const std::string& usn,
                        const std::string& location);
SsdpMessage make_msearch(const std::string& st, std::int64_t mx = 2);
SsdpMessage make_msearch_response(const std::string& st, const std::string& usn,
                                  const std::string& location);

}  // namespace upnplab
