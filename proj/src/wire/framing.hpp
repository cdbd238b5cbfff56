// Internal helpers shared by the SSDP and HTTP codecs: `Name: value` header
// block framing with CRLF line endings. Not part of the public interface.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "upnplab/error.hpp"
#include "upnplab/types.hpp"

namespace upnplab::framing {

using HeaderList = std::vector<std::pair<std::string, std::string>>;

inline bool valid_header_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (c < 0x21 || c > 0x7e || c == ':') return false;
  }
  return true;
}

// Values may hold any UTF-8 text without control bytes (CR/LF would break
// the framing, so they are rejected rather than escaped).
inline bool valid_header_value(std::string_view value) {
  for (unsigned char c : value) {
    if (c < 0x20 || c == 0x7f) return false;
  }
  return is_valid_utf8(value);
}

struct HeaderBlock {
  HeaderList headers;
  std::size_t end = 0;  // offset just past the blank-line terminator
};

// Parses header lines starting at `pos` up to and including the blank line.
inline Expected<HeaderBlock> parse_headers(const Bytes& raw, std::size_t pos) {
  HeaderBlock block;
  while (true) {
    std::size_t eol = raw.find("\r\n", pos);
    if (eol == Bytes::npos) {
      return make_error(Errc::MalformedHeaderLine, "missing terminator");
    }
    std::string_view line(raw.data() + pos, eol - pos);
    pos = eol + 2;
    if (line.empty()) break;  // blank line ends the block
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      return make_error(Errc::MalformedHeaderLine, std::string(line));
    }
    std::string_view name = line.substr(0, colon);
    if (!valid_header_name(name)) {
      return make_error(Errc::MalformedHeaderLine, std::string(line));
    }
    // Exactly one space after the colon, value runs to end of line.
    if (colon + 1 >= line.size() || line[colon + 1] != ' ') {
      return make_error(Errc::MalformedHeaderLine, std::string(line));
    }
    std::string_view value = line.substr(colon + 2);
    if (!valid_header_value(value)) {
      return make_error(Errc::NonUtf8Header, std::string(name));
    }
    block.headers.emplace_back(std::string(name), std::string(value));
  }
  block.end = pos;
  return block;
}

inline Status serialize_headers(const HeaderList& headers, Bytes& out) {
  for (const auto& [name, value] : headers) {
    if (!valid_header_name(name) || !valid_header_value(value)) {
      return make_error(Errc::InvariantViolation, name);
    }
    out += name;
    out += ": ";
    out += value;
    out += "\r\n";
  }
  out += "\r\n";
  return ok_status();
}

inline std::optional<std::string> find_header(const HeaderList& headers,
                                              std::string_view name) {
  for (const auto& [n, v] : headers) {
    if (ascii_iequals(n, name)) return v;
  }
  return std::nullopt;
}

}  // namespace upnplab::framing
