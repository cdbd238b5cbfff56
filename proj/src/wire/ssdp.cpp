#include "upnplab/wire/ssdp.hpp"

#include <array>

#include "framing.hpp"

namespace upnplab {

namespace {

constexpr std::string_view kNotifyStart = "NOTIFY * HTTP/1.1";
constexpr std::string_view kMSearchStart = "M-SEARCH * HTTP/1.1";
constexpr std::string_view kResponseStart = "HTTP/1.1 200 OK";

// Headers whose duplication is a parse error. Unknown extension headers may
// repeat freely.
constexpr std::array<std::string_view, 11> kWellKnown = {
    "NT",  "NTS", "ST",     "USN",           "LOCATION", "HOST",
    "MAN", "MX",  "SERVER", "CACHE-CONTROL", "X-CAPTOKEN"};

bool is_well_known(std::string_view name) {
  for (std::string_view w : kWellKnown) {
    if (ascii_iequals(name, w)) return true;
  }
  return false;
}

struct KindSpec {
  SsdpKind kind;
  std::string_view start_line;
  std::vector<std::string_view> required;
};

const std::vector<KindSpec>& kind_specs() {
  static const std::vector<KindSpec> specs = {
      {SsdpKind::Notify, kNotifyStart, {"NT", "USN", "LOCATION"}},
      {SsdpKind::MSearch, kMSearchStart, {"ST", "MAN", "MX", "HOST"}},
      {SsdpKind::MSearchResponse, kResponseStart, {"ST", "USN", "LOCATION"}},
  };
  return specs;
}

const KindSpec& spec_for(SsdpKind kind) {
  for (const KindSpec& s : kind_specs()) {
    if (s.kind == kind) return s;
  }
  return kind_specs().front();  // unreachable; kinds are exhaustive
}

}  // namespace

std::optional<std::string> SsdpMessage::header(std::string_view name) const {
  return framing::find_header(headers, name);
}

void SsdpMessage::set_header(const std::string& name, const std::string& value) {
  for (auto& [n, v] : headers) {
    if (ascii_iequals(n, name)) {
      v = value;
      return;
    }
  }
  headers.emplace_back(name, value);
}

std::optional<std::int64_t> SsdpMessage::cache_control() const {
  auto value = header("CACHE-CONTROL");
  if (!value) return std::nullopt;
  constexpr std::string_view prefix = "max-age=";
  if (value->rfind(prefix, 0) != 0) return std::nullopt;
  auto secs = parse_uint(std::string_view(*value).substr(prefix.size()));
  if (!secs.ok()) return std::nullopt;
  return secs.value();
}

std::optional<std::int64_t> SsdpMessage::mx() const {
  auto value = header("MX");
  if (!value) return std::nullopt;
  auto secs = parse_uint(*value);
  if (!secs.ok()) return std::nullopt;
  return secs.value();
}

Expected<SsdpMessage> parse_ssdp(const Bytes& raw) {
  if (raw.size() > kMaxDatagram) {
    return make_error(Errc::PayloadTooLarge, std::to_string(raw.size()));
  }
  std::size_t eol = raw.find("\r\n");
  if (eol == Bytes::npos) {
    return make_error(Errc::MalformedStartLine, "");
  }
  std::string_view start(raw.data(), eol);
  SsdpMessage msg;
  bool matched = false;
  for (const KindSpec& s : kind_specs()) {
    if (start == s.start_line) {
      msg.kind = s.kind;
      matched = true;
      break;
    }
  }
  if (!matched) {
    return make_error(Errc::MalformedStartLine, std::string(start));
  }

  auto block = framing::parse_headers(raw, eol + 2);
  if (!block.ok()) return block.error();
  if (block.value().end != raw.size()) {
    // SSDP datagrams carry no body.
    return make_error(Errc::TrailingData, "");
  }
  msg.headers = std::move(block.value().headers);

  // Duplicate well-known headers are ambiguous and rejected outright.
  for (std::size_t i = 0; i < msg.headers.size(); ++i) {
    if (!is_well_known(msg.headers[i].first)) continue;
    for (std::size_t j = i + 1; j < msg.headers.size(); ++j) {
      if (ascii_iequals(msg.headers[i].first, msg.headers[j].first)) {
        return make_error(Errc::DuplicateHeader,
                          ascii_upper(msg.headers[i].first));
      }
    }
  }
  for (std::string_view req : spec_for(msg.kind).required) {
    if (!msg.header(req)) {
      return make_error(Errc::MissingRequiredHeader, std::string(req));
    }
  }
  return msg;
}

Expected<Bytes> serialize_ssdp(const SsdpMessage& msg) {
  for (std::string_view req : spec_for(msg.kind).required) {
    if (!msg.header(req)) {
      return make_error(Errc::InvariantViolation, std::string(req));
    }
  }
  Bytes out(spec_for(msg.kind).start_line);
  out += "\r\n";
  if (Status st = framing::serialize_headers(msg.headers, out)) {
    return *st;
  }
  if (out.size() > kMaxDatagram) {
    return make_error(Errc::PayloadTooLarge, std::to_string(out.size()));
  }
  return out;
}

SsdpMessage make_notify(const std::string& nt, const std::string& usn,
                        const std::string& location) {
  SsdpMessage msg;
  msg.kind = SsdpKind::Notify;
  msg.headers = {{"HOST", kSsdpHostValue},
                 {"CACHE-CONTROL", "max-age=1800"},
                 {"NT", nt},
                 {"USN", usn},
                 {"LOCATION", location}};
  return msg;
}

SsdpMessage make_msearch(const std::string& st, std::int64_t mx) {
  SsdpMessage msg;
  msg.kind = SsdpKind::MSearch;
  msg.headers = {{"HOST", kSsdpHostValue},
                 {"MAN", kSsdpManValue},
                 {"MX", std::to_string(mx)},
                 {"ST", st}};
  return msg;
}

SsdpMessage make_msearch_response(const std::string& st, const std::string& usn,
                                  const std::string& location) {
  SsdpMessage msg;
  msg.kind = SsdpKind::MSearchResponse;
  msg.headers = {{"ST", st}, {"USN", usn}, {"LOCATION", location}};
  return msg;
}

}  // namespace upnplab
