#include "upnplab/wire/http.hpp"

#include "framing.hpp"
#include "upnplab/wire/ssdp.hpp"  // kMaxDatagram

namespace upnplab {

namespace {

constexpr std::string_view kVersion = "HTTP/1.1";

bool is_token(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < 0x21 || c > 0x7e) return false;
  }
  return true;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

std::optional<std::string> HttpExchange::header(std::string_view name) const {
  return framing::find_header(headers, name);
}

void HttpExchange::set_header(const std::string& name, const std::string& value) {
  for (auto& [n, v] : headers) {
    if (ascii_iequals(n, name)) {
      v = value;
      return;
    }
  }
  headers.emplace_back(name, value);
}

std::optional<std::string> HttpExchange::callback() const {
  auto value = header("CALLBACK");
  if (!value) return std::nullopt;
  std::string v = *value;
  if (v.size() >= 2 && v.front() == '<' && v.back() == '>') {
    v = v.substr(1, v.size() - 2);
  }
  return v;
}

std::optional<std::int64_t> HttpExchange::timeout() const {
  auto value = header("TIMEOUT");
  if (!value) return std::nullopt;
  auto ticks = parse_uint(*value);
  if (!ticks.ok()) return std::nullopt;
  return ticks.value();
}

std::optional<std::int64_t> HttpExchange::content_length() const {
  auto value = header("CONTENT-LENGTH");
  if (!value) return std::nullopt;
  auto n = parse_uint(*value);
  if (!n.ok()) return std::nullopt;
  return n.value();
}

Expected<HttpExchange> parse_http(const Bytes& raw) {
  if (raw.size() > kMaxDatagram) {
    return make_error(Errc::PayloadTooLarge, std::to_string(raw.size()));
  }
  std::size_t eol = raw.find("\r\n");
  if (eol == Bytes::npos) {
    return make_error(Errc::MalformedStartLine, "");
  }
  std::string_view start(raw.data(), eol);

  HttpExchange x;
  if (start.rfind(kVersion, 0) == 0) {
    // Response: HTTP/1.1 <status> [<reason>]
    x.direction = HttpDirection::Response;
    std::string_view rest = start.substr(kVersion.size());
    if (rest.empty() || rest[0] != ' ') {
      return make_error(Errc::MalformedStartLine, std::string(start));
    }
    rest = rest.substr(1);
    std::size_t sp = rest.find(' ');
    std::string_view status = (sp == std::string_view::npos) ? rest : rest.substr(0, sp);
    if (!all_digits(status)) {
      return make_error(Errc::MalformedStartLine, std::string(start));
    }
    x.method_or_status = std::string(status);
    if (sp != std::string_view::npos) {
      std::string_view reason = rest.substr(sp + 1);
      // "HTTP/1.1 200 " (empty reason after a space) does not round-trip;
      // an empty reason is written without the trailing space. Reasons are
      // held to the same byte rules as header values so that every accepted
      // parse re-serializes.
      if (reason.empty() || !framing::valid_header_value(reason)) {
        return make_error(Errc::MalformedStartLine, std::string(start));
      }
      x.path = std::string(reason);
    }
  } else {
    // Request: <METHOD> <target> HTTP/1.1
    std::size_t sp1 = start.find(' ');
    if (sp1 == std::string_view::npos) {
      return make_error(Errc::MalformedStartLine, std::string(start));
    }
    std::size_t sp2 = start.find(' ', sp1 + 1);
    if (sp2 == std::string_view::npos || start.substr(sp2 + 1) != kVersion) {
      return make_error(Errc::MalformedStartLine, std::string(start));
    }
    std::string_view method = start.substr(0, sp1);
    std::string_view target = start.substr(sp1 + 1, sp2 - sp1 - 1);
    if (!is_token(method) || !is_token(target)) {
      return make_error(Errc::MalformedStartLine, std::string(start));
    }
    x.direction = HttpDirection::Request;
    x.method_or_status = std::string(method);
    x.path = std::string(target);
  }

  auto block = framing::parse_headers(raw, eol + 2);
  if (!block.ok()) return block.error();
  x.headers = std::move(block.value().headers);
  x.body = raw.substr(block.value().end);

  if (auto declared = x.header("CONTENT-LENGTH")) {
    auto n = parse_uint(*declared);
    if (!n.ok() || static_cast<std::size_t>(n.value()) != x.body.size()) {
      return make_error(Errc::LengthMismatch, *declared);
    }
  }
  if (x.is_request() && x.method_or_status == "SUBSCRIBE" && !x.header("CALLBACK")) {
    return make_error(Errc::MissingRequiredHeader, "CALLBACK");
  }
  return x;
}

Expected<Bytes> serialize_http(const HttpExchange& x) {
  Bytes out;
  if (x.direction == HttpDirection::Request) {
    if (!is_token(x.method_or_status) || !is_token(x.path)) {
      return make_error(Errc::InvariantViolation, "start line");
    }
    out += x.method_or_status;
    out += ' ';
    out += x.path;
    out += ' ';
    out += kVersion;
  } else {
    if (!all_digits(x.method_or_status)) {
      return make_error(Errc::InvariantViolation, "status");
    }
    out += kVersion;
    out += ' ';
    out += x.method_or_status;
    if (!x.path.empty()) {
      if (!framing::valid_header_value(x.path)) {
        return make_error(Errc::InvariantViolation, "reason");
      }
      out += ' ';
      out += x.path;
    }
  }
  out += "\r\n";
  if (x.is_request() && x.method_or_status == "SUBSCRIBE" && !x.header("CALLBACK")) {
    return make_error(Errc::InvariantViolation, "CALLBACK");
  }
  if (auto declared = x.header("CONTENT-LENGTH")) {
    auto n = parse_uint(*declared);
    if (!n.ok() || static_cast<std::size_t>(n.value()) != x.body.size()) {
      return make_error(Errc::LengthMismatch, *declared);
    }
  }
  if (Status st = framing::serialize_headers(x.headers, out)) {
    return *st;
  }
  out += x.body;
  if (out.size() > kMaxDatagram) {
    return make_error(Errc::PayloadTooLarge, std::to_string(out.size()));
  }
  return out;
}

HttpExchange make_request(const std::string& method, const std::string& path,
                          Bytes body) {
  HttpExchange x;
  x.direction = HttpDirection::Request;
  x.method_or_status = method;
  x.path = path;
  x.headers = {{"CONTENT-LENGTH", std::to_string(body.size())}};
  x.body = std::move(body);
  return x;
}

HttpExchange make_response(const std::string& status, const std::string& reason,
                           Bytes body) {
  HttpExchange x;
  x.direction = HttpDirection::Response;
  x.method_or_status = status;
  x.path = reason;
  x.headers = {{"CONTENT-LENGTH", std::to_string(body.size())}};
  x.body = std::move(body);
  return x;
}

HttpExchange make_subscribe(const std::string& path, const std::string& callback_url,
                            Tick timeout) {
  HttpExchange x = make_request("SUBSCRIBE", path);
  x.headers.insert(x.headers.begin(),
                   {{"CALLBACK", "<" + callback_url + ">"},
                    {"TIMEOUT", std::to_string(timeout)}});
  return x;
}

std::optional<Url> parse_url(std::string_view url) {
  constexpr std::string_view scheme = "http://";
  if (url.rfind(scheme, 0) != 0) return std::nullopt;
  std::string_view rest = url.substr(scheme.size());
  std::size_t slash = rest.find('/');
  Url out;
  if (slash == std::string_view::npos) {
    out.host = std::string(rest);
    out.path = "/";
  } else {
    out.host = std::string(rest.substr(0, slash));
    out.path = std::string(rest.substr(slash));
  }
  if (out.host.empty()) return std::nullopt;
  return out;
}

}  // namespace upnplab
