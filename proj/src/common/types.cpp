#include "upnplab/types.hpp"

#include <limits>

namespace upnplab {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::PayloadTooLarge: return "PayloadTooLarge";
    case Errc::MalformedStartLine: return "MalformedStartLine";
    case Errc::MalformedHeaderLine: return "MalformedHeaderLine";
    case Errc::MissingRequiredHeader: return "MissingRequiredHeader";
    case Errc::DuplicateHeader: return "DuplicateHeader";
    case Errc::NonUtf8Header: return "NonUtf8Header";
    case Errc::TrailingData: return "TrailingData";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::DuplicateKey: return "DuplicateKey";
    case Errc::NonScalarLeaf: return "NonScalarLeaf";
    case Errc::BadEscape: return "BadEscape";
    case Errc::BadKey: return "BadKey";
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::EmptyNode: return "EmptyNode";
    case Errc::NonUtf8Doc: return "NonUtf8Doc";
    case Errc::NotCanonical: return "NotCanonical";
    case Errc::BadHex: return "BadHex";
    case Errc::MalformedDocument: return "MalformedDocument";
    case Errc::DuplicateHost: return "DuplicateHost";
    case Errc::UnknownHost: return "UnknownHost";
    case Errc::SpoofDenied: return "SpoofDenied";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::MalformedKey: return "MalformedKey";
    case Errc::EmptyAttributes: return "EmptyAttributes";
    case Errc::NonceReuse: return "NonceReuse";
    case Errc::BadAttrPath: return "BadAttrPath";
    case Errc::SpecInvalid: return "SpecInvalid";
    case Errc::OwnershipFailed: return "OwnershipFailed";
    case Errc::NothingGranted: return "NothingGranted";
    case Errc::NotFound: return "NotFound";
    case Errc::UnknownAction: return "UnknownAction";
    case Errc::BadArgs: return "BadArgs";
    case Errc::PortInUse: return "PortInUse";
    case Errc::MissingCallback: return "MissingCallback";
    case Errc::UnknownVariable: return "UnknownVariable";
    case Errc::NotEvented: return "NotEvented";
    case Errc::FetchFailed: return "FetchFailed";
    case Errc::Fault: return "Fault";
    case Errc::NoToken: return "NoToken";
    case Errc::SubscribeRejected: return "SubscribeRejected";
    case Errc::UnknownScenario: return "UnknownScenario";
    case Errc::BadParams: return "BadParams";
    case Errc::ConfigError: return "ConfigError";
  }
  return "?";
}

std::string hex_encode(std::string_view raw) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(raw.size() * 2);
  for (unsigned char c : raw) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0x0f]);
  }
  return out;
}

namespace {
int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}
}  // namespace

Expected<Bytes> hex_decode(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    return make_error(Errc::BadHex, "odd length");
  }
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_nibble(hex[i]);
    int lo = hex_nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) {
      return make_error(Errc::BadHex, "non-hex digit");
    }
    out.push_back(static_cast<char>((hi << 4) | lo));
  }
  return out;
}

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len;
    std::uint32_t cp;
    if (c < 0x80) {
      i += 1;
      continue;
    } else if ((c & 0xe0) == 0xc0) {
      len = 2;
      cp = c & 0x1f;
    } else if ((c & 0xf0) == 0xe0) {
      len = 3;
      cp = c & 0x0f;
    } else if ((c & 0xf8) == 0xf0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      unsigned char cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xc0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3f);
    }
    // Reject overlong encodings, surrogates, and out-of-range code points.
    if (len == 2 && cp < 0x80) return false;
    if (len == 3 && cp < 0x800) return false;
    if (len == 4 && cp < 0x10000) return false;
    if (cp >= 0xd800 && cp <= 0xdfff) return false;
    if (cp > 0x10ffff) return false;
    i += len;
  }
  return true;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string ascii_upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

bool ascii_iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char x = a[i];
    char y = b[i];
    if (x >= 'A' && x <= 'Z') x = static_cast<char>(x - 'A' + 'a');
    if (y >= 'A' && y <= 'Z') y = static_cast<char>(y - 'A' + 'a');
    if (x != y) return false;
  }
  return true;
}

Expected<std::int64_t> parse_uint(std::string_view s) {
  if (s.empty()) return make_error(Errc::BadArgs, "empty number");
  if (s.size() > 1 && s[0] == '0') {
    return make_error(Errc::BadArgs, "leading zero");
  }
  std::int64_t value = 0;
  for (char c : s) {
    if (c < '0' || c > '9') {
      return make_error(Errc::BadArgs, "non-digit");
    }
    int digit = c - '0';
    if (value > (std::numeric_limits<std::int64_t>::max() - digit) / 10) {
      return make_error(Errc::BadArgs, "out of range");
    }
    value = value * 10 + digit;
  }
  return value;
}

}  // namespace upnplab
