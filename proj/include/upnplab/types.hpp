// Shared aliases and small byte-level utilities (hex, UTF-8 validation,
// strict integer parsing) used by the wire formats and the security layer.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "upnplab/error.hpp"

namespace upnplab {

// A byte-string: std::string used as a container of arbitrary octets.
using Bytes = std::string;

// Virtual time in simulator ticks.
using Tick = std::int64_t;

// Opaque host identifier within one simulation (e.g. "cam0", "gw").
using HostId = std::string;

// Lower-case hex, two digits per byte.
std::string hex_encode(std::string_view raw);

// Accepts only an even-length string of lower-case hex digits.
// Errors: BadHex.
Expected<Bytes> hex_decode(std::string_view hex);

bool is_valid_utf8(std::string_view s);

std::string ascii_lower(std::string_view s);
std::string ascii_upper(std::string_view s);
bool ascii_iequals(std::string_view a, std::string_view b);

// Strict non-negative decimal: ^(0|[1-9][0-9]*)$ and within int64 range.
// Errors: BadArgs.
Expected<std::int64_t> parse_uint(std::string_view s);

}  // namespace upnplab
