#pragma once

#include <string>
#include <string_view>

#include "percolor/color.hpp"

namespace percolor {

/// Accepts `#RRGGBB` (case-insensitive) or a decimal triple `r,g,b` with
/// each channel in [0, 255]. Throws ParseError otherwise.
Srgb8 parse_srgb(std::string_view text);

/// `#RRGGBB`, uppercase.
std::string to_hex(Srgb8 c);

}  // namespace percolor
