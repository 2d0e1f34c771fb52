#include "percolor/color.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "percolor/error.hpp"

namespace percolor {

std::string_view to_string(ColorSpace space) {
  switch (space) {
    case ColorSpace::Srgb8: return "srgb";
    case ColorSpace::LinearRgb: return "linear";
    case ColorSpace::Xyz: return "xyz";
    case ColorSpace::Lab: return "lab";
    case ColorSpace::Luv: return "luv";
    case ColorSpace::Hsv: return "hsv";
    case ColorSpace::Hsl: return "hsl";
  }
  return "?";
}

ColorSpace parse_color_space(std::string_view token) {
  std::string lower(token);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "rgb") return ColorSpace::Srgb8;
  for (ColorSpace s : kAllSpaces) {
    if (to_string(s) == lower) return s;
  }
  throw UsageError("unknown color space '" + std::string(token) +
                   "' (expected srgb, linear, xyz, lab, luv, hsv or hsl)");
}

}  // namespace percolor
