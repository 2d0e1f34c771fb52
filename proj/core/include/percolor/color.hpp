#pragma once

#include <cstdint>
#include <string_view>
#include <type_traits>
#include <variant>

namespace percolor {

/// Gamma-encoded 8-bit sRGB.
struct Srgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend constexpr bool operator==(const Srgb8&, const Srgb8&) = default;
};

/// Linear-light RGB. Values outside [0, 1] are allowed until encode time.
struct LinearRgb {
  double r = 0, g = 0, b = 0;
  friend constexpr bool operator==(const LinearRgb&, const LinearRgb&) = default;
};

/// CIE 1931 tristimulus, scaled so the reference white has Y = 1.
struct Xyz {
  double x = 0, y = 0, z = 0;
  friend constexpr bool operator==(const Xyz&, const Xyz&) = default;
};

struct Lab {
  double l = 0, a = 0, b = 0;
  friend constexpr bool operator==(const Lab&, const Lab&) = default;
};

struct Luv {
  double l = 0, u = 0, v = 0;
  friend constexpr bool operator==(const Luv&, const Luv&) = default;
};

/// Hue in degrees [0, 360); saturation and value in [0, 1].
struct Hsv {
  double h = 0, s = 0, v = 0;
  friend constexpr bool operator==(const Hsv&, const Hsv&) = default;
};

/// Hue in degrees [0, 360); saturation and lightness in [0, 1].
struct Hsl {
  double h = 0, s = 0, l = 0;
  friend constexpr bool operator==(const Hsl&, const Hsl&) = default;
};

/// Reference white tristimulus. Y is always 1.
struct WhitePoint {
  double xn = 0, yn = 1, zn = 0;

  /// White point from CIE xy chromaticity, normalized to Y = 1.
  static constexpr WhitePoint from_chromaticity(double x, double y) {
    return {x / y, 1.0, (1.0 - x - y) / y};
  }
  friend constexpr bool operator==(const WhitePoint&, const WhitePoint&) = default;
};

/// D65, 2 degree observer.
inline constexpr WhitePoint kD65 = WhitePoint::from_chromaticity(0.3127, 0.3290);

enum class ColorSpace { Srgb8, LinearRgb, Xyz, Lab, Luv, Hsv, Hsl };

inline constexpr ColorSpace kAllSpaces[] = {
    ColorSpace::Srgb8, ColorSpace::LinearRgb, ColorSpace::Xyz, ColorSpace::Lab,
    ColorSpace::Luv,   ColorSpace::Hsv,       ColorSpace::Hsl};

/// A value in exactly one color space. The variant index is the tag.
using Color = std::variant<Srgb8, LinearRgb, Xyz, Lab, Luv, Hsv, Hsl>;

constexpr ColorSpace tag_of(const Color& c) {
  return static_cast<ColorSpace>(c.index());
}

template <typename T>
inline constexpr ColorSpace space_of = [] {
  if constexpr (std::is_same_v<T, Srgb8>) return ColorSpace::Srgb8;
  else if constexpr (std::is_same_v<T, LinearRgb>) return ColorSpace::LinearRgb;
  else if constexpr (std::is_same_v<T, Xyz>) return ColorSpace::Xyz;
  else if constexpr (std::is_same_v<T, Lab>) return ColorSpace::Lab;
  else if constexpr (std::is_same_v<T, Luv>) return ColorSpace::Luv;
  else if constexpr (std::is_same_v<T, Hsv>) return ColorSpace::Hsv;
  else {
    static_assert(std::is_same_v<T, Hsl>, "not a color type");
    return ColorSpace::Hsl;
  }
}();

/// Lowercase token: srgb, linear, xyz, lab, luv, hsv, hsl.
std::string_view to_string(ColorSpace space);

/// Parses a space token (case-insensitive). Also accepts "rgb" for srgb.
/// Throws UsageError on anything else.
ColorSpace parse_color_space(std::string_view token);

}  // namespace percolor
