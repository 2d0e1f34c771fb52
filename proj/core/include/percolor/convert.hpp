#pragma once

#include <array>

#include "percolor/color.hpp"

namespace percolor {

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// sRGB-primaries linear RGB -> XYZ matrix for the given white. Rows sum to
/// (xn, yn, zn).
Matrix3 rgb_to_xyz_matrix(const WhitePoint& wp = kD65);
Matrix3 xyz_to_rgb_matrix(const WhitePoint& wp = kD65);

LinearRgb srgb_to_linear(Srgb8 c);
/// Inverse companding, clamped to [0, 1] and rounded to the nearest code.
Srgb8 linear_to_srgb(const LinearRgb& c);

/// Single-channel sRGB transfer functions on [0, 1].
double srgb_decode(double encoded);
double srgb_encode(double linear);

Xyz rgb_to_xyz(const LinearRgb& c, const WhitePoint& wp = kD65);
LinearRgb xyz_to_rgb(const Xyz& c, const WhitePoint& wp = kD65);

/// The two-branch CIELAB companding function and its inverse.
double lab_f(double t);
double lab_f_inverse(double f);

Lab xyz_to_lab(const Xyz& c, const WhitePoint& wp = kD65);
Xyz lab_to_xyz(const Lab& c, const WhitePoint& wp = kD65);

/// Throws DomainError when x + 15y + 3z == 0 for a non-black input.
Luv xyz_to_luv(const Xyz& c, const WhitePoint& wp = kD65);
Xyz luv_to_xyz(const Luv& c, const WhitePoint& wp = kD65);

Hsv rgb_to_hsv(Srgb8 c);
Hsl rgb_to_hsl(Srgb8 c);
/// Inverses take real-valued HSV/HSL and round to the nearest 8-bit code.
Srgb8 hsv_to_rgb(const Hsv& c);
Srgb8 hsl_to_rgb(const Hsl& c);

/// Routes any tagged color to any other space through linear RGB and XYZ.
/// convert(c, tag_of(c)) returns c unchanged.
Color convert(const Color& c, ColorSpace target, const WhitePoint& wp = kD65);

/// convert() followed by unwrapping the expected alternative.
template <typename T>
T convert_to(const Color& c, const WhitePoint& wp = kD65) {
  return std::get<T>(convert(c, space_of<T>, wp));
}

}  // namespace percolor
