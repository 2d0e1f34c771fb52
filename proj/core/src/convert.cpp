#include "percolor/convert.hpp"

#include <algorithm>
#include <cmath>

#include "percolor/error.hpp"

namespace percolor {
namespace {

// IEC 61966-2-1 primaries (CIE xy).
constexpr double kPrimaries[3][2] = {{0.64, 0.33}, {0.30, 0.60}, {0.15, 0.06}};

constexpr double kEpsilon = 216.0 / 24389.0;  // (6/29)^3
constexpr double kDelta = 6.0 / 29.0;

Matrix3 invert(const Matrix3& m) {
  const double c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  const double c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  const double c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  const double det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
  if (det == 0.0) throw DomainError("singular 3x3 matrix");
  const double inv = 1.0 / det;
  Matrix3 r{};
  r[0][0] = c00 * inv;
  r[1][0] = c01 * inv;
  r[2][0] = c02 * inv;
  r[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv;
  r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv;
  r[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv;
  r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv;
  r[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv;
  r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv;
  return r;
}

std::array<double, 3> apply(const Matrix3& m, double a, double b, double c) {
  return {m[0][0] * a + m[0][1] * b + m[0][2] * c,
          m[1][0] * a + m[1][1] * b + m[1][2] * c,
          m[2][0] * a + m[2][1] * b + m[2][2] * c};
}

// Gamma-encoded RGB with real channels in [0, 1]; the common currency of the
// RGB-family spaces (Srgb8, HSV, HSL).
struct EncodedRgb {
  double r, g, b;
};

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

Srgb8 quantize(const EncodedRgb& e) { return {quantize(e.r), quantize(e.g), quantize(e.b)}; }

double wrap_degrees(double h) {
  h = std::fmod(h, 360.0);
  if (h < 0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  return h;
}

// Hue in degrees from the max/min channels of a normalized RGB triple.
double hexcone_hue(const EncodedRgb& c, double max, double delta) {
  if (delta == 0.0) return 0.0;
  double h;
  if (max == c.r) {
    h = (c.g - c.b) / delta;
  } else if (max == c.g) {
    h = (c.b - c.r) / delta + 2.0;
  } else {
    h = (c.r - c.g) / delta + 4.0;
  }
  return wrap_degrees(60.0 * h);
}

Hsv encoded_to_hsv(const EncodedRgb& c) {
  const double max = std::max({c.r, c.g, c.b});
  const double min = std::min({c.r, c.g, c.b});
  const double delta = max - min;
  const double s = max == 0.0 ? 0.0 : delta / max;
  return {hexcone_hue(c, max, delta), s, max};
}

Hsl encoded_to_hsl(const EncodedRgb& c) {
  const double max = std::max({c.r, c.g, c.b});
  const double min = std::min({c.r, c.g, c.b});
  const double delta = max - min;
  const double l = (max + min) / 2.0;
  double s = 0.0;
  if (delta != 0.0) s = delta / (1.0 - std::abs(2.0 * l - 1.0));
  return {hexcone_hue(c, max, delta), std::clamp(s, 0.0, 1.0), l};
}

// Shared tail of the HSV/HSL inverses: chroma, hue sector and the offset m.
EncodedRgb from_chroma(double h, double chroma, double m) {
  const double hp = wrap_degrees(h) / 60.0;
  const double x = chroma * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = chroma; g = x; break;
    case 1: r = x; g = chroma; break;
    case 2: g = chroma; b = x; break;
    case 3: g = x; b = chroma; break;
    case 4: r = x; b = chroma; break;
    default: r = chroma; b = x; break;
  }
  return {r + m, g + m, b + m};
}

EncodedRgb hsv_to_encoded(const Hsv& c) {
  const double chroma = c.v * c.s;
  return from_chroma(c.h, chroma, c.v - chroma);
}

EncodedRgb hsl_to_encoded(const Hsl& c) {
  const double chroma = (1.0 - std::abs(2.0 * c.l - 1.0)) * c.s;
  return from_chroma(c.h, chroma, c.l - chroma / 2.0);
}

EncodedRgb encode(const LinearRgb& c) {
  return {srgb_encode(c.r), srgb_encode(c.g), srgb_encode(c.b)};
}

LinearRgb decode(const EncodedRgb& c) {
  return {srgb_decode(c.r), srgb_decode(c.g), srgb_decode(c.b)};
}

bool is_rgb_family(ColorSpace s) {
  return s == ColorSpace::Srgb8 || s == ColorSpace::LinearRgb || s == ColorSpace::Hsv ||
         s == ColorSpace::Hsl;
}

EncodedRgb to_encoded(const Color& c) {
  switch (tag_of(c)) {
    case ColorSpace::Srgb8: {
      const auto& v = std::get<Srgb8>(c);
      return {v.r / 255.0, v.g / 255.0, v.b / 255.0};
    }
    case ColorSpace::LinearRgb: return encode(std::get<LinearRgb>(c));
    case ColorSpace::Hsv: return hsv_to_encoded(std::get<Hsv>(c));
    case ColorSpace::Hsl: return hsl_to_encoded(std::get<Hsl>(c));
    default: break;
  }
  throw UsageError("to_encoded: not an RGB-family color");
}

LinearRgb to_linear(const Color& c) {
  if (tag_of(c) == ColorSpace::LinearRgb) return std::get<LinearRgb>(c);
  return decode(to_encoded(c));
}

Color from_encoded(const EncodedRgb& e, ColorSpace target) {
  switch (target) {
    case ColorSpace::Srgb8: return quantize(e);
    case ColorSpace::LinearRgb: return decode(e);
    case ColorSpace::Hsv: return encoded_to_hsv(e);
    case ColorSpace::Hsl: return encoded_to_hsl(e);
    default: break;
  }
  throw UsageError("from_encoded: not an RGB-family target");
}

Color from_linear(const LinearRgb& lin, ColorSpace target) {
  if (target == ColorSpace::LinearRgb) return lin;
  return from_encoded(encode(lin), target);
}

Xyz to_xyz(const Color& c, const WhitePoint& wp) {
  switch (tag_of(c)) {
    case ColorSpace::Xyz: return std::get<Xyz>(c);
    case ColorSpace::Lab: return lab_to_xyz(std::get<Lab>(c), wp);
    case ColorSpace::Luv: return luv_to_xyz(std::get<Luv>(c), wp);
    default: return rgb_to_xyz(to_linear(c), wp);
  }
}

Color from_xyz(const Xyz& xyz, ColorSpace target, const WhitePoint& wp) {
  switch (target) {
    case ColorSpace::Xyz: return xyz;
    case ColorSpace::Lab: return xyz_to_lab(xyz, wp);
    case ColorSpace::Luv: return xyz_to_luv(xyz, wp);
    default: return from_linear(xyz_to_rgb(xyz, wp), target);
  }
}

// u'v' chromaticity; the caller guarantees a nonzero denominator.
std::array<double, 2> uv_prime(double x, double y, double z) {
  const double d = x + 15.0 * y + 3.0 * z;
  return {4.0 * x / d, 9.0 * y / d};
}

}  // namespace

Matrix3 rgb_to_xyz_matrix(const WhitePoint& wp) {
  Matrix3 p{};
  for (int col = 0; col < 3; ++col) {
    const double x = kPrimaries[col][0];
    const double y = kPrimaries[col][1];
    p[0][col] = x / y;
    p[1][col] = 1.0;
    p[2][col] = (1.0 - x - y) / y;
  }
  const auto scale = apply(invert(p), wp.xn, wp.yn, wp.zn);
  for (auto& row : p) {
    for (int col = 0; col < 3; ++col) row[col] *= scale[col];
  }
  return p;
}

Matrix3 xyz_to_rgb_matrix(const WhitePoint& wp) { return invert(rgb_to_xyz_matrix(wp)); }

double srgb_decode(double v) {
  if (v <= 0.04045) return v / 12.92;
  return std::pow((v + 0.055) / 1.055, 2.4);
}

double srgb_encode(double v) {
  v = std::clamp(v, 0.0, 1.0);
  if (v >= 1.0) return 1.0;
  if (v <= 0.0031308) return 12.92 * v;
  return 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

LinearRgb srgb_to_linear(Srgb8 c) {
  return {srgb_decode(c.r / 255.0), srgb_decode(c.g / 255.0), srgb_decode(c.b / 255.0)};
}

Srgb8 linear_to_srgb(const LinearRgb& c) { return quantize(encode(c)); }

Xyz rgb_to_xyz(const LinearRgb& c, const WhitePoint& wp) {
  const auto v = apply(rgb_to_xyz_matrix(wp), c.r, c.g, c.b);
  return {v[0], v[1], v[2]};
}

LinearRgb xyz_to_rgb(const Xyz& c, const WhitePoint& wp) {
  const auto v = apply(xyz_to_rgb_matrix(wp), c.x, c.y, c.z);
  return {v[0], v[1], v[2]};
}

double lab_f(double t) {
  if (t > kEpsilon) return std::cbrt(t);
  return t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

double lab_f_inverse(double f) {
  if (f > kDelta) return f * f * f;
  return 3.0 * kDelta * kDelta * (f - 4.0 / 29.0);
}

Lab xyz_to_lab(const Xyz& c, const WhitePoint& wp) {
  const double fx = lab_f(c.x / wp.xn);
  const double fy = lab_f(c.y / wp.yn);
  const double fz = lab_f(c.z / wp.zn);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Xyz lab_to_xyz(const Lab& c, const WhitePoint& wp) {
  const double fy = (c.l + 16.0) / 116.0;
  const double fx = fy + c.a / 500.0;
  const double fz = fy - c.b / 200.0;
  return {wp.xn * lab_f_inverse(fx), wp.yn * lab_f_inverse(fy), wp.zn * lab_f_inverse(fz)};
}

Luv xyz_to_luv(const Xyz& c, const WhitePoint& wp) {
  const double denom = c.x + 15.0 * c.y + 3.0 * c.z;
  if (denom == 0.0) {
    if (c.x == 0.0 && c.y == 0.0 && c.z == 0.0) return {0.0, 0.0, 0.0};
    throw DomainError("xyz_to_luv: x + 15y + 3z is zero for a non-black color");
  }
  const double l = 116.0 * lab_f(c.y / wp.yn) - 16.0;
  const auto [u, v] = uv_prime(c.x, c.y, c.z);
  const auto [un, vn] = uv_prime(wp.xn, wp.yn, wp.zn);
  return {l, 13.0 * l * (u - un), 13.0 * l * (v - vn)};
}

Xyz luv_to_xyz(const Luv& c, const WhitePoint& wp) {
  if (c.l == 0.0) return {0.0, 0.0, 0.0};
  const auto [un, vn] = uv_prime(wp.xn, wp.yn, wp.zn);
  const double u = c.u / (13.0 * c.l) + un;
  const double v = c.v / (13.0 * c.l) + vn;
  if (v == 0.0) throw DomainError("luv_to_xyz: v' is zero");
  const double y = wp.yn * lab_f_inverse((c.l + 16.0) / 116.0);
  return {y * 9.0 * u / (4.0 * v), y, y * (12.0 - 3.0 * u - 20.0 * v) / (4.0 * v)};
}

Hsv rgb_to_hsv(Srgb8 c) { return encoded_to_hsv(to_encoded(c)); }
Hsl rgb_to_hsl(Srgb8 c) { return encoded_to_hsl(to_encoded(c)); }
Srgb8 hsv_to_rgb(const Hsv& c) { return quantize(hsv_to_encoded(c)); }
Srgb8 hsl_to_rgb(const Hsl& c) { return quantize(hsl_to_encoded(c)); }

Color convert(const Color& c, ColorSpace target, const WhitePoint& wp) {
  const ColorSpace source = tag_of(c);
  if (source == target) return c;
  const bool rgb_in = is_rgb_family(source);
  const bool rgb_out = is_rgb_family(target);
  if (rgb_in && rgb_out) {
    if (target == ColorSpace::LinearRgb) return to_linear(c);
    return from_encoded(to_encoded(c), target);
  }
  return from_xyz(to_xyz(c, wp), target, wp);
}

}  // namespace percolor
