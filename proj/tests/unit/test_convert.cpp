#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "percolor/convert.hpp"
#include "percolor/error.hpp"
#include "percolor/format.hpp"
#include "percolor/parse.hpp"

using namespace percolor;
using doctest::Approx;

namespace {

// Independent sRGB decode, straight from the piecewise definition.
double decode_oracle(int v) {
  const double c = v / 255.0;
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

int channel_diff(Srgb8 a, Srgb8 b) {
  return std::max({std::abs(a.r - b.r), std::abs(a.g - b.g), std::abs(a.b - b.b)});
}

}  // namespace

TEST_SUITE("convert") {

TEST_CASE("d65 white from chromaticity") {
  CHECK(kD65.xn == Approx(0.950456).epsilon(1e-6));
  CHECK(kD65.yn == 1.0);
  CHECK(kD65.zn == Approx(1.089058).epsilon(1e-6));
}

TEST_CASE("srgb transfer matches the piecewise definition") {
  CHECK(srgb_decode(118 / 255.0) == Approx(0.181164).epsilon(1e-6));
  for (int v = 0; v < 256; ++v) {
    CHECK(srgb_decode(v / 255.0) == Approx(decode_oracle(v)).epsilon(1e-12));
    CHECK(std::lround(srgb_encode(decode_oracle(v)) * 255.0) == v);
  }
  CHECK(srgb_encode(-0.5) == 0.0);
  CHECK(srgb_encode(1.5) == 1.0);
}

TEST_CASE("rgb to xyz matrix") {
  const Matrix3 m = rgb_to_xyz_matrix();
  // Rows sum to the white point: linear (1,1,1) is the reference white.
  const Xyz w = rgb_to_xyz({1, 1, 1});
  CHECK(w.x == Approx(0.9505).epsilon(1e-4));
  CHECK(w.y == Approx(1.0).epsilon(1e-12));
  CHECK(w.z == Approx(1.0890).epsilon(1e-4));
  // Commonly tabulated coefficients, 4 decimals.
  CHECK(m[0][0] == Approx(0.4124).epsilon(1e-3));
  CHECK(m[0][1] == Approx(0.3576).epsilon(1e-3));
  CHECK(m[0][2] == Approx(0.1805).epsilon(1e-3));
  CHECK(m[1][0] == Approx(0.2126).epsilon(1e-3));
  CHECK(m[1][1] == Approx(0.7152).epsilon(1e-3));
  CHECK(m[1][2] == Approx(0.0722).epsilon(1e-3));
  const Matrix3 inv = xyz_to_rgb_matrix();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += m[i][k] * inv[k][j];
      CHECK(s == Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("lab anchors") {
  const Lab white = convert_to<Lab>(Srgb8{255, 255, 255});
  CHECK(white.l == Approx(100).epsilon(1e-9));
  CHECK(std::abs(white.a) < 1e-6);
  CHECK(std::abs(white.b) < 1e-6);
  const Lab black = convert_to<Lab>(Srgb8{0, 0, 0});
  CHECK(std::abs(black.l) < 1e-9);
  CHECK(std::abs(black.a) < 1e-9);
  CHECK(std::abs(black.b) < 1e-9);
  const Lab red = convert_to<Lab>(Srgb8{255, 0, 0});
  CHECK(red.l == Approx(53.2408).epsilon(1e-4));
  CHECK(red.a == Approx(80.0925).epsilon(1e-4));
  CHECK(red.b == Approx(67.2032).epsilon(1e-4));
}

TEST_CASE("lab f is continuous at the branch point") {
  const double eps = std::pow(6.0 / 29.0, 3);
  CHECK(lab_f(eps) == Approx(6.0 / 29.0).epsilon(1e-12));
  CHECK(lab_f(std::nextafter(eps, 0.0)) == Approx(lab_f(std::nextafter(eps, 1.0))).epsilon(1e-12));
  for (double t : {0.0, 1e-4, eps, 0.1, 0.5, 1.0}) CHECK(lab_f_inverse(lab_f(t)) == Approx(t).epsilon(1e-12));
}

TEST_CASE("luv anchors and degenerate input") {
  const Luv white = convert_to<Luv>(Srgb8{255, 255, 255});
  CHECK(white.l == Approx(100).epsilon(1e-9));
  CHECK(std::abs(white.u) < 1e-6);
  CHECK(std::abs(white.v) < 1e-6);
  const Luv black = xyz_to_luv({0, 0, 0});
  CHECK(black == Luv{0, 0, 0});
  CHECK_THROWS_AS(xyz_to_luv({1.0, 0.0, -1.0 / 3.0}), DomainError);
}

TEST_CASE("hsv and hsl anchors") {
  const Hsv red = rgb_to_hsv({255, 0, 0});
  CHECK(red == Hsv{0, 1, 1});
  const Hsl blue = rgb_to_hsl({0, 0, 255});
  CHECK(blue.h == Approx(240));
  CHECK(blue.s == Approx(1));
  CHECK(blue.l == Approx(0.5));
  // Achromatic colors carry hue 0.
  for (int v : {0, 77, 128, 255}) {
    const auto g = static_cast<std::uint8_t>(v);
    CHECK(rgb_to_hsv({g, g, g}).h == 0.0);
    CHECK(rgb_to_hsv({g, g, g}).s == 0.0);
    CHECK(rgb_to_hsl({g, g, g}).h == 0.0);
    CHECK(rgb_to_hsl({g, g, g}).s == 0.0);
  }
  // Just below red on the wheel wraps to [0, 360).
  const Hsv magenta_red = rgb_to_hsv({255, 0, 1});
  CHECK(magenta_red.h >= 359.0);
  CHECK(magenta_red.h < 360.0);
}

TEST_CASE("round trips through every space") {
  test::Gen gen(11);
  for (int i = 0; i < 5000; ++i) {
    const Srgb8 c = gen.srgb();
    for (ColorSpace s : kAllSpaces) {
      const Srgb8 back = convert_to<Srgb8>(convert(c, s));
      INFO("space ", to_string(s), " color ", to_hex(c));
      CHECK(channel_diff(back, c) <= 1);
    }
  }
}

TEST_CASE("neutral axis stays neutral") {
  for (int v = 0; v < 256; v += 5) {
    const auto g = static_cast<std::uint8_t>(v);
    const Lab lab = convert_to<Lab>(Srgb8{g, g, g});
    CHECK(std::abs(lab.a) < 1e-9);
    CHECK(std::abs(lab.b) < 1e-9);
    const Luv luv = convert_to<Luv>(Srgb8{g, g, g});
    CHECK(std::abs(luv.u) < 1e-9);
    CHECK(std::abs(luv.v) < 1e-9);
  }
}

TEST_CASE("lightness is monotone along the gray ramp") {
  double prev = -1;
  for (int v = 0; v < 256; ++v) {
    const auto g = static_cast<std::uint8_t>(v);
    const double l = convert_to<Lab>(Srgb8{g, g, g}).l;
    CHECK(l > prev);
    prev = l;
  }
}

TEST_CASE("convert to own space is identity") {
  const Color lab = Lab{50, 10, -20};
  CHECK(std::get<Lab>(convert(lab, ColorSpace::Lab)) == Lab{50, 10, -20});
}

TEST_CASE("white point is honored") {
  const WhitePoint d50 = WhitePoint::from_chromaticity(0.3457, 0.3585);
  const Lab l = xyz_to_lab({d50.xn, d50.yn, d50.zn}, d50);
  CHECK(l.l == Approx(100));
  CHECK(std::abs(l.a) < 1e-9);
  CHECK(std::abs(l.b) < 1e-9);
}

}  // TEST_SUITE

TEST_SUITE("parse") {

TEST_CASE("hex and triplets") {
  CHECK(parse_srgb("#FF8000") == Srgb8{255, 128, 0});
  CHECK(parse_srgb("#ff8000") == Srgb8{255, 128, 0});
  CHECK(parse_srgb("255,128,0") == Srgb8{255, 128, 0});
  CHECK(to_hex({255, 128, 0}) == "#FF8000");
  for (const char* bad : {"nothex", "#FFF", "#GG0000", "256,0,0", "1,2", "", "#FF80001"}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_srgb(bad), ParseError);
  }
}

TEST_CASE("space tokens") {
  CHECK(parse_color_space("LAB") == ColorSpace::Lab);
  CHECK(parse_color_space("rgb") == ColorSpace::Srgb8);
  for (ColorSpace s : kAllSpaces) CHECK(parse_color_space(to_string(s)) == s);
  CHECK_THROWS_AS(parse_color_space("cmyk"), UsageError);
}

TEST_CASE("fixed formatting") {
  CHECK(format_fixed(441.67295593) == "441.6730");
  CHECK(format_fixed(-0.0) == "0.0000");
  CHECK(format_fixed(-0.00001) == "0.0000");
  CHECK(format_fixed(-1.5) == "-1.5000");
  const double v[] = {100, 0, -0.0};
  CHECK(format_fixed(v) == "100.0000 0.0000 0.0000");
}

}  // TEST_SUITE
