#include <chrono>
#include <cmath>
#include <numbers>

#include "ciede2000_oracle.hpp"
#include "doctest.h"
#include "gen.hpp"
#include "percolor/convert.hpp"
#include "percolor/error.hpp"
#include "percolor/metrics.hpp"
#include "sharma.hpp"

using namespace percolor;
using doctest::Approx;

namespace {

// Independent CMC(l:c) transcription for cross-checking.
double cmc_oracle(const Lab& r, const Lab& s, double l = 1, double c = 1) {
  const double c1 = std::hypot(r.a, r.b), c2 = std::hypot(s.a, s.b);
  double h1 = std::atan2(r.b, r.a) * 180 / std::numbers::pi;
  if (h1 < 0) h1 += 360;
  const double dl = r.l - s.l, dc = c1 - c2;
  const double dh2 = std::max(0.0, (r.a - s.a) * (r.a - s.a) + (r.b - s.b) * (r.b - s.b) - dc * dc);
  const double sl = r.l < 16 ? 0.511 : 0.040975 * r.l / (1 + 0.01765 * r.l);
  const double sc = 0.0638 * c1 / (1 + 0.0131 * c1) + 0.638;
  const double f = std::sqrt(std::pow(c1, 4) / (std::pow(c1, 4) + 1900));
  const double rad = std::numbers::pi / 180;
  const double t = (h1 >= 164 && h1 <= 345) ? 0.56 + std::abs(0.2 * std::cos((h1 + 168) * rad))
                                             : 0.36 + std::abs(0.4 * std::cos((h1 + 35) * rad));
  const double sh = sc * (f * t + 1 - f);
  return std::sqrt(std::pow(dl / (l * sl), 2) + std::pow(dc / (c * sc), 2) + dh2 / (sh * sh));
}

double cie94_oracle(const Lab& r, const Lab& s) {
  const double c1 = std::hypot(r.a, r.b), c2 = std::hypot(s.a, s.b);
  const double dl = r.l - s.l, dc = c1 - c2;
  const double dh2 = std::max(0.0, (r.a - s.a) * (r.a - s.a) + (r.b - s.b) * (r.b - s.b) - dc * dc);
  const double sc = 1 + 0.045 * c1, sh = 1 + 0.015 * c1;
  return std::sqrt(dl * dl + std::pow(dc / sc, 2) + dh2 / (sh * sh));
}

const MetricDescriptor& metric(const char* id) { return MetricRegistry::defaults().lookup(id); }

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("ciede2000 matches the published pairs") {
  for (std::size_t i = 0; i < test::kSharmaPairs.size(); ++i) {
    const auto& c = test::kSharmaPairs[i];
    INFO("pair ", i + 1);
    CHECK(std::abs(delta_e2000(c.a, c.b) - c.expected) < 1e-4);
    CHECK(std::abs(delta_e2000(c.b, c.a) - c.expected) < 1e-4);
    CHECK(ciede2000_terms(c.a, c.b).delta_e == delta_e2000(c.a, c.b));
  }
}

TEST_CASE("ciede2000 agrees with the transcribed oracle on random pairs") {
  test::Gen gen(2000);
  for (int i = 0; i < 20000; ++i) {
    const Lab a = gen.lab(), b = gen.lab();
    CHECK(delta_e2000(a, b) == Approx(test::oracle_de00(a, b)).epsilon(1e-9));
  }
}

TEST_CASE("ciede2000 terms") {
  const auto t = ciede2000_terms({50, 2.5, 0}, {50, 0, -2.5});
  CHECK(t.s_l == Approx(1.0));
  CHECK(t.g >= 0.0);
  CHECK(t.g <= 0.5);
  CHECK(t.h1_prime == Approx(0.0));
  CHECK(t.h2_prime == Approx(270.0));
  CHECK(t.mean_h_prime == Approx(315.0));
  CHECK_THROWS_AS(delta_e2000({50, 0, 0}, {50, 1, 1}, {0, 1, 1}), UsageError);
}

TEST_CASE("cie76 is euclidean in lab") {
  CHECK(delta_e76({50, 0, 0}, {53, 4, 0}) == Approx(5.0));
  CHECK(delta_e76({0, 0, 0}, {0, 0, 0}) == 0.0);
}

TEST_CASE("cie94 uses the reference chroma") {
  CHECK(delta_e94({50, 0, 0}, {50, 30, 0}) == Approx(30.0).epsilon(1e-12));
  CHECK(delta_e94({50, 30, 0}, {50, 0, 0}) == Approx(12.765957).epsilon(1e-6));
  test::Gen gen(94);
  for (int i = 0; i < 2000; ++i) {
    const Lab a = gen.lab(), b = gen.lab();
    CHECK(delta_e94(a, b) == Approx(cie94_oracle(a, b)).epsilon(1e-9));
  }
}

TEST_CASE("cmc asymmetry, dark branch and oracle") {
  CHECK(delta_cmc({50, 20, 0}, {50, 0, 20}) == Approx(24.875172).epsilon(1e-6));
  CHECK(delta_cmc({50, 0, 20}, {50, 20, 0}) == Approx(28.979466).epsilon(1e-6));
  CHECK(delta_cmc({10, 0, 0}, {12, 0, 0}) == Approx(2.0 / 0.511).epsilon(1e-9));
  CHECK(delta_cmc({10, 0, 0}, {12, 0, 0}) == Approx(3.913894).epsilon(1e-6));
  CHECK(delta_cmc({50, 20, 0}, {40, 20, 0}, {2, 1}) == Approx(4.594265).epsilon(1e-6));
  test::Gen gen(1984);
  for (int i = 0; i < 2000; ++i) {
    const Lab a = gen.lab(), b = gen.lab();
    CHECK(delta_cmc(a, b) == Approx(cmc_oracle(a, b)).epsilon(1e-9));
    CHECK(delta_cmc(a, b, {2, 1}) == Approx(cmc_oracle(a, b, 2, 1)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(delta_cmc({50, 0, 0}, {50, 0, 0}, {0, 1}), UsageError);
}

TEST_CASE("rgb distances") {
  CHECK(euclidean_rgb({0, 0, 0}, {255, 255, 255}) == Approx(441.673).epsilon(1e-6));
  CHECK(weighted_rgb({0, 0, 0}, {255, 255, 255}) == Approx(764.8340).epsilon(1e-7));
  // Redmean oracle: r-bar = (r1 + r2) / 2.
  const Srgb8 a{200, 30, 90}, b{10, 60, 250};
  const double rbar = (200 + 10) / 2.0;
  const double expect = std::sqrt((2 + rbar / 256) * 190 * 190 + 4 * 30 * 30 + (2 + (255 - rbar) / 256) * 160 * 160);
  CHECK(weighted_rgb(a, b) == Approx(expect).epsilon(1e-12));
}

TEST_CASE("xyz and luv distances") {
  const double white = 100 * std::sqrt(kD65.xn * kD65.xn + 1 + kD65.zn * kD65.zn);
  CHECK(evaluate(metric("xyz_euclid"), Srgb8{0, 0, 0}, Srgb8{255, 255, 255}) == Approx(white).epsilon(1e-9));
  CHECK(evaluate(metric("luv_dist"), Srgb8{0, 0, 0}, Srgb8{255, 255, 255}) == Approx(100).epsilon(1e-9));
  CHECK(delta_e_luv({50, 3, 0}, {50, 0, 4}) == Approx(5));
}

TEST_CASE("cylindrical distance") {
  CHECK(cylindrical_distance(Hsv{0, 1, 1}, Hsv{180, 1, 1}) == Approx(2.0));
  CHECK(cylindrical_distance(Hsv{0, 1, 1}, Hsv{0, 0, 0}) == Approx(std::sqrt(2.0)));
  CHECK(cylindrical_distance(Hsl{10, 0.5, 0.5}, Hsl{370, 0.5, 0.5}) == Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(cylindrical_distance(Color{Hsv{0, 1, 1}}, Color{Hsl{0, 1, 1}}), UsageError);
  // Global hue rotation leaves the distance unchanged.
  test::Gen gen(360);
  for (int i = 0; i < 5000; ++i) {
    const Hsv a = gen.hsv(), b = gen.hsv();
    const double theta = gen.real(0, 360);
    const Hsv ra{std::fmod(a.h + theta, 360), a.s, a.v}, rb{std::fmod(b.h + theta, 360), b.s, b.v};
    CHECK(cylindrical_distance(ra, rb) == Approx(cylindrical_distance(a, b)).epsilon(1e-12));
    const Hsl c = gen.hsl(), d = gen.hsl();
    const Hsl rc{std::fmod(c.h + theta, 360), c.s, c.l}, rd{std::fmod(d.h + theta, 360), d.s, d.l};
    CHECK(cylindrical_distance(rc, rd) == Approx(cylindrical_distance(c, d)).epsilon(1e-12));
  }
}

TEST_CASE("metric axioms over the registry") {
  const auto& reg = MetricRegistry::defaults();
  test::Gen gen(7);
  for (const auto& d : reg.descriptors()) {
    INFO("metric ", d.id);
    for (int i = 0; i < 2000; ++i) {
      const Srgb8 a = gen.srgb(), b = gen.srgb();
      const double ab = evaluate(d, a, b), ba = evaluate(d, b, a);
      CHECK(ab >= 0.0);
      CHECK(evaluate(d, a, a) == Approx(0.0).epsilon(1e-12));
      if (d.symmetric) CHECK(std::abs(ab - ba) < 1e-12);
    }
  }
  CHECK_FALSE(reg.lookup("cie94").symmetric);
  CHECK_FALSE(reg.lookup("lab_cmc").symmetric);
}

TEST_CASE("cie76 triangle inequality") {
  test::Gen gen(76);
  for (int i = 0; i < 10000; ++i) {
    const Lab a = gen.lab(), b = gen.lab(), c = gen.lab();
    CHECK(delta_e76(a, c) <= delta_e76(a, b) + delta_e76(b, c) + 1e-9);
  }
}

TEST_CASE("registry") {
  const auto& reg = MetricRegistry::defaults();
  const std::vector<std::string> expected{"euclid_rgb", "w_rgb",      "lab_cie2000", "lab_cmc", "hsv_cyl",
                                          "hsl_cyl",    "xyz_euclid", "luv_dist",    "cie76",   "cie94"};
  CHECK(reg.ids() == expected);
  CHECK(MetricRegistry::table_ids() == std::vector<std::string>(expected.begin(), expected.begin() + 8));
  CHECK(reg.contains("lab_cie2000"));
  CHECK_FALSE(reg.contains("nope"));
  try {
    reg.lookup("nope");
    FAIL("lookup should throw");
  } catch (const UsageError& e) {
    const std::string msg = e.what();
    for (const auto& id : expected) CHECK(msg.find(id) != std::string::npos);
  }
  CHECK(evaluate(reg.lookup("euclid_rgb"), Srgb8{0, 0, 0}, Srgb8{255, 255, 255}) == Approx(441.673).epsilon(1e-6));
  CHECK_THROWS_AS(evaluate(reg.lookup("lab_cie2000"), Color{Hsv{}}, Color{Hsv{}}), UsageError);
  CHECK_THROWS_AS(MetricRegistry({reg.lookup("cie76"), reg.lookup("cie76")}), UsageError);
}

}  // TEST_SUITE
