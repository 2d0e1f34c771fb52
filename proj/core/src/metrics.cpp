#include "percolor/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "percolor/convert.hpp"
#include "percolor/error.hpp"

namespace percolor {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPow25To7 = 6103515625.0;

double deg2rad(double d) { return d * kPi / 180.0; }
double rad2deg(double r) { return r * 180.0 / kPi; }

double hue_degrees(double b, double a) {
  if (a == 0.0 && b == 0.0) return 0.0;
  double h = rad2deg(std::atan2(b, a));
  if (h < 0.0) h += 360.0;
  return h;
}

// Squared hue difference from the chroma identity dE^2 = dL^2 + dC^2 + dH^2.
double delta_h_squared(double da, double db, double dc) {
  return std::max(0.0, da * da + db * db - dc * dc);
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw UsageError(std::string(what) + " must be positive");
}

double cmc_on_lch(double l1, double c1, double h1_deg, double dl, double dc, double dh2,
                  const CmcParams& p) {
  require_positive(p.l, "CMC l");
  require_positive(p.c, "CMC c");
  const double s_l = l1 < 16.0 ? 0.511 : 0.040975 * l1 / (1.0 + 0.01765 * l1);
  const double s_c = 0.0638 * c1 / (1.0 + 0.0131 * c1) + 0.638;
  const double t = (h1_deg >= 164.0 && h1_deg <= 345.0)
                       ? 0.56 + std::abs(0.2 * std::cos(deg2rad(h1_deg + 168.0)))
                       : 0.36 + std::abs(0.4 * std::cos(deg2rad(h1_deg + 35.0)));
  const double c4 = c1 * c1 * c1 * c1;
  const double f = std::sqrt(c4 / (c4 + 1900.0));
  const double s_h = s_c * (f * t + 1.0 - f);
  const double tl = dl / (p.l * s_l);
  const double tc = dc / (p.c * s_c);
  return std::sqrt(tl * tl + tc * tc + dh2 / (s_h * s_h));
}

double cylindrical(double h1, double s1, double z1, double h2, double s2, double z2) {
  const double x = s1 * std::cos(deg2rad(h1)) - s2 * std::cos(deg2rad(h2));
  const double y = s1 * std::sin(deg2rad(h1)) - s2 * std::sin(deg2rad(h2));
  const double z = z1 - z2;
  return std::sqrt(x * x + y * y + z * z);
}

}  // namespace

double delta_e76(const Lab& a, const Lab& b) {
  const double dl = b.l - a.l;
  const double da = b.a - a.a;
  const double db = b.b - a.b;
  return std::sqrt(dl * dl + da * da + db * db);
}

double delta_e94(const Lab& reference, const Lab& sample) {
  const double c1 = std::hypot(reference.a, reference.b);
  const double c2 = std::hypot(sample.a, sample.b);
  const double dl = reference.l - sample.l;
  const double dc = c1 - c2;
  const double dh2 = delta_h_squared(reference.a - sample.a, reference.b - sample.b, dc);
  const double s_c = 1.0 + 0.045 * c1;
  const double s_h = 1.0 + 0.015 * c1;
  const double tc = dc / s_c;
  return std::sqrt(dl * dl + tc * tc + dh2 / (s_h * s_h));
}

Ciede2000Terms ciede2000_terms(const Lab& lab1, const Lab& lab2, const Ciede2000Params& p) {
  require_positive(p.k_l, "k_L");
  require_positive(p.k_c, "k_C");
  require_positive(p.k_h, "k_H");
  Ciede2000Terms t;

  // Chroma-dependent rescaling of a*.
  const double c_ab_mean = (std::hypot(lab1.a, lab1.b) + std::hypot(lab2.a, lab2.b)) / 2.0;
  const double c7 = std::pow(c_ab_mean, 7.0);
  t.g = 0.5 * (1.0 - std::sqrt(c7 / (c7 + kPow25To7)));
  t.a1_prime = (1.0 + t.g) * lab1.a;
  t.a2_prime = (1.0 + t.g) * lab2.a;
  t.c1_prime = std::hypot(t.a1_prime, lab1.b);
  t.c2_prime = std::hypot(t.a2_prime, lab2.b);
  t.h1_prime = hue_degrees(lab1.b, t.a1_prime);
  t.h2_prime = hue_degrees(lab2.b, t.a2_prime);

  const double chroma_product = t.c1_prime * t.c2_prime;
  double dh = 0.0;
  if (chroma_product != 0.0) {
    dh = t.h2_prime - t.h1_prime;
    if (dh > 180.0) {
      dh -= 360.0;
    } else if (dh < -180.0) {
      dh += 360.0;
    }
  }
  t.dl_prime = lab2.l - lab1.l;
  t.dc_prime = t.c2_prime - t.c1_prime;
  t.dh_prime = 2.0 * std::sqrt(chroma_product) * std::sin(deg2rad(dh / 2.0));

  // Weighting functions use the pair means of L', C', h'.
  const double l_mean = (lab1.l + lab2.l) / 2.0;
  const double c_mean = (t.c1_prime + t.c2_prime) / 2.0;
  double h_mean = t.h1_prime + t.h2_prime;
  if (chroma_product != 0.0) {
    if (std::abs(t.h1_prime - t.h2_prime) <= 180.0) {
      h_mean /= 2.0;
    } else if (h_mean < 360.0) {
      h_mean = (h_mean + 360.0) / 2.0;
    } else {
      h_mean = (h_mean - 360.0) / 2.0;
    }
  }
  t.mean_h_prime = h_mean;

  t.t = 1.0 - 0.17 * std::cos(deg2rad(h_mean - 30.0)) + 0.24 * std::cos(deg2rad(2.0 * h_mean)) +
        0.32 * std::cos(deg2rad(3.0 * h_mean + 6.0)) - 0.20 * std::cos(deg2rad(4.0 * h_mean - 63.0));
  const double l50 = (l_mean - 50.0) * (l_mean - 50.0);
  t.s_l = 1.0 + 0.015 * l50 / std::sqrt(20.0 + l50);
  t.s_c = 1.0 + 0.045 * c_mean;
  t.s_h = 1.0 + 0.015 * c_mean * t.t;

  const double d_theta = 30.0 * std::exp(-std::pow((h_mean - 275.0) / 25.0, 2.0));
  const double cm7 = std::pow(c_mean, 7.0);
  const double r_c = 2.0 * std::sqrt(cm7 / (cm7 + kPow25To7));
  t.r_t = -std::sin(deg2rad(2.0 * d_theta)) * r_c;

  const double tl = t.dl_prime / (p.k_l * t.s_l);
  const double tc = t.dc_prime / (p.k_c * t.s_c);
  const double th = t.dh_prime / (p.k_h * t.s_h);
  t.delta_e = std::sqrt(std::max(0.0, tl * tl + tc * tc + th * th + t.r_t * tc * th));
  return t;
}

double delta_e2000(const Lab& a, const Lab& b, const Ciede2000Params& p) {
  return ciede2000_terms(a, b, p).delta_e;
}

double delta_cmc(const Lab& reference, const Lab& sample, const CmcParams& p) {
  const double c1 = std::hypot(reference.a, reference.b);
  const double c2 = std::hypot(sample.a, sample.b);
  const double dc = c1 - c2;
  const double dh2 = delta_h_squared(reference.a - sample.a, reference.b - sample.b, dc);
  return cmc_on_lch(reference.l, c1, hue_degrees(reference.b, reference.a),
                    reference.l - sample.l, dc, dh2, p);
}

double delta_cmc_luv(const Luv& reference, const Luv& sample, const CmcParams& p) {
  const double c1 = std::hypot(reference.u, reference.v);
  const double c2 = std::hypot(sample.u, sample.v);
  const double dc = c1 - c2;
  const double dh2 = delta_h_squared(reference.u - sample.u, reference.v - sample.v, dc);
  return cmc_on_lch(reference.l, c1, hue_degrees(reference.v, reference.u),
                    reference.l - sample.l, dc, dh2, p);
}

double delta_e_luv(const Luv& a, const Luv& b) {
  const double dl = a.l - b.l;
  const double du = a.u - b.u;
  const double dv = a.v - b.v;
  return std::sqrt(dl * dl + du * du + dv * dv);
}

double euclidean_xyz(const Xyz& a, const Xyz& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return 100.0 * std::sqrt(dx * dx + dy * dy + dz * dz);
}

double euclidean_rgb(Srgb8 a, Srgb8 b) {
  const double dr = double(a.r) - b.r;
  const double dg = double(a.g) - b.g;
  const double db = double(a.b) - b.b;
  return std::sqrt(dr * dr + dg * dg + db * db);
}

double weighted_rgb(Srgb8 a, Srgb8 b) {
  const double r_mean = (double(a.r) + b.r) / 2.0;
  const double dr = double(a.r) - b.r;
  const double dg = double(a.g) - b.g;
  const double db = double(a.b) - b.b;
  return std::sqrt((2.0 + r_mean / 256.0) * dr * dr + 4.0 * dg * dg +
                   (2.0 + (255.0 - r_mean) / 256.0) * db * db);
}

double cylindrical_distance(const Hsv& a, const Hsv& b) {
  return cylindrical(a.h, a.s, a.v, b.h, b.s, b.v);
}

double cylindrical_distance(const Hsl& a, const Hsl& b) {
  return cylindrical(a.h, a.s, a.l, b.h, b.s, b.l);
}

double cylindrical_distance(const Color& a, const Color& b) {
  if (const auto* ha = std::get_if<Hsv>(&a)) {
    if (const auto* hb = std::get_if<Hsv>(&b)) return cylindrical_distance(*ha, *hb);
  } else if (const auto* la = std::get_if<Hsl>(&a)) {
    if (const auto* lb = std::get_if<Hsl>(&b)) return cylindrical_distance(*la, *lb);
  }
  throw UsageError("cylindrical_distance needs two HSV or two HSL colors, got " +
                   std::string(to_string(tag_of(a))) + " and " + std::string(to_string(tag_of(b))));
}

// ---------------------------------------------------------------------------

MetricRegistry::MetricRegistry(std::vector<MetricDescriptor> descriptors)
    : descriptors_(std::move(descriptors)) {
  std::unordered_set<std::string> seen;
  for (const auto& d : descriptors_) {
    if (!seen.insert(d.id).second) throw UsageError("duplicate metric id '" + d.id + "'");
  }
}

const MetricRegistry& MetricRegistry::defaults() {
  static const MetricRegistry registry({
      {"euclid_rgb", MetricKind::EuclideanRgb, ColorSpace::Srgb8, {}, true},
      {"w_rgb", MetricKind::WeightedRgb, ColorSpace::Srgb8, {}, true},
      {"lab_cie2000", MetricKind::Ciede2000, ColorSpace::Lab, Ciede2000Params{}, true},
      {"lab_cmc", MetricKind::Cmc, ColorSpace::Lab, CmcParams{}, false},
      {"hsv_cyl", MetricKind::CylindricalHsv, ColorSpace::Hsv, {}, true},
      {"hsl_cyl", MetricKind::CylindricalHsl, ColorSpace::Hsl, {}, true},
      {"xyz_euclid", MetricKind::EuclideanXyz, ColorSpace::Xyz, {}, true},
      {"luv_dist", MetricKind::EuclideanLuv, ColorSpace::Luv, {}, true},
      {"cie76", MetricKind::Cie76, ColorSpace::Lab, {}, true},
      {"cie94", MetricKind::Cie94, ColorSpace::Lab, {}, false},
  });
  return registry;
}

std::vector<std::string> MetricRegistry::table_ids() {
  return {"euclid_rgb", "w_rgb", "lab_cie2000", "lab_cmc",
          "hsv_cyl",    "hsl_cyl", "xyz_euclid", "luv_dist"};
}

const MetricDescriptor& MetricRegistry::lookup(std::string_view id) const {
  for (const auto& d : descriptors_) {
    if (d.id == id) return d;
  }
  std::string known;
  for (const auto& d : descriptors_) known += (known.empty() ? "" : ", ") + d.id;
  throw UsageError("unknown metric '" + std::string(id) + "'; available: " + known);
}

bool MetricRegistry::contains(std::string_view id) const {
  return std::any_of(descriptors_.begin(), descriptors_.end(),
                     [&](const MetricDescriptor& d) { return d.id == id; });
}

std::vector<std::string> MetricRegistry::ids() const {
  std::vector<std::string> out;
  out.reserve(descriptors_.size());
  for (const auto& d : descriptors_) out.push_back(d.id);
  return out;
}

double evaluate(const MetricDescriptor& desc, const Color& a, const Color& b) {
  if (tag_of(a) != desc.working_space || tag_of(b) != desc.working_space) {
    throw UsageError("metric '" + desc.id + "' expects " +
                     std::string(to_string(desc.working_space)) + " inputs");
  }
  switch (desc.kind) {
    case MetricKind::EuclideanRgb: return euclidean_rgb(std::get<Srgb8>(a), std::get<Srgb8>(b));
    case MetricKind::WeightedRgb: return weighted_rgb(std::get<Srgb8>(a), std::get<Srgb8>(b));
    case MetricKind::Ciede2000: {
      const auto* p = std::get_if<Ciede2000Params>(&desc.params);
      return delta_e2000(std::get<Lab>(a), std::get<Lab>(b), p ? *p : Ciede2000Params{});
    }
    case MetricKind::Cmc: {
      const auto* p = std::get_if<CmcParams>(&desc.params);
      return delta_cmc(std::get<Lab>(a), std::get<Lab>(b), p ? *p : CmcParams{});
    }
    case MetricKind::CylindricalHsv: return cylindrical_distance(std::get<Hsv>(a), std::get<Hsv>(b));
    case MetricKind::CylindricalHsl: return cylindrical_distance(std::get<Hsl>(a), std::get<Hsl>(b));
    case MetricKind::EuclideanXyz: return euclidean_xyz(std::get<Xyz>(a), std::get<Xyz>(b));
    case MetricKind::EuclideanLuv: return delta_e_luv(std::get<Luv>(a), std::get<Luv>(b));
    case MetricKind::Cie76: return delta_e76(std::get<Lab>(a), std::get<Lab>(b));
    case MetricKind::Cie94: return delta_e94(std::get<Lab>(a), std::get<Lab>(b));
  }
  throw UsageError("unhandled metric kind for '" + desc.id + "'");
}

double evaluate(const MetricDescriptor& desc, Srgb8 a, Srgb8 b, const WhitePoint& wp) {
  return evaluate(desc, convert(a, desc.working_space, wp), convert(b, desc.working_space, wp));
}

}  // namespace percolor
