#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "percolor/color.hpp"

namespace percolor {

// ---------------------------------------------------------------------------
// Color-difference formulas
// ---------------------------------------------------------------------------

/// Parametric factors k_L, k_C, k_H. All must be positive.
struct Ciede2000Params {
  double k_l = 1.0;
  double k_c = 1.0;
  double k_h = 1.0;
};

/// Intermediate values of one CIEDE2000 evaluation, exposed for inspection
/// against published step-by-step data.
struct Ciede2000Terms {
  double a1_prime = 0, a2_prime = 0;
  double c1_prime = 0, c2_prime = 0;
  double h1_prime = 0, h2_prime = 0;  // degrees
  double mean_h_prime = 0;            // degrees
  double g = 0, t = 0;
  double dl_prime = 0, dc_prime = 0, dh_prime = 0;
  double s_l = 0, s_c = 0, s_h = 0;
  double r_t = 0;
  double delta_e = 0;
};

/// Lightness:chroma ratio for CMC(l:c). Both must be positive.
struct CmcParams {
  double l = 1.0;
  double c = 1.0;
};

/// CIE 1976 Delta E*ab.
double delta_e76(const Lab& a, const Lab& b);

/// CIE 1994, graphic-arts constants (k_L = 1, K1 = 0.045, K2 = 0.015).
/// `reference` supplies the chroma used in S_C and S_H, so the result is
/// order-dependent.
double delta_e94(const Lab& reference, const Lab& sample);

/// CIEDE2000 in the CIE standard formulation.
double delta_e2000(const Lab& a, const Lab& b, const Ciede2000Params& p = {});
Ciede2000Terms ciede2000_terms(const Lab& a, const Lab& b, const Ciede2000Params& p = {});

/// CMC(l:c) 1984. Order-dependent: weighting functions use `reference`.
double delta_cmc(const Lab& reference, const Lab& sample, const CmcParams& p = {});

/// CMC weighting applied to L*, C*uv, h_uv. Non-standard; not registered by
/// default.
double delta_cmc_luv(const Luv& reference, const Luv& sample, const CmcParams& p = {});

/// Euclidean Delta E*uv.
double delta_e_luv(const Luv& a, const Luv& b);

/// Euclidean distance on XYZ scaled so the reference white has Y = 100.
double euclidean_xyz(const Xyz& a, const Xyz& b);

/// Euclidean distance on raw 8-bit channels, range [0, 255*sqrt(3)].
double euclidean_rgb(Srgb8 a, Srgb8 b);

/// "Redmean" weighted RGB distance.
double weighted_rgb(Srgb8 a, Srgb8 b);

/// Distance between the embeddings (s cos h, s sin h, v|l), channels in
/// [0, 1]. Mixing HSV and HSL through the Color overload throws UsageError.
double cylindrical_distance(const Hsv& a, const Hsv& b);
double cylindrical_distance(const Hsl& a, const Hsl& b);
double cylindrical_distance(const Color& a, const Color& b);

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

enum class MetricKind {
  EuclideanRgb,
  WeightedRgb,
  Ciede2000,
  Cmc,
  CylindricalHsv,
  CylindricalHsl,
  EuclideanXyz,
  EuclideanLuv,
  Cie76,
  Cie94,
};

using MetricParams = std::variant<std::monostate, Ciede2000Params, CmcParams>;

struct MetricDescriptor {
  std::string id;
  MetricKind kind;
  ColorSpace working_space;
  MetricParams params;
  bool symmetric;
};

/// Immutable id -> descriptor table.
class MetricRegistry {
 public:
  explicit MetricRegistry(std::vector<MetricDescriptor> descriptors);

  /// euclid_rgb, w_rgb, lab_cie2000, lab_cmc, hsv_cyl, hsl_cyl, xyz_euclid,
  /// luv_dist, cie76, cie94.
  static const MetricRegistry& defaults();

  /// Throws UsageError naming the id and listing the registered ones.
  const MetricDescriptor& lookup(std::string_view id) const;
  bool contains(std::string_view id) const;

  /// Registration order.
  std::vector<std::string> ids() const;
  std::span<const MetricDescriptor> descriptors() const { return descriptors_; }

  /// The eight columns of the human-judgment comparison, in table order.
  static std::vector<std::string> table_ids();

 private:
  std::vector<MetricDescriptor> descriptors_;
};

/// Converts both colors into `desc.working_space` and applies the formula.
double evaluate(const MetricDescriptor& desc, Srgb8 a, Srgb8 b, const WhitePoint& wp = kD65);

/// Same, on colors already in the working space (no conversion).
double evaluate(const MetricDescriptor& desc, const Color& a, const Color& b);

}  // namespace percolor
