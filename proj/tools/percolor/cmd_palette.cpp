#include <iostream>
#include <memory>

#include "commands.hpp"
#include "percolor/error.hpp"
#include "percolor/palette.hpp"

namespace percolor::cli {
namespace {

// The models compared side by side when --space all is given.
constexpr ColorSpace kPaletteModels[] = {ColorSpace::Srgb8, ColorSpace::Hsv, ColorSpace::Hsl,
                                         ColorSpace::Xyz,   ColorSpace::Lab, ColorSpace::Luv};

struct PaletteArgs {
  std::string image;
  std::string space = "lab";
  int k = 6;
  std::uint64_t seed = 0;
  int max_iters = 100;
  double tol = 1e-6;
  int restarts = 8;
  std::string init = "kmeans++";
  std::string sheet;
  int swatch_size = 64;
};

int run_palette(const GlobalOptions& global, const PaletteArgs& args) {
  const WhitePoint wp = parse_white(global.white);
  if (args.k < 1) throw UsageError("--k must be at least 1");
  if (args.max_iters < 1) throw UsageError("--max-iters must be at least 1");
  if (args.restarts < 1) throw UsageError("--restarts must be at least 1");
  if (!(args.tol >= 0)) throw UsageError("--tol must be non-negative");
  if (args.swatch_size < 1) throw UsageError("--swatch-size must be positive");

  KmeansConfig cfg;
  cfg.k = args.k;
  cfg.seed = args.seed;
  cfg.max_iters = args.max_iters;
  cfg.tol = args.tol;
  cfg.restarts = args.restarts;
  if (args.init == "kmeans++") cfg.init = KmeansInit::PlusPlus;
  else if (args.init == "random") cfg.init = KmeansInit::Random;
  else throw UsageError("--init must be kmeans++ or random");

  std::vector<ColorSpace> spaces;
  if (args.space == "all") spaces.assign(std::begin(kPaletteModels), std::end(kPaletteModels));
  else spaces.push_back(parse_color_space(args.space));

  const RasterImage image = read_image(args.image);
  std::vector<PaletteResult> results;
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    results.push_back(extract_palette(image, spaces[i], cfg, wp));
    if (i > 0) std::cout << '\n';
    std::cout << format_palette_report(results.back());
  }
  if (!args.sheet.empty()) write_swatch_sheet(args.sheet, results, args.swatch_size);
  return kExitOk;
}

}  // namespace

void add_palette_command(CLI::App& app, const GlobalOptions& global, Runner& run) {
  auto args = std::make_shared<PaletteArgs>();
  auto* cmd = app.add_subcommand("palette", "Extract a dominant palette with k-means");
  cmd->add_option("image", args->image, "PNG or JPEG image")->required();
  cmd->add_option("--space", args->space, "Working space, or 'all' for the six models")
      ->capture_default_str();
  cmd->add_option("--k", args->k, "Palette size")->capture_default_str();
  cmd->add_option("--seed", args->seed, "Seed for centroid initialization")->capture_default_str();
  cmd->add_option("--max-iters", args->max_iters, "Lloyd iteration cap")->capture_default_str();
  cmd->add_option("--tol", args->tol, "Relative objective tolerance")->capture_default_str();
  cmd->add_option("--restarts", args->restarts, "Seeded restarts; best objective wins")
      ->capture_default_str();
  cmd->add_option("--init", args->init, "kmeans++ or random")->capture_default_str();
  cmd->add_option("--sheet", args->sheet, "Write a swatch sheet PNG");
  cmd->add_option("--swatch-size", args->swatch_size, "Swatch edge in pixels")->capture_default_str();
  cmd->callback([&global, &run, args] { run = [&global, args] { return run_palette(global, *args); }; });
}

}  // namespace percolor::cli
