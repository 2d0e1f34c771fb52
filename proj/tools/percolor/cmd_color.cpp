#include <array>
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "percolor/convert.hpp"
#include "percolor/format.hpp"
#include "percolor/metrics.hpp"
#include "percolor/parse.hpp"

namespace percolor::cli {
namespace {

std::array<double, 3> components(const Color& c) {
  return std::visit(
      [](const auto& v) -> std::array<double, 3> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Srgb8>) return {double(v.r), double(v.g), double(v.b)};
        else if constexpr (std::is_same_v<T, LinearRgb>) return {v.r, v.g, v.b};
        else if constexpr (std::is_same_v<T, Xyz>) return {v.x, v.y, v.z};
        else if constexpr (std::is_same_v<T, Lab>) return {v.l, v.a, v.b};
        else if constexpr (std::is_same_v<T, Luv>) return {v.l, v.u, v.v};
        else if constexpr (std::is_same_v<T, Hsv>) return {v.h, v.s, v.v};
        else return {v.h, v.s, v.l};
      },
      c);
}

}  // namespace

void add_color_commands(CLI::App& app, const GlobalOptions& global, Runner& run) {
  struct ConvertArgs {
    std::string color;
    std::string to;
  };
  auto conv = std::make_shared<ConvertArgs>();
  auto* convert_cmd = app.add_subcommand("convert", "Convert a color to another space");
  convert_cmd->add_option("color", conv->color, "#RRGGBB or r,g,b")->required();
  convert_cmd->add_option("--to", conv->to, "srgb, linear, xyz, lab, luv, hsv, hsl")->required();
  convert_cmd->callback([&global, &run, conv] {
    run = [&global, conv] {
      const WhitePoint wp = parse_white(global.white);
      const Srgb8 in = parse_srgb(conv->color);
      const ColorSpace target = parse_color_space(conv->to);
      const auto out = components(convert(in, target, wp));
      std::cout << format_fixed(out) << '\n';
      return kExitOk;
    };
  });

  struct DistArgs {
    std::string a, b;
    std::string metric;
  };
  auto dist = std::make_shared<DistArgs>();
  auto* dist_cmd = app.add_subcommand("dist", "Distance between two colors under one metric");
  dist_cmd->add_option("a", dist->a, "First (reference) color")->required();
  dist_cmd->add_option("b", dist->b, "Second color")->required();
  dist_cmd->add_option("--metric", dist->metric, "Registered metric id")->required();
  dist_cmd->callback([&global, &run, dist] {
    run = [&global, dist] {
      const WhitePoint wp = parse_white(global.white);
      const auto& desc = MetricRegistry::defaults().lookup(dist->metric);
      const double d = evaluate(desc, parse_srgb(dist->a), parse_srgb(dist->b), wp);
      std::cout << format_fixed(d) << '\n';
      return kExitOk;
    };
  });
}

}  // namespace percolor::cli
