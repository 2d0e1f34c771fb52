// percolor: color conversions, color-difference metrics, palette extraction,
// evaluation against human judgments, and the survey service.

#include <iostream>

#include "commands.hpp"
#include "percolor/error.hpp"

namespace percolor::cli {

WhitePoint parse_white(const std::string& text) {
  if (text == "d65" || text == "D65") return kD65;
  if (text == "d50" || text == "D50") return WhitePoint::from_chromaticity(0.3457, 0.3585);
  const auto comma = text.find(',');
  if (comma != std::string::npos) {
    try {
      const double x = std::stod(text.substr(0, comma));
      const double y = std::stod(text.substr(comma + 1));
      if (x > 0 && y > 0 && x + y < 1) return WhitePoint::from_chromaticity(x, y);
    } catch (const std::exception&) {
    }
  }
  throw UsageError("invalid white point '" + text + "' (use d65, d50 or x,y)");
}

}  // namespace percolor::cli

int main(int argc, char** argv) {
  using namespace percolor::cli;
  CLI::App app{"Perceptual color-difference toolkit"};
  app.require_subcommand(1);
  GlobalOptions global;
  app.add_option("--white", global.white, "Reference white: d65, d50 or x,y chromaticity")
      ->capture_default_str();

  Runner run;
  add_color_commands(app, global, run);
  add_palette_command(app, global, run);
  add_eval_command(app, global, run);
  add_survey_commands(app, global, run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return run ? run() : kExitUsage;
  } catch (const percolor::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const percolor::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
