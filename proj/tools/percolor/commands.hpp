#pragma once

#include <functional>
#include <string>

#include "CLI11.hpp"
#include "percolor/color.hpp"

namespace percolor::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Options shared by every subcommand.
struct GlobalOptions {
  std::string white = "d65";
};

/// "d65", "d50" or a chromaticity "x,y". Throws UsageError.
WhitePoint parse_white(const std::string& text);

/// Each registrar adds its subcommand(s) to `app` and sets `run` for the one
/// that was selected. `run` returns the process exit code.
using Runner = std::function<int()>;

void add_color_commands(CLI::App& app, const GlobalOptions& global, Runner& run);
void add_palette_command(CLI::App& app, const GlobalOptions& global, Runner& run);
void add_eval_command(CLI::App& app, const GlobalOptions& global, Runner& run);
void add_survey_commands(CLI::App& app, const GlobalOptions& global, Runner& run);

}  // namespace percolor::cli
