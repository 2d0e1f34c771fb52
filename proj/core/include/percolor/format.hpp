#pragma once

#include <span>
#include <string>

namespace percolor {

/// Fixed-point text with `decimals` places. Values that round to zero print
/// without a sign, so -1e-15 becomes "0.0000".
std::string format_fixed(double value, int decimals = 4);

/// Space-separated format_fixed over a sequence.
std::string format_fixed(std::span<const double> values, int decimals = 4);

}  // namespace percolor
