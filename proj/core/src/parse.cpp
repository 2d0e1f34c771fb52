#include "percolor/parse.hpp"

#include <charconv>
#include <cstdio>

#include "percolor/error.hpp"

namespace percolor {
namespace {

int hex_digit(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
  if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
  return -1;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::uint8_t parse_channel(std::string_view field, std::string_view whole) {
  field = trim(field);
  int value = -1;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end || value < 0 || value > 255) {
    throw ParseError("invalid channel '" + std::string(field) + "' in color '" +
                     std::string(whole) + "' (expected 0..255)");
  }
  return static_cast<std::uint8_t>(value);
}

}  // namespace

Srgb8 parse_srgb(std::string_view text) {
  const std::string_view s = trim(text);
  if (!s.empty() && s.front() == '#') {
    if (s.size() != 7) throw ParseError("expected #RRGGBB, got '" + std::string(text) + "'");
    std::uint8_t ch[3];
    for (int i = 0; i < 3; ++i) {
      const int hi = hex_digit(s[1 + 2 * i]);
      const int lo = hex_digit(s[2 + 2 * i]);
      if (hi < 0 || lo < 0) throw ParseError("invalid hex color '" + std::string(text) + "'");
      ch[i] = static_cast<std::uint8_t>(hi * 16 + lo);
    }
    return {ch[0], ch[1], ch[2]};
  }
  const auto c1 = s.find(',');
  const auto c2 = c1 == std::string_view::npos ? c1 : s.find(',', c1 + 1);
  if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
      s.find(',', c2 + 1) != std::string_view::npos) {
    throw ParseError("unrecognized color '" + std::string(text) + "' (use #RRGGBB or r,g,b)");
  }
  return {parse_channel(s.substr(0, c1), text), parse_channel(s.substr(c1 + 1, c2 - c1 - 1), text),
          parse_channel(s.substr(c2 + 1), text)};
}

std::string to_hex(Srgb8 c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02X%02X%02X", c.r, c.g, c.b);
  return buf;
}

}  // namespace percolor
