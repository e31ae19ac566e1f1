#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace simplexviz {

class ColorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// sRGB triple, each channel in [0, 1].
struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

namespace detail {

inline int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline std::uint8_t to_byte(double channel) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(channel, 0.0, 1.0) * 255.0));
}

}  // namespace detail

/// Parses "#RGB" or "#RRGGBB". Short form doubles each nibble.
inline Rgb parse_color(std::string_view text) {
  if (text.empty() || text.front() != '#' || (text.size() != 4 && text.size() != 7)) {
    throw ColorError("malformed color '" + std::string(text) + "'");
  }
  std::array<int, 3> channels{};
  const bool short_form = text.size() == 4;
  for (std::size_t c = 0; c < 3; ++c) {
    int hi = 0;
    int lo = 0;
    if (short_form) {
      hi = lo = detail::hex_digit(text[1 + c]);
    } else {
      hi = detail::hex_digit(text[1 + 2 * c]);
      lo = detail::hex_digit(text[2 + 2 * c]);
    }
    if (hi < 0 || lo < 0) throw ColorError("malformed color '" + std::string(text) + "'");
    channels[c] = hi * 16 + lo;
  }
  return {channels[0] / 255.0, channels[1] / 255.0, channels[2] / 255.0};
}

inline bool is_color(std::string_view text) {
  try {
    parse_color(text);
    return true;
  } catch (const ColorError&) {
    return false;
  }
}

inline std::string to_hex(Rgb color) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", detail::to_byte(color.r), detail::to_byte(color.g),
                detail::to_byte(color.b));
  return buf;
}

/// Scales HSV saturation by factor in [0, 1], keeping hue and value.
inline Rgb desaturate(Rgb color, double factor) {
  factor = std::clamp(factor, 0.0, 1.0);
  const double value = std::max({color.r, color.g, color.b});
  // With v fixed, scaling s is a blend toward the gray of the same value.
  auto mix = [&](double c) { return factor * c + (1.0 - factor) * value; };
  return {mix(color.r), mix(color.g), mix(color.b)};
}

inline double luminance(Rgb color) { return 0.2126 * color.r + 0.7152 * color.g + 0.0722 * color.b; }

}  // namespace simplexviz
