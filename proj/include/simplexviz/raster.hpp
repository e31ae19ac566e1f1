#pragma once

// Software rasterizer: paints a RenderPlan onto a white canvas with 4x4
// supersampling, then box-filters down. PNG encoding goes through libpng.

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "simplexviz/color.hpp"
#include "simplexviz/projection.hpp"

namespace simplexviz {

inline constexpr int kSupersample = 4;

/// 8-bit RGBA image, rows top to bottom.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgba;

  [[nodiscard]] std::array<std::uint8_t, 4> pixel(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 4;
    return {rgba[i], rgba[i + 1], rgba[i + 2], rgba[i + 3]};
  }
  [[nodiscard]] Rgb color(int x, int y) const {
    const auto p = pixel(x, y);
    return {p[0] / 255.0, p[1] / 255.0, p[2] / 255.0};
  }
  friend bool operator==(const Image&, const Image&) = default;
};

namespace detail {

// 5x7 glyphs, one 5-bit row mask per line, most significant bit on the left.
inline const std::array<std::uint8_t, 7>& glyph(char c) {
  static constexpr std::array<std::array<std::uint8_t, 7>, 10> digits{{
      {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E},
      {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},
      {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F},
      {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},
      {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02},
      {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},
      {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E},
      {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},
      {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E},
      {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},
  }};
  static constexpr std::array<std::uint8_t, 7> space{};
  static constexpr std::array<std::uint8_t, 7> box{0x1F, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1F};
  if (c >= '0' && c <= '9') return digits[static_cast<std::size_t>(c - '0')];
  if (c == ' ') return space;
  return box;
}

struct Rgb8 {
  std::uint8_t r = 255;
  std::uint8_t g = 255;
  std::uint8_t b = 255;
};

inline Rgb8 to_rgb8(Rgb c) { return {to_byte(c.r), to_byte(c.g), to_byte(c.b)}; }

class Canvas {
 public:
  Canvas(int width, int height) : w_(width * kSupersample), h_(height * kSupersample) {
    pixels_.assign(static_cast<std::size_t>(w_) * static_cast<std::size_t>(h_), Rgb8{});
  }

  void draw(const Segment& s) { segment(s.p0, s.p1, s.stroke); }

  void draw(const PolyLine& p) {
    for (std::size_t k = 0; k + 1 < p.points.size(); ++k) segment(p.points[k], p.points[k + 1], p.stroke);
  }

  void draw(const Disc& d) {
    const double cx = d.center.x * kSupersample;
    const double cy = d.center.y * kSupersample;
    const double r = d.radius * kSupersample;
    const Rgb8 c = to_rgb8(d.fill);
    for_box(cx - r, cy - r, cx + r, cy + r, [&](int x, int y, double px, double py) {
      if ((px - cx) * (px - cx) + (py - cy) * (py - cy) <= r * r) put(x, y, c);
    });
  }

  void draw(const Polygon& p) {
    if (p.points.size() < 3) return;
    std::vector<Vec2> pts;
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (const Vec2& v : p.points) {
      pts.push_back({v.x * kSupersample, v.y * kSupersample});
      x0 = std::min(x0, pts.back().x);
      x1 = std::max(x1, pts.back().x);
      y0 = std::min(y0, pts.back().y);
      y1 = std::max(y1, pts.back().y);
    }
    const Rgb8 c = to_rgb8(p.fill);
    const double alpha = std::clamp(p.opacity, 0.0, 1.0);
    for_box(x0, y0, x1, y1, [&](int x, int y, double px, double py) {
      bool inside = false;
      for (std::size_t i = 0, j = pts.size() - 1; i < pts.size(); j = i++) {
        if ((pts[i].y > py) != (pts[j].y > py) &&
            px < (pts[j].x - pts[i].x) * (py - pts[i].y) / (pts[j].y - pts[i].y) + pts[i].x) {
          inside = !inside;
        }
      }
      if (inside) blend(x, y, c, alpha);
    });
  }

  void draw(const Label& l) {
    const double cell = l.font_size / 7.0 * kSupersample;
    const double advance = 6.0 * cell;
    const double total = advance * static_cast<double>(l.text.size()) - cell;
    const double left = l.anchor.x * kSupersample - total / 2.0;
    const double top = l.anchor.y * kSupersample - 3.5 * cell;
    const Rgb8 c = to_rgb8(l.color);
    for (std::size_t k = 0; k < l.text.size(); ++k) {
      const auto& rows = glyph(l.text[k]);
      const double gx = left + advance * static_cast<double>(k);
      for (int row = 0; row < 7; ++row) {
        for (int col = 0; col < 5; ++col) {
          if (!(rows[static_cast<std::size_t>(row)] & (0x10 >> col))) continue;
          const double bx = gx + col * cell;
          const double by = top + row * cell;
          for_box(bx, by, bx + cell, by + cell, [&](int x, int y, double px, double py) {
            if (px >= bx && px < bx + cell && py >= by && py < by + cell) put(x, y, c);
          });
        }
      }
    }
  }

  /// Box-filter the supersampled canvas down to the output resolution.
  [[nodiscard]] Image resolve(int width, int height) const {
    Image img{width, height, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 4)};
    constexpr int samples = kSupersample * kSupersample;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        int r = 0, g = 0, b = 0;
        for (int sy = 0; sy < kSupersample; ++sy) {
          for (int sx = 0; sx < kSupersample; ++sx) {
            const Rgb8& p = at(x * kSupersample + sx, y * kSupersample + sy);
            r += p.r;
            g += p.g;
            b += p.b;
          }
        }
        const std::size_t i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 4;
        img.rgba[i] = static_cast<std::uint8_t>((r + samples / 2) / samples);
        img.rgba[i + 1] = static_cast<std::uint8_t>((g + samples / 2) / samples);
        img.rgba[i + 2] = static_cast<std::uint8_t>((b + samples / 2) / samples);
        img.rgba[i + 3] = 255;
      }
    }
    return img;
  }

 private:
  [[nodiscard]] const Rgb8& at(int x, int y) const {
    return pixels_[static_cast<std::size_t>(y) * static_cast<std::size_t>(w_) + static_cast<std::size_t>(x)];
  }
  void put(int x, int y, Rgb8 c) {
    pixels_[static_cast<std::size_t>(y) * static_cast<std::size_t>(w_) + static_cast<std::size_t>(x)] = c;
  }
  void blend(int x, int y, Rgb8 c, double alpha) {
    Rgb8& dst = pixels_[static_cast<std::size_t>(y) * static_cast<std::size_t>(w_) + static_cast<std::size_t>(x)];
    auto mix = [&](std::uint8_t src, std::uint8_t bg) {
      return static_cast<std::uint8_t>(std::lround(alpha * src + (1.0 - alpha) * bg));
    };
    dst = {mix(c.r, dst.r), mix(c.g, dst.g), mix(c.b, dst.b)};
  }

  // Visits subpixels whose centers may fall in [x0,x1]x[y0,y1].
  template <class Fn>
  void for_box(double x0, double y0, double x1, double y1, Fn&& fn) {
    if (!std::isfinite(x0) || !std::isfinite(y0) || !std::isfinite(x1) || !std::isfinite(y1)) return;
    auto clamp_x = [&](double v) { return static_cast<int>(std::clamp(v, -1.0, static_cast<double>(w_))); };
    auto clamp_y = [&](double v) { return static_cast<int>(std::clamp(v, -1.0, static_cast<double>(h_))); };
    const int ix0 = std::max(0, clamp_x(std::floor(x0 - 0.5)));
    const int iy0 = std::max(0, clamp_y(std::floor(y0 - 0.5)));
    const int ix1 = std::min(w_ - 1, clamp_x(std::ceil(x1 + 0.5)));
    const int iy1 = std::min(h_ - 1, clamp_y(std::ceil(y1 + 0.5)));
    for (int y = iy0; y <= iy1; ++y) {
      for (int x = ix0; x <= ix1; ++x) fn(x, y, x + 0.5, y + 0.5);
    }
  }

  void segment(Vec2 a, Vec2 b, const Stroke& stroke) {
    const double ax = a.x * kSupersample, ay = a.y * kSupersample;
    const double bx = b.x * kSupersample, by = b.y * kSupersample;
    const double half = std::max(stroke.width, 0.25) * kSupersample / 2.0;
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    const double len = std::sqrt(len2);
    double cycle = 0.0;
    for (double d : stroke.dash) cycle += d * kSupersample;
    const Rgb8 c = to_rgb8(stroke.color);
    for_box(std::min(ax, bx) - half, std::min(ay, by) - half, std::max(ax, bx) + half, std::max(ay, by) + half,
            [&](int x, int y, double px, double py) {
              double t = len2 > 0.0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
              t = std::clamp(t, 0.0, 1.0);
              const double qx = ax + t * dx - px, qy = ay + t * dy - py;
              if (qx * qx + qy * qy > half * half) return;
              if (cycle > 0.0 && !dash_on(t * len, cycle, stroke.dash)) return;
              put(x, y, c);
            });
  }

  static bool dash_on(double along, double cycle, const std::vector<double>& dash) {
    double phase = std::fmod(along, cycle);
    for (std::size_t i = 0; i < dash.size(); ++i) {
      phase -= dash[i] * kSupersample;
      if (phase < 0.0) return i % 2 == 0;
    }
    return false;
  }

  int w_;
  int h_;
  std::vector<Rgb8> pixels_;
};

}  // namespace detail

/// Paints the plan in order onto a white canvas.
inline Image emit_raster(const RenderPlan& plan) {
  if (plan.width <= 0 || plan.height <= 0) throw RenderError("raster plan has no area");
  detail::Canvas canvas(plan.width, plan.height);
  for (const RenderPrimitive& p : plan.primitives) {
    std::visit([&](const auto& shape) { canvas.draw(shape); }, p.shape);
  }
  return canvas.resolve(plan.width, plan.height);
}

class PngError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void png_write_bytes(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}
inline void png_flush(png_structp) {}

struct PngReadCursor {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t offset;
};

inline void png_read_bytes(png_structp png, png_bytep data, png_size_t length) {
  auto* cur = static_cast<PngReadCursor*>(png_get_io_ptr(png));
  if (cur->offset + length > cur->size) png_error(png, "truncated PNG");
  std::memcpy(data, cur->data + cur->offset, length);
  cur->offset += length;
}

// libpng reports errors by longjmp; keep C++ objects with destructors out of these frames.
inline bool png_write_rows(png_structp png, png_infop info, const Image& image, std::vector<std::uint8_t>* out) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_set_write_fn(png, out, png_write_bytes, png_flush);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(image.width) * 4;
  for (int y = 0; y < image.height; ++y) {
    png_write_row(png, image.rgba.data() + static_cast<std::size_t>(y) * stride);
  }
  png_write_end(png, nullptr);
  return true;
}

inline bool png_read_header(png_structp png, png_infop info, PngReadCursor* cursor, int* width, int* height) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_set_read_fn(png, cursor, png_read_bytes);
  png_read_info(png, info);
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_gray_to_rgb(png);
  png_set_add_alpha(png, 0xFF, PNG_FILLER_AFTER);
  png_read_update_info(png, info);
  *width = static_cast<int>(png_get_image_width(png, info));
  *height = static_cast<int>(png_get_image_height(png, info));
  return true;
}

inline bool png_read_rows(png_structp png, png_bytepp rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_read_image(png, rows);
  png_read_end(png, nullptr);
  return true;
}

}  // namespace detail

/// 8-bit RGBA, non-interlaced, no ancillary chunks.
inline std::vector<std::uint8_t> encode_png(const Image& image) {
  if (image.width <= 0 || image.height <= 0 ||
      image.rgba.size() != static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height) * 4) {
    throw PngError("image buffer does not match its dimensions");
  }
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw PngError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw PngError("png_create_info_struct failed");
  }
  std::vector<std::uint8_t> out;
  const bool ok = detail::png_write_rows(png, info, image, &out);
  png_destroy_write_struct(&png, &info);
  if (!ok) throw PngError("PNG encoding failed");
  return out;
}

/// Decodes any PNG libpng understands into 8-bit RGBA.
inline Image decode_png(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) throw PngError("not a PNG file");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw PngError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw PngError("png_create_info_struct failed");
  }
  detail::PngReadCursor cursor{bytes.data(), bytes.size(), 0};
  Image img;
  bool ok = detail::png_read_header(png, info, &cursor, &img.width, &img.height);
  if (ok) {
    img.rgba.resize(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height) * 4);
    std::vector<png_bytep> rows(static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y) {
      rows[static_cast<std::size_t>(y)] =
          img.rgba.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width) * 4;
    }
    ok = detail::png_read_rows(png, rows.data());
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (!ok) throw PngError("PNG decoding failed");
  return img;
}

}  // namespace simplexviz
