#pragma once

// Command implementations behind the simplexviz executable. Each returns the
// process exit code: 0 success, 1 input/parse/evaluation error, 2 I/O error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "simplexviz/csv.hpp"
#include "simplexviz/geometry.hpp"
#include "simplexviz/lns/evaluator.hpp"
#include "simplexviz/lns/lexer.hpp"
#include "simplexviz/lns/parser.hpp"
#include "simplexviz/lns/printer.hpp"
#include "simplexviz/projection.hpp"
#include "simplexviz/raster.hpp"
#include "simplexviz/scene.hpp"
#include "simplexviz/svg.hpp"

namespace simplexviz::cli {

enum class Command { Render, Validate, Inspect, FromCsv };
enum class Format { Svg, Png };

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitIo = 2;

struct RunConfig {
  Command command = Command::Render;
  std::filesystem::path input;
  std::optional<std::filesystem::path> output;
  int width = 800;
  int height = 600;
  std::optional<Format> format;
  std::optional<double> azimuth_deg;
  std::optional<double> elevation_deg;
  double prism_length = 100.0;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return buf.str();
}

/// Writes every file or none: all contents go to temporaries first, then get renamed.
inline void write_files_atomically(const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
  namespace fs = std::filesystem;
  std::vector<fs::path> temps;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  };
  std::random_device rd;
  for (const auto& [path, contents] : files) {
    fs::path temp = path;
    temp += ".tmp" + std::to_string(rd() % 1000000);
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      cleanup();
      throw IoError("cannot write " + path.string());
    }
    temps.push_back(temp);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) {
      cleanup();
      throw IoError("error writing " + path.string());
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    fs::rename(temps[i], files[i].first, ec);
    if (ec) {
      cleanup();
      throw IoError("cannot move output into place at " + files[i].first.string() + ": " + ec.message());
    }
  }
}

inline std::optional<Format> format_from_extension(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".svg" || ext == ".SVG") return Format::Svg;
  if (ext == ".png" || ext == ".PNG") return Format::Png;
  return std::nullopt;
}

inline Scene load_scene_file(const RunConfig& config) {
  const std::string source = read_file(config.input);
  return lns::load_scene(source);
}

inline std::string render_bytes(const Scene& scene, const RunConfig& config, Format format) {
  Camera camera = Camera::from(scene.view);
  if (config.azimuth_deg) camera.azimuth_deg = *config.azimuth_deg;
  if (config.elevation_deg) camera.elevation_deg = *config.elevation_deg;
  const RenderPlan plan = project(scene, camera, config.width, config.height);
  if (format == Format::Svg) return emit_vector(plan);
  const auto png = encode_png(emit_raster(plan));
  return std::string(png.begin(), png.end());
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

inline int cmd_render(const RunConfig& config, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    Format format = Format::Png;
    if (config.format) {
      format = *config.format;
    } else if (config.output) {
      format = format_from_extension(*config.output).value_or(Format::Png);
    }
    std::filesystem::path output = config.output.value_or(
        std::filesystem::path(config.input).replace_extension(format == Format::Svg ? ".svg" : ".png"));
    const Scene scene = load_scene_file(config);
    write_files_atomically({{output, render_bytes(scene, config, format)}});
    return kExitOk;
  });
}

inline int cmd_validate(const RunConfig& config, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    const Scene scene = load_scene_file(config);
    const auto diagnostics = validate_scene(scene);
    for (const Diagnostic& d : diagnostics) {
      out << (d.item ? "item " + std::to_string(*d.item) : std::string("scene")) << ": " << d.rule << ": "
          << d.message << '\n';
    }
    if (diagnostics.empty()) out << "ok\n";
    return diagnostics.empty() ? kExitOk : kExitInput;
  });
}

namespace detail {

/// Rounds to 9 significant digits; the JSON writer then prints the short form.
inline double sig9(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v == 0.0 ? 0.0 : v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

inline nlohmann::ordered_json sig9_array(const std::vector<double>& values) {
  auto arr = nlohmann::ordered_json::array();
  for (double v : values) arr.push_back(sig9(v));
  return arr;
}

}  // namespace detail

/// Per-marker geometry as one JSON document.
inline nlohmann::ordered_json inspect_report(const Scene& scene) {
  using json = nlohmann::ordered_json;
  json report;
  if (!scene.frame) throw SceneError("scene has no simplex");
  const SimplexFrame& frame = *scene.frame;
  report["simplex"] = {{"dimension", frame.n}, {"edge", detail::sig9(frame.edge)}, {"height", detail::sig9(frame.height)}};
  if (scene.prism_axis) {
    report["prism"] = {{"tMin", detail::sig9(scene.prism_axis->t_min())},
                       {"tMax", detail::sig9(scene.prism_axis->t_max())},
                       {"length", detail::sig9(scene.prism_axis->length())}};
  } else {
    report["prism"] = nullptr;
  }
  json points = json::array();
  for (std::size_t i = 0; i < scene.items.size(); ++i) {
    const auto* m = std::get_if<Marker>(&scene.items[i]);
    if (!m) continue;
    const DistanceVector h = coefficients_to_distances(m->coefficients, frame);
    const Vec3 p = scene_position(scene, m->coefficients, m->timestamp);
    std::vector<double> position{p.x, p.y};
    if (scene.is_3d()) position.push_back(p.z);
    json entry;
    entry["item"] = i;
    entry["role"] = m->role == MarkerRole::ObjectUnderStudy ? "ObjectUnderStudy" : "LearningSample";
    entry["coefficients"] = detail::sig9_array(m->coefficients.values());
    entry["sum"] = detail::sig9(m->coefficients.sum());
    entry["distances"] = detail::sig9_array(h.values);
    entry["position"] = detail::sig9_array(position);
    if (scene.prism_axis && m->timestamp) {
      entry["timestamp"] = detail::sig9(*m->timestamp);
      entry["prismOffset"] = detail::sig9(prism_offset(*m->timestamp, *scene.prism_axis));
    } else {
      entry["timestamp"] = nullptr;
      entry["prismOffset"] = nullptr;
    }
    points.push_back(std::move(entry));
  }
  report["points"] = std::move(points);
  return report;
}

inline int cmd_inspect(const RunConfig& config, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    const Scene scene = load_scene_file(config);
    out << inspect_report(scene).dump(2) << '\n';
    return kExitOk;
  });
}

inline std::filesystem::path with_suffix(const std::filesystem::path& base, const std::string& suffix) {
  std::filesystem::path out = base;
  out.replace_filename(base.stem().string() + suffix + ".lns");
  return out;
}

/// Converts a CSV series to LNS prism listings.
inline int cmd_from_csv(const RunConfig& config, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    if (!(config.prism_length > 0.0)) throw CsvError("prism length must be positive");
    const std::string text = read_file(config.input);
    const auto scenes = scenes_from_samples(read_samples(text), config.prism_length);
    const std::filesystem::path base = config.output.value_or(std::filesystem::path(config.input).replace_extension(".lns"));
    std::vector<std::pair<std::filesystem::path, std::string>> files;
    for (const CsvScene& cs : scenes) {
      const std::string listing = lns::print(lns::scene_to_script(cs.scene));
      if (lns::load_scene(listing) != cs.scene) throw SceneError("generated listing does not reproduce the scene");
      files.emplace_back(with_suffix(base, cs.suffix), listing);
    }
    write_files_atomically(files);
    return kExitOk;
  });
}

inline int run(const RunConfig& config) {
  switch (config.command) {
    case Command::Render: return cmd_render(config);
    case Command::Validate: return cmd_validate(config);
    case Command::Inspect: return cmd_inspect(config);
    case Command::FromCsv: return cmd_from_csv(config);
  }
  return kExitInput;
}

}  // namespace simplexviz::cli
