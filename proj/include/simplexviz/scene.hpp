#pragma once

// Typed scene description: simplex wireframes, prism slices, markers,
// perpendicular fans, trajectories and side labels, plus view settings.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "simplexviz/color.hpp"
#include "simplexviz/geometry.hpp"

namespace simplexviz {

class SceneError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kStudyRadius = 6.0;
inline constexpr double kLearningRadius = 3.0;
inline constexpr double kSliceOpacity = 0.15;

struct Style {
  std::string color = "#000";
  double stroke_width = 1.0;
  std::vector<double> dash;  // empty or {1} draws solid

  [[nodiscard]] bool solid() const { return dash.empty() || (dash.size() == 1 && dash[0] == 1.0); }
  friend bool operator==(const Style&, const Style&) = default;
};

enum class WireKind { Triangle, Tetrahedron, Prism };

struct WireSimplex {
  WireKind kind = WireKind::Triangle;
  Style style;
  friend bool operator==(const WireSimplex&, const WireSimplex&) = default;
};

/// Cross-section of a prism at one examination time.
struct SliceTriangle {
  double timestamp = 0.0;
  double offset = 0.0;
  Style style;
  double opacity = kSliceOpacity;
  friend bool operator==(const SliceTriangle&, const SliceTriangle&) = default;
};

enum class MarkerShape { Circle };
enum class MarkerRole { ObjectUnderStudy, LearningSample };

struct Marker {
  CoefficientVector coefficients;
  double radius = kStudyRadius;
  MarkerShape shape = MarkerShape::Circle;
  Style style;
  MarkerRole role = MarkerRole::ObjectUnderStudy;
  std::optional<double> timestamp;
  std::optional<double> saturation_sum;  // overrides sum of coefficients
  friend bool operator==(const Marker&, const Marker&) = default;
};

/// Colored perpendiculars from a placed point to every face.
struct PerpendicularFan {
  CoefficientVector coefficients;
  std::vector<std::string> side_colors;
  Style style;
  std::optional<double> timestamp;
  friend bool operator==(const PerpendicularFan&, const PerpendicularFan&) = default;
};

enum class TrajectoryKind { Observed, Predicted, CandidateStrategy };

struct Waypoint {
  CoefficientVector coefficients;
  std::optional<double> timestamp;
  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct Trajectory {
  std::vector<Waypoint> waypoints;
  Style style;
  TrajectoryKind kind = TrajectoryKind::Observed;
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct SideLabels {
  std::vector<std::string> labels;
  Style style;
  friend bool operator==(const SideLabels&, const SideLabels&) = default;
};

using SceneItem = std::variant<WireSimplex, SliceTriangle, Marker, PerpendicularFan, Trajectory, SideLabels>;

struct ViewSettings {
  int view_preset = 0;
  int transform_mode = 0;  // 0 orthographic, 1 perspective
  double azimuth_deg = 30.0;
  double elevation_deg = 60.0;
  friend bool operator==(const ViewSettings&, const ViewSettings&) = default;
};

/// Camera angles for setView presets: 0 oblique, 1 top, 2 front, 3 side.
inline std::pair<double, double> view_preset_angles(int preset) {
  switch (preset) {
    case 0: return {30.0, 60.0};
    case 1: return {0.0, 0.0};
    case 2: return {0.0, 90.0};
    case 3: return {90.0, 90.0};
    default: throw SceneError("unknown view preset " + std::to_string(preset));
  }
}

struct SaturationEncoding {
  std::optional<double> reference;  // defaults to the largest marker sum
  friend bool operator==(const SaturationEncoding&, const SaturationEncoding&) = default;
};

struct Scene {
  std::optional<SimplexFrame> frame;
  std::optional<TimeAxis> prism_axis;
  std::vector<SceneItem> items;
  ViewSettings view;
  bool show_digits = false;
  std::optional<SaturationEncoding> saturation;

  [[nodiscard]] bool is_3d() const { return frame && (frame->n == 3 || prism_axis.has_value()); }

  template <class T>
  [[nodiscard]] std::size_t count() const {
    return static_cast<std::size_t>(
        std::count_if(items.begin(), items.end(), [](const SceneItem& item) { return std::holds_alternative<T>(item); }));
  }

  friend bool operator==(const Scene&, const Scene&) = default;
};

/// Scene-space position of a coefficient vector; prism scenes lift it to its slice.
inline Vec3 scene_position(const Scene& scene, const CoefficientVector& a, std::optional<double> timestamp) {
  if (!scene.frame) throw SceneError("scene has no simplex frame");
  Vec3 p = place(a, *scene.frame);
  if (scene.prism_axis) {
    if (!timestamp) throw SceneError("prism scene point has no timestamp");
    p.z = prism_offset(*timestamp, *scene.prism_axis);
  }
  return p;
}

/// Reference sum for saturation: explicit override, else the largest marker sum.
inline std::optional<double> saturation_reference(const Scene& scene) {
  if (!scene.saturation) return std::nullopt;
  if (scene.saturation->reference) return scene.saturation->reference;
  double best = 0.0;
  for (const SceneItem& item : scene.items) {
    if (const auto* m = std::get_if<Marker>(&item)) {
      best = std::max(best, m->saturation_sum.value_or(m->coefficients.sum()));
    }
  }
  if (best > 0.0) return best;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Prism scenes

struct PrismSample {
  double timestamp = 0.0;
  CoefficientVector coefficients;
  Style style;
};

struct PrismSceneStyles {
  Style wire{"#000", 1.0, {}};
  Style slice{"#808080", 1.0, {}};
  Style trajectory{"#000", 2.0, {}};
  double marker_radius = kStudyRadius;
};

/// Prism wireframe, one slice per distinct timestamp, one marker per sample and
/// an observed trajectory through the samples in time order.
inline Scene build_prism_scene(std::span<const PrismSample> samples, const TimeAxis& axis, const SimplexFrame& frame,
                               const PrismSceneStyles& styles = {}) {
  if (samples.empty()) throw SceneError("prism scene needs at least one sample");
  if (frame.n != 2) throw SceneError("prism scenes are built on a 2-simplex");
  for (const PrismSample& s : samples) {
    if (s.coefficients.arity() != 3) throw SceneError("prism samples need 3 coefficients");
    if (!(s.timestamp >= axis.t_min() && s.timestamp <= axis.t_max())) {
      throw SceneError("sample timestamp outside the prism time axis");
    }
  }

  std::vector<PrismSample> ordered(samples.begin(), samples.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const PrismSample& a, const PrismSample& b) { return a.timestamp < b.timestamp; });

  Scene scene;
  scene.frame = frame;
  scene.prism_axis = axis;
  scene.items.emplace_back(WireSimplex{WireKind::Prism, styles.wire});

  std::set<double> times;
  for (const PrismSample& s : ordered) times.insert(s.timestamp);
  for (double t : times) {
    scene.items.emplace_back(SliceTriangle{t, prism_offset(t, axis), styles.slice, kSliceOpacity});
  }

  for (const PrismSample& s : ordered) {
    Marker m;
    m.coefficients = s.coefficients;
    m.radius = styles.marker_radius;
    m.style = s.style;
    m.timestamp = s.timestamp;
    scene.items.emplace_back(std::move(m));
  }

  if (ordered.size() >= 2) {
    Trajectory path;
    path.style = styles.trajectory;
    for (const PrismSample& s : ordered) path.waypoints.push_back({s.coefficients, s.timestamp});
    scene.items.emplace_back(std::move(path));
  }
  return scene;
}

// ---------------------------------------------------------------------------
// Four-pattern split

/// Stage labels: 0 absence, 1 alarm, 2 resistance, 3 exhaustion.
struct StagedSample {
  double timestamp = 0.0;
  int stage = 0;
  friend bool operator==(const StagedSample&, const StagedSample&) = default;
};

template <class Sample>
struct SeriesPartition {
  std::vector<Sample> first;   // stages 3, 2, 1
  std::vector<Sample> second;  // stages 2, 1, 0
};

/// Dominant stage of a 4-coefficient vector where coefficient k belongs to
/// stage k. Ties go to the more severe stage.
inline int dominant_stage(const CoefficientVector& a) {
  if (a.arity() != 4) throw SceneError("dominant stage needs 4 coefficients");
  int best = 3;
  for (int k = 2; k >= 0; --k) {
    if (a[static_cast<std::size_t>(k)] > a[static_cast<std::size_t>(best)]) best = k;
  }
  return best;
}

/// Splits a recovery series into a prism over stages {3,2,1} (maximal prefix)
/// and one over {2,1,0} (maximal suffix). The transition samples land in both.
/// When one triple covers the whole series the other side stays empty.
template <class Sample, class StageOf>
SeriesPartition<Sample> partition_four_pattern_series(std::span<const Sample> samples, StageOf stage_of) {
  if (samples.empty()) throw SceneError("cannot partition an empty series");
  std::vector<int> stages;
  stages.reserve(samples.size());
  for (const Sample& s : samples) {
    const int stage = stage_of(s);
    if (stage < 0 || stage > 3) throw SceneError("stage label must be 0..3, got " + std::to_string(stage));
    if (!stages.empty() && stage > stages.back()) {
      throw SceneError("stages must be non-increasing over time");
    }
    stages.push_back(stage);
  }

  const auto count = samples.size();
  std::size_t prefix = 0;
  while (prefix < count && stages[prefix] >= 1) ++prefix;
  std::size_t suffix_begin = count;
  while (suffix_begin > 0 && stages[suffix_begin - 1] <= 2) --suffix_begin;

  SeriesPartition<Sample> out;
  if (prefix == count) {
    out.first.assign(samples.begin(), samples.end());
  } else if (suffix_begin == 0) {
    out.second.assign(samples.begin(), samples.end());
  } else {
    out.first.assign(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(prefix));
    out.second.assign(samples.begin() + static_cast<std::ptrdiff_t>(suffix_begin), samples.end());
  }
  return out;
}

inline SeriesPartition<StagedSample> partition_four_pattern_series(std::span<const StagedSample> samples) {
  return partition_four_pattern_series(samples, [](const StagedSample& s) { return s.stage; });
}

// ---------------------------------------------------------------------------
// Validation

struct Diagnostic {
  std::optional<std::size_t> item;  // index into Scene::items, empty for scene-level rules
  std::string rule;
  std::string message;
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

namespace detail {

inline void check_style(const Style& style, std::size_t index, std::vector<Diagnostic>& out) {
  if (!is_color(style.color)) out.push_back({index, "style", "color '" + style.color + "' is not #RGB or #RRGGBB"});
  if (!(style.stroke_width > 0.0)) out.push_back({index, "style", "stroke width must be positive"});
  for (double d : style.dash) {
    if (!(d > 0.0)) {
      out.push_back({index, "style", "dash entries must be positive"});
      break;
    }
  }
}

class SceneValidator {
 public:
  explicit SceneValidator(const Scene& scene) : scene_(scene) {}

  std::vector<Diagnostic> run() {
    if (!scene_.frame) {
      if (!scene_.items.empty()) out_.push_back({std::nullopt, "frame", "scene has primitives but no simplex"});
    } else if (scene_.prism_axis && scene_.frame->n != 2) {
      out_.push_back({std::nullopt, "prism", "prism scenes need a 2-simplex frame"});
    }
    if (scene_.view.transform_mode != 0 && scene_.view.transform_mode != 1) {
      out_.push_back({std::nullopt, "view", "transform mode must be 0 or 1"});
    }
    if (scene_.saturation && scene_.saturation->reference && !(*scene_.saturation->reference > 0.0)) {
      out_.push_back({std::nullopt, "saturation", "saturation reference must be positive"});
    }

    double largest_learning = 0.0;
    for (const SceneItem& item : scene_.items) {
      if (const auto* m = std::get_if<Marker>(&item); m && m->role == MarkerRole::LearningSample) {
        largest_learning = std::max(largest_learning, m->radius);
      }
    }

    for (std::size_t i = 0; i < scene_.items.size(); ++i) {
      index_ = i;
      std::visit([&](const auto& prim) { check(prim, largest_learning); }, scene_.items[i]);
    }
    return std::move(out_);
  }

 private:
  void add(std::string rule, std::string message) { out_.push_back({index_, std::move(rule), std::move(message)}); }

  void check_arity(const CoefficientVector& a) {
    if (scene_.frame && a.arity() != scene_.frame->arity()) {
      add("arity", std::to_string(a.arity()) + " coefficients in a " + std::to_string(scene_.frame->n) +
                       "-simplex scene");
    }
  }

  void check_time(const std::optional<double>& t) {
    if (!scene_.prism_axis) return;
    if (!t) {
      add("timestamp", "prism scene primitive has no timestamp");
    } else if (*t < scene_.prism_axis->t_min() || *t > scene_.prism_axis->t_max()) {
      add("timestamp", "timestamp outside the prism time axis");
    }
  }

  void check(const WireSimplex& w, double) {
    check_style(w.style, index_, out_);
    if (w.kind == WireKind::Prism && !scene_.prism_axis) add("prism", "prism wireframe without a time axis");
    if (scene_.frame) {
      const int want = w.kind == WireKind::Tetrahedron ? 3 : 2;
      if (scene_.frame->n != want) add("dimension", "wireframe does not match the scene simplex");
    }
  }

  void check(const SliceTriangle& s, double) {
    check_style(s.style, index_, out_);
    if (!(s.opacity >= 0.0 && s.opacity <= 1.0)) add("opacity", "slice opacity must lie in [0, 1]");
    if (!scene_.prism_axis) {
      add("prism", "slice triangle without a time axis");
      return;
    }
    check_time(s.timestamp);
  }

  void check(const Marker& m, double largest_learning) {
    check_style(m.style, index_, out_);
    check_arity(m.coefficients);
    check_time(m.timestamp);
    if (!(m.radius > 0.0)) add("radius", "marker radius must be positive");
    if (m.role == MarkerRole::ObjectUnderStudy && largest_learning > 0.0 && !(m.radius > largest_learning)) {
      add("radius", "object under study must be larger than learning-sample markers");
    }
    if (m.saturation_sum && !(*m.saturation_sum >= 0.0)) add("saturation", "saturation sum must be non-negative");
  }

  void check(const PerpendicularFan& f, double) {
    check_style(f.style, index_, out_);
    check_arity(f.coefficients);
    check_time(f.timestamp);
    if (f.side_colors.size() != f.coefficients.arity()) {
      add("fan-colors", "fan needs one color per face");
    }
    for (const std::string& c : f.side_colors) {
      if (!is_color(c)) {
        add("fan-colors", "side color '" + c + "' is not a color");
        break;
      }
    }
  }

  void check(const Trajectory& t, double) {
    check_style(t.style, index_, out_);
    if (t.waypoints.size() < 2) add("trajectory", "trajectory needs at least two waypoints");
    bool arity_reported = false;
    for (const Waypoint& w : t.waypoints) {
      if (!arity_reported && scene_.frame && w.coefficients.arity() != scene_.frame->arity()) {
        check_arity(w.coefficients);
        arity_reported = true;
      }
    }
    if (!scene_.prism_axis) return;
    bool missing = false;
    bool out_of_range = false;
    bool decreasing = false;
    for (std::size_t k = 0; k < t.waypoints.size(); ++k) {
      const auto& ts = t.waypoints[k].timestamp;
      if (!ts) {
        missing = true;
        continue;
      }
      if (*ts < scene_.prism_axis->t_min() || *ts > scene_.prism_axis->t_max()) out_of_range = true;
      if (k > 0 && t.waypoints[k - 1].timestamp && *ts < *t.waypoints[k - 1].timestamp) decreasing = true;
    }
    if (missing) add("timestamp", "prism trajectory waypoint has no timestamp");
    if (out_of_range) add("timestamp", "trajectory timestamp outside the prism time axis");
    if (decreasing) add("timestamp-order", "trajectory timestamps decrease");
  }

  void check(const SideLabels& l, double) {
    check_style(l.style, index_, out_);
    if (scene_.frame && l.labels.size() != scene_.frame->arity()) add("labels", "need one label per face");
  }

  const Scene& scene_;
  std::size_t index_ = 0;
  std::vector<Diagnostic> out_;
};

}  // namespace detail

/// Empty iff every primitive satisfies its invariants.
inline std::vector<Diagnostic> validate_scene(const Scene& scene) { return detail::SceneValidator(scene).run(); }

inline std::string_view to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::Observed: return "Observed";
    case TrajectoryKind::Predicted: return "Predicted";
    case TrajectoryKind::CandidateStrategy: return "CandidateStrategy";
  }
  return "Observed";
}

inline std::optional<TrajectoryKind> trajectory_kind_from(std::string_view name) {
  if (name == "Observed") return TrajectoryKind::Observed;
  if (name == "Predicted") return TrajectoryKind::Predicted;
  if (name == "CandidateStrategy") return TrajectoryKind::CandidateStrategy;
  return std::nullopt;
}

}  // namespace simplexviz
