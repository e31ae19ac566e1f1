#pragma once

// Scene -> depth-ordered 2D primitives.
//
// 3D scenes are rotated about their centroid (azimuth about world z, then
// elevation about the camera x axis), projected orthographically or with a
// perspective divide, and fitted into the viewport with a 5% margin. The
// camera looks down -z, so depth = -z' and larger depth is farther away.
// Primitives are painted farthest first; equal depths keep scene order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "simplexviz/color.hpp"
#include "simplexviz/geometry.hpp"
#include "simplexviz/scene.hpp"

namespace simplexviz {

class RenderError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kMinViewport = 64;
inline constexpr double kFitMargin = 0.05;
inline constexpr double kDefaultFocal = 3.0;
inline constexpr double kLabelFontSize = 14.0;

enum class ProjectionMode { Orthographic, Perspective };

struct Camera {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;
  ProjectionMode mode = ProjectionMode::Orthographic;
  double focal = kDefaultFocal;  // camera distance from the centroid, in scene radii beyond the scene

  static Camera from(const ViewSettings& view) {
    Camera c;
    c.azimuth_deg = view.azimuth_deg;
    c.elevation_deg = view.elevation_deg;
    c.mode = view.transform_mode == 0 ? ProjectionMode::Orthographic : ProjectionMode::Perspective;
    return c;
  }
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Stroke {
  Rgb color;
  double width = 1.0;
  std::vector<double> dash;  // empty draws solid
  friend bool operator==(const Stroke&, const Stroke&) = default;
};

struct Segment {
  Vec2 p0;
  Vec2 p1;
  Stroke stroke;
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct PolyLine {
  std::vector<Vec2> points;
  Stroke stroke;
  friend bool operator==(const PolyLine&, const PolyLine&) = default;
};

struct Disc {
  Vec2 center;
  double radius = 1.0;
  Rgb fill;
  friend bool operator==(const Disc&, const Disc&) = default;
};

struct Polygon {
  std::vector<Vec2> points;
  Rgb fill;
  double opacity = 1.0;
  friend bool operator==(const Polygon&, const Polygon&) = default;
};

struct Label {
  Vec2 anchor;
  std::string text;
  Rgb color;
  double font_size = kLabelFontSize;
  friend bool operator==(const Label&, const Label&) = default;
};

enum class PrimitiveRole { WireEdge, SliceFace, SliceEdge, Perpendicular, PathSegment, Marker, SideLabel };

inline std::string_view to_string(PrimitiveRole role) {
  switch (role) {
    case PrimitiveRole::WireEdge: return "edge";
    case PrimitiveRole::SliceFace: return "slice";
    case PrimitiveRole::SliceEdge: return "slice-edge";
    case PrimitiveRole::Perpendicular: return "perpendicular";
    case PrimitiveRole::PathSegment: return "path";
    case PrimitiveRole::Marker: return "marker";
    case PrimitiveRole::SideLabel: return "label";
  }
  return "primitive";
}

struct RenderPrimitive {
  std::variant<Segment, PolyLine, Disc, Polygon, Label> shape;
  double depth = 0.0;
  PrimitiveRole role = PrimitiveRole::WireEdge;
  std::size_t source_item = 0;  // index into Scene::items (items.size() for generated labels)
  std::size_t sequence = 0;     // generation order before depth sorting
  friend bool operator==(const RenderPrimitive&, const RenderPrimitive&) = default;
};

struct RenderPlan {
  int width = 0;
  int height = 0;
  std::vector<RenderPrimitive> primitives;

  template <class T>
  [[nodiscard]] std::size_t count(PrimitiveRole role) const {
    return static_cast<std::size_t>(std::count_if(primitives.begin(), primitives.end(), [&](const RenderPrimitive& p) {
      return p.role == role && std::holds_alternative<T>(p.shape);
    }));
  }
};

/// Farthest first; ties keep generation order.
inline void depth_sort(std::vector<RenderPrimitive>& primitives) {
  std::stable_sort(primitives.begin(), primitives.end(),
                   [](const RenderPrimitive& a, const RenderPrimitive& b) { return a.depth > b.depth; });
}

namespace detail {

/// A primitive still in scene space.
struct Pending {
  enum class Kind { Segment, Disc, Polygon, Label } kind = Kind::Segment;
  std::vector<Vec3> points;
  Stroke stroke;
  Rgb fill;
  double radius = 0.0;
  double opacity = 1.0;
  std::string text;
  PrimitiveRole role = PrimitiveRole::WireEdge;
  std::size_t source = 0;
};

inline Stroke stroke_of(const Style& style) {
  Stroke s{parse_color(style.color), style.stroke_width, {}};
  if (!style.solid()) s.dash = style.dash;
  return s;
}

class Collector {
 public:
  explicit Collector(const Scene& scene) : scene_(scene), frame_(*scene.frame) {
    saturation_ref_ = saturation_reference(scene);
  }

  std::vector<Pending> run() {
    for (std::size_t i = 0; i < scene_.items.size(); ++i) {
      source_ = i;
      std::visit([&](const auto& prim) { add(prim); }, scene_.items[i]);
    }
    if (scene_.show_digits && scene_.count<SideLabels>() == 0) {
      source_ = scene_.items.size();
      std::vector<std::string> digits;
      for (std::size_t k = 0; k < frame_.arity(); ++k) digits.push_back(std::to_string(k + 1));
      add_labels(digits, Style{});
    }
    return std::move(out_);
  }

 private:
  [[nodiscard]] std::vector<Vec3> face_vertices(std::size_t face, double z) const {
    std::vector<Vec3> pts;
    for (std::size_t j = 0; j < frame_.vertices.size(); ++j) {
      if (j == face) continue;
      Vec3 v = frame_.vertices[j];
      v.z += z;
      pts.push_back(v);
    }
    return pts;
  }

  void segment(Vec3 a, Vec3 b, const Stroke& stroke, PrimitiveRole role) {
    Pending p;
    p.kind = Pending::Kind::Segment;
    p.points = {a, b};
    p.stroke = stroke;
    p.role = role;
    p.source = source_;
    out_.push_back(std::move(p));
  }

  void triangle_edges(double z, const Stroke& stroke, PrimitiveRole role) {
    const auto& v = frame_.vertices;
    const Vec3 lift{0.0, 0.0, z};
    segment(v[0] + lift, v[1] + lift, stroke, role);
    segment(v[1] + lift, v[2] + lift, stroke, role);
    segment(v[2] + lift, v[0] + lift, stroke, role);
  }

  void add(const WireSimplex& w) {
    const Stroke stroke = stroke_of(w.style);
    const auto& v = frame_.vertices;
    switch (w.kind) {
      case WireKind::Triangle:
        triangle_edges(0.0, stroke, PrimitiveRole::WireEdge);
        break;
      case WireKind::Tetrahedron:
        if (v.size() != 4) throw RenderError("tetrahedron wireframe in a 2-simplex scene");
        for (std::size_t a = 0; a < 4; ++a) {
          for (std::size_t b = a + 1; b < 4; ++b) segment(v[a], v[b], stroke, PrimitiveRole::WireEdge);
        }
        break;
      case WireKind::Prism: {
        if (!scene_.prism_axis) throw RenderError("prism wireframe without a time axis");
        const double top = scene_.prism_axis->length();
        triangle_edges(0.0, stroke, PrimitiveRole::WireEdge);
        triangle_edges(top, stroke, PrimitiveRole::WireEdge);
        for (const Vec3& base : v) segment(base, base + Vec3{0.0, 0.0, top}, stroke, PrimitiveRole::WireEdge);
        break;
      }
    }
  }

  void add(const SliceTriangle& s) {
    Pending face;
    face.kind = Pending::Kind::Polygon;
    for (const Vec3& v : frame_.vertices) face.points.push_back(v + Vec3{0.0, 0.0, s.offset});
    face.fill = parse_color(s.style.color);
    face.opacity = s.opacity;
    face.role = PrimitiveRole::SliceFace;
    face.source = source_;
    out_.push_back(std::move(face));
    triangle_edges(s.offset, stroke_of(s.style), PrimitiveRole::SliceEdge);
  }

  void add(const Marker& m) {
    Pending p;
    p.kind = Pending::Kind::Disc;
    p.points = {scene_position(scene_, m.coefficients, m.timestamp)};
    p.radius = m.radius;
    p.fill = parse_color(m.style.color);
    if (saturation_ref_) {
      p.fill = desaturate(p.fill, saturation_factor(m.saturation_sum.value_or(m.coefficients.sum()), *saturation_ref_));
    }
    p.role = PrimitiveRole::Marker;
    p.source = source_;
    out_.push_back(std::move(p));
  }

  void add(const PerpendicularFan& f) {
    const DistanceVector h = coefficients_to_distances(f.coefficients, frame_);
    const Vec3 from = scene_position(scene_, f.coefficients, f.timestamp);
    Stroke stroke = stroke_of(f.style);
    for (std::size_t i = 0; i < frame_.faces.size(); ++i) {
      stroke.color = parse_color(f.side_colors.at(i));
      const Vec3 foot = from - h.values[i] * frame_.faces[i].normal;
      segment(from, foot, stroke, PrimitiveRole::Perpendicular);
    }
  }

  void add(const Trajectory& t) {
    const Stroke stroke = stroke_of(t.style);
    for (std::size_t k = 0; k + 1 < t.waypoints.size(); ++k) {
      const Vec3 a = scene_position(scene_, t.waypoints[k].coefficients, t.waypoints[k].timestamp);
      const Vec3 b = scene_position(scene_, t.waypoints[k + 1].coefficients, t.waypoints[k + 1].timestamp);
      segment(a, b, stroke, PrimitiveRole::PathSegment);
    }
  }

  void add(const SideLabels& l) {
    if (scene_.show_digits) add_labels(l.labels, l.style);
  }

  void add_labels(const std::vector<std::string>& labels, const Style& style) {
    const double push = 0.08 * frame_.edge;
    for (std::size_t i = 0; i < frame_.faces.size() && i < labels.size(); ++i) {
      const auto pts = face_vertices(i, 0.0);
      Vec3 centre;
      for (const Vec3& p : pts) centre = centre + (1.0 / static_cast<double>(pts.size())) * p;
      Pending p;
      p.kind = Pending::Kind::Label;
      p.points = {centre - push * frame_.faces[i].normal};
      p.text = labels[i];
      p.fill = parse_color(style.color);
      p.role = PrimitiveRole::SideLabel;
      p.source = source_;
      out_.push_back(std::move(p));
    }
  }

  const Scene& scene_;
  const SimplexFrame& frame_;
  std::optional<double> saturation_ref_;
  std::size_t source_ = 0;
  std::vector<Pending> out_;
};

inline Vec3 scene_centroid(const Scene& scene) {
  Vec3 c;
  const auto& v = scene.frame->vertices;
  for (const Vec3& p : v) c = c + (1.0 / static_cast<double>(v.size())) * p;
  if (scene.prism_axis) c.z += scene.prism_axis->length() / 2.0;
  return c;
}

}  // namespace detail

/// Camera-space rotation: azimuth about z, then elevation about x.
inline Vec3 rotate_view(Vec3 p, double azimuth_deg, double elevation_deg) {
  const double az = azimuth_deg * std::numbers::pi / 180.0;
  const double el = elevation_deg * std::numbers::pi / 180.0;
  const Vec3 a{p.x * std::cos(az) - p.y * std::sin(az), p.x * std::sin(az) + p.y * std::cos(az), p.z};
  return {a.x, a.y * std::cos(el) + a.z * std::sin(el), -a.y * std::sin(el) + a.z * std::cos(el)};
}

inline RenderPlan project(const Scene& scene, const Camera& camera, int width, int height) {
  if (width < kMinViewport || height < kMinViewport) {
    throw RenderError("viewport must be at least " + std::to_string(kMinViewport) + "x" +
                      std::to_string(kMinViewport));
  }
  if (!scene.frame || scene.items.empty()) throw RenderError("empty scene");
  if (camera.mode == ProjectionMode::Perspective && !(camera.focal > 0.0)) {
    throw RenderError("perspective focal factor must be positive");
  }

  std::vector<detail::Pending> pending = detail::Collector(scene).run();

  // Camera space.
  const bool three_d = scene.is_3d();
  const Vec3 centre = three_d ? detail::scene_centroid(scene) : Vec3{};
  double radius = 0.0;
  for (auto& p : pending) {
    for (Vec3& q : p.points) {
      if (three_d) q = rotate_view(q - centre, camera.azimuth_deg, camera.elevation_deg);
      radius = std::max(radius, norm(q));
    }
  }
  if (three_d && camera.mode == ProjectionMode::Perspective && radius > 0.0) {
    const double eye = (1.0 + camera.focal) * radius;
    for (auto& p : pending) {
      for (Vec3& q : p.points) {
        const double k = eye / (eye - q.z);
        q = {q.x * k, q.y * k, q.z};
      }
    }
  }

  // Fit into the viewport, y pointing down.
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const auto& p : pending) {
    for (const Vec3& q : p.points) {
      min_x = std::min(min_x, q.x);
      max_x = std::max(max_x, q.x);
      min_y = std::min(min_y, q.y);
      max_y = std::max(max_y, q.y);
    }
  }
  const double avail_w = width * (1.0 - 2.0 * kFitMargin);
  const double avail_h = height * (1.0 - 2.0 * kFitMargin);
  const double span_x = max_x - min_x;
  const double span_y = max_y - min_y;
  double scale = 1.0;
  if (span_x > 0.0 && span_y > 0.0) {
    scale = std::min(avail_w / span_x, avail_h / span_y);
  } else if (span_x > 0.0) {
    scale = avail_w / span_x;
  } else if (span_y > 0.0) {
    scale = avail_h / span_y;
  }
  const double mid_x = (min_x + max_x) / 2.0;
  const double mid_y = (min_y + max_y) / 2.0;
  auto screen = [&](const Vec3& q) {
    return Vec2{width / 2.0 + (q.x - mid_x) * scale, height / 2.0 - (q.y - mid_y) * scale};
  };

  RenderPlan plan;
  plan.width = width;
  plan.height = height;
  plan.primitives.reserve(pending.size());
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const auto& p = pending[i];
    RenderPrimitive out;
    out.role = p.role;
    out.source_item = p.source;
    out.sequence = i;
    double depth = 0.0;
    for (const Vec3& q : p.points) depth += -q.z;
    out.depth = three_d ? depth / static_cast<double>(p.points.size()) : 0.0;
    switch (p.kind) {
      case detail::Pending::Kind::Segment:
        out.shape = Segment{screen(p.points[0]), screen(p.points[1]), p.stroke};
        break;
      case detail::Pending::Kind::Disc:
        out.shape = Disc{screen(p.points[0]), p.radius, p.fill};
        break;
      case detail::Pending::Kind::Polygon: {
        Polygon poly{{}, p.fill, p.opacity};
        for (const Vec3& q : p.points) poly.points.push_back(screen(q));
        out.shape = std::move(poly);
        break;
      }
      case detail::Pending::Kind::Label:
        out.shape = Label{screen(p.points[0]), p.text, p.fill, kLabelFontSize};
        break;
    }
    plan.primitives.push_back(std::move(out));
  }
  depth_sort(plan.primitives);
  return plan;
}

inline RenderPlan project(const Scene& scene, int width, int height) {
  return project(scene, Camera::from(scene.view), width, height);
}

}  // namespace simplexviz
