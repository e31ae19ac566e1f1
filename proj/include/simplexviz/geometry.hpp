#pragma once

// Barycentric geometry of regular 2- and 3-simplexes.
//
// A point inside a regular n-simplex is fixed by its perpendicular distances
// h_i to the n+1 faces. Those distances always sum to the simplex height H,
// so any non-negative, not-all-zero coefficient vector a can be mapped to a
// unique point whose distances are proportional to a: h_i = (H / sum a) * a_i.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace simplexviz {

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Point or vector in scene space. 2D geometry keeps z = 0.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double k, Vec3 a) { return {k * a.x, k * a.y, k * a.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double k) { return k * a; }
  friend constexpr bool operator==(Vec3, Vec3) = default;
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline double distance(Vec3 a, Vec3 b) { return norm(a - b); }

namespace detail {

inline constexpr double kRelTol = 1e-9;
// Coefficients below this fraction of the largest one are treated as zero.
inline constexpr double kZeroCutoff = 1e-12;

inline bool finite(double v) { return std::isfinite(v); }

}  // namespace detail

/// Proximity coefficients a_1..a_{n+1} of one observation (arity 3 or 4).
class CoefficientVector {
 public:
  CoefficientVector() = default;

  explicit CoefficientVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() != 3 && values_.size() != 4) {
      throw GeometryError("coefficient vector must have 3 or 4 entries, got " +
                          std::to_string(values_.size()));
    }
    bool any_positive = false;
    for (double v : values_) {
      if (!detail::finite(v)) throw GeometryError("coefficient is not finite");
      if (v < 0.0) throw GeometryError("negative coefficient in coefficient vector");
      any_positive = any_positive || v > 0.0;
    }
    if (!any_positive) throw GeometryError("all-zero coefficient vector");
  }

  CoefficientVector(std::initializer_list<double> values)
      : CoefficientVector(std::vector<double>(values)) {}

  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] std::size_t arity() const noexcept { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_.at(i); }
  [[nodiscard]] double sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

  friend bool operator==(const CoefficientVector&, const CoefficientVector&) = default;

 private:
  std::vector<double> values_;
};

/// Perpendicular distances h_i from a point to each face, with their total H.
struct DistanceVector {
  std::vector<double> values;
  double total = 0.0;

  [[nodiscard]] std::size_t arity() const noexcept { return values.size(); }
  friend bool operator==(const DistanceVector&, const DistanceVector&) = default;
};

/// Oriented face plane: signed_distance(p) = dot(normal, p) + offset, positive inside.
struct FacePlane {
  Vec3 normal;
  double offset = 0.0;

  [[nodiscard]] double signed_distance(Vec3 p) const { return dot(normal, p) + offset; }
  friend bool operator==(const FacePlane&, const FacePlane&) = default;
};

/// Regular 2-simplex (triangle) or 3-simplex (tetrahedron) in canonical position.
/// Face i is the face opposite vertex i.
struct SimplexFrame {
  int n = 2;
  double edge = 1.0;
  std::vector<Vec3> vertices;
  std::vector<FacePlane> faces;
  double height = 0.0;

  [[nodiscard]] std::size_t arity() const noexcept { return static_cast<std::size_t>(n) + 1; }
  friend bool operator==(const SimplexFrame&, const SimplexFrame&) = default;
};

inline SimplexFrame simplex_frame(int n, double edge) {
  if (n != 2 && n != 3) {
    throw GeometryError("unsupported simplex dimension " + std::to_string(n));
  }
  if (!(edge > 0.0) || !detail::finite(edge)) {
    throw GeometryError("simplex edge must be positive");
  }
  SimplexFrame frame;
  frame.n = n;
  frame.edge = edge;
  const double s = edge;
  frame.vertices = {{0.0, 0.0, 0.0}, {s, 0.0, 0.0}, {s / 2.0, s * std::sqrt(3.0) / 2.0, 0.0}};
  if (n == 3) {
    frame.vertices.push_back({s / 2.0, s * std::sqrt(3.0) / 6.0, s * std::sqrt(2.0 / 3.0)});
    frame.height = s * std::sqrt(2.0 / 3.0);
  } else {
    frame.height = s * std::sqrt(3.0) / 2.0;
  }

  const std::size_t count = frame.vertices.size();
  frame.faces.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<Vec3> others;
    for (std::size_t j = 0; j < count; ++j) {
      if (j != i) others.push_back(frame.vertices[j]);
    }
    Vec3 normal;
    if (n == 2) {
      const Vec3 along = others[1] - others[0];
      normal = {-along.y, along.x, 0.0};
    } else {
      normal = cross(others[1] - others[0], others[2] - others[0]);
    }
    normal = (1.0 / norm(normal)) * normal;
    double offset = -dot(normal, others[0]);
    if (dot(normal, frame.vertices[i]) + offset < 0.0) {
      normal = -1.0 * normal;
      offset = -offset;
    }
    frame.faces.push_back({normal, offset});
  }
  return frame;
}

/// h_i = (H / sum a) * a_i. Coefficients below 1e-12 * max(a) become exactly 0.
inline DistanceVector coefficients_to_distances(const CoefficientVector& a, const SimplexFrame& frame) {
  if (a.arity() != frame.arity()) {
    throw GeometryError("coefficient arity " + std::to_string(a.arity()) + " does not match " +
                        std::to_string(frame.n) + "-simplex");
  }
  const auto& raw = a.values();
  if (raw.empty()) throw GeometryError("all-zero coefficient vector");
  const double largest = *std::max_element(raw.begin(), raw.end());
  std::vector<double> cleaned(raw);
  for (double& v : cleaned) {
    if (v < detail::kZeroCutoff * largest) v = 0.0;
  }
  const double sum = std::accumulate(cleaned.begin(), cleaned.end(), 0.0);
  const double scale = frame.height / sum;
  DistanceVector h;
  h.total = frame.height;
  h.values.reserve(cleaned.size());
  for (double v : cleaned) h.values.push_back(scale * v);
  return h;
}

/// Unique point whose face distances are h: P = (1/H) * sum h_i * V_i.
inline Vec3 distances_to_point(const DistanceVector& h, const SimplexFrame& frame) {
  if (h.arity() != frame.arity()) {
    throw GeometryError("distance arity does not match simplex dimension");
  }
  const double sum = std::accumulate(h.values.begin(), h.values.end(), 0.0);
  const double tol = detail::kRelTol * frame.height;
  if (std::abs(h.total - frame.height) > tol || std::abs(sum - frame.height) > tol) {
    throw GeometryError("distance total does not equal simplex height");
  }
  Vec3 p;
  for (std::size_t i = 0; i < h.values.size(); ++i) {
    if (h.values[i] < -tol) throw GeometryError("negative face distance");
    p = p + (h.values[i] / frame.height) * frame.vertices[i];
  }
  return p;
}

/// Signed face distances of P, clamped at zero. Rejects points outside the simplex.
inline DistanceVector point_to_distances(Vec3 p, const SimplexFrame& frame) {
  const double tol = detail::kRelTol * frame.edge;
  if (frame.n == 2 && std::abs(p.z) > tol) {
    throw GeometryError("point is off the triangle plane");
  }
  DistanceVector h;
  h.total = frame.height;
  h.values.reserve(frame.faces.size());
  for (const FacePlane& face : frame.faces) {
    const double d = face.signed_distance(p);
    if (d < -tol) throw GeometryError("point lies outside the simplex");
    h.values.push_back(std::max(d, 0.0));
  }
  return h;
}

/// Convenience composition: coefficients straight to a point.
inline Vec3 place(const CoefficientVector& a, const SimplexFrame& frame) {
  return distances_to_point(coefficients_to_distances(a, frame), frame);
}

/// Time range of a 2-simplex prism and its user-chosen axial length.
class TimeAxis {
 public:
  TimeAxis(double t_min, double t_max, double length) : t_min_(t_min), t_max_(t_max), length_(length) {
    if (!detail::finite(t_min) || !detail::finite(t_max)) throw GeometryError("time axis bounds must be finite");
    if (t_max < t_min) throw GeometryError("time axis has tMax < tMin");
    if (!(length > 0.0) || !detail::finite(length)) throw GeometryError("prism length must be positive");
  }

  [[nodiscard]] double t_min() const noexcept { return t_min_; }
  [[nodiscard]] double t_max() const noexcept { return t_max_; }
  [[nodiscard]] double length() const noexcept { return length_; }

  friend bool operator==(const TimeAxis&, const TimeAxis&) = default;

 private:
  double t_min_;
  double t_max_;
  double length_;
};

/// Axial position of the slice fixed at time t. A zero-width axis maps to 0.
inline double prism_offset(double t, const TimeAxis& axis) {
  if (!(t >= axis.t_min() && t <= axis.t_max())) {
    throw GeometryError("timestamp outside the prism time axis");
  }
  const double span = axis.t_max() - axis.t_min();
  if (span == 0.0) return 0.0;
  if (t == axis.t_max()) return axis.length();
  return axis.length() * ((t - axis.t_min()) / span);
}

/// Fraction of full color saturation for a point whose coefficients sum to sum_a.
inline double saturation_factor(double sum_a, double ref_sum) {
  if (!(ref_sum > 0.0)) throw GeometryError("saturation reference sum must be positive");
  if (!(sum_a >= 0.0)) throw GeometryError("coefficient sum must be non-negative");
  return std::min(1.0, sum_a / ref_sum);
}

}  // namespace simplexviz
