#pragma once

// Evaluates parsed LNS scripts into a Scene through a builtin registry.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "simplexviz/color.hpp"
#include "simplexviz/geometry.hpp"
#include "simplexviz/lns/parser.hpp"
#include "simplexviz/scene.hpp"

namespace simplexviz::lns {

enum class EvalErrorKind { UnknownBuiltin, Arity, Type, UnboundVariable, IndexOutOfRange, Domain };

class EvalError : public LnsError {
 public:
  EvalError(EvalErrorKind kind, const std::string& message, Position pos) : LnsError(message, pos), kind_(kind) {}

  [[nodiscard]] EvalErrorKind kind() const noexcept { return kind_; }

 private:
  EvalErrorKind kind_;
};

/// Typed view over the resolved arguments of one builtin call.
class Arguments {
 public:
  Arguments(std::string_view builtin, std::span<const Value> values, Position call_position)
      : builtin_(builtin), values_(values), call_position_(call_position) {}

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] bool has(std::size_t i) const noexcept { return i < values_.size(); }
  [[nodiscard]] const Value& at(std::size_t i) const { return values_[i]; }

  [[nodiscard]] double number(std::size_t i) const {
    const Value& v = values_[i];
    if (!v.is_number()) type_error(i, "a number");
    return std::get<double>(v.data);
  }

  [[nodiscard]] int integer(std::size_t i) const {
    const double v = number(i);
    if (v != std::floor(v) || std::abs(v) > 1e9) type_error(i, "an integer");
    return static_cast<int>(v);
  }

  [[nodiscard]] double positive(std::size_t i) const {
    const double v = number(i);
    if (!(v > 0.0)) domain_error(i, "must be positive");
    return v;
  }

  [[nodiscard]] const std::string& text(std::size_t i) const {
    const Value& v = values_[i];
    if (!v.is_text()) type_error(i, "a string");
    return std::get<std::string>(v.data);
  }

  [[nodiscard]] std::string color(std::size_t i) const {
    const std::string& c = text(i);
    if (!is_color(c)) domain_error(i, "'" + c + "' is not a #RGB or #RRGGBB color");
    return c;
  }

  [[nodiscard]] const Array& list(std::size_t i) const {
    const Value& v = values_[i];
    if (!v.is_array()) type_error(i, "an array");
    return std::get<Array>(v.data);
  }

  [[nodiscard]] std::vector<double> numbers(std::size_t i) const {
    std::vector<double> out;
    for (const Value& item : list(i)) {
      if (!item.is_number()) type_error(i, "an array of numbers");
      out.push_back(std::get<double>(item.data));
    }
    return out;
  }

  [[nodiscard]] std::vector<std::string> texts(std::size_t i) const {
    std::vector<std::string> out;
    for (const Value& item : list(i)) {
      if (!item.is_text()) type_error(i, "an array of strings");
      out.push_back(std::get<std::string>(item.data));
    }
    return out;
  }

  [[nodiscard]] CoefficientVector coefficients(std::size_t i) const { return to_coefficients(i, numbers(i)); }

  [[nodiscard]] std::vector<CoefficientVector> coefficient_rows(std::size_t i) const {
    std::vector<CoefficientVector> rows;
    for (const Value& row : list(i)) {
      if (!row.is_array()) type_error(i, "an array of coefficient arrays");
      std::vector<double> values;
      for (const Value& item : std::get<Array>(row.data)) {
        if (!item.is_number()) type_error(i, "an array of coefficient arrays");
        values.push_back(std::get<double>(item.data));
      }
      rows.push_back(to_coefficients(i, std::move(values)));
    }
    return rows;
  }

  [[nodiscard]] Style style(std::size_t color_index) const {
    Style s;
    s.color = color(color_index);
    s.stroke_width = positive(color_index + 1);
    s.dash = numbers(color_index + 2);
    for (double d : s.dash) {
      if (!(d > 0.0)) domain_error(color_index + 2, "dash entries must be positive");
    }
    return s;
  }

  [[noreturn]] void domain_error(std::size_t i, const std::string& what) const {
    throw EvalError(EvalErrorKind::Domain, builtin_ + " argument " + std::to_string(i + 1) + ": " + what,
                    position_of(i));
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw EvalError(EvalErrorKind::Domain, builtin_ + ": " + what, call_position_);
  }

 private:
  [[nodiscard]] Position position_of(std::size_t i) const {
    return i < values_.size() && values_[i].position != Position{} ? values_[i].position : call_position_;
  }

  [[noreturn]] void type_error(std::size_t i, const std::string& expected) const {
    throw EvalError(EvalErrorKind::Type, builtin_ + " argument " + std::to_string(i + 1) + " must be " + expected,
                    position_of(i));
  }

  CoefficientVector to_coefficients(std::size_t i, std::vector<double> values) const {
    try {
      return CoefficientVector(std::move(values));
    } catch (const GeometryError& e) {
      domain_error(i, e.what());
    }
  }

  std::string builtin_;
  std::span<const Value> values_;
  Position call_position_;
};

struct Builtin {
  std::size_t min_args = 0;
  std::size_t max_args = 0;
  std::function<void(const Arguments&, Scene&)> apply;
};

class BuiltinRegistry {
 public:
  void add(std::string name, Builtin builtin) { entries_.insert_or_assign(std::move(name), std::move(builtin)); }
  bool remove(const std::string& name) { return entries_.erase(name) > 0; }
  [[nodiscard]] bool contains(const std::string& name) const { return entries_.contains(name); }
  [[nodiscard]] const Builtin* find(const std::string& name) const {
    const auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
  }
  [[nodiscard]] std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : entries_) out.push_back(name);
    return out;
  }

 private:
  std::map<std::string, Builtin, std::less<>> entries_;
};

namespace detail {

inline void use_frame(Scene& scene, const Arguments& args, int n, std::size_t size_index) {
  const double size = args.positive(size_index);
  if (!scene.frame) {
    scene.frame = simplex_frame(n, size);
    return;
  }
  if (scene.frame->n != n) {
    args.fail("a " + std::to_string(n) + "-simplex primitive in a " + std::to_string(scene.frame->n) + "-simplex scene");
  }
  if (scene.frame->edge != size) args.domain_error(size_index, "size does not match the scene simplex");
}

inline int dimension_of(const CoefficientVector& a) { return static_cast<int>(a.arity()) - 1; }

inline std::optional<double> timestamp_arg(const Arguments& args, std::size_t i, const Scene& scene) {
  if (!args.has(i)) {
    if (scene.prism_axis) args.fail("prism scene primitives need a timestamp");
    return std::nullopt;
  }
  const double t = args.number(i);
  if (!scene.prism_axis) args.fail("timestamp given outside a prism scene");
  if (t < scene.prism_axis->t_min() || t > scene.prism_axis->t_max()) {
    args.domain_error(i, "timestamp outside the prism time axis");
  }
  return t;
}

inline void add_wire(const Arguments& args, Scene& scene, WireKind kind) {
  Style style = args.style(0);
  use_frame(scene, args, kind == WireKind::Tetrahedron ? 3 : 2, 3);
  scene.items.emplace_back(WireSimplex{kind, std::move(style)});
}

inline void add_marker(const Arguments& args, Scene& scene, MarkerRole role) {
  Marker m;
  m.style = Style{args.color(0), 1.0, {}};
  m.radius = args.positive(1);
  if (args.text(2) != "Circle") args.domain_error(2, "unsupported marker shape '" + args.text(2) + "'");
  m.coefficients = args.coefficients(4);
  use_frame(scene, args, dimension_of(m.coefficients), 3);
  m.role = role;
  m.timestamp = timestamp_arg(args, 5, scene);
  scene.items.emplace_back(std::move(m));
}

}  // namespace detail

/// Registry with every builtin this toolkit understands.
inline BuiltinRegistry default_registry() {
  BuiltinRegistry r;

  r.add("setView", {1, 1, [](const Arguments& a, Scene& s) {
          const int preset = a.integer(0);
          try {
            std::tie(s.view.azimuth_deg, s.view.elevation_deg) = view_preset_angles(preset);
          } catch (const SceneError& e) {
            a.domain_error(0, e.what());
          }
          s.view.view_preset = preset;
        }});

  // 2 is an accepted alias of perspective.
  r.add("setTransform", {1, 1, [](const Arguments& a, Scene& s) {
          const int mode = a.integer(0);
          if (mode < 0 || mode > 2) a.domain_error(0, "transform must be 0, 1 or 2");
          s.view.transform_mode = mode == 0 ? 0 : 1;
        }});

  r.add("setViewPort", {2, 2, [](const Arguments& a, Scene& s) {
          s.view.azimuth_deg = a.number(0);
          s.view.elevation_deg = a.number(1);
        }});

  r.add("addTriangle", {4, 4, [](const Arguments& a, Scene& s) { detail::add_wire(a, s, WireKind::Triangle); }});
  r.add("addTetraedron",
        {4, 4, [](const Arguments& a, Scene& s) { detail::add_wire(a, s, WireKind::Tetrahedron); }});

  // addPrism(color, width, dash, size, length, tMin, tMax)
  r.add("addPrism", {7, 7, [](const Arguments& a, Scene& s) {
          Style style = a.style(0);
          if (s.prism_axis) a.fail("scene already has a prism");
          const double length = a.positive(4);
          const double t_min = a.number(5);
          const double t_max = a.number(6);
          if (t_max < t_min) a.domain_error(6, "tMax must not be below tMin");
          detail::use_frame(s, a, 2, 3);
          for (const SceneItem& item : s.items) {
            if (!std::holds_alternative<WireSimplex>(item)) a.fail("addPrism must precede points, fans and paths");
          }
          s.prism_axis = TimeAxis(t_min, t_max, length);
          s.items.emplace_back(WireSimplex{WireKind::Prism, std::move(style)});
        }});

  // addSlice(color, width, dash, size, t[, opacity])
  r.add("addSlice", {5, 6, [](const Arguments& a, Scene& s) {
          SliceTriangle slice;
          slice.style = a.style(0);
          detail::use_frame(s, a, 2, 3);
          if (!s.prism_axis) a.fail("slices need a prism");
          slice.timestamp = *detail::timestamp_arg(a, 4, s);
          slice.offset = prism_offset(slice.timestamp, *s.prism_axis);
          if (a.has(5)) {
            slice.opacity = a.number(5);
            if (!(slice.opacity >= 0.0 && slice.opacity <= 1.0)) a.domain_error(5, "opacity must lie in [0, 1]");
          }
          s.items.emplace_back(std::move(slice));
        }});

  // addIJK(color, width, dash, size, coefficients, sideColors[, t])
  r.add("addIJK", {6, 7, [](const Arguments& a, Scene& s) {
          PerpendicularFan fan;
          fan.style = a.style(0);
          fan.coefficients = a.coefficients(4);
          detail::use_frame(s, a, detail::dimension_of(fan.coefficients), 3);
          fan.side_colors = a.texts(5);
          if (fan.side_colors.size() != fan.coefficients.arity()) a.domain_error(5, "need one color per face");
          for (const std::string& c : fan.side_colors) {
            if (!is_color(c)) a.domain_error(5, "'" + c + "' is not a color");
          }
          fan.timestamp = detail::timestamp_arg(a, 6, s);
          s.items.emplace_back(std::move(fan));
        }});

  // addPoint(color, radius, shape, size, coefficients[, t])
  r.add("addPoint", {5, 6, [](const Arguments& a, Scene& s) {
          detail::add_marker(a, s, MarkerRole::ObjectUnderStudy);
        }});
  r.add("addSample", {5, 6, [](const Arguments& a, Scene& s) {
          detail::add_marker(a, s, MarkerRole::LearningSample);
        }});

  // addPath(color, width, dash, size, points[, times[, kind]])
  r.add("addPath", {5, 7, [](const Arguments& a, Scene& s) {
          Trajectory path;
          path.style = a.style(0);
          const auto rows = a.coefficient_rows(4);
          if (rows.size() < 2) a.domain_error(4, "a path needs at least two points");
          for (const auto& row : rows) {
            if (row.arity() != rows.front().arity()) a.domain_error(4, "path points differ in arity");
          }
          detail::use_frame(s, a, detail::dimension_of(rows.front()), 3);
          std::vector<double> times;
          if (a.has(5)) times = a.numbers(5);
          if (s.prism_axis && times.empty()) a.fail("prism paths need timestamps");
          if (!times.empty()) {
            if (!s.prism_axis) a.fail("timestamps given outside a prism scene");
            if (times.size() != rows.size()) a.domain_error(5, "need one timestamp per point");
            for (std::size_t k = 0; k < times.size(); ++k) {
              if (times[k] < s.prism_axis->t_min() || times[k] > s.prism_axis->t_max()) {
                a.domain_error(5, "timestamp outside the prism time axis");
              }
              if (k > 0 && times[k] < times[k - 1]) a.domain_error(5, "timestamps must be non-decreasing");
            }
          }
          for (std::size_t k = 0; k < rows.size(); ++k) {
            path.waypoints.push_back({rows[k], times.empty() ? std::nullopt : std::optional<double>(times[k])});
          }
          if (a.has(6)) {
            const auto kind = trajectory_kind_from(a.text(6));
            if (!kind) a.domain_error(6, "path kind must be Observed, Predicted or CandidateStrategy");
            path.kind = *kind;
          }
          s.items.emplace_back(std::move(path));
        }});

  // setSideLabels(labels[, color])
  r.add("setSideLabels", {1, 2, [](const Arguments& a, Scene& s) {
          SideLabels labels;
          labels.labels = a.texts(0);
          if (a.has(1)) labels.style.color = a.color(1);
          if (s.frame && labels.labels.size() != s.frame->arity()) a.domain_error(0, "need one label per face");
          if (labels.labels.size() != 3 && labels.labels.size() != 4) a.domain_error(0, "need 3 or 4 labels");
          s.items.emplace_back(std::move(labels));
        }});

  r.add("showDigits", {1, 1, [](const Arguments& a, Scene& s) {
          const int flag = a.integer(0);
          if (flag != 0 && flag != 1) a.domain_error(0, "expected 0 or 1");
          s.show_digits = flag == 1;
        }});

  // setSaturation([reference])
  r.add("setSaturation", {0, 1, [](const Arguments& a, Scene& s) {
          SaturationEncoding enc;
          if (a.has(0)) enc.reference = a.positive(0);
          s.saturation = enc;
        }});

  return r;
}

namespace detail {

class Evaluator {
 public:
  explicit Evaluator(const BuiltinRegistry& registry) : registry_(registry) {}

  Scene run(const Script& script) {
    for (const Statement& statement : script.statements) {
      if (const auto* c = std::get_if<Call>(&statement)) {
        apply(*c);
      } else if (const auto* decl = std::get_if<VarDecl>(&statement)) {
        bind(*decl);
      } else {
        try {
          apply(std::get<TryCatch>(statement).call);
        } catch (const LnsError&) {
          // swallowed: the statement becomes a no-op
        }
      }
    }
    return std::move(scene_);
  }

 private:
  void bind(const VarDecl& decl) {
    // Resolve every binding before committing so a failing declaration binds nothing.
    auto staged = env_;
    for (const Binding& b : decl.bindings) staged.insert_or_assign(b.name, resolve(b.value, staged));
    env_ = std::move(staged);
  }

  void apply(const Call& call) {
    const Builtin* builtin = registry_.find(call.name);
    if (!builtin) throw EvalError(EvalErrorKind::UnknownBuiltin, "unknown builtin '" + call.name + "'", call.position);
    if (call.args.size() < builtin->min_args || call.args.size() > builtin->max_args) {
      const std::string expected = builtin->min_args == builtin->max_args
                                       ? std::to_string(builtin->min_args)
                                       : std::to_string(builtin->min_args) + ".." + std::to_string(builtin->max_args);
      throw EvalError(EvalErrorKind::Arity,
                      call.name + " expects " + expected + " arguments, got " + std::to_string(call.args.size()),
                      call.position);
    }
    std::vector<Value> resolved;
    resolved.reserve(call.args.size());
    for (const Value& v : call.args) resolved.push_back(resolve(v, env_));

    Scene staged = scene_;
    try {
      builtin->apply(Arguments(call.name, resolved, call.position), staged);
    } catch (const LnsError&) {
      throw;
    } catch (const std::exception& e) {
      throw EvalError(EvalErrorKind::Domain, call.name + ": " + e.what(), call.position);
    }
    scene_ = std::move(staged);
  }

  static Value resolve(const Value& v, const std::map<std::string, Value>& env) {
    if (const auto* r = std::get_if<VarRef>(&v.data)) return lookup(r->name, v.position, env);
    if (const auto* r = std::get_if<IndexedRef>(&v.data)) {
      const Value& target = lookup(r->name, v.position, env);
      if (!target.is_array()) {
        throw EvalError(EvalErrorKind::Type, "'" + r->name + "' is not an array", v.position);
      }
      const Array& items = std::get<Array>(target.data);
      if (r->index >= items.size()) {
        throw EvalError(EvalErrorKind::IndexOutOfRange,
                        "index " + std::to_string(r->index) + " out of range for '" + r->name + "' of size " +
                            std::to_string(items.size()),
                        v.position);
      }
      return items[r->index];
    }
    if (const auto* items = std::get_if<Array>(&v.data)) {
      Array out;
      out.reserve(items->size());
      for (const Value& item : *items) out.push_back(resolve(item, env));
      return {std::move(out), v.position};
    }
    return v;
  }

  static const Value& lookup(const std::string& name, Position pos, const std::map<std::string, Value>& env) {
    const auto it = env.find(name);
    if (it == env.end()) throw EvalError(EvalErrorKind::UnboundVariable, "unbound variable '" + name + "'", pos);
    return it->second;
  }

  const BuiltinRegistry& registry_;
  std::map<std::string, Value> env_;
  Scene scene_;
};

}  // namespace detail

/// Runs statements in order. Failures inside try/catch are swallowed; any
/// other failure aborts with an EvalError.
inline Scene evaluate(const Script& script, const BuiltinRegistry& registry) {
  return detail::Evaluator(registry).run(script);
}

inline Scene evaluate(const Script& script) { return evaluate(script, default_registry()); }

/// tokenize, parse and evaluate with the default registry.
inline Scene load_scene(std::string_view source) { return evaluate(parse(tokenize(source))); }

}  // namespace simplexviz::lns
