#pragma once

// Pretty-printer for LNS scripts and the Scene -> Script writer used by the
// CSV adapter. Output re-parses to an equal Script and re-evaluates to an
// equal Scene.

#include <array>
#include <charconv>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "simplexviz/lns/evaluator.hpp"
#include "simplexviz/lns/parser.hpp"
#include "simplexviz/scene.hpp"

namespace simplexviz::lns {

/// Shortest text that reads back as exactly the same double.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) throw LnsError("cannot print a non-finite number");
  if (v == 0.0) return "0";  // also folds -0
  std::array<char, 32> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), result.ptr);
}

namespace detail {

inline void print_value(const Value& v, std::string& out, int indent);

inline bool is_flat(const Array& items) {
  for (const Value& item : items) {
    if (item.is_array()) return false;
  }
  return true;
}

inline void print_value(const Value& v, std::string& out, int indent) {
  if (const auto* d = std::get_if<double>(&v.data)) {
    out += format_number(*d);
  } else if (const auto* s = std::get_if<std::string>(&v.data)) {
    if (s->find_first_of("\"\n\r") != std::string::npos) throw LnsError("string cannot be printed: '" + *s + "'");
    out += '"';
    out += *s;
    out += '"';
  } else if (const auto* r = std::get_if<VarRef>(&v.data)) {
    out += r->name;
  } else if (const auto* r = std::get_if<IndexedRef>(&v.data)) {
    out += r->name + "[" + std::to_string(r->index) + "]";
  } else {
    const Array& items = std::get<Array>(v.data);
    if (is_flat(items)) {
      out += '[';
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        print_value(items[i], out, indent);
      }
      out += ']';
      return;
    }
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    out += "[\n";
    for (std::size_t i = 0; i < items.size(); ++i) {
      out += pad;
      print_value(items[i], out, indent + 2);
      out += i + 1 < items.size() ? ",\n" : "\n";
    }
    out += std::string(static_cast<std::size_t>(indent), ' ') + "]";
  }
}

inline std::string print_call(const Call& call) {
  std::string out = call.name + "(";
  for (std::size_t i = 0; i < call.args.size(); ++i) {
    if (i) out += ", ";
    print_value(call.args[i], out, 0);
  }
  return out + ")";
}

}  // namespace detail

inline std::string print(const Script& script) {
  std::string out;
  for (const Statement& statement : script.statements) {
    if (const auto* call = std::get_if<Call>(&statement)) {
      out += detail::print_call(*call) + ";\n";
    } else if (const auto* tc = std::get_if<TryCatch>(&statement)) {
      out += "try { " + detail::print_call(tc->call) + "; } catch (" + tc->exception_name + ") { }\n";
    } else {
      const auto& decl = std::get<VarDecl>(statement);
      out += "var ";
      for (std::size_t i = 0; i < decl.bindings.size(); ++i) {
        if (i) out += ",\n    ";
        out += decl.bindings[i].name + " = ";
        detail::print_value(decl.bindings[i].value, out, 4);
      }
      out += ";\n";
    }
  }
  return out;
}

namespace detail {

inline Value numbers_value(const std::vector<double>& values) {
  Array items;
  for (double v : values) items.push_back(number(v));
  return array(std::move(items));
}

inline Value texts_value(const std::vector<std::string>& values) {
  Array items;
  for (const auto& v : values) items.push_back(text(v));
  return array(std::move(items));
}

inline void append_style(std::vector<Value>& args, const Style& style) {
  args.push_back(text(style.color));
  args.push_back(number(style.stroke_width));
  args.push_back(numbers_value(style.dash));
}

class SceneWriter {
 public:
  explicit SceneWriter(const Scene& scene) : scene_(scene) {}

  Script run() {
    if (!scene_.items.empty() && !scene_.frame) throw LnsError("scene has primitives but no simplex");
    if (scene_.view != ViewSettings{}) {
      wrap(call("setView", {number(scene_.view.view_preset)}));
      wrap(call("setTransform", {number(scene_.view.transform_mode)}));
      wrap(call("setViewPort", {number(scene_.view.azimuth_deg), number(scene_.view.elevation_deg)}));
    }
    if (scene_.prism_axis) {
      const auto* first = scene_.items.empty() ? nullptr : std::get_if<WireSimplex>(&scene_.items.front());
      if (!first || first->kind != WireKind::Prism) {
        throw LnsError("prism scenes must start with the prism wireframe to be written as LNS");
      }
    }
    for (const SceneItem& item : scene_.items) std::visit([&](const auto& prim) { write(prim); }, item);
    if (scene_.show_digits) statements_.emplace_back(call("showDigits", {number(1)}));
    if (scene_.saturation) {
      std::vector<Value> args;
      if (scene_.saturation->reference) args.push_back(number(*scene_.saturation->reference));
      statements_.emplace_back(call("setSaturation", std::move(args)));
    }
    return Script{std::move(statements_)};
  }

 private:
  static Call call(std::string name, std::vector<Value> args) { return Call{std::move(name), std::move(args), {}}; }
  void wrap(Call c) { statements_.emplace_back(TryCatch{std::move(c), "ex"}); }
  void emit(std::string name, std::vector<Value> args) { statements_.emplace_back(call(std::move(name), std::move(args))); }

  [[nodiscard]] Value size() const { return number(scene_.frame->edge); }

  void write(const WireSimplex& w) {
    std::vector<Value> args;
    append_style(args, w.style);
    args.push_back(size());
    switch (w.kind) {
      case WireKind::Triangle: emit("addTriangle", std::move(args)); break;
      case WireKind::Tetrahedron: emit("addTetraedron", std::move(args)); break;
      case WireKind::Prism:
        if (!scene_.prism_axis) throw LnsError("prism wireframe without a time axis");
        args.push_back(number(scene_.prism_axis->length()));
        args.push_back(number(scene_.prism_axis->t_min()));
        args.push_back(number(scene_.prism_axis->t_max()));
        emit("addPrism", std::move(args));
        break;
    }
  }

  void write(const SliceTriangle& s) {
    std::vector<Value> args;
    append_style(args, s.style);
    args.push_back(size());
    args.push_back(number(s.timestamp));
    if (s.opacity != kSliceOpacity) args.push_back(number(s.opacity));
    emit("addSlice", std::move(args));
  }

  void write(const Marker& m) {
    if (m.saturation_sum) throw LnsError("marker saturation overrides have no LNS form");
    if (m.style != Style{m.style.color, 1.0, {}}) throw LnsError("marker stroke styles have no LNS form");
    std::vector<Value> args{text(m.style.color), number(m.radius), text("Circle"), size(),
                            numbers_value(m.coefficients.values())};
    if (m.timestamp) args.push_back(number(*m.timestamp));
    emit(m.role == MarkerRole::ObjectUnderStudy ? "addPoint" : "addSample", std::move(args));
  }

  void write(const PerpendicularFan& f) {
    std::vector<Value> args;
    append_style(args, f.style);
    args.push_back(size());
    args.push_back(numbers_value(f.coefficients.values()));
    args.push_back(texts_value(f.side_colors));
    if (f.timestamp) args.push_back(number(*f.timestamp));
    emit("addIJK", std::move(args));
  }

  void write(const Trajectory& t) {
    std::vector<Value> args;
    append_style(args, t.style);
    args.push_back(size());
    Array rows;
    std::vector<double> times;
    for (const Waypoint& w : t.waypoints) {
      rows.push_back(numbers_value(w.coefficients.values()));
      if (w.timestamp) times.push_back(*w.timestamp);
    }
    if (!times.empty() && times.size() != t.waypoints.size()) {
      throw LnsError("trajectory mixes timed and untimed waypoints");
    }
    args.push_back(array(std::move(rows)));
    if (!times.empty() || t.kind != TrajectoryKind::Observed) args.push_back(numbers_value(times));
    if (t.kind != TrajectoryKind::Observed) args.push_back(text(std::string(to_string(t.kind))));
    emit("addPath", std::move(args));
  }

  void write(const SideLabels& l) {
    if (l.style != Style{l.style.color, 1.0, {}}) throw LnsError("label stroke styles have no LNS form");
    emit("setSideLabels", {texts_value(l.labels), text(l.style.color)});
  }

  const Scene& scene_;
  std::vector<Statement> statements_;
};

}  // namespace detail

/// Script that evaluates back to `scene` under the default registry.
inline Script scene_to_script(const Scene& scene) { return detail::SceneWriter(scene).run(); }

}  // namespace simplexviz::lns
