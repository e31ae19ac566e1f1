#pragma once

// SVG 1.1 emitter. One element per plan primitive, in plan order, with a
// fixed attribute order and 6-decimal coordinates so output is byte-stable.

#include <cstdio>
#include <string>
#include <string_view>
#include <variant>

#include "simplexviz/color.hpp"
#include "simplexviz/projection.hpp"

namespace simplexviz {

namespace detail {

inline std::string fixed6(double v) {
  if (v == 0.0) v = 0.0;  // no "-0.000000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

inline std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string stroke_attributes(const Stroke& s) {
  std::string out = " stroke=\"" + to_hex(s.color) + "\" stroke-width=\"" + fixed6(s.width) + "\"";
  if (!s.dash.empty()) {
    out += " stroke-dasharray=\"";
    for (std::size_t i = 0; i < s.dash.size(); ++i) {
      if (i) out += ',';
      out += fixed6(s.dash[i]);
    }
    out += '"';
  }
  return out + " stroke-linecap=\"round\"";
}

inline std::string points_attribute(const std::vector<Vec2>& points) {
  std::string out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out += ' ';
    out += fixed6(points[i].x) + "," + fixed6(points[i].y);
  }
  return out;
}

struct SvgElement {
  std::string_view cls;

  std::string operator()(const Segment& s) const {
    return "<line class=\"" + std::string(cls) + "\" x1=\"" + fixed6(s.p0.x) + "\" y1=\"" + fixed6(s.p0.y) +
           "\" x2=\"" + fixed6(s.p1.x) + "\" y2=\"" + fixed6(s.p1.y) + "\"" + stroke_attributes(s.stroke) + "/>";
  }
  std::string operator()(const PolyLine& p) const {
    return "<polyline class=\"" + std::string(cls) + "\" points=\"" + points_attribute(p.points) +
           "\" fill=\"none\"" + stroke_attributes(p.stroke) + " stroke-linejoin=\"round\"/>";
  }
  std::string operator()(const Disc& d) const {
    return "<circle class=\"" + std::string(cls) + "\" cx=\"" + fixed6(d.center.x) + "\" cy=\"" +
           fixed6(d.center.y) + "\" r=\"" + fixed6(d.radius) + "\" fill=\"" + to_hex(d.fill) + "\"/>";
  }
  std::string operator()(const Polygon& p) const {
    return "<polygon class=\"" + std::string(cls) + "\" points=\"" + points_attribute(p.points) + "\" fill=\"" +
           to_hex(p.fill) + "\" fill-opacity=\"" + fixed6(p.opacity) + "\" stroke=\"none\"/>";
  }
  std::string operator()(const Label& l) const {
    return "<text class=\"" + std::string(cls) + "\" x=\"" + fixed6(l.anchor.x) + "\" y=\"" + fixed6(l.anchor.y) +
           "\" font-family=\"sans-serif\" font-size=\"" + fixed6(l.font_size) + "\" fill=\"" + to_hex(l.color) +
           "\" text-anchor=\"middle\" dominant-baseline=\"middle\">" + xml_escape(l.text) + "</text>";
  }
};

}  // namespace detail

inline std::string emit_vector(const RenderPlan& plan) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(plan.width) +
         "\" height=\"" + std::to_string(plan.height) + "\" viewBox=\"0 0 " + std::to_string(plan.width) + " " +
         std::to_string(plan.height) + "\">\n";
  for (const RenderPrimitive& p : plan.primitives) {
    out += "  ";
    out += std::visit(detail::SvgElement{to_string(p.role)}, p.shape);
    out += '\n';
  }
  out += "</svg>\n";
  return out;
}

}  // namespace simplexviz
