#ifndef FEASOR_PLOT_HPP
#define FEASOR_PLOT_HPP

// Static SVG of a 2-D trajectory over the boundaries of its sets. Points are
// written in data coordinates (the y axis is flipped by a group transform),
// so the polyline vertices are the trace coordinates verbatim.

#include "feasor/io.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace feasor::plot {

struct View {
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

/// Bounding box of the points, padded by 15% and at least one unit wide.
inline View view_of(const std::vector<Vector>& pts) {
  View v{pts.front()[0], pts.front()[0], pts.front()[1], pts.front()[1]};
  for (const auto& p : pts) {
    v.xmin = std::min(v.xmin, p[0]);
    v.xmax = std::max(v.xmax, p[0]);
    v.ymin = std::min(v.ymin, p[1]);
    v.ymax = std::max(v.ymax, p[1]);
  }
  const double span = std::max({v.width(), v.height(), 1.0});
  const double cx = 0.5 * (v.xmin + v.xmax);
  const double cy = 0.5 * (v.ymin + v.ymax);
  const double half = 0.5 * span * 1.3;
  return {cx - half, cx + half, cy - half, cy + half};
}

namespace detail {

using io::format_double;

inline std::string pt(double x, double y) { return format_double(x) + "," + format_double(y); }

inline void line_through(std::ostream& out, const Vector& normal, double offset, const View& v, const char* cls) {
  // Foot of the perpendicular from the view centre, extended both ways.
  const Eigen::Vector2d n(normal[0], normal[1]);
  const Eigen::Vector2d c(0.5 * (v.xmin + v.xmax), 0.5 * (v.ymin + v.ymax));
  const Eigen::Vector2d foot = c - (n.dot(c) - offset) / n.squaredNorm() * n;
  const Eigen::Vector2d dir = Eigen::Vector2d(-n[1], n[0]).normalized();
  const double reach = 2.0 * (v.width() + v.height());
  const Eigen::Vector2d a = foot - reach * dir;
  const Eigen::Vector2d b = foot + reach * dir;
  out << "    <line class=\"" << cls << "\" x1=\"" << format_double(a[0]) << "\" y1=\"" << format_double(a[1])
      << "\" x2=\"" << format_double(b[0]) << "\" y2=\"" << format_double(b[1]) << "\"/>\n";
}

inline void graph(std::ostream& out, const Epigraph1D& e, const View& v) {
  // u runs along whichever screen axis the embedding maps it to.
  const bool u_is_x = e.u_index == 0;
  double lo = u_is_x ? v.xmin : v.ymin;
  const double hi = u_is_x ? v.xmax : v.ymax;
  lo = std::max(lo, e.fn.domain_floor());
  if (!(lo < hi)) return;
  constexpr int kSamples = 400;
  out << "    <polyline class=\"set\" points=\"";
  for (int k = 0; k <= kSamples; ++k) {
    const double u = lo + (hi - lo) * k / kSamples;
    if (!e.fn.in_domain(u)) continue;
    const double fv = e.fn.value(u);
    if (k > 0) out << ' ';
    out << (u_is_x ? pt(u, fv) : pt(fv, u));
  }
  out << "\"/>\n";
}

}  // namespace detail

/// Writes an SVG for the trace rows. `sets` may be empty; kinds that cannot
/// be drawn are listed in `skipped`.
inline void write_svg(std::ostream& out, const std::vector<io::TraceRow>& rows, const std::vector<ConvexSet>& sets,
                      std::vector<std::string>* skipped = nullptr) {
  using detail::format_double;
  std::vector<Vector> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) pts.push_back(r.point);
  const View v = view_of(pts);
  const double stroke = v.width() / 400.0;

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" viewBox=\""
      << format_double(v.xmin) << ' ' << format_double(-v.ymax) << ' ' << format_double(v.width()) << ' '
      << format_double(v.height()) << "\">\n";
  out << "  <defs>\n"
      << "    <marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"5\" "
         "markerHeight=\"5\" orient=\"auto\">\n"
      << "      <path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#c0392b\"/>\n"
      << "    </marker>\n"
      << "    <clipPath id=\"frame\"><rect x=\"" << format_double(v.xmin) << "\" y=\"" << format_double(v.ymin)
      << "\" width=\"" << format_double(v.width()) << "\" height=\"" << format_double(v.height())
      << "\"/></clipPath>\n"
      << "  </defs>\n";
  out << "  <style>\n"
      << "    .set { fill: none; stroke: #2c3e50; stroke-width: " << format_double(stroke) << "; }\n"
      << "    .axis { fill: none; stroke: #bbbbbb; stroke-width: " << format_double(stroke * 0.5) << "; }\n"
      << "    .path { fill: none; stroke: #c0392b; stroke-width: " << format_double(stroke * 0.75)
      << "; marker-mid: url(#arrow); marker-end: url(#arrow); }\n"
      << "    .start { fill: #27ae60; }\n"
      << "  </style>\n";
  out << "  <g transform=\"scale(1,-1)\" clip-path=\"url(#frame)\">\n";

  const Vector ex = make_vector({0.0, 1.0});
  const Vector ey = make_vector({1.0, 0.0});
  detail::line_through(out, ex, 0.0, v, "axis");
  detail::line_through(out, ey, 0.0, v, "axis");

  for (const auto& set : sets) {
    if (set.dimension() != 2) continue;
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Hyperplane> || std::is_same_v<T, Halfspace>) {
            detail::line_through(out, s.normal, s.offset, v, "set");
          } else if constexpr (std::is_same_v<T, Ball>) {
            out << "    <circle class=\"set\" cx=\"" << format_double(s.center[0]) << "\" cy=\""
                << format_double(s.center[1]) << "\" r=\"" << format_double(s.radius) << "\"/>\n";
          } else if constexpr (std::is_same_v<T, Box>) {
            const double x0 = std::max(s.lower[0], v.xmin - v.width());
            const double x1 = std::min(s.upper[0], v.xmax + v.width());
            const double y0 = std::max(s.lower[1], v.ymin - v.height());
            const double y1 = std::min(s.upper[1], v.ymax + v.height());
            out << "    <rect class=\"set\" x=\"" << format_double(x0) << "\" y=\"" << format_double(y0)
                << "\" width=\"" << format_double(x1 - x0) << "\" height=\"" << format_double(y1 - y0) << "\"/>\n";
          } else if constexpr (std::is_same_v<T, AffineSubspace>) {
            if (s.rank() == 1) {
              const auto& r = s.rows().front();
              // Any row of a rank-one consistent system describes the line.
              detail::line_through(out, r.normal, r.offset, v, "set");
            } else if (s.rank() == 0) {
              if (skipped) skipped->push_back("affine (whole plane)");
            } else {
              const Vector p = s.project(Vector::Zero(2));
              out << "    <circle class=\"set\" cx=\"" << format_double(p[0]) << "\" cy=\"" << format_double(p[1])
                  << "\" r=\"" << format_double(stroke * 3) << "\"/>\n";
            }
          } else {
            detail::graph(out, s, v);
          }
        },
        set.variant());
  }

  out << "    <polyline class=\"path\" points=\"";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k > 0) out << ' ';
    out << detail::pt(pts[k][0], pts[k][1]);
  }
  out << "\"/>\n";
  out << "    <circle class=\"start\" cx=\"" << format_double(pts.front()[0]) << "\" cy=\""
      << format_double(pts.front()[1]) << "\" r=\"" << format_double(stroke * 2.5) << "\"/>\n";
  out << "  </g>\n</svg>\n";
}

}  // namespace feasor::plot

#endif  // FEASOR_PLOT_HPP
