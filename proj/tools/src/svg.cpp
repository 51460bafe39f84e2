#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace wazkit {
namespace cli {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMargin = 40.0;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double w = hi - lo;
    lo -= 0.05 * w;
    hi += 0.05 * w;
  }
};

double coord(const ExtPoint& p, int axis) { return axis < 0 ? p.time : p.state[static_cast<std::size_t>(axis)]; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

class Mapper {
 public:
  Mapper(Range x, Range y) : x_(x), y_(y) {}
  double px(double v) const { return kMargin + (v - x_.lo) / (x_.hi - x_.lo) * (kWidth - 2 * kMargin); }
  double py(double v) const { return kHeight - kMargin - (v - y_.lo) / (y_.hi - y_.lo) * (kHeight - 2 * kMargin); }

 private:
  Range x_, y_;
};

/// Zero contour of a face over the plot window by marching squares on a
/// fixed lattice; emits short line segments.
void face_contour(std::ofstream& out, const RegionSpec& region, std::size_t face, int ax, int ay,
                  const Range& rx, const Range& ry, const Mapper& map, std::size_t dim) {
  constexpr int N = 120;
  std::vector<double> grid(static_cast<std::size_t>((N + 1) * (N + 1)));
  ExtPoint p;
  p.state.assign(dim, 0.0);
  p.time = 0.0;
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N; ++j) {
      const double x = rx.lo + (rx.hi - rx.lo) * i / N;
      const double y = ry.lo + (ry.hi - ry.lo) * j / N;
      if (ax >= 0) p.state[static_cast<std::size_t>(ax)] = x;
      if (ay >= 0) p.state[static_cast<std::size_t>(ay)] = y;
      if (ax < 0) p.time = x;
      if (ay < 0) p.time = y;
      grid[static_cast<std::size_t>(i * (N + 1) + j)] = region.faces[face].g.eval(region.slot_values(p));
    }
  }
  auto edge = [&](double xa, double ya, double va, double xb, double yb, double vb, double* px,
                  double* py) {
    const double u = va / (va - vb);
    *px = xa + u * (xb - xa);
    *py = ya + u * (yb - ya);
  };
  out << "  <path fill=\"none\" stroke=\"#888888\" stroke-width=\"1\" d=\"";
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const double x0 = rx.lo + (rx.hi - rx.lo) * i / N;
      const double x1 = rx.lo + (rx.hi - rx.lo) * (i + 1) / N;
      const double y0 = ry.lo + (ry.hi - ry.lo) * j / N;
      const double y1 = ry.lo + (ry.hi - ry.lo) * (j + 1) / N;
      const double v00 = grid[static_cast<std::size_t>(i * (N + 1) + j)];
      const double v10 = grid[static_cast<std::size_t>((i + 1) * (N + 1) + j)];
      const double v01 = grid[static_cast<std::size_t>(i * (N + 1) + j + 1)];
      const double v11 = grid[static_cast<std::size_t>((i + 1) * (N + 1) + j + 1)];
      double pts[4][2];
      int n = 0;
      if ((v00 < 0) != (v10 < 0)) edge(x0, y0, v00, x1, y0, v10, &pts[n][0], &pts[n][1]), ++n;
      if ((v10 < 0) != (v11 < 0)) edge(x1, y0, v10, x1, y1, v11, &pts[n][0], &pts[n][1]), ++n;
      if ((v01 < 0) != (v11 < 0)) edge(x0, y1, v01, x1, y1, v11, &pts[n][0], &pts[n][1]), ++n;
      if ((v00 < 0) != (v01 < 0)) edge(x0, y0, v00, x0, y1, v01, &pts[n][0], &pts[n][1]), ++n;
      if (n == 2) {
        out << "M" << fmt(map.px(pts[0][0])) << " " << fmt(map.py(pts[0][1])) << "L"
            << fmt(map.px(pts[1][0])) << " " << fmt(map.py(pts[1][1]));
      }
    }
  }
  out << "\"/>\n";
}

}  // namespace

void write_trajectory_svg(const std::string& path, const Trajectory& traj, const RegionSpec& region,
                          int axis_x, int axis_y) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");

  Range rx, ry;
  for (const ExtPoint& p : traj.samples()) {
    rx.add(coord(p, axis_x));
    ry.add(coord(p, axis_y));
  }
  rx.pad();
  ry.pad();
  const Mapper map(rx, ry);

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n";
  out << "  <rect width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";

  const std::size_t dim = region.symbols.size() - 1 - region.params.size();
  for (std::size_t f = 0; f < region.faces.size(); ++f) {
    // Overlay only when the face depends on nothing outside the projection.
    bool projectable = true;
    for (std::size_t slot : region.faces[f].g.free_slots()) {
      const bool is_x = axis_x >= 0 && slot == static_cast<std::size_t>(axis_x);
      const bool is_y = axis_y >= 0 && slot == static_cast<std::size_t>(axis_y);
      const bool is_t = slot == dim && (axis_x < 0 || axis_y < 0);
      const bool is_param = slot > dim;
      if (!is_x && !is_y && !is_t && !is_param) projectable = false;
    }
    if (projectable) face_contour(out, region, f, axis_x, axis_y, rx, ry, map, dim);
  }

  out << "  <polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\"";
  for (const ExtPoint& p : traj.samples())
    out << fmt(map.px(coord(p, axis_x))) << "," << fmt(map.py(coord(p, axis_y))) << " ";
  out << "\"/>\n";
  out << "</svg>\n";
}

}  // namespace cli
}  // namespace wazkit
