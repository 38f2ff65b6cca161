#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "trajsmooth/vec2.hpp"

namespace trajsmooth {

/// Map t in [0,1] to a viridis-style gradient (blue -> green -> yellow),
/// matching the convention that yellow marks high speed.
inline std::string speed_color(double t) {
  static const double anchors[][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int seg = std::min(static_cast<int>(t), 3);
  const double f = t - seg;
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::lround(anchors[seg][0] + f * (anchors[seg + 1][0] - anchors[seg][0]))),
                static_cast<int>(std::lround(anchors[seg][1] + f * (anchors[seg + 1][1] - anchors[seg][1]))),
                static_cast<int>(std::lround(anchors[seg][2] + f * (anchors[seg + 1][2] - anchors[seg][2]))));
  return buf;
}

/// Minimal deterministic SVG canvas over world coordinates (y up).
class SvgPlot {
 public:
  SvgPlot(Vec2 world_lo, Vec2 world_hi, double width_px = 900.0) {
    const double w = std::max(world_hi.x - world_lo.x, 1e-12);
    const double h = std::max(world_hi.y - world_lo.y, 1e-12);
    const double margin = 0.05 * std::max(w, h);
    lo_ = {world_lo.x - margin, world_lo.y - margin};
    scale_ = width_px / (w + 2.0 * margin);
    width_ = width_px;
    height_ = (h + 2.0 * margin) * scale_;
  }

  void polyline(const std::vector<Vec2>& pts, const std::string& color, double stroke_px = 1.5) {
    if (pts.size() < 2) return;
    body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << fmt(stroke_px)
          << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec2 p = to_px(pts[i]);
      body_ << (i ? " " : "") << fmt(p.x) << ',' << fmt(p.y);
    }
    body_ << "\"/>\n";
  }

  void circle(Vec2 at, double radius_px, const std::string& color) {
    const Vec2 p = to_px(at);
    body_ << "<circle cx=\"" << fmt(p.x) << "\" cy=\"" << fmt(p.y) << "\" r=\"" << fmt(radius_px)
          << "\" fill=\"" << color << "\"/>\n";
  }

  /// Arrow of fixed pixel length from a world anchor along a unit direction.
  void arrow(Vec2 at, Vec2 unit_dir, double length_px, const std::string& color) {
    const Vec2 a = to_px(at);
    const Vec2 d{unit_dir.x, -unit_dir.y};  // pixel y points down
    const Vec2 b = a + length_px * d;
    const Vec2 side = perp(d);
    const Vec2 w1 = b - 0.3 * length_px * d + 0.15 * length_px * side;
    const Vec2 w2 = b - 0.3 * length_px * d - 0.15 * length_px * side;
    body_ << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" d=\"M " << fmt(a.x)
          << ' ' << fmt(a.y) << " L " << fmt(b.x) << ' ' << fmt(b.y) << " M " << fmt(w1.x) << ' '
          << fmt(w1.y) << " L " << fmt(b.x) << ' ' << fmt(b.y) << " L " << fmt(w2.x) << ' '
          << fmt(w2.y) << "\"/>\n";
  }

  std::string str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width_) << "\" height=\""
        << fmt(height_) << "\" viewBox=\"0 0 " << fmt(width_) << ' ' << fmt(height_) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  Vec2 to_px(Vec2 world) const {
    return {(world.x - lo_.x) * scale_, height_ - (world.y - lo_.y) * scale_};
  }

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
  }

  Vec2 lo_{};
  double scale_ = 1.0;
  double width_ = 0.0;
  double height_ = 0.0;
  std::ostringstream body_;
};

}  // namespace trajsmooth
