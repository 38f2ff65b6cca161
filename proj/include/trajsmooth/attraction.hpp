#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "trajsmooth/curve.hpp"
#include "trajsmooth/errors.hpp"
#include "trajsmooth/vec2.hpp"

namespace trajsmooth {

enum class AttractionSource { perpendicular_foot, nearest_vertex };

/// Shortest vector from a query point to the original curve.
struct AttractionResult {
  Vec2 vector;      // x^0 - p, pointing from the query toward the curve
  double distance;  // |vector|
  AttractionSource source;
};

/// Immutable attraction target: the time-0 grid points with precomputed
/// per-element direction and length. Shareable across threads.
class OriginalCurve {
 public:
  explicit OriginalCurve(std::vector<Vec2> vertices) : verts_(std::move(vertices)) {
    if (verts_.size() < 2) throw InputError("original curve needs at least 2 vertices");
    const std::size_t m = verts_.size() - 1;  // element count
    dir_.assign(m + 1, Vec2{});
    len_.assign(m + 1, 0.0);
    Vec2 lo = verts_[0], hi = verts_[0];
    for (const Vec2& v : verts_) {
      lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
      hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
    }
    for (std::size_t j = 1; j <= m; ++j) {
      const Vec2 e = verts_[j] - verts_[j - 1];
      len_[j] = norm(e);
      if (!(len_[j] > 0.0))
        throw InputError("original curve has a zero-length element at index " + std::to_string(j));
      dir_[j] = e / len_[j];
      length_ += len_[j];
    }
    // Cap on the initial D_min: twice the bounding-box diameter can never
    // reject a valid foot for queries near the curve.
    cap_ = 2.0 * norm(hi - lo);
    if (cap_ == 0.0) cap_ = 1.0;
  }

  explicit OriginalCurve(const Curve& c) : OriginalCurve(c.pts) {}

  const std::vector<Vec2>& vertices() const { return verts_; }
  std::size_t element_count() const { return verts_.size() - 1; }
  Vec2 element_dir(std::size_t j) const { return dir_[j]; }
  double element_len(std::size_t j) const { return len_[j]; }
  double length() const { return length_; }
  double default_cap() const { return cap_; }

 private:
  std::vector<Vec2> verts_;
  std::vector<Vec2> dir_;    // unit direction per element, 1..m
  std::vector<double> len_;  // element length, 1..m
  double length_ = 0.0;
  double cap_ = 0.0;
};

/// Scan every original element for the perpendicular foot of p; a foot is a
/// candidate only if it lies within the closed segment (projection parameter
/// in [0,1] with 1e-12 slack) and beats the running minimum, ties broken by
/// lowest element index. Vertices compete as candidates too: where p projects
/// past both neighboring elements the shortest vector ends in a vertex, even
/// when some farther element still yields an in-range foot. Returns the
/// vector x^0 - p realizing the shortest distance to the original polyline.
inline AttractionResult closest_vector(const OriginalCurve& orig, Vec2 p, double cap) {
  if (!(cap > 0.0)) throw InputError("closest_vector needs a positive search cap");
  constexpr double kEndSlack = 1e-12;

  double d_foot = cap;
  Vec2 foot{};
  bool found = false;
  for (std::size_t j = 1; j <= orig.element_count(); ++j) {
    const Vec2 a = orig.vertices()[j - 1];
    double t = dot(p - a, orig.element_dir(j)) / orig.element_len(j);
    if (t < -kEndSlack || t > 1.0 + kEndSlack) continue;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 q = a + (t * orig.element_len(j)) * orig.element_dir(j);
    const double d = distance(q, p);
    if (d < d_foot) {
      d_foot = d;
      foot = q;
      found = true;
    }
  }

  double d_vert = std::numeric_limits<double>::infinity();
  Vec2 vert{};
  for (const Vec2& v : orig.vertices()) {
    const double d = distance(v, p);
    if (d < d_vert) {
      d_vert = d;
      vert = v;
    }
  }

  if (found && d_foot <= d_vert)
    return {foot - p, d_foot, AttractionSource::perpendicular_foot};
  return {vert - p, d_vert, AttractionSource::nearest_vertex};
}

inline AttractionResult closest_vector(const OriginalCurve& orig, Vec2 p) {
  return closest_vector(orig, p, orig.default_cap());
}

/// w_i = (x^0 - x_i) . N_i for interior grid points i = 1..n; endpoint
/// entries stay zero (their velocity is zero, w is never used there).
inline std::vector<double> attraction_w(const OriginalCurve& orig, const Curve& c,
                                        const std::vector<Vec2>& normals, double cap) {
  const std::size_t n = c.n();
  std::vector<double> w(n + 2, 0.0);
  for (std::size_t i = 1; i <= n; ++i)
    w[i] = dot(closest_vector(orig, c[i], cap).vector, normals[i]);
  return w;
}

inline std::vector<double> attraction_w(const OriginalCurve& orig, const Curve& c,
                                        const std::vector<Vec2>& normals) {
  return attraction_w(orig, c, normals, orig.default_cap());
}

}  // namespace trajsmooth
