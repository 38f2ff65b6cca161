#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "trajsmooth/errors.hpp"
#include "trajsmooth/vec2.hpp"

namespace trajsmooth {

/// Open polyline with fixed endpoints, grid points x_0 .. x_{n+1}.
///
/// The first and last point never move during evolution; only the n interior
/// points are unknowns.
struct Curve {
  std::vector<Vec2> pts;

  std::size_t size() const { return pts.size(); }
  /// Number of interior grid points; size() == n() + 2.
  std::size_t n() const { return pts.size() - 2; }

  Vec2& operator[](std::size_t i) { return pts[i]; }
  Vec2 operator[](std::size_t i) const { return pts[i]; }
};

inline void validate(const Curve& c) {
  if (c.size() < 3) throw InputError("curve needs at least 3 grid points");
  for (const Vec2& p : c.pts)
    if (!is_finite(p)) throw InputError("curve contains non-finite coordinates");
}

// Element arrays are padded so indices line up with grid indexing:
// h[i] = |x_i - x_{i-1}| for i = 1..n+1, entry 0 unused. The same convention
// holds for curvature (per element) and for per-grid-point arrays.

/// Element lengths h_i = |x_i - x_{i-1}|, i = 1..n+1.
///
/// h_floor < 0 selects the default guard 1e-12 * (own total length); elements
/// shorter than the floor abort with NumericalError instead of feeding 1/h
/// terms downstream.
inline std::vector<double> element_lengths(const Curve& c, double h_floor = -1.0) {
  const std::size_t n = c.n();
  std::vector<double> h(n + 2, 0.0);
  double total = 0.0;
  for (std::size_t i = 1; i <= n + 1; ++i) {
    h[i] = distance(c[i - 1], c[i]);
    total += h[i];
  }
  if (!(total > 0.0)) throw NumericalError("curve has zero total length");
  const double floor_len = h_floor >= 0.0 ? h_floor : 1e-12 * total;
  for (std::size_t i = 1; i <= n + 1; ++i)
    if (h[i] < floor_len)
      throw NumericalError("degenerate element " + std::to_string(i) + " (h = " +
                           std::to_string(h[i]) + " < floor " + std::to_string(floor_len) + ")");
  return h;
}

/// L = sum of h_i, in index order.
inline double total_length(const std::vector<double>& h) {
  double total = 0.0;
  for (std::size_t i = 1; i < h.size(); ++i) total += h[i];
  return total;
}

/// Per-element curvature:
///   k_i = sgn(h_{i-1} ^ h_{i+1}) * arccos(h_{i-1}.h_{i+1} / (h_{i-1} h_{i+1})) / (2 h_i)
/// for i = 2..n, with boundary copies k_1 = k_2 and k_{n+1} = k_n. The arccos
/// argument is clamped to [-1,1] (dot products can exceed 1 by ulps).
inline std::vector<double> curvature(const Curve& c, const std::vector<double>& h) {
  const std::size_t n = c.n();
  std::vector<double> k(n + 2, 0.0);
  for (std::size_t i = 2; i <= n; ++i) {
    const Vec2 prev = c[i - 1] - c[i - 2];  // element h_{i-1}
    const Vec2 next = c[i + 1] - c[i];      // element h_{i+1}
    const double arg = std::clamp(dot(prev, next) / (h[i - 1] * h[i + 1]), -1.0, 1.0);
    k[i] = sgn(cross(prev, next)) / (2.0 * h[i]) * std::acos(arg);
  }
  if (n >= 2) {
    k[1] = k[2];
    k[n + 1] = k[n];
  }
  // n == 1: no interior element exists, both curvatures stay 0.
  return k;
}

inline std::vector<double> curvature(const Curve& c) { return curvature(c, element_lengths(c)); }

/// Per-grid-point unit normals N_i = perp((x_{i+1} - x_{i-1}) / |x_{i+1} - x_{i-1}|)
/// for i = 1..n. Entries 0 and n+1 stay zero (endpoints carry no velocity).
inline std::vector<Vec2> grid_normals(const Curve& c, const std::vector<double>& h) {
  const std::size_t n = c.n();
  std::vector<Vec2> normals(n + 2, Vec2{});
  for (std::size_t i = 1; i <= n; ++i) {
    const Vec2 chord = c[i + 1] - c[i - 1];
    const double len = norm(chord);
    if (len < 1e-12 * (h[i] + h[i + 1]))
      throw NumericalError("fold-back at grid point " + std::to_string(i) +
                           ": x_{i+1} coincides with x_{i-1}");
    normals[i] = perp(chord / len);
  }
  return normals;
}

inline std::vector<Vec2> grid_normals(const Curve& c) { return grid_normals(c, element_lengths(c)); }

/// All local geometric quantities of a curve at one time level.
struct CurveGeometry {
  std::vector<double> h;        // element lengths, 1..n+1
  std::vector<Vec2> tangent;    // unit tangent per element, 1..n+1
  std::vector<Vec2> normal;     // unit normal per grid point, 1..n
  std::vector<double> k;        // curvature per element, 1..n+1
  double length = 0.0;
};

inline CurveGeometry compute_geometry(const Curve& c, double h_floor = -1.0) {
  CurveGeometry g;
  g.h = element_lengths(c, h_floor);
  g.length = total_length(g.h);
  const std::size_t n = c.n();
  g.tangent.assign(n + 2, Vec2{});
  for (std::size_t i = 1; i <= n + 1; ++i) g.tangent[i] = (c[i] - c[i - 1]) / g.h[i];
  g.normal = grid_normals(c, g.h);
  g.k = curvature(c, g.h);
  return g;
}

}  // namespace trajsmooth
