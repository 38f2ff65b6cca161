#pragma once

// Shared helpers and independent oracles for the test suites. Oracles here
// must stay independent of the implementation paths they check.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "trajsmooth/curve.hpp"
#include "trajsmooth/vec2.hpp"

namespace testsupport {

using trajsmooth::Curve;
using trajsmooth::Vec2;

/// Platform-stable uniform in [0,1): mt19937_64 output scaled directly, no
/// library distributions (their sequences are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }

 private:
  std::mt19937_64 gen_;
};

/// Dense Gaussian elimination with partial pivoting; the oracle for the
/// Thomas solver. Solves A x = b in place, one right-hand side.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

/// Brute-force point-to-polyline distance by dense sampling of every element.
inline double sampled_polyline_distance(const std::vector<Vec2>& poly, Vec2 p,
                                        int samples_per_element = 10000) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < poly.size(); ++j) {
    const Vec2 a = poly[j - 1];
    const Vec2 d = poly[j] - a;
    for (int s = 0; s <= samples_per_element; ++s) {
      const double t = static_cast<double>(s) / samples_per_element;
      best = std::min(best, trajsmooth::distance(p, a + t * d));
    }
  }
  return best;
}

inline Curve make_curve(std::vector<Vec2> pts) { return Curve{std::move(pts)}; }

/// n+2 points uniformly spaced on the segment [a, b].
inline Curve straight_line(Vec2 a, Vec2 b, std::size_t n) {
  Curve c;
  for (std::size_t i = 0; i <= n + 1; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n + 1);
    c.pts.push_back(a + t * (b - a));
  }
  return c;
}

/// y = amp * sin(freq * 2 pi x) sampled at n+2 uniform x in [0,1].
inline Curve sine_curve(double amp, double freq, std::size_t n) {
  Curve c;
  const double pi = std::acos(-1.0);
  for (std::size_t i = 0; i <= n + 1; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n + 1);
    c.pts.push_back({x, amp * std::sin(freq * 2.0 * pi * x)});
  }
  return c;
}

/// Uniform sampling of a circle of radius r: full polygon when closed arcs
/// are not needed; open arc across angle span otherwise.
inline Curve circle_arc(double r, double angle_from, double angle_to, std::size_t n) {
  Curve c;
  for (std::size_t i = 0; i <= n + 1; ++i) {
    const double t = angle_from + (angle_to - angle_from) * static_cast<double>(i) /
                                      static_cast<double>(n + 1);
    c.pts.push_back({r * std::cos(t), r * std::sin(t)});
  }
  return c;
}

inline Curve rotate_translate(const Curve& c, double angle, Vec2 shift) {
  const double cs = std::cos(angle), sn = std::sin(angle);
  Curve out;
  out.pts.reserve(c.size());
  for (const Vec2& p : c.pts)
    out.pts.push_back({cs * p.x - sn * p.y + shift.x, sn * p.x + cs * p.y + shift.y});
  return out;
}

inline Curve mirror_y(const Curve& c) {
  Curve out;
  out.pts.reserve(c.size());
  for (const Vec2& p : c.pts) out.pts.push_back({p.x, -p.y});
  return out;
}

/// Synthetic noisy cell-track look-alike: directional motion with a loitering
/// jittered cluster over the middle half (little net progress per frame, like
/// a cell in its random-motion phase). Deterministic for a given seed.
inline std::vector<Vec2> noisy_trajectory(std::uint64_t seed = 7, int segments = 48) {
  Rng rng(seed);
  std::vector<Vec2> pts;
  double x = 0.0;
  for (int k = 0; k <= segments; ++k) {
    const bool loiter = k > segments / 4 && k < 3 * segments / 4;
    Vec2 p{x, 0.35 * std::sin(1.3 * x)};
    if (loiter) {
      p.x += rng.uniform(-0.12, 0.12);
      p.y += rng.uniform(-0.12, 0.12);
    }
    pts.push_back(p);
    x += loiter ? 0.02 : 0.125;
  }
  return pts;
}

}  // namespace testsupport
