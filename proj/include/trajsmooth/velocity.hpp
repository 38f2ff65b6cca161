#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "trajsmooth/curve.hpp"
#include "trajsmooth/errors.hpp"
#include "trajsmooth/evolution.hpp"
#include "trajsmooth/resample.hpp"
#include "trajsmooth/vec2.hpp"

namespace trajsmooth {

/// Per-original-segment state carried through the evolution. Segments are
/// 1-based (j = 1..M-1); endpoint_index holds I(u_0)..I(u_{M-1}).
struct SegmentTrack {
  std::vector<double> length;           // tracked L_j
  std::vector<double> original_length;  // L_j^0
  std::vector<double> discrete_length;  // L_j^d from the last remap
  std::vector<double> dt;               // time budget per segment
  std::vector<char> alive;
  std::vector<std::size_t> endpoint_index;
  int growth_warnings = 0;  // lambda > 0 steps where some L_j grew

  std::size_t segment_count() const { return original_length.size() - 1; }  // M-1
};

inline SegmentTrack make_track(const SegmentSeed& seed, double dt_per_segment) {
  if (!(dt_per_segment > 0.0)) throw InputError("dt per segment must be positive");
  SegmentTrack t;
  t.length = seed.original_length;
  t.original_length = seed.original_length;
  t.discrete_length = seed.original_length;
  t.endpoint_index = seed.endpoint_index;
  const std::size_t m = t.segment_count();
  t.dt.assign(m + 1, dt_per_segment);
  t.dt[0] = 0.0;
  t.alive.assign(m + 1, 1);
  t.alive[0] = 0;
  return t;
}

/// Advance every alive segment's length by the alpha-free length law
///   L_j^{m+1} = L_j^m + tau * sum_{i in segment} h_i k_i beta_i
/// using level-m geometry. The first and last element of each segment use a
/// one-sided curvature that ignores the neighboring segments, and beta is
/// recomputed from that k with the same w:
///   - 3+ elements: copy the nearest element strictly inside the segment,
///     mirroring the global boundary rule k_1 = k_2;
///   - 2 elements: turning angle at the shared vertex over the mean spread,
///     the only curvature information the segment carries by itself;
///   - 1 element: no internal bend, k = 0.
inline void segment_length_update(SegmentTrack& t, const StepQuantities& q, const Params& p) {
  const std::size_t n = q.h.size() - 2;
  bool grew = false;
  for (std::size_t j = 1; j <= t.segment_count(); ++j) {
    if (!t.alive[j]) continue;
    const std::size_t first = t.endpoint_index[j - 1] + 1;
    const std::size_t last = t.endpoint_index[j];
    if (last < first) continue;
    const std::size_t count = last - first + 1;
    double pair_k = 0.0;
    if (count == 2) {
      const Vec2 a = q.tangent[first];
      const Vec2 b = q.tangent[last];
      const double arg = std::clamp(dot(a, b), -1.0, 1.0);
      pair_k = sgn(cross(a, b)) * 2.0 / (q.h[first] + q.h[last]) * std::acos(arg);
    }
    double sum = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
      double k = q.k[i];
      if (i == first || i == last) {
        if (count >= 3)
          k = (i == first) ? q.k[first + 1] : q.k[last - 1];
        else
          k = (count == 2) ? pair_k : 0.0;
      }
      const double beta = (i <= n) ? -p.delta * k + p.lambda * q.w[i] : 0.0;
      sum += q.h[i] * k * beta;
    }
    const double updated = t.length[j] + p.tau * sum;
    if (updated > t.length[j]) grew = true;
    t.length[j] = updated;
  }
  if (grew && p.lambda > 0.0) ++t.growth_warnings;
}

/// Kill any alive segment whose tracked length fell below the shortest
/// current element (strict inequality). Dead segments stay dead.
inline void disappearance_check(SegmentTrack& t, const std::vector<double>& h) {
  const double h_min = *std::min_element(h.begin() + 1, h.end());
  for (std::size_t j = 1; j <= t.segment_count(); ++j) {
    if (t.alive[j] && t.length[j] < h_min) {
      t.length[j] = 0.0;
      t.alive[j] = 0;
    }
  }
}

/// Split each newly dead segment's time budget between the nearest alive
/// neighbors, half each; with no alive neighbor on one side, the whole budget
/// goes to the other. Newly dead segments are the dead ones still holding a
/// budget; they are processed in increasing index order and drained to zero,
/// so the total budget is conserved.
inline void redistribute_dt(SegmentTrack& t) {
  const std::size_t m = t.segment_count();
  for (std::size_t j = 1; j <= m; ++j) {
    if (t.alive[j] || t.dt[j] == 0.0) continue;
    std::size_t prev = 0;
    for (std::size_t q = j; q-- > 1;)
      if (t.alive[q]) { prev = q; break; }
    std::size_t next = 0;
    for (std::size_t q = j + 1; q <= m; ++q)
      if (t.alive[q]) { next = q; break; }
    if (prev && next) {
      t.dt[prev] += 0.5 * t.dt[j];
      t.dt[next] += 0.5 * t.dt[j];
    } else if (prev) {
      t.dt[prev] += t.dt[j];
    } else if (next) {
      t.dt[next] += t.dt[j];
    } else {
      throw NumericalError("all segments disappeared; cannot redistribute time budget");
    }
    t.dt[j] = 0.0;
  }
}

/// Recompute the endpoint grid indices from the tracked lengths: normalize to
/// discrete lengths L_j^d = (L_j / sum L) * L_total and walk the elements,
/// assigning I(u_j) where the cumulative element length crosses the
/// cumulative target (overshoot assigns i-1, equality within 1e-12*L assigns
/// i). Dead segments collapse onto their left endpoint.
inline void remap_indices(SegmentTrack& t, const std::vector<double>& h, double total_len) {
  const std::size_t m = t.segment_count();
  const std::size_t n_elem = h.size() - 1;  // elements 1..n+1

  double tracked_sum = 0.0;
  for (std::size_t j = 1; j <= m; ++j) tracked_sum += t.length[j];
  if (!(tracked_sum > 0.0)) throw NumericalError("tracked segment lengths sum to zero");
  for (std::size_t j = 1; j <= m; ++j)
    t.discrete_length[j] = (t.length[j] / tracked_sum) * total_len;

  const double eq_tol = 1e-12 * total_len;
  std::vector<std::size_t>& idx = t.endpoint_index;
  idx[0] = 0;

  std::size_t j = 1;
  double target = 0.0;
  auto advance_target = [&] {
    // Dead segments add nothing to the target and coincide with their left
    // endpoint; resolve them immediately.
    while (j <= m && !t.alive[j]) {
      idx[j] = idx[j - 1];
      ++j;
    }
    if (j <= m) target += t.discrete_length[j];
  };
  advance_target();

  double walked = 0.0;
  for (std::size_t i = 1; i <= n_elem && j <= m; ++i) {
    walked += h[i];
    if (walked >= target - eq_tol) {
      idx[j] = (walked > target + eq_tol) ? i - 1 : i;
      ++j;
      advance_target();
    }
  }
  if (j <= m) {
    // Elements exhausted: the remaining targets must be within roundoff of
    // the total length, otherwise the walk is inconsistent.
    if (target - walked > 1e-9 * total_len)
      throw NumericalError("segment remap ran out of elements before segment " +
                           std::to_string(j));
    for (; j <= m; ++j) idx[j] = t.alive[j] ? n_elem : idx[j - 1];
  }
  idx[m] = n_elem;  // the last original vertex is the fixed curve endpoint
}

/// Run the whole per-step bookkeeping: length law at level m, disappearance
/// against the post-step grid, budget redistribution, index remap.
inline void track_step(SegmentTrack& t, const StepQuantities& q, const Params& p,
                       const Curve& after) {
  segment_length_update(t, q, p);
  const std::vector<double> h_after = element_lengths(after);
  disappearance_check(t, h_after);
  redistribute_dt(t);
  remap_indices(t, h_after, total_length(h_after));
}

/// Velocity per element of the evolved curve; padded like the element arrays
/// (entries 1..n+1). Within one alive segment all speeds are identical and
/// each vector is parallel to its element.
struct VelocityField {
  std::vector<Vec2> v;
  std::vector<double> speed;
};

/// Assign |v| = L_j^d / dt_j to every element of each alive segment, directed
/// along the local element. Dead segments own no elements, so the alive
/// ranges tile all of 1..n+1.
inline VelocityField compute_velocities(const SegmentTrack& t, const Curve& final_curve) {
  const std::vector<double> h = element_lengths(final_curve);
  const std::size_t n = final_curve.n();
  VelocityField f;
  f.v.assign(n + 2, Vec2{});
  f.speed.assign(n + 2, 0.0);
  for (std::size_t j = 1; j <= t.segment_count(); ++j) {
    if (!t.alive[j]) continue;
    const double mag = t.discrete_length[j] / t.dt[j];
    for (std::size_t i = t.endpoint_index[j - 1] + 1; i <= t.endpoint_index[j]; ++i) {
      f.v[i] = mag * ((final_curve[i] - final_curve[i - 1]) / h[i]);
      f.speed[i] = mag;
    }
  }
  return f;
}

}  // namespace trajsmooth
