#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trajsmooth/attraction.hpp"
#include "trajsmooth/curve.hpp"
#include "trajsmooth/errors.hpp"
#include "trajsmooth/tridiagonal.hpp"
#include "trajsmooth/vec2.hpp"

namespace trajsmooth {

/// Model and solver constants.
struct Params {
  double delta = 0.005;     // curvature diffusion weight
  double lambda = 1.0;      // attraction weight
  double omega = 1.0;       // tangential redistribution speed
  double tau = 1e-4;        // time step
  double epsilon = 6.5e-5;  // stopping tolerance on the mean Hausdorff distance
  long check_interval = 10; // steps between stopping checks (p)
  long max_steps = 1000000;
};

inline void validate(const Params& p) {
  // delta = 0 is accepted on purpose: the pure-redistribution regime
  // (delta = lambda = 0, omega > 0) is a supported mode.
  if (!(p.delta >= 0.0)) throw InputError("delta must be >= 0");
  if (!(p.lambda >= 0.0)) throw InputError("lambda must be >= 0");
  if (!(p.omega >= 0.0)) throw InputError("omega must be >= 0");
  if (!(p.tau > 0.0)) throw InputError("tau must be > 0");
  if (!(p.epsilon > 0.0)) throw InputError("epsilon must be > 0");
  if (p.check_interval < 1) throw InputError("check interval must be >= 1");
  if (p.max_steps < 1) throw InputError("max steps must be >= 1");
}

/// beta_i = -delta k_i + lambda w_i for i = 1..n, zero at the fixed endpoints.
/// k is per element; grid point i pairs with element h_i.
inline std::vector<double> normal_velocity(const std::vector<double>& k,
                                           const std::vector<double>& w, const Params& p) {
  const std::size_t n = k.size() - 2;
  std::vector<double> beta(n + 2, 0.0);
  for (std::size_t i = 1; i <= n; ++i) beta[i] = -p.delta * k[i] + p.lambda * w[i];
  return beta;
}

struct TangentialResult {
  std::vector<double> alpha;  // per grid point, alpha_0 = alpha_{n+1} = 0
  double closure = 0.0;       // recomputed alpha_{n+1} before it is forced to 0
  double mean_kbeta = 0.0;    // <k beta> over the curve
  double max_abs_alpha = 0.0;
};

/// Tangential velocity recurrence
///   alpha_i = alpha_{i-1} + h_i <k beta> - h_i k_i beta_i + omega (L/(n+1) - h_i)
/// seeded with alpha_0 = 0. By construction of <k beta> the recurrence
/// telescopes back to alpha_{n+1} = 0 up to roundoff; the residual is checked
/// and then forced to exactly zero.
inline TangentialResult tangential_velocity(const std::vector<double>& h,
                                            const std::vector<double>& k,
                                            const std::vector<double>& beta, double length,
                                            const Params& p) {
  const std::size_t n = h.size() - 2;
  TangentialResult out;
  out.alpha.assign(n + 2, 0.0);

  double kb_sum = 0.0;  // sum over elements of h_l k_l beta_l
  for (std::size_t l = 1; l <= n + 1; ++l) kb_sum += h[l] * k[l] * beta[l];
  out.mean_kbeta = kb_sum / length;

  const double target = length / static_cast<double>(n + 1);
  double a = 0.0;
  double scale = 0.0;  // constituent magnitudes before cancellation
  for (std::size_t i = 1; i <= n + 1; ++i) {
    const double term = h[i] * out.mean_kbeta - h[i] * k[i] * beta[i] + p.omega * (target - h[i]);
    scale += std::abs(h[i] * out.mean_kbeta) + std::abs(h[i] * k[i] * beta[i]) +
             p.omega * (target + h[i]);
    a += term;
    if (i <= n) {
      out.alpha[i] = a;
      out.max_abs_alpha = std::max(out.max_abs_alpha, std::abs(a));
    } else {
      out.closure = a;
    }
  }

  // Roundoff floor: on an already-uniform curve alpha is pure accumulation
  // noise and the relative bound alone would misfire.
  const double floor = scale * std::max(1e-12, 4e-15 * static_cast<double>(n + 1));
  if (std::abs(out.closure) > std::max(1e-8 * out.max_abs_alpha, floor))
    throw NumericalError("tangential velocity failed to close: alpha_{n+1} = " +
                         std::to_string(out.closure));
  out.alpha[n + 1] = 0.0;
  return out;
}

/// Inflow/outflow splitting of the advection speed per finite volume:
///   b_{i-1/2}^in = max(-alpha_i, 0)   b_{i-1/2}^out = min(-alpha_i, 0)
///   b_{i+1/2}^in = max( alpha_i, 0)   b_{i+1/2}^out = min( alpha_i, 0)
struct IioeCoefficients {
  std::vector<double> in_left, out_left, in_right, out_right;  // per grid point 1..n
};

inline IioeCoefficients iioe_coefficients(const std::vector<double>& alpha) {
  const std::size_t n = alpha.size() - 2;
  IioeCoefficients b;
  b.in_left.assign(n + 2, 0.0);
  b.out_left.assign(n + 2, 0.0);
  b.in_right.assign(n + 2, 0.0);
  b.out_right.assign(n + 2, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    b.in_left[i] = std::max(-alpha[i], 0.0);
    b.out_left[i] = std::min(-alpha[i], 0.0);
    b.in_right[i] = std::max(alpha[i], 0.0);
    b.out_right[i] = std::min(alpha[i], 0.0);
  }
  return b;
}

/// Semi-implicit system for one time step: diffusion and advection inflow
/// implicit, advection outflow and attraction explicit. Dirichlet endpoint
/// values are folded into the right-hand side of the first and last row.
/// Every row is strictly diagonally dominant with margin (h_i + h_{i+1})/(2 tau).
inline TridiagonalSystem assemble_system(const Curve& c, const std::vector<double>& h,
                                         const std::vector<double>& alpha,
                                         const std::vector<double>& w, const Params& p) {
  const std::size_t n = c.n();
  const IioeCoefficients b = iioe_coefficients(alpha);

  TridiagonalSystem s;
  s.sub.assign(n, 0.0);
  s.diag.assign(n, 0.0);
  s.super.assign(n, 0.0);
  s.rhs.assign(n, Vec2{});

  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t r = i - 1;
    const double vol = (h[i] + h[i + 1]) / (2.0 * p.tau);
    s.sub[r] = -p.delta / h[i] - 0.5 * b.in_left[i];
    s.super[r] = -p.delta / h[i + 1] - 0.5 * b.in_right[i];
    s.diag[r] = vol + p.delta / h[i] + p.delta / h[i + 1] + 0.5 * b.in_left[i] + 0.5 * b.in_right[i];
    s.rhs[r] = vol * c[i]
             - 0.5 * b.out_right[i] * (c[i] - c[i + 1])
             - 0.5 * b.out_left[i] * (c[i] - c[i - 1])
             + p.lambda * w[i] * perp(0.5 * (c[i + 1] - c[i - 1]));
  }
  // Fixed endpoints enter as known values.
  s.rhs[0] -= s.sub[0] * c[0];
  s.sub[0] = 0.0;
  s.rhs[n - 1] -= s.super[n - 1] * c[n + 1];
  s.super[n - 1] = 0.0;
#ifndef NDEBUG
  for (std::size_t r = 0; r < n; ++r)
    assert(s.dominance_margin(r) >= (h[r + 1] + h[r + 2]) / (2.0 * p.tau) - 1e-12);
#endif
  return s;
}

/// Everything computed from the curve at one time level before the solve.
struct StepQuantities {
  std::vector<double> h;     // element lengths, 1..n+1
  std::vector<double> k;     // curvature per element, 1..n+1
  std::vector<Vec2> tangent; // unit tangent per element, 1..n+1
  std::vector<Vec2> normal;  // unit normal per grid point, 1..n
  std::vector<double> w;     // attraction component per grid point, 1..n
  std::vector<double> beta;  // normal velocity per grid point
  std::vector<double> alpha; // tangential velocity per grid point
  double length = 0.0;
  double mean_kbeta = 0.0;
  double alpha_closure = 0.0;
  double max_abs_alpha = 0.0;
};

inline StepQuantities compute_quantities(const Curve& c, const OriginalCurve& orig,
                                         const Params& p, double h_floor = -1.0) {
  StepQuantities q;
  CurveGeometry g = compute_geometry(c, h_floor);
  q.h = std::move(g.h);
  q.k = std::move(g.k);
  q.tangent = std::move(g.tangent);
  q.normal = std::move(g.normal);
  q.length = g.length;
  q.w = p.lambda > 0.0 ? attraction_w(orig, c, q.normal)
                       : std::vector<double>(c.n() + 2, 0.0);
  q.beta = normal_velocity(q.k, q.w, p);
  TangentialResult t = tangential_velocity(q.h, q.k, q.beta, q.length, p);
  q.alpha = std::move(t.alpha);
  q.mean_kbeta = t.mean_kbeta;
  q.alpha_closure = t.closure;
  q.max_abs_alpha = t.max_abs_alpha;
  return q;
}

struct StepDiagnostics {
  long step = 0;
  double length = 0.0;
  double mean_kbeta = 0.0;
  double h_min = 0.0;
  double h_max = 0.0;
  double alpha_min = 0.0;
  double alpha_max = 0.0;
};

inline StepDiagnostics make_diagnostics(long step, const StepQuantities& q) {
  StepDiagnostics d;
  d.step = step;
  d.length = q.length;
  d.mean_kbeta = q.mean_kbeta;
  d.h_min = *std::min_element(q.h.begin() + 1, q.h.end());
  d.h_max = *std::max_element(q.h.begin() + 1, q.h.end());
  const auto [lo, hi] = std::minmax_element(q.alpha.begin(), q.alpha.end());
  d.alpha_min = *lo;
  d.alpha_max = *hi;
  return d;
}

namespace detail {

struct InnerStep {
  Curve next;
  StepQuantities quantities;
  TridiagonalSystem system;
};

inline InnerStep advance_one(const Curve& c, const OriginalCurve& orig, const Params& p,
                             double h_floor) {
  InnerStep out;
  out.quantities = compute_quantities(c, orig, p, h_floor);
  out.system = assemble_system(c, out.quantities.h, out.quantities.alpha, out.quantities.w, p);
  const std::vector<Vec2> interior = thomas_solve(out.system);
  out.next.pts.resize(c.size());
  out.next.pts.front() = c.pts.front();
  out.next.pts.back() = c.pts.back();
  for (std::size_t i = 1; i <= c.n(); ++i) out.next.pts[i] = interior[i - 1];
  return out;
}

}  // namespace detail

/// One full semi-implicit time step. Endpoints are copied unchanged.
inline std::pair<Curve, StepDiagnostics> step(const Curve& c, const OriginalCurve& orig,
                                              const Params& p) {
  validate(p);
  validate(c);
  detail::InnerStep s = detail::advance_one(c, orig, p, 1e-12 * orig.length());
  return {std::move(s.next), make_diagnostics(0, s.quantities)};
}

/// Distance between a point and a closed segment [a, b].
inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 e = b - a;
  const double len2 = dot(e, e);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, e) / len2, 0.0, 1.0);
  return distance(p, a + t * e);
}

/// Mean Hausdorff distance between two discrete curves: for each interior
/// point of one curve take the distance to the nearest element of the other,
/// average, and symmetrize. Fixed endpoints are excluded from the point sums
/// (end elements still participate as targets).
inline double mean_hausdorff(const Curve& A, const Curve& B) {
  auto one_sided = [](const Curve& P, const Curve& Q) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= P.n(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 1; j < Q.size(); ++j)
        best = std::min(best, point_segment_distance(P[i], Q[j - 1], Q[j]));
      acc += best;
    }
    return acc / static_cast<double>(P.n());
  };
  return 0.5 * (one_sided(A, B) + one_sided(B, A));
}

enum class StopReason { tolerance, max_steps };

inline const char* to_string(StopReason r) {
  return r == StopReason::tolerance ? "tolerance" : "max_steps";
}

struct ConvergenceCheck {
  long step;
  double distance;  // mean Hausdorff between the curves p steps apart
  double length;    // total curve length at the check
};

struct EvolutionResult {
  Curve curve;
  std::vector<StepDiagnostics> history;
  std::vector<ConvergenceCheck> checks;
  StopReason stop_reason = StopReason::max_steps;
  long steps = 0;
};

/// Observer payload for one completed step: curve at level m and m+1, the
/// level-m quantities and the assembled system.
struct StepRecord {
  long step;  // 0-based index of the step just taken
  const Curve& before;
  const Curve& after;
  const StepQuantities& quantities;
  const TridiagonalSystem& system;
};

using StepObserver = std::function<void(const StepRecord&)>;

struct RunOptions {
  StepObserver observer;
  /// When set, run exactly this many steps and skip the tolerance check.
  std::optional<long> fixed_steps;
};

/// Evolve until the mean Hausdorff distance between the curves at steps m and
/// m + p drops below epsilon (checked every p steps), or until max_steps.
inline EvolutionResult run_until_converged(const Curve& initial, const OriginalCurve& orig,
                                           const Params& p, const RunOptions& options = {}) {
  validate(p);
  validate(initial);
  const double h_floor = 1e-12 * orig.length();
  const long limit = options.fixed_steps ? *options.fixed_steps : p.max_steps;
  if (limit < 1) throw InputError("step limit must be >= 1");

  EvolutionResult result;
  result.curve = initial;
  Curve snapshot = initial;  // curve at the previous check
  for (long m = 0; m < limit; ++m) {
    detail::InnerStep s;
    try {
      s = detail::advance_one(result.curve, orig, p, h_floor);
    } catch (const NumericalError& e) {
      throw NumericalError("step " + std::to_string(m) + ": " + e.what());
    }
    if (options.observer)
      options.observer(StepRecord{m, result.curve, s.next, s.quantities, s.system});
    result.history.push_back(make_diagnostics(m, s.quantities));
    result.curve = std::move(s.next);
    result.steps = m + 1;

    if (!options.fixed_steps && result.steps % p.check_interval == 0) {
      const double d = mean_hausdorff(result.curve, snapshot);
      result.checks.push_back({result.steps, d, total_length(element_lengths(result.curve))});
      if (d < p.epsilon) {
        result.stop_reason = StopReason::tolerance;
        return result;
      }
      snapshot = result.curve;
    }
  }
  result.stop_reason = StopReason::max_steps;
  return result;
}

}  // namespace trajsmooth
