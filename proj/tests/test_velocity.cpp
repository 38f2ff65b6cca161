#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "support.hpp"
#include "trajsmooth/attraction.hpp"
#include "trajsmooth/evolution.hpp"
#include "trajsmooth/resample.hpp"
#include "trajsmooth/velocity.hpp"

using namespace trajsmooth;
using testsupport::Rng;

namespace {

Params plain(double delta, double lambda, double omega, double tau) {
  Params p;
  p.delta = delta;
  p.lambda = lambda;
  p.omega = omega;
  p.tau = tau;
  return p;
}

SegmentTrack three_segments(std::vector<double> lengths, std::vector<char> alive,
                            std::vector<double> dt) {
  SegmentTrack t;
  t.length = {0.0};
  t.original_length = {0.0};
  t.discrete_length = {0.0};
  t.dt = {0.0};
  t.alive = {0};
  for (std::size_t j = 0; j < lengths.size(); ++j) {
    t.length.push_back(lengths[j]);
    t.original_length.push_back(lengths[j]);
    t.discrete_length.push_back(lengths[j]);
    t.dt.push_back(dt[j]);
    t.alive.push_back(alive[j]);
  }
  t.endpoint_index.assign(lengths.size() + 1, 0);
  return t;
}

double total_dt(const SegmentTrack& t) {
  return std::accumulate(t.dt.begin(), t.dt.end(), 0.0);
}

}  // namespace

TEST_CASE("segment length update: straight segments do not change") {
  const auto rs = resample({{0, 0}, {2, 0}, {4, 0}, {6, 0}}, 0.5);
  SegmentTrack track = make_track(rs.seed, 1.0);
  const OriginalCurve orig(rs.curve);
  const auto q = compute_quantities(rs.curve, orig, plain(0.05, 0.0, 1.0, 1e-3));
  segment_length_update(track, q, plain(0.05, 0.0, 1.0, 1e-3));
  for (std::size_t j = 1; j <= track.segment_count(); ++j) {
    CHECK(track.length[j] == track.original_length[j]);
  }
}

TEST_CASE("segment length update: lambda = 0 shrinks curved segments") {
  // At t = 0 a resampled polyline is straight inside every segment and the
  // one-sided curvature ignores the corners, so the decrease starts once
  // diffusion has rounded the corners; after a few steps it is strict.
  std::vector<Vec2> raw;
  const double pi = std::acos(-1.0);
  for (int k = 0; k <= 8; ++k) {
    const double a = pi - pi * k / 8.0;
    raw.push_back({std::cos(a), std::sin(a)});
  }
  const auto rs = resample(raw, 0.05);
  SegmentTrack track = make_track(rs.seed, 1.0);
  const OriginalCurve orig(rs.curve);
  const Params p = plain(0.05, 0.0, 1.0, 1e-3);
  Curve c = rs.curve;
  for (int m = 0; m < 10; ++m) {
    const auto q = compute_quantities(c, orig, p);
    const auto next = step(c, orig, p).first;
    track_step(track, q, p, next);
    c = next;
  }
  for (std::size_t j = 1; j <= track.segment_count(); ++j) {
    CHECK(track.length[j] < track.original_length[j]);  // - delta sum h k^2 < 0
  }
}

TEST_CASE("disappearance: strict threshold") {
  std::vector<double> h{0.0, 1.0, 0.5, 2.0};  // h_min = 0.5

  SegmentTrack t = three_segments({0.25, 0.5, 3.0}, {1, 1, 1}, {1, 1, 1});
  disappearance_check(t, h);
  CHECK(t.alive[1] == 0);  // 0.25 < 0.5 dies
  CHECK(t.length[1] == 0.0);
  CHECK(t.alive[2] == 1);  // exactly h_min survives
  CHECK(t.length[2] == 0.5);
  CHECK(t.alive[3] == 1);
}

TEST_CASE("disappearance: dead is absorbing") {
  std::vector<double> h{0.0, 1.0, 1.0, 1.0};
  SegmentTrack t = three_segments({0.5, 4.0, 4.0}, {1, 1, 1}, {1, 1, 1});
  disappearance_check(t, h);
  REQUIRE(t.alive[1] == 0);
  for (int rep = 0; rep < 100; ++rep) {
    t.length[1] = 0.0;  // the update law keeps dead segments at zero
    disappearance_check(t, h);
    CHECK(t.alive[1] == 0);
    CHECK(t.length[1] == 0.0);
  }
}

TEST_CASE("redistribute dt: alive-dead-alive splits in half") {
  SegmentTrack t = three_segments({1, 0, 1}, {1, 0, 1}, {1, 1, 1});
  redistribute_dt(t);
  CHECK(t.dt[1] == 1.5);
  CHECK(t.dt[2] == 0.0);
  CHECK(t.dt[3] == 1.5);
  CHECK(total_dt(t) == 3.0);
}

TEST_CASE("redistribute dt: adjacent deaths cascade to the alive neighbors") {
  SegmentTrack t = three_segments({1, 0, 0, 1}, {1, 0, 0, 1}, {1, 1, 1, 1});
  redistribute_dt(t);
  CHECK(t.dt[1] == 2.0);
  CHECK(t.dt[2] == 0.0);
  CHECK(t.dt[3] == 0.0);
  CHECK(t.dt[4] == 2.0);
  CHECK(total_dt(t) == 4.0);
}

TEST_CASE("redistribute dt: one-sided when an end segment dies") {
  SegmentTrack t = three_segments({0, 1, 1}, {0, 1, 1}, {1, 1, 1});
  redistribute_dt(t);
  CHECK(t.dt[1] == 0.0);
  CHECK(t.dt[2] == 2.0);  // no alive predecessor: everything goes right
  CHECK(t.dt[3] == 1.0);
  CHECK(total_dt(t) == 3.0);
}

TEST_CASE("redistribute dt: nothing to do without deaths") {
  SegmentTrack t = three_segments({1, 1, 1}, {1, 1, 1}, {1.5, 2.5, 0.5});
  redistribute_dt(t);
  CHECK(t.dt[1] == 1.5);
  CHECK(t.dt[2] == 2.5);
  CHECK(t.dt[3] == 0.5);
}

TEST_CASE("remap: equal alive thirds split a uniform grid evenly") {
  std::vector<double> h(13, 1.0);
  h[0] = 0.0;  // 12 unit elements
  SegmentTrack t = three_segments({4, 4, 4}, {1, 1, 1}, {1, 1, 1});
  t.endpoint_index = {0, 0, 0, 0};
  remap_indices(t, h, 12.0);
  CHECK(t.endpoint_index == std::vector<std::size_t>{0, 4, 8, 12});
  CHECK_THAT(t.discrete_length[1] + t.discrete_length[2] + t.discrete_length[3],
             Catch::Matchers::WithinRel(12.0, 1e-15));
}

TEST_CASE("remap: dead middle segment collapses onto its left endpoint") {
  // hand trace on a 12-element uniform grid with tracked lengths 6, 0, 6
  std::vector<double> h(13, 1.0);
  h[0] = 0.0;
  SegmentTrack t = three_segments({6, 0, 6}, {1, 0, 1}, {1, 1, 1});
  t.endpoint_index = {0, 0, 0, 0};
  remap_indices(t, h, 12.0);
  CHECK(t.endpoint_index == std::vector<std::size_t>{0, 6, 6, 12});
}

TEST_CASE("remap: discrete lengths renormalize to the curve length") {
  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = rng.integer(2, 8);
    std::vector<double> lengths, dt;
    std::vector<char> alive;
    for (int j = 0; j < m; ++j) {
      lengths.push_back(rng.uniform(0.5, 2.0));
      alive.push_back(1);
      dt.push_back(1.0);
    }
    SegmentTrack t = three_segments(lengths, alive, dt);
    t.endpoint_index.assign(m + 1, 0);

    const int n_elem = rng.integer(m + 2, 40);
    std::vector<double> h{0.0};
    double total = 0.0;
    for (int i = 0; i < n_elem; ++i) {
      h.push_back(rng.uniform(0.01, 0.3));
      total += h.back();
    }
    remap_indices(t, h, total);

    double sum_ld = 0.0;
    for (int j = 1; j <= m; ++j) sum_ld += t.discrete_length[j];
    CHECK_THAT(sum_ld, Catch::Matchers::WithinRel(total, 16 * (m + 1) * 1e-16));
    CHECK(t.endpoint_index[0] == 0);
    CHECK(t.endpoint_index[m] == static_cast<std::size_t>(n_elem));
    for (int j = 1; j <= m; ++j) CHECK(t.endpoint_index[j] >= t.endpoint_index[j - 1]);
  }
}

TEST_CASE("velocities: unevolved straight trajectory recovers original speed") {
  const auto rs = resample({{0, 0}, {2, 0}, {4, 0}, {6, 0}}, 0.5);
  const SegmentTrack track = make_track(rs.seed, 1.0);
  const VelocityField f = compute_velocities(track, rs.curve);
  for (std::size_t i = 1; i <= rs.curve.n() + 1; ++i) {
    CHECK_THAT(f.speed[i], Catch::Matchers::WithinAbs(2.0, 1e-13));
    CHECK_THAT(f.v[i].x, Catch::Matchers::WithinAbs(2.0, 1e-13));
    CHECK_THAT(f.v[i].y, Catch::Matchers::WithinAbs(0.0, 1e-15));
  }
}

TEST_CASE("velocities: parallel to elements, constant within a segment") {
  const auto rs = resample({{0, 0}, {1, 0.4}, {2.2, -0.3}, {3.0, 0.2}}, 0.2);
  SegmentTrack track = make_track(rs.seed, 1.0);
  const VelocityField f = compute_velocities(track, rs.curve);
  const Curve& c = rs.curve;
  for (std::size_t i = 1; i <= c.n() + 1; ++i) {
    const Vec2 e = c[i] - c[i - 1];
    CHECK_THAT(cross(f.v[i], e), Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK(dot(f.v[i], e) > 0.0);  // points along the walk direction
  }
  for (std::size_t j = 1; j <= track.segment_count(); ++j) {
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = track.endpoint_index[j - 1] + 1; i <= track.endpoint_index[j]; ++i) {
      lo = std::min(lo, f.speed[i]);
      hi = std::max(hi, f.speed[i]);
    }
    CHECK(hi / lo == 1.0);  // identical doubles by construction
  }
}

TEST_CASE("velocities: dead segments own no elements, coverage stays complete") {
  std::vector<Vec2> pts;
  for (int i = 0; i <= 12; ++i) pts.push_back({static_cast<double>(i), 0.0});
  const Curve c{pts};  // 12 unit elements, n = 11
  SegmentTrack t = three_segments({5, 0, 7}, {1, 0, 1}, {1.5, 0, 1.5});
  t.endpoint_index = {0, 5, 5, 12};
  const VelocityField f = compute_velocities(t, c);
  for (std::size_t i = 1; i <= 5; ++i)
    CHECK_THAT(f.speed[i], Catch::Matchers::WithinRel(5.0 / 1.5, 1e-14));
  for (std::size_t i = 6; i <= 12; ++i)
    CHECK_THAT(f.speed[i], Catch::Matchers::WithinRel(7.0 / 1.5, 1e-14));
}

TEST_CASE("track step: lambda = 0 keeps every tracked length non-increasing") {
  // quarter-turn arc split into a few original segments
  std::vector<Vec2> raw;
  const double pi = std::acos(-1.0);
  for (int k = 0; k <= 6; ++k) {
    const double a = pi - pi * k / 6.0;
    raw.push_back({0.5 * std::cos(a), std::sin(a)});
  }
  const auto rs = resample(raw, 0.05);
  const OriginalCurve orig(rs.curve);
  const Params p = plain(0.05, 0.0, 1.0, 1e-3);

  SegmentTrack track = make_track(rs.seed, 1.0);
  const double dt_total = total_dt(track);
  Curve c = rs.curve;
  std::vector<double> prev(track.length);
  for (int m = 0; m < 60; ++m) {
    const auto q = compute_quantities(c, orig, p);
    const auto s = assemble_system(c, q.h, q.alpha, q.w, p);
    const auto interior = thomas_solve(s);
    Curve next = c;
    for (std::size_t i = 1; i <= c.n(); ++i) next.pts[i] = interior[i - 1];
    track_step(track, q, p, next);
    for (std::size_t j = 1; j <= track.segment_count(); ++j) {
      CHECK(track.length[j] <= prev[j] + 1e-12 * track.original_length[j]);
    }
    prev = track.length;
    c = std::move(next);
  }
  CHECK(total_dt(track) == dt_total);
}
