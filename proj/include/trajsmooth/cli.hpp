#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "trajsmooth/attraction.hpp"
#include "trajsmooth/curve.hpp"
#include "trajsmooth/errors.hpp"
#include "trajsmooth/evolution.hpp"
#include "trajsmooth/io.hpp"
#include "trajsmooth/resample.hpp"
#include "trajsmooth/svg.hpp"
#include "trajsmooth/vec2.hpp"
#include "trajsmooth/velocity.hpp"

namespace trajsmooth {

struct RunConfig {
  Params params;                 // defaults: the cell-track smoothing set
  double spacing = 0.0;          // resampling target spacing; 0 = median/4
  double dt_per_segment = 1.0;   // physical time per original segment
  long stride = 1000;            // intermediate curves in SVG every stride steps
  long fixed_steps = 0;          // > 0: run exactly this many steps
  bool svg = false;
  bool epsilon_relative = false; // scale epsilon by the input bounding-box diagonal
  std::string input_path;
  std::string out_dir = ".";
};

namespace detail {

inline std::string sanitize_id(const std::string& id) {
  std::string out;
  for (char c : id)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out.empty() ? "_" : out;
}

inline std::pair<Vec2, Vec2> bounding_box(const std::vector<Vec2>& pts) {
  Vec2 lo = pts.front(), hi = pts.front();
  for (const Vec2& p : pts) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  return {lo, hi};
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output file " + path.string());
  out << content;
}

struct SmoothedTrajectory {
  std::string id;
  Curve original;  // resampled time-0 curve
  SegmentSeed seed;
  EvolutionResult result;
  std::vector<std::pair<long, Curve>> snapshots;
  SegmentTrack track;
};

inline SmoothedTrajectory smooth_one(const Trajectory& traj, const RunConfig& cfg,
                                     bool with_tracking) {
  const double spacing = cfg.spacing > 0.0 ? cfg.spacing : default_spacing(traj.points);
  ResampleResult rs = resample(traj.points, spacing);

  SmoothedTrajectory out;
  out.id = traj.id;
  out.original = rs.curve;
  out.seed = rs.seed;
  out.track = make_track(rs.seed, cfg.dt_per_segment);

  Params params = cfg.params;
  if (cfg.epsilon_relative) {
    const auto [lo, hi] = bounding_box(traj.points);
    params.epsilon *= norm(hi - lo);
  }

  const OriginalCurve orig(rs.curve);
  RunOptions options;
  if (cfg.fixed_steps > 0) options.fixed_steps = cfg.fixed_steps;
  options.observer = [&](const StepRecord& rec) {
    if (with_tracking) track_step(out.track, rec.quantities, params, rec.after);
    if (cfg.svg && cfg.stride > 0 && (rec.step + 1) % cfg.stride == 0)
      out.snapshots.emplace_back(rec.step + 1, rec.after);
  };
  try {
    out.result = run_until_converged(rs.curve, orig, params, options);
  } catch (const NumericalError& e) {
    throw NumericalError("trajectory '" + traj.id + "': " + e.what());
  }
  if (with_tracking && out.track.growth_warnings > 0)
    std::cerr << "warning: trajectory '" << traj.id << "': tracked segment length grew in "
              << out.track.growth_warnings << " step(s) (lambda > 0)\n";
  return out;
}

inline std::string smoothing_svg(const SmoothedTrajectory& s) {
  const auto [lo, hi] = bounding_box(s.original.pts);
  SvgPlot plot(lo, hi);
  for (const auto& [step, curve] : s.snapshots) plot.polyline(curve.pts, "#9ecae1", 1.0);
  plot.polyline(s.original.pts, "#d62728", 1.5);
  plot.polyline(s.result.curve.pts, "#1f77b4", 2.0);
  plot.circle(s.original.pts.front(), 3.0, "#d62728");
  plot.circle(s.original.pts.back(), 3.0, "black");
  return plot.str();
}

inline std::string velocity_svg(const SmoothedTrajectory& s, const VelocityField& f) {
  const auto [lo, hi] = bounding_box(s.original.pts);
  SvgPlot plot(lo, hi);
  plot.polyline(s.original.pts, "#d62728", 1.0);
  plot.polyline(s.result.curve.pts, "#bbbbbb", 1.0);
  const Curve& c = s.result.curve;
  double v_lo = f.speed[1], v_hi = f.speed[1];
  for (std::size_t i = 1; i < c.size(); ++i) {
    v_lo = std::min(v_lo, f.speed[i]);
    v_hi = std::max(v_hi, f.speed[i]);
  }
  const double span = v_hi > v_lo ? v_hi - v_lo : 1.0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    const double mag = norm(f.v[i]);
    if (mag == 0.0) continue;
    plot.arrow(c[i], f.v[i] / mag, 14.0, speed_color((f.speed[i] - v_lo) / span));
  }
  return plot.str();
}

inline void write_outputs(const SmoothedTrajectory& s, const RunConfig& cfg, bool with_velocity) {
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  const std::string tag = sanitize_id(s.id);

  std::ostringstream curve_csv;
  write_curve_csv(curve_csv, s.id, s.result.curve);
  write_file(dir / ("smoothed_" + tag + ".csv"), curve_csv.str());

  std::ostringstream conv_csv;
  write_convergence_csv(conv_csv, s.id, s.result);
  write_file(dir / ("convergence_" + tag + ".csv"), conv_csv.str());

  if (cfg.svg) write_file(dir / ("smoothed_" + tag + ".svg"), smoothing_svg(s));

  if (with_velocity) {
    const VelocityField field = compute_velocities(s.track, s.result.curve);
    std::ostringstream vel_csv;
    write_velocity_csv(vel_csv, s.id, s.result.curve, field);
    write_file(dir / ("velocity_" + tag + ".csv"), vel_csv.str());
    if (cfg.svg) write_file(dir / ("velocity_" + tag + ".svg"), velocity_svg(s, field));
  }
}

inline ParseResult load_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file " + path);
  ParseResult parsed = parse_trajectories(in);
  for (const std::string& w : parsed.warnings) std::cerr << "warning: " << w << '\n';
  return parsed;
}

inline void run_pipeline(const RunConfig& cfg, bool with_velocity) {
  const ParseResult parsed = load_input(cfg.input_path);
  for (const Trajectory& traj : parsed.trajectories) {
    SmoothedTrajectory s = smooth_one(traj, cfg, with_velocity);
    write_outputs(s, cfg, with_velocity);
    std::cout << "trajectory '" << traj.id << "': " << s.result.steps << " steps, stop reason "
              << to_string(s.result.stop_reason) << ", final length "
              << format_double(s.result.history.back().length) << '\n';
  }
}

/// Semi-ellipse with the major semi-axis (a = 1) vertical and the minor
/// (b = 0.5) horizontal, split into 9 chords; the apex region carries the
/// highest curvature.
inline std::vector<Vec2> semi_ellipse_vertices() {
  std::vector<Vec2> pts;
  const double pi = std::acos(-1.0);
  for (int k = 0; k <= 9; ++k) {
    const double theta = pi - pi * static_cast<double>(k) / 9.0;
    pts.push_back({0.5 * std::cos(theta), std::sin(theta)});
  }
  return pts;
}

inline void run_demo_ellipse(RunConfig cfg) {
  cfg.params.lambda = 0.0;
  cfg.params.delta = 0.05;
  cfg.params.omega = 1.0;
  cfg.params.tau = 0.001;
  if (cfg.fixed_steps <= 0) cfg.fixed_steps = 1000;
  if (cfg.stride == 1000) cfg.stride = 100;
  if (cfg.spacing <= 0.0) cfg.spacing = 0.02;  // keep segments well resolved

  const std::vector<Vec2> raw = semi_ellipse_vertices();
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  std::ostringstream input_csv;
  input_csv << "id,frame,x,y\n";
  for (std::size_t i = 0; i < raw.size(); ++i)
    input_csv << "ellipse," << i << ',' << format_double(raw[i].x) << ','
              << format_double(raw[i].y) << '\n';
  write_file(dir / "demo_input.csv", input_csv.str());

  Trajectory traj;
  traj.id = "ellipse";
  traj.points = raw;
  SmoothedTrajectory s = smooth_one(traj, cfg, true);
  write_outputs(s, cfg, true);
  std::cout << "demo ellipse: " << s.result.steps << " steps, final length "
            << format_double(s.result.history.back().length) << '\n';
}

}  // namespace detail

/// Entry point shared by the binary and the tests. Exit codes: 0 success,
/// 1 input error, 2 numerical failure.
inline int run_cli(std::vector<std::string> args) {
  CLI::App app{"Trajectory smoothing by Lagrangian curve evolution"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input)
      sub->add_option("input", cfg.input_path, "trajectory file (CSV id,frame,x,y or JSON)")
          ->required();
    sub->add_option("-o,--out-dir", cfg.out_dir, "output directory");
    sub->add_option("--lambda", cfg.params.lambda, "attraction weight");
    sub->add_option("--delta", cfg.params.delta, "curvature diffusion weight");
    sub->add_option("--omega", cfg.params.omega, "tangential redistribution speed");
    sub->add_option("--tau", cfg.params.tau, "time step");
    sub->add_option("--epsilon", cfg.params.epsilon, "stopping tolerance (mean Hausdorff)");
    sub->add_flag("--epsilon-relative", cfg.epsilon_relative,
                  "scale epsilon by the input bounding-box diagonal");
    sub->add_option("--check-interval", cfg.params.check_interval,
                    "steps between stopping checks");
    sub->add_option("--max-steps", cfg.params.max_steps, "hard step limit");
    sub->add_option("--steps", cfg.fixed_steps, "run exactly this many steps (disables stopping)");
    sub->add_option("--spacing", cfg.spacing, "resampling target spacing (default: median/4)");
    sub->add_option("--dt", cfg.dt_per_segment, "physical time per original segment");
    sub->add_option("--stride", cfg.stride, "plot intermediate curves every N steps");
    sub->add_flag("--svg", cfg.svg, "emit SVG plots");
  };

  CLI::App* smooth = app.add_subcommand("smooth", "smooth trajectories, write curves and logs");
  add_common(smooth, true);
  CLI::App* velocity =
      app.add_subcommand("velocity", "smooth and reconstruct per-point velocities");
  add_common(velocity, true);
  CLI::App* demo = app.add_subcommand("demo", "built-in experiments");
  std::string which = "ellipse";
  demo->add_option("name", which, "demo name (ellipse)");
  add_common(demo, false);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    validate(cfg.params);
    if (smooth->parsed()) detail::run_pipeline(cfg, false);
    if (velocity->parsed()) detail::run_pipeline(cfg, true);
    if (demo->parsed()) {
      if (which != "ellipse") throw InputError("unknown demo '" + which + "'");
      detail::run_demo_ellipse(cfg);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace trajsmooth
