#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "trajsmooth/curve.hpp"
#include "trajsmooth/errors.hpp"
#include "trajsmooth/evolution.hpp"
#include "trajsmooth/vec2.hpp"
#include "trajsmooth/velocity.hpp"

namespace trajsmooth {

struct TrajectoryRecord {
  std::string id;
  long frame = 0;
  double x = 0.0;
  double y = 0.0;
};

/// One trajectory after grouping, frame-sorting and dedup.
struct Trajectory {
  std::string id;
  std::vector<long> frames;
  std::vector<Vec2> points;
};

struct ParseResult {
  std::vector<Trajectory> trajectories;  // in order of first appearance
  std::vector<std::string> warnings;
};

/// Serialize a double with 17 significant digits (round-trips bit-exactly).
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

inline double parse_real(const std::string& cell, std::size_t line_no, const char* col) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v))
    throw InputError("line " + std::to_string(line_no) + ": bad value '" + cell + "' in column '" +
                     col + "'");
  return v;
}

inline long parse_integer(const std::string& cell, std::size_t line_no, const char* col) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw InputError("line " + std::to_string(line_no) + ": bad value '" + cell + "' in column '" +
                     col + "'");
  return v;
}

/// Group by id (first-appearance order), sort by frame, drop consecutive
/// duplicate points with a warning, and reject ids with fewer than 2 distinct
/// points or with repeated frames.
inline ParseResult assemble(std::vector<TrajectoryRecord> records) {
  ParseResult out;
  std::vector<std::string> order;
  for (const TrajectoryRecord& r : records)
    if (std::find(order.begin(), order.end(), r.id) == order.end()) order.push_back(r.id);

  for (const std::string& id : order) {
    std::vector<TrajectoryRecord> rows;
    for (const TrajectoryRecord& r : records)
      if (r.id == id) rows.push_back(r);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const TrajectoryRecord& a, const TrajectoryRecord& b) { return a.frame < b.frame; });
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].frame == rows[i - 1].frame)
        throw InputError("trajectory '" + id + "': duplicate frame " + std::to_string(rows[i].frame));

    Trajectory t;
    t.id = id;
    int dropped = 0;
    for (const TrajectoryRecord& r : rows) {
      const Vec2 p{r.x, r.y};
      if (!t.points.empty() && p == t.points.back()) {
        ++dropped;
        continue;
      }
      t.points.push_back(p);
      t.frames.push_back(r.frame);
    }
    if (dropped > 0)
      out.warnings.push_back("trajectory '" + id + "': dropped " + std::to_string(dropped) +
                             " consecutive duplicate point(s)");
    if (t.points.size() < 2)
      throw InputError("trajectory '" + id + "' has fewer than 2 distinct points");
    out.trajectories.push_back(std::move(t));
  }
  return out;
}

}  // namespace detail

/// CSV input with header id,frame,x,y (id optional).
inline ParseResult parse_trajectory_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw InputError("empty input");
  ++line_no;
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);  // UTF-8 BOM (Excel)
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = detail::split_csv_line(line);
  auto col_of = [&](const char* name) -> int {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == name) return static_cast<int>(c);
    return -1;
  };
  const int id_col = col_of("id");
  // smoothed-curve output (id,point_index,x,y) reparses as a trajectory
  int frame_col = col_of("frame");
  if (frame_col < 0) frame_col = col_of("point_index");
  const int x_col = col_of("x");
  const int y_col = col_of("y");
  if (frame_col < 0) throw InputError("missing header column 'frame'");
  if (x_col < 0) throw InputError("missing header column 'x'");
  if (y_col < 0) throw InputError("missing header column 'y'");

  std::vector<TrajectoryRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    const std::vector<std::string> cells = detail::split_csv_line(line);
    if (cells.size() != header.size())
      throw InputError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " cells, got " + std::to_string(cells.size()));
    TrajectoryRecord r;
    r.id = id_col >= 0 ? cells[id_col] : "0";
    r.frame = detail::parse_integer(cells[frame_col], line_no, "frame");
    r.x = detail::parse_real(cells[x_col], line_no, "x");
    r.y = detail::parse_real(cells[y_col], line_no, "y");
    records.push_back(std::move(r));
  }
  return detail::assemble(std::move(records));
}

/// JSON input: array of {frame, x, y} objects, id optional per object.
inline ParseResult parse_trajectory_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad JSON: ") + e.what());
  }
  if (!doc.is_array()) throw InputError("JSON input must be an array of {frame, x, y} objects");
  std::vector<TrajectoryRecord> records;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const nlohmann::json& row = doc[i];
    if (!row.is_object() || !row.contains("frame") || !row.contains("x") || !row.contains("y"))
      throw InputError("JSON element " + std::to_string(i) + " is missing frame/x/y");
    TrajectoryRecord r;
    r.id = row.contains("id") ? row["id"].get<std::string>() : "0";
    r.frame = row["frame"].get<long>();
    r.x = row["x"].get<double>();
    r.y = row["y"].get<double>();
    if (!std::isfinite(r.x) || !std::isfinite(r.y))
      throw InputError("JSON element " + std::to_string(i) + " has non-finite coordinates");
    records.push_back(std::move(r));
  }
  return detail::assemble(std::move(records));
}

/// Sniff the format: a leading '[' means JSON, anything else CSV.
inline ParseResult parse_trajectories(std::istream& in) {
  int ch = in.peek();
  while (ch != EOF && std::isspace(ch)) {
    in.get();
    ch = in.peek();
  }
  if (ch == '[') return parse_trajectory_json(in);
  return parse_trajectory_csv(in);
}

inline void write_curve_csv(std::ostream& out, const std::string& id, const Curve& c) {
  out << "id,point_index,x,y\n";
  for (std::size_t i = 0; i < c.size(); ++i)
    out << id << ',' << i << ',' << format_double(c[i].x) << ',' << format_double(c[i].y) << '\n';
}

/// One row per element, keyed by the element's right grid point.
inline void write_velocity_csv(std::ostream& out, const std::string& id, const Curve& c,
                               const VelocityField& f) {
  out << "id,point_index,x,y,vx,vy,speed\n";
  for (std::size_t i = 1; i < c.size(); ++i)
    out << id << ',' << i << ',' << format_double(c[i].x) << ',' << format_double(c[i].y) << ','
        << format_double(f.v[i].x) << ',' << format_double(f.v[i].y) << ','
        << format_double(f.speed[i]) << '\n';
}

inline void write_convergence_csv(std::ostream& out, const std::string& id,
                                  const EvolutionResult& r) {
  out << "id,step,total_length,mean_hausdorff,stop_reason\n";
  for (std::size_t c = 0; c < r.checks.size(); ++c) {
    const bool last = (c + 1 == r.checks.size()) && (r.checks[c].step == r.steps);
    out << id << ',' << r.checks[c].step << ',' << format_double(r.checks[c].length) << ','
        << format_double(r.checks[c].distance) << ',' << (last ? to_string(r.stop_reason) : "")
        << '\n';
  }
  if (r.checks.empty() || r.checks.back().step != r.steps) {
    out << id << ',' << r.steps << ',' << format_double(total_length(element_lengths(r.curve)))
        << ",," << to_string(r.stop_reason) << '\n';
  }
}

}  // namespace trajsmooth
