#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "trajsmooth/curve.hpp"
#include "trajsmooth/errors.hpp"
#include "trajsmooth/vec2.hpp"

namespace trajsmooth {

/// Per-segment bookkeeping produced by resampling: which grid index each
/// original vertex landed on, and the original segment lengths.
///
/// Segments are 1-based (j = 1..M-1, matching the other padded arrays):
/// segment j runs from vertex u_{j-1} to u_j, original_length[0] is unused.
struct SegmentSeed {
  std::vector<std::size_t> endpoint_index;  // I(u_0) .. I(u_{M-1})
  std::vector<double> original_length;      // L_j^0, entries 1..M-1
};

struct ResampleResult {
  Curve curve;
  SegmentSeed seed;
};

/// Subdivide each raw segment into ceil(len / target_spacing) equal
/// sub-elements. Original vertices are kept bit-exactly as grid points; the
/// added points are uniformly distributed inside each segment.
inline ResampleResult resample(const std::vector<Vec2>& raw, double target_spacing) {
  if (raw.size() < 2) throw InputError("resample needs at least 2 points");
  if (!(target_spacing > 0.0)) throw InputError("target spacing must be positive");

  ResampleResult out;
  out.seed.endpoint_index.reserve(raw.size());
  out.seed.original_length.assign(1, 0.0);
  out.curve.pts.push_back(raw.front());
  out.seed.endpoint_index.push_back(0);

  for (std::size_t j = 1; j < raw.size(); ++j) {
    const Vec2 a = raw[j - 1];
    const Vec2 b = raw[j];
    const double len = distance(a, b);
    if (len == 0.0)
      throw InputError("duplicate consecutive points at raw index " + std::to_string(j) +
                       "; deduplicate the input first");
    const auto pieces = static_cast<std::size_t>(std::ceil(len / target_spacing));
    for (std::size_t q = 1; q < pieces; ++q) {
      const double t = static_cast<double>(q) / static_cast<double>(pieces);
      out.curve.pts.push_back(a + t * (b - a));
    }
    out.curve.pts.push_back(b);
    out.seed.endpoint_index.push_back(out.curve.pts.size() - 1);
    out.seed.original_length.push_back(len);
  }
  return out;
}

/// Default grid density: a quarter of the median raw segment length.
inline double default_spacing(const std::vector<Vec2>& raw) {
  if (raw.size() < 2) throw InputError("need at least 2 points to pick a spacing");
  std::vector<double> lens(raw.size() - 1);
  for (std::size_t j = 1; j < raw.size(); ++j) lens[j - 1] = distance(raw[j - 1], raw[j]);
  std::sort(lens.begin(), lens.end());
  const std::size_t m = lens.size();
  const double median = (m % 2 == 1) ? lens[m / 2] : 0.5 * (lens[m / 2 - 1] + lens[m / 2]);
  if (!(median > 0.0)) throw InputError("input polyline has zero median segment length");
  return median / 4.0;
}

}  // namespace trajsmooth
