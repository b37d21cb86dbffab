#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include <boost/rational.hpp>

#include "fsmt/path.hpp"

namespace fsmt {

using Ratio = boost::rational<std::int64_t>;

// Test-set properties: len, |P|, avlen, unique, ut.
struct MetricsReport {
  std::size_t total_steps = 0;
  std::size_t path_count = 0;
  Ratio avg_length{0};
  std::size_t unique_edges = 0;
  Ratio duplication_ratio{0};

  bool operator==(const MetricsReport&) const = default;
};

inline MetricsReport path_set_metrics(std::span<const TestPath> paths) {
  MetricsReport r;
  r.path_count = paths.size();
  EdgeIndex universe = 0;
  for (const auto& p : paths) {
    r.total_steps += p.length();
    for (EdgeIndex e : p.edges) universe = std::max(universe, e + 1);
  }
  r.unique_edges = edge_union(paths, universe).size();
  const auto len = static_cast<std::int64_t>(r.total_steps);
  if (r.path_count > 0) r.avg_length = Ratio(len, static_cast<std::int64_t>(r.path_count));
  if (r.unique_edges > 0) r.duplication_ratio = Ratio(len, static_cast<std::int64_t>(r.unique_edges));
  return r;
}

/// Decimal rendering with round-half-up at `digits` places, done in integer
/// arithmetic so 0.25 -> "0.3" regardless of binary floating point.
inline std::string to_decimal(const Ratio& r, int digits) {
  std::int64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const bool negative = r < 0;
  const std::int64_t num = negative ? -r.numerator() : r.numerator();
  const std::int64_t den = r.denominator();
  const std::int64_t scaled = (num * scale * 2 + den) / (den * 2);
  std::string whole = std::to_string(scaled / scale);
  std::string out = (negative && scaled != 0 ? "-" : "") + whole;
  if (digits > 0) {
    std::string frac = std::to_string(scaled % scale);
    out += '.' + std::string(static_cast<std::size_t>(digits) - frac.size(), '0') + frac;
  }
  return out;
}

inline double to_double(const Ratio& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace fsmt
