#pragma once

#include <algorithm>
#include <limits>
#include <utility>
#include <vector>

namespace epc {

// Pareto-maximal subset of (x, y) pairs, sorted by x descending y ascending;
// keeps the index of the winning point so callers can recover payloads.
inline std::vector<size_t> pareto_indices(const std::vector<std::pair<double, double>>& pts) {
  std::vector<size_t> order(pts.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (pts[a].first != pts[b].first) return pts[a].first > pts[b].first;
    return pts[a].second > pts[b].second;
  });
  std::vector<size_t> keep;
  double best_y = -std::numeric_limits<double>::infinity();
  for (size_t i : order) {
    if (pts[i].second > best_y) {
      keep.push_back(i);
      best_y = pts[i].second;
    }
  }
  return keep;
}

}  // namespace epc
