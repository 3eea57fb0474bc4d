#pragma once

// Shared builders and small numeric utilities for the test binaries.

#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <limits>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "matcore.hpp"
#include "rng.hpp"

namespace tst {

inline epc::SymMatrix sym(int n, std::initializer_list<double> vals) {
  epc::Mat m(n, n);
  int k = 0;
  for (double v : vals) {
    m(k / n, k % n) = v;
    ++k;
  }
  return epc::SymMatrix(m);
}

inline epc::SymMatrix sym1(double v) { return sym(1, {v}); }

inline epc::SymMatrix dg(std::initializer_list<double> vals) {
  epc::Vec d(static_cast<int>(vals.size()));
  int k = 0;
  for (double v : vals) d[k++] = v;
  return epc::SymMatrix::diag(d);
}

// Runs f and reports the error code it threw (Errc::none if it returned).
template <class F>
epc::Errc thrown_code(F&& f) {
  try {
    std::forward<F>(f)();
  } catch (const epc::Error& e) {
    return e.code();
  }
  return epc::Errc::none;
}

// Symmetric PD matrix with eigenvalues uniform in [lo, hi].
inline epc::SymMatrix random_spd(int n, epc::rng::Stream& s, double lo, double hi) {
  return epc::SymMatrix::from_symmetric(epc::rng::random_sym_eig(n, s, lo, hi));
}

inline double h2_nats(double p) {
  auto term = [](double q) { return q > 0.0 ? -q * std::log(q) : 0.0; };
  return term(p) + term(1.0 - p);
}

// Binary symmetric channel composition: flip probabilities p then q.
inline double bsc_compose(double p, double q) { return p * (1.0 - q) + q * (1.0 - p); }

inline epc::Mat bsc(double p) {
  epc::Mat m(2, 2);
  m << 1.0 - p, p, p, 1.0 - p;
  return m;
}

inline double point_segment_dist(double px, double py, double ax, double ay, double bx,
                                 double by) {
  double vx = bx - ax, vy = by - ay;
  double len2 = vx * vx + vy * vy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((px - ax) * vx + (py - ay) * vy) / len2, 0.0, 1.0);
  double cx = ax + t * vx - px, cy = ay + t * vy - py;
  return std::sqrt(cx * cx + cy * cy);
}

// Distance from a point to a polyline (or to the single vertex if degenerate).
inline double dist_to_polyline(double px, double py,
                               const std::vector<std::pair<double, double>>& poly) {
  if (poly.empty()) return std::numeric_limits<double>::infinity();
  if (poly.size() == 1) {
    return std::hypot(px - poly[0].first, py - poly[0].second);
  }
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < poly.size(); ++i)
    best = std::min(best, point_segment_dist(px, py, poly[i].first, poly[i].second,
                                             poly[i + 1].first, poly[i + 1].second));
  return best;
}

// Directed Hausdorff distance from the points of `a` to the polyline `b`.
inline double directed_hausdorff(const std::vector<std::pair<double, double>>& a,
                                 const std::vector<std::pair<double, double>>& b) {
  double worst = 0.0;
  for (const auto& p : a) worst = std::max(worst, dist_to_polyline(p.first, p.second, b));
  return worst;
}

}  // namespace tst
