#pragma once

#include <vector>

#include "matcore.hpp"

namespace epc {

// Degraded discrete memoryless cascade: X -> Y1 -> Y2 -> Y3, with Y2 and Y3
// obtained by post-composition (d12, d23). Rows are conditional pmfs.
struct DiscreteChannelSpec {
  Mat w1, d12, d23;  // |X|x|Y1|, |Y1|x|Y2|, |Y2|x|Y3|
  Mat w2, w3;        // composed channels to Y2, Y3

  DiscreteChannelSpec(Mat w1, Mat d12, Mat d23);
  int nx() const { return static_cast<int>(w1.rows()); }
};

struct DmRates {
  double r1_raw = 0.0, r2_raw = 0.0;
  double r1 = 0.0, r2 = 0.0;
};

// R1 bound: I(X;Y1|U) - I(X;Yd|U) with Yd = Y2 (scenario 1) or Y3 (scenario 2);
// R2 bound: I(U;Y2) - I(U;Y3). Natural log, 0 log 0 = 0.
// pu is p(u); row u of pxu is p(x|u).
DmRates rates_for_aux(const DiscreteChannelSpec& spec, int scenario, const Vec& pu,
                      const Mat& pxu);

struct DmFrontierPoint {
  double r1 = 0.0, r2 = 0.0;
  Vec pu;
  Mat pxu;
};

// Inner approximation of the rate region: enumerates (p(u), p(x|u)) on simplex
// grids with denominator `resolution`, |U| = u_card (default |X|+1), and
// returns the Pareto frontier with the achieving distributions. Grids whose
// size would exceed 1e7 evaluations are rejected.
std::vector<DmFrontierPoint> enumerate_region(const DiscreteChannelSpec& spec, int scenario,
                                              int resolution, int u_card = -1);

}  // namespace epc
