#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "extremal.hpp"
#include "matcore.hpp"
#include "rng.hpp"

namespace epc {

// Degraded vector Gaussian wiretap setting: receiver noises N1 <= N2 <= N3
// (all PD), input constraint 0 <= B <= S. Scenario selects which pair of
// receivers bounds the first rate.
struct ChannelSpec {
  SymMatrix s, n1, n2, n3;
  ChannelSpec(SymMatrix s, SymMatrix n1, SymMatrix n2, SymMatrix n3);
  int dim() const { return s.dim(); }
};

struct Rates {
  double r1_raw = 0.0, r2_raw = 0.0;  // before clamping at zero
  double r1 = 0.0, r2 = 0.0;
};

Rates rates_for_b(const ChannelSpec& spec, int scenario, const SymMatrix& b);

// Largest first rate, attained at B = S.
double r1_max(const ChannelSpec& spec, int scenario);

// R1 + mu R2 with the raw (unclamped) rates; drops B-independent terms in the
// gradient only.
double weighted_objective(const ChannelSpec& spec, int scenario, double mu,
                          const SymMatrix& b);
SymMatrix weighted_gradient(const ChannelSpec& spec, int scenario, double mu,
                            const SymMatrix& b);

struct OptOptions {
  int multistarts = 9;    // 3 deterministic inits (0, S/2, S) + 6 random
  int max_iter = 5000;
  double grad_tol = 1e-9;  // projected-gradient norm, scaled by max(1, ||S||_F)
  double kkt_tol = 1e-6;
  std::uint64_t seed = 12345;
};

struct WeightedOpt {
  SymMatrix bstar;
  double objective = 0.0;
  KktCertificate cert;   // for the matching weighted stationarity system
  Vec weights;           // normalized multipliers (mu1, mu3)
  bool converged = false;
  bool cert_ok = false;
  double multistart_spread = 0.0;
  int iterations = 0;
};

// Maximizes R1 + mu R2 over 0 <= B <= S by projected gradient ascent with
// Armijo backtracking and multistart. Scenario 2 requires mu >= 1.
WeightedOpt optimize_weighted(const ChannelSpec& spec, int scenario, double mu,
                              const OptOptions& opts = {});

// The stationarity system normalized to unit weight sum:
// scenario 1: (1/(1+mu)) and (mu/(1+mu)) on (N1, N3) against N0 = N2;
// scenario 2: (1/mu) and ((mu-1)/mu).
ExtremalInstance weighted_kkt_instance(const ChannelSpec& spec, int scenario, double mu);

struct RegionRow {
  double mu = 0.0;
  Rates rates;
  SymMatrix b;
  double r_stat = 0.0, r_slack1 = 0.0, r_slack2 = 0.0;
  double support_excess = 0.0;  // max over sampled B of J(B) - J(B*)
  bool converged = false, cert_ok = false, support_ok = false;
};

struct RegionBoundary {
  int scenario = 1;
  std::vector<RegionRow> rows;
  bool all_ok() const;
};

// One boundary point per mu; each row carries its certificate residuals and a
// 100-sample supporting-line check (J(B) <= J(B*) + 1e-7). Rows are
// independent, so the thread count never changes the output.
RegionBoundary trace_region(const ChannelSpec& spec, int scenario,
                            const std::vector<double>& mu_grid,
                            const OptOptions& opts = {}, int threads = 1);

// Exhaustive frontier for n <= 2: B = S^{1/2} Q diag(u) Q^T S^{1/2} over a
// rotation x eigenvalue grid. Returns the Pareto frontier, r1 decreasing.
std::vector<std::pair<double, double>> brute_force_region(const ChannelSpec& spec,
                                                          int scenario, int resolution);

// Uniform feasible draw B = S^{1/2} W S^{1/2} with W having eigenvalues in [0,1].
SymMatrix random_feasible_b(const SymMatrix& s, rng::Stream& stream);

}  // namespace epc
