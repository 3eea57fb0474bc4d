#pragma once

#include <cstdint>
#include <vector>

#include "matcore.hpp"

namespace epc {

// Additive channel Y = D X + Z with X ~ N(0, bx), Z ~ N(0, nz), D symmetric.
struct LinearGaussChannel {
  SymMatrix d, bx, nz;
  LinearGaussChannel(SymMatrix d_, SymMatrix bx_, SymMatrix nz_);
};

struct GaussianMixture {
  Vec weights;
  std::vector<Vec> means;
  std::vector<SymMatrix> covs;

  GaussianMixture(Vec w, std::vector<Vec> m, std::vector<SymMatrix> c);
  int dim() const { return static_cast<int>(means[0].size()); }
  int components() const { return static_cast<int>(weights.size()); }

  // Mixture with every component covariance shifted by `shift`.
  GaussianMixture shifted(const SymMatrix& shift) const;
};

struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

// Differential entropy of N(mean, cov): (1/2) log((2*pi*e)^n |cov|).
double gaussian_entropy(const SymMatrix& cov);

// I(Z; DX+Z) = (1/2) log|DBD+N| - (1/2) log|DBD|.
double mi_z_given_output(const LinearGaussChannel& ch);

// Cov(X | DX+Z) = B - BD (DBD+N)^{-1} DB.
SymMatrix mmse_x(const LinearGaussChannel& ch);

// Cov(Z | DX+Z) = D Cov(X | DX+Z) D for symmetric invertible D.
SymMatrix mmse_z(const LinearGaussChannel& ch);

// Entrywise gradient of I(Z; DX+Z) in D: (N^{-1} Cov(Z|DX+Z) - I) D^{-1}.
Mat immse_gradient(const LinearGaussChannel& ch);

// Plug-in Monte Carlo estimate of the mixture's differential entropy.
// Sample i draws from a stream keyed by (seed, i), so the estimate is
// independent of chunking order.
McEstimate mixture_entropy_mc(const GaussianMixture& mix, std::int64_t samples,
                              std::uint64_t seed);

}  // namespace epc
