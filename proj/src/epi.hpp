#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gaussinfo.hpp"
#include "matcore.hpp"

namespace epc {

// Instance of the entropy power inequality with Gaussian perturbation
// X + A^{1/2} Z, where 0 <= A <= I and Z ~ N(0, nz) with nz PD.
// X is either Gaussian N(0, bx) with bx PD, or a finite Gaussian mixture.
struct EpiInstance {
  SymMatrix a, nz;
  std::optional<SymMatrix> gauss_bx;
  std::optional<GaussianMixture> mix;

  static EpiInstance gaussian(SymMatrix a, SymMatrix nz, SymMatrix bx);
  static EpiInstance mixture(SymMatrix a, SymMatrix nz, GaussianMixture mix);
  int dim() const { return a.dim(); }
};

struct EpiSides {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap_stderr = 0.0;   // 0 for closed-form (Gaussian) instances
  bool degenerate_a = false;  // |A| = 0 branch: the X+Z term is dropped
  double gap() const { return lhs - rhs; }
};

// Both sides of exp[(2/n)h(X+A^{1/2}Z)] >=
//   |I-A|^{1/n} exp[(2/n)h(X)] + |A|^{1/n} exp[(2/n)h(X+Z)].
// Mixture entropies are Monte Carlo estimates (samples, seed); gap_stderr
// is the delta-method standard error of lhs - rhs.
EpiSides epi_sides(const EpiInstance& inst, std::int64_t samples = 100000,
                   std::uint64_t seed = 1);

struct EqualityCondition {
  std::optional<double> c;  // B + A^{1/2} N A^{1/2} = c (B - AB), when proportional
  bool degenerate = false;  // B - AB vanishes (e.g. A = I), no finite ratio
  double residual = 0.0;    // relative proportionality (or asymmetry) residual
};

// Gaussian equality test: X ~ N(0, bx) achieves equality iff
// bx + a^{1/2} nz a^{1/2} is a positive multiple of bx - a bx.
EqualityCondition equality_condition(const SymMatrix& a, const SymMatrix& bx,
                                     const SymMatrix& nz, double tol = 1e-9);

// D(gamma) = [I + gamma (A^{-1} - I)]^{1/2}, the interpolation from I to A^{-1/2}.
SymMatrix path_point(double gamma, const SymMatrix& a);

// F(D) = |D|^{2/n} { exp[(2/n) I(Z; DX+Z)] - |I - D^{-2}|^{1/n} }, D >= I.
double path_f(const SymMatrix& d, const EpiInstance& inst);

// dF/dgamma along D(gamma); finite at gamma = 0. Nonnegative for Gaussian X.
double path_f_deriv(double gamma, const EpiInstance& inst);

struct CondComponent {
  double weight;
  SymMatrix cov;
};

// Conditional version, entropy form: returns (h(X+A^{1/2}Z|U), lower bound),
// where U is finite and X|U=u ~ N(mean_u, cov_u).
struct CondEpiSides {
  double lhs = 0.0;
  double rhs = 0.0;
  bool degenerate_a = false;
};
CondEpiSides conditional_epi_sides(const SymMatrix& a, const SymMatrix& nz,
                                   const std::vector<CondComponent>& cond);

}  // namespace epc
