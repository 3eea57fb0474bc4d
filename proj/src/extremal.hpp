#pragma once

#include <vector>

#include "matcore.hpp"

namespace epc {

// max_B sum_k mu_k h(X+Z_k|U) - h(X+Z_0|U) over E[XX^T] <= s, with
// Z_k ~ N(0, nk[k-1]) and Z_0 ~ N(0, n0). Weights mu are nonnegative, sum 1.
struct ExtremalInstance {
  SymMatrix s, n0;
  std::vector<SymMatrix> nk;
  Vec mu;

  ExtremalInstance(SymMatrix s, SymMatrix n0, std::vector<SymMatrix> nk, Vec mu);
  int dim() const { return s.dim(); }
  int noises() const { return static_cast<int>(nk.size()); }
};

// Certificate for the stationarity system
//   sum_k mu_k (B*+N_k)^{-1} + M1 = (B*+N_0)^{-1} + M2,  B* M1 = 0,  (S-B*) M2 = 0.
struct KktCertificate {
  SymMatrix bstar, m1, m2;
  double r_stat = 0.0, r_slack1 = 0.0, r_slack2 = 0.0;
  bool valid(double tol = 1e-6) const;

 private:
  friend void kkt_residual(const ExtremalInstance&, KktCertificate&);
  friend KktCertificate recover_multipliers(const ExtremalInstance&, const SymMatrix&);
  double scale_ = 1.0;
};

// Fills the certificate's residuals; scale = max(1, norms of the gradient terms).
void kkt_residual(const ExtremalInstance& inst, KktCertificate& cert);

// Recovers M1, M2 from bstar by projecting the stationarity gap onto the
// null spaces of B* and S-B* (eigenvalues below 1e-8 * max(1, ||.||_2)).
KktCertificate recover_multipliers(const ExtremalInstance& inst, const SymMatrix& bstar);

struct Enhancement {
  SymMatrix n1_tilde;        // (N1^{-1} + mu1^{-1} M1)^{-1}
  SymMatrix n0_tilde;        // ((B*+N0)^{-1} + M2)^{-1} - B*
  double kkt4_residual = 0.0;
  double dirty_paper_gap = 0.0;   // log|B*+N1~|/|N1~| - log|B*+N1|/|N1|
  double receiver_gap = 0.0;      // log|S+N0~|/|B*+N0~| - log|S+N0|/|B*+N0|
  // Same ratio identity evaluated against N2 = nk[1] (two-noise layout);
  // reported for reference, not asserted.
  double receiver_gap_n2 = 0.0;
  bool has_n2_variant = false;
};

// Enhancement step: tightens N1 and N0 while preserving the two determinant
// ratios and the stationarity system. Violated properties throw
// EnhancementPropertyViolation naming the property.
Enhancement enhance(const ExtremalInstance& inst, const KktCertificate& cert);

struct ExtremalSides {
  double lhs = 0.0, rhs = 0.0;
  double gap() const { return rhs - lhs; }
};

// lhs = sum_k mu_k h(X+Z_k) - h(X+Z_0) for X ~ N(0, bx) with 0 <= bx <= s;
// rhs = the certificate value at B*.
ExtremalSides extremal_sides_gaussian(const ExtremalInstance& inst,
                                      const KktCertificate& cert, const SymMatrix& bx);

// Finite-U version: component u has weight w_u, X|U=u ~ N(mean_u, cov_u);
// feasibility requires E[XX^T] = sum_u w_u (cov_u + mean_u mean_u^T) <= s.
struct GaussComponent {
  double weight;
  Vec mean;
  SymMatrix cov;
};
ExtremalSides extremal_sides_mixture(const ExtremalInstance& inst,
                                     const KktCertificate& cert,
                                     const std::vector<GaussComponent>& comps);

// Joint diagonalization record for the three-noise reduction:
// V^T(B*+N1)V = diag(lambda1) = I, V^T(B*+N2)V = diag(lambda2),
// V^T(B*+N3)V = diag(lambda3); lambda3_tilde = lambda3 + eps,
// lambda2_tilde = (1+mu) (lambda1^{-1} + mu lambda3_tilde^{-1})^{-1},
// a = (lambda2_tilde - lambda1) / (lambda3_tilde - lambda1) entrywise.
struct ThreeNoiseSplit {
  Mat v;
  Vec lambda1, lambda2, lambda3, lambda3_tilde, lambda2_tilde, a;
  double eps = 0.0;
  double mu = 0.0;
  double precondition_residual = 0.0;
};

// Requires (B*+N1)^{-1} + mu (B*+N3)^{-1} = (1+mu)(B*+N2)^{-1} within
// 1e-8 * scale and N1 <= N3. eps < 0 selects the default 1e-4 * tr(lambda3)/n.
ThreeNoiseSplit three_noise_split(const SymMatrix& bstar, const SymMatrix& n1,
                                  const SymMatrix& n2, const SymMatrix& n3, double mu,
                                  double eps = -1.0);

struct FConcave {
  double value = 0.0;
  Eigen::Vector2d grad;
  Eigen::Matrix2d hess;
};

// f(b,c) = b + mu c - ((1+mu)n/2) log(|I-A|^{1/n} e^{2b/n} + |A|^{1/n} e^{2c/n}),
// with 0 < A < I. The Hessian is rank one and negative semidefinite.
FConcave f_concave(double b, double c, const SymMatrix& a, double mu);

struct FMax {
  double delta = 0.0;  // c - b at the maximizing line
  double value = 0.0;
};

// Supremum of f over (b,c): attained where
// c - b = (n/2) log[mu (|I-A|/|A|)^{1/n}].
FMax f_max(const SymMatrix& a, double mu);

struct LogADiag {
  double log_det_a = 0.0, log_det_a_rhs = 0.0;
  double log_det_ia = 0.0, log_det_ia_rhs = 0.0;
};

// Determinant identities of the split: |A| = (mu/(1+mu))^n |L2~|/|L3~| and
// |I-A| = (1/(1+mu))^n |L2~|/|L1|.
LogADiag log_a_identities(const ThreeNoiseSplit& split);

struct CombinedNoise {
  SymMatrix n;          // (sum_{k<K} mu'_k (B*+N_k)^{-1})^{-1} - B*
  double mu_prime = 0.0;  // mu_K / (1 - mu_K)
  double lvc2_residual = 0.0;
};

// Collapses the first K-1 noises of a K-noise stationarity identity
// (M1 = M2 = 0 case) into one noise N with N1 <= N <= N_{K-1}; the triple
// (N, N0, N_K) then satisfies the three-noise identity with mu'.
CombinedNoise combine_leading_noises(const ExtremalInstance& inst, const SymMatrix& bstar);

}  // namespace epc
