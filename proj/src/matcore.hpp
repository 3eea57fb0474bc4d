#pragma once

#include <Eigen/Dense>
#include <optional>

#include "errors.hpp"

namespace epc {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Symmetric real matrix, symmetrized on construction. Asymmetry beyond
// 1e-8 relative is rejected rather than silently averaged away.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Mat& m);

  static SymMatrix identity(int n) { return SymMatrix(Mat::Identity(n, n)); }
  static SymMatrix zero(int n) { return SymMatrix(Mat::Zero(n, n)); }
  static SymMatrix diag(const Vec& d) { return SymMatrix(Mat(d.asDiagonal())); }
  // Wraps a matrix that is symmetric by construction; skips the asymmetry gate.
  static SymMatrix from_symmetric(const Mat& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Mat& m() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  SymMatrix inverse() const;

 private:
  Mat m_;
};

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double c, const SymMatrix& a);

struct GenEigResult {
  Mat v;        // columns are the joint eigenvectors
  Vec lambda1;  // diag(V^T A V), all ones under the whitening normalization
  Vec lambda2;  // diag(V^T B V)
};

// Symmetric PSD square root. Eigenvalues below -1e-9 * ||m||_2 are rejected
// (NotPsd); small negatives are clamped to zero.
SymMatrix sym_sqrt(const SymMatrix& m);

// log det of a PD matrix; NotPd if any eigenvalue <= 0.
double logdet(const SymMatrix& m);

// a <= b in the Loewner order: lambda_min(b - a) >= -tol.
bool loewner_leq(const SymMatrix& a, const SymMatrix& b, double tol = 1e-9);

// Joint diagonalization of (a, b) with a PD: V^T a V = I, V^T b V = diag(lambda2).
GenEigResult simultaneous_diag(const SymMatrix& a, const SymMatrix& b);

// Least-squares ratio c = <a,b>_F / <b,b>_F, accepted iff ||a - c b||_F <= tol * ||a||_F.
std::optional<double> proportional(const SymMatrix& a, const SymMatrix& b, double tol = 1e-9);

// Frobenius-nearest point of {x : 0 <= x <= s} via Dykstra alternating
// projections; at most 500 sweeps, output feasible at 1e-9.
SymMatrix project_box(const SymMatrix& b, const SymMatrix& s);

// Eigenvalue-clipped projection onto the PSD cone.
SymMatrix psd_clip(const SymMatrix& m);

double spectral_norm(const SymMatrix& m);
double min_eigenvalue(const SymMatrix& m);

}  // namespace epc
