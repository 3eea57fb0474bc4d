#include "matcore.hpp"

#include <cmath>

namespace epc {

namespace {

void check_square(const Mat& m) {
  if (m.rows() != m.cols())
    throw Error(Errc::dimension_mismatch, "matrix must be square");
  if (m.rows() == 0) throw Error(Errc::invalid_argument, "matrix must be nonempty");
}

void check_same_dim(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim())
    throw Error(Errc::dimension_mismatch, "operands have different dimensions");
}

Eigen::SelfAdjointEigenSolver<Mat> eig(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m.m());
  if (es.info() != Eigen::Success)
    throw Error(Errc::invalid_argument, "eigendecomposition failed");
  return es;
}

}  // namespace

SymMatrix::SymMatrix(const Mat& m) {
  check_square(m);
  double asym = (m - m.transpose()).norm();
  if (asym > 1e-8 * std::max(1.0, m.norm()))
    throw Error(Errc::asymmetric_input, "matrix is not symmetric");
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::from_symmetric(const Mat& m) {
  check_square(m);
  SymMatrix r;
  r.m_ = 0.5 * (m + m.transpose());
  return r;
}

SymMatrix SymMatrix::inverse() const {
  Eigen::FullPivLU<Mat> lu(m_);
  if (!lu.isInvertible())
    throw Error(Errc::singular_input, "matrix is singular");
  return SymMatrix::from_symmetric(lu.inverse());
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim())
    throw Error(Errc::dimension_mismatch, "operands have different dimensions");
  return SymMatrix::from_symmetric(a.m() + b.m());
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim())
    throw Error(Errc::dimension_mismatch, "operands have different dimensions");
  return SymMatrix::from_symmetric(a.m() - b.m());
}

SymMatrix operator*(double c, const SymMatrix& a) {
  return SymMatrix::from_symmetric(c * a.m());
}

SymMatrix sym_sqrt(const SymMatrix& m) {
  auto es = eig(m);
  Vec ev = es.eigenvalues();
  double scale = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
  Vec s(ev.size());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-9 * std::max(scale, 1e-300))
      throw Error(Errc::not_psd, "negative eigenvalue in sym_sqrt");
    s[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return SymMatrix::from_symmetric(es.eigenvectors() * s.asDiagonal() *
                                   es.eigenvectors().transpose());
}

double logdet(const SymMatrix& m) {
  auto es = eig(m);
  const Vec& ev = es.eigenvalues();
  double acc = 0.0;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] <= 0.0) throw Error(Errc::not_pd, "logdet of a non-PD matrix");
    acc += std::log(ev[i]);
  }
  return acc;
}

bool loewner_leq(const SymMatrix& a, const SymMatrix& b, double tol) {
  check_same_dim(a, b);
  return min_eigenvalue(b - a) >= -tol;
}

GenEigResult simultaneous_diag(const SymMatrix& a, const SymMatrix& b) {
  check_same_dim(a, b);
  auto esa = eig(a);
  const Vec& av = esa.eigenvalues();
  double scale = std::max(std::abs(av[0]), std::abs(av[av.size() - 1]));
  if (av[0] <= 1e-12 * std::max(scale, 1e-300))
    throw Error(Errc::not_pd, "first operand of simultaneous_diag must be PD");
  Vec isqrt = av.array().rsqrt();
  Mat w = esa.eigenvectors() * isqrt.asDiagonal() * esa.eigenvectors().transpose();
  Eigen::SelfAdjointEigenSolver<Mat> esc(w * b.m() * w);
  GenEigResult r;
  r.v = w * esc.eigenvectors();
  r.lambda1 = Vec::Ones(a.dim());
  r.lambda2 = esc.eigenvalues();
  return r;
}

std::optional<double> proportional(const SymMatrix& a, const SymMatrix& b, double tol) {
  check_same_dim(a, b);
  double bb = b.m().squaredNorm();
  if (bb == 0.0)
    throw Error(Errc::invalid_argument, "proportionality direction must be nonzero");
  double c = (a.m().array() * b.m().array()).sum() / bb;
  double resid = (a.m() - c * b.m()).norm();
  if (resid <= tol * a.m().norm()) return c;
  return std::nullopt;
}

SymMatrix psd_clip(const SymMatrix& m) {
  auto es = eig(m);
  Vec ev = es.eigenvalues().cwiseMax(0.0);
  return SymMatrix::from_symmetric(es.eigenvectors() * ev.asDiagonal() *
                                   es.eigenvectors().transpose());
}

SymMatrix project_box(const SymMatrix& b, const SymMatrix& s) {
  check_same_dim(b, s);
  if (min_eigenvalue(s) < -1e-9 * std::max(1.0, spectral_norm(s)))
    throw Error(Errc::not_psd, "box upper bound must be PSD");
  double scale = std::max(1.0, std::max(spectral_norm(b), spectral_norm(s)));
  Mat x = b.m();
  Mat p = Mat::Zero(b.dim(), b.dim());
  Mat q = p;
  for (int sweep = 0; sweep < 500; ++sweep) {
    Mat y = psd_clip(SymMatrix::from_symmetric(x + p)).m();
    p = x + p - y;
    Mat z = s.m() - psd_clip(SymMatrix::from_symmetric(s.m() - (y + q))).m();
    q = y + q - z;
    double move = (z - x).norm();
    x = z;
    SymMatrix xs = SymMatrix::from_symmetric(x);
    bool feasible = min_eigenvalue(xs) >= -1e-9 * scale &&
                    min_eigenvalue(s - xs) >= -1e-9 * scale;
    if (move <= 1e-11 * scale && feasible) return xs;
  }
  throw Error(Errc::no_convergence, "box projection did not converge in 500 sweeps");
}

double spectral_norm(const SymMatrix& m) {
  auto es = eig(m);
  const Vec& ev = es.eigenvalues();
  return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
}

double min_eigenvalue(const SymMatrix& m) { return eig(m).eigenvalues()[0]; }

}  // namespace epc
