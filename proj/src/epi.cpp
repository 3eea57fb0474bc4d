#include "epi.hpp"

#include <cmath>

#include "rng.hpp"

namespace epc {

namespace {

struct ADets {
  double det_a_pow;   // |A|^{1/n}, 0 on the degenerate branch
  double det_ia_pow;  // |I-A|^{1/n}
  bool degenerate;    // |A| = 0 or condition number > 1e12
};

// Eigenvalues of A clamped to [0,1]; validates 0 <= A <= I.
Vec a_eigenvalues(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a.m());
  Vec ev = es.eigenvalues();
  double scale = std::max(1.0, std::abs(ev[ev.size() - 1]));
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-9 * scale || ev[i] > 1.0 + 1e-9)
      throw Error(Errc::precondition_violated, "A must satisfy 0 <= A <= I");
  }
  return ev.cwiseMax(0.0).cwiseMin(1.0);
}

ADets a_dets(const SymMatrix& a) {
  Vec ev = a_eigenvalues(a);
  int n = static_cast<int>(ev.size());
  ADets d;
  d.degenerate = ev[0] <= 0.0 || ev[n - 1] / ev[0] > 1e12;
  double pa = 1.0, pia = 1.0;
  for (int i = 0; i < n; ++i) {
    pa *= ev[i];
    pia *= 1.0 - ev[i];
  }
  d.det_a_pow = d.degenerate ? 0.0 : std::pow(pa, 1.0 / n);
  d.det_ia_pow = std::pow(std::max(pia, 0.0), 1.0 / n);
  return d;
}

void check_dims3(const SymMatrix& a, const SymMatrix& nz, int xdim) {
  if (a.dim() != nz.dim() || a.dim() != xdim)
    throw Error(Errc::dimension_mismatch, "instance matrices have different dimensions");
}

}  // namespace

EpiInstance EpiInstance::gaussian(SymMatrix a, SymMatrix nz, SymMatrix bx) {
  check_dims3(a, nz, bx.dim());
  a_eigenvalues(a);
  if (min_eigenvalue(nz) <= 0.0)
    throw Error(Errc::not_pd, "perturbation covariance must be PD");
  if (min_eigenvalue(bx) <= 0.0)
    throw Error(Errc::not_pd, "Gaussian input covariance must be PD");
  EpiInstance inst;
  inst.a = std::move(a);
  inst.nz = std::move(nz);
  inst.gauss_bx = std::move(bx);
  return inst;
}

EpiInstance EpiInstance::mixture(SymMatrix a, SymMatrix nz, GaussianMixture mix) {
  check_dims3(a, nz, mix.dim());
  a_eigenvalues(a);
  if (min_eigenvalue(nz) <= 0.0)
    throw Error(Errc::not_pd, "perturbation covariance must be PD");
  EpiInstance inst;
  inst.a = std::move(a);
  inst.nz = std::move(nz);
  inst.mix = std::move(mix);
  return inst;
}

EpiSides epi_sides(const EpiInstance& inst, std::int64_t samples, std::uint64_t seed) {
  int n = inst.dim();
  ADets ad = a_dets(inst.a);
  SymMatrix a12 = sym_sqrt(inst.a);
  SymMatrix shift = SymMatrix::from_symmetric(a12.m() * inst.nz.m() * a12.m());

  EpiSides out;
  out.degenerate_a = ad.degenerate;
  double tn = 2.0 / n;

  if (inst.gauss_bx) {
    const SymMatrix& b = *inst.gauss_bx;
    double h1 = gaussian_entropy(b + shift);
    double h0 = gaussian_entropy(b);
    out.lhs = std::exp(tn * h1);
    out.rhs = ad.det_ia_pow * std::exp(tn * h0);
    if (!ad.degenerate) out.rhs += ad.det_a_pow * std::exp(tn * gaussian_entropy(b + inst.nz));
    return out;
  }

  const GaussianMixture& mix = *inst.mix;
  McEstimate h1 = mixture_entropy_mc(mix.shifted(shift), samples, rng::derive(seed, 1));
  McEstimate h0 = mixture_entropy_mc(mix, samples, rng::derive(seed, 2));
  out.lhs = std::exp(tn * h1.value);
  double d1 = tn * out.lhs * h1.stderr_;
  double t0 = ad.det_ia_pow * std::exp(tn * h0.value);
  double d0 = tn * t0 * h0.stderr_;
  out.rhs = t0;
  double d2 = 0.0;
  if (!ad.degenerate) {
    McEstimate h2 = mixture_entropy_mc(mix.shifted(inst.nz), samples, rng::derive(seed, 3));
    double t2 = ad.det_a_pow * std::exp(tn * h2.value);
    d2 = tn * t2 * h2.stderr_;
    out.rhs += t2;
  }
  out.gap_stderr = std::sqrt(d1 * d1 + d0 * d0 + d2 * d2);
  return out;
}

EqualityCondition equality_condition(const SymMatrix& a, const SymMatrix& bx,
                                     const SymMatrix& nz, double tol) {
  check_dims3(a, nz, bx.dim());
  EqualityCondition out;
  Mat p = bx.m() - a.m() * bx.m();
  double asym = (p - p.transpose()).norm();
  if (asym > tol * std::max(1.0, p.norm())) {
    // A and B do not commute: B - AB is not even symmetric.
    out.residual = asym / std::max(1.0, p.norm());
    return out;
  }
  SymMatrix dir = SymMatrix::from_symmetric(p);
  SymMatrix a12 = sym_sqrt(a);
  SymMatrix target = bx + SymMatrix::from_symmetric(a12.m() * nz.m() * a12.m());
  double tnorm = target.m().norm();
  if (dir.m().norm() <= 1e-12 * std::max(1.0, bx.m().norm())) {
    out.degenerate = true;
    return out;
  }
  double c = (target.m().array() * dir.m().array()).sum() / dir.m().squaredNorm();
  out.residual = (target.m() - c * dir.m()).norm() / std::max(tnorm, 1e-300);
  if (out.residual <= tol) out.c = c;
  return out;
}

SymMatrix path_point(double gamma, const SymMatrix& a) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw Error(Errc::invalid_argument, "gamma must lie in [0,1]");
  Vec ev = a_eigenvalues(a);
  int n = static_cast<int>(ev.size());
  if (ev[0] <= 0.0 || ev[n - 1] / ev[0] > 1e12)
    throw Error(Errc::singular_a, "path requires A to be invertible");
  Eigen::SelfAdjointEigenSolver<Mat> es(a.m());
  Vec d2 = Vec::Ones(n) + gamma * (es.eigenvalues().cwiseInverse() - Vec::Ones(n));
  return SymMatrix::from_symmetric(es.eigenvectors() * d2.cwiseSqrt().asDiagonal() *
                                   es.eigenvectors().transpose());
}

double path_f(const SymMatrix& d, const EpiInstance& inst) {
  if (!inst.gauss_bx)
    throw Error(Errc::invalid_argument, "path functionals require a Gaussian input");
  if (d.dim() != inst.dim())
    throw Error(Errc::dimension_mismatch, "D has the wrong dimension");
  int n = d.dim();
  Eigen::SelfAdjointEigenSolver<Mat> es(d.m());
  const Vec& dv = es.eigenvalues();
  double logdet_d = 0.0, prod = 1.0;
  for (int i = 0; i < n; ++i) {
    if (dv[i] < 1.0 - 1e-9)
      throw Error(Errc::invalid_argument, "path functionals require D >= I");
    logdet_d += std::log(dv[i]);
    prod *= std::max(0.0, 1.0 - 1.0 / (dv[i] * dv[i]));
  }
  double mi = mi_z_given_output({d, *inst.gauss_bx, inst.nz});
  return std::exp(2.0 / n * logdet_d) *
         (std::exp(2.0 / n * mi) - std::pow(prod, 1.0 / n));
}

double path_f_deriv(double gamma, const EpiInstance& inst) {
  if (!inst.gauss_bx)
    throw Error(Errc::invalid_argument, "path functionals require a Gaussian input");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw Error(Errc::invalid_argument, "gamma must lie in [0,1]");
  int n = inst.dim();
  Vec ev = a_eigenvalues(inst.a);
  if (ev[0] <= 0.0 || ev[n - 1] / ev[0] > 1e12)
    throw Error(Errc::singular_a, "path requires A to be invertible");

  SymMatrix d = path_point(gamma, inst.a);
  Eigen::SelfAdjointEigenSolver<Mat> esa(inst.a.m());
  Mat mt = esa.eigenvectors() *
           (esa.eigenvalues().cwiseInverse() - Vec::Ones(n)).asDiagonal() *
           esa.eigenvectors().transpose();  // A^{-1} - I, PSD
  Mat d2 = Mat::Identity(n, n) + gamma * mt;

  LinearGaussChannel ch{d, *inst.gauss_bx, inst.nz};
  Mat covz = mmse_z(ch).m();
  Eigen::LLT<Mat> nz_llt(ch.nz.m());
  Eigen::LLT<Mat> d2_llt(0.5 * (d2 + d2.transpose()));
  double trace_term = (nz_llt.solve(covz) * d2_llt.solve(mt)).trace();

  double det_mt = 1.0;
  for (int i = 0; i < n; ++i) det_mt *= std::max(0.0, 1.0 / ev[i] - 1.0);
  double logdet_d2 = logdet(SymMatrix::from_symmetric(d2));
  double mi = mi_z_given_output(ch);

  // (|D|^{2/n}/(n gamma)) { e^{2I/n} tr[N^{-1}Cov(Z|DX+Z)(I-D^{-2})] - n|I-D^{-2}|^{1/n} }
  // with I-D^{-2} = gamma D^{-2}(A^{-1}-I); the common factor gamma cancels,
  // which keeps the expression finite at gamma = 0.
  return std::exp(logdet_d2 / n) / n *
         (std::exp(2.0 / n * mi) * trace_term -
          n * std::pow(det_mt, 1.0 / n) * std::exp(-logdet_d2 / n));
}

CondEpiSides conditional_epi_sides(const SymMatrix& a, const SymMatrix& nz,
                                   const std::vector<CondComponent>& cond) {
  if (cond.empty()) throw Error(Errc::invalid_distribution, "need at least one component");
  int n = a.dim();
  double wsum = 0.0;
  for (const auto& c : cond) {
    if (c.weight <= 0.0)
      throw Error(Errc::invalid_distribution, "component weights must be positive");
    if (c.cov.dim() != n)
      throw Error(Errc::dimension_mismatch, "component covariance has the wrong dimension");
    wsum += c.weight;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw Error(Errc::invalid_distribution, "component weights must sum to 1");

  ADets ad = a_dets(a);
  SymMatrix a12 = sym_sqrt(a);
  SymMatrix shift = SymMatrix::from_symmetric(a12.m() * nz.m() * a12.m());

  double h1 = 0.0, h0 = 0.0, h2 = 0.0;
  for (const auto& c : cond) {
    h1 += c.weight * gaussian_entropy(c.cov + shift);
    h0 += c.weight * gaussian_entropy(c.cov);
    if (!ad.degenerate) h2 += c.weight * gaussian_entropy(c.cov + nz);
  }

  double tn = 2.0 / n;
  double inner = ad.det_ia_pow * std::exp(tn * h0);
  if (!ad.degenerate) inner += ad.det_a_pow * std::exp(tn * h2);

  CondEpiSides out;
  out.lhs = h1;
  out.rhs = n / 2.0 * std::log(inner);
  out.degenerate_a = ad.degenerate;
  return out;
}

}  // namespace epc
