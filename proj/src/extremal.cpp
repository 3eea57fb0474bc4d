#include "extremal.hpp"

#include <cmath>

#include "gaussinfo.hpp"

namespace epc {

namespace {

Mat inv_pd(const Mat& m, const char* what) {
  Eigen::LLT<Mat> llt(0.5 * (m + m.transpose()));
  if (llt.info() != Eigen::Success) throw Error(Errc::not_pd, what);
  return llt.solve(Mat::Identity(m.rows(), m.cols()));
}

// sum_k mu_k (B+N_k)^{-1}
Mat weighted_inverse_sum(const ExtremalInstance& inst, const Mat& b) {
  Mat acc = Mat::Zero(inst.dim(), inst.dim());
  for (int k = 0; k < inst.noises(); ++k)
    acc += inst.mu[k] * inv_pd(b + inst.nk[k].m(), "B+N_k must be PD");
  return acc;
}

// Projector onto the eigenspace of eigenvalues below 1e-8 * max(1, ||m||_2).
Mat null_projector(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m.m());
  const Vec& ev = es.eigenvalues();
  int n = static_cast<int>(ev.size());
  double cutoff = 1e-8 * std::max(1.0, std::max(std::abs(ev[0]), std::abs(ev[n - 1])));
  Mat p = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    if (ev[i] < cutoff) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
  return p;
}

double logdet_ratio(const SymMatrix& num, const SymMatrix& den) {
  return logdet(num) - logdet(den);
}

void require(bool ok, Errc code, const char* what) {
  if (!ok) throw Error(code, what);
}

}  // namespace

ExtremalInstance::ExtremalInstance(SymMatrix s_, SymMatrix n0_, std::vector<SymMatrix> nk_,
                                   Vec mu_)
    : s(std::move(s_)), n0(std::move(n0_)), nk(std::move(nk_)), mu(std::move(mu_)) {
  if (nk.empty()) throw Error(Errc::invalid_argument, "need at least one noise");
  if (mu.size() != static_cast<Eigen::Index>(nk.size()))
    throw Error(Errc::dimension_mismatch, "one weight per noise required");
  double sum = 0.0;
  for (int k = 0; k < mu.size(); ++k) {
    if (mu[k] < 0.0) throw Error(Errc::invalid_distribution, "weights must be nonnegative");
    sum += mu[k];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw Error(Errc::invalid_distribution, "weights must sum to 1");
  int n = s.dim();
  if (n0.dim() != n) throw Error(Errc::dimension_mismatch, "n0 dimension mismatch");
  for (const auto& m : nk)
    if (m.dim() != n) throw Error(Errc::dimension_mismatch, "noise dimension mismatch");
  if (min_eigenvalue(s) < -1e-9 * std::max(1.0, spectral_norm(s)))
    throw Error(Errc::not_psd, "signal constraint S must be PSD");
  if (min_eigenvalue(n0) <= 0.0) throw Error(Errc::not_pd, "N0 must be PD");
  for (const auto& m : nk)
    if (min_eigenvalue(m) <= 0.0) throw Error(Errc::not_pd, "every N_k must be PD");
}

bool KktCertificate::valid(double tol) const {
  return r_stat <= tol * scale_ && r_slack1 <= tol * scale_ && r_slack2 <= tol * scale_;
}

void kkt_residual(const ExtremalInstance& inst, KktCertificate& cert) {
  Mat g1 = weighted_inverse_sum(inst, cert.bstar.m());
  Mat g0 = inv_pd(cert.bstar.m() + inst.n0.m(), "B*+N0 must be PD");
  cert.r_stat = (g1 + cert.m1.m() - g0 - cert.m2.m()).norm();
  cert.r_slack1 = (cert.bstar.m() * cert.m1.m()).norm();
  cert.r_slack2 = ((inst.s.m() - cert.bstar.m()) * cert.m2.m()).norm();
  cert.scale_ = std::max({1.0, g0.norm(), g1.norm()});
}

KktCertificate recover_multipliers(const ExtremalInstance& inst, const SymMatrix& bstar) {
  Mat g = inv_pd(bstar.m() + inst.n0.m(), "B*+N0 must be PD") -
          weighted_inverse_sum(inst, bstar.m());
  Mat p0 = null_projector(bstar);
  Mat ps = null_projector(inst.s - bstar);
  KktCertificate cert;
  cert.bstar = bstar;
  cert.m1 = psd_clip(SymMatrix::from_symmetric(p0 * g * p0));
  cert.m2 = psd_clip(SymMatrix::from_symmetric(-(ps * g * ps)));
  kkt_residual(inst, cert);
  return cert;
}

Enhancement enhance(const ExtremalInstance& inst, const KktCertificate& cert) {
  require(inst.mu[0] > 0.0, Errc::invalid_argument, "first weight must be positive");
  const SymMatrix& n1 = inst.nk[0];
  const Mat& b = cert.bstar.m();

  Enhancement out;
  out.n1_tilde = SymMatrix::from_symmetric(
      inv_pd(inv_pd(n1.m(), "N1 must be PD") + cert.m1.m() / inst.mu[0],
             "N1^{-1} + M1/mu1 must be PD"));
  out.n0_tilde = SymMatrix::from_symmetric(
      inv_pd(inv_pd(b + inst.n0.m(), "B*+N0 must be PD") + cert.m2.m(),
             "(B*+N0)^{-1} + M2 must be PD") -
      b);

  auto fail = [](const char* prop, double resid) {
    throw Error(Errc::enhancement_property_violation,
                std::string(prop) + " violated, residual " + std::to_string(resid));
  };

  double tol = 1e-7;
  double s1 = std::max(1.0, spectral_norm(n1));
  double s0 = std::max(1.0, spectral_norm(inst.n0));
  double e;
  if ((e = min_eigenvalue(out.n1_tilde)) <= 0.0) fail("enhanced N1 positive definite", -e);
  if ((e = min_eigenvalue(n1 - out.n1_tilde)) < -tol * s1) fail("enhanced N1 <= N1", -e);
  if ((e = min_eigenvalue(out.n0_tilde - out.n1_tilde)) < -tol * s0)
    fail("enhanced N1 <= enhanced N0", -e);
  if ((e = min_eigenvalue(inst.n0 - out.n0_tilde)) < -tol * s0) fail("enhanced N0 <= N0", -e);

  double lhs3 = logdet_ratio(SymMatrix::from_symmetric(b) + out.n1_tilde, out.n1_tilde);
  double rhs3 = logdet_ratio(SymMatrix::from_symmetric(b) + n1, n1);
  out.dirty_paper_gap = lhs3 - rhs3;
  if (std::abs(out.dirty_paper_gap) > tol * std::max(1.0, std::abs(rhs3)))
    fail("|B*+N1~|/|N1~| = |B*+N1|/|N1|", out.dirty_paper_gap);

  double lhs4 = logdet_ratio(inst.s + out.n0_tilde, SymMatrix::from_symmetric(b) + out.n0_tilde);
  double rhs4 = logdet_ratio(inst.s + inst.n0, SymMatrix::from_symmetric(b) + inst.n0);
  out.receiver_gap = lhs4 - rhs4;
  if (std::abs(out.receiver_gap) > tol * std::max(1.0, std::abs(rhs4)))
    fail("|S+N0~|/|B*+N0~| = |S+N0|/|B*+N0|", out.receiver_gap);

  // mu1 (B*+N1~)^{-1} + sum_{k>=2} mu_k (B*+N_k)^{-1} = (B*+N0~)^{-1}
  Mat lhs_kkt = inst.mu[0] * inv_pd(b + out.n1_tilde.m(), "B*+N1~ must be PD");
  for (int k = 1; k < inst.noises(); ++k)
    lhs_kkt += inst.mu[k] * inv_pd(b + inst.nk[k].m(), "B+N_k must be PD");
  Mat rhs_kkt = inv_pd(b + out.n0_tilde.m(), "B*+N0~ must be PD");
  double scale = std::max({1.0, lhs_kkt.norm(), rhs_kkt.norm()});
  out.kkt4_residual = (lhs_kkt - rhs_kkt).norm();
  if (out.kkt4_residual > 1e-8 * scale)
    fail("modified stationarity", out.kkt4_residual);

  if (inst.noises() >= 2) {
    out.has_n2_variant = true;
    const SymMatrix& n2 = inst.nk[1];
    double alt = logdet_ratio(inst.s + n2, SymMatrix::from_symmetric(b) + n2);
    out.receiver_gap_n2 = lhs4 - alt;
  }
  return out;
}

namespace {

void check_feasible(const ExtremalInstance& inst, const SymMatrix& bx) {
  double tol = 1e-9 * std::max(1.0, spectral_norm(inst.s));
  if (!loewner_leq(SymMatrix::zero(inst.dim()), bx, tol) || !loewner_leq(bx, inst.s, tol))
    throw Error(Errc::infeasible_b, "input covariance must satisfy 0 <= bx <= S");
}

double weighted_entropy_gap(const ExtremalInstance& inst, const SymMatrix& cov) {
  double acc = 0.0;
  for (int k = 0; k < inst.noises(); ++k)
    acc += inst.mu[k] * gaussian_entropy(cov + inst.nk[k]);
  return acc - gaussian_entropy(cov + inst.n0);
}

}  // namespace

ExtremalSides extremal_sides_gaussian(const ExtremalInstance& inst,
                                      const KktCertificate& cert, const SymMatrix& bx) {
  check_feasible(inst, bx);
  ExtremalSides out;
  out.lhs = weighted_entropy_gap(inst, bx);
  out.rhs = weighted_entropy_gap(inst, cert.bstar);
  return out;
}

ExtremalSides extremal_sides_mixture(const ExtremalInstance& inst,
                                     const KktCertificate& cert,
                                     const std::vector<GaussComponent>& comps) {
  if (comps.empty()) throw Error(Errc::invalid_distribution, "need at least one component");
  int n = inst.dim();
  double wsum = 0.0;
  Mat second_moment = Mat::Zero(n, n);
  for (const auto& c : comps) {
    if (c.weight <= 0.0)
      throw Error(Errc::invalid_distribution, "component weights must be positive");
    if (c.cov.dim() != n || c.mean.size() != n)
      throw Error(Errc::dimension_mismatch, "component dimension mismatch");
    wsum += c.weight;
    second_moment += c.weight * (c.cov.m() + c.mean * c.mean.transpose());
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw Error(Errc::invalid_distribution, "component weights must sum to 1");
  check_feasible(inst, SymMatrix::from_symmetric(second_moment));

  ExtremalSides out;
  for (const auto& c : comps) out.lhs += c.weight * weighted_entropy_gap(inst, c.cov);
  out.rhs = weighted_entropy_gap(inst, cert.bstar);
  return out;
}

ThreeNoiseSplit three_noise_split(const SymMatrix& bstar, const SymMatrix& n1,
                                  const SymMatrix& n2, const SymMatrix& n3, double mu,
                                  double eps) {
  require(mu > 0.0, Errc::invalid_argument, "mu must be positive");
  int n = bstar.dim();
  if (n1.dim() != n || n2.dim() != n || n3.dim() != n)
    throw Error(Errc::dimension_mismatch, "noise dimension mismatch");
  require(loewner_leq(n1, n3, 1e-9 * std::max(1.0, spectral_norm(n3))),
          Errc::precondition_violated, "N1 <= N3 required");

  SymMatrix w1 = bstar + n1, w2 = bstar + n2, w3 = bstar + n3;
  Mat w1i = inv_pd(w1.m(), "B*+N1 must be PD");
  Mat w2i = inv_pd(w2.m(), "B*+N2 must be PD");
  Mat w3i = inv_pd(w3.m(), "B*+N3 must be PD");
  Mat resid = w1i + mu * w3i - (1.0 + mu) * w2i;
  double scale = std::max({1.0, w1i.norm(), mu * w3i.norm(), (1.0 + mu) * w2i.norm()});
  require(resid.norm() <= 1e-8 * scale, Errc::precondition_violated,
          "(B*+N1)^{-1} + mu (B*+N3)^{-1} = (1+mu)(B*+N2)^{-1} must hold at bstar");

  GenEigResult ged = simultaneous_diag(w1, w2);
  ThreeNoiseSplit out;
  out.mu = mu;
  out.v = ged.v;
  out.lambda1 = ged.lambda1;
  out.lambda2 = ged.lambda2;
  Mat l3full = ged.v.transpose() * w3.m() * ged.v;
  Mat offdiag = l3full - Mat(l3full.diagonal().asDiagonal());
  require(offdiag.norm() <= 1e-6 * std::max(1.0, l3full.norm()), Errc::precondition_violated,
          "B*+N3 is not diagonal in the joint eigenbasis");
  out.lambda3 = l3full.diagonal();
  out.precondition_residual =
      std::max(resid.norm() / scale, offdiag.norm() / std::max(1.0, l3full.norm()));

  for (int i = 0; i < n; ++i)
    require(out.lambda1[i] <= out.lambda3[i] + 1e-9 * std::max(1.0, out.lambda3[i]),
            Errc::precondition_violated, "lambda1 <= lambda3 must hold");

  out.eps = eps < 0.0 ? 1e-4 * out.lambda3.sum() / n : eps;
  require(out.eps > 0.0, Errc::invalid_argument, "eps must be positive");
  out.lambda3_tilde = out.lambda3.array() + out.eps;
  out.lambda2_tilde = (1.0 + mu) *
                      (out.lambda1.cwiseInverse() + mu * out.lambda3_tilde.cwiseInverse())
                          .cwiseInverse();
  out.a = (out.lambda2_tilde - out.lambda1).cwiseQuotient(out.lambda3_tilde - out.lambda1);

  for (int i = 0; i < n; ++i) {
    require(out.lambda1[i] < out.lambda2_tilde[i] && out.lambda2_tilde[i] < out.lambda3_tilde[i],
            Errc::precondition_violated, "lambda1 < lambda2~ < lambda3~ must hold");
    require(out.lambda2[i] < out.lambda2_tilde[i], Errc::precondition_violated,
            "lambda2 < lambda2~ must hold");
    require(out.a[i] > 0.0 && out.a[i] < 1.0, Errc::precondition_violated,
            "split coefficients must lie in (0,1)");
  }
  return out;
}

namespace {

// (1/n) log|A| and (1/n) log|I-A| for 0 < A < I.
std::pair<double, double> log_det_fracs(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a.m());
  const Vec& ev = es.eigenvalues();
  int n = static_cast<int>(ev.size());
  double la = 0.0, lia = 0.0;
  for (int i = 0; i < n; ++i) {
    if (ev[i] <= 0.0 || ev[i] >= 1.0)
      throw Error(Errc::precondition_violated, "A must satisfy 0 < A < I strictly");
    la += std::log(ev[i]);
    lia += std::log1p(-ev[i]);
  }
  return {la / n, lia / n};
}

}  // namespace

FConcave f_concave(double b, double c, const SymMatrix& a, double mu) {
  int n = a.dim();
  auto [la, lia] = log_det_fracs(a);
  double t1 = lia + 2.0 * b / n;
  double t2 = la + 2.0 * c / n;
  double m = std::max(t1, t2);
  double logs = m + std::log(std::exp(t1 - m) + std::exp(t2 - m));
  double w1 = std::exp(t1 - logs);
  double w2 = std::exp(t2 - logs);

  FConcave out;
  out.value = b + mu * c - 0.5 * (1.0 + mu) * n * logs;
  out.grad << 1.0 - (1.0 + mu) * w1, mu - (1.0 + mu) * w2;
  double kappa = 2.0 * (1.0 + mu) / n * w1 * w2;
  out.hess << -kappa, kappa, kappa, -kappa;
  return out;
}

FMax f_max(const SymMatrix& a, double mu) {
  require(mu > 0.0, Errc::invalid_argument, "mu must be positive");
  int n = a.dim();
  auto [la, lia] = log_det_fracs(a);
  FMax out;
  out.delta = 0.5 * n * (std::log(mu) + lia - la);
  out.value = 0.5 * mu * n * (std::log(mu) + lia - la) -
              0.5 * (1.0 + mu) * n * (std::log1p(mu) + lia);
  return out;
}

LogADiag log_a_identities(const ThreeNoiseSplit& split) {
  int n = static_cast<int>(split.a.size());
  LogADiag out;
  for (int i = 0; i < n; ++i) {
    require(split.a[i] > 0.0 && split.a[i] < 1.0, Errc::precondition_violated,
            "split coefficients must lie in (0,1)");
    require(split.lambda1[i] < split.lambda3_tilde[i], Errc::precondition_violated,
            "lambda1 < lambda3~ must hold");
    out.log_det_a += std::log(split.a[i]);
    out.log_det_ia += std::log1p(-split.a[i]);
  }
  double l1 = split.lambda1.array().log().sum();
  double l2t = split.lambda2_tilde.array().log().sum();
  double l3t = split.lambda3_tilde.array().log().sum();
  out.log_det_a_rhs = n * std::log(split.mu / (1.0 + split.mu)) + l2t - l3t;
  out.log_det_ia_rhs = -n * std::log1p(split.mu) + l2t - l1;
  return out;
}

CombinedNoise combine_leading_noises(const ExtremalInstance& inst, const SymMatrix& bstar) {
  int kk = inst.noises();
  require(kk >= 2, Errc::invalid_argument, "need at least two noises to combine");
  const Mat& b = bstar.m();

  Mat g1 = weighted_inverse_sum(inst, b);
  Mat g0 = inv_pd(b + inst.n0.m(), "B*+N0 must be PD");
  double scale = std::max({1.0, g0.norm(), g1.norm()});
  require((g1 - g0).norm() <= 1e-8 * scale, Errc::precondition_violated,
          "stationarity with zero multipliers must hold at bstar");

  double mu_last = inst.mu[kk - 1];
  double rest = 1.0 - mu_last;
  require(rest > 1e-12, Errc::invalid_argument, "leading weights must not vanish");

  Mat h = Mat::Zero(inst.dim(), inst.dim());
  for (int k = 0; k + 1 < kk; ++k)
    h += inst.mu[k] / rest * inv_pd(b + inst.nk[k].m(), "B+N_k must be PD");
  CombinedNoise out;
  out.n = SymMatrix::from_symmetric(inv_pd(h, "combined inverse must be PD") - b);
  out.mu_prime = mu_last / rest;

  double tol = 1e-9 * std::max(1.0, spectral_norm(inst.nk[kk - 2]));
  require(loewner_leq(inst.nk[0], out.n, tol) && loewner_leq(out.n, inst.nk[kk - 2], tol),
          Errc::precondition_violated, "combined noise must satisfy N1 <= N <= N_{K-1}");

  Mat lhs = inv_pd(b + out.n.m(), "B+N must be PD") +
            out.mu_prime * inv_pd(b + inst.nk[kk - 1].m(), "B+N_K must be PD");
  Mat rhs = (1.0 + out.mu_prime) * g0;
  out.lvc2_residual = (lhs - rhs).norm() / std::max(1.0, rhs.norm());
  return out;
}

}  // namespace epc
