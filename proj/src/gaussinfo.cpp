#include "gaussinfo.hpp"

#include <cmath>
#include <limits>

#include "rng.hpp"

namespace epc {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)

double logdet_or(const SymMatrix& m, Errc code, const char* what) {
  try {
    return logdet(m);
  } catch (const Error&) {
    throw Error(code, what);
  }
}

}  // namespace

LinearGaussChannel::LinearGaussChannel(SymMatrix d_, SymMatrix bx_, SymMatrix nz_)
    : d(std::move(d_)), bx(std::move(bx_)), nz(std::move(nz_)) {
  if (d.dim() != bx.dim() || d.dim() != nz.dim())
    throw Error(Errc::dimension_mismatch, "channel matrices have different dimensions");
}

GaussianMixture::GaussianMixture(Vec w, std::vector<Vec> m, std::vector<SymMatrix> c)
    : weights(std::move(w)), means(std::move(m)), covs(std::move(c)) {
  int k = static_cast<int>(weights.size());
  if (k == 0 || means.size() != static_cast<size_t>(k) || covs.size() != static_cast<size_t>(k))
    throw Error(Errc::invalid_distribution, "weights, means, covs must have equal nonzero length");
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    if (weights[i] <= 0.0)
      throw Error(Errc::invalid_distribution, "mixture weights must be positive");
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw Error(Errc::invalid_distribution, "mixture weights must sum to 1");
  int n = static_cast<int>(means[0].size());
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(means[i].size()) != n || covs[i].dim() != n)
      throw Error(Errc::dimension_mismatch, "mixture components have different dimensions");
    if (min_eigenvalue(covs[i]) <= 0.0)
      throw Error(Errc::degenerate_component, "mixture component covariance must be PD");
  }
}

GaussianMixture GaussianMixture::shifted(const SymMatrix& shift) const {
  std::vector<SymMatrix> c;
  c.reserve(covs.size());
  for (const auto& cov : covs) c.push_back(cov + shift);
  return GaussianMixture(weights, means, std::move(c));
}

double gaussian_entropy(const SymMatrix& cov) {
  int n = cov.dim();
  return 0.5 * (n * (kLog2Pi + 1.0) + logdet(cov));
}

double mi_z_given_output(const LinearGaussChannel& ch) {
  SymMatrix dbd = SymMatrix::from_symmetric(ch.d.m() * ch.bx.m() * ch.d.m());
  double ld_sig = logdet_or(dbd, Errc::singular_input, "DBD must be PD for I(Z;DX+Z)");
  return 0.5 * (logdet(dbd + ch.nz) - ld_sig);
}

SymMatrix mmse_x(const LinearGaussChannel& ch) {
  const Mat& b = ch.bx.m();
  const Mat& d = ch.d.m();
  Mat y = d * b * d + ch.nz.m();
  Eigen::LLT<Mat> llt(0.5 * (y + y.transpose()));
  if (llt.info() != Eigen::Success)
    throw Error(Errc::not_pd, "output covariance must be PD");
  Mat db = d * b;
  return SymMatrix::from_symmetric(b - db.transpose() * llt.solve(db));
}

SymMatrix mmse_z(const LinearGaussChannel& ch) {
  Eigen::FullPivLU<Mat> lu(ch.d.m());
  if (!lu.isInvertible()) throw Error(Errc::singular_d, "D must be invertible for mmse_z");
  Mat e = mmse_x(ch).m();
  return SymMatrix::from_symmetric(ch.d.m() * e * ch.d.m());
}

Mat immse_gradient(const LinearGaussChannel& ch) {
  Eigen::FullPivLU<Mat> lu(ch.d.m());
  if (!lu.isInvertible())
    throw Error(Errc::singular_d, "D must be invertible for the I-MMSE gradient");
  Mat dinv = lu.inverse();
  Eigen::LLT<Mat> nz_llt(ch.nz.m());
  if (nz_llt.info() != Eigen::Success)
    throw Error(Errc::not_pd, "noise covariance must be PD");
  Mat covz = mmse_z(ch).m();
  return (nz_llt.solve(covz) - Mat::Identity(ch.d.dim(), ch.d.dim())) * dinv;
}

McEstimate mixture_entropy_mc(const GaussianMixture& mix, std::int64_t samples,
                              std::uint64_t seed) {
  if (samples <= 1) throw Error(Errc::invalid_argument, "need at least 2 samples");
  int n = mix.dim();
  int k = mix.components();

  std::vector<Eigen::LLT<Mat>> llts;
  std::vector<double> half_logdet(k), logw(k);
  llts.reserve(k);
  for (int j = 0; j < k; ++j) {
    llts.emplace_back(mix.covs[j].m());
    if (llts[j].info() != Eigen::Success)
      throw Error(Errc::degenerate_component, "component covariance must be PD");
    double ld = 0.0;
    for (int i = 0; i < n; ++i) ld += std::log(llts[j].matrixLLT()(i, i));
    half_logdet[j] = ld;
    logw[j] = std::log(mix.weights[j]);
  }

  double sum = 0.0, sumsq = 0.0;
  Vec xi(n), y(n);
  for (std::int64_t i = 0; i < samples; ++i) {
    rng::Stream s(seed, static_cast<std::uint64_t>(i));
    double u = s.next_unit();
    int comp = k - 1;
    double acc = 0.0;
    for (int j = 0; j < k; ++j) {
      acc += mix.weights[j];
      if (u <= acc) {
        comp = j;
        break;
      }
    }
    for (int t = 0; t < n; ++t) xi[t] = s.next_normal();
    y = mix.means[comp] + llts[comp].matrixL() * xi;

    // log p(y) via log-sum-exp over components
    double best = -std::numeric_limits<double>::infinity();
    Vec terms(k);
    for (int j = 0; j < k; ++j) {
      Vec r = llts[j].matrixL().solve(y - mix.means[j]);
      terms[j] = logw[j] - 0.5 * n * kLog2Pi - half_logdet[j] - 0.5 * r.squaredNorm();
      best = std::max(best, terms[j]);
    }
    double se = 0.0;
    for (int j = 0; j < k; ++j) se += std::exp(terms[j] - best);
    double neg_logp = -(best + std::log(se));
    sum += neg_logp;
    sumsq += neg_logp * neg_logp;
  }

  McEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.value = sum / static_cast<double>(samples);
  double var = (sumsq - sum * sum / static_cast<double>(samples)) /
               static_cast<double>(samples - 1);
  est.stderr_ = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
  return est;
}

}  // namespace epc
