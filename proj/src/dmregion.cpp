#include "dmregion.hpp"

#include <cmath>
#include <functional>

#include "pareto.hpp"

namespace epc {

namespace {

void check_stochastic(const Mat& m, const char* what) {
  if (m.rows() == 0 || m.cols() == 0)
    throw Error(Errc::invalid_argument, "channel matrix must be nonempty");
  for (int i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    for (int j = 0; j < m.cols(); ++j) {
      if (m(i, j) < 0.0)
        throw Error(Errc::invalid_distribution,
                    std::string(what) + ": entries must be nonnegative");
      sum += m(i, j);
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw Error(Errc::invalid_distribution, std::string(what) + ": rows must sum to 1");
  }
}

double entropy(const Eigen::RowVectorXd& p) {
  double h = 0.0;
  for (int i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) h -= p[i] * std::log(p[i]);
  return h;
}

// I(X;Y|U) for channel w given p(u) and rows p(x|u).
double cond_mi(const Vec& pu, const Mat& pxu, const Mat& w) {
  Eigen::RowVectorXd hrows(w.rows());
  for (int x = 0; x < w.rows(); ++x) hrows[x] = entropy(w.row(x));
  double acc = 0.0;
  for (int u = 0; u < pu.size(); ++u) {
    if (pu[u] <= 0.0) continue;
    Eigen::RowVectorXd py = pxu.row(u) * w;
    acc += pu[u] * (entropy(py) - pxu.row(u).dot(hrows));
  }
  return acc;
}

// I(U;Y) for channel w.
double aux_mi(const Vec& pu, const Mat& pxu, const Mat& w) {
  Eigen::RowVectorXd py = Eigen::RowVectorXd::Zero(w.cols());
  double acc = 0.0;
  for (int u = 0; u < pu.size(); ++u) {
    if (pu[u] <= 0.0) continue;
    Eigen::RowVectorXd pyu = pxu.row(u) * w;
    py += pu[u] * pyu;
    acc -= pu[u] * entropy(pyu);
  }
  return entropy(py) + acc;
}

// Visits all length-`parts` nonnegative integer vectors summing to `total`.
void compositions(int total, int parts, std::vector<int>& buf,
                  const std::function<void()>& visit, int idx = 0) {
  if (idx + 1 == parts) {
    buf[idx] = total;
    visit();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    buf[idx] = v;
    compositions(total - v, parts, buf, visit, idx + 1);
  }
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
  return r;
}

}  // namespace

DiscreteChannelSpec::DiscreteChannelSpec(Mat w1_, Mat d12_, Mat d23_)
    : w1(std::move(w1_)), d12(std::move(d12_)), d23(std::move(d23_)) {
  check_stochastic(w1, "w1");
  check_stochastic(d12, "d12");
  check_stochastic(d23, "d23");
  if (w1.cols() != d12.rows() || d12.cols() != d23.rows())
    throw Error(Errc::dimension_mismatch, "cascade dimensions do not chain");
  w2 = w1 * d12;
  w3 = w2 * d23;
}

DmRates rates_for_aux(const DiscreteChannelSpec& spec, int scenario, const Vec& pu,
                      const Mat& pxu) {
  if (scenario != 1 && scenario != 2)
    throw Error(Errc::invalid_argument, "scenario must be 1 or 2");
  if (pu.size() != pxu.rows() || pxu.cols() != spec.nx())
    throw Error(Errc::dimension_mismatch, "auxiliary distribution dimensions mismatch");
  double sum = 0.0;
  for (int u = 0; u < pu.size(); ++u) {
    if (pu[u] < 0.0)
      throw Error(Errc::invalid_distribution, "p(u) must be nonnegative");
    sum += pu[u];
    double rs = 0.0;
    for (int x = 0; x < pxu.cols(); ++x) {
      if (pxu(u, x) < 0.0)
        throw Error(Errc::invalid_distribution, "p(x|u) must be nonnegative");
      rs += pxu(u, x);
    }
    if (pu[u] > 0.0 && std::abs(rs - 1.0) > 1e-9)
      throw Error(Errc::invalid_distribution, "rows of p(x|u) must sum to 1");
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(Errc::invalid_distribution, "p(u) must sum to 1");

  const Mat& wd = scenario == 1 ? spec.w2 : spec.w3;
  DmRates r;
  r.r1_raw = cond_mi(pu, pxu, spec.w1) - cond_mi(pu, pxu, wd);
  r.r2_raw = aux_mi(pu, pxu, spec.w2) - aux_mi(pu, pxu, spec.w3);
  r.r1 = std::max(0.0, r.r1_raw);
  r.r2 = std::max(0.0, r.r2_raw);
  return r;
}

std::vector<DmFrontierPoint> enumerate_region(const DiscreteChannelSpec& spec, int scenario,
                                              int resolution, int u_card) {
  int nx = spec.nx();
  if (u_card < 0) u_card = nx + 1;
  if (u_card < 1 || u_card > nx + 1)
    throw Error(Errc::invalid_argument, "auxiliary cardinality must lie in [1, |X|+1]");
  if (resolution < 1) throw Error(Errc::invalid_argument, "resolution must be >= 1");

  double npu = binom(resolution + u_card - 1, u_card - 1);
  double ncond = binom(resolution + nx - 1, nx - 1);
  if (npu * std::pow(ncond, u_card) > 1e7)
    throw Error(Errc::grid_too_large, "simplex grid exceeds 1e7 points");

  std::vector<DmFrontierPoint> all;
  std::vector<std::pair<double, double>> pts;
  Vec pu(u_card);
  Mat pxu(u_card, nx);
  std::vector<int> ubuf(u_card);

  // Rows for zero-probability u slots are pinned to uniform so they do not
  // multiply the enumeration.
  std::function<void(int)> fill_rows = [&](int u) {
    if (u == u_card) {
      DmRates r = rates_for_aux(spec, scenario, pu, pxu);
      pts.emplace_back(r.r1, r.r2);
      DmFrontierPoint pt;
      pt.r1 = r.r1;
      pt.r2 = r.r2;
      pt.pu = pu;
      pt.pxu = pxu;
      all.push_back(std::move(pt));
      return;
    }
    if (pu[u] == 0.0) {
      pxu.row(u).setConstant(1.0 / nx);
      fill_rows(u + 1);
      return;
    }
    std::vector<int> xbuf(nx);
    compositions(resolution, nx, xbuf, [&] {
      for (int x = 0; x < nx; ++x) pxu(u, x) = static_cast<double>(xbuf[x]) / resolution;
      fill_rows(u + 1);
    });
  };

  compositions(resolution, u_card, ubuf, [&] {
    for (int u = 0; u < u_card; ++u) pu[u] = static_cast<double>(ubuf[u]) / resolution;
    fill_rows(0);
  });

  std::vector<DmFrontierPoint> front;
  for (size_t i : pareto_indices(pts)) front.push_back(all[i]);
  return front;
}

}  // namespace epc
