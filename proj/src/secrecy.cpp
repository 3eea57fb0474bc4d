#include "secrecy.hpp"

#include <cmath>
#include <thread>

#include "pareto.hpp"

namespace epc {

namespace {

void check_scenario(int scenario) {
  if (scenario != 1 && scenario != 2)
    throw Error(Errc::invalid_argument, "scenario must be 1 or 2");
}

void check_mu(int scenario, double mu) {
  if (scenario == 1 && mu < 0.0)
    throw Error(Errc::invalid_argument, "scenario 1 requires mu >= 0");
  if (scenario == 2 && mu < 1.0)
    throw Error(Errc::invalid_argument, "scenario 2 requires mu >= 1");
}

Mat inv_pd(const Mat& m, const char* what) {
  Eigen::LLT<Mat> llt(0.5 * (m + m.transpose()));
  if (llt.info() != Eigen::Success) throw Error(Errc::not_pd, what);
  return llt.solve(Mat::Identity(m.rows(), m.cols()));
}

}  // namespace

ChannelSpec::ChannelSpec(SymMatrix s_, SymMatrix n1_, SymMatrix n2_, SymMatrix n3_)
    : s(std::move(s_)), n1(std::move(n1_)), n2(std::move(n2_)), n3(std::move(n3_)) {
  int n = s.dim();
  if (n1.dim() != n || n2.dim() != n || n3.dim() != n)
    throw Error(Errc::dimension_mismatch, "channel matrices have different dimensions");
  if (min_eigenvalue(n1) <= 0.0 || min_eigenvalue(n2) <= 0.0 || min_eigenvalue(n3) <= 0.0)
    throw Error(Errc::not_pd, "noise covariances must be PD");
  double tol = 1e-9 * std::max(1.0, spectral_norm(n3));
  if (!loewner_leq(n1, n2, tol) || !loewner_leq(n2, n3, tol))
    throw Error(Errc::precondition_violated, "noises must be degraded: N1 <= N2 <= N3");
  if (min_eigenvalue(s) < -1e-9 * std::max(1.0, spectral_norm(s)))
    throw Error(Errc::not_psd, "input constraint S must be PSD");
}

Rates rates_for_b(const ChannelSpec& spec, int scenario, const SymMatrix& b) {
  check_scenario(scenario);
  double tol = 1e-9 * std::max(1.0, spectral_norm(spec.s));
  if (!loewner_leq(SymMatrix::zero(spec.dim()), b, tol) || !loewner_leq(b, spec.s, tol))
    throw Error(Errc::infeasible_b, "B must satisfy 0 <= B <= S");

  const SymMatrix& eav1 = scenario == 1 ? spec.n2 : spec.n3;
  Rates r;
  r.r1_raw = 0.5 * (logdet(b + spec.n1) - logdet(spec.n1)) -
             0.5 * (logdet(b + eav1) - logdet(eav1));
  r.r2_raw = 0.5 * (logdet(spec.s + spec.n2) - logdet(b + spec.n2)) -
             0.5 * (logdet(spec.s + spec.n3) - logdet(b + spec.n3));
  r.r1 = std::max(0.0, r.r1_raw);
  r.r2 = std::max(0.0, r.r2_raw);
  return r;
}

double r1_max(const ChannelSpec& spec, int scenario) {
  check_scenario(scenario);
  const SymMatrix& eav = scenario == 1 ? spec.n2 : spec.n3;
  return 0.5 * (logdet(spec.s + spec.n1) - logdet(spec.n1)) -
         0.5 * (logdet(spec.s + eav) - logdet(eav));
}

double weighted_objective(const ChannelSpec& spec, int scenario, double mu,
                          const SymMatrix& b) {
  check_scenario(scenario);
  Rates r = rates_for_b(spec, scenario, b);
  return r.r1_raw + mu * r.r2_raw;
}

SymMatrix weighted_gradient(const ChannelSpec& spec, int scenario, double mu,
                            const SymMatrix& b) {
  check_scenario(scenario);
  Mat g;
  if (scenario == 1) {
    g = inv_pd(b.m() + spec.n1.m(), "B+N1") -
        (1.0 + mu) * inv_pd(b.m() + spec.n2.m(), "B+N2") +
        mu * inv_pd(b.m() + spec.n3.m(), "B+N3");
  } else {
    g = inv_pd(b.m() + spec.n1.m(), "B+N1") +
        (mu - 1.0) * inv_pd(b.m() + spec.n3.m(), "B+N3") -
        mu * inv_pd(b.m() + spec.n2.m(), "B+N2");
  }
  return SymMatrix::from_symmetric(0.5 * g);
}

ExtremalInstance weighted_kkt_instance(const ChannelSpec& spec, int scenario, double mu) {
  check_scenario(scenario);
  check_mu(scenario, mu);
  Vec w(2);
  if (scenario == 1) {
    w << 1.0 / (1.0 + mu), mu / (1.0 + mu);
  } else {
    w << 1.0 / mu, (mu - 1.0) / mu;
  }
  return ExtremalInstance(spec.s, spec.n2, {spec.n1, spec.n3}, w);
}

SymMatrix random_feasible_b(const SymMatrix& s, rng::Stream& stream) {
  int n = s.dim();
  SymMatrix s12 = sym_sqrt(s);
  Mat w = rng::random_sym_eig(n, stream, 0.0, 1.0);
  return SymMatrix::from_symmetric(s12.m() * w * s12.m());
}

namespace {

struct SingleRun {
  SymMatrix b;
  double j = 0.0;
  bool converged = false;
  int iterations = 0;
};

SingleRun ascend(const ChannelSpec& spec, int scenario, double mu, const SymMatrix& b0,
                 const OptOptions& opts) {
  double scale = std::max(1.0, spec.s.m().norm());
  SingleRun run;
  run.b = project_box(b0, spec.s);
  run.j = weighted_objective(spec, scenario, mu, run.b);
  double step = 1.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    run.iterations = it + 1;
    SymMatrix g = weighted_gradient(spec, scenario, mu, run.b);
    SymMatrix probe = project_box(SymMatrix::from_symmetric(run.b.m() + g.m()), spec.s);
    if ((run.b.m() - probe.m()).norm() <= opts.grad_tol * scale) {
      run.converged = true;
      break;
    }
    bool accepted = false;
    while (step >= 1e-14) {
      SymMatrix cand =
          project_box(SymMatrix::from_symmetric(run.b.m() + step * g.m()), spec.s);
      Mat dir = cand.m() - run.b.m();
      double jc = weighted_objective(spec, scenario, mu, cand);
      double slope = (g.m().array() * dir.array()).sum();
      // Strict improvement is required: near the optimum 1e-4 * slope can
      // round away against run.j, and accepting an objective tie would let the
      // iteration crawl at the noise floor instead of reaching the
      // step-collapse test below, which is what recognizes convergence there.
      if (jc > run.j && jc >= run.j + 1e-4 * slope) {
        run.b = cand;
        run.j = jc;
        step = std::min(step * 1.3, 1e3);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Step collapsed: no further progress is possible at this scale.
      run.converged = (run.b.m() - probe.m()).norm() <= 1e3 * opts.grad_tol * scale;
      break;
    }
  }
  return run;
}

}  // namespace

WeightedOpt optimize_weighted(const ChannelSpec& spec, int scenario, double mu,
                              const OptOptions& opts) {
  check_scenario(scenario);
  check_mu(scenario, mu);
  int n = spec.dim();

  std::vector<SymMatrix> inits;
  inits.push_back(SymMatrix::zero(n));
  inits.push_back(0.5 * spec.s);
  inits.push_back(spec.s);
  rng::Stream stream(opts.seed, 0x5ec0);
  for (int i = 3; i < opts.multistarts; ++i) inits.push_back(random_feasible_b(spec.s, stream));

  WeightedOpt out;
  SingleRun best_any, best_conv;
  bool have_any = false, have_conv = false;
  double worst_converged = std::numeric_limits<double>::infinity();
  double best_converged = -std::numeric_limits<double>::infinity();
  for (const auto& b0 : inits) {
    SingleRun run = ascend(spec, scenario, mu, b0, opts);
    if (run.converged) {
      worst_converged = std::min(worst_converged, run.j);
      best_converged = std::max(best_converged, run.j);
      if (!have_conv || run.j > best_conv.j) {
        best_conv = run;
        have_conv = true;
      }
    }
    if (!have_any || run.j > best_any.j) {
      best_any = run;
      have_any = true;
    }
  }
  // Prefer a converged run unless a non-converged one beats it by more than a
  // tie window: within the window the objectives describe the same point, and
  // a run that merely exhausted its iteration budget there must not win on a
  // last-digit difference (the choice must not depend on multistart order).
  const SingleRun& pick =
      (have_conv && best_any.j <= best_conv.j + 1e-12) ? best_conv : best_any;
  out.bstar = pick.b;
  out.objective = pick.j;
  out.converged = pick.converged;
  out.iterations = pick.iterations;
  out.multistart_spread =
      best_converged > -std::numeric_limits<double>::infinity() ? best_converged - worst_converged : 0.0;

  ExtremalInstance inst = weighted_kkt_instance(spec, scenario, mu);
  out.weights = inst.mu;
  out.cert = recover_multipliers(inst, out.bstar);
  out.cert_ok = out.cert.valid(opts.kkt_tol);
  return out;
}

bool RegionBoundary::all_ok() const {
  for (const auto& r : rows)
    if (!r.converged || !r.cert_ok || !r.support_ok) return false;
  return true;
}

RegionBoundary trace_region(const ChannelSpec& spec, int scenario,
                            const std::vector<double>& mu_grid, const OptOptions& opts,
                            int threads) {
  check_scenario(scenario);
  if (mu_grid.empty()) throw Error(Errc::invalid_argument, "mu grid must be nonempty");
  RegionBoundary region;
  region.scenario = scenario;
  region.rows.resize(mu_grid.size());

  auto worker = [&](size_t begin, size_t stride) {
    for (size_t i = begin; i < mu_grid.size(); i += stride) {
      RegionRow& row = region.rows[i];
      row.mu = mu_grid[i];
      OptOptions row_opts = opts;
      row_opts.seed = rng::derive(opts.seed, 0xb0 + i);
      WeightedOpt opt = optimize_weighted(spec, scenario, row.mu, row_opts);
      row.b = opt.bstar;
      row.rates = rates_for_b(spec, scenario, opt.bstar);
      row.r_stat = opt.cert.r_stat;
      row.r_slack1 = opt.cert.r_slack1;
      row.r_slack2 = opt.cert.r_slack2;
      row.converged = opt.converged;
      row.cert_ok = opt.cert_ok;

      rng::Stream check(opts.seed, 0xc0de + i);
      double excess = -std::numeric_limits<double>::infinity();
      for (int t = 0; t < 100; ++t) {
        SymMatrix b = random_feasible_b(spec.s, check);
        excess = std::max(excess,
                          weighted_objective(spec, scenario, row.mu, b) - opt.objective);
      }
      row.support_excess = excess;
      row.support_ok = excess <= 1e-7;
    }
  };

  int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(mu_grid.size())));
  if (nthreads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t, nthreads);
    for (auto& th : pool) th.join();
  }
  return region;
}

std::vector<std::pair<double, double>> brute_force_region(const ChannelSpec& spec,
                                                          int scenario, int resolution) {
  check_scenario(scenario);
  if (resolution < 2) throw Error(Errc::invalid_argument, "resolution must be >= 2");
  int n = spec.dim();
  if (n > 2) throw Error(Errc::dimension_too_large, "exhaustive sweep supports n <= 2 only");

  std::vector<std::pair<double, double>> pts;
  auto push = [&](const SymMatrix& b) {
    Rates r = rates_for_b(spec, scenario, b);
    pts.emplace_back(r.r1, r.r2);
  };

  if (n == 1) {
    double smax = spec.s(0, 0);
    for (int i = 0; i < resolution; ++i) {
      Mat b(1, 1);
      b << smax * i / (resolution - 1);
      push(SymMatrix::from_symmetric(b));
    }
  } else {
    SymMatrix s12 = sym_sqrt(spec.s);
    for (int t = 0; t < resolution; ++t) {
      double theta = 0.5 * M_PI * t / resolution;
      double ct = std::cos(theta), st = std::sin(theta);
      Mat q(2, 2);
      q << ct, -st, st, ct;
      for (int i = 0; i < resolution; ++i) {
        double u1 = static_cast<double>(i) / (resolution - 1);
        for (int j = 0; j < resolution; ++j) {
          double u2 = static_cast<double>(j) / (resolution - 1);
          Mat w = q * Eigen::Vector2d(u1, u2).asDiagonal() * q.transpose();
          push(SymMatrix::from_symmetric(s12.m() * w * s12.m()));
        }
      }
    }
  }

  std::vector<std::pair<double, double>> front;
  for (size_t i : pareto_indices(pts)) front.push_back(pts[i]);
  return front;
}

}  // namespace epc
