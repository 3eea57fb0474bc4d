// C ABI over the core library. Every entry point catches at the boundary,
// stores the message in a thread-local slot, and returns a status code;
// out-parameters are written only on EPC_OK.

#include "epicosta.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "epi.hpp"
#include "errors.hpp"
#include "extremal.hpp"
#include "gaussinfo.hpp"
#include "io.hpp"
#include "matcore.hpp"
#include "rng.hpp"
#include "secrecy.hpp"
#include "version.hpp"

using json = nlohmann::json;

struct epc_mat {
  epc::SymMatrix m;
};

namespace {

thread_local std::string t_last_error;

epc_status map_errc(epc::Errc c) {
  using epc::Errc;
  switch (c) {
    case Errc::none: return EPC_OK;
    case Errc::parse_error: return EPC_ERR_PARSE;
    case Errc::dimension_mismatch: return EPC_ERR_DIMENSION_MISMATCH;
    case Errc::asymmetric_input: return EPC_ERR_ASYMMETRIC_INPUT;
    case Errc::not_psd: return EPC_ERR_NOT_PSD;
    case Errc::not_pd: return EPC_ERR_NOT_PD;
    case Errc::singular_input: return EPC_ERR_SINGULAR_INPUT;
    case Errc::singular_d: return EPC_ERR_SINGULAR_D;
    case Errc::singular_a: return EPC_ERR_SINGULAR_A;
    case Errc::no_convergence: return EPC_ERR_NO_CONVERGENCE;
    case Errc::invalid_distribution: return EPC_ERR_INVALID_DISTRIBUTION;
    case Errc::degenerate_component: return EPC_ERR_DEGENERATE_COMPONENT;
    case Errc::invalid_argument: return EPC_ERR_INVALID_ARGUMENT;
    case Errc::precondition_violated: return EPC_ERR_PRECONDITION_VIOLATED;
    case Errc::enhancement_property_violation: return EPC_ERR_ENHANCEMENT_PROPERTY;
    case Errc::certificate_rejected: return EPC_ERR_CERTIFICATE_REJECTED;
    case Errc::infeasible_b: return EPC_ERR_INFEASIBLE_B;
    case Errc::grid_too_large: return EPC_ERR_GRID_TOO_LARGE;
    case Errc::dimension_too_large: return EPC_ERR_DIMENSION_TOO_LARGE;
  }
  return EPC_ERR_INTERNAL;
}

template <typename F>
epc_status guarded(F&& f) {
  try {
    f();
    return EPC_OK;
  } catch (const epc::Error& e) {
    t_last_error = e.what();
    return map_errc(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return EPC_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return EPC_ERR_INTERNAL;
  }
}

epc_status null_arg(const char* what) {
  t_last_error = std::string("null argument: ") + what;
  return EPC_ERR_INVALID_ARGUMENT;
}

char* dup_str(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

json mat_to_j(const epc::SymMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"n", m.dim()}, {"rows", std::move(rows)}};
}

json flat_to_j(const epc::Mat& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

json vec_to_j(const epc::Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

// I(Z; DX+Z) for a general (not necessarily symmetric) mixing matrix;
// finite-difference reference used by the gradient spot-check.
double mi_general(const epc::Mat& d, const epc::SymMatrix& bx, const epc::SymMatrix& nz) {
  epc::Mat dbd = d * bx.m() * d.transpose();
  double a = epc::logdet(epc::SymMatrix::from_symmetric(0.5 * (dbd + dbd.transpose()) + nz.m()));
  double b = epc::logdet(epc::SymMatrix::from_symmetric(0.5 * (dbd + dbd.transpose())));
  return 0.5 * (a - b);
}

}  // namespace

extern "C" {

const char* epc_version(void) { return epc::kVersion; }

const char* epc_status_name(epc_status s) {
  switch (s) {
    case EPC_OK: return "Ok";
    case EPC_ERR_PARSE: return "ParseError";
    case EPC_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case EPC_ERR_ASYMMETRIC_INPUT: return "AsymmetricInput";
    case EPC_ERR_NOT_PSD: return "NotPsd";
    case EPC_ERR_NOT_PD: return "NotPd";
    case EPC_ERR_SINGULAR_INPUT: return "SingularInput";
    case EPC_ERR_SINGULAR_D: return "SingularD";
    case EPC_ERR_SINGULAR_A: return "SingularA";
    case EPC_ERR_NO_CONVERGENCE: return "NoConvergence";
    case EPC_ERR_INVALID_DISTRIBUTION: return "InvalidDistribution";
    case EPC_ERR_DEGENERATE_COMPONENT: return "DegenerateComponent";
    case EPC_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case EPC_ERR_PRECONDITION_VIOLATED: return "PreconditionViolated";
    case EPC_ERR_ENHANCEMENT_PROPERTY: return "EnhancementPropertyViolation";
    case EPC_ERR_CERTIFICATE_REJECTED: return "CertificateRejected";
    case EPC_ERR_INFEASIBLE_B: return "InfeasibleB";
    case EPC_ERR_GRID_TOO_LARGE: return "GridTooLarge";
    case EPC_ERR_DIMENSION_TOO_LARGE: return "DimensionTooLarge";
    case EPC_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* epc_last_error(void) { return t_last_error.c_str(); }

void epc_free_str(char* s) { delete[] s; }

/* ---- symmetric matrices ---------------------------------------------- */

epc_status epc_mat_create(int n, const double* rowmajor, epc_mat** out) {
  if (!rowmajor || !out) return null_arg("epc_mat_create");
  return guarded([&] {
    if (n < 1) throw epc::Error(epc::Errc::invalid_argument, "matrix dimension must be positive");
    epc::Mat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = rowmajor[i * n + j];
    *out = new epc_mat{epc::SymMatrix(m)};
  });
}

epc_status epc_mat_from_json(const char* text, epc_mat** out) {
  if (!text || !out) return null_arg("epc_mat_from_json");
  return guarded([&] { *out = new epc_mat{epc::io::matrix_from_json(text)}; });
}

epc_status epc_mat_to_json(const epc_mat* m, char** out) {
  if (!m || !out) return null_arg("epc_mat_to_json");
  return guarded([&] { *out = dup_str(epc::io::matrix_to_json(m->m)); });
}

int epc_mat_dim(const epc_mat* m) { return m ? m->m.dim() : 0; }

epc_status epc_mat_copy(const epc_mat* m, double* rowmajor) {
  if (!m || !rowmajor) return null_arg("epc_mat_copy");
  return guarded([&] {
    int n = m->m.dim();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) rowmajor[i * n + j] = m->m(i, j);
  });
}

void epc_mat_free(epc_mat* m) { delete m; }

/* ---- matrix operations ------------------------------------------------ */

epc_status epc_sym_sqrt(const epc_mat* m, epc_mat** out) {
  if (!m || !out) return null_arg("epc_sym_sqrt");
  return guarded([&] { *out = new epc_mat{epc::sym_sqrt(m->m)}; });
}

epc_status epc_logdet(const epc_mat* m, double* out) {
  if (!m || !out) return null_arg("epc_logdet");
  return guarded([&] { *out = epc::logdet(m->m); });
}

epc_status epc_loewner_leq(const epc_mat* a, const epc_mat* b, double tol, int* out) {
  if (!a || !b || !out) return null_arg("epc_loewner_leq");
  return guarded([&] { *out = epc::loewner_leq(a->m, b->m, tol) ? 1 : 0; });
}

epc_status epc_simultaneous_diag(const epc_mat* a, const epc_mat* b, double* v,
                                 double* lambda2) {
  if (!a || !b || !v || !lambda2) return null_arg("epc_simultaneous_diag");
  return guarded([&] {
    epc::GenEigResult r = epc::simultaneous_diag(a->m, b->m);
    int n = a->m.dim();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v[i * n + j] = r.v(i, j);
    for (int i = 0; i < n; ++i) lambda2[i] = r.lambda2(i);
  });
}

epc_status epc_proportional(const epc_mat* a, const epc_mat* b, double tol, int* exists,
                            double* c) {
  if (!a || !b || !exists || !c) return null_arg("epc_proportional");
  return guarded([&] {
    std::optional<double> r = epc::proportional(a->m, b->m, tol);
    *exists = r.has_value() ? 1 : 0;
    *c = r.value_or(0.0);
  });
}

epc_status epc_project_box(const epc_mat* b, const epc_mat* s, epc_mat** out) {
  if (!b || !s || !out) return null_arg("epc_project_box");
  return guarded([&] { *out = new epc_mat{epc::project_box(b->m, s->m)}; });
}

/* ---- Gaussian information quantities ---------------------------------- */

epc_status epc_gaussian_entropy(const epc_mat* cov, double* out) {
  if (!cov || !out) return null_arg("epc_gaussian_entropy");
  return guarded([&] { *out = epc::gaussian_entropy(cov->m); });
}

epc_status epc_mi_z_given_output(const epc_mat* d, const epc_mat* bx, const epc_mat* nz,
                                 double* out) {
  if (!d || !bx || !nz || !out) return null_arg("epc_mi_z_given_output");
  return guarded([&] { *out = epc::mi_z_given_output({d->m, bx->m, nz->m}); });
}

epc_status epc_mmse_x(const epc_mat* d, const epc_mat* bx, const epc_mat* nz,
                      epc_mat** out) {
  if (!d || !bx || !nz || !out) return null_arg("epc_mmse_x");
  return guarded([&] { *out = new epc_mat{epc::mmse_x({d->m, bx->m, nz->m})}; });
}

epc_status epc_mmse_z(const epc_mat* d, const epc_mat* bx, const epc_mat* nz,
                      epc_mat** out) {
  if (!d || !bx || !nz || !out) return null_arg("epc_mmse_z");
  return guarded([&] { *out = new epc_mat{epc::mmse_z({d->m, bx->m, nz->m})}; });
}

epc_status epc_immse_gradient(const epc_mat* d, const epc_mat* bx, const epc_mat* nz,
                              double* rowmajor) {
  if (!d || !bx || !nz || !rowmajor) return null_arg("epc_immse_gradient");
  return guarded([&] {
    epc::Mat g = epc::immse_gradient({d->m, bx->m, nz->m});
    int n = d->m.dim();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) rowmajor[i * n + j] = g(i, j);
  });
}

epc_status epc_mixture_entropy_mc(const char* mixture_json, int64_t samples, uint64_t seed,
                                  double* value, double* stderr_out) {
  if (!mixture_json || !value || !stderr_out) return null_arg("epc_mixture_entropy_mc");
  return guarded([&] {
    epc::GaussianMixture mix = epc::io::mixture_from_json(mixture_json);
    epc::McEstimate est = epc::mixture_entropy_mc(mix, samples, seed);
    *value = est.value;
    *stderr_out = est.stderr_;
  });
}

/* ---- inequality checks ------------------------------------------------- */

epc_status epc_epi_check(const char* instance_json, int64_t samples, uint64_t seed,
                         double tol, double rhs_scale, char** report_json) {
  if (!instance_json || !report_json) return null_arg("epc_epi_check");
  return guarded([&] {
    if (!(rhs_scale > 0.0))
      throw epc::Error(epc::Errc::invalid_argument, "rhs_scale must be positive");
    if (!(tol >= 0.0)) throw epc::Error(epc::Errc::invalid_argument, "tol must be nonnegative");
    epc::EpiInstance inst = epc::io::epi_instance_from_json(instance_json);
    epc::EpiSides sides = epc::epi_sides(inst, samples, seed);
    double rhs = sides.rhs * rhs_scale;
    double gap = sides.lhs - rhs;
    bool violation = gap + 4.0 * sides.gap_stderr < -tol;
    json rep{{"lhs", sides.lhs},
             {"rhs", rhs},
             {"gap", gap},
             {"gap_stderr", sides.gap_stderr},
             {"degenerate_a", sides.degenerate_a},
             {"samples", samples},
             {"seed", seed},
             {"violation", violation}};
    if (inst.gauss_bx) {
      epc::EqualityCondition eq = epc::equality_condition(inst.a, *inst.gauss_bx, inst.nz);
      json e{{"degenerate", eq.degenerate}, {"residual", eq.residual}};
      if (eq.c) e["c"] = *eq.c;
      rep["equality"] = std::move(e);
    }
    *report_json = dup_str(rep.dump(2));
  });
}

epc_status epc_path_trace(const char* instance_json, int grid_points, char** report_json) {
  if (!instance_json || !report_json) return null_arg("epc_path_trace");
  return guarded([&] {
    if (grid_points < 2)
      throw epc::Error(epc::Errc::invalid_argument, "grid must have at least two points");
    epc::EpiInstance inst = epc::io::epi_instance_from_json(instance_json);
    if (!inst.gauss_bx)
      throw epc::Error(epc::Errc::invalid_argument, "path trace requires a Gaussian source");
    int n = inst.dim();
    json rows = json::array();
    double f0 = 0.0, f1 = 0.0, min_deriv = 0.0;
    for (int i = 0; i < grid_points; ++i) {
      double gamma = static_cast<double>(i) / (grid_points - 1);
      epc::SymMatrix d = epc::path_point(gamma, inst.a);
      double f = epc::path_f(d, inst);
      double deriv = epc::path_f_deriv(gamma, inst);
      if (i == 0) {
        f0 = f;
        min_deriv = deriv;
      }
      if (i == grid_points - 1) f1 = f;
      min_deriv = std::min(min_deriv, deriv);
      rows.push_back(json{{"gamma", gamma}, {"f", f}, {"deriv", deriv}});
    }
    epc::EpiSides sides = epc::epi_sides(inst);
    double e0 = std::exp(2.0 / n * epc::gaussian_entropy(*inst.gauss_bx));
    double det_a_pow = std::exp(epc::logdet(inst.a) / n);
    double endpoint = (f1 - f0) * e0 * det_a_pow;
    double resid = std::abs(endpoint - (sides.lhs - sides.rhs)) /
                   std::max({1.0, std::abs(sides.lhs), std::abs(sides.rhs)});
    json rep{{"rows", std::move(rows)},
             {"f0", f0},
             {"f1", f1},
             {"lhs", sides.lhs},
             {"rhs", sides.rhs},
             {"endpoint_residual", resid},
             {"min_deriv", min_deriv},
             {"monotone", min_deriv >= -1e-9}};
    *report_json = dup_str(rep.dump(2));
  });
}

epc_status epc_immse_check(int dim, int trials, double step, uint64_t seed, double tol,
                           char** report_json) {
  if (!report_json) return null_arg("epc_immse_check");
  return guarded([&] {
    if (dim < 1 || trials < 1)
      throw epc::Error(epc::Errc::invalid_argument, "dim and trials must be positive");
    if (!(step > 0.0)) step = 1e-5;
    epc::rng::Stream stream(seed, 0x11535e);
    double max_err = 0.0;
    for (int t = 0; t < trials; ++t) {
      auto bx = epc::SymMatrix::from_symmetric(epc::rng::random_sym_eig(dim, stream, 0.3, 3.0));
      auto nz = epc::SymMatrix::from_symmetric(epc::rng::random_sym_eig(dim, stream, 0.3, 3.0));
      auto d = epc::SymMatrix::from_symmetric(epc::rng::random_sym_eig(dim, stream, 0.5, 2.0));
      epc::Mat g = epc::immse_gradient({d, bx, nz});
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          epc::Mat dp = d.m(), dm = d.m();
          dp(i, j) += step;
          dm(i, j) -= step;
          double fd = (mi_general(dp, bx, nz) - mi_general(dm, bx, nz)) / (2.0 * step);
          max_err = std::max(max_err, std::abs(fd - g(i, j)));
        }
      }
    }
    json rep{{"dim", dim},
             {"trials", trials},
             {"step", step},
             {"max_abs_err", max_err},
             {"ok", max_err <= tol}};
    *report_json = dup_str(rep.dump(2));
  });
}

/* ---- extremal instances and certificates ------------------------------ */

epc_status epc_recover_certificate(const char* instance_json, const char* bstar_json,
                                   char** cert_json) {
  if (!instance_json || !bstar_json || !cert_json) return null_arg("epc_recover_certificate");
  return guarded([&] {
    epc::ExtremalInstance inst = epc::io::extremal_from_json(instance_json);
    epc::SymMatrix bstar = epc::io::matrix_from_json(bstar_json);
    epc::KktCertificate cert = epc::recover_multipliers(inst, bstar);
    *cert_json = dup_str(epc::io::certificate_to_json(cert, inst.mu));
  });
}

epc_status epc_extremal_check(const char* instance_json, const char* cert_json,
                              int random_trials, uint64_t seed, char** report_json) {
  if (!instance_json || !cert_json || !report_json) return null_arg("epc_extremal_check");
  return guarded([&] {
    epc::ExtremalInstance inst = epc::io::extremal_from_json(instance_json);
    epc::io::CertificateFile cf = epc::io::certificate_from_json(cert_json);
    epc::kkt_residual(inst, cf.cert);
    bool valid = cf.cert.valid();
    double max_excess = 0.0;
    if (random_trials > 0) {
      epc::rng::Stream stream(seed, 0xce27);
      for (int t = 0; t < random_trials; ++t) {
        epc::SymMatrix bx = epc::random_feasible_b(inst.s, stream);
        epc::ExtremalSides sides = epc::extremal_sides_gaussian(inst, cf.cert, bx);
        max_excess = std::max(max_excess, sides.lhs - sides.rhs);
      }
    }
    json rep{{"residuals",
              json{{"stationarity", cf.cert.r_stat},
                   {"slack_b", cf.cert.r_slack1},
                   {"slack_s", cf.cert.r_slack2}}},
             {"valid", valid},
             {"trials", random_trials > 0 ? random_trials : 0},
             {"max_excess", max_excess}};
    *report_json = dup_str(rep.dump(2));
  });
}

epc_status epc_enhance(const char* instance_json, const char* cert_json, char** report_json) {
  if (!instance_json || !cert_json || !report_json) return null_arg("epc_enhance");
  return guarded([&] {
    epc::ExtremalInstance inst = epc::io::extremal_from_json(instance_json);
    epc::io::CertificateFile cf = epc::io::certificate_from_json(cert_json);
    epc::kkt_residual(inst, cf.cert);
    epc::Enhancement enh = epc::enhance(inst, cf.cert);
    json rep{{"n1_tilde", mat_to_j(enh.n1_tilde)},
             {"n0_tilde", mat_to_j(enh.n0_tilde)},
             {"kkt_residual", enh.kkt4_residual},
             {"dirty_paper_gap", enh.dirty_paper_gap},
             {"receiver_gap", enh.receiver_gap}};
    if (enh.has_n2_variant) rep["receiver_gap_literal"] = enh.receiver_gap_n2;
    *report_json = dup_str(rep.dump(2));
  });
}

/* ---- secrecy capacity regions ----------------------------------------- */

epc_status epc_region_trace(const char* spec_json, int scenario, const double* mu,
                            int mu_count, uint64_t seed, int threads, double kkt_tol,
                            char** report_json) {
  if (!spec_json || !mu || !report_json) return null_arg("epc_region_trace");
  return guarded([&] {
    if (mu_count < 1)
      throw epc::Error(epc::Errc::invalid_argument, "mu grid must be nonempty");
    epc::ChannelSpec spec = epc::io::secrecy_spec_from_json(spec_json);
    std::vector<double> grid(mu, mu + mu_count);
    epc::OptOptions opts;
    opts.seed = seed;
    if (kkt_tol > 0.0) opts.kkt_tol = kkt_tol;
    int th = threads > 0 ? threads
                         : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    epc::RegionBoundary region = epc::trace_region(spec, scenario, grid, opts, th);
    json rows = json::array();
    for (const epc::RegionRow& row : region.rows) {
      rows.push_back(json{{"mu", row.mu},
                          {"r1", row.rates.r1},
                          {"r2", row.rates.r2},
                          {"r1_raw", row.rates.r1_raw},
                          {"r2_raw", row.rates.r2_raw},
                          {"objective", row.rates.r1_raw + row.mu * row.rates.r2_raw},
                          {"converged", row.converged},
                          {"cert_ok", row.cert_ok},
                          {"support_ok", row.support_ok},
                          {"support_excess", row.support_excess},
                          {"kkt_stat", row.r_stat},
                          {"kkt_slack_b", row.r_slack1},
                          {"kkt_slack_s", row.r_slack2},
                          {"b", flat_to_j(row.b.m())}});
    }
    json rep{{"scenario", region.scenario}, {"rows", std::move(rows)},
             {"all_ok", region.all_ok()}};
    *report_json = dup_str(rep.dump(2));
  });
}

epc_status epc_region_brute(const char* spec_json, int scenario, int resolution,
                            char** report_json) {
  if (!spec_json || !report_json) return null_arg("epc_region_brute");
  return guarded([&] {
    epc::ChannelSpec spec = epc::io::secrecy_spec_from_json(spec_json);
    std::vector<std::pair<double, double>> pts =
        epc::brute_force_region(spec, scenario, resolution);
    json points = json::array();
    for (const auto& [r1, r2] : pts) points.push_back(json::array({r1, r2}));
    json rep{{"scenario", scenario}, {"resolution", resolution},
             {"points", std::move(points)}};
    *report_json = dup_str(rep.dump(2));
  });
}

epc_status epc_rates_for_b(const char* spec_json, int scenario, const epc_mat* b,
                           double out[2]) {
  if (!spec_json || !b || !out) return null_arg("epc_rates_for_b");
  return guarded([&] {
    epc::ChannelSpec spec = epc::io::secrecy_spec_from_json(spec_json);
    epc::Rates r = epc::rates_for_b(spec, scenario, b->m);
    out[0] = r.r1;
    out[1] = r.r2;
  });
}

epc_status epc_r1_max(const char* spec_json, int scenario, double* out) {
  if (!spec_json || !out) return null_arg("epc_r1_max");
  return guarded([&] {
    epc::ChannelSpec spec = epc::io::secrecy_spec_from_json(spec_json);
    *out = epc::r1_max(spec, scenario);
  });
}

/* ---- discrete memoryless regions --------------------------------------- */

epc_status epc_dm_region(const char* spec_json, int scenario, int resolution, int u_card,
                         char** report_json) {
  if (!spec_json || !report_json) return null_arg("epc_dm_region");
  return guarded([&] {
    epc::DiscreteChannelSpec spec = epc::io::dm_spec_from_json(spec_json);
    std::vector<epc::DmFrontierPoint> pts =
        epc::enumerate_region(spec, scenario, resolution, u_card > 0 ? u_card : -1);
    json points = json::array();
    for (const epc::DmFrontierPoint& p : pts) {
      json pxu = json::array();
      for (Eigen::Index i = 0; i < p.pxu.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < p.pxu.cols(); ++j) row.push_back(p.pxu(i, j));
        pxu.push_back(std::move(row));
      }
      points.push_back(json{
          {"r1", p.r1}, {"r2", p.r2}, {"pu", vec_to_j(p.pu)}, {"pxu", std::move(pxu)}});
    }
    json rep{{"scenario", scenario}, {"resolution", resolution},
             {"points", std::move(points)}};
    *report_json = dup_str(rep.dump(2));
  });
}

} /* extern "C" */
