// epicosta command-line front end. Parses JSON inputs, drives the C API, and
// writes CSV/JSON results plus optional SVG plots. Exit codes: 0 success,
// 1 input/operational error, 2 math violation (inequality, certificate, or
// convergence failure) with a one-line JSON violation report on stderr.
//
// Output is byte-identical for identical (command, input, seed): all numbers
// are printed with %.12g, grids and worker seeds are derived deterministically,
// and SVG emission uses fixed-precision coordinates.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "epicosta.h"

using json = nlohmann::json;

namespace {

std::string g12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_out(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

// Owns a string returned by the C API.
struct ApiStr {
  char* p = nullptr;
  ~ApiStr() { epc_free_str(p); }
  std::string str() const { return p ? p : ""; }
};

[[noreturn]] void fail_status(epc_status st) {
  std::fprintf(stderr, "error (%s): %s\n", epc_status_name(st), epc_last_error());
  switch (st) {
    case EPC_ERR_ENHANCEMENT_PROPERTY:
    case EPC_ERR_PRECONDITION_VIOLATED:
    case EPC_ERR_CERTIFICATE_REJECTED:
    case EPC_ERR_NO_CONVERGENCE:
      std::exit(2);
    default:
      std::exit(1);
  }
}

[[noreturn]] void fail_violation(const std::string& command, const std::string& what,
                                 const json& detail) {
  json rep{{"command", command}, {"violation", what}, {"detail", detail}};
  std::fprintf(stderr, "%s\n", rep.dump().c_str());
  std::exit(2);
}

std::string comment_line(const std::string& command, const std::string& params) {
  return "# epicosta " + std::string(epc_version()) + " " + command +
         (params.empty() ? "" : " " + params) + "\n";
}

// "a:b:steps" inclusive linear grid, or a single value.
std::vector<double> parse_grid(const std::string& s) {
  if (s.find(':') == std::string::npos) {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::runtime_error("bad grid spec: " + s);
    return {v};
  }
  double a = 0.0, b = 0.0;
  int steps = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d", &a, &b, &steps) != 3 || steps < 1)
    throw std::runtime_error("bad grid spec (want a:b:steps): " + s);
  std::vector<double> grid(steps);
  for (int i = 0; i < steps; ++i)
    grid[i] = steps == 1 ? a : a + (b - a) * i / (steps - 1);
  return grid;
}

// Minimal static SVG: axes with ticks, one polyline, axis labels.
std::string render_svg(const std::string& title, const std::string& xlabel,
                       const std::string& ylabel,
                       const std::vector<std::pair<double, double>>& pts) {
  const double w = 640, h = 480, ml = 70, mr = 20, mt = 40, mb = 50;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!pts.empty()) {
    xmin = xmax = pts[0].first;
    ymin = ymax = pts[0].second;
    for (const auto& [x, y] : pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };
  char buf[256];
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
  svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" "
                "text-anchor=\"middle\">%s</text>\n",
                (ml + w - mr) / 2, title.c_str());
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                ml, h - mb, w - mr, h - mb);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                ml, mt, ml, h - mb);
  svg += buf;
  for (int i = 0; i <= 4; ++i) {
    double fx = xmin + (xmax - xmin) * i / 4.0;
    double fy = ymin + (ymax - ymin) * i / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.1f\" x2=\"%.2f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  px(fx), h - mb, px(fx), h - mb + 5);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" "
                  "text-anchor=\"middle\">%.4g</text>\n",
                  px(fx), h - mb + 18, fx);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.2f\" x2=\"%.1f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                  ml - 5, py(fy), ml, py(fy));
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"11\" "
                  "text-anchor=\"end\">%.4g</text>\n",
                  ml - 8, py(fy) + 4, fy);
    svg += buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"13\" "
                "text-anchor=\"middle\">%s</text>\n",
                (ml + w - mr) / 2, h - 10, xlabel.c_str());
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"18\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"13\" "
                "text-anchor=\"middle\" transform=\"rotate(-90 18 %.1f)\">%s</text>\n",
                (mt + h - mb) / 2, (mt + h - mb) / 2, ylabel.c_str());
  svg += buf;
  if (!pts.empty()) {
    svg += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", px(pts[i].first),
                    py(pts[i].second));
      svg += buf;
    }
    svg += "\"/>\n";
    for (const auto& [x, y] : pts) {
      std::snprintf(buf, sizeof buf,
                    "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"#1f6fb2\"/>\n", px(x),
                    py(y));
      svg += buf;
    }
  }
  svg += "</svg>\n";
  return svg;
}

constexpr double kLog2 = 0.6931471805599453;
constexpr double kSidesTol = 1e-8;  // lhs <= rhs + tol for certified extremal points

int run_epi_check(const std::string& input, const std::string& out, std::int64_t samples,
                  std::uint64_t seed, double tol_epi, double rhs_scale) {
  std::string text = read_all(input);
  ApiStr rep;
  epc_status st = epc_epi_check(text.c_str(), samples, seed, tol_epi, rhs_scale, &rep.p);
  if (st != EPC_OK) fail_status(st);
  json r = json::parse(rep.str());
  std::string csv = comment_line(
      "epi-check", "seed=" + std::to_string(seed) + " samples=" + std::to_string(samples) +
                       " tol_epi=" + g12(tol_epi) + " rhs_scale=" + g12(rhs_scale));
  csv += "lhs,rhs,gap,gap_stderr,degenerate_a,equality_c,equality_residual,violation\n";
  std::string eq_c, eq_res;
  if (r.contains("equality")) {
    const json& e = r["equality"];
    if (e.contains("c")) eq_c = g12(e["c"].get<double>());
    eq_res = g12(e["residual"].get<double>());
  }
  csv += g12(r["lhs"].get<double>()) + "," + g12(r["rhs"].get<double>()) + "," +
         g12(r["gap"].get<double>()) + "," + g12(r["gap_stderr"].get<double>()) + "," +
         (r["degenerate_a"].get<bool>() ? "1" : "0") + "," + eq_c + "," + eq_res + "," +
         (r["violation"].get<bool>() ? "1" : "0") + "\n";
  write_out(out, csv);
  if (r["violation"].get<bool>())
    fail_violation("epi-check", "entropy-power inequality violated", r);
  return 0;
}

int run_path_check(const std::string& input, const std::string& out, int grid,
                   double tol_epi, const std::string& svg) {
  std::string text = read_all(input);
  ApiStr rep;
  epc_status st = epc_path_trace(text.c_str(), grid, &rep.p);
  if (st != EPC_OK) fail_status(st);
  json r = json::parse(rep.str());
  std::string csv = comment_line(
      "path-check", "seed=0 grid=" + std::to_string(grid) + " tol_epi=" + g12(tol_epi));
  csv += "gamma,f,deriv\n";
  std::vector<std::pair<double, double>> pts;
  for (const json& row : r["rows"]) {
    double gamma = row["gamma"].get<double>(), f = row["f"].get<double>();
    csv += g12(gamma) + "," + g12(f) + "," + g12(row["deriv"].get<double>()) + "\n";
    pts.emplace_back(gamma, f);
  }
  csv += "# f0=" + g12(r["f0"].get<double>()) + " f1=" + g12(r["f1"].get<double>()) +
         " lhs=" + g12(r["lhs"].get<double>()) + " rhs=" + g12(r["rhs"].get<double>()) +
         " endpoint_residual=" + g12(r["endpoint_residual"].get<double>()) +
         " min_deriv=" + g12(r["min_deriv"].get<double>()) +
         " monotone=" + (r["monotone"].get<bool>() ? "1" : "0") + "\n";
  write_out(out, csv);
  if (!svg.empty())
    write_out(svg, render_svg("interpolation path", "gamma", "F", pts));
  if (!r["monotone"].get<bool>())
    fail_violation("path-check", "path derivative negative", r);
  if (r["endpoint_residual"].get<double>() > tol_epi)
    fail_violation("path-check", "endpoint identity residual above tolerance", r);
  return 0;
}

int run_extremal_check(const std::string& instance, const std::string& cert,
                       const std::string& out, int trials, std::uint64_t seed) {
  std::string inst_text = read_all(instance), cert_text = read_all(cert);
  ApiStr rep;
  epc_status st =
      epc_extremal_check(inst_text.c_str(), cert_text.c_str(), trials, seed, &rep.p);
  if (st != EPC_OK) fail_status(st);
  json r = json::parse(rep.str());
  std::string csv = comment_line("extremal-check", "seed=" + std::to_string(seed) +
                                                       " trials=" + std::to_string(trials) +
                                                       " tol_sides=" + g12(kSidesTol));
  csv += "r_stat,r_slack1,r_slack2,valid,trials,max_excess\n";
  const json& res = r["residuals"];
  csv += g12(res["stationarity"].get<double>()) + "," + g12(res["slack_b"].get<double>()) +
         "," + g12(res["slack_s"].get<double>()) + "," +
         (r["valid"].get<bool>() ? "1" : "0") + "," + std::to_string(trials) + "," +
         g12(r["max_excess"].get<double>()) + "\n";
  write_out(out, csv);
  if (!r["valid"].get<bool>())
    fail_violation("extremal-check", "certificate residuals above tolerance", r);
  if (r["max_excess"].get<double>() > kSidesTol)
    fail_violation("extremal-check", "random feasible point beats the certified value", r);
  return 0;
}

int run_enhance(const std::string& instance, const std::string& cert,
                const std::string& out) {
  std::string inst_text = read_all(instance), cert_text = read_all(cert);
  ApiStr rep;
  epc_status st = epc_enhance(inst_text.c_str(), cert_text.c_str(), &rep.p);
  if (st != EPC_OK) fail_status(st);
  write_out(out, rep.str() + "\n");
  return 0;
}

int run_region(const std::string& input, const std::string& out, int scenario,
               const std::string& mu_grid, std::uint64_t seed, int threads, double tol_kkt,
               const std::string& svg) {
  std::string text = read_all(input);
  std::vector<double> grid = parse_grid(mu_grid);
  ApiStr rep;
  epc_status st = epc_region_trace(text.c_str(), scenario, grid.data(),
                                   static_cast<int>(grid.size()), seed, threads, tol_kkt,
                                   &rep.p);
  if (st != EPC_OK) fail_status(st);
  json r = json::parse(rep.str());
  std::string csv = comment_line(
      "region", "scenario=" + std::to_string(scenario) + " seed=" + std::to_string(seed) +
                    " threads=" + std::to_string(threads) + " tol_kkt=" + g12(tol_kkt) +
                    " mu_grid=" + mu_grid);
  int n2 = r["rows"].empty() ? 0 : static_cast<int>(r["rows"][0]["b"].size());
  int n = n2 > 0 ? static_cast<int>(std::lround(std::sqrt(double(n2)))) : 0;
  csv += "mu,r1_nats,r2_nats,r1_bits,r2_bits,kkt_stat,kkt_slack1,kkt_slack2";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      csv += ",b_" + std::to_string(i) + "_" + std::to_string(j);
  csv += "\n";
  std::vector<std::pair<double, double>> pts;
  for (const json& row : r["rows"]) {
    double r1 = row["r1"].get<double>(), r2 = row["r2"].get<double>();
    csv += g12(row["mu"].get<double>()) + "," + g12(r1) + "," + g12(r2) + "," +
           g12(r1 / kLog2) + "," + g12(r2 / kLog2) + "," +
           g12(row["kkt_stat"].get<double>()) + "," + g12(row["kkt_slack_b"].get<double>()) +
           "," + g12(row["kkt_slack_s"].get<double>());
    for (const json& v : row["b"]) csv += "," + g12(v.get<double>());
    csv += "\n";
    pts.emplace_back(r1, r2);
  }
  write_out(out, csv);
  if (!svg.empty())
    write_out(svg, render_svg("rate region boundary", "R1 (nats)", "R2 (nats)", pts));
  if (!r["all_ok"].get<bool>())
    fail_violation("region", "a boundary row failed convergence or certification", r);
  return 0;
}

int run_region_oracle(const std::string& input, const std::string& out, int scenario,
                      int resolution) {
  std::string text = read_all(input);
  ApiStr rep;
  epc_status st = epc_region_brute(text.c_str(), scenario, resolution, &rep.p);
  if (st != EPC_OK) fail_status(st);
  json r = json::parse(rep.str());
  std::string csv = comment_line("region-oracle",
                                 "scenario=" + std::to_string(scenario) +
                                     " seed=0 resolution=" + std::to_string(resolution));
  csv += "r1_nats,r2_nats\n";
  for (const json& p : r["points"])
    csv += g12(p[0].get<double>()) + "," + g12(p[1].get<double>()) + "\n";
  write_out(out, csv);
  return 0;
}

int run_dm_region(const std::string& input, const std::string& out, int scenario,
                  int resolution, int u_card) {
  std::string text = read_all(input);
  ApiStr rep;
  epc_status st = epc_dm_region(text.c_str(), scenario, resolution, u_card, &rep.p);
  if (st != EPC_OK) fail_status(st);
  json r = json::parse(rep.str());
  std::string csv = comment_line(
      "dm-region", "scenario=" + std::to_string(scenario) +
                       " seed=0 resolution=" + std::to_string(resolution) +
                       " u_card=" + std::to_string(u_card));
  const json& points = r["points"];
  int nu = 0, nx = 0;
  if (!points.empty()) {
    nu = static_cast<int>(points[0]["pu"].size());
    nx = static_cast<int>(points[0]["pxu"][0].size());
  }
  csv += "r1_nats,r2_nats";
  for (int u = 0; u < nu; ++u) csv += ",pu_" + std::to_string(u);
  for (int u = 0; u < nu; ++u)
    for (int x = 0; x < nx; ++x)
      csv += ",pxu_" + std::to_string(u) + "_" + std::to_string(x);
  csv += "\n";
  for (const json& p : points) {
    csv += g12(p["r1"].get<double>()) + "," + g12(p["r2"].get<double>());
    for (const json& v : p["pu"]) csv += "," + g12(v.get<double>());
    for (const json& row : p["pxu"])
      for (const json& v : row) csv += "," + g12(v.get<double>());
    csv += "\n";
  }
  write_out(out, csv);
  return 0;
}

int run_immse_check(const std::string& out, int dim, int trials, double step,
                    std::uint64_t seed, double tol) {
  ApiStr rep;
  epc_status st = epc_immse_check(dim, trials, step, seed, tol, &rep.p);
  if (st != EPC_OK) fail_status(st);
  json r = json::parse(rep.str());
  std::string csv = comment_line(
      "immse-check", "seed=" + std::to_string(seed) + " dim=" + std::to_string(dim) +
                         " trials=" + std::to_string(trials) + " step=" + g12(step) +
                         " tol=" + g12(tol));
  csv += "dim,trials,step,max_abs_err,ok\n";
  csv += std::to_string(dim) + "," + std::to_string(trials) + "," + g12(step) + "," +
         g12(r["max_abs_err"].get<double>()) + "," + (r["ok"].get<bool>() ? "1" : "0") +
         "\n";
  write_out(out, csv);
  if (!r["ok"].get<bool>())
    fail_violation("immse-check", "gradient mismatch above tolerance", r);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entropy-power inequality and secrecy-region toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("epicosta ") + epc_version());

  std::string input, cert, out = "-", svg, mu_grid = "0:20:21";
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
  int scenario = 1, threads = 1, grid = 64, resolution = 64, trials = 100, dim = 3;
  int u_card = -1;
  double tol_epi = 1e-9, tol_kkt = 1e-6, rhs_scale = 1.0, step = 1e-5, tol_immse = 1e-5;

  CLI::App* epi = app.add_subcommand("epi-check", "evaluate both sides of the inequality");
  epi->add_option("input", input, "instance JSON")->required();
  epi->add_option("-o,--out", out, "output CSV path ('-' for stdout)");
  epi->add_option("--samples", samples, "Monte Carlo samples for mixture sources")
      ->check(CLI::PositiveNumber);
  epi->add_option("--seed", seed, "random seed");
  epi->add_option("--tol-epi", tol_epi, "violation tolerance");
  epi->add_option("--rhs-scale", rhs_scale, "test hook: scales the right side")
      ->group("");  // hidden

  CLI::App* path = app.add_subcommand("path-check", "trace the interpolation path");
  path->add_option("input", input, "instance JSON")->required();
  path->add_option("-o,--out", out, "output CSV path");
  path->add_option("--grid", grid, "number of path points")->check(CLI::Range(2, 100000));
  path->add_option("--tol-epi", tol_epi, "endpoint identity tolerance");
  path->add_option("--svg", svg, "write an SVG plot of F vs gamma");

  CLI::App* ext = app.add_subcommand("extremal-check", "verify a KKT certificate");
  ext->add_option("instance", input, "instance JSON")->required();
  ext->add_option("certificate", cert, "certificate JSON")->required();
  ext->add_option("-o,--out", out, "output CSV path");
  ext->add_option("--trials", trials, "random feasible points to test")
      ->check(CLI::NonNegativeNumber);
  ext->add_option("--seed", seed, "random seed");

  CLI::App* enh = app.add_subcommand("enhance", "enhanced-noise construction");
  enh->add_option("instance", input, "instance JSON")->required();
  enh->add_option("certificate", cert, "certificate JSON")->required();
  enh->add_option("-o,--out", out, "output JSON path");

  CLI::App* reg = app.add_subcommand("region", "trace a secrecy rate region boundary");
  reg->add_option("input", input, "channel spec JSON")->required();
  reg->add_option("-o,--out", out, "output CSV path");
  reg->add_option("--scenario", scenario, "receiver pairing")->check(CLI::Range(1, 2));
  reg->add_option("--mu-grid", mu_grid, "weights as a:b:steps or a single value");
  reg->add_option("--seed", seed, "random seed");
  reg->add_option("--threads", threads, "worker cap (0 = hardware)")
      ->check(CLI::Range(0, 4096));
  reg->add_option("--tol-kkt", tol_kkt, "certificate tolerance");
  reg->add_option("--svg", svg, "write an SVG plot of the frontier");

  CLI::App* orc = app.add_subcommand("region-oracle", "brute-force frontier (n <= 2)");
  orc->add_option("input", input, "channel spec JSON")->required();
  orc->add_option("-o,--out", out, "output CSV path");
  orc->add_option("--scenario", scenario, "receiver pairing")->check(CLI::Range(1, 2));
  orc->add_option("--resolution", resolution, "grid resolution")
      ->check(CLI::Range(2, 100000));

  CLI::App* dm = app.add_subcommand("dm-region", "discrete memoryless region frontier");
  dm->add_option("input", input, "channel spec JSON")->required();
  dm->add_option("-o,--out", out, "output CSV path");
  dm->add_option("--scenario", scenario, "eavesdropper selection")->check(CLI::Range(1, 2));
  dm->add_option("--resolution", resolution, "simplex grid denominator")
      ->check(CLI::Range(1, 100000));
  dm->add_option("--u-card", u_card, "auxiliary cardinality (-1 = default)");

  CLI::App* imm = app.add_subcommand("immse-check", "gradient identity spot checks");
  imm->add_option("-o,--out", out, "output CSV path");
  imm->add_option("--dim", dim, "matrix dimension")->check(CLI::Range(1, 64));
  imm->add_option("--trials", trials, "random instances")->check(CLI::PositiveNumber);
  imm->add_option("--step", step, "finite-difference step");
  imm->add_option("--seed", seed, "random seed");
  imm->add_option("--tol", tol_immse, "max entrywise error tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  }

  try {
    if (epi->parsed()) return run_epi_check(input, out, samples, seed, tol_epi, rhs_scale);
    if (path->parsed()) return run_path_check(input, out, grid, tol_epi, svg);
    if (ext->parsed()) return run_extremal_check(input, cert, out, trials, seed);
    if (enh->parsed()) return run_enhance(input, cert, out);
    if (reg->parsed())
      return run_region(input, out, scenario, mu_grid, seed, threads, tol_kkt, svg);
    if (orc->parsed()) return run_region_oracle(input, out, scenario, resolution);
    if (dm->parsed()) return run_dm_region(input, out, scenario, resolution, u_card);
    if (imm->parsed()) return run_immse_check(out, dim, trials, step, seed, tol_immse);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
