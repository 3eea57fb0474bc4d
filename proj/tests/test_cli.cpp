// Black-box tests of the command-line binary: spawns the real executable
// (path injected at compile time) and inspects exit codes, stdout, stderr,
// and emitted files.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"

using nlohmann::json;

namespace {

std::string tmpdir() {
  static std::string dir = [] {
    std::string d = "/tmp/epc_cli_test_" + std::to_string(::getpid());
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string write_file(const std::string& name, const std::string& content) {
  std::string path = tmpdir() + "/" + name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

struct RunResult {
  int code = -1;
  std::string out, err;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  std::string base = tmpdir() + "/run" + std::to_string(counter++);
  std::string cmd = std::string(EPC_CLI_PATH) + " " + args + " > " + base + ".out 2> " +
                    base + ".err";
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(base + ".out");
  r.err = slurp(base + ".err");
  return r;
}

json mat_obj(double v) { return json{{"n", 1}, {"rows", {{v}}}}; }

std::string epi_instance_path() {
  static std::string path = write_file(
      "epi.json", json{{"a", mat_obj(0.5)},
                       {"nz", mat_obj(1.0)},
                       {"x", json{{"gaussian", mat_obj(2.0)}}}}
                      .dump());
  return path;
}

std::string extremal_instance_path() {
  static std::string path = write_file(
      "extremal.json", json{{"s", mat_obj(1.0)},
                            {"n0", mat_obj(3.0)},
                            {"nk", json::array({mat_obj(2.0)})},
                            {"mu", {1.0}}}
                           .dump());
  return path;
}

std::string valid_cert_path() {
  static std::string path = write_file(
      "cert.json",
      json{{"bstar", mat_obj(1.0)}, {"m1", mat_obj(0.0)}, {"m2", mat_obj(1.0 / 12.0)}}
          .dump());
  return path;
}

std::string secrecy_spec_path() {
  static std::string path = write_file(
      "spec.json", json{{"s", mat_obj(1.0)},
                        {"n1", mat_obj(1.0)},
                        {"n2", mat_obj(2.0)},
                        {"n3", mat_obj(4.0)}}
                       .dump());
  return path;
}

std::string dm_spec_path() {
  static std::string path = [] {
    json flip{{0.9, 0.1}, {0.1, 0.9}};
    return write_file("dm.json", json{{"w1", flip}, {"d12", flip}, {"d23", flip}}.dump());
  }();
  return path;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<double> csv_doubles(const std::string& line) {
  std::vector<double> vals;
  std::istringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) vals.push_back(cell.empty() ? 0.0 : std::stod(cell));
  return vals;
}

}  // namespace

TEST_CASE("--version exits cleanly and names the tool") {
  RunResult r = run_cli("--version");
  CHECK(r.code == 0);
  CHECK(r.out.find("epicosta") != std::string::npos);
}

TEST_CASE("epi-check: clean pass, stable bytes, comment header") {
  std::string args = "epi-check " + epi_instance_path() + " --seed 5";
  RunResult r1 = run_cli(args);
  REQUIRE(r1.code == 0);
  CHECK(r1.out.rfind("# epicosta", 0) == 0);
  auto lines = lines_of(r1.out);
  REQUIRE(lines.size() >= 3);
  CHECK(lines[1] ==
        "lhs,rhs,gap,gap_stderr,degenerate_a,equality_c,equality_residual,violation");
  // Gaussian sources are evaluated in closed form: the verdict column is 0.
  CHECK(lines[2].back() == '0');

  RunResult r2 = run_cli(args);
  CHECK(r2.code == 0);
  CHECK(r2.out == r1.out);
}

TEST_CASE("epi-check: scaled right side trips the verdict with JSON on stderr") {
  RunResult r = run_cli("epi-check " + epi_instance_path() + " --rhs-scale 2");
  CHECK(r.code == 2);
  auto err_lines = lines_of(r.err);
  REQUIRE(!err_lines.empty());
  json detail = json::parse(err_lines.back());
  CHECK(detail["command"] == "epi-check");
  CHECK(detail.contains("violation"));
}

TEST_CASE("input failures exit 1") {
  std::string bad = write_file("bad.json", "{ not json");
  CHECK(run_cli("epi-check " + bad).code == 1);
  CHECK(run_cli("epi-check " + tmpdir() + "/does_not_exist.json").code == 1);
  CHECK(run_cli("epi-check " + epi_instance_path() + " --no-such-flag").code == 1);
  CHECK(run_cli("no-such-subcommand").code == 1);
}

TEST_CASE("path-check: flat scalar path and an SVG artifact") {
  std::string svg_path = tmpdir() + "/path.svg";
  RunResult r = run_cli("path-check " + epi_instance_path() + " --grid 9 --svg " + svg_path);
  REQUIRE(r.code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() >= 2 + 9);
  CHECK(lines[1] == "gamma,f,deriv");
  auto first = csv_doubles(lines[2]);
  REQUIRE(first.size() == 3);
  CHECK(first[0] == 0.0);
  CHECK(std::abs(first[1] - 1.5) <= 1e-9);

  std::string svg1 = slurp(svg_path);
  CHECK(svg1.rfind("<svg", 0) == 0);
  RunResult again = run_cli("path-check " + epi_instance_path() + " --grid 9 --svg " + svg_path);
  CHECK(again.code == 0);
  CHECK(slurp(svg_path) == svg1);
}

TEST_CASE("immse-check: spot check passes and reports ok") {
  RunResult r = run_cli("immse-check --dim 2 --trials 3 --seed 9");
  REQUIRE(r.code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() >= 3);
  CHECK(lines[1] == "dim,trials,step,max_abs_err,ok");
  CHECK(lines[2].back() == '1');
}

TEST_CASE("extremal-check: valid certificate passes, corrupted one exits 2") {
  RunResult ok = run_cli("extremal-check " + extremal_instance_path() + " " +
                         valid_cert_path() + " --trials 25 --seed 3");
  REQUIRE(ok.code == 0);
  auto lines = lines_of(ok.out);
  REQUIRE(lines.size() >= 3);
  CHECK(lines[1] == "r_stat,r_slack1,r_slack2,valid,trials,max_excess");
  auto vals = csv_doubles(lines[2]);
  REQUIRE(vals.size() == 6);
  CHECK(vals[3] == 1.0);

  std::string corrupt = write_file(
      "cert_bad.json",
      json{{"bstar", mat_obj(1.0)}, {"m1", mat_obj(0.0)}, {"m2", mat_obj(0.5)}}.dump());
  RunResult bad =
      run_cli("extremal-check " + extremal_instance_path() + " " + corrupt + " --trials 5");
  CHECK(bad.code == 2);
}

TEST_CASE("enhance: merged noises in the JSON report") {
  RunResult r = run_cli("enhance " + extremal_instance_path() + " " + valid_cert_path());
  REQUIRE(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(rep.contains("n0_tilde"));
  CHECK(std::abs(rep["n0_tilde"]["rows"][0][0].get<double>() - 2.0) <= 1e-9);
  CHECK(std::abs(rep["n1_tilde"]["rows"][0][0].get<double>() - 2.0) <= 1e-9);
}

TEST_CASE("region: pinned CSV columns, determinism, SVG") {
  std::string svg_path = tmpdir() + "/region.svg";
  std::string args = "region " + secrecy_spec_path() + " --mu-grid 0:2:3 --svg " + svg_path;
  RunResult r1 = run_cli(args);
  REQUIRE(r1.code == 0);
  auto lines = lines_of(r1.out);
  REQUIRE(lines.size() >= 2 + 3);
  CHECK(lines[1] ==
        "mu,r1_nats,r2_nats,r1_bits,r2_bits,kkt_stat,kkt_slack1,kkt_slack2,b_0_0");
  auto first = csv_doubles(lines[2]);
  REQUIRE(first.size() == 9);
  CHECK(first[0] == 0.0);                                // mu
  CHECK(std::abs(first[1] - 0.143841036226) <= 1e-7);    // r1 corner
  CHECK(std::abs(first[3] - first[1] / 0.6931471805599453) <= 1e-9);  // bits column
  auto last = csv_doubles(lines[4]);
  CHECK(std::abs(last[2] - 0.0911607783970) <= 1e-5);    // r2 corner at mu = 2

  std::string svg1 = slurp(svg_path);
  CHECK(svg1.rfind("<svg", 0) == 0);
  RunResult r2 = run_cli(args);
  CHECK(r2.code == 0);
  CHECK(r2.out == r1.out);
  CHECK(slurp(svg_path) == svg1);
}

TEST_CASE("region-oracle: exhaustive scalar endpoints") {
  RunResult r = run_cli("region-oracle " + secrecy_spec_path() + " --resolution 101");
  REQUIRE(r.code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() >= 4);
  CHECK(lines[1] == "r1_nats,r2_nats");
  auto first = csv_doubles(lines[2]);
  auto last = csv_doubles(lines.back());
  CHECK(std::abs(first[0] - 0.143841036226) <= 1e-9);
  CHECK(std::abs(first[1]) <= 1e-12);
  CHECK(std::abs(last[0]) <= 1e-12);
  CHECK(std::abs(last[1] - 0.0911607783970) <= 1e-9);
}

TEST_CASE("dm-region: pinned CSV columns and the cascade peak") {
  RunResult r = run_cli("dm-region " + dm_spec_path() + " --resolution 4");
  REQUIRE(r.code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() >= 3);
  CHECK(lines[1].rfind("r1_nats,r2_nats,pu_0", 0) == 0);
  // Columns: 2 rates + 3 pu + 3x2 pxu for the default |U| = |X|+1 = 3.
  CHECK(csv_doubles(lines[2]).size() == 2 + 3 + 6);
  double best_r1 = 0.0;
  for (size_t i = 2; i < lines.size(); ++i)
    best_r1 = std::max(best_r1, csv_doubles(lines[i])[0]);
  // h2(0.18) - h2(0.1) in nats.
  CHECK(std::abs(best_r1 - 0.1463105134186459) <= 1e-9);
}

TEST_CASE("outputs can be redirected to files") {
  std::string out_path = tmpdir() + "/epi.csv";
  RunResult r = run_cli("epi-check " + epi_instance_path() + " -o " + out_path);
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::string content = slurp(out_path);
  CHECK(content.rfind("# epicosta", 0) == 0);
}
