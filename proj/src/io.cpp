#include "io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace epc::io {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

// Wraps field access so schema violations report as ParseError.
template <typename F>
auto schema(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

Mat dense_from(const json& rows_j, const char* what) {
  return schema([&] {
    auto rows = rows_j.get<std::vector<std::vector<double>>>();
    if (rows.empty() || rows[0].empty())
      throw Error(Errc::parse_error, std::string(what) + ": empty matrix");
    Mat m(rows.size(), rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows[0].size())
        throw Error(Errc::parse_error, std::string(what) + ": ragged rows");
      for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  });
}

SymMatrix sym_from(const json& j, const char* what) {
  int n = schema([&] { return j.at("n").get<int>(); });
  Mat m = dense_from(schema([&]() -> const json& { return j.at("rows"); }), what);
  if (m.rows() != n || m.cols() != n)
    throw Error(Errc::parse_error, std::string(what) + ": rows do not match n");
  return SymMatrix(m);
}

json sym_to(const SymMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"n", m.dim()}, {"rows", std::move(rows)}};
}

GaussianMixture mixture_from(const json& j) {
  return schema([&] {
    auto w = j.at("weights").get<std::vector<double>>();
    auto means = j.at("means").get<std::vector<std::vector<double>>>();
    const json& covs_j = j.at("covs");
    std::vector<SymMatrix> covs;
    for (const auto& c : covs_j) covs.push_back(sym_from(c, "mixture covariance"));
    Vec wv = Eigen::Map<const Vec>(w.data(), w.size());
    std::vector<Vec> mv;
    for (const auto& m : means) mv.push_back(Eigen::Map<const Vec>(m.data(), m.size()));
    return GaussianMixture(wv, std::move(mv), std::move(covs));
  });
}

Vec vec_from(const json& j, const char* what) {
  return schema([&] {
    auto v = j.get<std::vector<double>>();
    if (v.empty()) throw Error(Errc::parse_error, std::string(what) + ": empty vector");
    return Vec(Eigen::Map<const Vec>(v.data(), v.size()));
  });
}

}  // namespace

SymMatrix matrix_from_json(const std::string& text) {
  return sym_from(parse(text), "matrix");
}

std::string matrix_to_json(const SymMatrix& m) { return sym_to(m).dump(); }

GaussianMixture mixture_from_json(const std::string& text) {
  return mixture_from(parse(text));
}

EpiInstance epi_instance_from_json(const std::string& text) {
  json j = parse(text);
  SymMatrix a = sym_from(schema([&]() -> const json& { return j.at("a"); }), "a");
  SymMatrix nz = sym_from(schema([&]() -> const json& { return j.at("nz"); }), "nz");
  const json& x = schema([&]() -> const json& { return j.at("x"); });
  if (x.contains("gaussian"))
    return EpiInstance::gaussian(a, nz, sym_from(x["gaussian"], "x.gaussian"));
  if (x.contains("mixture")) return EpiInstance::mixture(a, nz, mixture_from(x["mixture"]));
  throw Error(Errc::parse_error, "x must hold either \"gaussian\" or \"mixture\"");
}

LinearGaussChannel gauss_channel_from_json(const std::string& text) {
  json j = parse(text);
  return LinearGaussChannel(
      sym_from(schema([&]() -> const json& { return j.at("d"); }), "d"),
      sym_from(schema([&]() -> const json& { return j.at("bx"); }), "bx"),
      sym_from(schema([&]() -> const json& { return j.at("nz"); }), "nz"));
}

ExtremalInstance extremal_from_json(const std::string& text) {
  json j = parse(text);
  SymMatrix s = sym_from(schema([&]() -> const json& { return j.at("s"); }), "s");
  SymMatrix n0 = sym_from(schema([&]() -> const json& { return j.at("n0"); }), "n0");
  const json& nk_j = schema([&]() -> const json& { return j.at("nk"); });
  std::vector<SymMatrix> nk;
  for (const auto& m : nk_j) nk.push_back(sym_from(m, "nk"));
  Vec mu = vec_from(schema([&]() -> const json& { return j.at("mu"); }), "mu");
  return ExtremalInstance(std::move(s), std::move(n0), std::move(nk), std::move(mu));
}

CertificateFile certificate_from_json(const std::string& text) {
  json j = parse(text);
  CertificateFile out;
  out.cert.bstar = sym_from(schema([&]() -> const json& { return j.at("bstar"); }), "bstar");
  out.cert.m1 = sym_from(schema([&]() -> const json& { return j.at("m1"); }), "m1");
  out.cert.m2 = sym_from(schema([&]() -> const json& { return j.at("m2"); }), "m2");
  if (j.contains("mu")) out.mu = vec_from(j["mu"], "mu");
  return out;
}

std::string certificate_to_json(const KktCertificate& cert, const Vec& mu) {
  json j;
  j["bstar"] = sym_to(cert.bstar);
  j["m1"] = sym_to(cert.m1);
  j["m2"] = sym_to(cert.m2);
  json muj = json::array();
  for (int i = 0; i < mu.size(); ++i) muj.push_back(mu[i]);
  j["mu"] = std::move(muj);
  j["residuals"] =
      json{{"stat", cert.r_stat}, {"slack1", cert.r_slack1}, {"slack2", cert.r_slack2}};
  return j.dump(2);
}

ChannelSpec secrecy_spec_from_json(const std::string& text) {
  json j = parse(text);
  return ChannelSpec(sym_from(schema([&]() -> const json& { return j.at("s"); }), "s"),
                     sym_from(schema([&]() -> const json& { return j.at("n1"); }), "n1"),
                     sym_from(schema([&]() -> const json& { return j.at("n2"); }), "n2"),
                     sym_from(schema([&]() -> const json& { return j.at("n3"); }), "n3"));
}

DiscreteChannelSpec dm_spec_from_json(const std::string& text) {
  json j = parse(text);
  return DiscreteChannelSpec(
      dense_from(schema([&]() -> const json& { return j.at("w1"); }), "w1"),
      dense_from(schema([&]() -> const json& { return j.at("d12"); }), "d12"),
      dense_from(schema([&]() -> const json& { return j.at("d23"); }), "d23"));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::parse_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::invalid_argument, "cannot write " + path);
  out << content;
}

}  // namespace epc::io
