#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "io.hpp"

using epc::Errc;
using epc::SymMatrix;
using tst::dg;
using tst::sym;
using tst::thrown_code;

TEST_CASE("matrix json round trip") {
  SymMatrix m = sym(2, {1.5, -0.25, -0.25, 2.0});
  SymMatrix back = epc::io::matrix_from_json(epc::io::matrix_to_json(m));
  CHECK((back.m() - m.m()).norm() == 0.0);

  SymMatrix one = epc::io::matrix_from_json(R"({"n": 1, "rows": [[3.0]]})");
  CHECK(one(0, 0) == 3.0);
}

TEST_CASE("matrix json rejects malformed input") {
  CHECK(thrown_code([] { epc::io::matrix_from_json("not json"); }) == Errc::parse_error);
  CHECK(thrown_code([] { epc::io::matrix_from_json(R"({"rows": [[1]]})") ; }) ==
        Errc::parse_error);
  CHECK(thrown_code([] { epc::io::matrix_from_json(R"({"n": 2, "rows": [[1, 0]]})"); }) ==
        Errc::parse_error);
  CHECK(thrown_code([] {
          epc::io::matrix_from_json(R"({"n": 2, "rows": [[1, 0], [0]]})");
        }) == Errc::parse_error);
  CHECK(thrown_code([] {
          epc::io::matrix_from_json(R"({"n": 2, "rows": "nope"})");
        }) == Errc::parse_error);
  // Structurally valid but asymmetric: semantic validation kicks in.
  CHECK(thrown_code([] {
          epc::io::matrix_from_json(R"({"n": 2, "rows": [[1, 0.5], [0.1, 1]]})");
        }) == Errc::asymmetric_input);
}

TEST_CASE("mixture json") {
  const char* good = R"({
    "weights": [0.25, 0.75],
    "means": [[0.0], [1.0]],
    "covs": [{"n": 1, "rows": [[1.0]]}, {"n": 1, "rows": [[2.0]]}]
  })";
  epc::GaussianMixture mix = epc::io::mixture_from_json(good);
  CHECK(mix.components() == 2);
  CHECK(mix.dim() == 1);
  CHECK(mix.weights[1] == 0.75);
  CHECK(mix.covs[1](0, 0) == 2.0);

  CHECK(thrown_code([] {
          epc::io::mixture_from_json(R"({"weights": [1.0], "means": [[0]]})");
        }) == Errc::parse_error);
  // Weights not summing to one are a semantic failure, not a parse failure.
  CHECK(thrown_code([] {
          epc::io::mixture_from_json(R"({
            "weights": [0.5, 0.2],
            "means": [[0.0], [1.0]],
            "covs": [{"n": 1, "rows": [[1.0]]}, {"n": 1, "rows": [[1.0]]}]
          })");
        }) == Errc::invalid_distribution);
}

TEST_CASE("epi instance json, both input families") {
  const char* gauss = R"({
    "a": {"n": 1, "rows": [[0.5]]},
    "nz": {"n": 1, "rows": [[1.0]]},
    "x": {"gaussian": {"n": 1, "rows": [[1.0]]}}
  })";
  epc::EpiInstance gi = epc::io::epi_instance_from_json(gauss);
  CHECK(gi.gauss_bx.has_value());
  CHECK(!gi.mix.has_value());
  CHECK(gi.a(0, 0) == 0.5);

  const char* mixture = R"({
    "a": {"n": 1, "rows": [[0.5]]},
    "nz": {"n": 1, "rows": [[1.0]]},
    "x": {"mixture": {
      "weights": [0.5, 0.5],
      "means": [[-1.0], [1.0]],
      "covs": [{"n": 1, "rows": [[1.0]]}, {"n": 1, "rows": [[1.0]]}]
    }}
  })";
  epc::EpiInstance mi = epc::io::epi_instance_from_json(mixture);
  CHECK(mi.mix.has_value());
  CHECK(mi.mix->components() == 2);

  CHECK(thrown_code([] {
          epc::io::epi_instance_from_json(R"({
            "a": {"n": 1, "rows": [[0.5]]},
            "nz": {"n": 1, "rows": [[1.0]]},
            "x": {}
          })");
        }) == Errc::parse_error);
}

TEST_CASE("gauss channel json") {
  const char* text = R"({
    "d": {"n": 1, "rows": [[2.0]]},
    "bx": {"n": 1, "rows": [[1.0]]},
    "nz": {"n": 1, "rows": [[0.5]]}
  })";
  epc::LinearGaussChannel ch = epc::io::gauss_channel_from_json(text);
  CHECK(ch.d(0, 0) == 2.0);
  CHECK(ch.nz(0, 0) == 0.5);
}

TEST_CASE("extremal instance json") {
  const char* text = R"({
    "s": {"n": 1, "rows": [[1.0]]},
    "n0": {"n": 1, "rows": [[1.6666666666666667]]},
    "nk": [{"n": 1, "rows": [[1.0]]}, {"n": 1, "rows": [[3.0]]}],
    "mu": [0.5, 0.5]
  })";
  epc::ExtremalInstance inst = epc::io::extremal_from_json(text);
  CHECK(inst.noises() == 2);
  CHECK(inst.mu[0] == 0.5);
  CHECK(inst.nk[1](0, 0) == 3.0);
}

TEST_CASE("certificate json round trip") {
  epc::ExtremalInstance inst(tst::sym1(1.0), tst::sym1(3.0), {tst::sym1(2.0)},
                             epc::Vec::Ones(1));
  epc::KktCertificate cert = epc::recover_multipliers(inst, tst::sym1(1.0));
  epc::Vec mu = inst.mu;
  std::string text = epc::io::certificate_to_json(cert, mu);
  epc::io::CertificateFile back = epc::io::certificate_from_json(text);
  CHECK((back.cert.bstar.m() - cert.bstar.m()).norm() == 0.0);
  CHECK((back.cert.m1.m() - cert.m1.m()).norm() == 0.0);
  CHECK((back.cert.m2.m() - cert.m2.m()).norm() == 0.0);
  CHECK(back.mu.size() == 1);
  CHECK(back.mu[0] == 1.0);

  // Residual block is optional on read.
  epc::io::CertificateFile noresid = epc::io::certificate_from_json(R"({
    "bstar": {"n": 1, "rows": [[1.0]]},
    "m1": {"n": 1, "rows": [[0.0]]},
    "m2": {"n": 1, "rows": [[0.0]]},
    "mu": [1.0]
  })");
  CHECK(noresid.cert.bstar(0, 0) == 1.0);
}

TEST_CASE("secrecy spec json") {
  const char* text = R"({
    "s":  {"n": 1, "rows": [[1.0]]},
    "n1": {"n": 1, "rows": [[1.0]]},
    "n2": {"n": 1, "rows": [[2.0]]},
    "n3": {"n": 1, "rows": [[4.0]]}
  })";
  epc::ChannelSpec spec = epc::io::secrecy_spec_from_json(text);
  CHECK(spec.n3(0, 0) == 4.0);

  // Ordering violations surface from the constructor, not the parser.
  CHECK(thrown_code([] {
          epc::io::secrecy_spec_from_json(R"({
            "s":  {"n": 1, "rows": [[1.0]]},
            "n1": {"n": 1, "rows": [[2.0]]},
            "n2": {"n": 1, "rows": [[1.0]]},
            "n3": {"n": 1, "rows": [[4.0]]}
          })");
        }) == Errc::precondition_violated);
}

TEST_CASE("discrete spec json") {
  const char* text = R"({
    "w1":  [[0.9, 0.1], [0.1, 0.9]],
    "d12": [[0.9, 0.1], [0.1, 0.9]],
    "d23": [[0.95, 0.05], [0.05, 0.95]]
  })";
  epc::DiscreteChannelSpec spec = epc::io::dm_spec_from_json(text);
  CHECK(spec.nx() == 2);
  // Composition 0.1 then 0.1 gives crossover 0.18.
  CHECK(spec.w2(0, 1) == doctest::Approx(0.18).epsilon(1e-15));

  CHECK(thrown_code([] {
          epc::io::dm_spec_from_json(R"({"w1": [[0.9, 0.2]], "d12": [[1.0]], "d23": [[1.0]]})");
        }) == Errc::invalid_distribution);
  CHECK(thrown_code([] {
          epc::io::dm_spec_from_json(R"({
            "w1": [[0.5, 0.5]],
            "d12": [[1.0]],
            "d23": [[1.0]]
          })");
        }) == Errc::dimension_mismatch);
  CHECK(thrown_code([] { epc::io::dm_spec_from_json("[1,2"); }) == Errc::parse_error);
}

TEST_CASE("read_file and write_file round trip") {
  std::string path = "/tmp/epc_io_roundtrip.txt";
  epc::io::write_file(path, "line one\nline two\n");
  CHECK(epc::io::read_file(path) == "line one\nline two\n");
  std::remove(path.c_str());
  CHECK(thrown_code([&] { epc::io::read_file("/tmp/epc_io_missing_file.json"); }) ==
        Errc::parse_error);
}
