#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "dmregion.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "matcore.hpp"
#include "rng.hpp"

using epc::DiscreteChannelSpec;
using epc::Errc;
using epc::Mat;
using epc::Vec;
using tst::bsc;
using tst::bsc_compose;
using tst::h2_nats;
using tst::thrown_code;

namespace {

DiscreteChannelSpec bsc_cascade() { return DiscreteChannelSpec(bsc(0.1), bsc(0.1), bsc(0.1)); }

// Random row-stochastic matrix with strictly positive entries.
Mat random_stochastic(int rows, int cols, epc::rng::Stream& s) {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    double sum = 0.0;
    for (int j = 0; j < cols; ++j) {
      m(i, j) = 0.05 + s.next_uniform(0.0, 1.0);
      sum += m(i, j);
    }
    for (int j = 0; j < cols; ++j) m(i, j) /= sum;
  }
  return m;
}

Vec random_pmf(int n, epc::rng::Stream& s) {
  Vec v(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    v[i] = 0.05 + s.next_uniform(0.0, 1.0);
    sum += v[i];
  }
  return v / sum;
}

}  // namespace

TEST_CASE("spec validation and cascade composition") {
  DiscreteChannelSpec spec = bsc_cascade();
  CHECK(spec.nx() == 2);
  CHECK(spec.w2(0, 1) == doctest::Approx(0.18).epsilon(1e-14));
  CHECK(spec.w2(0, 0) == doctest::Approx(0.82).epsilon(1e-14));
  CHECK(spec.w3(0, 1) == doctest::Approx(0.244).epsilon(1e-14));
  CHECK(spec.w3(0, 1) == doctest::Approx(bsc_compose(0.18, 0.1)).epsilon(1e-15));

  Mat bad = bsc(0.1);
  bad(0, 0) = 0.95;  // row sums to 1.05
  CHECK(thrown_code([&] { DiscreteChannelSpec(bad, bsc(0.1), bsc(0.1)); }) ==
        Errc::invalid_distribution);
  Mat neg = bsc(0.1);
  neg(0, 0) = -0.1;
  neg(0, 1) = 1.1;
  CHECK(thrown_code([&] { DiscreteChannelSpec(neg, bsc(0.1), bsc(0.1)); }) ==
        Errc::invalid_distribution);
  CHECK(thrown_code([&] {
          DiscreteChannelSpec(Mat::Identity(2, 2) * 1.0, Mat::Ones(3, 1), Mat::Ones(1, 1));
        }) == Errc::dimension_mismatch);
  CHECK(thrown_code([&] { DiscreteChannelSpec(Mat(0, 0), bsc(0.1), bsc(0.1)); }) ==
        Errc::invalid_argument);
}

TEST_CASE("trivial auxiliary: cascade rate differences in closed form") {
  DiscreteChannelSpec spec = bsc_cascade();
  Vec pu = Vec::Ones(1);
  Mat pxu(1, 2);
  pxu << 0.5, 0.5;

  // Uniform input through a symmetric binary cascade: output entropy is log 2
  // at every stage, so the differences collapse to flip-entropy differences.
  epc::DmRates one = epc::rates_for_aux(spec, 1, pu, pxu);
  CHECK(one.r1 == doctest::Approx(h2_nats(0.18) - h2_nats(0.1)).epsilon(1e-12));
  CHECK(one.r2 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(one.r2_raw == doctest::Approx(0.0).epsilon(1e-14));

  epc::DmRates two = epc::rates_for_aux(spec, 2, pu, pxu);
  CHECK(two.r1 == doctest::Approx(h2_nats(0.244) - h2_nats(0.1)).epsilon(1e-12));
}

TEST_CASE("identity middle stage removes the first rate") {
  DiscreteChannelSpec spec(bsc(0.1), Mat::Identity(2, 2) * 1.0, bsc(0.1));
  epc::rng::Stream s(31, 0x3131);
  for (int k = 0; k < 10; ++k) {
    Vec pu = random_pmf(3, s);
    Mat pxu = random_stochastic(3, 2, s);
    epc::DmRates r = epc::rates_for_aux(spec, 1, pu, pxu);
    CHECK(std::abs(r.r1_raw) <= 1e-12);
    CHECK(r.r1 <= 1e-12);
  }
}

TEST_CASE("constant eavesdropper column: second rate equals I(U;Y2)") {
  Mat d23(2, 2);
  d23 << 1.0, 0.0, 1.0, 0.0;  // Y3 is constant regardless of Y2
  DiscreteChannelSpec spec(bsc(0.1), bsc(0.1), d23);

  Vec pu(2);
  pu << 0.4, 0.6;
  Mat pxu(2, 2);
  pxu << 0.9, 0.1, 0.2, 0.8;

  // Independent closed form via binary entropies: p(y2=1|u) mixes the BSC(0.18)
  // crossover through p(x|u).
  double p_u0 = 0.9 * 0.18 + 0.1 * 0.82;
  double p_u1 = 0.2 * 0.18 + 0.8 * 0.82;
  double p_y2 = 0.4 * p_u0 + 0.6 * p_u1;
  double mi_uy2 = h2_nats(p_y2) - 0.4 * h2_nats(p_u0) - 0.6 * h2_nats(p_u1);

  epc::DmRates r = epc::rates_for_aux(spec, 1, pu, pxu);
  CHECK(r.r2 == doctest::Approx(mi_uy2).epsilon(1e-12));
  CHECK(r.r2_raw == doctest::Approx(mi_uy2).epsilon(1e-12));
}

TEST_CASE("auxiliary input validation") {
  DiscreteChannelSpec spec = bsc_cascade();
  Vec pu(2);
  pu << 0.5, 0.5;
  Mat pxu(2, 2);
  pxu << 0.9, 0.1, 0.2, 0.8;

  Vec bad_sum(2);
  bad_sum << 0.5, 0.6;
  CHECK(thrown_code([&] { epc::rates_for_aux(spec, 1, bad_sum, pxu); }) ==
        Errc::invalid_distribution);
  Vec neg(2);
  neg << -0.1, 1.1;
  CHECK(thrown_code([&] { epc::rates_for_aux(spec, 1, neg, pxu); }) ==
        Errc::invalid_distribution);
  Mat bad_rows = pxu;
  bad_rows(0, 0) = 0.5;  // row 0 sums to 0.6
  CHECK(thrown_code([&] { epc::rates_for_aux(spec, 1, pu, bad_rows); }) ==
        Errc::invalid_distribution);
  CHECK(thrown_code([&] { epc::rates_for_aux(spec, 1, Vec::Ones(3) / 3.0, pxu); }) ==
        Errc::dimension_mismatch);
  CHECK(thrown_code([&] { epc::rates_for_aux(spec, 3, pu, pxu); }) == Errc::invalid_argument);
}

TEST_CASE("relabeling the auxiliary changes nothing") {
  DiscreteChannelSpec spec = bsc_cascade();
  Vec pu(3);
  pu << 0.2, 0.5, 0.3;
  Mat pxu(3, 2);
  pxu << 0.9, 0.1, 0.3, 0.7, 0.6, 0.4;

  Vec pu_swapped(3);
  pu_swapped << 0.5, 0.2, 0.3;
  Mat pxu_swapped(3, 2);
  pxu_swapped << 0.3, 0.7, 0.9, 0.1, 0.6, 0.4;

  for (int scenario : {1, 2}) {
    epc::DmRates a = epc::rates_for_aux(spec, scenario, pu, pxu);
    epc::DmRates b = epc::rates_for_aux(spec, scenario, pu_swapped, pxu_swapped);
    CHECK(a.r1 == doctest::Approx(b.r1).epsilon(1e-13));
    CHECK(a.r2 == doctest::Approx(b.r2).epsilon(1e-13));
  }
}

TEST_CASE("degradedness consequences on random cascades") {
  epc::rng::Stream s(37, 0x3737);
  for (int trial = 0; trial < 25; ++trial) {
    int nx = 2 + static_cast<int>(s.next_u64() % 2);
    int ny1 = 2 + static_cast<int>(s.next_u64() % 2);
    int ny2 = 2 + static_cast<int>(s.next_u64() % 2);
    int ny3 = 2;
    DiscreteChannelSpec spec(random_stochastic(nx, ny1, s), random_stochastic(ny1, ny2, s),
                             random_stochastic(ny2, ny3, s));
    int nu = 1 + static_cast<int>(s.next_u64() % 3);
    Vec pu = random_pmf(nu, s);
    Mat pxu = random_stochastic(nu, nx, s);

    epc::DmRates one = epc::rates_for_aux(spec, 1, pu, pxu);
    epc::DmRates two = epc::rates_for_aux(spec, 2, pu, pxu);
    // I(U;Y2) >= I(U;Y3): the second-rate bound is never negative.
    CHECK(one.r2_raw >= -1e-12);
    // Scenario 2 subtracts the weaker receiver, so its first rate dominates.
    CHECK(two.r1_raw >= one.r1_raw - 1e-12);
    CHECK(two.r2 == doctest::Approx(one.r2).epsilon(1e-14));
    // Clamped rates match the raw values when those are nonnegative.
    CHECK(one.r1 == std::max(0.0, one.r1_raw));
    CHECK(one.r2 == std::max(0.0, one.r2_raw));
  }
}

TEST_CASE("enumerate_region: frontier shape and trivial collapses") {
  DiscreteChannelSpec spec = bsc_cascade();
  auto front = epc::enumerate_region(spec, 1, 6);
  REQUIRE(!front.empty());
  for (size_t i = 0; i + 1 < front.size(); ++i) {
    CHECK(front[i].r1 >= front[i + 1].r1);
    CHECK(front[i].r2 <= front[i + 1].r2);
  }
  // Even resolution puts the uniform input on the grid, and the cascade peak
  // for the first rate sits exactly there.
  CHECK(front.front().r1 ==
        doctest::Approx(h2_nats(0.18) - h2_nats(0.1)).epsilon(1e-12));
  // Achieving distributions are returned and re-evaluate to the same point.
  epc::DmRates again = epc::rates_for_aux(spec, 1, front.front().pu, front.front().pxu);
  CHECK(again.r1 == front.front().r1);
  CHECK(again.r2 == front.front().r2);

  // A transparent middle stage kills the first rate everywhere.
  DiscreteChannelSpec transparent(bsc(0.1), Mat::Identity(2, 2) * 1.0, bsc(0.1));
  auto flat = epc::enumerate_region(transparent, 1, 4);
  for (const auto& p : flat) CHECK(p.r1 <= 1e-12);
}

TEST_CASE("enumerate_region: refinement only improves the frontier") {
  DiscreteChannelSpec spec = bsc_cascade();
  auto coarse = epc::enumerate_region(spec, 1, 4);
  auto fine = epc::enumerate_region(spec, 1, 8);
  // Denominator-4 grid points all exist in the denominator-8 grid, so every
  // coarse frontier point is dominated by some fine frontier point.
  for (const auto& p : coarse) {
    bool dominated = false;
    for (const auto& q : fine)
      if (q.r1 >= p.r1 - 1e-9 && q.r2 >= p.r2 - 1e-9) {
        dominated = true;
        break;
      }
    CHECK(dominated);
  }
}

TEST_CASE("enumerate_region: guardrails") {
  DiscreteChannelSpec spec = bsc_cascade();
  CHECK(thrown_code([&] { epc::enumerate_region(spec, 1, 100, 3); }) == Errc::grid_too_large);
  CHECK(thrown_code([&] { epc::enumerate_region(spec, 1, 4, 0); }) == Errc::invalid_argument);
  CHECK(thrown_code([&] { epc::enumerate_region(spec, 1, 4, 4); }) == Errc::invalid_argument);
  CHECK(thrown_code([&] { epc::enumerate_region(spec, 1, 0); }) == Errc::invalid_argument);
}
