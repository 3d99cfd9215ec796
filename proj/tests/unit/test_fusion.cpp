#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "wpdm/fusion.hpp"
#include "wpdm/metrics.hpp"
#include "wpdm/rng.hpp"

using namespace wpdm;

namespace {

CMatrix random_ghat(int n, int m, uint64_t seed) {
  SubstreamRng rng(seed, 0, RngStage::Fading);
  CMatrix g(n, m);
  for (auto& v : g.a) v = rng.next_cnormal();
  return g;
}

// Noiseless model observation: column m carries sqrt(rho)*sigma_hat*g_m*x_m.
CMatrix clean_stats(const CMatrix& ghat, double sigma_hat, double rho,
                    const std::vector<int>& x) {
  CMatrix y(ghat.rows, ghat.cols);
  for (int m = 0; m < ghat.cols; ++m)
    for (int n = 0; n < ghat.rows; ++n)
      y.at(n, m) = std::sqrt(rho) * sigma_hat * ghat.at(n, m) *
                   static_cast<double>(x[m]);
  return y;
}

}  // namespace

TEST_CASE("noiseless statistics sit exactly on the model means") {
  const int n = 16, m = 4;
  auto ghat = random_ghat(n, m, 77);
  double sigma_hat = 0.9, rho = 0.7;
  std::vector<int> x = {1, -1, -1, 1};
  auto y = clean_stats(ghat, sigma_hat, rho, x);

  auto mf = detect(y, ghat, sigma_hat, DetectorKind::MatchedFilter);
  auto zf = detect(y, ghat, sigma_hat, DetectorKind::ZeroForcing);
  REQUIRE(mf.r.size() == 4);
  REQUIRE(zf.r.size() == 4);

  for (int i = 0; i < m; ++i) {
    double norm2 = 0.0;
    for (int ant = 0; ant < n; ++ant) norm2 += std::norm(ghat.at(ant, i));
    double want_d = sigma_hat * sigma_hat * norm2 / n;
    CHECK(mf.d[i] == doctest::Approx(want_d).epsilon(1e-12));
    CHECK(zf.d[i] == doctest::Approx(want_d).epsilon(1e-12));

    DetectionModel mfm{DetectorKind::MatchedFilter, n, rho, 1.0};
    DetectionModel zfm{DetectorKind::ZeroForcing, n, rho, 1.0};
    CHECK(mf.r[i] == doctest::Approx(statistic_mean(mfm, mf.d[i], x[i])).epsilon(1e-10));
    CHECK(zf.r[i] == doctest::Approx(statistic_mean(zfm, zf.d[i], x[i])).epsilon(1e-9));
    // The zero-forcing mean is gain-independent by construction.
    CHECK(zf.r[i] == doctest::Approx(n * std::sqrt(rho) * x[i]).epsilon(1e-9));
  }
}

TEST_CASE("empirical statistic moments track the gaussian model") {
  const int n = 16, m = 4, trials = 6000;
  auto ghat = random_ghat(n, m, 5);
  double sigma_e2 = 2.3;
  SubstreamRng rng(19, 3, RngStage::Noise);

  for (auto kind : {DetectorKind::MatchedFilter, DetectorKind::ZeroForcing}) {
    DetectionModel model{kind, n, 1.0, sigma_e2};
    std::vector<double> sum(m, 0.0), sum2(m, 0.0);
    std::vector<double> dvals;
    for (int t = 0; t < trials; ++t) {
      CMatrix y(n, m);  // pure noise, no signal
      double amp = std::sqrt(sigma_e2 / 2.0);
      for (auto& v : y.a)
        v = cplx(amp * rng.next_gaussian(), amp * rng.next_gaussian());
      auto stat = detect(y, ghat, 1.0, kind);
      dvals = stat.d;
      for (int i = 0; i < m; ++i) {
        sum[i] += stat.r[i];
        sum2[i] += stat.r[i] * stat.r[i];
      }
    }
    for (int i = 0; i < m; ++i) {
      double mean = sum[i] / trials;
      double var = sum2[i] / trials - mean * mean;
      double want = statistic_variance(model, dvals[i]);
      CHECK(std::abs(mean) < 4.0 * std::sqrt(want / trials));
      CHECK(var == doctest::Approx(want).epsilon(0.08));
    }
  }
}

TEST_CASE("degenerate channels are refused") {
  CMatrix y(4, 2);
  CMatrix ghat(4, 2);  // column 0 all zero
  for (int ant = 0; ant < 4; ++ant) ghat.at(ant, 1) = cplx(1.0, 0.0);
  CHECK_THROWS_AS(detect(y, ghat, 1.0, DetectorKind::ZeroForcing), std::runtime_error);
  CHECK_THROWS_AS(detect(y, ghat, 1.0, DetectorKind::MatchedFilter), std::runtime_error);
  CHECK_THROWS_AS(detect(y, ghat, 0.0, DetectorKind::MatchedFilter), std::invalid_argument);

  CMatrix bad(3, 2);
  CHECK_THROWS_AS(detect(bad, ghat, 1.0, DetectorKind::MatchedFilter),
                  std::invalid_argument);
}

TEST_CASE("mrc combining projects onto each channel column") {
  const int n = 8;
  auto ghat = random_ghat(n, 3, 11);
  CMatrix y(n, 1);
  for (int ant = 0; ant < n; ++ant) y.at(ant, 0) = 2.0 * ghat.at(ant, 1);

  auto stat = mrc_combine(y, ghat);
  double norm2 = 0.0;
  cplx cross01(0.0, 0.0);
  for (int ant = 0; ant < n; ++ant) {
    norm2 += std::norm(ghat.at(ant, 1));
    cross01 += std::conj(ghat.at(ant, 0)) * ghat.at(ant, 1);
  }
  CHECK(stat.r[1] == doctest::Approx(2.0 * norm2).epsilon(1e-12));
  CHECK(stat.r[0] == doctest::Approx(2.0 * cross01.real()).epsilon(1e-12));
  CHECK(stat.d[1] == doctest::Approx(norm2 / n).epsilon(1e-12));

  CMatrix two(n, 2);
  CHECK_THROWS_AS(mrc_combine(two, ghat), std::invalid_argument);
}

TEST_CASE("waveform gain equals the bilinear autocorrelation form") {
  auto pair = design_prototype_filters(14, 2, std::sqrt(2.0));
  auto tree = build_packet_tree(pair, 4);
  auto table = autocorrelation(sample_scaling_function(ScalingKind::Spline, 1.0 / 64.0));
  const auto& f = tree.leaf_filters[1];

  CHECK(waveform_gain(f, table, 0.0) == doctest::Approx(1.0).epsilon(1e-12));

  double delta = 0.3;
  double num = 0.0, den = 0.0;
  int taps = static_cast<int>(f.size());
  for (int k = 0; k < taps; ++k) {
    for (int q = 0; q < taps; ++q) {
      num += f[k] * f[q] * table((k - q) + delta);
      den += f[k] * f[q] * table(static_cast<double>(k - q));
    }
  }
  CHECK(waveform_gain(f, table, delta) == doctest::Approx(num / den).epsilon(1e-12));
  CHECK(waveform_gain(f, table, delta) < 1.0);
  CHECK_THROWS_AS(waveform_gain({}, table, 0.0), std::invalid_argument);
}

TEST_CASE("conditional pdf is a proper symmetric density") {
  DetectionModel model{DetectorKind::MatchedFilter, 8, 1.0, 2.0};
  double d = 0.6;
  double mean = statistic_mean(model, d, 1);
  double sd = std::sqrt(statistic_variance(model, d));

  double integral = 0.0;
  double step = sd / 50.0;
  for (double r = mean - 8.0 * sd; r <= mean + 8.0 * sd; r += step)
    integral += conditional_pdf(r, 1, model, d) * step;
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-4));

  CHECK(conditional_pdf(mean + 1.3, 1, model, d) ==
        doctest::Approx(conditional_pdf(mean - 1.3, 1, model, d)).epsilon(1e-12));
  CHECK(conditional_pdf(mean, 1, model, d) > conditional_pdf(mean + sd, 1, model, d));
  CHECK_THROWS_AS(conditional_pdf(0.0, 2, model, d), std::invalid_argument);
  CHECK_THROWS_AS(statistic_variance(model, 0.0), std::invalid_argument);
}

TEST_CASE("fused llr saturates at the local-performance bounds") {
  DetectionModel model{DetectorKind::MatchedFilter, 8, 1.0, 1.0};
  LocalPerformance local;  // pd 0.5, pf 0.05
  const int m = 8;
  FusionStatistic stat;
  stat.d.assign(m, 1.0);

  stat.r.assign(m, 100.0);  // 25 sigma: overwhelming evidence for +1
  CHECK(llr_fusion(stat, model, local) ==
        doctest::Approx(m * std::log(10.0)).epsilon(1e-10));

  stat.r.assign(m, -100.0);
  CHECK(llr_fusion(stat, model, local) ==
        doctest::Approx(m * std::log(0.5 / 0.95)).epsilon(1e-10));

  // A zero-information observation contributes a zero term.
  stat.r.assign(m, 100.0);
  stat.r[3] = 0.0;
  CHECK(llr_fusion(stat, model, local) ==
        doctest::Approx((m - 1) * std::log(10.0)).epsilon(1e-10));

  // pd == pf carries no information at all.
  LocalPerformance flat{0.3, 0.3};
  stat.r.assign(m, 0.73);
  CHECK(llr_fusion(stat, model, flat) == doctest::Approx(0.0).epsilon(1e-14));

  // Clamp bounds each term.
  LocalPerformance extreme{1.0, 1e-300};
  stat.r.assign(m, 1e6);
  CHECK(llr_fusion(stat, model, extreme, 7.0) == doctest::Approx(m * 7.0));

  CHECK_THROWS_AS(llr_fusion(stat, model, local, 0.0), std::invalid_argument);
  LocalPerformance bad{1.5, 0.05};
  CHECK_THROWS_AS(llr_fusion(stat, model, bad), std::invalid_argument);
}

TEST_CASE("decision rule and threshold grid edges") {
  CHECK(global_decision(0.1, 0.0));
  CHECK_FALSE(global_decision(0.0, 0.0));  // tie keeps the null
  CHECK_FALSE(global_decision(-0.1, 0.0));

  auto grid = threshold_grid(8);
  REQUIRE(grid.size() == 201);
  double edge = 8.0 * std::log(10.0) + 1.0;
  CHECK(grid.front() == doctest::Approx(-edge).epsilon(1e-14));
  CHECK(grid.back() == doctest::Approx(edge).epsilon(1e-14));
  CHECK(grid[100] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(grid[1] - grid[0] == doctest::Approx(2.0 * edge / 200.0).epsilon(1e-12));

  CHECK(threshold_grid(8, 5).size() == 5);
  CHECK_THROWS_AS(threshold_grid(0), std::invalid_argument);
  CHECK_THROWS_AS(threshold_grid(8, 1), std::invalid_argument);

  CHECK(detector_kind_from_string("mf") == DetectorKind::MatchedFilter);
  CHECK(detector_kind_from_string("zf") == DetectorKind::ZeroForcing);
  CHECK_THROWS_AS(detector_kind_from_string("mmse"), std::invalid_argument);
  CHECK(to_string(DetectorKind::ZeroForcing) == "zf");
}
