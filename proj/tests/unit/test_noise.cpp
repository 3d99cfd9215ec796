#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "wpdm/noise.hpp"

using namespace wpdm;

namespace {

NoiseModelSpec class_a_spec(double p) {
  NoiseModelSpec s;
  s.kind = NoiseKind::ClassA;
  s.p_impulse = p;
  return s;  // gamma 0.25, A 0.1, unit background
}

NoiseModelSpec bg_spec(double p) {
  NoiseModelSpec s;
  s.kind = NoiseKind::BernoulliGaussian;
  s.p_impulse = p;
  return s;  // rho 0.3, occurrence 1, slots 8
}

double excess_kurtosis(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= x.size();
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    double d = v - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= x.size();
  m4 /= x.size();
  return m4 / (m2 * m2) - 3.0;
}

}  // namespace

TEST_CASE("closed-form variances hit the frozen reference values") {
  CHECK(combined_variance(class_a_spec(0.3)) ==
        doctest::Approx(92.333333333333329).epsilon(1e-14));
  CHECK(combined_variance(bg_spec(0.3)) ==
        doctest::Approx(107.66666666666667).epsilon(1e-14));

  NoiseModelSpec g;
  CHECK(combined_variance(g) == 1.0);
  CHECK(mixture_mean_variance(g) == 1.0);

  CHECK(mixture_mean_variance(class_a_spec(0.3)) ==
        doctest::Approx(12.950717370005759).epsilon(1e-13));
  CHECK(mixture_mean_variance(bg_spec(0.3)) ==
        doctest::Approx(1.06).epsilon(1e-14));
  // p = 0 collapses both mixtures to the background.
  CHECK(mixture_mean_variance(class_a_spec(0.0)) == doctest::Approx(1.0));
  CHECK(mixture_mean_variance(bg_spec(0.0)) == doctest::Approx(1.0));
}

TEST_CASE("conditional sqrt-poisson mean behaves across the rate range") {
  CHECK(conditional_sqrt_poisson_mean(0.1) ==
        doctest::Approx(1.0208931141671467).epsilon(1e-13));
  CHECK(conditional_sqrt_poisson_mean(2.0) ==
        doctest::Approx(1.467456390957373).epsilon(1e-13));
  CHECK(conditional_sqrt_poisson_mean(1e-6) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(conditional_sqrt_poisson_mean(0.0), std::invalid_argument);
}

TEST_CASE("scaling the spec scales both mixture components") {
  auto s = class_a_spec(0.3);
  CHECK(s.impulse_var() == doctest::Approx(4.0));
  auto twice = s.scaled(2.0);
  CHECK(twice.impulse_var() == doctest::Approx(8.0));
  CHECK(combined_variance(twice) == doctest::Approx(2.0 * combined_variance(s)).epsilon(1e-14));
  CHECK(mixture_mean_variance(twice) ==
        doctest::Approx(2.0 * mixture_mean_variance(s)).epsilon(1e-14));
  CHECK_THROWS_AS(s.scaled(0.0), std::invalid_argument);
  CHECK_THROWS_AS(s.scaled(-1.0), std::invalid_argument);
}

TEST_CASE("spec validation rejects out-of-range parameters") {
  auto p = class_a_spec(1.5);
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  p = class_a_spec(-0.1);
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  p = class_a_spec(0.3);
  p.gamma_ratio = 0.0;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  p = class_a_spec(0.3);
  p.impulse_index = 0.0;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  p = class_a_spec(0.3);
  p.gaussian_var = 0.0;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);

  auto b = bg_spec(0.3);
  b.bernoulli_rho = 1.0;
  CHECK_THROWS_AS(validate(b), std::invalid_argument);
  b = bg_spec(0.3);
  b.slots = 0;
  CHECK_THROWS_AS(validate(b), std::invalid_argument);
  b = bg_spec(0.3);
  b.occurrence_freq = 0.0;
  CHECK_THROWS_AS(validate(b), std::invalid_argument);

  CHECK(noise_kind_from_string("class_a") == NoiseKind::ClassA);
  CHECK(noise_kind_from_string("bernoulli_gaussian") == NoiseKind::BernoulliGaussian);
  CHECK(noise_kind_from_string("gaussian") == NoiseKind::GaussianOnly);
  CHECK_THROWS_AS(noise_kind_from_string("cauchy"), std::invalid_argument);
  CHECK(to_string(NoiseKind::ClassA) == "class_a");
}

TEST_CASE("generator variance matches the mixture-mean target") {
  SubstreamRng rng(5, 0, RngStage::Calibration);
  auto ca = class_a_spec(0.3);
  CHECK(monte_carlo_mixture_variance(ca, 300000, rng) ==
        doctest::Approx(mixture_mean_variance(ca)).epsilon(0.03));

  auto bg = bg_spec(0.3);
  CHECK(monte_carlo_mixture_variance(bg, 300000, rng) ==
        doctest::Approx(mixture_mean_variance(bg)).epsilon(0.03));

  NoiseModelSpec g;
  CHECK(monte_carlo_mixture_variance(g, 200000, rng) ==
        doctest::Approx(1.0).epsilon(0.01));
  CHECK_THROWS_AS(monte_carlo_mixture_variance(g, 0, rng), std::invalid_argument);
}

TEST_CASE("impulsive-branch rate and tail shape are as dialed") {
  SubstreamRng rng(6, 1, RngStage::Noise);
  auto r = sample_noise(class_a_spec(0.3), 1, 200000, rng);
  CHECK(static_cast<double>(r.impulsive_columns) / r.total_columns ==
        doctest::Approx(0.3).epsilon(0.02));

  std::vector<double> re(r.e.a.size());
  for (size_t i = 0; i < re.size(); ++i) re[i] = r.e.a[i].real();
  CHECK(excess_kurtosis(re) > 1.0);  // spiky mixture

  auto g = sample_noise(NoiseModelSpec{}, 1, 200000, rng);
  std::vector<double> gre(g.e.a.size());
  for (size_t i = 0; i < gre.size(); ++i) gre[i] = g.e.a[i].real();
  CHECK(std::abs(excess_kurtosis(gre)) < 0.05);
  CHECK(g.impulsive_columns == 0);
}

TEST_CASE("bernoulli gate produces exact-zero columns shared across rows") {
  SubstreamRng rng(8, 2, RngStage::Noise);
  auto spec = bg_spec(1.0);  // every column impulsive, gate 0.3
  auto r = sample_noise(spec, 4, 50000, rng);
  long zero_cols = 0;
  for (int t = 0; t < r.e.cols; ++t) {
    bool zero0 = std::norm(r.e.at(0, t)) == 0.0;
    for (int n = 1; n < 4; ++n)
      REQUIRE((std::norm(r.e.at(n, t)) == 0.0) == zero0);  // common-mode branch
    if (zero0) ++zero_cols;
  }
  CHECK(static_cast<double>(zero_cols) / r.e.cols == doctest::Approx(0.7).epsilon(0.02));

  CHECK_THROWS_AS(sample_noise(spec, 0, 10, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_noise(spec, 1, 0, rng), std::invalid_argument);
}
