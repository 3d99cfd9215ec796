#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wpdm/channel.hpp"
#include "wpdm/config.hpp"
#include "wpdm/engine.hpp"
#include "wpdm/metrics.hpp"
#include "wpdm/results.hpp"

using namespace wpdm;

namespace {

// Small, fast scenario: every structural feature on, tiny trial counts.
ScenarioConfig small_config() {
  ScenarioConfig cfg;
  cfg.groups = 2;
  cfg.sensors = 3;
  cfg.antennas = 4;
  cfg.scalings = {ScalingKind::Haar, ScalingKind::Spline};
  cfg.detectors = {DetectorKind::MatchedFilter, DetectorKind::ZeroForcing};
  cfg.include_benchmark = true;
  cfg.threshold_points = 21;
  cfg.snr_grid_db = {0.0, 10.0};
  cfg.trials_per_point = 80;
  cfg.master_seed = 17;
  cfg.workers = 1;
  return cfg;
}

}  // namespace

TEST_CASE("config text round-trips through the canonical form") {
  auto cfg = small_config();
  std::string text = canonical_text(cfg);
  auto back = parse_config(text);
  CHECK(canonical_text(back) == text);
  CHECK(config_hash(back) == config_hash(cfg));
  CHECK(config_hash(cfg).size() == 16);

  // Comments, blank lines, and spacing do not change the parse.
  auto spaced = parse_config("# scenario\n\n  z = 2 \nm=3\n n =4  # antennas next\n");
  CHECK(spaced.groups == 2);
  CHECK(spaced.sensors == 3);
  CHECK(spaced.antennas == 4);

  CHECK_THROWS_WITH_AS(parse_config("z = 2\nz = 4\n"),
                       doctest::Contains("duplicate key"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("zz = 2\n"), doctest::Contains("unknown key"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("m = many\n"), doctest::Contains("bad value"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(validate(parse_config("z = 1\n")),
                       doctest::Contains("z must be at least 2"),
                       std::invalid_argument);
}

TEST_CASE("fnv hash matches the published test vector") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("effective transmit power defaults to the array-normalized value") {
  auto cfg = small_config();
  CHECK(effective_rho(cfg) == doctest::Approx(0.5).epsilon(1e-15));  // 1/sqrt(4)
  cfg.rho = 0.25;
  CHECK(effective_rho(cfg) == doctest::Approx(0.25));
}

TEST_CASE("symbol noise spec realizes the requested operating point") {
  auto cfg = small_config();
  GeometryParams gp{cfg.phi_min_m, cfg.phi_max_m, cfg.cluster_width_m,
                    cfg.cluster_height_m};
  ShadowParams sp{cfg.pathloss_eta, cfg.shadow_mu_db, cfg.shadow_sigma_db};
  double lambda_bar = mean_large_scale_gain(gp, sp);

  for (double snr : {-5.0, 0.0, 10.0}) {
    auto spec = symbol_noise_spec(cfg, snr);
    double target = effective_rho(cfg) * lambda_bar * std::pow(10.0, -snr / 10.0);
    CHECK(combined_variance(spec) == doctest::Approx(target).epsilon(1e-12));
    // The mixture profile itself is config-driven.
    CHECK(spec.kind == cfg.noise_kind);
    CHECK(spec.p_impulse == cfg.p_imp);
  }
}

TEST_CASE("campaign output is identical across worker counts") {
  auto cfg = small_config();
  cfg.workers = 1;
  auto one = run_campaign(cfg);
  cfg.workers = 8;
  auto eight = run_campaign(cfg);

  CHECK(render_roc_csv(one) == render_roc_csv(eight));
  CHECK(render_pfd_csv(one) == render_pfd_csv(eight));
  CHECK(render_diagnostics_json(one) == render_diagnostics_json(eight));
  CHECK_FALSE(one.partial);

  // Repeat runs are exact replicas too.
  cfg.workers = 1;
  auto again = run_campaign(cfg);
  CHECK(render_roc_csv(again) == render_roc_csv(one));
}

TEST_CASE("campaign layout matches the requested grid") {
  auto cfg = small_config();
  auto res = run_campaign(cfg);

  // scalings x detectors plus one benchmark curve.
  REQUIRE(res.curves.size() == 2 * 2 + 1);
  CHECK(res.curves.back().detector == "benchmark");
  CHECK(res.thresholds.size() == 21);

  for (const auto& curve : res.curves) {
    REQUIRE(curve.points.size() == 2);
    for (size_t p = 0; p < curve.points.size(); ++p) {
      const auto& pt = curve.points[p];
      CHECK(pt.snr_db == cfg.snr_grid_db[p]);
      CHECK(pt.skipped_trials == 0);
      // Parity split: half the trials per hypothesis.
      CHECK(pt.llr_h0.size() == 40);
      CHECK(pt.llr_h1.size() == 40);
      CHECK(pt.roc.size() == 21);
      CHECK(pt.pfd.trials == 80);
      double clamp = cfg.sensors * 50.0;
      for (double v : pt.llr_h0) REQUIRE(std::abs(v) <= clamp);
      for (double v : pt.llr_h1) REQUIRE(std::abs(v) <= clamp);
    }
  }

  CHECK(res.diagnostics.config_hash == config_hash(cfg));
  CHECK(res.diagnostics.scalings.size() == 2);
  CHECK(res.diagnostics.orthonormality_residual ==
        doctest::Approx(0.060544337782847776).epsilon(1e-10));
  CHECK(res.diagnostics.noise_variance_target > 0.0);
  CHECK(std::abs(res.diagnostics.noise_variance_sample /
                     res.diagnostics.noise_variance_target -
                 1.0) < 0.05);
}

TEST_CASE("noiseless campaign error rate equals the enumerated fusion floor") {
  ScenarioConfig cfg;
  cfg.groups = 2;
  cfg.sensors = 8;
  cfg.antennas = 4;
  cfg.scalings = {ScalingKind::Haar};
  cfg.detectors = {DetectorKind::MatchedFilter};
  cfg.snr_grid_db = {200.0};  // noise variance ~1e-21: channel is error-free
  cfg.trials_per_point = 3000;
  cfg.threshold_points = 3;
  cfg.master_seed = 5;
  cfg.workers = 2;
  auto res = run_campaign(cfg);

  double floor = enumerated_fusion_floor(8, {cfg.local_pd, cfg.local_pf});
  const auto& pt = res.curves[0].points[0];
  double sigma = std::sqrt(floor * (1.0 - floor) / pt.pfd.trials);
  CHECK(std::abs(pt.pfd.pfd - floor) < 4.0 * sigma);
}

TEST_CASE("invalid configurations are rejected up front") {
  auto cfg = small_config();
  cfg.sensors = 9;  // exceeds antennas with a zf detector selected
  CHECK_THROWS_AS(run_campaign(cfg), std::invalid_argument);

  cfg = small_config();
  cfg.local_pd = 0.05;
  cfg.local_pf = 0.5;  // must satisfy pd > pf
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

  cfg = small_config();
  cfg.trials_per_point = 0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

  cfg = small_config();
  cfg.snr_grid_db = {};
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

  cfg = small_config();
  cfg.scalings = {};
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("rendered artifacts carry the pinned schemas") {
  auto cfg = small_config();
  cfg.scalings = {ScalingKind::Haar};
  cfg.detectors = {DetectorKind::ZeroForcing};
  cfg.snr_grid_db = {10.0};
  cfg.trials_per_point = 40;
  auto res = run_campaign(cfg);

  auto roc = render_roc_csv(res);
  CHECK(roc.rfind("scaling,detector,noise_kind,p_imp,snr_db,threshold,pd0,pf0,"
                  "pd0_ci,pf0_ci,trials_h1,trials_h0\n", 0) == 0);
  CHECK(roc.find("haar,zf,class_a,0.3,10,") != std::string::npos);
  CHECK(roc.find("none,benchmark,class_a,0.3,10,") != std::string::npos);

  auto pfd = render_pfd_csv(res);
  CHECK(pfd.rfind("scaling,detector,noise_kind,p_imp,snr_db,pfd,pfd_ci,trials\n",
                  0) == 0);

  auto js = render_diagnostics_json(res);
  CHECK(js.find("\"config_hash\"") != std::string::npos);
  CHECK(js.find("\"orthonormality_residual\"") != std::string::npos);
  CHECK(js.find("\"truncation_error\"") != std::string::npos);
  CHECK(js.back() == '\n');
}
