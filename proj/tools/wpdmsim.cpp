// wpdmsim: Monte Carlo campaigns for waveform-multiplexed cooperative
// detection under impulsive noise. Exit codes: 0 success, 1 configuration
// or validation failure, 2 runtime failure.
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wpdm/config.hpp"
#include "wpdm/engine.hpp"
#include "wpdm/noise.hpp"
#include "wpdm/results.hpp"
#include "wpdm/wavelet.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string preset;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = -1;
  long trials = 0;
};

wpdm::ScenarioConfig preset_config(const std::string& name) {
  wpdm::ScenarioConfig cfg;
  cfg.scalings = {wpdm::ScalingKind::Haar, wpdm::ScalingKind::Shannon,
                  wpdm::ScalingKind::Spline};
  cfg.detectors = {wpdm::DetectorKind::MatchedFilter};
  cfg.include_benchmark = true;
  cfg.noise_kind = wpdm::NoiseKind::ClassA;
  if (name == "fig2" || name == "fig3" || name == "fig4") {
    cfg.snr_grid_db = {10.0};
    cfg.p_imp = name == "fig2" ? 0.3 : name == "fig3" ? 0.5 : 0.7;
    return cfg;
  }
  if (name == "fig5" || name == "fig6" || name == "fig7") {
    cfg.snr_grid_db = {0.0, 4.0, 8.0, 12.0, 16.0, 20.0};
    cfg.p_imp = name == "fig5" ? 0.3 : name == "fig6" ? 0.5 : 0.7;
    return cfg;
  }
  throw std::invalid_argument("unknown preset '" + name +
                              "' (expected fig2..fig7)");
}

wpdm::ScenarioConfig resolve_config(const CommonArgs& args) {
  wpdm::ScenarioConfig cfg;
  if (!args.preset.empty() && !args.config_path.empty())
    throw std::invalid_argument("--config and --preset are mutually exclusive");
  if (!args.preset.empty())
    cfg = preset_config(args.preset);
  else if (!args.config_path.empty())
    cfg = wpdm::load_config(args.config_path);

  if (args.seed_set) cfg.master_seed = args.seed;
  if (args.trials > 0) cfg.trials_per_point = args.trials;
  if (args.workers >= 0) {
    cfg.workers = args.workers;
  } else if (const char* env = std::getenv("WPDMSIM_WORKERS")) {
    cfg.workers = static_cast<int>(std::strtol(env, nullptr, 10));
    if (cfg.workers < 0) throw std::invalid_argument("WPDMSIM_WORKERS must be >= 0");
  }
  return cfg;
}

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "key=value scenario file");
  sub->add_option("--preset", args.preset, "built-in scenario (fig2..fig7)");
  sub->add_option("--out", args.out_dir, "output directory")
      ->capture_default_str();
  sub->add_option("--seed", args.seed, "override master_seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  sub->add_option("--workers", args.workers, "worker threads (0 = hardware)");
  sub->add_option("--trials", args.trials, "override trials_per_point");
}

int run_and_write(const wpdm::ScenarioConfig& cfg, const std::string& out_dir) {
  wpdm::CampaignResult result = wpdm::run_campaign(
      cfg, [](const std::string& line) { std::cerr << line << "\n"; });
  for (const std::string& path : wpdm::write_outputs(result, out_dir))
    std::cout << path << "\n";
  if (result.partial)
    std::cerr << "warning: some trials were skipped; results are partial\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"waveform-division multiplexed spectrum sensing simulator"};
  app.require_subcommand(1);

  CommonArgs run_args, roc_args, sweep_args;
  double roc_snr = 10.0;
  std::vector<double> sweep_grid;

  CLI::App* cmd_run = app.add_subcommand("run", "run the campaign as configured");
  add_common(cmd_run, run_args);

  CLI::App* cmd_roc =
      app.add_subcommand("roc", "detection/false-alarm tradeoff at one SNR");
  add_common(cmd_roc, roc_args);
  cmd_roc->add_option("--snr", roc_snr, "operating SNR in dB")
      ->capture_default_str();

  CLI::App* cmd_sweep =
      app.add_subcommand("sweep-snr", "error rate across the SNR grid");
  add_common(cmd_sweep, sweep_args);
  cmd_sweep->add_option("--snr-grid", sweep_grid, "override snr_grid_db")
      ->delimiter(',');

  CLI::App* cmd_filters =
      app.add_subcommand("validate-filters", "check the filter-bank design");
  int fq = 14, fk = 2, fz = 4;
  double fb = 1.4142135623730951;
  cmd_filters->add_option("--q", fq, "prototype taps")->capture_default_str();
  cmd_filters->add_option("--k", fk, "prototype order")->capture_default_str();
  cmd_filters->add_option("--b", fb, "bandwidth")->capture_default_str();
  cmd_filters->add_option("--z", fz, "groups")->capture_default_str();

  CLI::App* cmd_noise =
      app.add_subcommand("calibrate-noise", "check the noise generator moments");
  std::string nkind = "class_a";
  double np = 0.3, ngamma = 0.25, na = 0.1, nrho = 0.3, nfreq = 1.0;
  int nslots = 8;
  long ndraws = 200000;
  std::uint64_t nseed = 1;
  cmd_noise->add_option("--kind", nkind, "gaussian|bernoulli_gaussian|class_a")
      ->capture_default_str();
  cmd_noise->add_option("--p-imp", np, "impulsive mixture probability")
      ->capture_default_str();
  cmd_noise->add_option("--gamma", ngamma, "background-to-impulse ratio")
      ->capture_default_str();
  cmd_noise->add_option("--a", na, "impulse index")->capture_default_str();
  cmd_noise->add_option("--bernoulli-rho", nrho, "gate probability")
      ->capture_default_str();
  cmd_noise->add_option("--occurrence", nfreq, "occurrence frequency")
      ->capture_default_str();
  cmd_noise->add_option("--slots", nslots, "symbol slots")->capture_default_str();
  cmd_noise->add_option("--draws", ndraws, "sample count")->capture_default_str();
  cmd_noise->add_option("--seed", nseed, "rng seed")->capture_default_str();

  CLI::App* cmd_preset =
      app.add_subcommand("preset", "print a built-in scenario as config text");
  std::string preset_name;
  cmd_preset->add_option("name", preset_name, "fig2..fig7")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (cmd_run->parsed()) {
      return run_and_write(resolve_config(run_args), run_args.out_dir);
    }
    if (cmd_roc->parsed()) {
      wpdm::ScenarioConfig cfg = resolve_config(roc_args);
      cfg.snr_grid_db = {roc_snr};
      return run_and_write(cfg, roc_args.out_dir);
    }
    if (cmd_sweep->parsed()) {
      wpdm::ScenarioConfig cfg = resolve_config(sweep_args);
      if (!sweep_grid.empty()) cfg.snr_grid_db = sweep_grid;
      return run_and_write(cfg, sweep_args.out_dir);
    }
    if (cmd_filters->parsed()) {
      wpdm::PrototypeFilterPair pair = wpdm::design_prototype_filters(fq, fk, fb);
      wpdm::WaveletPacketTree tree = wpdm::build_packet_tree(pair, fz);
      double resid = wpdm::max_orthonormality_residual(pair);
      double cross = wpdm::max_leaf_cross_correlation(tree);
      std::printf("delay=%.15g\n", pair.delay);
      std::printf("regularity=%d\n", pair.regularity);
      std::printf("orthonormality_residual=%.15g\n", resid);
      std::printf("leaf_cross_correlation=%.15g\n", cross);
      std::printf("tolerance=%g\n", wpdm::kOrthTolerance);
      bool ok = resid <= wpdm::kOrthTolerance && cross <= wpdm::kOrthTolerance;
      std::printf("result=%s\n", ok ? "ok" : "fail");
      return ok ? 0 : 1;
    }
    if (cmd_noise->parsed()) {
      if (ndraws < 100000)
        throw std::invalid_argument("calibration needs at least 1e5 draws");
      wpdm::NoiseModelSpec spec;
      spec.kind = wpdm::noise_kind_from_string(nkind);
      spec.gaussian_var = 1.0;
      spec.gamma_ratio = ngamma;
      spec.impulse_index = na;
      spec.bernoulli_rho = nrho;
      spec.occurrence_freq = nfreq;
      spec.p_impulse = np;
      spec.slots = nslots;
      double target = wpdm::mixture_mean_variance(spec);
      wpdm::SubstreamRng rng(nseed, 0, wpdm::RngStage::Calibration);
      double sample = wpdm::monte_carlo_mixture_variance(spec, ndraws, rng);
      double rel = std::abs(sample - target) / target;
      std::printf("kind=%s\n", wpdm::to_string(spec.kind).c_str());
      std::printf("p_imp=%g\n", np);
      std::printf("combined_variance=%.10g\n", wpdm::combined_variance(spec));
      std::printf("mixture_variance_target=%.10g\n", target);
      std::printf("mixture_variance_sample=%.10g\n", sample);
      std::printf("relative_error=%.4g\n", rel);
      std::printf("draws=%ld\n", ndraws);
      bool ok = rel <= 0.05;
      std::printf("result=%s\n", ok ? "ok" : "fail");
      return ok ? 0 : 1;
    }
    if (cmd_preset->parsed()) {
      std::cout << wpdm::canonical_text(preset_config(preset_name));
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
