#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wpdm/config.hpp"
#include "wpdm/metrics.hpp"
#include "wpdm/noise.hpp"

namespace wpdm {

// One curve point at a fixed SNR. Raw fused statistics are kept so callers
// can re-threshold without re-running trials.
struct PointOutcome {
  double snr_db = 0.0;
  std::vector<double> llr_h1;
  std::vector<double> llr_h0;
  std::vector<RocPoint> roc;  // over the campaign threshold grid
  PfdPoint pfd;               // pooled error rate at threshold zero
  long skipped_trials = 0;
};

// scaling is "haar"/"shannon"/"spline", or "none" for the single-pulse
// benchmark chain; detector is "mf"/"zf", or "benchmark".
struct Curve {
  std::string scaling;
  std::string detector;
  std::vector<PointOutcome> points;
};

struct ScalingDiagnostics {
  std::string name;
  double truncation_error = 0.0;
  double template_energy = 0.0;  // continuous energy of the group-0 template
  double gain_at_delta = 1.0;    // model waveform gain at the configured offset
};

struct Diagnostics {
  std::string config_hash;
  std::uint64_t master_seed = 0;
  double orthonormality_residual = 0.0;
  double leaf_cross_correlation = 0.0;
  double mean_gain_analytic = 0.0;
  double noise_variance_target = 0.0;  // mixture mean at unit background
  double noise_variance_sample = 0.0;  // Monte Carlo check of the generator
  long noise_calibration_draws = 0;
  std::vector<ScalingDiagnostics> scalings;
};

struct CampaignResult {
  ScenarioConfig config;
  std::vector<double> thresholds;
  std::vector<Curve> curves;
  Diagnostics diagnostics;
  bool partial = false;  // some trials were skipped after an error
};

// Transmit power: cfg.rho, or 1/sqrt(n) when cfg.rho == 0.
double effective_rho(const ScenarioConfig& cfg);

// Symbol-level noise spec whose closed-form combined variance realizes the
// requested SNR: snr_db = 10 log10(rho * mean_gain / combined_variance).
NoiseModelSpec symbol_noise_spec(const ScenarioConfig& cfg, double snr_db);

// Receives one human-readable line per finished SNR point.
using ProgressSink = std::function<void(const std::string&)>;

// Runs the full campaign described by cfg. Results are bit-identical for a
// given config regardless of worker count. Throws std::invalid_argument on a
// config that cannot run and std::runtime_error when a point yields no usable
// trials.
CampaignResult run_campaign(const ScenarioConfig& cfg,
                            const ProgressSink& progress = {});

}  // namespace wpdm
