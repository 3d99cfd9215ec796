#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wpdm/fusion.hpp"
#include "wpdm/noise.hpp"
#include "wpdm/wavelet.hpp"

namespace wpdm {

// Full description of one simulation campaign. Parsed from a flat
// key=value file; every field has a default so an empty file is valid.
struct ScenarioConfig {
  // Waveform layout.
  int groups = 4;            // z
  int sensors = 8;           // m, per group
  int antennas = 64;         // n, at the fusion center
  int filter_taps = 14;      // q
  int filter_order = 2;      // k
  double filter_bandwidth = 1.4142135623730951;
  double shannon_extent = 16.0;
  std::vector<ScalingKind> scalings = {ScalingKind::Haar};
  double t0_seconds = 1e-3;
  int osf = 8;
  double delta_t0 = 0.0;     // receiver timing offset, units of t0
  bool slot_decorrelate = true;
  bool simulate_full_z = true;  // all groups transmit; group 0 is measured

  // Detection and fusion.
  std::vector<DetectorKind> detectors = {DetectorKind::MatchedFilter};
  bool include_benchmark = false;
  double local_pd = 0.5;
  double local_pf = 0.05;
  int threshold_points = 201;

  // Noise.
  NoiseKind noise_kind = NoiseKind::ClassA;
  double p_imp = 0.3;
  double gamma_ratio = 0.25;
  double impulse_index_a = 0.1;
  double bernoulli_rho = 0.3;
  double occurrence_freq = 1.0;

  // Geometry and propagation.
  double phi_min_m = 100.0;
  double phi_max_m = 1000.0;
  double cluster_width_m = 50.0;
  double cluster_height_m = 100.0;
  double pathloss_eta = 2.0;
  double shadow_mu_db = 4.0;
  double shadow_sigma_db = 2.0;
  double rho = 0.0;  // transmit power; 0 selects 1/sqrt(n)

  // Campaign shape.
  std::vector<double> snr_grid_db = {10.0};
  long trials_per_point = 2000;
  std::uint64_t master_seed = 1;
  int workers = 0;  // 0 selects hardware concurrency
};

// Parses flat key=value text. '#' starts a comment, blank lines are
// ignored. Unknown or duplicate keys and malformed values raise
// std::invalid_argument naming the offending line.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

// Throws std::invalid_argument naming the violated constraint.
void validate(const ScenarioConfig& cfg);

// Every key in sorted order, one per line, values formatted
// deterministically. Identical configs produce identical text.
std::string canonical_text(const ScenarioConfig& cfg);

std::uint64_t fnv1a64(const std::string& text);

// FNV-1a of the canonical text, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

}  // namespace wpdm
