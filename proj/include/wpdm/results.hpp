#pragma once

#include <string>
#include <vector>

#include "wpdm/engine.hpp"

namespace wpdm {

// Shortest deterministic decimal rendering used in all text artifacts.
std::string format_double(double v);

// CSV with one row per (curve, snr point, threshold). Header only when the
// campaign holds no curves.
std::string render_roc_csv(const CampaignResult& r);

// CSV with one row per (curve, snr point), error rate at threshold zero.
std::string render_pfd_csv(const CampaignResult& r);

// Reproducibility record: config hash, seed, filter residuals, noise
// calibration. Carries no timestamps so reruns are byte-identical.
std::string render_diagnostics_json(const CampaignResult& r);

// Writes roc.csv, pfd_vs_snr.csv and diagnostics.json into out_dir (created
// if missing); returns the paths written.
std::vector<std::string> write_outputs(const CampaignResult& r,
                                       const std::string& out_dir);

}  // namespace wpdm
