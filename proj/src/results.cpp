#include "wpdm/results.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace wpdm {
namespace {

void append_common(std::string& out, const CampaignResult& r, const Curve& c) {
  out += c.scaling;
  out += ',';
  out += c.detector;
  out += ',';
  out += to_string(r.config.noise_kind);
  out += ',';
  out += format_double(r.config.p_imp);
  out += ',';
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string render_roc_csv(const CampaignResult& r) {
  std::string out =
      "scaling,detector,noise_kind,p_imp,snr_db,threshold,pd0,pf0,pd0_ci,"
      "pf0_ci,trials_h1,trials_h0\n";
  for (const Curve& c : r.curves) {
    for (const PointOutcome& p : c.points) {
      for (const RocPoint& rp : p.roc) {
        append_common(out, r, c);
        out += format_double(p.snr_db);
        out += ',';
        out += format_double(rp.threshold);
        out += ',';
        out += format_double(rp.pd0);
        out += ',';
        out += format_double(rp.pf0);
        out += ',';
        out += format_double(rp.pd0_ci);
        out += ',';
        out += format_double(rp.pf0_ci);
        out += ',';
        out += std::to_string(rp.trials_h1);
        out += ',';
        out += std::to_string(rp.trials_h0);
        out += '\n';
      }
    }
  }
  return out;
}

std::string render_pfd_csv(const CampaignResult& r) {
  std::string out = "scaling,detector,noise_kind,p_imp,snr_db,pfd,pfd_ci,trials\n";
  for (const Curve& c : r.curves) {
    for (const PointOutcome& p : c.points) {
      append_common(out, r, c);
      out += format_double(p.snr_db);
      out += ',';
      out += format_double(p.pfd.pfd);
      out += ',';
      out += format_double(p.pfd.pfd_ci);
      out += ',';
      out += std::to_string(p.pfd.trials);
      out += '\n';
    }
  }
  return out;
}

std::string render_diagnostics_json(const CampaignResult& r) {
  nlohmann::json j;
  j["config_hash"] = r.diagnostics.config_hash;
  j["master_seed"] = r.diagnostics.master_seed;
  j["partial"] = r.partial;
  j["filters"]["orthonormality_residual"] = r.diagnostics.orthonormality_residual;
  j["filters"]["leaf_cross_correlation"] = r.diagnostics.leaf_cross_correlation;
  j["geometry"]["mean_gain_analytic"] = r.diagnostics.mean_gain_analytic;
  j["noise"]["variance_target"] = r.diagnostics.noise_variance_target;
  j["noise"]["variance_sample"] = r.diagnostics.noise_variance_sample;
  j["noise"]["draws"] = r.diagnostics.noise_calibration_draws;
  j["scalings"] = nlohmann::json::array();
  for (const ScalingDiagnostics& s : r.diagnostics.scalings) {
    nlohmann::json e;
    e["name"] = s.name;
    e["truncation_error"] = s.truncation_error;
    e["template_energy"] = s.template_energy;
    e["gain_at_delta"] = s.gain_at_delta;
    j["scalings"].push_back(e);
  }
  return j.dump(2) + "\n";
}

std::vector<std::string> write_outputs(const CampaignResult& r,
                                       const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> paths;
  auto emit = [&](const char* name, const std::string& text) {
    std::string path = (std::filesystem::path(out_dir) / name).string();
    write_file(path, text);
    paths.push_back(path);
  };
  emit("roc.csv", render_roc_csv(r));
  emit("pfd_vs_snr.csv", render_pfd_csv(r));
  emit("diagnostics.json", render_diagnostics_json(r));
  return paths;
}

}  // namespace wpdm
