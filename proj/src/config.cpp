#include "wpdm/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wpdm {
namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Shortest decimal that parses back to the same double.
std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("trailing characters");
  return v;
}

long parse_long(const std::string& s) {
  size_t pos = 0;
  long v = std::stol(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("trailing characters");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  size_t pos = 0;
  unsigned long long v = std::stoull(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("trailing characters");
  return static_cast<std::uint64_t>(v);
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("expected true/false");
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Field {
  const char* name;
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

const std::vector<Field>& field_table() {
  static const std::vector<Field> table = [] {
    std::vector<Field> t;
    auto add_int = [&t](const char* name, int ScenarioConfig::*p) {
      t.push_back({name,
                   [p](ScenarioConfig& c, const std::string& v) {
                     c.*p = static_cast<int>(parse_long(v));
                   },
                   [p](const ScenarioConfig& c) { return std::to_string(c.*p); }});
    };
    auto add_long = [&t](const char* name, long ScenarioConfig::*p) {
      t.push_back({name,
                   [p](ScenarioConfig& c, const std::string& v) { c.*p = parse_long(v); },
                   [p](const ScenarioConfig& c) { return std::to_string(c.*p); }});
    };
    auto add_double = [&t](const char* name, double ScenarioConfig::*p) {
      t.push_back({name,
                   [p](ScenarioConfig& c, const std::string& v) { c.*p = parse_double(v); },
                   [p](const ScenarioConfig& c) { return fmt_double(c.*p); }});
    };
    auto add_bool = [&t](const char* name, bool ScenarioConfig::*p) {
      t.push_back({name,
                   [p](ScenarioConfig& c, const std::string& v) { c.*p = parse_bool(v); },
                   [p](const ScenarioConfig& c) {
                     return std::string(c.*p ? "true" : "false");
                   }});
    };

    add_int("z", &ScenarioConfig::groups);
    add_int("m", &ScenarioConfig::sensors);
    add_int("n", &ScenarioConfig::antennas);
    add_int("filter_q", &ScenarioConfig::filter_taps);
    add_int("filter_k", &ScenarioConfig::filter_order);
    add_double("filter_b", &ScenarioConfig::filter_bandwidth);
    add_double("shannon_extent", &ScenarioConfig::shannon_extent);
    t.push_back({"scalings",
                 [](ScenarioConfig& c, const std::string& v) {
                   c.scalings.clear();
                   for (const auto& s : split_csv(v))
                     c.scalings.push_back(scaling_kind_from_string(s));
                 },
                 [](const ScenarioConfig& c) {
                   std::string out;
                   for (size_t i = 0; i < c.scalings.size(); ++i) {
                     if (i) out += ',';
                     out += to_string(c.scalings[i]);
                   }
                   return out;
                 }});
    add_double("t0_seconds", &ScenarioConfig::t0_seconds);
    add_int("osf", &ScenarioConfig::osf);
    add_double("delta_t0", &ScenarioConfig::delta_t0);
    add_bool("slot_decorrelate", &ScenarioConfig::slot_decorrelate);
    add_bool("simulate_full_z", &ScenarioConfig::simulate_full_z);
    t.push_back({"detectors",
                 [](ScenarioConfig& c, const std::string& v) {
                   c.detectors.clear();
                   for (const auto& s : split_csv(v))
                     c.detectors.push_back(detector_kind_from_string(s));
                 },
                 [](const ScenarioConfig& c) {
                   std::string out;
                   for (size_t i = 0; i < c.detectors.size(); ++i) {
                     if (i) out += ',';
                     out += to_string(c.detectors[i]);
                   }
                   return out;
                 }});
    add_bool("include_benchmark", &ScenarioConfig::include_benchmark);
    add_double("local_pd", &ScenarioConfig::local_pd);
    add_double("local_pf", &ScenarioConfig::local_pf);
    add_int("threshold_points", &ScenarioConfig::threshold_points);
    t.push_back({"noise_kind",
                 [](ScenarioConfig& c, const std::string& v) {
                   c.noise_kind = noise_kind_from_string(v);
                 },
                 [](const ScenarioConfig& c) {
                   return std::string(to_string(c.noise_kind));
                 }});
    add_double("p_imp", &ScenarioConfig::p_imp);
    add_double("gamma_ratio", &ScenarioConfig::gamma_ratio);
    add_double("impulse_index_a", &ScenarioConfig::impulse_index_a);
    add_double("bernoulli_rho", &ScenarioConfig::bernoulli_rho);
    add_double("occurrence_freq", &ScenarioConfig::occurrence_freq);
    add_double("phi_min_m", &ScenarioConfig::phi_min_m);
    add_double("phi_max_m", &ScenarioConfig::phi_max_m);
    add_double("cluster_width_m", &ScenarioConfig::cluster_width_m);
    add_double("cluster_height_m", &ScenarioConfig::cluster_height_m);
    add_double("pathloss_eta", &ScenarioConfig::pathloss_eta);
    add_double("shadow_mu_db", &ScenarioConfig::shadow_mu_db);
    add_double("shadow_sigma_db", &ScenarioConfig::shadow_sigma_db);
    add_double("rho", &ScenarioConfig::rho);
    t.push_back({"snr_grid_db",
                 [](ScenarioConfig& c, const std::string& v) {
                   c.snr_grid_db.clear();
                   for (const auto& s : split_csv(v))
                     c.snr_grid_db.push_back(parse_double(s));
                 },
                 [](const ScenarioConfig& c) {
                   std::string out;
                   for (size_t i = 0; i < c.snr_grid_db.size(); ++i) {
                     if (i) out += ',';
                     out += fmt_double(c.snr_grid_db[i]);
                   }
                   return out;
                 }});
    add_long("trials_per_point", &ScenarioConfig::trials_per_point);
    t.push_back({"master_seed",
                 [](ScenarioConfig& c, const std::string& v) {
                   c.master_seed = parse_u64(v);
                 },
                 [](const ScenarioConfig& c) { return std::to_string(c.master_seed); }});
    add_int("workers", &ScenarioConfig::workers);

    std::sort(t.begin(), t.end(),
              [](const Field& a, const Field& b) {
                return std::string(a.name) < std::string(b.name);
              });
    return t;
  }();
  return table;
}

const Field* find_field(const std::string& name) {
  for (const auto& f : field_table())
    if (name == f.name) return &f;
  return nullptr;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::set<std::string> seen;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    const Field* f = find_field(key);
    if (!f)
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
    if (!seen.insert(key).second)
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": duplicate key '" + key + "'");
    try {
      f->set(cfg, value);
    } catch (const std::exception& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": bad value for '" + key + "': " + e.what());
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const ScenarioConfig& cfg) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (cfg.groups < 2) fail("z must be at least 2");
  if (cfg.sensors < 1) fail("m must be at least 1");
  if (cfg.antennas < 1) fail("n must be at least 1");
  if (cfg.filter_taps < 2 || cfg.filter_taps % 2 != 0)
    fail("filter_q must be even and at least 2");
  if (cfg.filter_order < 1 || 2 * cfg.filter_order > cfg.filter_taps)
    fail("filter_k must satisfy 1 <= k <= q/2");
  if (!(cfg.filter_bandwidth > 0.0)) fail("filter_b must be positive");
  if (!(cfg.shannon_extent > 0.0)) fail("shannon_extent must be positive");
  if (cfg.scalings.empty()) fail("scalings must name at least one function");
  if (!(cfg.t0_seconds > 0.0)) fail("t0_seconds must be positive");
  if (cfg.osf < 2) fail("osf must be at least 2");
  if (cfg.detectors.empty()) fail("detectors must name at least one detector");
  if (!(cfg.local_pd > 0.0 && cfg.local_pd < 1.0))
    fail("local_pd must lie strictly inside (0, 1)");
  if (!(cfg.local_pf > 0.0 && cfg.local_pf < 1.0))
    fail("local_pf must lie strictly inside (0, 1)");
  if (!(cfg.local_pd > cfg.local_pf)) fail("local_pd must exceed local_pf");
  if (cfg.threshold_points < 2) fail("threshold_points must be at least 2");
  if (!(cfg.p_imp >= 0.0 && cfg.p_imp <= 1.0)) fail("p_imp must lie in [0, 1]");
  if (!(cfg.gamma_ratio > 0.0)) fail("gamma_ratio must be positive");
  if (!(cfg.impulse_index_a > 0.0)) fail("impulse_index_a must be positive");
  if (!(cfg.bernoulli_rho > 0.0 && cfg.bernoulli_rho < 1.0))
    fail("bernoulli_rho must lie strictly inside (0, 1)");
  if (!(cfg.occurrence_freq > 0.0)) fail("occurrence_freq must be positive");
  if (!(cfg.phi_min_m > 0.0)) fail("phi_min_m must be positive");
  if (!(cfg.phi_max_m > cfg.phi_min_m)) fail("phi_max_m must exceed phi_min_m");
  if (!(cfg.cluster_width_m > 0.0)) fail("cluster_width_m must be positive");
  if (!(cfg.cluster_height_m > 0.0)) fail("cluster_height_m must be positive");
  if (!(cfg.pathloss_eta > 0.0)) fail("pathloss_eta must be positive");
  if (!(cfg.shadow_sigma_db >= 0.0)) fail("shadow_sigma_db must be nonnegative");
  if (cfg.rho < 0.0) fail("rho must be nonnegative (0 selects 1/sqrt(n))");
  if (cfg.snr_grid_db.empty()) fail("snr_grid_db must list at least one point");
  if (cfg.trials_per_point < 2) fail("trials_per_point must be at least 2");
  if (cfg.workers < 0) fail("workers must be nonnegative");
}

std::string canonical_text(const ScenarioConfig& cfg) {
  std::string out;
  for (const auto& f : field_table()) {
    out += f.name;
    out += '=';
    out += f.get(cfg);
    out += '\n';
  }
  return out;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const ScenarioConfig& cfg) {
  // workers only picks the execution layout; two runs that differ in nothing
  // else must hash (and so trace) identically.
  ScenarioConfig scenario = cfg;
  scenario.workers = 0;
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(
                    fnv1a64(canonical_text(scenario))));
  return buf;
}

}  // namespace wpdm
