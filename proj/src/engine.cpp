#include "wpdm/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>
#include <utility>

#include "wpdm/channel.hpp"
#include "wpdm/fusion.hpp"
#include "wpdm/waveform.hpp"
#include "wpdm/wavelet.hpp"

namespace wpdm {
namespace {

constexpr double kAutocorrStep = 1.0 / 64.0;
constexpr long kCalibrationDraws = 200000;

GeometryParams geometry_params(const ScenarioConfig& cfg) {
  GeometryParams gp;
  gp.radius_min_m = cfg.phi_min_m;
  gp.radius_max_m = cfg.phi_max_m;
  gp.cluster_width_m = cfg.cluster_width_m;
  gp.cluster_height_m = cfg.cluster_height_m;
  return gp;
}

ShadowParams shadow_params(const ScenarioConfig& cfg) {
  ShadowParams sp;
  sp.pathloss_exp = cfg.pathloss_eta;
  sp.mean_db = cfg.shadow_mu_db;
  sp.sigma_db = cfg.shadow_sigma_db;
  return sp;
}

// Everything about one scaling function that does not change across trials.
struct ScalingAssets {
  ScalingKind kind;
  ScalingFunction sf;
  AutocorrelationTable table;
  std::vector<LeafWaveform> waveforms;  // transmit templates, one per group
  ReconstructionBank bank;
  double sigma_hat = 1.0;       // model gain at the configured timing offset
  double template_energy = 0.0;
};

ScalingAssets make_assets(const ScenarioConfig& cfg,
                          const WaveletPacketTree& tree, SamplingParams sp,
                          ScalingKind kind) {
  ScalingAssets a;
  a.kind = kind;
  a.sf = sample_scaling_function(kind, kAutocorrStep, cfg.shannon_extent);
  a.table = autocorrelation(a.sf);
  a.waveforms.reserve(cfg.groups);
  for (int z = 0; z < cfg.groups; ++z)
    a.waveforms.push_back(make_leaf_waveform(tree.leaf_filters[z], kind,
                                             cfg.shannon_extent, sp.osf, 0.0));
  a.bank = make_reconstruction_bank(tree, a.sf, sp, cfg.sensors, cfg.groups,
                                    cfg.delta_t0, cfg.slot_decorrelate);
  a.sigma_hat = waveform_gain(tree.leaf_filters[0], a.table, cfg.delta_t0);
  double e = 0.0;
  for (double v : a.waveforms[0].samples) e += v * v;
  a.template_energy = e / sp.osf;
  return a;
}

// Per-(chain, point) context shared read-only by all workers.
struct PointContext {
  const ScenarioConfig* cfg = nullptr;
  const WaveletPacketTree* tree = nullptr;
  const ScalingAssets* assets = nullptr;
  SamplingParams sp;
  GeometryParams gp;
  ShadowParams shp;
  LocalPerformance local;
  double rho = 1.0;
  NoiseModelSpec spec_symbol;
  NoiseModelSpec spec_grid;
  double sigma_e2 = 1.0;
  bool with_benchmark = false;
  std::uint64_t stream_base = 0;
  int outputs = 0;  // detectors (+1 when with_benchmark)
};

// Runs one trial end to end and fills llr[0..outputs). Trial index parity
// fixes the hypothesis: even -> H0, odd -> H1.
void run_trial(const PointContext& ctx, long t, double* llr) {
  const ScenarioConfig& cfg = *ctx.cfg;
  std::uint64_t seed = cfg.master_seed;
  std::uint64_t stream = ctx.stream_base + static_cast<std::uint64_t>(t);
  bool h1 = (t % 2) == 1;
  double p_plus = h1 ? ctx.local.pd : ctx.local.pf;

  int tx_groups = cfg.simulate_full_z ? cfg.groups : 1;

  SubstreamRng dec(seed, stream, RngStage::LocalDecisions);
  std::vector<SensorDecisionFrame> frames(tx_groups);
  for (int z = 0; z < tx_groups; ++z) {
    frames[z].group = z;
    frames[z].symbols.resize(cfg.sensors);
    for (int m = 0; m < cfg.sensors; ++m)
      frames[z].symbols[m] = dec.next_double() < p_plus ? 1 : -1;
  }

  SubstreamRng geo(seed, stream, RngStage::Geometry);
  NetworkGeometry net = deploy(cfg.groups, cfg.sensors, ctx.gp, geo);

  SubstreamRng shad(seed, stream, RngStage::Shadowing);
  SubstreamRng fad(seed, stream, RngStage::Fading);
  std::vector<ChannelRealization> chans;
  chans.reserve(tx_groups);
  for (int z = 0; z < tx_groups; ++z) {
    std::vector<double> lambda = draw_large_scale(net, z, ctx.gp, ctx.shp, shad);
    chans.push_back(draw_channel(cfg.antennas, lambda, ctx.rho, fad));
  }

  std::vector<EncodedFrame> enc;
  enc.reserve(tx_groups);
  for (int z = 0; z < tx_groups; ++z)
    enc.push_back(encode_group(frames[z], ctx.assets->waveforms[z],
                               ctx.tree->leaf_shift, ctx.sp));
  MultiplexedSignal mux = multiplex_groups(std::move(enc));

  SubstreamRng nz(seed, stream, RngStage::Noise);
  NoiseRealization noise =
      sample_noise(ctx.spec_grid, cfg.antennas, mux.length, nz);
  CMatrix y = apply_mac(mux, chans, noise);
  std::vector<RecoveredFrame> recovered = reconstruct(y, ctx.assets->bank, mux.start);
  const RecoveredFrame& rec = recovered[0];

  CMatrix ghat(cfg.antennas, cfg.sensors);
  for (int n = 0; n < cfg.antennas; ++n)
    for (int m = 0; m < cfg.sensors; ++m) ghat.at(n, m) = chans[0].g(n, m);

  int k = 0;
  for (DetectorKind kind : cfg.detectors) {
    FusionStatistic st =
        detect(rec.antenna_statistics, ghat, ctx.assets->sigma_hat, kind);
    DetectionModel model;
    model.kind = kind;
    model.antennas = cfg.antennas;
    model.rho = ctx.rho;
    model.sigma_e2 = ctx.sigma_e2;
    llr[k++] = llr_fusion(st, model, ctx.local);
  }

  if (ctx.with_benchmark) {
    SubstreamRng bn(seed, stream, RngStage::BenchmarkNoise);
    NoiseRealization be = sample_noise(ctx.spec_symbol, cfg.antennas, 1, bn);
    CMatrix yb = be.e;
    double amp = std::sqrt(ctx.rho);
    for (int m = 0; m < cfg.sensors; ++m) {
      double s = amp * frames[0].symbols[m];
      for (int n = 0; n < cfg.antennas; ++n) yb.at(n, 0) += ghat.at(n, m) * s;
    }
    FusionStatistic st = mrc_combine(yb, ghat);
    DetectionModel model;
    model.kind = DetectorKind::MatchedFilter;
    model.antennas = cfg.antennas;
    model.rho = ctx.rho;
    model.sigma_e2 = ctx.sigma_e2;
    llr[k++] = llr_fusion(st, model, ctx.local);
  }
}

// Static chunking over a preallocated slot array keeps the output
// independent of the worker count.
void run_point(const PointContext& ctx, long trials, int workers,
               std::vector<double>& slots, std::vector<char>& ok) {
  slots.assign(static_cast<size_t>(trials) * ctx.outputs, 0.0);
  ok.assign(trials, 1);

  auto body = [&](long lo, long hi) {
    for (long t = lo; t < hi; ++t) {
      try {
        run_trial(ctx, t, &slots[static_cast<size_t>(t) * ctx.outputs]);
      } catch (const std::exception&) {
        ok[t] = 0;
      }
    }
  };

  if (workers <= 1 || trials < 2 * workers) {
    body(0, trials);
    return;
  }
  std::vector<std::thread> pool;
  long chunk = (trials + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    long lo = w * chunk;
    long hi = std::min(trials, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(body, lo, hi);
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace

double effective_rho(const ScenarioConfig& cfg) {
  if (cfg.rho > 0.0) return cfg.rho;
  return 1.0 / std::sqrt(static_cast<double>(cfg.antennas));
}

NoiseModelSpec symbol_noise_spec(const ScenarioConfig& cfg, double snr_db) {
  NoiseModelSpec base;
  base.kind = cfg.noise_kind;
  base.gaussian_var = 1.0;
  base.gamma_ratio = cfg.gamma_ratio;
  base.impulse_index = cfg.impulse_index_a;
  base.bernoulli_rho = cfg.bernoulli_rho;
  base.occurrence_freq = cfg.occurrence_freq;
  base.p_impulse = cfg.p_imp;
  base.slots = cfg.sensors;

  double unit_combined = combined_variance(base);
  double mean_gain = mean_large_scale_gain(geometry_params(cfg), shadow_params(cfg));
  double target = effective_rho(cfg) * mean_gain / std::pow(10.0, snr_db / 10.0);
  return base.scaled(target / unit_combined);
}

CampaignResult run_campaign(const ScenarioConfig& cfg,
                            const ProgressSink& progress) {
  validate(cfg);
  for (DetectorKind k : cfg.detectors)
    if (k == DetectorKind::ZeroForcing && cfg.sensors > cfg.antennas)
      throw std::invalid_argument(
          "zero-forcing needs at least as many antennas as sensors per group");

  SamplingParams sp;
  sp.t0_seconds = cfg.t0_seconds;
  sp.osf = cfg.osf;

  PrototypeFilterPair filters = design_prototype_filters(
      cfg.filter_taps, cfg.filter_order, cfg.filter_bandwidth);
  WaveletPacketTree tree = build_packet_tree(filters, cfg.groups);

  std::vector<ScalingAssets> assets;
  assets.reserve(cfg.scalings.size());
  for (ScalingKind kind : cfg.scalings)
    assets.push_back(make_assets(cfg, tree, sp, kind));

  int workers = cfg.workers > 0
                    ? cfg.workers
                    : std::max(1u, std::thread::hardware_concurrency());
  double rho = effective_rho(cfg);
  int n_det = static_cast<int>(cfg.detectors.size());
  int n_points = static_cast<int>(cfg.snr_grid_db.size());
  long trials = cfg.trials_per_point;

  CampaignResult result;
  result.config = cfg;
  result.thresholds = threshold_grid(cfg.sensors, cfg.threshold_points);

  for (size_t ci = 0; ci < cfg.scalings.size(); ++ci) {
    for (DetectorKind k : cfg.detectors) {
      Curve c;
      c.scaling = to_string(cfg.scalings[ci]);
      c.detector = to_string(k);
      result.curves.push_back(std::move(c));
    }
  }
  int bench_curve = -1;
  if (cfg.include_benchmark) {
    Curve c;
    c.scaling = "none";
    c.detector = "benchmark";
    bench_curve = static_cast<int>(result.curves.size());
    result.curves.push_back(std::move(c));
  }

  std::vector<double> slots;
  std::vector<char> ok;
  for (size_t ci = 0; ci < cfg.scalings.size(); ++ci) {
    bool with_benchmark = cfg.include_benchmark && ci == 0;
    int outputs = n_det + (with_benchmark ? 1 : 0);
    for (int pi = 0; pi < n_points; ++pi) {
      auto t_begin = std::chrono::steady_clock::now();

      PointContext ctx;
      ctx.cfg = &cfg;
      ctx.tree = &tree;
      ctx.assets = &assets[ci];
      ctx.sp = sp;
      ctx.gp = geometry_params(cfg);
      ctx.shp = shadow_params(cfg);
      ctx.local.pd = cfg.local_pd;
      ctx.local.pf = cfg.local_pf;
      ctx.rho = rho;
      ctx.spec_symbol = symbol_noise_spec(cfg, cfg.snr_grid_db[pi]);
      ctx.spec_grid = ctx.spec_symbol.scaled(cfg.osf);
      ctx.sigma_e2 = combined_variance(ctx.spec_symbol);
      ctx.with_benchmark = with_benchmark;
      ctx.stream_base =
          (static_cast<std::uint64_t>(ci) * n_points + pi) * static_cast<std::uint64_t>(trials);
      ctx.outputs = outputs;

      run_point(ctx, trials, workers, slots, ok);

      long skipped = 0;
      for (long t = 0; t < trials; ++t)
        if (!ok[t]) ++skipped;
      if (skipped > 0) result.partial = true;

      for (int out = 0; out < outputs; ++out) {
        PointOutcome po;
        po.snr_db = cfg.snr_grid_db[pi];
        po.skipped_trials = skipped;
        for (long t = 0; t < trials; ++t) {
          if (!ok[t]) continue;
          double v = slots[static_cast<size_t>(t) * outputs + out];
          if (t % 2 == 1)
            po.llr_h1.push_back(v);
          else
            po.llr_h0.push_back(v);
        }
        if (po.llr_h1.empty() || po.llr_h0.empty())
          throw std::runtime_error("no usable trials at snr_db=" +
                                   std::to_string(cfg.snr_grid_db[pi]));
        po.roc = estimate_roc(po.llr_h1, po.llr_h0, result.thresholds);
        po.pfd = estimate_pfd(po.llr_h1, po.llr_h0, cfg.snr_grid_db[pi]);
        int target = out < n_det
                         ? static_cast<int>(ci) * n_det + out
                         : bench_curve;
        result.curves[target].points.push_back(std::move(po));
      }

      if (progress) {
        auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                t_begin);
        char line[160];
        std::snprintf(line, sizeof(line),
                      "%s snr=%g dB: %ld trials (%ld skipped) in %.1f s",
                      to_string(cfg.scalings[ci]).c_str(), cfg.snr_grid_db[pi],
                      trials, skipped, dt.count());
        progress(line);
      }
    }
  }

  Diagnostics& d = result.diagnostics;
  d.config_hash = config_hash(cfg);
  d.master_seed = cfg.master_seed;
  d.orthonormality_residual = max_orthonormality_residual(filters);
  d.leaf_cross_correlation = max_leaf_cross_correlation(tree);
  d.mean_gain_analytic =
      mean_large_scale_gain(geometry_params(cfg), shadow_params(cfg));
  NoiseModelSpec unit = symbol_noise_spec(cfg, cfg.snr_grid_db[0]);
  unit = unit.scaled(1.0 / unit.gaussian_var);
  d.noise_variance_target = mixture_mean_variance(unit);
  d.noise_calibration_draws = kCalibrationDraws;
  SubstreamRng cal(cfg.master_seed, 0, RngStage::Calibration);
  d.noise_variance_sample =
      monte_carlo_mixture_variance(unit, kCalibrationDraws, cal);
  for (const ScalingAssets& a : assets) {
    ScalingDiagnostics sd;
    sd.name = to_string(a.kind);
    sd.truncation_error = a.sf.truncation_error;
    sd.template_energy = a.template_energy;
    sd.gain_at_delta = a.sigma_hat;
    d.scalings.push_back(std::move(sd));
  }
  return result;
}

}  // namespace wpdm
