#include "wpdm/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wpdm {

namespace {

void check_sampling(const SamplingParams& sp) {
  if (sp.osf < 2) throw std::invalid_argument("oversampling factor must be >= 2");
  if (!(sp.t0_seconds > 0.0)) throw std::invalid_argument("T0 must be positive");
}

}  // namespace

double symbol_interval(int level, double t0_seconds) {
  if (level < 0) throw std::invalid_argument("tree level must be nonnegative");
  return static_cast<double>(1 << level) * t0_seconds;
}

LeafWaveform make_leaf_waveform(const std::vector<double>& leaf_filter,
                                ScalingKind kind, double extent, int osf,
                                double delta) {
  if (leaf_filter.empty()) throw std::invalid_argument("empty leaf filter");
  double supp_min, supp_max;
  switch (kind) {
    case ScalingKind::Haar: supp_min = 0.0; supp_max = 1.0; break;
    case ScalingKind::Shannon: supp_min = -extent; supp_max = extent; break;
    case ScalingKind::Spline: supp_min = -1.0; supp_max = 1.0; break;
    default: throw std::invalid_argument("unknown scaling kind");
  }
  int taps = static_cast<int>(leaf_filter.size());
  double t_lo = supp_min + delta;
  double t_hi = supp_max + (taps - 1) + delta;

  LeafWaveform w;
  w.start = static_cast<int>(std::floor(t_lo * osf));
  int end = static_cast<int>(std::ceil(t_hi * osf)) + 1;
  w.samples.assign(end - w.start, 0.0);

  double dt = 1.0 / osf;
  for (size_t i = 0; i < w.samples.size(); ++i) {
    double t = (w.start + static_cast<int>(i)) * dt;
    double acc = 0.0;
    for (int q = 0; q < taps; ++q)
      acc += leaf_filter[q] * evaluate_scaling(kind, t - q - delta, extent);
    w.samples[i] = acc;
  }

  double energy = 0.0;
  for (double v : w.samples) energy += v * v;
  energy *= dt;
  if (!(energy > 0.0)) throw std::invalid_argument("degenerate leaf waveform");
  double scale = 1.0 / std::sqrt(energy);
  for (double& v : w.samples) v *= scale;
  return w;
}

EncodedFrame encode_group(const SensorDecisionFrame& frame,
                          const LeafWaveform& waveform, int leaf_shift,
                          SamplingParams sp) {
  check_sampling(sp);
  if (leaf_shift < 1) throw std::invalid_argument("leaf_shift must be positive");
  if (frame.symbols.empty()) throw std::invalid_argument("empty symbol frame");
  for (int s : frame.symbols)
    if (s != 1 && s != -1)
      throw std::invalid_argument("symbols must be +1 or -1");

  EncodedFrame out;
  out.group = frame.group;
  out.sampling = sp;
  out.waveform = waveform;
  out.slot_stride = leaf_shift * sp.osf;

  int m = static_cast<int>(frame.symbols.size());
  out.coded_symbols.resize(m);
  out.slot_offsets.resize(m);
  int wlen = static_cast<int>(out.waveform.samples.size());
  out.start = out.waveform.start;
  out.samples.assign((m - 1) * out.slot_stride + wlen, 0.0);
  for (int i = 0; i < m; ++i) {
    double x = static_cast<double>(frame.symbols[i]);
    out.coded_symbols[i] = x;
    out.slot_offsets[i] = out.waveform.start + i * out.slot_stride;
    int base = i * out.slot_stride;
    for (int j = 0; j < wlen; ++j)
      out.samples[base + j] += x * out.waveform.samples[j];
  }
  return out;
}

EncodedFrame encode_group(const SensorDecisionFrame& frame,
                          const WaveletPacketTree& tree,
                          const ScalingFunction& sf, SamplingParams sp) {
  if (frame.group < 0 ||
      frame.group >= static_cast<int>(tree.leaf_filters.size()))
    throw std::invalid_argument("group index outside the packet tree");
  LeafWaveform w = make_leaf_waveform(tree.leaf_filters[frame.group], sf.kind,
                                      sf.extent, sp.osf, 0.0);
  return encode_group(frame, w, tree.leaf_shift, sp);
}

MultiplexedSignal multiplex_groups(std::vector<EncodedFrame> frames) {
  if (frames.empty()) throw std::invalid_argument("no frames to multiplex");
  const SamplingParams& sp = frames.front().sampling;
  for (const EncodedFrame& f : frames) {
    if (f.sampling.osf != sp.osf ||
        std::abs(f.sampling.t0_seconds - sp.t0_seconds) > 1e-15)
      throw std::invalid_argument("mismatched sampling parameters across groups");
  }
  std::sort(frames.begin(), frames.end(),
            [](const EncodedFrame& a, const EncodedFrame& b) {
              return a.group < b.group;
            });
  for (size_t i = 1; i < frames.size(); ++i)
    if (frames[i].group == frames[i - 1].group)
      throw std::invalid_argument("duplicate group in multiplex");

  MultiplexedSignal mux;
  mux.sampling = sp;
  int lo = frames.front().start;
  int hi = frames.front().start + static_cast<int>(frames.front().samples.size());
  for (const EncodedFrame& f : frames) {
    lo = std::min(lo, f.start);
    hi = std::max(hi, f.start + static_cast<int>(f.samples.size()));
  }
  mux.start = lo;
  mux.length = hi - lo;
  mux.samples.assign(mux.length, 0.0);
  for (const EncodedFrame& f : frames) {
    int base = f.start - lo;
    for (size_t j = 0; j < f.samples.size(); ++j)
      mux.samples[base + j] += f.samples[j];
  }
  mux.frames = std::move(frames);
  return mux;
}

ReconstructionBank make_reconstruction_bank(const WaveletPacketTree& tree,
                                            const ScalingFunction& sf,
                                            SamplingParams sp, int sensors,
                                            int groups, double delta,
                                            bool decorrelate) {
  check_sampling(sp);
  if (sensors < 1) throw std::invalid_argument("sensor count must be >= 1");
  if (groups < 1 || groups > static_cast<int>(tree.leaf_filters.size()))
    throw std::invalid_argument("group count outside the packet tree");

  ReconstructionBank bank;
  bank.groups = groups;
  bank.sensors = sensors;
  bank.slot_stride = tree.leaf_shift * sp.osf;
  bank.dt = 1.0 / sp.osf;
  bank.decorrelate = decorrelate;
  bank.templates.reserve(groups);
  for (int z = 0; z < groups; ++z)
    bank.templates.push_back(make_leaf_waveform(tree.leaf_filters[z], sf.kind,
                                                sf.extent, sp.osf, delta));

  int lo = bank.templates.front().start;
  int hi = lo;
  for (const LeafWaveform& w : bank.templates) {
    lo = std::min(lo, w.start);
    hi = std::max(hi, w.start + static_cast<int>(w.samples.size()));
  }
  bank.frame_start = lo;
  bank.frame_length = (sensors - 1) * bank.slot_stride + (hi - lo);

  if (decorrelate) {
    int dim = groups * sensors;
    std::vector<double> gram(static_cast<size_t>(dim) * dim, 0.0);
    for (int z1 = 0; z1 < groups; ++z1) {
      const LeafWaveform& w1 = bank.templates[z1];
      for (int z2 = 0; z2 < groups; ++z2) {
        const LeafWaveform& w2 = bank.templates[z2];
        for (int m1 = 0; m1 < sensors; ++m1) {
          for (int m2 = 0; m2 < sensors; ++m2) {
            // <w1(. - m1*stride), w2(. - m2*stride)> on the shared grid.
            int shift = (w2.start + m2 * bank.slot_stride) -
                        (w1.start + m1 * bank.slot_stride);
            double acc = 0.0;
            int n1 = static_cast<int>(w1.samples.size());
            int n2 = static_cast<int>(w2.samples.size());
            int j0 = std::max(0, shift);
            int j1 = std::min(n1, n2 + shift);
            for (int j = j0; j < j1; ++j) acc += w1.samples[j] * w2.samples[j - shift];
            gram[static_cast<size_t>(z1 * sensors + m1) * dim + z2 * sensors + m2] =
                acc * bank.dt;
          }
        }
      }
    }
    bank.gram = CholeskyReal(gram, dim);
  }
  return bank;
}

std::vector<RecoveredFrame> reconstruct(const CMatrix& received,
                                        const ReconstructionBank& bank,
                                        int received_start) {
  int max_template = 0;
  for (const LeafWaveform& w : bank.templates)
    max_template = std::max(max_template, static_cast<int>(w.samples.size()));
  if (received.cols < max_template)
    throw std::invalid_argument("received frame shorter than the filter support");
  int n = received.rows;
  int dim = bank.groups * bank.sensors;

  std::vector<RecoveredFrame> out(bank.groups);
  for (int z = 0; z < bank.groups; ++z) {
    out[z].group = z;
    out[z].antenna_statistics = CMatrix(n, bank.sensors);
    out[z].r.assign(bank.sensors, 0.0);
  }

  std::vector<cplx> row(dim);
  for (int ant = 0; ant < n; ++ant) {
    const cplx* y = &received.a[static_cast<size_t>(ant) * received.cols];
    for (int z = 0; z < bank.groups; ++z) {
      const LeafWaveform& w = bank.templates[z];
      int wlen = static_cast<int>(w.samples.size());
      for (int m = 0; m < bank.sensors; ++m) {
        int base = (w.start + m * bank.slot_stride) - received_start;
        int j0 = std::max(0, -base);
        int j1 = std::min(wlen, received.cols - base);
        cplx acc(0.0, 0.0);
        for (int j = j0; j < j1; ++j) acc += y[base + j] * w.samples[j];
        row[z * bank.sensors + m] = acc * bank.dt;
      }
    }
    if (bank.decorrelate) bank.gram.solve(row);
    for (int z = 0; z < bank.groups; ++z)
      for (int m = 0; m < bank.sensors; ++m)
        out[z].antenna_statistics.at(ant, m) = row[z * bank.sensors + m];
  }

  for (int z = 0; z < bank.groups; ++z) {
    for (int m = 0; m < bank.sensors; ++m) {
      double acc = 0.0;
      for (int ant = 0; ant < n; ++ant)
        acc += out[z].antenna_statistics.at(ant, m).real();
      out[z].r[m] = acc / n;
    }
  }
  return out;
}

std::vector<RecoveredFrame> reconstruct(const CMatrix& received,
                                        const MultiplexedSignal& mux,
                                        const WaveletPacketTree& tree,
                                        const ScalingFunction& sf, double delta,
                                        bool decorrelate) {
  if (mux.frames.empty()) throw std::invalid_argument("empty multiplex");
  int sensors = static_cast<int>(mux.frames.front().coded_symbols.size());
  ReconstructionBank bank =
      make_reconstruction_bank(tree, sf, mux.sampling, sensors,
                               static_cast<int>(mux.frames.size()), delta,
                               decorrelate);
  if (received.cols != mux.length)
    throw std::invalid_argument("received frame length does not match the multiplex grid");
  return reconstruct(received, bank, mux.start);
}

double template_gain(const ReconstructionBank& bank, const EncodedFrame& frame) {
  if (frame.group < 0 || frame.group >= bank.groups)
    throw std::invalid_argument("frame group outside the bank");
  const LeafWaveform& rx = bank.templates[frame.group];
  const LeafWaveform& tx = frame.waveform;
  int shift = tx.start - rx.start;
  double acc = 0.0;
  int n1 = static_cast<int>(rx.samples.size());
  int n2 = static_cast<int>(tx.samples.size());
  int j0 = std::max(0, shift);
  int j1 = std::min(n1, n2 + shift);
  for (int j = j0; j < j1; ++j) acc += rx.samples[j] * tx.samples[j - shift];
  return acc * bank.dt;
}

}  // namespace wpdm
