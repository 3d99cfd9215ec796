#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace wpdm {

// Philox 4x32-10 counter-based block cipher (Salmon et al. constants).
// Stateless: output is a pure function of (key, counter), which is what makes
// per-trial substreams independent of worker scheduling.
struct Philox4x32 {
  using Counter = std::array<uint32_t, 4>;
  using Key = std::array<uint32_t, 2>;

  static constexpr uint32_t kW32A = 0x9E3779B9u;
  static constexpr uint32_t kW32B = 0xBB67AE85u;
  static constexpr uint32_t kM4x32A = 0xD2511F53u;
  static constexpr uint32_t kM4x32B = 0xCD9E8D57u;

  static inline uint32_t mulhi(uint32_t a, uint32_t b, uint32_t* lo) {
    uint64_t p = static_cast<uint64_t>(a) * b;
    *lo = static_cast<uint32_t>(p);
    return static_cast<uint32_t>(p >> 32);
  }

  static Counter round10(Counter c, Key k) {
    for (int r = 0; r < 10; ++r) {
      uint32_t lo0, lo1;
      uint32_t hi0 = mulhi(kM4x32A, c[0], &lo0);
      uint32_t hi1 = mulhi(kM4x32B, c[2], &lo1);
      c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
      k[0] += kW32A;
      k[1] += kW32B;
    }
    return c;
  }
};

// Stage tags keep draws for different purposes in disjoint substreams so that
// adding draws to one stage never perturbs another.
enum class RngStage : uint32_t {
  Hypothesis = 1,
  LocalDecisions = 2,
  Geometry = 3,
  Shadowing = 4,
  Fading = 5,
  Noise = 6,
  BenchmarkNoise = 7,
  Calibration = 8,
};

// Deterministic substream keyed by (seed, stream id, stage). Each instance
// walks its own 64-bit block counter; identical keys reproduce identical
// sequences on any thread.
class SubstreamRng {
 public:
  SubstreamRng(uint64_t seed, uint64_t stream, uint32_t stage)
      : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
        prefix_{static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)},
        stage_(stage) {}

  SubstreamRng(uint64_t seed, uint64_t stream, RngStage stage)
      : SubstreamRng(seed, stream, static_cast<uint32_t>(stage)) {}

  uint32_t next_u32() {
    if (have_ == 0) refill();
    return buf_[--have_];
  }

  uint64_t next_u64() {
    uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via the Marsaglia polar method (no trig in the hot path).
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  // Circularly symmetric complex normal with E|z|^2 = 1.
  std::complex<double> next_cnormal() {
    constexpr double half = 0.70710678118654752440;
    double re = next_gaussian() * half;
    double im = next_gaussian() * half;
    return {re, im};
  }

  // Poisson(a) conditioned on the outcome being >= 1, by inverse CDF over the
  // conditional pmf. Intended for small a where the search terminates fast.
  uint32_t next_poisson_ge1(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("poisson rate must be positive");
    double denom = -std::expm1(-a);  // 1 - e^-a
    double u = next_double() * denom;
    double term = std::exp(-a) * a;  // pmf at k = 1
    uint32_t k = 1;
    double cum = term;
    while (u > cum && k < 1000000) {
      ++k;
      term *= a / k;
      cum += term;
    }
    return k;
  }

 private:
  void refill() {
    Philox4x32::Counter ctr = {prefix_[0], prefix_[1], stage_,
                               static_cast<uint32_t>(block_)};
    // Mix the high block bits into the stage word so the counter never repeats
    // within a substream even past 2^32 blocks.
    ctr[2] ^= static_cast<uint32_t>(block_ >> 32) * 0x85EBCA6Bu;
    Philox4x32::Counter out = Philox4x32::round10(ctr, key_);
    buf_ = out;
    have_ = 4;
    ++block_;
  }

  Philox4x32::Key key_;
  std::array<uint32_t, 2> prefix_;
  uint32_t stage_;
  uint64_t block_ = 0;
  Philox4x32::Counter buf_{};
  int have_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace wpdm
