#pragma once

// Counter-based splittable random streams (Philox-4x64-10) and standard
// Gaussian sampling. A stream is a value type: copying it and replaying
// produces the identical sequence, and streams with distinct
// (master_seed, stream_id) pairs are statistically independent.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gcl/gaussian.hpp"

namespace gcl {

namespace detail {

inline void mulhilo64(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                      std::uint64_t& lo) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kPhiloxW1 = 0xBB67AE8584CAA73BULL;

inline std::array<std::uint64_t, 4> philox4x64_10(
    std::array<std::uint64_t, 4> ctr, std::uint64_t k0, std::uint64_t k1) {
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo64(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo64(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return ctr;
}

}  // namespace detail

// A splittable counter-based stream. The 128-bit counter advances by one
// block per four 64-bit outputs; output is a pure function of
// (master_seed, stream_id, counter), hence independent of scheduling.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : master_seed_(master_seed), stream_id_(stream_id) {}

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() {
    if (buf_pos_ == 4) refill();
    return buf_[buf_pos_++];
  }

  // Uniform in (0, 1), never exactly 0 or 1.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  // Uniform in (-1, 1).
  double next_symmetric() { return 2.0 * next_uniform() - 1.0; }

  // Jump to an absolute 128-bit counter position (discards buffered output).
  void seek(std::uint64_t ctr_hi, std::uint64_t ctr_lo) {
    ctr_hi_ = ctr_hi;
    ctr_lo_ = ctr_lo;
    buf_pos_ = 4;
    have_spare_ = false;
  }

  // One standard Gaussian draw. Default is the Marsaglia polar rejection
  // method; define GCL_GAUSS_INVERSION to draw by quantile inversion
  // instead (portable sequence for cross-implementation comparison).
  double next_gaussian();

  void fill_gaussian(double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = next_gaussian();
  }

  std::vector<double> gaussian_vector(std::size_t n) {
    std::vector<double> v(n);
    fill_gaussian(v.data(), n);
    return v;
  }

 private:
  void refill() {
    buf_ = detail::philox4x64_10({ctr_lo_, ctr_hi_, 0, 0}, master_seed_,
                                 stream_id_);
    if (++ctr_lo_ == 0) ++ctr_hi_;
    buf_pos_ = 0;
  }

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t ctr_hi_ = 0;
  std::uint64_t ctr_lo_ = 0;
  std::array<std::uint64_t, 4> buf_{};
  int buf_pos_ = 4;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline double RngStream::next_gaussian() {
#ifdef GCL_GAUSS_INVERSION
  return std_normal_quantile(next_uniform());
#else
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = next_symmetric();
    v = next_symmetric();
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  have_spare_ = true;
  return u * m;
#endif
}

}  // namespace gcl
