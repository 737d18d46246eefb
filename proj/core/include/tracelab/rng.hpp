#pragma once

// Counter-based deterministic random stream, replayable from (seed, counter)
// alone so campaigns can be reproduced across processes and languages.
//
// Bitstream contract (version "splitmix64-boxmuller/1"):
//   raw output i (0-based) = mix64(seed + (i+1) * 0x9E3779B97F4A7C15)
//   where mix64 is the splitmix64 finalizer
//     z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9;
//     z ^= z >> 27;  z *= 0x94D049BB133111EB;
//     z ^= z >> 31;
//   next_unit()     = (raw >> 11) * 2^-53, one raw word, in [0, 1)
//   next_gaussian() = sqrt(-2 ln(1 - u1)) * cos(2 pi u2), two raw words
//                     (the Box-Muller sine mate is discarded)
//   next_complex_gaussian() = (g1 + i g2) / sqrt(2), four raw words
//   uniform_int(lo, hi)     = lo + floor(u * (hi - lo + 1)), one raw word
//
// Per-trial seeds are derived as
//   trial_seed(master, tag, index) = mix64(mix64(master ^ fnv1a64(tag))
//                                          + (index+1) * 0x9E3779B97F4A7C15)
// and checked pairwise distinct within a campaign.

#include <complex>
#include <cstdint>
#include <string_view>

namespace tracelab {

inline constexpr const char* kRngVersion = "splitmix64-boxmuller/1";

std::uint64_t mix64(std::uint64_t z);
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t derive_trial_seed(std::uint64_t master, std::string_view tag, std::uint64_t index);

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  double next_unit();                           // [0, 1)
  double next_gaussian();                       // N(0, 1)
  std::complex<double> next_complex_gaussian(); // CN(0, 1)
  int uniform_int(int lo, int hi);              // inclusive
  double uniform(double lo, double hi);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace tracelab
