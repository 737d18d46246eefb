#include "tracelab/rng.hpp"

#include <cmath>
#include <numbers>

namespace tracelab {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t derive_trial_seed(std::uint64_t master, std::string_view tag, std::uint64_t index) {
  return mix64(mix64(master ^ fnv1a64(tag)) + (index + 1) * kGolden);
}

std::uint64_t CounterRng::next_u64() { return mix64(seed_ + (++counter_) * kGolden); }

double CounterRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
  const double u1 = 1.0 - next_unit();  // (0, 1], keeps the log finite
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> CounterRng::next_complex_gaussian() {
  const double re = next_gaussian();
  const double im = next_gaussian();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

int CounterRng::uniform_int(int lo, int hi) {
  const double u = next_unit();
  const int span = hi - lo + 1;
  const int k = lo + static_cast<int>(u * span);
  return k > hi ? hi : k;
}

double CounterRng::uniform(double lo, double hi) { return lo + next_unit() * (hi - lo); }

}  // namespace tracelab
