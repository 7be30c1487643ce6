#pragma once

#include <cmath>
#include <cstdint>

namespace fcpd {

// splitmix64 output function. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// Counter-based generator: the state advances along a Weyl sequence and
// each output is mix64 of the counter, so a stream is fully determined
// by (seed, stream ids). Replications get disjoint streams regardless
// of the number of workers, which keeps Monte Carlo runs bitwise
// reproducible under any scheduling.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream0 = 0,
                      std::uint64_t stream1 = 0, std::uint64_t stream2 = 0) {
    state_ = mix64(seed + kGolden);
    state_ = mix64(state_ ^ mix64(stream0 + kGolden));
    state_ = mix64(state_ ^ mix64(stream1 + 2 * kGolden));
    state_ = mix64(state_ ^ mix64(stream2 + 3 * kGolden));
  }

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via the trigonometric Box-Muller transform; consumes
  // exactly two uniforms per pair, caching the second deviate.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 =
        static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  // Student's t with 3 degrees of freedom: Z / sqrt(chi2_3 / 3).
  double student_t3() {
    const double z = normal();
    const double a = normal();
    const double b = normal();
    const double c = normal();
    const double chi2 = a * a + b * b + c * c;
    return z / std::sqrt(chi2 / 3.0);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr double kPi = 3.14159265358979323846;

  std::uint64_t state_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace fcpd
