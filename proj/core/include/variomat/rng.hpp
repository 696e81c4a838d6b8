#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace variomat {

/// Deterministic stream of uniform and normal variates from an explicit
/// 64-bit seed. The engine sequence is pinned by the standard and the
/// variate transforms are spelled out here, so equal seeds reproduce
/// byte-identical streams on a given build.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [-1, 1).
  double uniform_symmetric() { return 2.0 * uniform() - 1.0; }

  /// Standard normal via the Box-Muller transform; one spare is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  static constexpr double kTwoPi = 6.283185307179586476925286766559;

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace variomat
