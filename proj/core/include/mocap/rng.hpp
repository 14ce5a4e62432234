#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace mocap {

/// Deterministic random source. Every distribution is built from raw
/// mt19937_64 draws so identical seeds give identical streams on every
/// platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1). Consumes exactly one engine draw.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Box-Muller. Consumes exactly two engine draws per call.
  double gaussian(double sigma) {
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  Eigen::Vector3d gaussian_vec3(double sigma) {
    const double x = gaussian(sigma);
    const double y = gaussian(sigma);
    const double z = gaussian(sigma);
    return {x, y, z};
  }

  /// Per-axis uniform in [-halfwidth, halfwidth].
  Eigen::Vector3d uniform_box(double halfwidth) {
    const double x = uniform(-halfwidth, halfwidth);
    const double y = uniform(-halfwidth, halfwidth);
    const double z = uniform(-halfwidth, halfwidth);
    return {x, y, z};
  }

  Eigen::Vector3d unit_vector() {
    while (true) {
      const Eigen::Vector3d v = gaussian_vec3(1.0);
      const double norm = v.norm();
      if (norm > 1e-12) {
        return v / norm;
      }
    }
  }

  /// Knuth's product-of-uniforms method; fine for the small means used here.
  int poisson(double mean) {
    if (mean <= 0.0) {
      return 0;
    }
    const double limit = std::exp(-mean);
    int count = -1;
    double product = 1.0;
    do {
      ++count;
      product *= uniform();
    } while (product > limit);
    return count;
  }

  /// Uniform integer in [0, bound). Fixed consumption of one draw.
  int uniform_int(int bound) {
    const auto wide = static_cast<unsigned __int128>(engine_()) *
                      static_cast<unsigned __int128>(bound);
    return static_cast<int>(wide >> 64);
  }

  template <class T>
  void shuffle(std::vector<T>& values) {
    for (int i = static_cast<int>(values.size()) - 1; i > 0; --i) {
      std::swap(values[i], values[uniform_int(i + 1)]);
    }
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 engine_;
};

} // namespace mocap
