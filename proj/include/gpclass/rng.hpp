#pragma once

#include <cstdint>
#include <random>

#include "gpclass/normal.hpp"

namespace gpclass {

// Deterministic random stream. Transforms are implemented here rather than
// with std distributions, whose algorithms vary across standard libraries;
// byte-identical output across platforms is part of the output contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), base_(seed) {}

  std::uint64_t raw() { return engine_(); }

  // [0, 1), 53-bit resolution
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // (0, 1)
  double uniform_open() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  double normal() { return norm_ppf(uniform_open()); }

  double exponential() { return -std::log(uniform_open()); }

  // Marsaglia-Tsang; shape < 1 handled by the boost relation
  double gamma(double shape) {
    if (shape < 1.0) {
      double u = uniform_open();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_open();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // inverse-gamma(shape, scale): 1/X ~ gamma(shape, rate=scale)
  double inverse_gamma(double shape, double scale) {
    return scale / gamma(shape);
  }

  // Independent child stream; depends only on the construction seed and the
  // stream id, not on how much this stream has been consumed.
  Rng fork(std::uint64_t stream) const {
    std::uint64_t s = base_ + 0x9e3779b97f4a7c15ULL * (stream + 1);
    return Rng(splitmix64(s));
  }

  static std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t base_;
};

}  // namespace gpclass
