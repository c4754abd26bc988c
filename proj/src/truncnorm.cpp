#include "gpclass/truncnorm.hpp"

#include <cmath>

#include "gpclass/errors.hpp"
#include "gpclass/normal.hpp"

namespace gpclass {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2OverPi = 0.7978845608028654;

// Standard normal truncated to [alpha, inf).
double sample_lower_tail_std(double alpha, Rng& rng) {
  if (alpha <= 4.0) {
    // inverse CDF on the surviving tail mass
    const double q = norm_sf(alpha);
    double z;
    do {
      z = -norm_ppf(rng.uniform_open() * q);
    } while (z < alpha);
    return z;
  }
  // Robert (1995) translated-exponential rejection
  const double astar = 0.5 * (alpha + std::sqrt(alpha * alpha + 4.0));
  for (;;) {
    const double z = alpha + rng.exponential() / astar;
    const double d = z - astar;
    if (std::log(rng.uniform_open()) <= -0.5 * d * d) return z;
  }
}

}  // namespace

double sample_tn(double mu, double s, Truncation t, Rng& rng) {
  if (!(s > 0.0)) throw NonPositiveScale();
  if (t == Truncation::NonNegativeHalfLine) {
    const double alpha = -mu / s;
    double x = mu + s * sample_lower_tail_std(alpha, rng);
    return x < 0.0 ? 0.0 : x;
  }
  // reflect: -eta ~ N(-mu, s^2) on (0, inf); support here is open at 0
  for (;;) {
    const double alpha = mu / s;
    const double y = -mu + s * sample_lower_tail_std(alpha, rng);
    if (y > 0.0) return -y;
  }
}

std::pair<double, double> tn_moments(double mu, double s, Truncation t) {
  if (!(s > 0.0)) throw NonPositiveScale();
  if (t == Truncation::NegativeHalfLine) {
    auto [m, v] = tn_moments(-mu, s, Truncation::NonNegativeHalfLine);
    return {-m, v};
  }
  const double alpha = -mu / s;
  // lambda = phi(alpha)/Phi_c(alpha), via the scaled complement erfcx
  const double lambda = kSqrt2OverPi / erfcx(alpha / kSqrt2);
  const double mean = mu + s * lambda;
  double ratio = 1.0 + alpha * lambda - lambda * lambda;
  if (!(ratio > 0.0) || ratio < 1e-12) {
    // deep-tail cancellation; leading asymptotic term
    ratio = 1.0 / (alpha * alpha);
  }
  return {mean, s * s * ratio};
}

}  // namespace gpclass
