#pragma once

#include <utility>

#include "gpclass/rng.hpp"

namespace gpclass {

enum class Truncation { NegativeHalfLine, NonNegativeHalfLine };

// Draw from N(mu, s^2) restricted to (-inf, 0) or [0, inf).
double sample_tn(double mu, double s, Truncation t, Rng& rng);

// Closed-form truncated-normal mean and variance for the same supports.
std::pair<double, double> tn_moments(double mu, double s, Truncation t);

}  // namespace gpclass
