#pragma once

#include <cmath>

namespace gpclass {

// Standard normal CDF via the complementary error function.
double norm_cdf(double x);

// P(Z > x), stable in the upper tail.
double norm_sf(double x);

double norm_pdf(double x);

// Inverse standard normal CDF (Wichura's PPND16), |error| < 1e-15 for
// p in (1e-300, 1 - 1e-16).
double norm_ppf(double p);

// Scaled complementary error function exp(x^2) erfc(x); finite for all
// x >= 0 and for moderately negative x.
double erfcx(double x);

}  // namespace gpclass
