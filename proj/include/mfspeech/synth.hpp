#pragma once

#include <cstdint>

#include "mfspeech/core.hpp"

namespace mfspeech {

// Deterministic binomial multiplicative cascade of length 2^levels.
struct CascadeSpec {
    double a = 0.75;  // multiplier, 0.5 <= a < 1
    int levels = 16;  // series length 2^levels
};

// Sample k (1-based) carries a^(levels - n1) * (1-a)^n1 where n1 is the
// number of 1-bits of k-1, so the series starts at a^levels and the values
// sum to (a + (1-a))^levels = 1.
TimeSeries binomial_cascade(const CascadeSpec& spec);

// Closed-form generalized Hurst exponent of the binomial cascade:
// h(q) = 1/q - ln(a^q + (1-a)^q) / (q ln 2). Throws QZero at q == 0.
double analytic_cascade_h(double a, double q);

// i.i.d. standard Gaussian samples, deterministic per seed.
TimeSeries white_noise(std::size_t n, std::uint64_t seed);

// Fractional Gaussian noise by circulant embedding (Davies-Harte).
// n must be a power of two, 0 < hurst < 1. Deterministic per seed.
TimeSeries fgn(std::size_t n, double hurst, std::uint64_t seed);

// Exact autocovariance of fGn at lag k (unit variance).
double fgn_autocovariance(double hurst, std::size_t lag);

// Seeded Fisher-Yates permutation of the samples; value multiset preserved.
TimeSeries shuffle(const TimeSeries& x, std::uint64_t seed);

}  // namespace mfspeech
