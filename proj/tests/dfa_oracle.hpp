#pragma once

#include <cmath>
#include <vector>

// Independent plain-DFA oracle: its own cumsum, closed-form per-segment
// linear regression on the raw 1..s abscissa, long double accumulators.
// Deliberately shares no code with the library path it checks.
inline double plain_dfa_f2(const std::vector<double>& x, int s) {
    const std::size_t n = x.size();
    long double mean = 0.0L;
    for (double v : x) mean += v;
    mean /= static_cast<long double>(n);
    std::vector<long double> y(n);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        acc += x[i] - mean;
        y[i] = acc;
    }
    const std::size_t segments = n / static_cast<std::size_t>(s);
    const long double sd = s;
    const long double sum_i = sd * (sd + 1.0L) / 2.0L;
    const long double sum_ii = sd * (sd + 1.0L) * (2.0L * sd + 1.0L) / 6.0L;
    long double total = 0.0L;
    for (std::size_t v = 0; v < segments; ++v) {
        long double sum_y = 0.0L, sum_iy = 0.0L;
        for (int i = 1; i <= s; ++i) {
            const long double yi =
                y[v * static_cast<std::size_t>(s) + static_cast<std::size_t>(i) - 1];
            sum_y += yi;
            sum_iy += static_cast<long double>(i) * yi;
        }
        const long double denom = sd * sum_ii - sum_i * sum_i;
        const long double slope = (sd * sum_iy - sum_i * sum_y) / denom;
        const long double intercept = (sum_y - slope * sum_i) / sd;
        long double rss = 0.0L;
        for (int i = 1; i <= s; ++i) {
            const long double yi =
                y[v * static_cast<std::size_t>(s) + static_cast<std::size_t>(i) - 1];
            const long double e = yi - (intercept + slope * static_cast<long double>(i));
            rss += e * e;
        }
        total += rss / sd;
    }
    return std::sqrt(static_cast<double>(total / static_cast<long double>(segments)));
}
