#pragma once

#include "mfspeech/core.hpp"
#include "mfspeech/spectrum.hpp"

namespace mfspeech {

// Cumulative sum of the mean-removed signal (Eq. numbering follows the
// classic five-step procedure: profile, segmentation, local detrended
// variance, q-order moments, log-log scaling).
struct Profile {
    std::vector<double> values;
};

struct MfdfaConfig {
    int detrend_order = 1;   // polynomial order removed per window, 0..3
    bool bidirectional = false;  // add a second segmentation pass from the tail
    int scale_min = 16;
    int scale_max = 0;  // 0 = N/4
    int scale_count = 20;
    double q_min = -5.0;
    double q_max = 5.0;
    double q_step = 0.25;
};

Profile profile(const TimeSeries& x);

// floor(N / s)
std::size_t segment_count(std::size_t n, int s);

// Mean squared residual of segment v (1-based) of size s after removing the
// least-squares polynomial of the given order.
double local_fluctuation(const Profile& p, int s, std::size_t v, int order);

// q-order fluctuation function over the grids; q = 0 uses the logarithmic
// mean. Throws ZeroLocalFluctuation when a zero local variance meets a
// non-positive q.
SurfaceMatrix fluctuation_function(const Profile& p, const ScaleGrid& scales, const QGrid& qs,
                                   int order, bool bidirectional = false);

// h(q): slope of ln F_q(s) vs ln s per q.
HurstSpectrum hurst_exponents(const SurfaceMatrix& surface);

// Full pipeline: profile -> surface -> h(q) -> tau -> spectrum -> fit.
MultifractalResult mfdfa_analyze(const TimeSeries& x, const MfdfaConfig& cfg = {});

}  // namespace mfspeech
