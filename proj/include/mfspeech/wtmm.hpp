#pragma once

#include "mfspeech/core.hpp"
#include "mfspeech/spectrum.hpp"

namespace mfspeech {

// Truncate: positions whose kernel support leaves the signal are dropped
// (right for open-ended signals such as speech). Periodic: the signal is
// treated as circular, every position is valid; exact whenever the series
// wraps seamlessly (a mean-removed profile always does).
enum class CwtBoundary { Truncate, Periodic };

struct WtmmConfig {
    int wavelet_order = 2;    // m-th Gaussian derivative; kills trends up to order m-1
    double half_width = 5.0;  // kernel truncation at |t| = half_width (tail < 4e-6)
    int scale_min = 4;
    int scale_max = 0;  // 0 = N/16
    int scale_count = 24;
    double q_min = -2.0;
    double q_max = 5.0;
    double q_step = 0.25;
    bool use_fft = false;  // direct summation by default; FFT agrees to 1e-8
    CwtBoundary boundary = CwtBoundary::Truncate;
};

// Transform coefficients per scale: row si holds W(n, s) for
// n in [first_position[si], first_position[si] + row size). Periodic fields
// cover every position with first_position 0.
struct WaveletField {
    ScaleGrid scalegrid;
    int wavelet_order = 2;
    bool periodic = false;
    std::vector<std::size_t> first_position;
    std::vector<std::vector<double>> coeffs;
};

struct PartitionFunction {
    QGrid qgrid;
    ScaleGrid scalegrid;
    std::vector<std::vector<double>> z;  // [q][scale]
    std::vector<std::size_t> maxima_counts;
};

// Samples of the m-th derivative of exp(-t^2/2) at t = k/s,
// k = -floor(half_width*s) .. +floor(half_width*s).
std::vector<double> gaussian_derivative_wavelet(int m, int s, double half_width = 5.0);

// W(n, s) = (1/s) sum_k x_k psi((k-n)/s) at every position whose kernel
// support lies fully inside the signal; edges are excluded, never padded.
// Periodic boundary wraps instead and keeps all positions.
WaveletField cwt(const TimeSeries& x, const ScaleGrid& scales, int m, double half_width = 5.0,
                 bool use_fft = false, CwtBoundary boundary = CwtBoundary::Truncate);

// 0-based sample positions of the local maxima of |W(n, s)| at one scale;
// plateau ties resolve to the leftmost point. Row boundary samples never
// qualify in truncate mode; periodic rows compare circular neighbours.
std::vector<std::size_t> modulus_maxima(const WaveletField& field, std::size_t scale_index);

// Z(q, s) = sum over maxima of |W(n_i, s)|^q.
PartitionFunction partition_function(const WaveletField& field, const QGrid& qs);

// tau(q): slope of ln Z(q, s) vs ln s.
ScalingExponents wtmm_scaling_exponents(const PartitionFunction& z);

// Full pipeline on the signal's profile: cwt -> maxima -> Z -> tau ->
// spectrum -> fit. The profile keeps both estimators on one tau convention.
MultifractalResult wtmm_analyze(const TimeSeries& x, const WtmmConfig& cfg = {});

}  // namespace mfspeech
