#pragma once

#include <vector>

#include "mfspeech/core.hpp"

namespace mfspeech {

enum class Method { Mfdfa, Wtmm };

const char* to_string(Method m);

// F_q(s) or Z(q,s): one row per q, one column per scale, all entries > 0.
struct SurfaceMatrix {
    QGrid qgrid;
    ScaleGrid scalegrid;
    std::vector<std::vector<double>> values;
};

// Generalized Hurst exponents h(q) with the r^2 of each log-log fit.
struct HurstSpectrum {
    QGrid qgrid;
    std::vector<double> h;
    std::vector<double> r2;
};

// Mass exponents tau(q) with the r^2 of each log-log fit.
struct ScalingExponents {
    QGrid qgrid;
    std::vector<double> tau;
    std::vector<double> r2;
};

struct SpectrumPoint {
    double q = 0.0;
    double tau = 0.0;
    double alpha = 0.0;   // singularity strength, tau'(q)
    double f = 0.0;       // q*alpha - tau(q)
    bool pruned = false;  // dropped from the monotone alpha branch
};

struct SingularitySpectrum {
    Method source = Method::Mfdfa;
    std::vector<SpectrumPoint> points;  // in q traversal order
    int pruned_count = 0;

    // Unpruned points, sorted by increasing alpha.
    std::vector<SpectrumPoint> survivors_by_alpha() const;

    // The unpruned point of maximum f: the raw spectrum maximum, unbiased by
    // any fit-window asymmetry.
    SpectrumPoint apex() const;
};

// Quadratic fit f = A(alpha - alpha0)^2 + B(alpha - alpha0) + C around the
// spectrum apex. The fit is computed as an unconstrained quadratic in alpha;
// alpha0/C are the vertex, so the centered linear term vanishes and B records
// the raw linear coefficient as an asymmetry diagnostic.
struct SpectrumFit {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double alpha0 = 0.0;
    double alpha1 = 0.0;  // low-alpha zero of the fitted parabola
    double alpha2 = 0.0;  // high-alpha zero
    double width = 0.0;   // alpha2 - alpha1
    double residual_rms = 0.0;
    int n_points_fit = 0;
};

struct SpectrumWidth {
    double width = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
};

// Everything one estimator produces for one signal.
struct MultifractalResult {
    Method method = Method::Mfdfa;
    SurfaceMatrix surface;
    HurstSpectrum hurst;  // MFDFA only; empty for WTMM
    ScalingExponents tau;
    SingularitySpectrum spectrum;
    SpectrumFit fit;
    // Per-scale modulus maxima make q < 0 statistics unstable; set for WTMM
    // results whose q grid dips below zero.
    bool negative_q_low_confidence = false;
};

// tau(q) = q h(q) - 1, pointwise.
ScalingExponents tau_from_h(const HurstSpectrum& hurst);

// Legendre transform: alpha = tau'(q) by finite differences (central inside,
// second-order one-sided at the ends), f = q alpha - tau. Points breaking the
// strictly-decreasing alpha branch are marked pruned; fewer than 3 survivors
// is a monofractal collapse.
SingularitySpectrum legendre(const ScalingExponents& tau);

// Least-squares quadratic over the apex neighbourhood (survivors with
// f >= 0.5, falling back to all survivors when fewer than 5 qualify).
// Roots/width are left unset; see spectrum_width.
SpectrumFit quadratic_fit(const SingularitySpectrum& spec);

// Real roots of the fitted parabola, ordered alpha1 < alpha2.
SpectrumWidth spectrum_width(const SpectrumFit& fit);

// Convenience: quadratic_fit + spectrum_width stored into one record.
SpectrumFit fit_spectrum(const SingularitySpectrum& spec);

// Trapezoidal area under the raw spectrum from the smallest alpha up to the
// alpha of maximum f (the lower-Holder branch).
double low_fluct_area(const SingularitySpectrum& spec);

}  // namespace mfspeech
