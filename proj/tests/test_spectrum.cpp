#include <doctest.h>

#include <cmath>

#include "mfspeech/rng.hpp"
#include "mfspeech/spectrum.hpp"
#include "mfspeech/synth.hpp"

using namespace mfspeech;

namespace {

ScalingExponents tau_on_grid(double q_min, double q_max, double step,
                             double (*fn)(double)) {
    ScalingExponents tau;
    tau.qgrid = uniform_qgrid(q_min, q_max, step);
    for (double q : tau.qgrid.qs) {
        tau.tau.push_back(fn(q));
        tau.r2.push_back(1.0);
    }
    return tau;
}

SingularitySpectrum spectrum_from_parabola(double A, double alpha0, double C, int n_points,
                                           double alpha_lo, double alpha_hi) {
    SingularitySpectrum spec;
    for (int i = 0; i < n_points; ++i) {
        SpectrumPoint p;
        p.alpha = alpha_hi - (alpha_hi - alpha_lo) * i / (n_points - 1);  // decreasing
        p.f = A * (p.alpha - alpha0) * (p.alpha - alpha0) + C;
        p.q = i;  // bookkeeping only
        spec.points.push_back(p);
    }
    return spec;
}

}  // namespace

TEST_CASE("tau from h: monofractal line") {
    HurstSpectrum h;
    h.qgrid = uniform_qgrid(-2.0, 2.0, 0.5);
    h.h.assign(h.qgrid.qs.size(), 0.5);
    h.r2.assign(h.qgrid.qs.size(), 1.0);
    const ScalingExponents tau = tau_from_h(h);
    for (std::size_t i = 0; i < tau.qgrid.qs.size(); ++i) {
        const double q = tau.qgrid.qs[i];
        CHECK(tau.tau[i] == 0.5 * q - 1.0);
        if (q == 0.0) CHECK(tau.tau[i] == -1.0);
        if (q == 2.0) CHECK(tau.tau[i] == 0.0);
    }
}

TEST_CASE("tau(0) = -1 exactly whenever 0 is on the grid") {
    HurstSpectrum h;
    h.qgrid = uniform_qgrid(-3.0, 3.0, 0.25);
    Rng rng(9);
    for (std::size_t i = 0; i < h.qgrid.qs.size(); ++i) {
        h.h.push_back(1.0 + 0.3 * rng.next_double());
        h.r2.push_back(1.0);
    }
    const ScalingExponents tau = tau_from_h(h);
    for (std::size_t i = 0; i < tau.qgrid.qs.size(); ++i)
        if (tau.qgrid.qs[i] == 0.0) CHECK(tau.tau[i] == -1.0);
}

TEST_CASE("tau from the cascade closed form at q = 1") {
    // h(1) = 1 for every valid a because the multipliers sum to one
    const double h1 = analytic_cascade_h(0.75, 1.0);
    CHECK(h1 * 1.0 - 1.0 == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("legendre of a linear tau collapses as monofractal") {
    const ScalingExponents tau =
        tau_on_grid(-2.0, 2.0, 0.25, [](double q) { return 0.5 * q - 1.0; });
    CHECK_THROWS_WITH_AS(legendre(tau), doctest::Contains("DegenerateSpectrum"), Error);
}

TEST_CASE("legendre of a quadratic tau is exact including the endpoints") {
    const ScalingExponents tau = tau_on_grid(
        -2.0, 2.0, 0.25, [](double q) { return -0.1 * q * q + 0.8 * q - 1.0; });
    const SingularitySpectrum spec = legendre(tau);
    CHECK(spec.pruned_count == 0);
    for (const auto& p : spec.points) {
        const double alpha_expected = -0.2 * p.q + 0.8;
        CHECK(p.alpha == doctest::Approx(alpha_expected).epsilon(1e-12));
        const double f_expected = 1.0 - (p.alpha - 0.8) * (p.alpha - 0.8) / 0.4;
        CHECK(p.f == doctest::Approx(f_expected).epsilon(1e-11));
        CHECK(!p.pruned);
    }
}

TEST_CASE("legendre round-trip identity holds exactly on every emitted point") {
    const ScalingExponents tau = tau_on_grid(
        -2.0, 5.0, 0.25, [](double q) {
            return -std::log2(std::pow(0.75, q) + std::pow(0.25, q));
        });
    const SingularitySpectrum spec = legendre(tau);
    for (std::size_t i = 0; i < spec.points.size(); ++i) {
        const SpectrumPoint& p = spec.points[i];
        CHECK(p.f == p.q * p.alpha - p.tau);  // constructional, bitwise
        CHECK(p.tau == tau.tau[i]);
    }
}

TEST_CASE("legendre of the exact cascade tau localizes apex and information point") {
    const ScalingExponents tau = tau_on_grid(
        -2.0, 5.0, 0.25, [](double q) {
            return -std::log2(std::pow(0.75, q) + std::pow(0.25, q));
        });
    const SingularitySpectrum spec = legendre(tau);
    // apex at tau'(0) = -(ln a + ln b)/(2 ln 2), f = 1
    CHECK(spec.apex().alpha == doctest::Approx(1.2075187496).epsilon(0.02));
    CHECK(spec.apex().f == doctest::Approx(1.0).epsilon(0.01));
    // the q = 1 point: alpha = entropy value, f(alpha) = alpha
    for (const auto& p : spec.points)
        if (p.q == 1.0) {
            CHECK(p.alpha == doctest::Approx(0.8112781245).epsilon(0.01));
            CHECK(p.f == doctest::Approx(p.alpha).epsilon(1e-9));
        }
    // alpha strictly decreasing along the surviving branch
    double prev = 1e300;
    for (const auto& p : spec.points)
        if (!p.pruned) {
            CHECK(p.alpha < prev);
            prev = p.alpha;
        }
}

TEST_CASE("pruning drops outliers and counts them") {
    ScalingExponents tau = tau_on_grid(
        -2.0, 2.0, 0.25, [](double q) { return -0.1 * q * q + 0.8 * q - 1.0; });
    tau.tau[7] += 0.05;  // dent the curve -> local alpha inversion
    const SingularitySpectrum spec = legendre(tau);
    CHECK(spec.pruned_count > 0);
    CHECK(spec.pruned_count <= 3);
    double prev = 1e300;
    for (const auto& p : spec.points)
        if (!p.pruned) {
            CHECK(p.alpha < prev);
            prev = p.alpha;
        }
}

TEST_CASE("quadratic fit recovers an exact parabola") {
    const SingularitySpectrum spec = spectrum_from_parabola(-1.0, 0.5, 1.0, 11, -0.3, 1.3);
    const SpectrumFit fit = fit_spectrum(spec);
    CHECK(fit.A == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(fit.alpha0 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(fit.C == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.alpha1 == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(fit.alpha2 == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(fit.width == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fit.residual_rms < 1e-9);
    CHECK(fit.B == doctest::Approx(2.0 * 0.5).epsilon(1e-8));  // raw linear coefficient -2A*alpha0
}

TEST_CASE("quadratic fit recovery property on random downward parabolas") {
    Rng rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        const double A = -0.2 - 2.8 * rng.next_double();
        const double alpha0 = 0.3 + 1.2 * rng.next_double();
        const double C = 0.5 + rng.next_double();
        const SingularitySpectrum spec =
            spectrum_from_parabola(A, alpha0, C, 9, alpha0 - 0.6, alpha0 + 0.45);
        const SpectrumFit fit = quadratic_fit(spec);
        CHECK(fit.A == doctest::Approx(A).epsilon(1e-9));
        CHECK(fit.alpha0 == doctest::Approx(alpha0).epsilon(1e-9));
        CHECK(fit.C == doctest::Approx(C).epsilon(1e-9));
    }
}

TEST_CASE("degenerate fits are diagnosed") {
    {
        SingularitySpectrum spec;
        for (int i = 0; i < 3; ++i) {
            SpectrumPoint p;
            p.alpha = 2.0 - 0.5 * i;
            p.f = 0.25 * p.alpha + 0.1;
            spec.points.push_back(p);
        }
        CHECK_THROWS_WITH_AS(quadratic_fit(spec), doctest::Contains("CollinearPoints"), Error);
    }
    {
        const SingularitySpectrum spec = spectrum_from_parabola(+0.8, 0.5, 0.2, 9, -0.5, 1.4);
        CHECK_THROWS_WITH_AS(quadratic_fit(spec), doctest::Contains("UpwardParabola"), Error);
    }
    {
        SpectrumFit fit;
        fit.A = -1.0;
        fit.alpha0 = 0.5;
        fit.C = -0.2;  // apex below zero: no real roots
        CHECK_THROWS_WITH_AS(spectrum_width(fit), doctest::Contains("NoRealRoots"), Error);
    }
}

TEST_CASE("width worked examples") {
    SpectrumFit fit;
    fit.A = -1.0;
    fit.alpha0 = 0.5;
    fit.C = 1.0;
    SpectrumWidth w = spectrum_width(fit);
    CHECK(w.alpha1 == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(w.alpha2 == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(w.width == doctest::Approx(2.0).epsilon(1e-14));

    fit.A = -4.0;
    fit.alpha0 = 1.0;
    w = spectrum_width(fit);
    CHECK(w.alpha1 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(w.alpha2 == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(w.width == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("width depends only on the fitted parabola, not q bookkeeping") {
    SingularitySpectrum spec = spectrum_from_parabola(-1.5, 0.8, 0.9, 9, 0.1, 1.5);
    const SpectrumFit base = fit_spectrum(spec);
    for (auto& p : spec.points) p.q += 7.0;
    const SpectrumFit shifted = fit_spectrum(spec);
    CHECK(shifted.width == base.width);
    CHECK(shifted.alpha1 == base.alpha1);
    CHECK(shifted.alpha2 == base.alpha2);
}

TEST_CASE("low-fluctuation area worked examples") {
    {
        SingularitySpectrum spec;
        SpectrumPoint a;
        a.alpha = 0.4;
        a.f = 0.0;
        SpectrumPoint b;
        b.alpha = 0.8;
        b.f = 1.0;
        spec.points = {b, a};  // order does not matter, survivors are sorted
        CHECK(low_fluct_area(spec) == doctest::Approx(0.2).epsilon(1e-14));
    }
    {
        // dense symmetric parabola, apex 0.5, roots 0 and 1: area = 1/3
        SingularitySpectrum spec;
        const int n = 2001;
        for (int i = 0; i < n; ++i) {
            SpectrumPoint p;
            p.alpha = static_cast<double>(i) / (n - 1);
            p.f = 1.0 - 4.0 * (p.alpha - 0.5) * (p.alpha - 0.5);
            spec.points.push_back(p);
        }
        CHECK(low_fluct_area(spec) == doctest::Approx(1.0 / 3.0).epsilon(1e-5));
    }
    {
        SingularitySpectrum spec;
        SpectrumPoint apex;
        apex.alpha = 0.3;
        apex.f = 1.0;
        SpectrumPoint other;
        other.alpha = 0.9;
        other.f = 0.2;
        spec.points = {apex, other};  // apex is the lowest alpha: no low branch
        CHECK_THROWS_WITH_AS(low_fluct_area(spec), doctest::Contains("DegenerateSpectrum"),
                             Error);
    }
}
