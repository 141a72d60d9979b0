#include <doctest.h>

#include <cmath>

#include "dfa_oracle.hpp"
#include "mfspeech/mfdfa.hpp"
#include "mfspeech/rng.hpp"
#include "mfspeech/synth.hpp"

using namespace mfspeech;

namespace {

Profile make_profile(std::vector<double> values) {
    Profile p;
    p.values = std::move(values);
    return p;
}

}  // namespace

TEST_CASE("profile of simple signals") {
    TimeSeries x;
    x.samples = {3.0, 3.0, 3.0};
    CHECK(profile(x).values == std::vector<double>{0.0, 0.0, 0.0});

    x.samples = {1.0, -1.0, 1.0, -1.0};
    CHECK(profile(x).values == std::vector<double>{0.5, -0.5, 0.5, -0.5});

    x.samples = {1.0, 2.0, 3.0};
    CHECK(profile(x).values == std::vector<double>{-1.0, -1.0, 0.0});

    x.samples = {1.0};
    CHECK_THROWS_WITH_AS(profile(x), doctest::Contains("TooShort"), Error);
}

TEST_CASE("profile telescopes to zero within accumulation tolerance") {
    const TimeSeries x = white_noise(10000, 21);
    double peak = 0.0;
    for (double v : x.samples) peak = std::max(peak, std::abs(v));
    const Profile p = profile(x);
    CHECK(std::abs(p.values.back()) <= 10000.0 * 1e-15 * peak * 10.0);

    // independent cumulative-sum oracle
    double mean = 0.0;
    for (double v : x.samples) mean += v;
    mean /= 10000.0;
    double run = 0.0;
    for (std::size_t i = 0; i < 200; ++i) {
        run += x.samples[i] - mean;
        CHECK(p.values[i] == doctest::Approx(run).epsilon(1e-12));
    }
}

TEST_CASE("segment count is floor(N/s)") {
    CHECK(segment_count(1000, 100) == 10);
    CHECK(segment_count(1000, 333) == 3);
    CHECK(segment_count(7, 7) == 1);
    CHECK_THROWS_AS(segment_count(10, 11), Error);
}

TEST_CASE("local fluctuation removes its own model class") {
    std::vector<double> linear(64);
    for (std::size_t i = 0; i < linear.size(); ++i)
        linear[i] = 7.5 * static_cast<double>(i) - 1234.0;
    const Profile p = make_profile(linear);
    double scale = 0.0;
    for (double v : linear) scale = std::max(scale, v * v);
    CHECK(local_fluctuation(p, 64, 1, 1) <= 1e-20 * scale);
}

TEST_CASE("order-0 local fluctuation of the alternating segment") {
    const Profile p = make_profile({0.0, 1.0, 0.0, 1.0});
    CHECK(local_fluctuation(p, 4, 1, 0) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("higher detrending order never increases the residual") {
    Rng rng(17);
    std::vector<double> values(256);
    for (auto& v : values) v = rng.next_gaussian();
    const Profile p = make_profile(values);
    for (int s : {8, 16, 32}) {
        for (std::size_t v = 1; v <= 256 / static_cast<std::size_t>(s); ++v) {
            const double f1 = local_fluctuation(p, s, v, 1);
            const double f2 = local_fluctuation(p, s, v, 2);
            const double f3 = local_fluctuation(p, s, v, 3);
            CHECK(f2 <= f1 * (1.0 + 1e-12) + 1e-18);
            CHECK(f3 <= f2 * (1.0 + 1e-12) + 1e-18);
        }
    }
    CHECK_THROWS_AS(local_fluctuation(p, 2, 1, 1), Error);  // s < order + 2
}

TEST_CASE("q = 2 equals an independent plain DFA implementation") {
    Rng rng(55);
    for (int trial = 0; trial < 4; ++trial) {
        TimeSeries x;
        x.samples.resize(2048);
        for (auto& v : x.samples) v = rng.next_gaussian();
        ScaleGrid scales;
        scales.scales = {8, 16, 32, 64, 128, 256, 512};
        QGrid qs;
        qs.qs = {2.0};
        const SurfaceMatrix surface = fluctuation_function(profile(x), scales, qs, 1);
        for (std::size_t si = 0; si < scales.scales.size(); ++si) {
            const double oracle = plain_dfa_f2(x.samples, scales.scales[si]);
            CHECK(surface.values[0][si] ==
                  doctest::Approx(oracle).epsilon(1e-10));
        }
    }
}

TEST_CASE("identical segment variances give F_q = sqrt(c) for every q") {
    // a periodic profile pattern makes all segments carry the same residual
    std::vector<double> pattern = {0.0, 1.0, 0.0, -1.0, 0.5, -0.5, 0.25, 2.0};
    std::vector<double> values;
    for (int rep = 0; rep < 16; ++rep)
        values.insert(values.end(), pattern.begin(), pattern.end());
    const Profile p = make_profile(values);
    ScaleGrid scales;
    scales.scales = {8};
    QGrid qs;
    qs.qs = {-2.0, 0.0, 2.0, 4.0};
    const SurfaceMatrix surface = fluctuation_function(p, scales, qs, 1);
    const double c = local_fluctuation(p, 8, 1, 1);
    for (std::size_t qi = 0; qi < qs.qs.size(); ++qi)
        CHECK(surface.values[qi][0] == doctest::Approx(std::sqrt(c)).epsilon(1e-12));
}

TEST_CASE("zero local variance with q <= 0 is rejected with context") {
    const Profile p = make_profile(std::vector<double>(64, 0.0));
    ScaleGrid scales;
    scales.scales = {8, 16};
    QGrid qs;
    qs.qs = {-1.0, 0.0, 2.0};
    CHECK_THROWS_WITH_AS(fluctuation_function(p, scales, qs, 1),
                         doctest::Contains("ZeroLocalFluctuation"), Error);
    try {
        fluctuation_function(p, scales, qs, 1);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("scale 8") != std::string::npos);
        CHECK(std::string(e.what()).find("segment 1") != std::string::npos);
    }
}

TEST_CASE("constant input is rejected by the full pipeline") {
    TimeSeries x;
    x.samples.assign(4096, 2.5);
    CHECK_THROWS_WITH_AS(mfdfa_analyze(x, {}), doctest::Contains("ZeroLocalFluctuation"), Error);
}

TEST_CASE("hurst exponents on an exact power-law surface") {
    SurfaceMatrix surface;
    surface.scalegrid.scales = {16, 32, 64, 128, 256};
    surface.qgrid.qs = {-2.0, 0.0, 2.0};
    surface.values.assign(3, {});
    for (auto& row : surface.values)
        for (int s : surface.scalegrid.scales) row.push_back(std::pow(s, 0.7));
    const HurstSpectrum h = hurst_exponents(surface);
    for (std::size_t qi = 0; qi < 3; ++qi) {
        CHECK(h.h[qi] == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(h.r2[qi] == doctest::Approx(1.0).epsilon(1e-12));
    }
    surface.scalegrid.scales = {16, 32, 64};
    CHECK_THROWS_AS(hurst_exponents(surface), Error);
}

TEST_CASE("F_q(s) is nondecreasing in q at fixed s") {
    const TimeSeries x = fgn(4096, 0.6, 31);
    const MfdfaConfig cfg;
    const MultifractalResult r = mfdfa_analyze(x, cfg);
    for (std::size_t si = 0; si < r.surface.scalegrid.scales.size(); ++si)
        for (std::size_t qi = 1; qi < r.surface.qgrid.qs.size(); ++qi)
            CHECK(r.surface.values[qi][si] >=
                  r.surface.values[qi - 1][si] * (1.0 - 1e-12));
}

TEST_CASE("amplitude scaling shifts the surface and leaves h alone") {
    const TimeSeries x = fgn(4096, 0.7, 13);
    for (double c : {2.0, 3.0}) {
        TimeSeries scaled = x;
        for (auto& v : scaled.samples) v *= c;
        const MultifractalResult a = mfdfa_analyze(x, {});
        const MultifractalResult b = mfdfa_analyze(scaled, {});
        for (std::size_t qi = 0; qi < a.surface.qgrid.qs.size(); ++qi) {
            for (std::size_t si = 0; si < a.surface.scalegrid.scales.size(); ++si)
                CHECK(b.surface.values[qi][si] ==
                      doctest::Approx(c * a.surface.values[qi][si]).epsilon(1e-12));
            CHECK(std::abs(b.hurst.h[qi] - a.hurst.h[qi]) < 1e-12);
        }
    }
}

TEST_CASE("bidirectional mode matches forward mode when scales divide N") {
    const TimeSeries x = fgn(1024, 0.7, 3);
    const Profile p = profile(x);
    ScaleGrid scales;
    scales.scales = {16, 32, 64, 128, 256};
    QGrid qs;
    qs.qs = {-2.0, 0.0, 2.0};
    const SurfaceMatrix fwd = fluctuation_function(p, scales, qs, 1, false);
    const SurfaceMatrix bi = fluctuation_function(p, scales, qs, 1, true);
    for (std::size_t qi = 0; qi < qs.qs.size(); ++qi)
        for (std::size_t si = 0; si < scales.scales.size(); ++si)
            CHECK(bi.values[qi][si] == doctest::Approx(fwd.values[qi][si]).epsilon(1e-12));
}

TEST_CASE("cascade pipeline matches the analytic generalized Hurst exponents") {
    const TimeSeries cascade = binomial_cascade({0.75, 16});
    const MultifractalResult r = mfdfa_analyze(cascade, {});
    double previous = 1e300;
    for (std::size_t qi = 0; qi < r.hurst.qgrid.qs.size(); ++qi) {
        const double q = r.hurst.qgrid.qs[qi];
        if (q != 0.0)
            CHECK(std::abs(r.hurst.h[qi] - analytic_cascade_h(0.75, q)) <= 0.05);
        CHECK(r.hurst.h[qi] <= previous + 0.02);  // nonincreasing within tolerance
        previous = r.hurst.h[qi];
    }
    CHECK(r.fit.C == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("monofractal baselines: white noise and fGn") {
    {
        const MultifractalResult r = mfdfa_analyze(white_noise(65536, 2), {});
        double h2 = 0.0;
        for (std::size_t qi = 0; qi < r.hurst.qgrid.qs.size(); ++qi)
            if (r.hurst.qgrid.qs[qi] == 2.0) h2 = r.hurst.h[qi];
        CHECK(h2 > 0.45);
        CHECK(h2 < 0.55);
        CHECK(r.fit.width < 0.35);
    }
    {
        const MultifractalResult r = mfdfa_analyze(fgn(65536, 0.7, 42), {});
        double h2 = 0.0;
        for (std::size_t qi = 0; qi < r.hurst.qgrid.qs.size(); ++qi)
            if (r.hurst.qgrid.qs[qi] == 2.0) h2 = r.hurst.h[qi];
        CHECK(h2 > 0.65);
        CHECK(h2 < 0.75);
    }
}

TEST_CASE("short inputs are rejected up front") {
    TimeSeries x;
    x.samples.assign(32, 0.0);
    CHECK_THROWS_WITH_AS(mfdfa_analyze(x, {}), doctest::Contains("TooShort"), Error);
}
