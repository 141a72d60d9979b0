#include <doctest.h>

#include "mfspeech/core.hpp"

using namespace mfspeech;

TEST_CASE("log-spaced scale grid is strictly increasing and bounded") {
    const ScaleGrid g = log_spaced_scales(16, 16384, 20);
    REQUIRE(!g.scales.empty());
    CHECK(g.scales.front() == 16);
    CHECK(g.scales.back() == 16384);
    for (std::size_t i = 1; i < g.scales.size(); ++i) CHECK(g.scales[i] > g.scales[i - 1]);
    // duplicates collapse when the range is tight
    const ScaleGrid tight = log_spaced_scales(4, 8, 20);
    CHECK(tight.scales.size() <= 5);
}

TEST_CASE("uniform q grid hits zero exactly") {
    const QGrid q = uniform_qgrid(-5.0, 5.0, 0.25);
    CHECK(q.qs.size() == 41);
    bool has_exact_zero = false;
    for (double v : q.qs)
        if (v == 0.0) has_exact_zero = true;
    CHECK(has_exact_zero);
    CHECK(q.qs.front() == -5.0);
    CHECK(q.qs.back() == 5.0);
}

TEST_CASE("fit_line recovers an exact line") {
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0};
    std::vector<double> y;
    for (double v : x) y.push_back(3.5 * v - 2.0);
    const LineFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(3.5).epsilon(1e-14));
    CHECK(f.intercept == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("emotion label names round-trip") {
    for (int i = 0; i < kNumLabels; ++i) {
        const auto label = static_cast<EmotionLabel>(i);
        EmotionLabel back;
        REQUIRE(label_from_string(to_string(label), back));
        CHECK(back == label);
    }
    EmotionLabel ignored;
    CHECK(!label_from_string("Anger", ignored));
}

TEST_CASE("error codes map to the exit-code contract") {
    CHECK(exit_code_for(Errc::IoError) == 2);
    CHECK(exit_code_for(Errc::NonPowerOfTwo) == 2);
    CHECK(exit_code_for(Errc::ZeroLocalFluctuation) == 3);
    CHECK(exit_code_for(Errc::DegenerateSpectrum) == 3);
    CHECK(exit_code_for(Errc::NoRealRoots) == 3);
}
