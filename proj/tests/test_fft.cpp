#include <doctest.h>

#include <complex>

#include "mfspeech/core.hpp"
#include "mfspeech/fft.hpp"
#include "mfspeech/rng.hpp"

using namespace mfspeech;

namespace {

// brute-force DFT oracle
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in, bool inverse) {
    const std::size_t n = in.size();
    std::vector<std::complex<double>> out(n);
    const double sign = inverse ? 2.0 : -2.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double angle = sign * std::numbers::pi * static_cast<double>(k * j) / n;
            acc += in[j] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        out[k] = inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

}  // namespace

TEST_CASE("fft matches the brute-force DFT up to n = 64") {
    Rng rng(11);
    for (std::size_t n : {1u, 2u, 4u, 8u, 16u, 32u, 64u}) {
        std::vector<std::complex<double>> data(n);
        for (auto& v : data) v = {rng.next_gaussian(), rng.next_gaussian()};
        auto expected = dft(data, false);
        auto got = data;
        fft_inplace(got, false);
        for (std::size_t k = 0; k < n; ++k)
            CHECK(std::abs(got[k] - expected[k]) < 1e-10 * (1.0 + std::abs(expected[k])));

        auto inv = got;
        fft_inplace(inv, true);
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(inv[k] - data[k]) < 1e-12);
    }
}

TEST_CASE("fft_real matches the DFT of a real sequence") {
    Rng rng(5);
    std::vector<double> x(32);
    for (auto& v : x) v = rng.next_gaussian();
    std::vector<std::complex<double>> as_complex(x.begin(), x.end());
    const auto expected = dft(as_complex, false);
    const auto got = fft_real(x, 32);
    for (std::size_t k = 0; k < 32; ++k)
        CHECK(std::abs(got[k] - expected[k]) < 1e-10 * (1.0 + std::abs(expected[k])));
    // hermitian symmetry of a real input's spectrum
    for (std::size_t k = 1; k < 16; ++k)
        CHECK(std::abs(got[k] - std::conj(got[32 - k])) < 1e-12);
}

TEST_CASE("fft rejects non-power-of-two lengths") {
    std::vector<std::complex<double>> data(12);
    CHECK_THROWS_AS(fft_inplace(data, false), Error);
    CHECK(next_power_of_two(12) == 16);
    CHECK(next_power_of_two(16) == 16);
    CHECK(is_power_of_two(1));
    CHECK(!is_power_of_two(0));
    CHECK(!is_power_of_two(24));
}
