#include "mfspeech/synth.hpp"

#include <bit>
#include <cmath>
#include <complex>

#include "mfspeech/fft.hpp"
#include "mfspeech/rng.hpp"

namespace mfspeech {

TimeSeries binomial_cascade(const CascadeSpec& spec) {
    if (!(spec.a >= 0.5 && spec.a < 1.0))
        throw Error(Errc::InvalidArgument, "cascade multiplier must be in [0.5, 1)");
    if (spec.levels < 1 || spec.levels > 30)
        throw Error(Errc::InvalidArgument, "cascade levels must be in [1, 30]");

    const std::size_t n = std::size_t{1} << spec.levels;
    // precompute a^i (1-a)^(levels-i) for i = 0..levels
    std::vector<double> value_by_ones(static_cast<std::size_t>(spec.levels) + 1);
    for (int ones = 0; ones <= spec.levels; ++ones)
        value_by_ones[static_cast<std::size_t>(ones)] =
            std::pow(spec.a, spec.levels - ones) * std::pow(1.0 - spec.a, ones);

    TimeSeries out;
    out.sample_rate = 1.0;
    out.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        out.samples[k] = value_by_ones[static_cast<std::size_t>(std::popcount(k))];
    return out;
}

double analytic_cascade_h(double a, double q) {
    if (q == 0.0) throw Error(Errc::QZero, "h(q) closed form is singular at q = 0");
    if (!(a >= 0.5 && a < 1.0))
        throw Error(Errc::InvalidArgument, "cascade multiplier must be in [0.5, 1)");
    return 1.0 / q - std::log(std::pow(a, q) + std::pow(1.0 - a, q)) / (q * std::numbers::ln2);
}

TimeSeries white_noise(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw Error(Errc::InvalidArgument, "white_noise needs n >= 1");
    Rng rng(seed);
    TimeSeries out;
    out.sample_rate = 1.0;
    out.samples.resize(n);
    for (auto& x : out.samples) x = rng.next_gaussian();
    return out;
}

double fgn_autocovariance(double hurst, std::size_t lag) {
    const double h2 = 2.0 * hurst;
    const double k = static_cast<double>(lag);
    return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(std::abs(k - 1.0), h2));
}

TimeSeries fgn(std::size_t n, double hurst, std::uint64_t seed) {
    if (!is_power_of_two(n))
        throw Error(Errc::NonPowerOfTwo, "fgn length must be a power of two");
    if (!(hurst > 0.0 && hurst < 1.0))
        throw Error(Errc::InvalidArgument, "hurst must be in (0, 1)");

    // Davies-Harte: eigenvalues of the circulant embedding of the
    // autocovariance. If a negative eigenvalue shows up, retry with a
    // doubled embedding before giving up.
    std::size_t m = 2 * n;
    std::vector<double> eigen;
    for (int attempt = 0;; ++attempt) {
        std::vector<std::complex<double>> row(m);
        for (std::size_t k = 0; k <= m / 2; ++k) row[k] = fgn_autocovariance(hurst, k);
        for (std::size_t k = m / 2 + 1; k < m; ++k) row[k] = row[m - k];
        fft_inplace(row, false);

        double max_eig = 0.0, min_eig = 0.0;
        eigen.assign(m, 0.0);
        for (std::size_t k = 0; k < m; ++k) {
            eigen[k] = row[k].real();
            max_eig = std::max(max_eig, eigen[k]);
            min_eig = std::min(min_eig, eigen[k]);
        }
        if (min_eig >= -1e-9 * max_eig) {
            for (auto& value : eigen) value = std::max(value, 0.0);
            break;
        }
        if (attempt >= 3)
            throw Error(Errc::EmbeddingNotPSD, "circulant embedding not PSD after doubling");
        m *= 2;
    }

    Rng rng(seed);
    std::vector<std::complex<double>> freq(m);
    const double inv_m = 1.0 / static_cast<double>(m);
    freq[0] = std::sqrt(eigen[0] * inv_m) * rng.next_gaussian();
    freq[m / 2] = std::sqrt(eigen[m / 2] * inv_m) * rng.next_gaussian();
    for (std::size_t k = 1; k < m / 2; ++k) {
        const double amp = std::sqrt(0.5 * eigen[k] * inv_m);
        const double re = rng.next_gaussian();
        const double im = rng.next_gaussian();
        freq[k] = std::complex<double>(amp * re, amp * im);
        freq[m - k] = std::conj(freq[k]);
    }
    fft_inplace(freq, false);

    TimeSeries out;
    out.sample_rate = 1.0;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = freq[i].real();
    return out;
}

TimeSeries shuffle(const TimeSeries& x, std::uint64_t seed) {
    TimeSeries out = x;
    Rng rng(seed);
    for (std::size_t i = out.samples.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(out.samples[i - 1], out.samples[j]);
    }
    return out;
}

}  // namespace mfspeech
