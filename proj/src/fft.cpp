#include "mfspeech/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "mfspeech/core.hpp"

namespace mfspeech {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
    if (n <= 1) return 1;
    return std::size_t{1} << std::bit_width(n - 1);
}

void fft_inplace(std::vector<std::complex<double>>& data, bool inverse) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n))
        throw Error(Errc::NonPowerOfTwo, "fft length must be a power of two");
    if (n == 1) return;

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = data[i + k];
                const std::complex<double> v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }

    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& value : data) value *= scale;
    }
}

std::vector<std::complex<double>> fft_real(std::span<const double> input, std::size_t padded_size) {
    if (padded_size == 0) padded_size = next_power_of_two(input.size());
    if (!is_power_of_two(padded_size) || padded_size < input.size())
        throw Error(Errc::NonPowerOfTwo, "bad fft padding size");
    std::vector<std::complex<double>> data(padded_size);
    for (std::size_t i = 0; i < input.size(); ++i) data[i] = input[i];
    fft_inplace(data, false);
    return data;
}

}  // namespace mfspeech
