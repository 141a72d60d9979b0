#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mfspeech {

// In-place radix-2 complex FFT; data.size() must be a power of two.
// inverse = true applies the 1/N normalization.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse);

// FFT of a real sequence, zero-padded to `padded_size` (power of two,
// >= input size; 0 means the next power of two). Returns the full
// complex spectrum of length padded_size.
std::vector<std::complex<double>> fft_real(std::span<const double> input,
                                           std::size_t padded_size = 0);

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

}  // namespace mfspeech
