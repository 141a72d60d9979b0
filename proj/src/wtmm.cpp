#include "mfspeech/wtmm.hpp"

#include <cmath>
#include <complex>

#include "mfspeech/fft.hpp"
#include "mfspeech/mfdfa.hpp"

namespace mfspeech {

namespace {

int kernel_radius(int s, double half_width) {
    return static_cast<int>(std::floor(half_width * s + 1e-9));
}

double hermite_factor(int m, double t) {
    // (d^m/dt^m) e^(-t^2/2) = (-1)^m He_m(t) e^(-t^2/2)
    switch (m) {
        case 1: return -t;
        case 2: return t * t - 1.0;
        case 3: return 3.0 * t - t * t * t;
        case 4: return t * t * t * t - 6.0 * t * t + 3.0;
        default: throw Error(Errc::UnsupportedOrder, "wavelet order must be in [1, 4]");
    }
}

}  // namespace

std::vector<double> gaussian_derivative_wavelet(int m, int s, double half_width) {
    if (m < 1 || m > 4) throw Error(Errc::UnsupportedOrder, "wavelet order must be in [1, 4]");
    if (s < 1) throw Error(Errc::InvalidArgument, "scale must be >= 1");
    const int radius = kernel_radius(s, half_width);
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    for (int k = -radius; k <= radius; ++k) {
        const double t = static_cast<double>(k) / s;
        kernel[static_cast<std::size_t>(k + radius)] = hermite_factor(m, t) * std::exp(-0.5 * t * t);
    }
    return kernel;
}

WaveletField cwt(const TimeSeries& x, const ScaleGrid& scales, int m, double half_width,
                 bool use_fft, CwtBoundary boundary) {
    const std::size_t n = x.samples.size();
    if (scales.scales.empty()) throw Error(Errc::InvalidArgument, "empty scale grid");
    const bool periodic = boundary == CwtBoundary::Periodic;
    if (periodic && use_fft && !is_power_of_two(n))
        throw Error(Errc::NonPowerOfTwo, "periodic FFT cwt needs a power-of-two length");

    WaveletField field;
    field.scalegrid = scales;
    field.wavelet_order = m;
    field.periodic = periodic;
    field.first_position.resize(scales.scales.size());
    field.coeffs.resize(scales.scales.size());

    // shared zero-padded (or exact circular) spectrum for the FFT path
    std::vector<std::complex<double>> x_spec;
    std::size_t padded = 0;
    if (use_fft) {
        if (periodic) {
            padded = n;
        } else {
            const int r_max = kernel_radius(scales.scales.back(), half_width);
            padded = next_power_of_two(n + 2 * static_cast<std::size_t>(r_max) + 1);
        }
        x_spec = fft_real(x.samples, padded);
    }

    for (std::size_t si = 0; si < scales.scales.size(); ++si) {
        const int s = scales.scales[si];
        const int radius = kernel_radius(s, half_width);
        const std::size_t support = 2 * static_cast<std::size_t>(radius) + 1;
        if ((periodic && support > n) || (!periodic && n < support + 2))
            throw Error(Errc::SignalTooShortForScale,
                        "signal too short for scale " + std::to_string(s));
        const std::size_t valid = periodic ? n : n - 2 * static_cast<std::size_t>(radius);
        const std::vector<double> kernel = gaussian_derivative_wavelet(m, s, half_width);
        const double inv_s = 1.0 / static_cast<double>(s);

        field.first_position[si] = periodic ? 0 : static_cast<std::size_t>(radius);
        auto& row = field.coeffs[si];
        row.resize(valid);

        if (!use_fft) {
            const double* sig = x.samples.data();
            const std::size_t klen = kernel.size();
            if (!periodic) {
                for (std::size_t i = 0; i < valid; ++i) {
                    const double* window = sig + i;  // n - radius == i
                    double acc = 0.0;
                    for (std::size_t k = 0; k < klen; ++k) acc += window[k] * kernel[k];
                    row[i] = acc * inv_s;
                }
            } else {
                for (std::size_t pos = 0; pos < n; ++pos) {
                    double acc = 0.0;
                    std::size_t j = (pos + n - static_cast<std::size_t>(radius)) % n;
                    for (std::size_t k = 0; k < klen; ++k) {
                        acc += sig[j] * kernel[k];
                        if (++j == n) j = 0;
                    }
                    row[pos] = acc * inv_s;
                }
            }
        } else {
            // cross-correlation via the shared spectrum; kernel indices wrap
            std::vector<std::complex<double>> g(padded);
            for (int k = -radius; k <= radius; ++k) {
                const std::size_t idx =
                    static_cast<std::size_t>((k + static_cast<int>(padded)) %
                                             static_cast<int>(padded));
                g[idx] += kernel[static_cast<std::size_t>(k + radius)];
            }
            fft_inplace(g, false);
            for (std::size_t k = 0; k < padded; ++k) g[k] = x_spec[k] * std::conj(g[k]);
            fft_inplace(g, true);
            if (periodic) {
                for (std::size_t i = 0; i < valid; ++i) row[i] = g[i].real() * inv_s;
            } else {
                for (std::size_t i = 0; i < valid; ++i)
                    row[i] = g[i + static_cast<std::size_t>(radius)].real() * inv_s;
            }
        }
    }
    return field;
}

std::vector<std::size_t> modulus_maxima(const WaveletField& field, std::size_t scale_index) {
    if (scale_index >= field.coeffs.size())
        throw Error(Errc::InvalidArgument, "scale index out of range");
    const auto& row = field.coeffs[scale_index];
    std::vector<std::size_t> positions;
    if (row.size() < 3) return positions;

    double max_abs = 0.0;
    for (double w : row) max_abs = std::max(max_abs, std::abs(w));
    if (max_abs == 0.0) return positions;
    const double floor_eps = 1e-12 * max_abs;

    const std::size_t base = field.first_position[scale_index];
    const std::size_t len = row.size();
    if (field.periodic) {
        for (std::size_t i = 0; i < len; ++i) {
            const double prev = std::abs(row[(i + len - 1) % len]);
            const double here = std::abs(row[i]);
            const double next = std::abs(row[(i + 1) % len]);
            if (here > prev && here >= next && here >= floor_eps) positions.push_back(base + i);
        }
    } else {
        for (std::size_t i = 1; i + 1 < len; ++i) {
            const double prev = std::abs(row[i - 1]);
            const double here = std::abs(row[i]);
            const double next = std::abs(row[i + 1]);
            if (here > prev && here >= next && here >= floor_eps) positions.push_back(base + i);
        }
    }
    return positions;
}

PartitionFunction partition_function(const WaveletField& field, const QGrid& qs) {
    if (qs.qs.empty()) throw Error(Errc::InvalidArgument, "empty q grid");

    PartitionFunction out;
    out.qgrid = qs;
    out.scalegrid = field.scalegrid;
    out.z.assign(qs.qs.size(), std::vector<double>(field.coeffs.size(), 0.0));
    out.maxima_counts.resize(field.coeffs.size());

    std::vector<double> log_w;
    for (std::size_t si = 0; si < field.coeffs.size(); ++si) {
        const auto positions = modulus_maxima(field, si);
        if (positions.empty())
            throw Error(Errc::NoMaximaAtScale,
                        "no modulus maxima at scale " +
                            std::to_string(field.scalegrid.scales[si]));
        out.maxima_counts[si] = positions.size();

        const std::size_t base = field.first_position[si];
        log_w.clear();
        log_w.reserve(positions.size());
        for (std::size_t pos : positions)
            log_w.push_back(std::log(std::abs(field.coeffs[si][pos - base])));

        for (std::size_t qi = 0; qi < qs.qs.size(); ++qi) {
            const double q = qs.qs[qi];
            if (q == 0.0) {
                out.z[qi][si] = static_cast<double>(positions.size());
            } else {
                double acc = 0.0;
                for (double lw : log_w) acc += std::exp(q * lw);
                out.z[qi][si] = acc;
            }
        }
    }
    return out;
}

ScalingExponents wtmm_scaling_exponents(const PartitionFunction& z) {
    if (z.scalegrid.scales.size() < 4)
        throw Error(Errc::InvalidArgument, "tau regression needs >= 4 scales");
    std::vector<double> log_s(z.scalegrid.scales.size());
    for (std::size_t i = 0; i < log_s.size(); ++i)
        log_s[i] = std::log(static_cast<double>(z.scalegrid.scales[i]));

    ScalingExponents out;
    out.qgrid = z.qgrid;
    out.tau.resize(z.qgrid.qs.size());
    out.r2.resize(z.qgrid.qs.size());
    std::vector<double> log_z(log_s.size());
    for (std::size_t qi = 0; qi < z.qgrid.qs.size(); ++qi) {
        for (std::size_t si = 0; si < log_s.size(); ++si) log_z[si] = std::log(z.z[qi][si]);
        const LineFit fit = fit_line(log_s, log_z);
        out.tau[qi] = fit.slope;
        out.r2[qi] = fit.r2;
    }
    return out;
}

MultifractalResult wtmm_analyze(const TimeSeries& x, const WtmmConfig& cfg) {
    const std::size_t n = x.samples.size();
    const int s_max = cfg.scale_max > 0 ? cfg.scale_max : static_cast<int>(n / 16);
    if (s_max < cfg.scale_min) throw Error(Errc::TooShort, "scale range is empty");
    const std::size_t support = 2 * static_cast<std::size_t>(std::ceil(cfg.half_width * s_max)) + 1;
    if ((cfg.boundary == CwtBoundary::Truncate && n < support + 2) ||
        (cfg.boundary == CwtBoundary::Periodic && n < support))
        throw Error(Errc::SignalTooShortForScale, "signal too short for the largest scale");

    const ScaleGrid scales = log_spaced_scales(cfg.scale_min, s_max, cfg.scale_count);
    if (scales.scales.size() < 4) throw Error(Errc::TooShort, "fewer than 4 usable scales");
    const QGrid qs = uniform_qgrid(cfg.q_min, cfg.q_max, cfg.q_step);

    // Analyze the profile so tau(q) shares the MFDFA convention
    // (tau = q h - 1 over the same h).
    const Profile prof = profile(x);
    TimeSeries integrated;
    integrated.sample_rate = x.sample_rate;
    integrated.samples = prof.values;

    const WaveletField field = cwt(integrated, scales, cfg.wavelet_order, cfg.half_width,
                                   cfg.use_fft, cfg.boundary);
    const PartitionFunction z = partition_function(field, qs);

    MultifractalResult result;
    result.method = Method::Wtmm;
    result.surface.qgrid = z.qgrid;
    result.surface.scalegrid = z.scalegrid;
    result.surface.values = z.z;
    result.tau = wtmm_scaling_exponents(z);
    result.spectrum = legendre(result.tau);
    result.spectrum.source = Method::Wtmm;
    result.fit = fit_spectrum(result.spectrum);
    result.negative_q_low_confidence = cfg.q_min < 0.0;
    return result;
}

}  // namespace mfspeech
