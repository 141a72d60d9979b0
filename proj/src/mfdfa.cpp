#include "mfspeech/mfdfa.hpp"

#include <cmath>

namespace mfspeech {

namespace {

// Per-scale detrending workspace: shared abscissa powers and Gram matrix so
// every segment of one scale reuses the same factorization inputs.
struct DetrendScratch {
    int order = 1;
    int s = 0;
    std::vector<double> t;  // centered abscissa in (-1, 1)
    double gram[4][4] = {};

    DetrendScratch(int s_, int order_) : order(order_), s(s_) {
        t.resize(static_cast<std::size_t>(s));
        for (int i = 0; i < s; ++i) t[static_cast<std::size_t>(i)] = (2.0 * i - (s - 1)) / s;
        double power_sum[7] = {};
        for (int i = 0; i < s; ++i) {
            double p = 1.0;
            for (int k = 0; k <= 2 * order; ++k) {
                power_sum[k] += p;
                p *= t[static_cast<std::size_t>(i)];
            }
        }
        for (int r = 0; r <= order; ++r)
            for (int c = 0; c <= order; ++c) gram[r][c] = power_sum[r + c];
    }
};

// Least-squares polynomial removal; returns the mean squared residual.
double detrended_ms(std::span<const double> y, const DetrendScratch& ws) {
    const int m = ws.order + 1;
    double aug[4][5];
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) aug[r][c] = ws.gram[r][c];

    double rhs[4] = {};
    for (int i = 0; i < ws.s; ++i) {
        double p = 1.0;
        const double yi = y[static_cast<std::size_t>(i)];
        for (int k = 0; k < m; ++k) {
            rhs[k] += p * yi;
            p *= ws.t[static_cast<std::size_t>(i)];
        }
    }
    for (int r = 0; r < m; ++r) aug[r][m] = rhs[r];

    for (int col = 0; col < m; ++col) {
        int pivot = col;
        for (int row = col + 1; row < m; ++row)
            if (std::abs(aug[row][col]) > std::abs(aug[pivot][col])) pivot = row;
        if (pivot != col)
            for (int j = 0; j <= m; ++j) std::swap(aug[col][j], aug[pivot][j]);
        if (aug[col][col] == 0.0)
            throw Error(Errc::DegenerateFit, "singular detrending system");
        for (int row = col + 1; row < m; ++row) {
            const double k = aug[row][col] / aug[col][col];
            for (int j = col; j <= m; ++j) aug[row][j] -= k * aug[col][j];
        }
    }
    double coef[4] = {};
    for (int row = m - 1; row >= 0; --row) {
        double acc = aug[row][m];
        for (int j = row + 1; j < m; ++j) acc -= aug[row][j] * coef[j];
        coef[row] = acc / aug[row][row];
    }

    // explicit residual pass: robust when the fit is near-exact
    double rss = 0.0;
    for (int i = 0; i < ws.s; ++i) {
        double fitted = coef[ws.order];
        for (int k = ws.order - 1; k >= 0; --k)
            fitted = fitted * ws.t[static_cast<std::size_t>(i)] + coef[k];
        const double e = y[static_cast<std::size_t>(i)] - fitted;
        rss += e * e;
    }
    return rss / static_cast<double>(ws.s);
}

void check_order(int order) {
    if (order < 0 || order > 3)
        throw Error(Errc::InvalidArgument, "detrend order must be in [0, 3]");
}

}  // namespace

Profile profile(const TimeSeries& x) {
    if (x.samples.size() < 2) throw Error(Errc::TooShort, "profile needs >= 2 samples");
    const double xbar = mean(x.samples);
    Profile p;
    p.values.resize(x.samples.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < x.samples.size(); ++i) {
        acc += x.samples[i] - xbar;
        p.values[i] = acc;
    }
    return p;
}

std::size_t segment_count(std::size_t n, int s) {
    if (s < 1 || static_cast<std::size_t>(s) > n)
        throw Error(Errc::InvalidArgument, "scale out of range");
    return n / static_cast<std::size_t>(s);
}

double local_fluctuation(const Profile& p, int s, std::size_t v, int order) {
    check_order(order);
    if (s < order + 2) throw Error(Errc::InvalidArgument, "scale must exceed detrend order + 1");
    const std::size_t ns = segment_count(p.values.size(), s);
    if (v < 1 || v > ns) throw Error(Errc::InvalidArgument, "segment index out of range");
    DetrendScratch ws(s, order);
    const std::size_t start = (v - 1) * static_cast<std::size_t>(s);
    return detrended_ms(std::span<const double>(p.values).subspan(start, static_cast<std::size_t>(s)), ws);
}

SurfaceMatrix fluctuation_function(const Profile& p, const ScaleGrid& scales, const QGrid& qs,
                                   int order, bool bidirectional) {
    check_order(order);
    const std::size_t n = p.values.size();
    if (scales.scales.empty() || qs.qs.empty())
        throw Error(Errc::InvalidArgument, "empty analysis grid");
    if (scales.scales.front() < order + 2)
        throw Error(Errc::InvalidArgument, "smallest scale must exceed detrend order + 1");
    if (static_cast<std::size_t>(scales.scales.back()) > n / 4)
        throw Error(Errc::TooShort, "largest scale exceeds N/4");

    const bool has_nonpositive_q = qs.qs.front() <= 0.0;

    SurfaceMatrix surface;
    surface.qgrid = qs;
    surface.scalegrid = scales;
    surface.values.assign(qs.qs.size(), std::vector<double>(scales.scales.size(), 0.0));

    std::vector<double> log_f2;
    for (std::size_t si = 0; si < scales.scales.size(); ++si) {
        const int s = scales.scales[si];
        const std::size_t ns = segment_count(n, s);
        DetrendScratch ws(s, order);

        log_f2.clear();
        log_f2.reserve(bidirectional ? 2 * ns : ns);
        auto span_all = std::span<const double>(p.values);
        for (std::size_t v = 0; v < ns; ++v) {
            const double f2 =
                detrended_ms(span_all.subspan(v * static_cast<std::size_t>(s),
                                              static_cast<std::size_t>(s)),
                             ws);
            if (f2 == 0.0 && has_nonpositive_q)
                throw Error(Errc::ZeroLocalFluctuation,
                            "zero local variance at scale " + std::to_string(s) + ", segment " +
                                std::to_string(v + 1) + " with q <= 0 requested");
            log_f2.push_back(std::log(f2));
        }
        if (bidirectional) {
            // second pass anchored at the tail
            for (std::size_t v = 0; v < ns; ++v) {
                const double f2 = detrended_ms(
                    span_all.subspan(n - (v + 1) * static_cast<std::size_t>(s),
                                     static_cast<std::size_t>(s)),
                    ws);
                if (f2 == 0.0 && has_nonpositive_q)
                    throw Error(Errc::ZeroLocalFluctuation,
                                "zero local variance at scale " + std::to_string(s) +
                                    ", tail segment " + std::to_string(v + 1) +
                                    " with q <= 0 requested");
                log_f2.push_back(std::log(f2));
            }
        }

        const double inv_count = 1.0 / static_cast<double>(log_f2.size());
        for (std::size_t qi = 0; qi < qs.qs.size(); ++qi) {
            const double q = qs.qs[qi];
            double fq;
            if (q == 0.0) {
                double acc = 0.0;
                for (double lf : log_f2) acc += lf;
                fq = std::exp(0.5 * acc * inv_count);
            } else {
                double acc = 0.0;
                const double half_q = 0.5 * q;
                for (double lf : log_f2) acc += std::exp(half_q * lf);
                fq = std::pow(acc * inv_count, 1.0 / q);
            }
            if (!std::isfinite(fq) || fq <= 0.0)
                throw Error(Errc::ZeroLocalFluctuation,
                            "degenerate fluctuation value at scale " + std::to_string(s));
            surface.values[qi][si] = fq;
        }
    }
    return surface;
}

HurstSpectrum hurst_exponents(const SurfaceMatrix& surface) {
    if (surface.scalegrid.scales.size() < 4)
        throw Error(Errc::InvalidArgument, "hurst regression needs >= 4 scales");
    std::vector<double> log_s(surface.scalegrid.scales.size());
    for (std::size_t i = 0; i < log_s.size(); ++i)
        log_s[i] = std::log(static_cast<double>(surface.scalegrid.scales[i]));

    HurstSpectrum out;
    out.qgrid = surface.qgrid;
    out.h.resize(surface.qgrid.qs.size());
    out.r2.resize(surface.qgrid.qs.size());
    std::vector<double> log_f(log_s.size());
    for (std::size_t qi = 0; qi < surface.qgrid.qs.size(); ++qi) {
        for (std::size_t si = 0; si < log_s.size(); ++si)
            log_f[si] = std::log(surface.values[qi][si]);
        const LineFit fit = fit_line(log_s, log_f);
        out.h[qi] = fit.slope;
        out.r2[qi] = fit.r2;
    }
    return out;
}

MultifractalResult mfdfa_analyze(const TimeSeries& x, const MfdfaConfig& cfg) {
    check_order(cfg.detrend_order);
    const std::size_t n = x.samples.size();
    if (cfg.scale_min < cfg.detrend_order + 2)
        throw Error(Errc::InvalidArgument, "scale_min must exceed detrend order + 1");
    if (n < 4 * static_cast<std::size_t>(cfg.scale_min))
        throw Error(Errc::TooShort, "series shorter than 4 * scale_min");
    const int s_max =
        cfg.scale_max > 0 ? cfg.scale_max : static_cast<int>(n / 4);
    if (s_max < cfg.scale_min) throw Error(Errc::TooShort, "scale range is empty");

    const ScaleGrid scales = log_spaced_scales(cfg.scale_min, s_max, cfg.scale_count);
    if (scales.scales.size() < 4)
        throw Error(Errc::TooShort, "fewer than 4 usable scales");
    const QGrid qs = uniform_qgrid(cfg.q_min, cfg.q_max, cfg.q_step);

    const Profile p = profile(x);
    MultifractalResult result;
    result.method = Method::Mfdfa;
    result.surface = fluctuation_function(p, scales, qs, cfg.detrend_order, cfg.bidirectional);
    result.hurst = hurst_exponents(result.surface);
    result.tau = tau_from_h(result.hurst);
    result.spectrum = legendre(result.tau);
    result.spectrum.source = Method::Mfdfa;
    result.fit = fit_spectrum(result.spectrum);
    return result;
}

}  // namespace mfspeech
