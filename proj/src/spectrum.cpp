#include "mfspeech/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace mfspeech {

const char* to_string(Method m) { return m == Method::Mfdfa ? "mfdfa" : "wtmm"; }

std::vector<SpectrumPoint> SingularitySpectrum::survivors_by_alpha() const {
    std::vector<SpectrumPoint> out;
    out.reserve(points.size());
    for (const auto& p : points)
        if (!p.pruned) out.push_back(p);
    std::sort(out.begin(), out.end(),
              [](const SpectrumPoint& a, const SpectrumPoint& b) { return a.alpha < b.alpha; });
    return out;
}

SpectrumPoint SingularitySpectrum::apex() const {
    const SpectrumPoint* best = nullptr;
    for (const auto& p : points)
        if (!p.pruned && (best == nullptr || p.f > best->f)) best = &p;
    if (best == nullptr) throw Error(Errc::DegenerateSpectrum, "empty spectrum");
    return *best;
}

ScalingExponents tau_from_h(const HurstSpectrum& hurst) {
    ScalingExponents out;
    out.qgrid = hurst.qgrid;
    out.r2 = hurst.r2;
    out.tau.resize(hurst.h.size());
    for (std::size_t i = 0; i < hurst.h.size(); ++i)
        out.tau[i] = hurst.qgrid.qs[i] * hurst.h[i] - 1.0;
    return out;
}

namespace {

// Longest strictly-decreasing subsequence; returns a keep-mask. Keeps the
// coherent concave branch and drops outliers wherever they sit.
std::vector<bool> decreasing_branch_mask(const std::vector<double>& alpha) {
    const std::size_t n = alpha.size();
    std::vector<int> best(n, 1), prev(n, -1);
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (alpha[i] < alpha[j] && best[j] + 1 > best[i]) {
                best[i] = best[j] + 1;
                prev[i] = static_cast<int>(j);
            }
        }
    }
    std::size_t end = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (best[i] > best[end]) end = i;
    std::vector<bool> keep(n, false);
    for (int i = static_cast<int>(end); i >= 0; i = prev[static_cast<std::size_t>(i)]) {
        keep[static_cast<std::size_t>(i)] = true;
        if (prev[static_cast<std::size_t>(i)] < 0) break;
    }
    return keep;
}

}  // namespace

SingularitySpectrum legendre(const ScalingExponents& tau) {
    const auto& qs = tau.qgrid.qs;
    const auto& t = tau.tau;
    if (qs.size() < 3 || t.size() != qs.size())
        throw Error(Errc::DegenerateSpectrum, "legendre needs >= 3 tau points");

    const std::size_t n = qs.size();
    std::vector<double> alpha(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0) {
            // second-order one-sided difference (exact on quadratics)
            const double h1 = qs[1] - qs[0], h2 = qs[2] - qs[0];
            alpha[i] = (t[1] - t[0]) / h1 * (h2 / (h2 - h1)) -
                       (t[2] - t[0]) / h2 * (h1 / (h2 - h1));
        } else if (i == n - 1) {
            const double h1 = qs[n - 1] - qs[n - 2], h2 = qs[n - 1] - qs[n - 3];
            alpha[i] = (t[n - 1] - t[n - 2]) / h1 * (h2 / (h2 - h1)) -
                       (t[n - 1] - t[n - 3]) / h2 * (h1 / (h2 - h1));
        } else {
            alpha[i] = (t[i + 1] - t[i - 1]) / (qs[i + 1] - qs[i - 1]);
        }
    }

    const std::vector<bool> keep = decreasing_branch_mask(alpha);

    SingularitySpectrum spec;
    spec.points.resize(n);
    int survivors = 0;
    for (std::size_t i = 0; i < n; ++i) {
        SpectrumPoint& p = spec.points[i];
        p.q = qs[i];
        p.tau = t[i];
        p.alpha = alpha[i];
        p.f = qs[i] * alpha[i] - t[i];
        p.pruned = !keep[i];
        if (!p.pruned) ++survivors;
    }
    spec.pruned_count = static_cast<int>(n) - survivors;
    if (survivors < 3)
        throw Error(Errc::DegenerateSpectrum,
                    "fewer than 3 spectrum points survive pruning (monofractal collapse)");
    return spec;
}

SpectrumFit quadratic_fit(const SingularitySpectrum& spec) {
    std::vector<SpectrumPoint> pts = spec.survivors_by_alpha();
    if (pts.size() < 3)
        throw Error(Errc::DegenerateSpectrum, "quadratic fit needs >= 3 spectrum points");

    // apex neighbourhood: the upper half of the hump
    std::vector<SpectrumPoint> window;
    for (const auto& p : pts)
        if (p.f >= 0.5) window.push_back(p);
    if (window.size() < 5) window = pts;

    const std::size_t n = window.size();
    double mean_alpha = 0.0;
    for (const auto& p : window) mean_alpha += p.alpha;
    mean_alpha /= static_cast<double>(n);

    double span = 0.0, fmax = 0.0;
    for (const auto& p : window) {
        span = std::max(span, std::abs(p.alpha - mean_alpha));
        fmax = std::max(fmax, std::abs(p.f));
    }
    if (span == 0.0) throw Error(Errc::CollinearPoints, "all fit points share one alpha");

    // centered normal equations for f = c2 u^2 + c1 u + c0, u = alpha - mean
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    double b0 = 0, b1 = 0, b2 = 0;
    for (const auto& p : window) {
        const double u = p.alpha - mean_alpha;
        const double u2 = u * u;
        s1 += u;
        s2 += u2;
        s3 += u2 * u;
        s4 += u2 * u2;
        b0 += p.f;
        b1 += u * p.f;
        b2 += u2 * p.f;
    }
    double m[3][4] = {{static_cast<double>(n), s1, s2, b0}, {s1, s2, s3, b1}, {s2, s3, s4, b2}};
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
        std::swap(m[col], m[pivot]);
        if (std::abs(m[col][col]) < 1e-14 * (s4 + s2 + n))
            throw Error(Errc::CollinearPoints, "singular quadratic fit");
        for (int row = col + 1; row < 3; ++row) {
            const double k = m[row][col] / m[col][col];
            for (int j = col; j < 4; ++j) m[row][j] -= k * m[col][j];
        }
    }
    double coef[3];
    for (int row = 2; row >= 0; --row) {
        double acc = m[row][3];
        for (int j = row + 1; j < 3; ++j) acc -= m[row][j] * coef[j];
        coef[row] = acc / m[row][row];
    }
    const double c0 = coef[0], c1 = coef[1], c2 = coef[2];

    // collinear data fits a line exactly; the tiny leftover curvature is noise
    if (std::abs(c2) * span * span <= 1e-9 * (fmax + std::abs(c1) * span + 1e-30))
        throw Error(Errc::CollinearPoints, "fit points are collinear");
    if (c2 >= 0.0) throw Error(Errc::UpwardParabola, "spectrum fit opens upward");

    SpectrumFit fit;
    fit.A = c2;
    fit.B = c1 + 2.0 * c2 * mean_alpha;  // raw linear coefficient in alpha
    fit.alpha0 = mean_alpha - c1 / (2.0 * c2);
    fit.C = c0 - c1 * c1 / (4.0 * c2);  // vertex ordinate f(alpha0)
    fit.n_points_fit = static_cast<int>(n);

    double rss = 0.0;
    for (const auto& p : window) {
        const double u = p.alpha - mean_alpha;
        const double e = p.f - (c2 * u * u + c1 * u + c0);
        rss += e * e;
    }
    fit.residual_rms = std::sqrt(rss / static_cast<double>(n));
    return fit;
}

SpectrumWidth spectrum_width(const SpectrumFit& fit) {
    if (!(fit.A < 0.0)) throw Error(Errc::UpwardParabola, "width needs a downward parabola");
    if (!(fit.C > 0.0))
        throw Error(Errc::NoRealRoots, "fitted parabola never reaches zero");
    const double r = std::sqrt(-fit.C / fit.A);
    SpectrumWidth w;
    w.alpha1 = fit.alpha0 - r;
    w.alpha2 = fit.alpha0 + r;
    w.width = w.alpha2 - w.alpha1;
    return w;
}

SpectrumFit fit_spectrum(const SingularitySpectrum& spec) {
    SpectrumFit fit = quadratic_fit(spec);
    const SpectrumWidth w = spectrum_width(fit);
    fit.alpha1 = w.alpha1;
    fit.alpha2 = w.alpha2;
    fit.width = w.width;
    return fit;
}

double low_fluct_area(const SingularitySpectrum& spec) {
    const std::vector<SpectrumPoint> pts = spec.survivors_by_alpha();
    if (pts.size() < 2) throw Error(Errc::DegenerateSpectrum, "not enough spectrum points");

    std::size_t apex = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].f > pts[apex].f) apex = i;
    if (apex < 1)
        throw Error(Errc::DegenerateSpectrum, "no points below the spectrum apex");

    double area = 0.0;
    for (std::size_t i = 0; i < apex; ++i)
        area += 0.5 * (pts[i].f + pts[i + 1].f) * (pts[i + 1].alpha - pts[i].alpha);
    return area;
}

}  // namespace mfspeech
