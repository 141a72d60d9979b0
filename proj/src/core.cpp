#include "mfspeech/core.hpp"

#include <algorithm>
#include <cmath>

namespace mfspeech {

const char* to_string(EmotionLabel label) {
    switch (label) {
        case EmotionLabel::Happiness: return "Happiness";
        case EmotionLabel::Neutral: return "Neutral";
        case EmotionLabel::Sadness: return "Sadness";
    }
    return "?";
}

bool label_from_string(const std::string& name, EmotionLabel& out) {
    if (name == "Happiness") {
        out = EmotionLabel::Happiness;
    } else if (name == "Neutral") {
        out = EmotionLabel::Neutral;
    } else if (name == "Sadness") {
        out = EmotionLabel::Sadness;
    } else {
        return false;
    }
    return true;
}

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::MalformedContainer: return "MalformedContainer";
        case Errc::UnsupportedEncoding: return "UnsupportedEncoding";
        case Errc::EmptyData: return "EmptyData";
        case Errc::AllZeroSignal: return "AllZeroSignal";
        case Errc::MalformedName: return "MalformedName";
        case Errc::IoError: return "IoError";
        case Errc::QZero: return "QZero";
        case Errc::NonPowerOfTwo: return "NonPowerOfTwo";
        case Errc::TooShort: return "TooShort";
        case Errc::SignalTooShortForScale: return "SignalTooShortForScale";
        case Errc::NonFiniteFeature: return "NonFiniteFeature";
        case Errc::SingleClass: return "SingleClass";
        case Errc::ClassMismatch: return "ClassMismatch";
        case Errc::InsufficientSamples: return "InsufficientSamples";
        case Errc::UnsupportedOrder: return "UnsupportedOrder";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::EmbeddingNotPSD: return "EmbeddingNotPSD";
        case Errc::DegenerateFit: return "DegenerateFit";
        case Errc::ZeroLocalFluctuation: return "ZeroLocalFluctuation";
        case Errc::NoMaximaAtScale: return "NoMaximaAtScale";
        case Errc::DegenerateSpectrum: return "DegenerateSpectrum";
        case Errc::UpwardParabola: return "UpwardParabola";
        case Errc::CollinearPoints: return "CollinearPoints";
        case Errc::NoRealRoots: return "NoRealRoots";
        case Errc::ZeroVarianceFeature: return "ZeroVarianceFeature";
    }
    return "UnknownError";
}

int exit_code_for(Errc c) {
    switch (c) {
        case Errc::EmbeddingNotPSD:
        case Errc::DegenerateFit:
        case Errc::ZeroLocalFluctuation:
        case Errc::NoMaximaAtScale:
        case Errc::DegenerateSpectrum:
        case Errc::UpwardParabola:
        case Errc::CollinearPoints:
        case Errc::NoRealRoots:
        case Errc::ZeroVarianceFeature:
            return 3;
        default:
            return 2;
    }
}

ScaleGrid log_spaced_scales(int s_min, int s_max, int count) {
    if (s_min < 1 || s_max < s_min || count < 1)
        throw Error(Errc::InvalidArgument, "bad scale grid request");
    ScaleGrid grid;
    grid.scales.reserve(static_cast<std::size_t>(count));
    const double lo = std::log(static_cast<double>(s_min));
    const double hi = std::log(static_cast<double>(s_max));
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        const int s = static_cast<int>(std::lround(std::exp(lo + t * (hi - lo))));
        if (grid.scales.empty() || s > grid.scales.back())
            grid.scales.push_back(std::clamp(s, s_min, s_max));
    }
    return grid;
}

QGrid uniform_qgrid(double q_min, double q_max, double step) {
    if (!(step > 0.0) || q_max < q_min)
        throw Error(Errc::InvalidArgument, "bad q grid request");
    QGrid grid;
    const int n = static_cast<int>(std::floor((q_max - q_min) / step + 0.5)) + 1;
    grid.qs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double q = q_min + i * step;
        // snap values that land on integers/zero so q == 0 is detected exactly
        if (std::abs(q - std::lround(q)) < 1e-12) q = static_cast<double>(std::lround(q));
        if (q > q_max + 1e-12) break;
        grid.qs.push_back(q);
    }
    return grid;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw Error(Errc::InvalidArgument, "fit_line needs >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw Error(Errc::InvalidArgument, "fit_line: degenerate abscissa");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

double mean(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

}  // namespace mfspeech
