#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfspeech {

// A uniformly sampled real-valued signal. Amplitudes are dimensionless,
// sample_rate is in Hz. Both fractal estimators only care about sample
// indices, so sample_rate is carried for provenance and WAV output.
struct TimeSeries {
    std::vector<double> samples;
    double sample_rate = 1.0;

    std::size_t size() const { return samples.size(); }
};

// The three in-scope emotion classes. The numeric order is fixed and used
// for confusion-matrix indexing everywhere.
enum class EmotionLabel : int { Happiness = 0, Neutral = 1, Sadness = 2 };
inline constexpr int kNumLabels = 3;

const char* to_string(EmotionLabel label);
// Returns true and sets `out` on success; false for unknown names.
bool label_from_string(const std::string& name, EmotionLabel& out);

enum class Errc {
    // input / IO
    MalformedContainer,
    UnsupportedEncoding,
    EmptyData,
    AllZeroSignal,
    MalformedName,
    IoError,
    QZero,
    NonPowerOfTwo,
    TooShort,
    SignalTooShortForScale,
    NonFiniteFeature,
    SingleClass,
    ClassMismatch,
    InsufficientSamples,
    UnsupportedOrder,
    InvalidArgument,
    // degenerate analysis
    EmbeddingNotPSD,
    DegenerateFit,
    ZeroLocalFluctuation,
    NoMaximaAtScale,
    DegenerateSpectrum,
    UpwardParabola,
    CollinearPoints,
    NoRealRoots,
    ZeroVarianceFeature,
};

const char* errc_name(Errc c);

// CLI exit-code category: 2 for input/IO problems, 3 for analyses that ran
// into degenerate mathematics. Usage errors (1) never reach Error.
int exit_code_for(Errc c);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

// Window sizes (in samples) used by both estimators; strictly increasing.
struct ScaleGrid {
    std::vector<int> scales;
};

// Moment orders; strictly increasing, may contain 0.
struct QGrid {
    std::vector<double> qs;
};

// `count` log-spaced integer scales in [s_min, s_max], duplicates removed.
ScaleGrid log_spaced_scales(int s_min, int s_max, int count);

// Uniform grid from q_min to q_max inclusive (step > 0).
QGrid uniform_qgrid(double q_min, double q_max, double step);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
};

// Ordinary least-squares line through (x, y).
LineFit fit_line(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);

}  // namespace mfspeech
