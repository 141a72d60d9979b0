#pragma once

#include <optional>
#include <string>

#include "mfspeech/core.hpp"
#include "mfspeech/mfdfa.hpp"
#include "mfspeech/wtmm.hpp"

namespace mfspeech {

// Everything the analysis pipeline needs, serialized with every output.
struct AnalysisConfig {
    MfdfaConfig mfdfa;
    WtmmConfig wtmm;
    double svm_c = 1.0;
    std::uint64_t seed = 0;
};

// The 3-D feature point for one clip: S is the area under the low-alpha
// branch of the MFDFA spectrum; alpha1/alpha2 are the zeros of the WTMM
// spectrum's fitted parabola.
struct FeatureVector {
    std::string path;
    std::optional<EmotionLabel> label;
    double s_area = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;

    std::vector<double> values() const { return {s_area, alpha1, alpha2}; }
};

// Runs both estimators; all-or-nothing per clip.
FeatureVector extract_features(const TimeSeries& x, const AnalysisConfig& cfg);

// Feature CSV: "# mfspeech features v1" comment, then
// path,label,S,alpha1,alpha2 rows. Unknown labels round-trip as "?".
std::string features_to_csv(const std::vector<FeatureVector>& rows, const std::string& config_comment);
std::vector<FeatureVector> features_from_csv(const std::string& text);

}  // namespace mfspeech
