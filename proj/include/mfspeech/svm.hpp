#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mfspeech/core.hpp"

namespace mfspeech {

// Per-feature z-score parameters fitted on a training set. Features with
// zero variance keep deviation 1 so the transform stays total; fitting
// fails only when every feature is degenerate.
struct Standardizer {
    std::vector<double> means;
    std::vector<double> stds;

    static Standardizer identity(std::size_t dims);
    std::vector<double> transform(const std::vector<double>& x) const;
};

std::pair<Standardizer, std::vector<std::vector<double>>> standardize(
    const std::vector<std::vector<double>>& rows);

struct LabeledSample {
    std::vector<double> features;
    EmotionLabel label = EmotionLabel::Neutral;
};

// One binary maximum-margin classifier on standardized features;
// decision >= 0 votes class_a.
struct PairwiseSvm {
    EmotionLabel class_a = EmotionLabel::Happiness;
    EmotionLabel class_b = EmotionLabel::Neutral;
    std::vector<double> weights;
    double bias = 0.0;
    // alpha_i * y_i per training sample (class_a block first); kept for
    // KKT diagnostics, not serialized
    std::vector<double> dual_coefs;
};

struct SvmModel {
    std::vector<EmotionLabel> classes;  // sorted by label order
    Standardizer standardizer;
    std::vector<PairwiseSvm> pairwise;  // one per class pair, (a, b) with a < b
    double c_regularization = 1.0;
};

// One-vs-one linear soft-margin training on already-standardized samples via
// deterministic maximal-violating-pair coordinate ascent on the dual
// (duality gap <= 1e-6 or a fixed update cap). `standardizer` is embedded in
// the model for inference-time reuse.
SvmModel svm_train(const std::vector<LabeledSample>& standardized, double c_regularization,
                   const Standardizer& standardizer);

// standardize + svm_train in one call on raw features.
SvmModel train_classifier(const std::vector<LabeledSample>& raw, double c_regularization);

// Standardizes with the stored parameters, then majority vote; ties break by
// largest summed signed margin, then by label order.
EmotionLabel svm_predict(const SvmModel& model, const std::vector<double>& raw_features);

struct ConfusionMatrix {
    std::array<std::array<int, kNumLabels>, kNumLabels> counts{};  // [true][predicted]

    int total() const;
    double accuracy() const;
    std::string table() const;  // aligned text rendering
};

ConfusionMatrix evaluate(const SvmModel& model, const std::vector<LabeledSample>& test);

struct CrossValidation {
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;  // population deviation across runs
    std::vector<ConfusionMatrix> runs;
};

// Repeated random splits: per run, draw test_per_class samples per class
// without replacement (seeded), train on the remainder, evaluate.
CrossValidation cross_validate(const std::vector<LabeledSample>& data, int runs,
                               int test_per_class, std::uint64_t seed, double c_regularization);

std::string model_to_json(const SvmModel& model);
SvmModel model_from_json(const std::string& text);

}  // namespace mfspeech
