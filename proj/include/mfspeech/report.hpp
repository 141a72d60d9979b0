#pragma once

#include <string>

#include "mfspeech/features.hpp"
#include "mfspeech/spectrum.hpp"
#include "mfspeech/svm.hpp"

namespace mfspeech {

// Compact JSON object describing the full analysis configuration; embedded in
// every output for provenance.
std::string analysis_config_json(const AnalysisConfig& cfg);

// Sectioned CSV: the raw surface (F_q(s) or Z(q,s)), the per-q exponents,
// and the (alpha, f) spectrum points with their pruned flag.
std::string spectrum_csv(const MultifractalResult& result, const AnalysisConfig& cfg);

// SpectrumFit summary JSON with the config embedded.
std::string fit_json(const MultifractalResult& result, const AnalysisConfig& cfg);

// Cross-validation report JSON: mean/std accuracy plus per-run matrices.
std::string cross_validation_json(const CrossValidation& cv, int runs, int test_per_class,
                                  std::uint64_t seed, double c_regularization);

std::string confusion_json(const ConfusionMatrix& cm);

}  // namespace mfspeech
