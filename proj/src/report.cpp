#include "mfspeech/report.hpp"

#include <json.hpp>

#include "mfspeech/seriesio.hpp"

namespace mfspeech {

namespace {

nlohmann::json config_json_object(const AnalysisConfig& cfg) {
    nlohmann::json j;
    j["mfdfa"]["detrend_order"] = cfg.mfdfa.detrend_order;
    j["mfdfa"]["bidirectional"] = cfg.mfdfa.bidirectional;
    j["mfdfa"]["scale_min"] = cfg.mfdfa.scale_min;
    j["mfdfa"]["scale_max"] = cfg.mfdfa.scale_max;
    j["mfdfa"]["scale_count"] = cfg.mfdfa.scale_count;
    j["mfdfa"]["q_min"] = cfg.mfdfa.q_min;
    j["mfdfa"]["q_max"] = cfg.mfdfa.q_max;
    j["mfdfa"]["q_step"] = cfg.mfdfa.q_step;
    j["wtmm"]["wavelet_order"] = cfg.wtmm.wavelet_order;
    j["wtmm"]["half_width"] = cfg.wtmm.half_width;
    j["wtmm"]["scale_min"] = cfg.wtmm.scale_min;
    j["wtmm"]["scale_max"] = cfg.wtmm.scale_max;
    j["wtmm"]["scale_count"] = cfg.wtmm.scale_count;
    j["wtmm"]["q_min"] = cfg.wtmm.q_min;
    j["wtmm"]["q_max"] = cfg.wtmm.q_max;
    j["wtmm"]["q_step"] = cfg.wtmm.q_step;
    j["wtmm"]["use_fft"] = cfg.wtmm.use_fft;
    j["wtmm"]["boundary"] = cfg.wtmm.boundary == CwtBoundary::Periodic ? "periodic" : "truncate";
    j["svm_c"] = cfg.svm_c;
    j["seed"] = cfg.seed;
    return j;
}

nlohmann::json fit_json_object(const SpectrumFit& fit) {
    nlohmann::json j;
    j["A"] = fit.A;
    j["B"] = fit.B;
    j["C"] = fit.C;
    j["alpha0"] = fit.alpha0;
    j["alpha1"] = fit.alpha1;
    j["alpha2"] = fit.alpha2;
    j["width"] = fit.width;
    j["residual_rms"] = fit.residual_rms;
    j["n_points_fit"] = fit.n_points_fit;
    return j;
}

}  // namespace

std::string analysis_config_json(const AnalysisConfig& cfg) {
    return config_json_object(cfg).dump();
}

std::string spectrum_csv(const MultifractalResult& result, const AnalysisConfig& cfg) {
    std::string out = "# mfspeech spectrum v1\n";
    out += "# method: ";
    out += to_string(result.method);
    out += "\n# config: " + analysis_config_json(cfg) + "\n";
    if (result.negative_q_low_confidence)
        out += "# note: q < 0 rows use per-scale maxima and are low-confidence\n";

    out += "# section: surface\nq,scale,value\n";
    for (std::size_t qi = 0; qi < result.surface.qgrid.qs.size(); ++qi)
        for (std::size_t si = 0; si < result.surface.scalegrid.scales.size(); ++si)
            out += fmt_double(result.surface.qgrid.qs[qi]) + ',' +
                   std::to_string(result.surface.scalegrid.scales[si]) + ',' +
                   fmt_double(result.surface.values[qi][si]) + '\n';

    out += "# section: exponents\n";
    if (result.method == Method::Mfdfa) {
        out += "q,h,tau,r2\n";
        for (std::size_t qi = 0; qi < result.hurst.qgrid.qs.size(); ++qi)
            out += fmt_double(result.hurst.qgrid.qs[qi]) + ',' + fmt_double(result.hurst.h[qi]) +
                   ',' + fmt_double(result.tau.tau[qi]) + ',' + fmt_double(result.hurst.r2[qi]) +
                   '\n';
    } else {
        out += "q,tau,r2\n";
        for (std::size_t qi = 0; qi < result.tau.qgrid.qs.size(); ++qi)
            out += fmt_double(result.tau.qgrid.qs[qi]) + ',' + fmt_double(result.tau.tau[qi]) +
                   ',' + fmt_double(result.tau.r2[qi]) + '\n';
    }

    out += "# section: spectrum\nq,tau,alpha,f_alpha,pruned\n";
    for (const auto& p : result.spectrum.points)
        out += fmt_double(p.q) + ',' + fmt_double(p.tau) + ',' + fmt_double(p.alpha) + ',' +
               fmt_double(p.f) + ',' + (p.pruned ? "true" : "false") + '\n';
    return out;
}

std::string fit_json(const MultifractalResult& result, const AnalysisConfig& cfg) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["method"] = to_string(result.method);
    j["fit"] = fit_json_object(result.fit);
    j["spectrum_apex_alpha"] = result.spectrum.apex().alpha;
    j["pruned_points"] = result.spectrum.pruned_count;
    j["negative_q_low_confidence"] = result.negative_q_low_confidence;
    j["config"] = config_json_object(cfg);
    return j.dump(2) + "\n";
}

std::string confusion_json(const ConfusionMatrix& cm) {
    nlohmann::json j;
    j["counts"] = cm.counts;
    j["accuracy"] = cm.accuracy();
    j["labels"] = {to_string(EmotionLabel::Happiness), to_string(EmotionLabel::Neutral),
                   to_string(EmotionLabel::Sadness)};
    return j.dump(2) + "\n";
}

std::string cross_validation_json(const CrossValidation& cv, int runs, int test_per_class,
                                  std::uint64_t seed, double c_regularization) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["protocol"]["runs"] = runs;
    j["protocol"]["test_per_class"] = test_per_class;
    j["protocol"]["seed"] = seed;
    j["protocol"]["C"] = c_regularization;
    j["mean_accuracy"] = cv.mean_accuracy;
    j["std_accuracy"] = cv.std_accuracy;
    j["runs"] = nlohmann::json::array();
    for (const auto& cm : cv.runs) {
        nlohmann::json r;
        r["counts"] = cm.counts;
        r["accuracy"] = cm.accuracy();
        j["runs"].push_back(r);
    }
    return j.dump(2) + "\n";
}

}  // namespace mfspeech
