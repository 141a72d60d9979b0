#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mfspeech/audio_io.hpp"
#include "mfspeech/features.hpp"
#include "mfspeech/report.hpp"
#include "mfspeech/seriesio.hpp"
#include "mfspeech/svm.hpp"
#include "mfspeech/synth.hpp"

namespace fs = std::filesystem;
using namespace mfspeech;

namespace {

struct CliOptions {
    AnalysisConfig cfg;
    std::string method = "both";
    std::string cwt_mode = "direct";
    std::string boundary = "truncate";
    // overrides applied to both estimators when set
    int scale_min = 0;
    int scale_max = -1;  // -1 untouched; 0 = auto (N/4 resp. N/16)
    int scale_count = 0;
    double q_min = 0.0, q_max = 0.0, q_step = 0.0;
    bool q_range_set = false;
    bool q_step_set = false;
};

void add_analysis_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--dfa-order", opt.cfg.mfdfa.detrend_order,
                    "MFDFA detrending polynomial order (0-3)")
        ->check(CLI::Range(0, 3));
    cmd->add_flag("--dfa-bidirectional", opt.cfg.mfdfa.bidirectional,
                  "Add a second segmentation pass anchored at the tail");
    cmd->add_option("--wavelet-order", opt.cfg.wtmm.wavelet_order,
                    "Gaussian-derivative wavelet order m (1-4)")
        ->check(CLI::Range(1, 4));
    cmd->add_option("--cwt", opt.cwt_mode, "CWT evaluation: direct or fft")
        ->check(CLI::IsMember({"direct", "fft"}));
    cmd->add_option("--wtmm-boundary", opt.boundary, "CWT boundary handling: truncate or periodic")
        ->check(CLI::IsMember({"truncate", "periodic"}));
    cmd->add_option("--smin", opt.scale_min, "Smallest scale for both estimators");
    cmd->add_option("--smax", opt.scale_max,
                    "Largest scale for both estimators (0 = auto N/4 resp. N/16)");
    cmd->add_option("--scales", opt.scale_count, "Number of log-spaced scales");
    cmd->add_option("--qmin", opt.q_min, "Smallest moment order")
        ->each([&opt](const std::string&) { opt.q_range_set = true; });
    cmd->add_option("--qmax", opt.q_max, "Largest moment order")
        ->each([&opt](const std::string&) { opt.q_range_set = true; });
    cmd->add_option("--qstep", opt.q_step, "Moment-order grid step")
        ->each([&opt](const std::string&) { opt.q_step_set = true; });
}

void resolve_analysis_flags(CliOptions& opt) {
    opt.cfg.wtmm.use_fft = opt.cwt_mode == "fft";
    opt.cfg.wtmm.boundary =
        opt.boundary == "periodic" ? CwtBoundary::Periodic : CwtBoundary::Truncate;
    if (opt.scale_min > 0) {
        opt.cfg.mfdfa.scale_min = opt.scale_min;
        opt.cfg.wtmm.scale_min = opt.scale_min;
    }
    if (opt.scale_max >= 0) {
        opt.cfg.mfdfa.scale_max = opt.scale_max;
        opt.cfg.wtmm.scale_max = opt.scale_max;
    }
    if (opt.scale_count > 0) {
        opt.cfg.mfdfa.scale_count = opt.scale_count;
        opt.cfg.wtmm.scale_count = opt.scale_count;
    }
    if (opt.q_range_set) {
        opt.cfg.mfdfa.q_min = opt.q_min;
        opt.cfg.mfdfa.q_max = opt.q_max;
        opt.cfg.wtmm.q_min = opt.q_min;
        opt.cfg.wtmm.q_max = opt.q_max;
    }
    if (opt.q_step_set) {
        opt.cfg.mfdfa.q_step = opt.q_step;
        opt.cfg.wtmm.q_step = opt.q_step;
    }
}

std::string lower_extension(const std::string& path) {
    std::string ext = fs::path(path).extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

void write_series(const std::string& path, TimeSeries x, const std::string& comment) {
    if (lower_extension(path) == ".wav") {
        x.sample_rate = 16000.0;
        write_wav_float32(path, x);
    } else {
        write_series_csv(path, x, comment);
    }
}

int cmd_analyze(CliOptions& opt, const std::string& input, const std::string& out_dir) {
    const TimeSeries x = load_series(input);
    fs::create_directories(out_dir);
    const std::string stem = fs::path(input).stem().string();

    std::vector<MultifractalResult> results;
    if (opt.method == "mfdfa" || opt.method == "both")
        results.push_back(mfdfa_analyze(x, opt.cfg.mfdfa));
    if (opt.method == "wtmm" || opt.method == "both")
        results.push_back(wtmm_analyze(x, opt.cfg.wtmm));

    for (const auto& result : results) {
        const std::string base =
            (fs::path(out_dir) / (stem + "." + to_string(result.method))).string();
        write_text_file(base + ".spectrum.csv", spectrum_csv(result, opt.cfg));
        write_text_file(base + ".fit.json", fit_json(result, opt.cfg));
        std::cout << base << ".spectrum.csv\n" << base << ".fit.json\n";
    }
    return 0;
}

int cmd_features(CliOptions& opt, const std::string& root, const std::string& convention,
                 const std::string& out, unsigned jobs) {
    const Corpus corpus = convention == "berlin" ? Corpus::Berlin : Corpus::Tess;
    const std::vector<CorpusEntry> entries = scan_corpus(root, corpus);
    if (entries.empty()) throw Error(Errc::EmptyData, "no in-scope clips under " + root);

    struct Slot {
        std::optional<FeatureVector> fv;
        std::string error;
    };
    std::vector<Slot> slots(entries.size());
    std::atomic<std::size_t> cursor{0};
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());

    auto worker = [&]() {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= entries.size()) return;
            try {
                const TimeSeries x = normalize_peak(load_wav(entries[i].path));
                FeatureVector fv = extract_features(x, opt.cfg);
                fv.path = entries[i].path;
                fv.label = entries[i].label;
                slots[i].fv = std::move(fv);
            } catch (const std::exception& e) {
                slots[i].error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<FeatureVector> rows;
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (slots[i].fv) {
            rows.push_back(std::move(*slots[i].fv));
        } else {
            ++skipped;
            std::cerr << "skipping " << entries[i].path << ": " << slots[i].error << "\n";
        }
    }
    // scan order is already path-sorted; keep the byte contract explicit
    std::sort(rows.begin(), rows.end(),
              [](const FeatureVector& a, const FeatureVector& b) { return a.path < b.path; });
    write_text_file(out, features_to_csv(rows, analysis_config_json(opt.cfg)));
    std::cout << out << ": " << rows.size() << " rows\n";
    std::cerr << "skipped " << skipped << " of " << entries.size() << " clips\n";
    return 0;
}

std::vector<LabeledSample> labeled_samples(const std::vector<FeatureVector>& rows) {
    std::vector<LabeledSample> out;
    for (const auto& fv : rows) {
        if (!fv.label) throw Error(Errc::InvalidArgument, "unlabeled feature row: " + fv.path);
        out.push_back({fv.values(), *fv.label});
    }
    return out;
}

int cmd_train(CliOptions& opt, const std::string& features_path, const std::string& out) {
    const auto rows = features_from_csv(read_text_file(features_path));
    const SvmModel model = train_classifier(labeled_samples(rows), opt.cfg.svm_c);
    write_text_file(out, model_to_json(model));
    std::cout << out << "\n";
    return 0;
}

bool looks_like_features_csv(const std::string& path) {
    if (lower_extension(path) != ".csv") return false;
    std::istringstream in(read_text_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        return line.rfind("path,label,", 0) == 0;
    }
    return false;
}

int cmd_predict(CliOptions& opt, const std::string& model_path, const std::string& input) {
    const SvmModel model = model_from_json(read_text_file(model_path));
    if (looks_like_features_csv(input)) {
        for (const auto& fv : features_from_csv(read_text_file(input)))
            std::cout << fv.path << "," << to_string(svm_predict(model, fv.values())) << "\n";
        return 0;
    }
    TimeSeries x = load_series(input);
    if (lower_extension(input) == ".wav") x = normalize_peak(x);
    const FeatureVector fv = extract_features(x, opt.cfg);
    std::cout << to_string(svm_predict(model, fv.values())) << "\n";
    return 0;
}

const char* corpus_of_path(const std::string& path) {
    try {
        if (parse_label_berlin(path)) return "berlin";
    } catch (const Error&) {
    }
    try {
        if (parse_label_tess(path)) return "tess";
    } catch (const Error&) {
    }
    return "other";
}

int cmd_evaluate(CliOptions& opt, const std::string& features_path, const std::string& model_path,
                 int runs, int test_per_class, bool per_corpus, const std::string& out) {
    const auto rows = features_from_csv(read_text_file(features_path));
    const auto samples = labeled_samples(rows);

    if (!model_path.empty()) {
        const SvmModel model = model_from_json(read_text_file(model_path));
        const ConfusionMatrix cm = evaluate(model, samples);
        std::cout << cm.table() << "accuracy: " << fmt_double(cm.accuracy()) << "\n";
        if (!out.empty()) write_text_file(out, confusion_json(cm));
        return 0;
    }

    const CrossValidation cv =
        cross_validate(samples, runs, test_per_class, opt.cfg.seed, opt.cfg.svm_c);
    for (std::size_t r = 0; r < cv.runs.size(); ++r)
        std::cout << "run " << (r + 1) << " (accuracy " << fmt_double(cv.runs[r].accuracy())
                  << "):\n"
                  << cv.runs[r].table();
    std::printf("mean accuracy: %.4f (%.2f%%)\n", cv.mean_accuracy, 100.0 * cv.mean_accuracy);
    std::printf("std  accuracy: %.4f (%.3f%%)\n", cv.std_accuracy, 100.0 * cv.std_accuracy);

    if (per_corpus) {
        // per-language diagnostic: the same protocol within each convention
        std::map<std::string, std::vector<LabeledSample>> groups;
        for (std::size_t i = 0; i < rows.size(); ++i)
            groups[corpus_of_path(rows[i].path)].push_back(samples[i]);
        for (const auto& [name, group] : groups) {
            try {
                const CrossValidation gcv =
                    cross_validate(group, runs, test_per_class, opt.cfg.seed, opt.cfg.svm_c);
                std::printf("corpus %-7s n=%4zu mean accuracy: %.4f std: %.4f\n", name.c_str(),
                            group.size(), gcv.mean_accuracy, gcv.std_accuracy);
            } catch (const Error& e) {
                std::printf("corpus %-7s n=%4zu skipped (%s)\n", name.c_str(), group.size(),
                            e.what());
            }
        }
    }
    if (!out.empty())
        write_text_file(
            out, cross_validation_json(cv, runs, test_per_class, opt.cfg.seed, opt.cfg.svm_c));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multifractal speech-emotion analysis toolchain"};
    app.require_subcommand(1);
    app.fallthrough();

    CliOptions opt;
    app.add_option("--seed", opt.cfg.seed, "Seed for every random choice");
    app.add_option("--svm-c", opt.cfg.svm_c, "SVM regularization C");
    app.set_config("--config", "", "Read options from a key=value file");

    auto* synth_cmd = app.add_subcommand("synth", "Generate a reference signal");
    synth_cmd->require_subcommand(1);
    double a = 0.75, hurst = 0.7;
    int levels = 16;
    std::size_t n = 65536;
    std::string synth_out, synth_in;
    auto* cascade_cmd = synth_cmd->add_subcommand("cascade", "Binomial multiplicative cascade");
    cascade_cmd->add_option("--a", a, "Cascade multiplier in [0.5, 1)");
    cascade_cmd->add_option("--levels", levels, "Length is 2^levels");
    cascade_cmd->add_option("--out", synth_out, "Output .csv or .wav")->required();
    auto* noise_cmd = synth_cmd->add_subcommand("noise", "Gaussian white noise");
    noise_cmd->add_option("--n", n, "Sample count");
    noise_cmd->add_option("--out", synth_out, "Output .csv or .wav")->required();
    auto* fgn_cmd = synth_cmd->add_subcommand("fgn", "Fractional Gaussian noise");
    fgn_cmd->add_option("--n", n, "Sample count (power of two)");
    fgn_cmd->add_option("--hurst", hurst, "Hurst exponent in (0, 1)");
    fgn_cmd->add_option("--out", synth_out, "Output .csv or .wav")->required();
    auto* shuffle_cmd = synth_cmd->add_subcommand("shuffle", "Random permutation of a series");
    shuffle_cmd->add_option("--in", synth_in, "Input .csv or .wav")->required();
    shuffle_cmd->add_option("--out", synth_out, "Output .csv or .wav")->required();

    auto* analyze_cmd = app.add_subcommand("analyze", "Multifractal analysis of one series");
    std::string analyze_input, out_dir = ".";
    analyze_cmd->add_option("input", analyze_input, "WAV or single-column CSV")->required();
    analyze_cmd->add_option("--method", opt.method, "mfdfa, wtmm or both")
        ->check(CLI::IsMember({"mfdfa", "wtmm", "both"}));
    analyze_cmd->add_option("--out-dir", out_dir, "Output directory");
    add_analysis_flags(analyze_cmd, opt);

    auto* features_cmd = app.add_subcommand("features", "Extract (S, alpha1, alpha2) per clip");
    std::string corpus_root, convention, features_out = "features.csv";
    unsigned jobs = 0;
    features_cmd->add_option("--root", corpus_root, "Corpus root directory")->required();
    features_cmd->add_option("--convention", convention, "berlin or tess")
        ->required()
        ->check(CLI::IsMember({"berlin", "tess"}));
    features_cmd->add_option("--out", features_out, "Feature CSV path");
    features_cmd->add_option("--jobs", jobs, "Worker threads (0 = logical CPUs)");
    add_analysis_flags(features_cmd, opt);

    auto* train_cmd = app.add_subcommand("train", "Train the linear SVM on a feature CSV");
    std::string train_features, model_out = "model.json";
    train_cmd->add_option("--features", train_features, "Feature CSV")->required();
    train_cmd->add_option("--out", model_out, "Model JSON path");

    auto* predict_cmd = app.add_subcommand("predict", "Classify a clip or a feature CSV");
    std::string predict_model, predict_input;
    predict_cmd->add_option("--model", predict_model, "Model JSON")->required();
    predict_cmd->add_option("input", predict_input, "WAV, series CSV or feature CSV")->required();
    add_analysis_flags(predict_cmd, opt);

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Cross-validate or score a model");
    std::string eval_features, eval_model, eval_out;
    int runs = 10, test_per_class = 12;
    bool per_corpus = false;
    evaluate_cmd->add_option("--features", eval_features, "Feature CSV")->required();
    evaluate_cmd->add_option("--model", eval_model, "Score this model instead of cross-validating");
    evaluate_cmd->add_option("--runs", runs, "Cross-validation runs");
    evaluate_cmd->add_option("--test-per-class", test_per_class, "Held-out clips per class");
    evaluate_cmd->add_flag("--per-corpus", per_corpus, "Report per-corpus accuracy diagnostic");
    evaluate_cmd->add_option("--out", eval_out, "Write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        resolve_analysis_flags(opt);
        if (cascade_cmd->parsed()) {
            TimeSeries series = binomial_cascade({a, levels});
            write_series(synth_out, std::move(series),
                         "mfspeech series v1 kind=cascade a=" + fmt_double(a) +
                             " levels=" + std::to_string(levels));
            std::cout << synth_out << "\n";
            return 0;
        }
        if (noise_cmd->parsed()) {
            write_series(synth_out, white_noise(n, opt.cfg.seed),
                         "mfspeech series v1 kind=noise n=" + std::to_string(n) +
                             " seed=" + std::to_string(opt.cfg.seed));
            std::cout << synth_out << "\n";
            return 0;
        }
        if (fgn_cmd->parsed()) {
            write_series(synth_out, fgn(n, hurst, opt.cfg.seed),
                         "mfspeech series v1 kind=fgn n=" + std::to_string(n) +
                             " hurst=" + fmt_double(hurst) +
                             " seed=" + std::to_string(opt.cfg.seed));
            std::cout << synth_out << "\n";
            return 0;
        }
        if (shuffle_cmd->parsed()) {
            write_series(synth_out, shuffle(load_series(synth_in), opt.cfg.seed),
                         "mfspeech series v1 kind=shuffle seed=" + std::to_string(opt.cfg.seed));
            std::cout << synth_out << "\n";
            return 0;
        }
        if (analyze_cmd->parsed()) return cmd_analyze(opt, analyze_input, out_dir);
        if (features_cmd->parsed())
            return cmd_features(opt, corpus_root, convention, features_out, jobs);
        if (train_cmd->parsed()) return cmd_train(opt, train_features, model_out);
        if (predict_cmd->parsed()) return cmd_predict(opt, predict_model, predict_input);
        if (evaluate_cmd->parsed())
            return cmd_evaluate(opt, eval_features, eval_model, runs, test_per_class, per_corpus,
                                eval_out);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 1;
}
