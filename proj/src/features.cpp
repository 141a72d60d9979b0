#include "mfspeech/features.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "mfspeech/seriesio.hpp"
#include "mfspeech/spectrum.hpp"

namespace mfspeech {

FeatureVector extract_features(const TimeSeries& x, const AnalysisConfig& cfg) {
    const MultifractalResult dfa = mfdfa_analyze(x, cfg.mfdfa);
    const MultifractalResult wav = wtmm_analyze(x, cfg.wtmm);

    FeatureVector fv;
    fv.s_area = low_fluct_area(dfa.spectrum);
    fv.alpha1 = wav.fit.alpha1;
    fv.alpha2 = wav.fit.alpha2;
    if (!std::isfinite(fv.s_area) || !std::isfinite(fv.alpha1) || !std::isfinite(fv.alpha2))
        throw Error(Errc::NonFiniteFeature, "non-finite feature values");
    if (fv.s_area <= 0.0)
        throw Error(Errc::DegenerateSpectrum, "non-positive low-fluctuation area");
    if (!(fv.alpha1 < fv.alpha2))
        throw Error(Errc::DegenerateSpectrum, "collapsed spectrum zeros");
    return fv;
}

namespace {

// quote only when needed; feature paths rarely contain commas
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

std::string features_to_csv(const std::vector<FeatureVector>& rows,
                            const std::string& config_comment) {
    std::ostringstream out;
    out << "# mfspeech features v1\n";
    if (!config_comment.empty()) out << "# config: " << config_comment << "\n";
    out << "path,label,S,alpha1,alpha2\n";
    for (const auto& fv : rows) {
        out << csv_field(fv.path) << ',' << (fv.label ? to_string(*fv.label) : "?") << ','
            << fmt_double(fv.s_area) << ',' << fmt_double(fv.alpha1) << ','
            << fmt_double(fv.alpha2) << '\n';
    }
    return out.str();
}

std::vector<FeatureVector> features_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::vector<FeatureVector> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (split_csv_line(line) !=
                std::vector<std::string>{"path", "label", "S", "alpha1", "alpha2"})
                throw Error(Errc::MalformedContainer, "unexpected feature CSV header");
            header_seen = true;
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 5)
            throw Error(Errc::MalformedContainer, "bad feature CSV row: " + line);
        FeatureVector fv;
        fv.path = fields[0];
        EmotionLabel label;
        if (label_from_string(fields[1], label))
            fv.label = label;
        else if (fields[1] != "?")
            throw Error(Errc::MalformedContainer, "unknown label: " + fields[1]);
        const auto parse = [&](const std::string& s, double& out_v) {
            const auto res = std::from_chars(s.data(), s.data() + s.size(), out_v);
            if (res.ec != std::errc() || res.ptr != s.data() + s.size())
                throw Error(Errc::MalformedContainer, "bad number in feature CSV: " + s);
        };
        parse(fields[2], fv.s_area);
        parse(fields[3], fv.alpha1);
        parse(fields[4], fv.alpha2);
        rows.push_back(std::move(fv));
    }
    if (!header_seen) throw Error(Errc::MalformedContainer, "feature CSV missing header");
    return rows;
}

}  // namespace mfspeech
