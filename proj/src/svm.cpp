#include "mfspeech/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include <json.hpp>

#include "mfspeech/rng.hpp"

namespace mfspeech {

Standardizer Standardizer::identity(std::size_t dims) {
    Standardizer s;
    s.means.assign(dims, 0.0);
    s.stds.assign(dims, 1.0);
    return s;
}

std::vector<double> Standardizer::transform(const std::vector<double>& x) const {
    if (x.size() != means.size())
        throw Error(Errc::InvalidArgument, "feature dimension mismatch");
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - means[i]) / stds[i];
    return z;
}

std::pair<Standardizer, std::vector<std::vector<double>>> standardize(
    const std::vector<std::vector<double>>& rows) {
    if (rows.size() < 2) throw Error(Errc::InvalidArgument, "standardize needs >= 2 rows");
    const std::size_t dims = rows.front().size();
    for (const auto& r : rows) {
        if (r.size() != dims) throw Error(Errc::InvalidArgument, "ragged feature rows");
        for (double v : r)
            if (!std::isfinite(v)) throw Error(Errc::NonFiniteFeature, "non-finite feature");
    }

    Standardizer st;
    st.means.assign(dims, 0.0);
    st.stds.assign(dims, 0.0);
    const double inv_n = 1.0 / static_cast<double>(rows.size());
    for (const auto& r : rows)
        for (std::size_t d = 0; d < dims; ++d) st.means[d] += r[d];
    for (std::size_t d = 0; d < dims; ++d) st.means[d] *= inv_n;
    for (const auto& r : rows)
        for (std::size_t d = 0; d < dims; ++d) {
            const double diff = r[d] - st.means[d];
            st.stds[d] += diff * diff;
        }
    bool any_live = false;
    for (std::size_t d = 0; d < dims; ++d) {
        st.stds[d] = std::sqrt(st.stds[d] * inv_n);  // population convention
        if (st.stds[d] > 0.0)
            any_live = true;
        else
            st.stds[d] = 1.0;  // constant feature: pass through as zero
    }
    if (!any_live)
        throw Error(Errc::ZeroVarianceFeature, "every feature has zero variance");

    std::vector<std::vector<double>> transformed;
    transformed.reserve(rows.size());
    for (const auto& r : rows) transformed.push_back(st.transform(r));
    return {std::move(st), std::move(transformed)};
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// Binary soft-margin dual solver, labels in {+1, -1}. Maximal-violating-pair
// selection with lowest-index tie-breaks keeps it fully deterministic.
PairwiseSvm solve_binary(const std::vector<const std::vector<double>*>& xs,
                         const std::vector<int>& ys, double c_reg) {
    const std::size_t n = xs.size();
    const std::size_t dims = xs.front()->size();
    std::vector<double> alpha(n, 0.0);
    std::vector<double> w(dims, 0.0);
    std::vector<double> self_dot(n);
    for (std::size_t i = 0; i < n; ++i) self_dot[i] = dot(*xs[i], *xs[i]);

    const double kGapTol = 1e-6;
    const long max_updates = 200000;
    double m_up = 0.0, m_low = 0.0;

    for (long update = 0; update < max_updates; ++update) {
        // score_k = y_k - w . x_k; KKT: max over I_up <= min over I_low
        std::size_t best_i = n, best_j = n;
        m_up = -std::numeric_limits<double>::infinity();
        m_low = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            const double score = ys[k] - dot(w, *xs[k]);
            const bool in_up = (ys[k] > 0 && alpha[k] < c_reg) || (ys[k] < 0 && alpha[k] > 0.0);
            const bool in_low = (ys[k] > 0 && alpha[k] > 0.0) || (ys[k] < 0 && alpha[k] < c_reg);
            if (in_up && score > m_up) {
                m_up = score;
                best_i = k;
            }
            if (in_low && score < m_low) {
                m_low = score;
                best_j = k;
            }
        }
        if (best_i == n || best_j == n || m_up - m_low <= 1e-12) break;

        if (update % 256 == 0) {
            // true duality gap: primal (with midpoint bias) minus dual
            const double bias = 0.5 * (m_up + m_low);
            double hinge = 0.0, sum_alpha = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                hinge += std::max(0.0, 1.0 - ys[k] * (dot(w, *xs[k]) + bias));
                sum_alpha += alpha[k];
            }
            const double ww = dot(w, w);
            const double gap = (0.5 * ww + c_reg * hinge) - (sum_alpha - 0.5 * ww);
            if (gap <= kGapTol) break;
        }

        const std::size_t i = best_i, j = best_j;
        double eta = self_dot[i] + self_dot[j] - 2.0 * dot(*xs[i], *xs[j]);
        if (eta <= 1e-12) eta = 1e-12;
        double step = (m_up - m_low) / eta;

        // alpha_i += y_i * step, alpha_j -= y_j * step, both clipped to [0, C]
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        if (ys[i] > 0) {
            lo = std::max(lo, -alpha[i]);
            hi = std::min(hi, c_reg - alpha[i]);
        } else {
            lo = std::max(lo, alpha[i] - c_reg);
            hi = std::min(hi, alpha[i]);
        }
        if (ys[j] > 0) {
            lo = std::max(lo, alpha[j] - c_reg);
            hi = std::min(hi, alpha[j]);
        } else {
            lo = std::max(lo, -alpha[j]);
            hi = std::min(hi, c_reg - alpha[j]);
        }
        step = std::clamp(step, lo, hi);
        if (step == 0.0) break;

        alpha[i] += ys[i] * step;
        alpha[j] -= ys[j] * step;
        for (std::size_t d = 0; d < dims; ++d)
            w[d] += step * ((*xs[i])[d] - (*xs[j])[d]);
    }

    PairwiseSvm out;
    out.weights = std::move(w);
    if (!std::isfinite(m_up)) m_up = 0.0;
    if (!std::isfinite(m_low)) m_low = 0.0;
    out.bias = 0.5 * (m_up + m_low);
    out.dual_coefs.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.dual_coefs[k] = alpha[k] * ys[k];
    return out;
}

}  // namespace

SvmModel svm_train(const std::vector<LabeledSample>& standardized, double c_regularization,
                   const Standardizer& standardizer) {
    if (!(c_regularization > 0.0))
        throw Error(Errc::InvalidArgument, "regularization C must be > 0");
    if (standardized.empty()) throw Error(Errc::InvalidArgument, "no training samples");
    const std::size_t dims = standardized.front().features.size();

    std::map<EmotionLabel, std::vector<const std::vector<double>*>> by_class;
    for (const auto& s : standardized) {
        if (s.features.size() != dims)
            throw Error(Errc::InvalidArgument, "ragged feature rows");
        for (double v : s.features)
            if (!std::isfinite(v)) throw Error(Errc::NonFiniteFeature, "non-finite feature");
        by_class[s.label].push_back(&s.features);
    }
    if (by_class.size() < 2)
        throw Error(Errc::SingleClass, "training needs at least two classes");

    SvmModel model;
    model.c_regularization = c_regularization;
    model.standardizer =
        standardizer.means.empty() ? Standardizer::identity(dims) : standardizer;
    for (const auto& [label, _] : by_class) model.classes.push_back(label);

    for (std::size_t a = 0; a < model.classes.size(); ++a) {
        for (std::size_t b = a + 1; b < model.classes.size(); ++b) {
            std::vector<const std::vector<double>*> xs;
            std::vector<int> ys;
            for (const auto* x : by_class[model.classes[a]]) {
                xs.push_back(x);
                ys.push_back(+1);
            }
            for (const auto* x : by_class[model.classes[b]]) {
                xs.push_back(x);
                ys.push_back(-1);
            }
            PairwiseSvm pair = solve_binary(xs, ys, c_regularization);
            pair.class_a = model.classes[a];
            pair.class_b = model.classes[b];
            model.pairwise.push_back(std::move(pair));
        }
    }
    return model;
}

SvmModel train_classifier(const std::vector<LabeledSample>& raw, double c_regularization) {
    std::vector<std::vector<double>> rows;
    rows.reserve(raw.size());
    for (const auto& s : raw) rows.push_back(s.features);
    auto [st, transformed] = standardize(rows);
    std::vector<LabeledSample> z(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        z[i] = LabeledSample{std::move(transformed[i]), raw[i].label};
    return svm_train(z, c_regularization, st);
}

EmotionLabel svm_predict(const SvmModel& model, const std::vector<double>& raw_features) {
    for (double v : raw_features)
        if (!std::isfinite(v)) throw Error(Errc::NonFiniteFeature, "non-finite feature");
    if (model.pairwise.empty()) throw Error(Errc::InvalidArgument, "untrained model");
    const std::vector<double> z = model.standardizer.transform(raw_features);

    std::map<EmotionLabel, int> votes;
    std::map<EmotionLabel, double> margins;
    for (const auto& label : model.classes) {
        votes[label] = 0;
        margins[label] = 0.0;
    }
    for (const auto& pair : model.pairwise) {
        const double d = dot(pair.weights, z) + pair.bias;
        if (d >= 0.0)
            ++votes[pair.class_a];
        else
            ++votes[pair.class_b];
        margins[pair.class_a] += d;
        margins[pair.class_b] -= d;
    }

    EmotionLabel best = model.classes.front();
    for (const auto& label : model.classes) {
        if (votes[label] > votes[best] ||
            (votes[label] == votes[best] && margins[label] > margins[best]))
            best = label;
        // remaining ties keep the earlier (smaller) label
    }
    return best;
}

int ConfusionMatrix::total() const {
    int t = 0;
    for (const auto& row : counts)
        for (int v : row) t += v;
    return t;
}

double ConfusionMatrix::accuracy() const {
    const int t = total();
    if (t == 0) return 0.0;
    int diag = 0;
    for (int i = 0; i < kNumLabels; ++i) diag += counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    return static_cast<double>(diag) / t;
}

std::string ConfusionMatrix::table() const {
    std::string out = "true \\ pred";
    char buf[64];
    for (int j = 0; j < kNumLabels; ++j) {
        std::snprintf(buf, sizeof buf, " %10s", to_string(static_cast<EmotionLabel>(j)));
        out += buf;
    }
    out += '\n';
    for (int i = 0; i < kNumLabels; ++i) {
        std::snprintf(buf, sizeof buf, "%-11s", to_string(static_cast<EmotionLabel>(i)));
        out += buf;
        for (int j = 0; j < kNumLabels; ++j) {
            std::snprintf(buf, sizeof buf, " %10d", counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

ConfusionMatrix evaluate(const SvmModel& model, const std::vector<LabeledSample>& test) {
    if (test.empty()) throw Error(Errc::InvalidArgument, "empty test set");
    for (const auto& s : test) {
        if (std::find(model.classes.begin(), model.classes.end(), s.label) ==
            model.classes.end())
            throw Error(Errc::ClassMismatch,
                        std::string("test label ") + to_string(s.label) +
                            " not in the model's class set");
    }
    ConfusionMatrix cm;
    for (const auto& s : test) {
        const EmotionLabel pred = svm_predict(model, s.features);
        ++cm.counts[static_cast<std::size_t>(static_cast<int>(s.label))]
                   [static_cast<std::size_t>(static_cast<int>(pred))];
    }
    return cm;
}

CrossValidation cross_validate(const std::vector<LabeledSample>& data, int runs,
                               int test_per_class, std::uint64_t seed,
                               double c_regularization) {
    if (runs < 1 || test_per_class < 1)
        throw Error(Errc::InvalidArgument, "runs and test_per_class must be >= 1");

    std::map<EmotionLabel, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < data.size(); ++i) by_class[data[i].label].push_back(i);
    for (const auto& [label, idx] : by_class)
        if (idx.size() <= static_cast<std::size_t>(test_per_class))
            throw Error(Errc::InsufficientSamples,
                        std::string(to_string(label)) + " has " + std::to_string(idx.size()) +
                            " samples, needs > " + std::to_string(test_per_class));

    Rng rng(seed);
    CrossValidation cv;
    cv.runs.reserve(static_cast<std::size_t>(runs));
    std::vector<double> accuracies;

    for (int run = 0; run < runs; ++run) {
        std::vector<LabeledSample> train, test;
        for (auto& [label, idx] : by_class) {
            std::vector<std::size_t> pool = idx;
            for (int t = 0; t < test_per_class; ++t) {
                const std::size_t j =
                    static_cast<std::size_t>(t) +
                    static_cast<std::size_t>(rng.next_below(pool.size() - static_cast<std::size_t>(t)));
                std::swap(pool[static_cast<std::size_t>(t)], pool[j]);
            }
            for (std::size_t k = 0; k < pool.size(); ++k) {
                if (k < static_cast<std::size_t>(test_per_class))
                    test.push_back(data[pool[k]]);
                else
                    train.push_back(data[pool[k]]);
            }
        }
        const SvmModel model = train_classifier(train, c_regularization);
        const ConfusionMatrix cm = evaluate(model, test);
        accuracies.push_back(cm.accuracy());
        cv.runs.push_back(cm);
    }

    double m = 0.0;
    for (double a : accuracies) m += a;
    m /= static_cast<double>(accuracies.size());
    double var = 0.0;
    for (double a : accuracies) var += (a - m) * (a - m);
    var /= static_cast<double>(accuracies.size());
    cv.mean_accuracy = m;
    cv.std_accuracy = std::sqrt(var);
    return cv;
}

std::string model_to_json(const SvmModel& model) {
    nlohmann::json j;
    j["version"] = 1;
    j["C"] = model.c_regularization;
    for (const auto& label : model.classes) j["classes"].push_back(to_string(label));
    j["standardizer"]["means"] = model.standardizer.means;
    j["standardizer"]["stds"] = model.standardizer.stds;
    j["pairwise"] = nlohmann::json::array();
    for (const auto& pair : model.pairwise) {
        nlohmann::json p;
        p["class_a"] = to_string(pair.class_a);
        p["class_b"] = to_string(pair.class_b);
        p["weights"] = pair.weights;
        p["bias"] = pair.bias;
        j["pairwise"].push_back(p);
    }
    return j.dump(2) + "\n";
}

SvmModel model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::MalformedContainer, std::string("model JSON: ") + e.what());
    }
    try {
        SvmModel model;
        if (j.at("version").get<int>() != 1)
            throw Error(Errc::UnsupportedEncoding, "unknown model version");
        model.c_regularization = j.at("C").get<double>();
        for (const auto& name : j.at("classes")) {
            EmotionLabel label;
            if (!label_from_string(name.get<std::string>(), label))
                throw Error(Errc::MalformedContainer, "unknown class name in model");
            model.classes.push_back(label);
        }
        model.standardizer.means = j.at("standardizer").at("means").get<std::vector<double>>();
        model.standardizer.stds = j.at("standardizer").at("stds").get<std::vector<double>>();
        for (const auto& p : j.at("pairwise")) {
            PairwiseSvm pair;
            EmotionLabel label;
            if (!label_from_string(p.at("class_a").get<std::string>(), label))
                throw Error(Errc::MalformedContainer, "unknown class name in model");
            pair.class_a = label;
            if (!label_from_string(p.at("class_b").get<std::string>(), label))
                throw Error(Errc::MalformedContainer, "unknown class name in model");
            pair.class_b = label;
            pair.weights = p.at("weights").get<std::vector<double>>();
            pair.bias = p.at("bias").get<double>();
            model.pairwise.push_back(std::move(pair));
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::MalformedContainer, std::string("model JSON: ") + e.what());
    }
}

}  // namespace mfspeech
