#pragma once
// Technique-CAPEC link-prediction experiments: repeated stratified
// train/test trials per configuration, and pairwise significance testing
// across a grid of configurations.
//
// Experiment names follow FEATURE(-FEATURE)*-REPR-CLASSIFIER, e.g.
// CWE-TACTIC-BOW-RANDOM_FOREST. Technique and CAPEC names are always part
// of the text; feature tokens add components:
//   CWE               names of the CAPEC's weaknesses
//   TACTIC            names of the technique's tactics
//   CAPEC_TECHNIQUES  names of the other techniques linked to the CAPEC
//   CAPEC, TECHNIQUE  accepted, already implied
// REPR is BOW or EMB (alias BERT: imported embedding vectors).
// CLASSIFIER is NB, KNN, SGD, SVM, RANDOM_FOREST or MLP.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bron/error.hpp"
#include "bron/features.hpp"
#include "bron/graph.hpp"
#include "bron/learn/metrics.hpp"
#include "bron/learn/model.hpp"
#include "bron/learn/stats.hpp"
#include "bron/rng.hpp"

namespace bron {

struct ParsedName {
    FeatureSelection selection;
    Representation representation = Representation::Bow;
    ClassifierKind classifier = ClassifierKind::RandomForest;
};

namespace detail {

inline std::vector<std::string> split_dash(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == '-') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::optional<ClassifierKind> classifier_token(const std::string& t) {
    if (t == "NB" || t == "NAIVE_BAYES") return ClassifierKind::NaiveBayes;
    if (t == "KNN") return ClassifierKind::Knn;
    if (t == "SGD" || t == "LOGISTIC_SGD") return ClassifierKind::LogisticSgd;
    if (t == "SVM" || t == "LINEAR_SVM") return ClassifierKind::LinearSvm;
    if (t == "RANDOM_FOREST" || t == "RF") return ClassifierKind::RandomForest;
    if (t == "MLP") return ClassifierKind::Mlp;
    return std::nullopt;
}

}  // namespace detail

inline std::string classifier_token(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::NaiveBayes: return "NB";
        case ClassifierKind::Knn: return "KNN";
        case ClassifierKind::LogisticSgd: return "SGD";
        case ClassifierKind::LinearSvm: return "SVM";
        case ClassifierKind::RandomForest: return "RANDOM_FOREST";
        case ClassifierKind::Mlp: return "MLP";
    }
    return "?";
}

inline FeatureSelection base_selection() {
    return {FeatureComponent::TechniqueName, FeatureComponent::CapecName};
}

inline ParsedName parse_experiment_name(const std::string& name) {
    const auto tok = detail::split_dash(name);
    if (tok.size() < 3) throw InvalidConfig("experiment name '" + name + "' needs FEATURES-REPR-CLASSIFIER");
    ParsedName p;
    p.selection = base_selection();

    if (tok.back() == "RBF_SVM") throw InvalidConfig("RBF_SVM is not supported; use SVM (linear kernel)");
    auto k = detail::classifier_token(tok.back());
    if (!k) throw InvalidConfig("unknown classifier '" + tok.back() + "' in '" + name + "'");
    p.classifier = *k;

    const std::string& repr = tok[tok.size() - 2];
    if (repr == "BOW") {
        p.representation = Representation::Bow;
    } else if (repr == "EMB" || repr == "BERT") {
        p.representation = Representation::Embedding;
    } else {
        throw InvalidConfig("unknown representation '" + repr + "' in '" + name + "'");
    }

    for (std::size_t i = 0; i + 2 < tok.size(); ++i) {
        const std::string& f = tok[i];
        if (f == "CWE") p.selection.insert(FeatureComponent::CweNames);
        else if (f == "TACTIC") p.selection.insert(FeatureComponent::TacticNames);
        else if (f == "CAPEC_TECHNIQUES" || f == "CAPEC_TECHNIQUE") p.selection.insert(FeatureComponent::CapecTechniques);
        else if (f == "CAPEC" || f == "TECHNIQUE") continue;
        else throw InvalidConfig("unknown feature '" + f + "' in '" + name + "'");
    }
    return p;
}

/// Canonical spelling; parse_experiment_name(experiment_name(p)) == p.
inline std::string experiment_name(const ParsedName& p) {
    std::string out;
    auto add = [&out](const char* t) {
        if (!out.empty()) out += '-';
        out += t;
    };
    if (p.selection.contains(FeatureComponent::CweNames)) add("CWE");
    if (p.selection.contains(FeatureComponent::TacticNames)) add("TACTIC");
    if (p.selection.contains(FeatureComponent::CapecTechniques)) add("CAPEC_TECHNIQUES");
    if (out.empty()) add("CAPEC-TECHNIQUE");
    add(p.representation == Representation::Bow ? "BOW" : "EMB");
    out += "-" + classifier_token(p.classifier);
    return out;
}

struct ExperimentConfig {
    static constexpr std::size_t kDefaultTrials = 100;
    static constexpr double kDefaultTrainFraction = 0.7;

    std::string name;
    FeatureSelection selection = base_selection();
    Representation representation = Representation::Bow;
    ClassifierSpec classifier;  // seed is replaced per trial
    std::size_t trials = kDefaultTrials;
    double train_fraction = kDefaultTrainFraction;
    std::uint64_t master_seed = 0;
    bool fixed_negatives = false;
    bool leaky_capec_techniques = false;
    std::shared_ptr<const EmbeddingTable> embeddings;  // required for Embedding mode
    std::size_t threads = 0;                           // 0 = hardware concurrency

    /// Config with selection/representation/classifier taken from `name`.
    static ExperimentConfig from_name(const std::string& name) {
        const ParsedName p = parse_experiment_name(name);
        ExperimentConfig c;
        c.name = name;
        c.selection = p.selection;
        c.representation = p.representation;
        c.classifier.kind = p.classifier;
        return c;
    }

    void validate() const {
        if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw InvalidConfig("train_fraction must be in (0,1)");
        if (trials < 1) throw InvalidConfig("trials must be >= 1");
        if (selection.empty()) throw InvalidConfig("feature selection is empty");
        if (representation == Representation::Embedding && !embeddings)
            throw InvalidConfig("experiment " + name + " uses embeddings but none were imported");
        (void)classifier.resolved();
    }
};

struct TrialResult {
    std::size_t trial_index = 0;
    double error = 0.0;
    double auc = 0.0;
    double f1 = 0.0;
};

struct ExperimentSummary {
    std::string name;
    std::vector<TrialResult> trials;
    double mean_error = 0.0;
    double mean_auc = 0.0;
    double mean_f1 = 0.0;
};

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Stratified split: train size is round(fraction * n); each class gets
/// round(fraction * n_class) rows with the remainder given to the other
/// class, and both sides keep at least one row of each class. Indices are
/// returned in ascending order.
inline Split stratified_split(const std::vector<int>& labels, double fraction, Rng& rng) {
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i] == 1].push_back(i);
    const std::size_t n = labels.size(), n1 = by_class[1].size(), n0 = by_class[0].size();
    if (n0 < 2 || n1 < 2) throw DegenerateData("stratified split needs at least 2 rows of each class");

    const auto n_train = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n)));
    auto t1 = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n1)));
    t1 = std::clamp<std::size_t>(t1, 1, n1 - 1);
    std::size_t t0 = n_train > t1 ? n_train - t1 : 0;
    t0 = std::clamp<std::size_t>(t0, 1, n0 - 1);

    Split s;
    for (int c = 0; c < 2; ++c) {
        auto& idx = by_class[c];
        rng.shuffle(idx);
        const std::size_t take = c == 1 ? t1 : t0;
        s.train.insert(s.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take));
        s.test.insert(s.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end());
    }
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

namespace detail {

inline constexpr std::uint64_t kPairsStream = 1, kSplitStream = 2, kModelStream = 3;
inline constexpr std::uint64_t kFixedNegativesStream = ~std::uint64_t{0};

inline std::vector<int> gather(const std::vector<int>& labels, const std::vector<std::size_t>& idx) {
    std::vector<int> y;
    y.reserve(idx.size());
    for (auto i : idx) y.push_back(labels[i]);
    return y;
}

inline TrialResult fit_and_score(const ExperimentConfig& cfg, std::uint64_t seed, std::size_t t, const Matrix& x_train,
                                 const std::vector<int>& y_train, const Matrix& x_test, const std::vector<int>& y_test) {
    ClassifierSpec spec = cfg.classifier;
    spec.seed = derive_seed(seed, kModelStream);
    const TrainedModel model = train(spec, x_train, y_train, cfg.representation);
    const std::vector<double> scores = model.predict_scores(x_test);
    const std::vector<int> pred = model.labels_from(scores);
    const MetricSet m = evaluate(scores, pred, y_test);
    return {t, m.error, m.auc, m.f1};
}

/// Split, fit the vocabulary on the training texts only, train, score.
inline TrialResult bow_trial(const ExperimentConfig& cfg, const std::vector<std::string>& texts,
                             const std::vector<int>& labels, std::uint64_t seed, std::size_t t) {
    Rng split_rng(derive_seed(seed, kSplitStream));
    const Split split = stratified_split(labels, cfg.train_fraction, split_rng);
    std::vector<std::string> train_texts, test_texts;
    for (auto i : split.train) train_texts.push_back(texts[i]);
    for (auto i : split.test) test_texts.push_back(texts[i]);
    const auto y_train = gather(labels, split.train), y_test = gather(labels, split.test);
    const Vocabulary vocab = bow_fit(train_texts);
    return fit_and_score(cfg, seed, t, bow_matrix(vocab, train_texts, y_train).x, y_train,
                         bow_matrix(vocab, test_texts, y_test).x, y_test);
}

inline TrialResult run_trial(const ExperimentConfig& cfg, const ThreatGraph& g, std::size_t t,
                             const std::vector<LabeledPair>* fixed_pairs) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, t);
    std::vector<LabeledPair> own;
    if (!fixed_pairs) own = build_pairs(g, derive_seed(seed, kPairsStream));
    const std::vector<LabeledPair>& pairs = fixed_pairs ? *fixed_pairs : own;

    std::vector<int> labels(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) labels[i] = pairs[i].linked ? 1 : 0;
    const FeatureTextOptions opt{cfg.leaky_capec_techniques};

    if (cfg.representation == Representation::Bow) {
        std::vector<std::string> texts(pairs.size());
        for (std::size_t i = 0; i < pairs.size(); ++i) texts[i] = feature_text(pairs[i], cfg.selection, g, opt);
        return bow_trial(cfg, texts, labels, seed, t);
    }

    Rng split_rng(derive_seed(seed, kSplitStream));
    const Split split = stratified_split(labels, cfg.train_fraction, split_rng);
    auto build = [&](const std::vector<std::size_t>& idx) {
        const std::size_t dim = cfg.selection.size() * cfg.embeddings->dim;
        std::vector<double> data;
        data.reserve(idx.size() * dim);
        for (auto i : idx) {
            auto v = pair_embedding(pairs[i], cfg.selection, g, *cfg.embeddings, opt);
            data.insert(data.end(), v.begin(), v.end());
        }
        return Matrix(idx.size(), dim, std::move(data));
    };
    return fit_and_score(cfg, seed, t, build(split.train), gather(labels, split.train), build(split.test),
                         gather(labels, split.test));
}

/// Runs job(i) for i in [0, n) on up to `threads` workers. Results are
/// written by index, so completion order never matters. The lowest failing
/// index is rethrown as TrialFailed.
template <class Job>
void parallel_for(std::size_t n, std::size_t threads, Job job) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                job(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const TrialFailed&) {
            throw;
        } catch (const std::exception& e) {
            throw TrialFailed(i, e.what());
        }
    }
}

}  // namespace detail

inline ExperimentSummary summarize(std::string name, std::vector<TrialResult> trials) {
    ExperimentSummary s;
    s.name = std::move(name);
    s.trials = std::move(trials);
    for (const auto& t : s.trials) {
        s.mean_error += t.error;
        s.mean_auc += t.auc;
        s.mean_f1 += t.f1;
    }
    const double n = static_cast<double>(s.trials.size());
    if (n > 0) {
        s.mean_error /= n;
        s.mean_auc /= n;
        s.mean_f1 /= n;
    }
    return s;
}

/// Each trial t draws its pairs, split and model seed from
/// derive_seed(master_seed, t); with fixed_negatives the pair sample is
/// drawn once for the whole experiment.
inline ExperimentSummary run_experiment(const ExperimentConfig& cfg, const ThreatGraph& g) {
    cfg.validate();
    std::optional<std::vector<LabeledPair>> fixed;
    if (cfg.fixed_negatives) fixed = build_pairs(g, derive_seed(cfg.master_seed, detail::kFixedNegativesStream));

    std::vector<TrialResult> results(cfg.trials);
    detail::parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
        results[t] = detail::run_trial(cfg, g, t, fixed ? &*fixed : nullptr);
    });
    return summarize(cfg.name, std::move(results));
}

/// The same trial protocol on a fixed labelled corpus (BOW only): no pair
/// sampling, only per-trial splits and model seeds.
inline ExperimentSummary run_text_experiment(const ExperimentConfig& cfg, const std::vector<std::string>& texts,
                                             const std::vector<int>& labels) {
    if (texts.size() != labels.size()) throw DimensionMismatch("texts and labels differ in length");
    if (cfg.representation != Representation::Bow) throw InvalidConfig("text experiments use the BOW representation");
    cfg.validate();
    std::vector<TrialResult> results(cfg.trials);
    detail::parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
        results[t] = detail::bow_trial(cfg, texts, labels, derive_seed(cfg.master_seed, t), t);
    });
    return summarize(cfg.name, std::move(results));
}

enum class Metric { Error, Auc, F1 };
inline constexpr Metric kAllMetrics[] = {Metric::Error, Metric::Auc, Metric::F1};

inline const char* metric_name(Metric m) {
    switch (m) {
        case Metric::Error: return "error";
        case Metric::Auc: return "auc";
        case Metric::F1: return "f1";
    }
    return "?";
}

inline double metric_of(const TrialResult& t, Metric m) {
    return m == Metric::Error ? t.error : (m == Metric::Auc ? t.auc : t.f1);
}

inline double mean_of(const ExperimentSummary& s, Metric m) {
    return m == Metric::Error ? s.mean_error : (m == Metric::Auc ? s.mean_auc : s.mean_f1);
}

struct Comparison {
    Metric metric = Metric::Error;
    std::size_t a = 0;  // indices into GridResult::summaries, a < b
    std::size_t b = 0;
    double p_value = 1.0;
    double p_adjusted = 1.0;
    bool significant = false;
    int better = 0;  // +1: a has the better mean, -1: b, 0: equal means
};

struct GridResult {
    std::vector<ExperimentSummary> summaries;
    std::vector<Comparison> comparisons;
    std::size_t family_size = 0;  // Bonferroni m per metric

    /// Verdict for (i, j) in either order.
    const Comparison& compare(Metric m, std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        for (const auto& c : comparisons)
            if (c.metric == m && c.a == i && c.b == j) return c;
        throw InvalidConfig("no comparison for the requested pair");
    }
};

/// Rank-sum test on per-trial values for every metric and config pair,
/// Bonferroni-adjusted over the C(k,2) pairs of that metric.
inline std::vector<Comparison> compare_all(const std::vector<ExperimentSummary>& s, std::size_t* family = nullptr) {
    const std::size_t k = s.size();
    const std::size_t m = k * (k - 1) / 2;
    if (family) *family = m;
    std::vector<Comparison> out;
    for (Metric metric : kAllMetrics) {
        std::vector<Comparison> block;
        std::vector<double> raw;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) {
                std::vector<double> va, vb;
                for (const auto& t : s[i].trials) va.push_back(metric_of(t, metric));
                for (const auto& t : s[j].trials) vb.push_back(metric_of(t, metric));
                Comparison c;
                c.metric = metric;
                c.a = i;
                c.b = j;
                c.p_value = wilcoxon_ranksum(va, vb);
                const double ma = mean_of(s[i], metric), mb = mean_of(s[j], metric);
                const bool lower_better = metric == Metric::Error;
                c.better = ma == mb ? 0 : ((ma < mb) == lower_better ? 1 : -1);
                raw.push_back(c.p_value);
                block.push_back(c);
            }
        const auto adj = bonferroni(raw, m);
        for (std::size_t i = 0; i < block.size(); ++i) {
            block[i].p_adjusted = adj[i];
            block[i].significant = adj[i] < kSignificanceLevel;
            out.push_back(block[i]);
        }
    }
    return out;
}

inline GridResult run_grid(const std::vector<ExperimentConfig>& configs, const ThreatGraph& g) {
    if (configs.size() < 2) throw InvalidConfig("a grid needs at least 2 configurations");
    GridResult r;
    for (const auto& c : configs) r.summaries.push_back(run_experiment(c, g));
    r.comparisons = compare_all(r.summaries, &r.family_size);
    return r;
}

}  // namespace bron
