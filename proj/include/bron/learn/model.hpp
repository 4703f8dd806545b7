#pragma once
// Classifier specification, training dispatch, and versioned JSON model
// documents.
//
// Model document (version 1):
//   {"format":"bron-model","version":1,"kind":"<kind>","threshold":t,
//    "params":{...}}
// params per kind:
//   naive_bayes    {"multinomial":bool,"log_prior":[2],"log_prob":[[d],[d]],
//                   "mean":[[d],[d]],"var":[[d],[d]]}
//   knn            {"k":k,"rows":n,"cols":d,"x":[n*d],"y":[n]}
//   logistic_sgd,
//   linear_svm     {"w":[d],"b":b}
//   random_forest  {"trees":[[[feature,threshold,left,right,value],...],...]}
//   mlp            {"inputs":d,"hidden":h,"w1":[d*h],"b1":[h],"w2":[h],"b2":b}

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bron/error.hpp"
#include "bron/features.hpp"
#include "bron/learn/forest.hpp"
#include "bron/learn/knn.hpp"
#include "bron/learn/linear.hpp"
#include "bron/learn/matrix.hpp"
#include "bron/learn/mlp.hpp"
#include "bron/learn/naive_bayes.hpp"
#include "json.hpp"

namespace bron {

enum class ClassifierKind { NaiveBayes, Knn, LogisticSgd, LinearSvm, RandomForest, Mlp };

inline constexpr ClassifierKind kAllClassifiers[] = {
    ClassifierKind::NaiveBayes, ClassifierKind::Knn,          ClassifierKind::LogisticSgd,
    ClassifierKind::LinearSvm,  ClassifierKind::RandomForest, ClassifierKind::Mlp,
};

inline std::string_view classifier_key(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::NaiveBayes: return "naive_bayes";
        case ClassifierKind::Knn: return "knn";
        case ClassifierKind::LogisticSgd: return "logistic_sgd";
        case ClassifierKind::LinearSvm: return "linear_svm";
        case ClassifierKind::RandomForest: return "random_forest";
        case ClassifierKind::Mlp: return "mlp";
    }
    return "?";
}

inline std::optional<ClassifierKind> parse_classifier_key(std::string_view s) {
    for (auto k : kAllClassifiers)
        if (classifier_key(k) == s) return k;
    return std::nullopt;
}

using Hyperparameters = std::map<std::string, double>;

/// Documented defaults; any key can be overridden in ClassifierSpec.
inline Hyperparameters default_hyperparameters(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::NaiveBayes:
            return {{"alpha", NaiveBayesParams::kDefaultAlpha}, {"var_smoothing", NaiveBayesParams::kDefaultVarSmoothing}};
        case ClassifierKind::Knn: return {{"k", static_cast<double>(KnnParams::kDefaultK)}};
        case ClassifierKind::LogisticSgd:
            return {{"learning_rate", LogisticParams::kDefaultLearningRate},
                    {"epochs", static_cast<double>(LogisticParams::kDefaultEpochs)},
                    {"l2", LogisticParams::kDefaultL2}};
        case ClassifierKind::LinearSvm:
            return {{"learning_rate", SvmParams::kDefaultLearningRate},
                    {"epochs", static_cast<double>(SvmParams::kDefaultEpochs)},
                    {"l2", SvmParams::kDefaultL2}};
        case ClassifierKind::RandomForest:
            return {{"trees", static_cast<double>(ForestParams::kDefaultTrees)},
                    {"max_features", 0.0},
                    {"bootstrap", 1.0},
                    {"min_samples_split", 2.0},
                    {"max_depth", 0.0}};
        case ClassifierKind::Mlp:
            return {{"hidden", static_cast<double>(MlpParams::kDefaultHidden)},
                    {"epochs", static_cast<double>(MlpParams::kDefaultEpochs)},
                    {"learning_rate", MlpParams::kDefaultLearningRate},
                    {"l2", MlpParams::kDefaultL2},
                    {"batch_size", static_cast<double>(MlpParams::kDefaultBatchSize)}};
    }
    return {};
}

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::RandomForest;
    Hyperparameters overrides;
    std::uint64_t seed = 0;

    /// Defaults merged with overrides; throws InvalidConfig on unknown keys
    /// or out-of-range values.
    Hyperparameters resolved() const {
        Hyperparameters h = default_hyperparameters(kind);
        for (const auto& [key, value] : overrides) {
            if (!h.contains(key))
                throw InvalidConfig("unknown hyperparameter '" + key + "' for " + std::string(classifier_key(kind)));
            h[key] = value;
        }
        auto require = [](const std::string& key, bool ok, const char* what) {
            if (!ok) throw InvalidConfig("hyperparameter " + key + " " + what);
        };
        auto integral = [](double v) { return std::isfinite(v) && v == std::floor(v); };
        for (const auto& [key, v] : h) {
            if (key == "k" || key == "trees" || key == "hidden" || key == "epochs" || key == "batch_size")
                require(key, integral(v) && v >= 1, "must be an integer >= 1");
            else if (key == "learning_rate")
                require(key, std::isfinite(v) && v > 0, "must be > 0");
            else if (key == "l2" || key == "var_smoothing")
                require(key, std::isfinite(v) && v >= 0, "must be >= 0");
            else if (key == "alpha")
                require(key, std::isfinite(v) && v > 0, "must be > 0");
            else if (key == "max_features" || key == "max_depth" || key == "min_samples_split")
                require(key, integral(v) && v >= 0, "must be a non-negative integer");
            else if (key == "bootstrap")
                require(key, v == 0.0 || v == 1.0, "must be 0 or 1");
        }
        return h;
    }
};

using ModelParams = std::variant<NaiveBayesModel, KnnModel, LinearModel, ForestModel, MlpModel>;

class TrainedModel {
public:
    TrainedModel(ClassifierKind kind, double threshold, ModelParams params)
        : kind_(kind), threshold_(threshold), params_(std::move(params)) {}

    ClassifierKind kind() const noexcept { return kind_; }
    double threshold() const noexcept { return threshold_; }
    const ModelParams& params() const noexcept { return params_; }
    /// Feature count seen at training time (0 if unknown).
    std::size_t inputs() const noexcept { return inputs_; }
    void set_inputs(std::size_t n) noexcept { inputs_ = n; }

    /// Higher means more likely linked.
    double predict_score(std::span<const double> x) const {
        if (inputs_ != 0 && x.size() != inputs_)
            throw DimensionMismatch("model expects " + std::to_string(inputs_) + " features, got " +
                                    std::to_string(x.size()));
        return std::visit([&x](const auto& m) { return m.score(x); }, params_);
    }
    int predict_label(std::span<const double> x) const { return predict_score(x) >= threshold_ ? 1 : 0; }

    std::vector<double> predict_scores(const Matrix& x) const {
        std::vector<double> s(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i) s[i] = predict_score(x.row(i));
        return s;
    }
    std::vector<int> labels_from(std::span<const double> scores) const {
        std::vector<int> out(scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= threshold_ ? 1 : 0;
        return out;
    }

private:
    ClassifierKind kind_;
    double threshold_;
    ModelParams params_;
    std::size_t inputs_ = 0;
};

inline constexpr double kProbabilityThreshold = 0.5;
inline constexpr double kMarginThreshold = 0.0;

namespace detail {
inline TrainedModel train_impl(const ClassifierSpec& spec, const Matrix& x, std::span<const int> y,
                               Representation mode) {
    if (x.rows() != y.size()) throw DimensionMismatch("feature rows and labels differ in length");
    if (x.rows() == 0 || x.cols() == 0) throw DimensionMismatch("empty feature matrix");
    std::size_t pos = 0;
    for (int label : y) {
        if (label != 0 && label != 1) throw DegenerateData("labels must be 0 or 1");
        pos += label == 1;
    }
    if (pos == 0 || pos == y.size()) throw DegenerateData("training data contains a single class");
    if (!x.all_finite()) throw DegenerateData("feature matrix has non-finite values");

    const Hyperparameters h = spec.resolved();
    auto sz = [&h](const char* key) { return static_cast<std::size_t>(h.at(key)); };

    switch (spec.kind) {
        case ClassifierKind::NaiveBayes: {
            NaiveBayesParams p{h.at("alpha"), h.at("var_smoothing")};
            return {spec.kind, kProbabilityThreshold, fit_naive_bayes(x, y, mode == Representation::Bow, p)};
        }
        case ClassifierKind::Knn: return {spec.kind, kProbabilityThreshold, fit_knn(x, y, KnnParams{sz("k")})};
        case ClassifierKind::LogisticSgd: {
            LogisticParams p;
            p.learning_rate = h.at("learning_rate");
            p.epochs = sz("epochs");
            p.l2 = h.at("l2");
            return {spec.kind, kProbabilityThreshold, fit_logistic(x, y, p, spec.seed)};
        }
        case ClassifierKind::LinearSvm: {
            SvmParams p;
            p.learning_rate = h.at("learning_rate");
            p.epochs = sz("epochs");
            p.l2 = h.at("l2");
            return {spec.kind, kMarginThreshold, fit_linear_svm(x, y, p, spec.seed)};
        }
        case ClassifierKind::RandomForest: {
            ForestParams p;
            p.trees = sz("trees");
            p.max_features = sz("max_features");
            p.bootstrap = h.at("bootstrap") != 0.0;
            p.min_samples_split = sz("min_samples_split");
            p.max_depth = sz("max_depth");
            return {spec.kind, kProbabilityThreshold, fit_forest(x, y, p, spec.seed)};
        }
        case ClassifierKind::Mlp: {
            MlpParams p;
            p.hidden = sz("hidden");
            p.epochs = sz("epochs");
            p.learning_rate = h.at("learning_rate");
            p.l2 = h.at("l2");
            p.batch_size = sz("batch_size");
            return {spec.kind, kProbabilityThreshold, fit_mlp(x, y, p, spec.seed)};
        }
    }
    throw InvalidConfig("unknown classifier kind");
}
}  // namespace detail

/// Seed-deterministic: identical (spec, data) give identical models.
inline TrainedModel train(const ClassifierSpec& spec, const Matrix& x, std::span<const int> y, Representation mode) {
    TrainedModel m = detail::train_impl(spec, x, y, mode);
    m.set_inputs(x.cols());
    return m;
}

inline TrainedModel train(const ClassifierSpec& spec, const FeatureMatrix& fm) {
    return train(spec, fm.x, fm.labels, fm.mode);
}

// ---------------------------------------------------------------- persistence

inline constexpr int kModelFormatVersion = 1;

namespace detail {

using nlohmann::json;

inline json params_to_json(const NaiveBayesModel& m) {
    return {{"multinomial", m.multinomial},
            {"log_prior", {m.log_prior[0], m.log_prior[1]}},
            {"log_prob", {m.log_prob[0], m.log_prob[1]}},
            {"mean", {m.mean[0], m.mean[1]}},
            {"var", {m.var[0], m.var[1]}}};
}
inline json params_to_json(const KnnModel& m) {
    return {{"k", m.k}, {"rows", m.train_x.rows()}, {"cols", m.train_x.cols()}, {"x", m.train_x.data()}, {"y", m.train_y}};
}
inline json params_to_json(const LinearModel& m) { return {{"w", m.w}, {"b", m.b}}; }
inline json params_to_json(const ForestModel& m) {
    json trees = json::array();
    for (const auto& t : m.trees) {
        json nodes = json::array();
        for (const auto& n : t.nodes) nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value});
        trees.push_back(std::move(nodes));
    }
    return {{"trees", std::move(trees)}};
}
inline json params_to_json(const MlpModel& m) {
    return {{"inputs", m.inputs}, {"hidden", m.hidden}, {"w1", m.w1}, {"b1", m.b1}, {"w2", m.w2}, {"b2", m.b2}};
}

}  // namespace detail

inline std::string save_model(const TrainedModel& m) {
    nlohmann::json doc{{"format", "bron-model"},
                       {"version", kModelFormatVersion},
                       {"kind", classifier_key(m.kind())},
                       {"threshold", m.threshold()},
                       {"inputs", m.inputs()},
                       {"params", std::visit([](const auto& p) { return detail::params_to_json(p); }, m.params())}};
    return doc.dump();
}

namespace detail {
inline TrainedModel model_from_json(ClassifierKind kind, double threshold, const nlohmann::json& p) {
    switch (kind) {
        case ClassifierKind::NaiveBayes: {
            NaiveBayesModel m;
            m.multinomial = p.at("multinomial").get<bool>();
            for (int c = 0; c < 2; ++c) {
                m.log_prior[c] = p.at("log_prior").at(static_cast<std::size_t>(c)).get<double>();
                m.log_prob[c] = p.at("log_prob").at(static_cast<std::size_t>(c)).get<std::vector<double>>();
                m.mean[c] = p.at("mean").at(static_cast<std::size_t>(c)).get<std::vector<double>>();
                m.var[c] = p.at("var").at(static_cast<std::size_t>(c)).get<std::vector<double>>();
            }
            return {kind, threshold, m};
        }
        case ClassifierKind::Knn: {
            KnnModel m;
            m.k = p.at("k").get<std::size_t>();
            m.train_x = Matrix(p.at("rows").get<std::size_t>(), p.at("cols").get<std::size_t>(),
                               p.at("x").get<std::vector<double>>());
            m.train_y = p.at("y").get<std::vector<int>>();
            return {kind, threshold, m};
        }
        case ClassifierKind::LogisticSgd:
        case ClassifierKind::LinearSvm:
            return {kind, threshold,
                    LinearModel{p.at("w").get<std::vector<double>>(), p.at("b").get<double>(),
                                kind == ClassifierKind::LogisticSgd}};
        case ClassifierKind::RandomForest: {
            ForestModel m;
            for (const auto& t : p.at("trees")) {
                DecisionTree tree;
                for (const auto& n : t)
                    tree.nodes.push_back({n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<int>(),
                                          n.at(3).get<int>(), n.at(4).get<double>()});
                m.trees.push_back(std::move(tree));
            }
            return {kind, threshold, m};
        }
        case ClassifierKind::Mlp: {
            MlpModel m;
            m.inputs = p.at("inputs").get<std::size_t>();
            m.hidden = p.at("hidden").get<std::size_t>();
            m.w1 = p.at("w1").get<std::vector<double>>();
            m.b1 = p.at("b1").get<std::vector<double>>();
            m.w2 = p.at("w2").get<std::vector<double>>();
            m.b2 = p.at("b2").get<double>();
            if (m.w1.size() != m.inputs * m.hidden) throw DimensionMismatch("mlp w1 size");
            return {kind, threshold, m};
        }
    }
    throw MalformedInput("unknown kind", "$.kind");
}
}  // namespace detail

inline TrainedModel load_model(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw MalformedInput(e.what(), "byte " + std::to_string(e.byte));
    }
    try {
        if (doc.at("format") != "bron-model") throw MalformedInput("not a model document", "$.format");
        if (doc.at("version") != kModelFormatVersion)
            throw UnsupportedVersion("model document version " + doc.at("version").dump());
        auto kind = parse_classifier_key(doc.at("kind").get<std::string>());
        if (!kind) throw MalformedInput("unknown kind", "$.kind");
        const double threshold = doc.at("threshold").get<double>();
        const json& p = doc.at("params");
        TrainedModel m = detail::model_from_json(*kind, threshold, p);
        m.set_inputs(doc.value("inputs", std::size_t{0}));
        return m;
    } catch (const json::exception& e) {
        throw MalformedInput(e.what(), "model document");
    }
}


}  // namespace bron
