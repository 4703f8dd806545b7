#pragma once
// Experiment output files and grid configuration input.
//
//   results.csv       experiment,trial,error,auc,f1   (one row per trial)
//   summary.csv       experiment,trials,mean_error,mean_auc,mean_f1
//                     sorted by mean_f1 descending, then name
//   significance.csv  metric,a,b,p_value,p_adjusted,significant,better
//   error.svg, auc.svg, f1.svg   box plots, one box per experiment
//
// grid.json is an array of objects:
//   {"name": "CWE-TACTIC-BOW-RANDOM_FOREST",      required
//    "trials": 100, "train_fraction": 0.7, "master_seed": 1,
//    "hyperparameters": {"trees": 100},
//    "fixed_negatives": false, "leaky_capec_techniques": false,
//    "embeddings": "vectors.csv"}                 required for EMB/BERT

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bron/error.hpp"
#include "bron/features.hpp"
#include "bron/harness.hpp"
#include "bron/ingest.hpp"
#include "json.hpp"

namespace bron {

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

inline std::string results_csv(const std::vector<ExperimentSummary>& summaries) {
    std::string out = "experiment,trial,error,auc,f1\n";
    for (const auto& s : summaries)
        for (const auto& t : s.trials)
            out += s.name + "," + std::to_string(t.trial_index) + "," + format_double(t.error) + "," +
                   format_double(t.auc) + "," + format_double(t.f1) + "\n";
    return out;
}

inline std::string summary_csv(const std::vector<ExperimentSummary>& summaries) {
    std::vector<const ExperimentSummary*> order;
    for (const auto& s : summaries) order.push_back(&s);
    std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
        if (a->mean_f1 != b->mean_f1) return a->mean_f1 > b->mean_f1;
        return a->name < b->name;
    });
    std::string out = "experiment,trials,mean_error,mean_auc,mean_f1\n";
    for (const auto* s : order)
        out += s->name + "," + std::to_string(s->trials.size()) + "," + format_double(s->mean_error) + "," +
               format_double(s->mean_auc) + "," + format_double(s->mean_f1) + "\n";
    return out;
}

inline std::string significance_csv(const GridResult& g) {
    std::string out = "metric,a,b,p_value,p_adjusted,significant,better\n";
    for (const auto& c : g.comparisons) {
        const std::string better = c.better > 0 ? g.summaries[c.a].name : (c.better < 0 ? g.summaries[c.b].name : "");
        out += std::string(metric_name(c.metric)) + "," + g.summaries[c.a].name + "," + g.summaries[c.b].name + "," +
               format_double(c.p_value) + "," + format_double(c.p_adjusted) + "," + (c.significant ? "1" : "0") +
               "," + better + "\n";
    }
    return out;
}

/// Quantile by linear interpolation between order statistics
/// (h = (n-1)p, the "type 7" rule). `sorted` must be ascending.
inline double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return 0.0;
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct BoxStats {
    double q1 = 0, median = 0, q3 = 0;
    double whisker_low = 0, whisker_high = 0;  // most extreme values within 1.5 IQR of the box
    std::vector<double> outliers;
};

inline BoxStats box_stats(std::vector<double> values) {
    BoxStats b;
    if (values.empty()) return b;
    std::sort(values.begin(), values.end());
    b.q1 = quantile(values, 0.25);
    b.median = quantile(values, 0.5);
    b.q3 = quantile(values, 0.75);
    const double iqr = b.q3 - b.q1;
    const double lo_fence = b.q1 - 1.5 * iqr, hi_fence = b.q3 + 1.5 * iqr;
    b.whisker_low = b.q1;
    b.whisker_high = b.q3;
    for (double v : values) {
        if (v < lo_fence || v > hi_fence) {
            b.outliers.push_back(v);
            continue;
        }
        b.whisker_low = std::min(b.whisker_low, v);
        b.whisker_high = std::max(b.whisker_high, v);
    }
    return b;
}

namespace detail {
inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}
inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}
}  // namespace detail

/// Standalone SVG with one box per experiment; the value axis spans [0, 1].
inline std::string box_plot_svg(const std::vector<ExperimentSummary>& summaries, Metric metric) {
    using detail::num;
    const double left = 60, top = 30, plot_h = 300, slot = 90, bottom_margin = 200;
    const double width = left + slot * static_cast<double>(summaries.size()) + 20;
    const double height = top + plot_h + bottom_margin;
    auto y_of = [&](double v) { return top + plot_h * (1.0 - std::clamp(v, 0.0, 1.0)); };

    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
                    "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(width / 2) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" +
         std::string(metric_name(metric)) + "</text>\n";
    for (int i = 0; i <= 5; ++i) {
        const double v = i / 5.0, y = y_of(v);
        s += "<line x1=\"" + num(left) + "\" y1=\"" + num(y) + "\" x2=\"" + num(width - 20) + "\" y2=\"" + num(y) +
             "\" stroke=\"#ddd\"/>\n";
        s += "<text x=\"" + num(left - 6) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" + num(v) + "</text>\n";
    }
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" + num(top + plot_h) +
         "\" stroke=\"black\"/>\n";

    for (std::size_t i = 0; i < summaries.size(); ++i) {
        std::vector<double> vals;
        for (const auto& t : summaries[i].trials) vals.push_back(metric_of(t, metric));
        const BoxStats b = box_stats(vals);
        const double cx = left + slot * (static_cast<double>(i) + 0.5), half = slot * 0.3;
        s += "<g>\n";
        s += "<line x1=\"" + num(cx) + "\" y1=\"" + num(y_of(b.whisker_high)) + "\" x2=\"" + num(cx) + "\" y2=\"" +
             num(y_of(b.q3)) + "\" stroke=\"black\"/>\n";
        s += "<line x1=\"" + num(cx) + "\" y1=\"" + num(y_of(b.q1)) + "\" x2=\"" + num(cx) + "\" y2=\"" +
             num(y_of(b.whisker_low)) + "\" stroke=\"black\"/>\n";
        for (double w : {b.whisker_low, b.whisker_high})
            s += "<line x1=\"" + num(cx - half / 2) + "\" y1=\"" + num(y_of(w)) + "\" x2=\"" + num(cx + half / 2) +
                 "\" y2=\"" + num(y_of(w)) + "\" stroke=\"black\"/>\n";
        s += "<rect x=\"" + num(cx - half) + "\" y=\"" + num(y_of(b.q3)) + "\" width=\"" + num(2 * half) +
             "\" height=\"" + num(y_of(b.q1) - y_of(b.q3)) + "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
        s += "<line x1=\"" + num(cx - half) + "\" y1=\"" + num(y_of(b.median)) + "\" x2=\"" + num(cx + half) +
             "\" y2=\"" + num(y_of(b.median)) + "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
        for (double o : b.outliers)
            s += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(y_of(o)) + "\" r=\"2.5\" fill=\"none\" stroke=\"black\"/>\n";
        s += "<text transform=\"translate(" + num(cx) + "," + num(top + plot_h + 10) +
             ") rotate(45)\" text-anchor=\"start\">" + detail::xml_escape(summaries[i].name) + "</text>\n";
        s += "</g>\n";
    }
    s += "</svg>\n";
    return s;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("failed writing " + path.string());
}

/// Writes results.csv, summary.csv and one SVG per metric into out_dir
/// (created if missing); significance.csv too when a grid result is given.
/// Returns the written paths.
inline std::vector<std::filesystem::path> emit_results(const std::vector<ExperimentSummary>& summaries,
                                                       const std::filesystem::path& out_dir,
                                                       const GridResult* grid = nullptr) {
    if (summaries.empty()) throw InvalidConfig("no experiment summaries to write");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    auto put = [&](const char* name, const std::string& content) {
        write_text_file(out_dir / name, content);
        written.push_back(out_dir / name);
    };
    put("results.csv", results_csv(summaries));
    put("summary.csv", summary_csv(summaries));
    for (Metric m : kAllMetrics) put((std::string(metric_name(m)) + ".svg").c_str(), box_plot_svg(summaries, m));
    if (grid) put("significance.csv", significance_csv(*grid));
    return written;
}

/// Parses grid.json. `default_seed` applies to entries without master_seed;
/// relative embedding paths resolve against `base_dir`.
inline std::vector<ExperimentConfig> parse_grid_config(const std::string& text, std::uint64_t default_seed,
                                                       const std::filesystem::path& base_dir = {},
                                                       const ThreatGraph* graph = nullptr) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw MalformedInput(e.what(), "byte " + std::to_string(e.byte));
    }
    if (!doc.is_array()) throw MalformedInput("grid config must be a JSON array", "$");
    std::map<std::string, std::shared_ptr<const EmbeddingTable>> tables;
    std::vector<ExperimentConfig> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& e = doc[i];
        const std::string where = "$[" + std::to_string(i) + "]";
        try {
            ExperimentConfig c = ExperimentConfig::from_name(e.at("name").get<std::string>());
            c.trials = e.value("trials", ExperimentConfig::kDefaultTrials);
            c.train_fraction = e.value("train_fraction", ExperimentConfig::kDefaultTrainFraction);
            c.master_seed = e.value("master_seed", default_seed);
            c.fixed_negatives = e.value("fixed_negatives", false);
            c.leaky_capec_techniques = e.value("leaky_capec_techniques", false);
            if (auto h = e.find("hyperparameters"); h != e.end())
                for (const auto& [k, v] : h->items()) c.classifier.overrides[k] = v.get<double>();
            if (auto p = e.find("embeddings"); p != e.end()) {
                std::filesystem::path path = p->get<std::string>();
                if (path.is_relative()) path = base_dir / path;
                auto& t = tables[path.string()];
                if (!t) t = std::make_shared<const EmbeddingTable>(import_embeddings(read_file(path.string()), graph));
                c.embeddings = t;
            }
            c.validate();
            out.push_back(std::move(c));
        } catch (const json::exception& ex) {
            throw MalformedInput(ex.what(), where);
        } catch (const InvalidConfig& ex) {
            throw InvalidConfig(where + ": " + ex.what());
        }
    }
    return out;
}

}  // namespace bron
