#pragma once
// Read-only statistics over a frozen ThreatGraph: per-weakness linkage
// reports, Technique-AttackPattern connectivity, and frequency tables.

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bron/error.hpp"
#include "bron/graph.hpp"
#include "bron/text.hpp"

namespace bron {

struct WeaknessReport {
    std::string cwe_id;
    std::string name;
    std::size_t n_tactics = 0;
    std::size_t n_techniques = 0;  // sub-techniques included
    std::size_t n_attack_patterns = 0;
    std::size_t n_vulnerabilities = 0;
    std::size_t n_product_configs = 0;
    double sum_cvss = 0.0;
    std::optional<double> avg_cvss;  // empty when n_vulnerabilities == 0
    std::size_t missing_cvss = 0;
    std::vector<std::string> warnings;
};

inline WeaknessReport weakness_report(const ThreatGraph& g, const std::string& cwe_id) {
    const NodeId id{Layer::Weakness, cwe_id};
    const auto idx = g.index_of(id);
    if (!idx) throw UnknownNode("unknown weakness " + cwe_id);

    WeaknessReport r;
    r.cwe_id = cwe_id;
    r.name = g.at(*idx).name;
    r.n_tactics = g.reachable_indices(*idx, Layer::Tactic).size();
    r.n_techniques = g.reachable_indices(*idx, Layer::Technique).size();
    r.n_attack_patterns = g.reachable_indices(*idx, Layer::AttackPattern).size();
    r.n_product_configs = g.reachable_indices(*idx, Layer::ProductConfig).size();

    const auto vulns = g.reachable_indices(*idx, Layer::Vulnerability);
    r.n_vulnerabilities = vulns.size();
    for (auto v : vulns) {
        const auto& n = g.at(v);
        if (n.cvss) {
            r.sum_cvss += *n.cvss;
        } else {
            ++r.missing_cvss;
        }
    }
    if (r.missing_cvss > 0)
        r.warnings.push_back(std::to_string(r.missing_cvss) + " linked vulnerabilities lack a CVSS score (counted as 0)");
    if (r.n_vulnerabilities > 0) r.avg_cvss = r.sum_cvss / static_cast<double>(r.n_vulnerabilities);
    return r;
}

struct ConnectivityStats {
    std::size_t n_techniques = 0;
    std::size_t n_attack_patterns = 0;
    std::size_t possible_pairs = 0;
    std::size_t linked_pairs = 0;
    double density_percent = 0.0;
    bool density_defined = false;  // false when possible_pairs == 0
    double pct_unlinked_techniques = 0.0;
};

inline ConnectivityStats connectivity_stats(const ThreatGraph& g) {
    ConnectivityStats s;
    std::size_t unlinked = 0;
    for (ThreatGraph::Index i = 0; i < g.node_count(); ++i) {
        const Layer l = g.at(i).id.layer;
        if (l == Layer::AttackPattern) ++s.n_attack_patterns;
        if (l != Layer::Technique) continue;
        ++s.n_techniques;
        std::size_t capecs = 0;
        for (auto j : g.adjacent(i, Direction::Down))
            if (g.at(j).id.layer == Layer::AttackPattern) ++capecs;
        s.linked_pairs += capecs;
        if (capecs == 0) ++unlinked;
    }
    s.possible_pairs = s.n_techniques * s.n_attack_patterns;
    if (s.possible_pairs > 0) {
        s.density_defined = true;
        s.density_percent = 100.0 * static_cast<double>(s.linked_pairs) / static_cast<double>(s.possible_pairs);
    }
    if (s.n_techniques > 0)
        s.pct_unlinked_techniques = 100.0 * static_cast<double>(unlinked) / static_cast<double>(s.n_techniques);
    return s;
}

inline std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

/// Density as a percentage with three decimals, e.g. "0.032%".
inline std::string format_density(const ConnectivityStats& s) {
    return format_fixed(s.density_defined ? s.density_percent : 0.0, 3) + "%";
}

/// For each node of `layer`, the number of roots whose reachable set
/// contains it. Sorted by count descending, then by local id.
inline std::vector<std::pair<NodeId, std::size_t>> frequency_table(const ThreatGraph& g,
                                                                   const std::vector<NodeId>& roots,
                                                                   Layer layer, std::size_t top_k) {
    if (top_k == 0) throw InvalidConfig("top_k must be at least 1");
    std::map<NodeId, std::size_t> counts;
    std::vector<NodeId> distinct = roots;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (const auto& root : distinct) {
        const auto idx = g.index_of(root);
        if (!idx) continue;
        for (auto v : g.reachable_indices(*idx, layer)) ++counts[g.at(v).id];
    }
    std::vector<std::pair<NodeId, std::size_t>> out(counts.begin(), counts.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    if (out.size() > top_k) out.resize(top_k);
    return out;
}

/// Unigram (n=1) or bigram (n=2) counts across all texts. Sorted by count
/// descending, then lexicographically.
inline std::vector<std::pair<std::string, std::size_t>> ngram_frequency(const std::vector<std::string>& texts,
                                                                        int n, std::size_t top_k) {
    if (n != 1 && n != 2) throw InvalidConfig("n-gram order must be 1 or 2");
    std::map<std::string, std::size_t> counts;
    for (const auto& t : texts) {
        const auto tok = tokenize(t);
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tok.size(); ++i)
            ++counts[n == 1 ? tok[i] : tok[i] + " " + tok[i + 1]];
    }
    std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    if (out.size() > top_k) out.resize(top_k);
    return out;
}

namespace detail {
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}
}  // namespace detail

inline constexpr const char* kWeaknessCsvHeader =
    "cwe_id,name,n_tactics,n_techniques,n_attack_patterns,n_vulnerabilities,sum_cvss,avg_cvss,n_apc";

/// One CSV row per report; avg_cvss is left empty when undefined.
inline std::string weakness_csv(const std::vector<WeaknessReport>& reports) {
    std::string out = std::string(kWeaknessCsvHeader) + "\n";
    for (const auto& r : reports) {
        out += detail::csv_field(r.cwe_id) + "," + detail::csv_field(r.name) + "," + std::to_string(r.n_tactics) +
               "," + std::to_string(r.n_techniques) + "," + std::to_string(r.n_attack_patterns) + "," +
               std::to_string(r.n_vulnerabilities) + "," + format_fixed(r.sum_cvss, 2) + "," +
               (r.avg_cvss ? format_fixed(*r.avg_cvss, 2) : std::string{}) + "," +
               std::to_string(r.n_product_configs) + "\n";
    }
    return out;
}

}  // namespace bron
