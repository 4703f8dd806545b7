#pragma once
// Shared fixtures and brute-force oracles for the test binaries.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bron/bron.hpp"

namespace bron::testing {

inline NodeId tac(const std::string& s) { return {Layer::Tactic, s}; }
inline NodeId tech(const std::string& s) { return {Layer::Technique, s}; }
inline NodeId cap(const std::string& s) { return {Layer::AttackPattern, s}; }
inline NodeId cwe(const std::string& s) { return {Layer::Weakness, s}; }
inline NodeId cve(const std::string& s) { return {Layer::Vulnerability, s}; }
inline NodeId cpe(const std::string& s) { return {Layer::ProductConfig, s}; }

inline void add(ThreatGraph& g, const NodeId& id, const std::string& name, std::optional<double> cvss = std::nullopt) {
    g.add_node({id, name, "", cvss});
}

// 2 tactics, 3 techniques, 2 CAPECs, 2 CWEs, 1 CVE; 8 edges. CWE-10 is
// reachable from TA0001 through both T1001 and T1002. CWE-20 is isolated.
inline ThreatGraph desk_fixture() {
    ThreatGraph g;
    add(g, tac("TA0001"), "Initial Access");
    add(g, tac("TA0007"), "Discovery");
    add(g, tech("T1001"), "Data Obfuscation");
    add(g, tech("T1002"), "Data Compressed");
    add(g, tech("T1003"), "Credential Dumping");
    add(g, cap("1"), "Accessing Functionality");
    add(g, cap("2"), "Inducing Account Lockout");
    add(g, cwe("10"), "Weak Input Handling");
    add(g, cwe("20"), "Improper Input Validation");
    add(g, cve("CVE-2020-0001"), "", 5.0);
    g.add_edge(tac("TA0001"), tech("T1001"));
    g.add_edge(tac("TA0001"), tech("T1002"));
    g.add_edge(tac("TA0007"), tech("T1003"));
    g.add_edge(tech("T1001"), cap("1"));
    g.add_edge(tech("T1002"), cap("2"));
    g.add_edge(cap("1"), cwe("10"));
    g.add_edge(cap("2"), cwe("10"));
    g.add_edge(cwe("10"), cve("CVE-2020-0001"));
    g.freeze();
    return g;
}

// Plain edge list: (down source, down target), no index.
struct EdgeList {
    std::vector<NodeId> nodes;
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::map<NodeId, std::optional<double>> cvss;
};

inline EdgeList edge_list_of(const ThreatGraph& g) {
    EdgeList e;
    e.nodes = g.node_ids();
    e.edges = g.edges();
    for (const auto& id : e.nodes) e.cvss[id] = g.node(id).cvss;
    return e;
}

inline std::set<NodeId> oracle_neighbors(const EdgeList& el, const NodeId& id, Direction d) {
    std::set<NodeId> out;
    for (const auto& [a, b] : el.edges) {
        if (d == Direction::Down && a == id) out.insert(b);
        if (d == Direction::Up && b == id) out.insert(a);
    }
    return out;
}

// Recursive depth-first walk over the raw edge list, never stepping past
// the target layer.
inline std::set<NodeId> oracle_reachable(const EdgeList& el, const NodeId& start, Layer target) {
    std::set<NodeId> out;
    const int from = layer_rank(start.layer), to = layer_rank(target);
    if (from == to) return out;
    const bool down = to > from;
    std::set<NodeId> visited{start};
    std::function<void(const NodeId&)> walk = [&](const NodeId& u) {
        for (const auto& [a, b] : el.edges) {
            const NodeId* next = nullptr;
            if (down && a == u) next = &b;
            if (!down && b == u) next = &a;
            if (!next || visited.count(*next)) continue;
            const int r = layer_rank(next->layer);
            if (down ? r > to : r < to) continue;
            visited.insert(*next);
            if (next->layer == target) out.insert(*next);
            walk(*next);
        }
    };
    walk(start);
    return out;
}

struct OracleReport {
    std::size_t counts[6] = {};
    double sum_cvss = 0.0;
};

inline OracleReport oracle_weakness(const EdgeList& el, const NodeId& root) {
    OracleReport r;
    for (Layer l : kAllLayers) {
        const auto s = oracle_reachable(el, root, l);
        r.counts[layer_rank(l)] = s.size();
        if (l == Layer::Vulnerability)
            for (const auto& v : s) r.sum_cvss += el.cvss.at(v).value_or(0.0);
    }
    return r;
}

// Random layered graph: up to max_nodes nodes spread over the six layers,
// random adjacent-layer edges plus acyclic sub-technique links.
inline ThreatGraph random_graph(std::uint64_t seed, std::size_t max_nodes = 200, bool freeze = true) {
    Rng rng(seed);
    const std::size_t n = 6 + rng.below(max_nodes - 5);
    std::vector<std::vector<NodeId>> by_layer(6);
    ThreatGraph g;
    for (std::size_t i = 0; i < n; ++i) {
        const Layer l = kAllLayers[i < 6 ? i : rng.below(6)];
        NodeId id{l, "n" + std::to_string(i)};
        std::optional<double> cvss;
        if (l == Layer::Vulnerability && rng.below(5) != 0) cvss = static_cast<double>(rng.below(101)) / 10.0;
        g.add_node({id, "node " + std::to_string(i) + " w" + std::to_string(rng.below(20)),
                    rng.below(2) ? "desc, \"quoted\" \\ " + std::to_string(i) : "", cvss});
        by_layer[layer_rank(l)].push_back(id);
    }
    const std::size_t m = rng.below(3 * n);
    for (std::size_t e = 0; e < m; ++e) {
        const std::size_t upper = rng.below(5);
        const auto& a = by_layer[upper];
        const auto& b = by_layer[upper + 1];
        g.add_edge(a[rng.below(a.size())], b[rng.below(b.size())]);
    }
    const auto& techs = by_layer[1];
    for (std::size_t e = 0; e < techs.size() / 3; ++e) {
        std::size_t i = rng.below(techs.size()), j = rng.below(techs.size());
        if (i == j) continue;
        if (i > j) std::swap(i, j);
        g.add_edge(techs[i], techs[j]);
    }
    if (freeze) g.freeze();
    return g;
}

// Labelled corpus whose classes draw words from disjoint vocabularies.
struct Corpus {
    std::vector<std::string> texts;
    std::vector<int> labels;
};

inline Corpus disjoint_corpus(std::size_t n, std::uint64_t seed, std::size_t words_per_text = 6,
                              std::size_t vocab = 40) {
    Rng rng(seed);
    Corpus c;
    for (std::size_t i = 0; i < n; ++i) {
        const int y = i < n / 2 ? 1 : 0;
        std::string t;
        for (std::size_t w = 0; w < words_per_text; ++w)
            t += (y ? " pos" : " neg") + std::to_string(rng.below(vocab));
        c.texts.push_back(t);
        c.labels.push_back(y);
    }
    return c;
}

inline Corpus shuffled_labels(Corpus c, std::uint64_t seed) {
    Rng rng(seed);
    rng.shuffle(c.labels);
    return c;
}

// Graph whose linked CAPECs all share the weakness "hot" while unlinked
// CAPECs share "cold", so CWE names predict the label.
inline ThreatGraph signal_graph(std::uint64_t seed, std::size_t techniques = 60, std::size_t capecs = 80,
                                std::size_t links = 120) {
    Rng rng(seed);
    ThreatGraph g;
    add(g, cwe("1"), "hot overflow memory");
    add(g, cwe("2"), "cold config default");
    add(g, tac("TA1"), "tactic alpha");
    for (std::size_t i = 0; i < techniques; ++i) {
        add(g, tech("T" + std::to_string(i)), "technique t" + std::to_string(i));
        g.add_edge(tac("TA1"), tech("T" + std::to_string(i)));
    }
    const std::size_t linked_capecs = capecs / 4;
    for (std::size_t j = 0; j < capecs; ++j) {
        add(g, cap(std::to_string(j)), "pattern p" + std::to_string(j));
        g.add_edge(cap(std::to_string(j)), cwe(j < linked_capecs ? "1" : "2"));
    }
    std::size_t made = 0;
    while (made < links) {
        const auto t = tech("T" + std::to_string(rng.below(techniques)));
        const auto c = cap(std::to_string(rng.below(linked_capecs)));
        made += g.add_edge(t, c);
    }
    g.freeze();
    return g;
}

}  // namespace bron::testing

namespace bron::testing {

// n_tech techniques and n_cap CAPECs; technique i links to CAPEC i for
// i < n_edges (so exactly n_edges techniques are linked).
inline ThreatGraph connectivity_fixture(std::size_t n_tech, std::size_t n_cap, std::size_t n_edges) {
    ThreatGraph g;
    for (std::size_t i = 0; i < n_tech; ++i) add(g, tech("T" + std::to_string(i)), "t");
    for (std::size_t j = 0; j < n_cap; ++j) add(g, cap("CAPEC-" + std::to_string(j)), "c");
    for (std::size_t e = 0; e < n_edges; ++e) g.add_edge(tech("T" + std::to_string(e)), cap("CAPEC-" + std::to_string(e)));
    g.freeze();
    return g;
}

}  // namespace bron::testing
