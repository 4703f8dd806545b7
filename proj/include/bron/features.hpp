#pragma once
// Technique-CAPEC pair datasets and their numeric representations.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bron/error.hpp"
#include "bron/graph.hpp"
#include "bron/learn/matrix.hpp"
#include "bron/rng.hpp"
#include "bron/text.hpp"

namespace bron {

/// Text components that can describe a pair, listed in concatenation order.
enum class FeatureComponent : std::uint8_t {
    TacticNames,
    TechniqueName,
    CapecName,
    CweNames,
    CapecTechniques,
};

inline constexpr FeatureComponent kComponentOrder[] = {
    FeatureComponent::TacticNames, FeatureComponent::TechniqueName, FeatureComponent::CapecName,
    FeatureComponent::CweNames,    FeatureComponent::CapecTechniques,
};

class FeatureSelection {
public:
    FeatureSelection() = default;
    FeatureSelection(std::initializer_list<FeatureComponent> cs) {
        for (auto c : cs) insert(c);
    }

    void insert(FeatureComponent c) { bits_ |= bit(c); }
    bool contains(FeatureComponent c) const { return (bits_ & bit(c)) != 0; }
    bool empty() const { return bits_ == 0; }
    std::size_t size() const {
        std::size_t n = 0;
        for (auto c : kComponentOrder) n += contains(c);
        return n;
    }

    friend bool operator==(const FeatureSelection&, const FeatureSelection&) = default;

private:
    static std::uint8_t bit(FeatureComponent c) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(c)); }
    std::uint8_t bits_ = 0;
};

struct LabeledPair {
    NodeId technique;
    NodeId capec;
    bool linked = false;

    friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

/// All linked Technique-AttackPattern pairs plus an equal number of pairs
/// drawn uniformly without replacement from the unlinked ones. If unlinked
/// pairs are the minority, positives are under-sampled instead. The result
/// is shuffled; everything is determined by `seed`.
inline std::vector<LabeledPair> build_pairs(const ThreatGraph& g, std::uint64_t seed) {
    const auto techniques = g.nodes_in(Layer::Technique);
    const auto capecs = g.nodes_in(Layer::AttackPattern);
    std::unordered_map<NodeId, std::uint64_t, NodeIdHash> capec_pos;
    for (std::uint64_t j = 0; j < capecs.size(); ++j) capec_pos.emplace(capecs[j], j);

    const std::uint64_t n_capec = capecs.size();
    std::vector<std::uint64_t> linked;
    for (std::uint64_t i = 0; i < techniques.size(); ++i)
        for (const auto& nb : g.neighbors(techniques[i], Direction::Down))
            if (nb.layer == Layer::AttackPattern) linked.push_back(i * n_capec + capec_pos.at(nb));
    if (linked.empty()) throw NoPositivePairs("graph has no Technique-AttackPattern links");
    std::sort(linked.begin(), linked.end());

    const std::uint64_t total = techniques.size() * n_capec;
    const std::uint64_t n_unlinked = total - linked.size();
    if (n_unlinked == 0) throw DegenerateData("every Technique-AttackPattern pair is linked");
    const std::uint64_t k = std::min<std::uint64_t>(linked.size(), n_unlinked);

    Rng rng(seed);
    auto make = [&](std::uint64_t flat, bool label) {
        return LabeledPair{techniques[flat / n_capec], capecs[flat % n_capec], label};
    };

    std::vector<LabeledPair> out;
    out.reserve(2 * k);
    if (k == linked.size()) {
        for (auto flat : linked) out.push_back(make(flat, true));
    } else {
        auto picks = rng.sample(linked.size(), k);
        std::sort(picks.begin(), picks.end());
        for (auto p : picks) out.push_back(make(linked[p], true));
    }
    // r-th unlinked flat index: step over every linked index at or below it.
    auto picks = rng.sample(n_unlinked, k);
    std::sort(picks.begin(), picks.end());
    for (auto r : picks) {
        std::uint64_t flat = r;
        for (auto l : linked) {
            if (l <= flat) {
                ++flat;
            } else {
                break;
            }
        }
        out.push_back(make(flat, false));
    }
    rng.shuffle(out);
    return out;
}

struct FeatureTextOptions {
    /// Keep the paired technique's own name inside CapecTechniques. This
    /// leaks the label for linked pairs; off by default.
    bool leaky_capec_techniques = false;
};

namespace detail {

inline std::vector<NodeId> adjacent_in(const ThreatGraph& g, const NodeId& id, Direction d, Layer l) {
    std::vector<NodeId> out;
    for (auto& nb : g.neighbors(id, d))
        if (nb.layer == l) out.push_back(std::move(nb));
    return out;
}

/// Node ids behind each selected component, in concatenation order. Set
/// components are sorted by name.
inline std::vector<std::pair<FeatureComponent, std::vector<NodeId>>> component_nodes(
    const LabeledPair& pair, const FeatureSelection& sel, const ThreatGraph& g, const FeatureTextOptions& opt) {
    const ThreatNode& tech = g.node(pair.technique);
    const ThreatNode& capec = g.node(pair.capec);
    auto by_name = [&g](std::vector<NodeId> ids) {
        std::stable_sort(ids.begin(), ids.end(),
                         [&g](const NodeId& a, const NodeId& b) { return g.node(a).name < g.node(b).name; });
        return ids;
    };

    std::vector<std::pair<FeatureComponent, std::vector<NodeId>>> out;
    for (auto c : kComponentOrder) {
        if (!sel.contains(c)) continue;
        switch (c) {
            case FeatureComponent::TacticNames:
                out.emplace_back(c, by_name(adjacent_in(g, tech.id, Direction::Up, Layer::Tactic)));
                break;
            case FeatureComponent::TechniqueName: out.emplace_back(c, std::vector<NodeId>{tech.id}); break;
            case FeatureComponent::CapecName: out.emplace_back(c, std::vector<NodeId>{capec.id}); break;
            case FeatureComponent::CweNames:
                out.emplace_back(c, by_name(adjacent_in(g, capec.id, Direction::Down, Layer::Weakness)));
                break;
            case FeatureComponent::CapecTechniques: {
                std::vector<NodeId> keep;
                for (auto& t : adjacent_in(g, capec.id, Direction::Up, Layer::Technique)) {
                    const std::string& nm = g.node(t).name;
                    if (nm == capec.name) continue;
                    if (!opt.leaky_capec_techniques && nm == tech.name) continue;
                    keep.push_back(std::move(t));
                }
                out.emplace_back(c, by_name(std::move(keep)));
                break;
            }
        }
    }
    return out;
}

}  // namespace detail

/// Names of the selected components joined with ", " in the fixed order
/// tactics, technique, CAPEC, CWEs, CAPEC techniques.
inline std::string feature_text(const LabeledPair& pair, const FeatureSelection& sel, const ThreatGraph& g,
                                const FeatureTextOptions& opt = {}) {
    std::string out;
    for (const auto& [component, ids] : detail::component_nodes(pair, sel, g, opt))
        for (const auto& id : ids) {
            const std::string& nm = g.node(id).name;
            if (nm.empty()) continue;
            if (!out.empty()) out += ", ";
            out += nm;
        }
    return out;
}

class Vocabulary {
public:
    /// Returns the column of `token`, adding it if unseen.
    std::uint32_t add(const std::string& token) {
        auto [it, inserted] = index_.try_emplace(token, static_cast<std::uint32_t>(tokens_.size()));
        if (inserted) tokens_.push_back(token);
        return it->second;
    }

    std::optional<std::uint32_t> find(const std::string& token) const {
        auto it = index_.find(token);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const noexcept { return tokens_.size(); }
    bool empty() const noexcept { return tokens_.empty(); }
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }

private:
    std::unordered_map<std::string, std::uint32_t> index_;
    std::vector<std::string> tokens_;
};

/// Column index -> count, sorted by column.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

inline Vocabulary bow_fit(const std::vector<std::string>& training_texts) {
    Vocabulary v;
    for (const auto& t : training_texts)
        for (const auto& tok : tokenize(t)) v.add(tok);
    if (v.empty()) throw EmptyCorpus("no tokens in training corpus");
    return v;
}

inline SparseVector bow_transform(const Vocabulary& vocab, std::string_view text) {
    std::vector<std::uint32_t> cols;
    for (const auto& tok : tokenize(text))
        if (auto c = vocab.find(tok)) cols.push_back(*c);
    std::sort(cols.begin(), cols.end());
    SparseVector out;
    for (auto c : cols) {
        if (!out.empty() && out.back().first == c) {
            out.back().second += 1.0;
        } else {
            out.emplace_back(c, 1.0);
        }
    }
    return out;
}

enum class Representation { Bow, Embedding };

struct FeatureMatrix {
    Representation mode = Representation::Bow;
    Matrix x;
    std::vector<int> labels;  // 1 = linked
    Vocabulary vocabulary;    // Bow mode only
};

inline FeatureMatrix bow_matrix(const Vocabulary& vocab, const std::vector<std::string>& texts,
                                const std::vector<int>& labels) {
    if (texts.size() != labels.size()) throw DimensionMismatch("texts and labels differ in length");
    FeatureMatrix fm{Representation::Bow, Matrix(texts.size(), vocab.size()), labels, vocab};
    for (std::size_t i = 0; i < texts.size(); ++i)
        for (auto [c, v] : bow_transform(vocab, texts[i])) fm.x(i, c) = v;
    return fm;
}

struct EmbeddingTable {
    std::size_t dim = 0;
    std::unordered_map<NodeId, std::vector<double>, NodeIdHash> vectors;
    std::vector<std::string> warnings;
};

/// Reads `layer,id,v0,...,vD-1` rows (an optional header row starting with
/// "layer" is skipped). When `graph` is given, ids absent from it produce
/// warnings but are still loaded.
inline EmbeddingTable import_embeddings(std::string_view csv, const ThreatGraph* graph = nullptr) {
    EmbeddingTable t;
    std::istringstream in{std::string(csv)};
    std::string line;
    std::size_t line_no = 0;
    bool have_dim = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
        if (line_no == 1 && !f.empty() && f[0] == "layer") continue;
        const std::string where = "line " + std::to_string(line_no);
        if (f.size() < 3) throw MalformedInput("expected layer,id,v0..", where);
        auto layer = parse_layer(f[0]);
        if (!layer) throw MalformedInput("unknown layer '" + f[0] + "'", where);
        std::vector<double> v;
        for (std::size_t i = 2; i < f.size(); ++i) {
            try {
                std::size_t used = 0;
                v.push_back(std::stod(f[i], &used));
                if (used != f[i].size()) throw std::invalid_argument(f[i]);
            } catch (const std::exception&) {
                throw MalformedInput("non-numeric value '" + f[i] + "'", where);
            }
        }
        if (!have_dim) {
            t.dim = v.size();
            have_dim = true;
        } else if (v.size() != t.dim) {
            throw DimensionMismatch(where + ": expected " + std::to_string(t.dim) + " values, got " +
                                    std::to_string(v.size()));
        }
        NodeId id{*layer, f[1]};
        if (graph && !graph->contains(id)) t.warnings.push_back("unknown node " + to_string(id));
        t.vectors[std::move(id)] = std::move(v);
    }
    return t;
}

/// Concatenation of one dim-length block per selected component, in the
/// same order as feature_text. Set-valued components contribute the mean
/// of their members' vectors; members without a vector count as zeros.
inline std::vector<double> pair_embedding(const LabeledPair& pair, const FeatureSelection& sel, const ThreatGraph& g,
                                          const EmbeddingTable& table, const FeatureTextOptions& opt = {}) {
    std::vector<double> out;
    out.reserve(sel.size() * table.dim);
    for (const auto& [component, ids] : detail::component_nodes(pair, sel, g, opt)) {
        std::vector<double> block(table.dim, 0.0);
        for (const auto& id : ids) {
            auto it = table.vectors.find(id);
            if (it == table.vectors.end()) continue;
            for (std::size_t d = 0; d < table.dim; ++d) block[d] += it->second[d];
        }
        if (!ids.empty())
            for (double& x : block) x /= static_cast<double>(ids.size());
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

/// `technique,capec,label` rows for external tooling.
inline std::string pairs_csv(const std::vector<LabeledPair>& pairs) {
    std::string out = "technique,capec,label\n";
    for (const auto& p : pairs) out += p.technique.local_id + "," + p.capec.local_id + "," + (p.linked ? "1" : "0") + "\n";
    return out;
}

}  // namespace bron
