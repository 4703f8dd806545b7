#pragma once
// Layered threat/vulnerability graph.
//
// Six layers form a chain, top to bottom:
//   Tactic - Technique - AttackPattern - Weakness - Vulnerability - ProductConfig
// Edges only join consecutive layers, plus Technique-Technique edges that
// record sub-technique parenthood. Every edge is stored in both a downward
// and an upward adjacency index so traversal is cheap in either direction.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bron/error.hpp"

namespace bron {

enum class Layer : std::uint8_t {
    Tactic = 0,
    Technique,
    AttackPattern,
    Weakness,
    Vulnerability,
    ProductConfig,
};

inline constexpr std::array<Layer, 6> kAllLayers = {
    Layer::Tactic,   Layer::Technique,     Layer::AttackPattern,
    Layer::Weakness, Layer::Vulnerability, Layer::ProductConfig,
};

inline constexpr int layer_rank(Layer l) noexcept { return static_cast<int>(l); }

/// Lowercase snake_case name used in the canonical interchange format.
inline constexpr std::string_view layer_name(Layer l) noexcept {
    switch (l) {
        case Layer::Tactic: return "tactic";
        case Layer::Technique: return "technique";
        case Layer::AttackPattern: return "attack_pattern";
        case Layer::Weakness: return "weakness";
        case Layer::Vulnerability: return "vulnerability";
        case Layer::ProductConfig: return "product_config";
    }
    return "?";
}

inline std::optional<Layer> parse_layer(std::string_view s) noexcept {
    for (Layer l : kAllLayers)
        if (layer_name(l) == s) return l;
    return std::nullopt;
}

/// True when an edge between the two layers is permitted (either order).
inline constexpr bool layers_adjacent(Layer a, Layer b) noexcept {
    const int d = layer_rank(a) - layer_rank(b);
    if (d == 1 || d == -1) return true;
    return a == Layer::Technique && b == Layer::Technique;
}

struct NodeId {
    Layer layer = Layer::Tactic;
    std::string local_id;

    NodeId() = default;
    NodeId(Layer l, std::string id) : layer(l), local_id(std::move(id)) {}

    friend bool operator==(const NodeId&, const NodeId&) = default;
    friend std::strong_ordering operator<=>(const NodeId& a, const NodeId& b) {
        if (auto c = layer_rank(a.layer) <=> layer_rank(b.layer); c != 0) return c;
        const int r = a.local_id.compare(b.local_id);
        return r < 0 ? std::strong_ordering::less
                     : (r > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
};

inline std::string to_string(const NodeId& id) {
    return std::string(layer_name(id.layer)) + ":" + id.local_id;
}

struct NodeIdHash {
    std::size_t operator()(const NodeId& id) const noexcept {
        return std::hash<std::string>{}(id.local_id) * 31u + static_cast<std::size_t>(id.layer);
    }
};

struct ThreatNode {
    NodeId id;
    std::string name;
    std::string description;
    std::optional<double> cvss;

    friend bool operator==(const ThreatNode&, const ThreatNode&) = default;
};

/// Returns an empty string when the node satisfies its invariants,
/// otherwise a description of the first violation.
inline std::string validate_node(const ThreatNode& n) {
    if (n.id.local_id.empty()) return "empty local id";
    if (n.cvss) {
        if (n.id.layer != Layer::Vulnerability) return "cvss on non-vulnerability node " + n.id.local_id;
        if (!std::isfinite(*n.cvss) || *n.cvss < 0.0 || *n.cvss > 10.0)
            return "cvss out of [0,10] on " + n.id.local_id;
    }
    if (layer_rank(n.id.layer) <= layer_rank(Layer::Weakness) && n.name.empty())
        return "empty name on " + to_string(n.id);
    return {};
}

enum class Direction { Up, Down };

class ThreatGraph {
public:
    using Index = std::uint32_t;

    void add_node(ThreatNode node) {
        ensure_mutable();
        if (auto why = validate_node(node); !why.empty()) throw InvalidNode(why);
        if (index_.contains(node.id)) throw DuplicateNode("duplicate node " + to_string(node.id));
        const auto idx = static_cast<Index>(nodes_.size());
        index_.emplace(node.id, idx);
        nodes_.push_back(std::move(node));
        down_.emplace_back();
        up_.emplace_back();
    }

    /// Adds the undirected link a-b. For cross-layer edges the upper node
    /// becomes the Down source regardless of argument order; for
    /// Technique-Technique edges `a` is the parent. Returns false when the
    /// edge was already present.
    bool add_edge(const NodeId& a, const NodeId& b) {
        ensure_mutable();
        Index ia = require(a);
        Index ib = require(b);
        if (!layers_adjacent(a.layer, b.layer) || ia == ib)
            throw LayerViolation("edge " + to_string(a) + " -> " + to_string(b) +
                                 " does not join adjacent layers");
        if (layer_rank(a.layer) > layer_rank(b.layer)) std::swap(ia, ib);
        if (!insert_sorted(down_[ia], ib)) return false;
        insert_sorted(up_[ib], ia);
        ++edge_count_;
        return true;
    }

    void freeze() noexcept { frozen_ = true; }
    bool frozen() const noexcept { return frozen_; }

    bool contains(const NodeId& id) const { return index_.contains(id); }

    std::optional<Index> index_of(const NodeId& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const ThreatNode& node(const NodeId& id) const { return nodes_[require(id)]; }
    const ThreatNode* find(const NodeId& id) const {
        auto it = index_.find(id);
        return it == index_.end() ? nullptr : &nodes_[it->second];
    }
    const ThreatNode& at(Index i) const { return nodes_[i]; }

    std::size_t node_count() const noexcept { return nodes_.size(); }
    /// Number of undirected edges; each is held once in each index.
    std::size_t edge_count() const noexcept { return edge_count_; }
    std::size_t index_entry_count() const noexcept {
        std::size_t n = 0;
        for (const auto& v : down_) n += v.size();
        for (const auto& v : up_) n += v.size();
        return n;
    }

    std::span<const Index> adjacent(Index i, Direction d) const {
        return d == Direction::Down ? std::span<const Index>(down_[i]) : std::span<const Index>(up_[i]);
    }

    /// Adjacent nodes sorted by (layer, local_id).
    std::vector<NodeId> neighbors(const NodeId& id, Direction d) const {
        std::vector<NodeId> out;
        for (Index j : adjacent(require(id), d)) out.push_back(nodes_[j].id);
        return out;
    }

    /// Nodes of `target` reachable from `id` by a walk that only moves in
    /// one direction along the layer chain. Sorted, duplicate-free.
    std::vector<NodeId> reachable(const NodeId& id, Layer target) const {
        std::vector<NodeId> out;
        for (Index j : reachable_indices(require(id), target)) out.push_back(nodes_[j].id);
        return out;
    }

    std::vector<Index> reachable_indices(Index start, Layer target) const {
        const Layer from = nodes_[start].id.layer;
        if (from == target) return {};
        const bool down = layer_rank(target) > layer_rank(from);
        const auto& adj = down ? down_ : up_;

        std::vector<bool> seen(nodes_.size(), false);
        std::deque<Index> queue{start};
        seen[start] = true;
        std::vector<Index> hits;
        while (!queue.empty()) {
            const Index u = queue.front();
            queue.pop_front();
            for (Index v : adj[u]) {
                if (seen[v]) continue;
                const int r = layer_rank(nodes_[v].id.layer);
                if (down ? r > layer_rank(target) : r < layer_rank(target)) continue;
                seen[v] = true;
                if (nodes_[v].id.layer == target) hits.push_back(v);
                queue.push_back(v);
            }
        }
        std::sort(hits.begin(), hits.end(), [this](Index x, Index y) { return nodes_[x].id < nodes_[y].id; });
        return hits;
    }

    /// All node ids, sorted.
    std::vector<NodeId> node_ids() const {
        std::vector<NodeId> ids;
        ids.reserve(nodes_.size());
        for (const auto& n : nodes_) ids.push_back(n.id);
        std::sort(ids.begin(), ids.end());
        return ids;
    }

    std::vector<NodeId> nodes_in(Layer l) const {
        std::vector<NodeId> ids;
        for (const auto& n : nodes_)
            if (n.id.layer == l) ids.push_back(n.id);
        std::sort(ids.begin(), ids.end());
        return ids;
    }

    /// Every stored edge as (down source, down target), sorted.
    std::vector<std::pair<NodeId, NodeId>> edges() const {
        std::vector<std::pair<NodeId, NodeId>> out;
        out.reserve(edge_count_);
        for (Index i = 0; i < nodes_.size(); ++i)
            for (Index j : down_[i]) out.emplace_back(nodes_[i].id, nodes_[j].id);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    Index require(const NodeId& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) throw UnknownNode("unknown node " + to_string(id));
        return it->second;
    }

    void ensure_mutable() const {
        if (frozen_) throw FrozenGraph("graph is frozen");
    }

    bool insert_sorted(std::vector<Index>& list, Index v) {
        auto less = [this](Index x, Index y) { return nodes_[x].id < nodes_[y].id; };
        auto it = std::lower_bound(list.begin(), list.end(), v, less);
        if (it != list.end() && *it == v) return false;
        list.insert(it, v);
        return true;
    }

    std::vector<ThreatNode> nodes_;
    std::unordered_map<NodeId, Index, NodeIdHash> index_;
    std::vector<std::vector<Index>> down_;
    std::vector<std::vector<Index>> up_;
    std::size_t edge_count_ = 0;
    bool frozen_ = false;
};

}  // namespace bron
