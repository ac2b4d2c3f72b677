#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pebbling/util.hpp"

namespace pebbling::graph {

using NodeIndex = std::uint32_t;
using Edge = std::pair<NodeIndex, NodeIndex>;

// Immutable bounded-in-degree DAG. Node indices are a fixed topological
// order: every edge goes from a lower to a higher index. Sources are exactly
// the in-degree-0 nodes; targets are supplied by the construction.
class Dag {
public:
    Dag() = default;

    Dag(NodeIndex node_count, std::vector<Edge> edges, std::vector<NodeIndex> targets)
        : node_count_(node_count), edges_(std::move(edges)), targets_(std::move(targets)) {
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        build_index();
    }

    NodeIndex node_count() const { return node_count_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<NodeIndex>& sources() const { return sources_; }
    const std::vector<NodeIndex>& targets() const { return targets_; }
    std::uint32_t max_in_degree() const { return max_in_degree_; }

    // Predecessors in ascending node-index order; this is the canonical order
    // used by labeling.
    std::vector<NodeIndex> predecessors(NodeIndex v) const {
        if (v >= node_count_) throw std::out_of_range("node index out of range");
        return {preds_.begin() + pred_off_[v], preds_.begin() + pred_off_[v + 1]};
    }

    std::uint32_t in_degree(NodeIndex v) const {
        if (v >= node_count_) throw std::out_of_range("node index out of range");
        return pred_off_[v + 1] - pred_off_[v];
    }

    std::vector<NodeIndex> successors(NodeIndex v) const {
        if (v >= node_count_) throw std::out_of_range("node index out of range");
        return {succs_.begin() + succ_off_[v], succs_.begin() + succ_off_[v + 1]};
    }

    std::uint32_t out_degree(NodeIndex v) const {
        if (v >= node_count_) throw std::out_of_range("node index out of range");
        return succ_off_[v + 1] - succ_off_[v];
    }

    bool is_source(NodeIndex v) const { return in_degree(v) == 0; }
    bool is_target(NodeIndex v) const {
        return std::find(targets_.begin(), targets_.end(), v) != targets_.end();
    }

    // Number of edges on the longest directed path.
    std::uint32_t depth() const {
        std::uint32_t best = 0;
        std::vector<std::uint32_t> d(node_count_, 0);
        for (NodeIndex v = 0; v < node_count_; ++v) {
            for (auto u : predecessors(v)) d[v] = std::max(d[v], d[u] + 1);
            best = std::max(best, d[v]);
        }
        return best;
    }

    bool operator==(const Dag& o) const {
        return node_count_ == o.node_count_ && edges_ == o.edges_ && targets_ == o.targets_;
    }
    bool operator!=(const Dag& o) const { return !(*this == o); }

private:
    void build_index() {
        pred_off_.assign(node_count_ + 1, 0);
        succ_off_.assign(node_count_ + 1, 0);
        for (const auto& [u, v] : edges_) {
            if (u >= node_count_ || v >= node_count_) continue;  // caught by validate()
            pred_off_[v + 1]++;
            succ_off_[u + 1]++;
        }
        for (NodeIndex i = 0; i < node_count_; ++i) {
            pred_off_[i + 1] += pred_off_[i];
            succ_off_[i + 1] += succ_off_[i];
        }
        preds_.resize(edges_.size());
        succs_.resize(edges_.size());
        std::vector<std::uint32_t> pfill(pred_off_.begin(), pred_off_.end() - 1);
        std::vector<std::uint32_t> sfill(succ_off_.begin(), succ_off_.end() - 1);
        // edges_ is sorted by (u, v), so preds_ slices come out ascending.
        for (const auto& [u, v] : edges_) {
            if (u >= node_count_ || v >= node_count_) continue;
            preds_[pfill[v]++] = u;
            succs_[sfill[u]++] = v;
        }
        max_in_degree_ = 0;
        sources_.clear();
        for (NodeIndex v = 0; v < node_count_; ++v) {
            max_in_degree_ = std::max(max_in_degree_, pred_off_[v + 1] - pred_off_[v]);
            if (pred_off_[v + 1] == pred_off_[v]) sources_.push_back(v);
        }
    }

    NodeIndex node_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<NodeIndex> sources_;
    std::vector<NodeIndex> targets_;
    std::uint32_t max_in_degree_ = 0;
    std::vector<std::uint32_t> pred_off_, succ_off_;
    std::vector<NodeIndex> preds_, succs_;
};

// Returns std::nullopt on success, otherwise a description of the first
// violation found.
inline std::optional<std::string> validate(const Dag& d) {
    for (const auto& [u, v] : d.edges()) {
        if (u >= d.node_count() || v >= d.node_count())
            return "dangling edge index (" + std::to_string(u) + "," + std::to_string(v) + ")";
        if (u >= v)
            return "cycle: edge (" + std::to_string(u) + "," + std::to_string(v) +
                   ") does not respect topological numbering";
    }
    if (d.targets().empty()) return std::string("empty target set");
    for (auto t : d.targets())
        if (t >= d.node_count()) return "target index out of range";
    return std::nullopt;
}

// --- PGRAPH1 text format ----------------------------------------------------
//
// line 1: PGRAPH1 <node_count> <edge_count> <max_in_degree>
// line 2: S <source indices>
// line 3: T <target indices>
// then one "<u> <v>" edge per line with u < v. LF line endings.

inline std::string serialize(const Dag& d) {
    std::ostringstream os;
    os << "PGRAPH1 " << d.node_count() << ' ' << d.edges().size() << ' ' << d.max_in_degree()
       << '\n';
    os << 'S';
    for (auto s : d.sources()) os << ' ' << s;
    os << '\n';
    os << 'T';
    for (auto t : d.targets()) os << ' ' << t;
    os << '\n';
    for (const auto& [u, v] : d.edges()) os << u << ' ' << v << '\n';
    return os.str();
}

inline Dag deserialize(const std::string& text) {
    std::istringstream is(text);
    std::string magic;
    std::uint64_t n = 0, m = 0, deg = 0;
    if (!(is >> magic >> n >> m >> deg) || magic != "PGRAPH1")
        throw std::runtime_error("PGRAPH1: malformed header");
    std::string tag;
    if (!(is >> tag) || tag != "S") throw std::runtime_error("PGRAPH1: missing source line");
    std::vector<NodeIndex> sources;
    std::string rest;
    std::getline(is, rest);
    {
        std::istringstream ls(rest);
        NodeIndex v;
        while (ls >> v) sources.push_back(v);
    }
    if (!(is >> tag) || tag != "T") throw std::runtime_error("PGRAPH1: missing target line");
    std::getline(is, rest);
    std::vector<NodeIndex> targets;
    {
        std::istringstream ls(rest);
        NodeIndex v;
        while (ls >> v) targets.push_back(v);
    }
    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        NodeIndex u, v;
        if (!(is >> u >> v)) throw std::runtime_error("PGRAPH1: truncated body");
        edges.emplace_back(u, v);
    }
    Dag d(static_cast<NodeIndex>(n), std::move(edges), std::move(targets));
    if (d.edges().size() != m) throw std::runtime_error("PGRAPH1: duplicate edges in body");
    if (d.sources() != sources)
        throw std::runtime_error("PGRAPH1: source line disagrees with in-degrees");
    if (d.max_in_degree() != deg)
        throw std::runtime_error("PGRAPH1: header in-degree disagrees with body");
    return d;
}

}  // namespace pebbling::graph
