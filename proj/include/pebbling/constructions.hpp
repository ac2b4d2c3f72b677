#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pebbling/graph.hpp"

namespace pebbling::construct {

using graph::Dag;
using graph::Edge;
using graph::NodeIndex;

namespace detail {

// Emits nodes in creation order (which is a topological order) and replaces
// any node with in-degree d >= 3 by a height-d pyramid whose level-1 nodes
// take one incoming edge each, in ascending predecessor order. The returned
// id is the representative (the apex for replaced nodes); outgoing edges of
// the logical node must be attached to it.
class GadgetBuilder {
public:
    NodeIndex add_node(std::vector<NodeIndex> preds) {
        std::sort(preds.begin(), preds.end());
        preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
        if (preds.size() <= 2) {
            NodeIndex id = next_++;
            for (auto p : preds) edges_.emplace_back(p, id);
            return id;
        }
        // pyramid gadget of height d
        std::vector<NodeIndex> level;
        for (auto p : preds) {
            NodeIndex id = next_++;
            edges_.emplace_back(p, id);
            level.push_back(id);
        }
        while (level.size() > 1) {
            std::vector<NodeIndex> up;
            for (std::size_t j = 0; j + 1 < level.size(); ++j) {
                NodeIndex id = next_++;
                edges_.emplace_back(level[j], id);
                edges_.emplace_back(level[j + 1], id);
                up.push_back(id);
            }
            level.swap(up);
        }
        return level[0];
    }

    NodeIndex count() const { return next_; }
    std::vector<Edge> take_edges() { return std::move(edges_); }

private:
    NodeIndex next_ = 0;
    std::vector<Edge> edges_;
};

}  // namespace detail

// Pyramid with h levels; level 1 holds the h sources, the apex is the sole
// target. Nodes are numbered level by level, left to right.
inline Dag pyramid(std::uint32_t h) {
    if (h == 0) throw std::invalid_argument("pyramid: h must be >= 1");
    std::vector<Edge> edges;
    std::vector<NodeIndex> level_base(h + 1, 0);
    NodeIndex next = 0;
    for (std::uint32_t k = 1; k <= h; ++k) {
        level_base[k] = next;
        next += h + 1 - k;
    }
    for (std::uint32_t k = 2; k <= h; ++k)
        for (std::uint32_t j = 0; j <= h - k; ++j) {
            NodeIndex id = level_base[k] + j;
            edges.emplace_back(level_base[k - 1] + j, id);
            edges.emplace_back(level_base[k - 1] + j + 1, id);
        }
    return Dag(next, std::move(edges), {static_cast<NodeIndex>(next - 1)});
}

// Cylinder: 2h levels of h nodes, wraparound diagonal edges
// (v_i^j -> v_{i+1}^j) and (v_i^j -> v_{i+1}^{(j+1) mod h}).
// Node (level t, position j) has index t*h + j; targets are the top level.
// h = 1 is accepted but degenerate (the two edge rules collapse).
inline Dag cylinder(std::uint32_t h) {
    if (h == 0) throw std::invalid_argument("cylinder: h must be >= 1");
    std::vector<Edge> edges;
    for (std::uint32_t t = 0; t + 1 < 2 * h; ++t)
        for (std::uint32_t j = 0; j < h; ++j) {
            edges.emplace_back(t * h + j, (t + 1) * h + j);
            edges.emplace_back(t * h + j, (t + 1) * h + (j + 1) % h);
        }
    std::vector<NodeIndex> targets;
    for (std::uint32_t j = 0; j < h; ++j) targets.push_back((2 * h - 1) * h + j);
    return Dag(2 * h * h, std::move(edges), std::move(targets));
}

inline bool cylinder_is_degenerate(std::uint32_t h) { return h == 1; }

// Wraparound grid used by the row-streaming evaluator: `rows` derivation
// levels above a source row, `width` nodes per level, in-degree `degree`.
// Node (t, j) reads (t-1, j), (t-1, j+1), ... mod width. This is the
// streaming evaluator's computation graph; note the diagonals run opposite
// to cylinder().
inline Dag wraparound(std::uint32_t width, std::uint32_t rows, std::uint32_t degree = 2) {
    if (width == 0 || rows == 0) throw std::invalid_argument("wraparound: empty shape");
    if (degree < 2 || degree > width) throw std::invalid_argument("wraparound: bad degree");
    std::vector<Edge> edges;
    for (std::uint32_t t = 1; t <= rows; ++t)
        for (std::uint32_t j = 0; j < width; ++j)
            for (std::uint32_t m = 0; m < degree; ++m)
                edges.emplace_back((t - 1) * width + (j + m) % width, t * width + j);
    std::vector<NodeIndex> targets;
    for (std::uint32_t j = 0; j < width; ++j) targets.push_back(rows * width + j);
    return Dag((rows + 1) * width, std::move(edges), std::move(targets));
}

// Composite binary tree: s+1 left-complete trees of 2^(h-1) nodes each with
// edges running child -> parent, plus s extra target nodes s_i with
// predecessors {r_i, r_{i+1}}. Within a tree, nodes are numbered so children
// precede parents; the root is the last node of its tree.
inline Dag composite_binary_tree(std::uint32_t h, std::uint32_t s) {
    if (h == 0 || s == 0) throw std::invalid_argument("composite_binary_tree: h,s >= 1");
    if (h > 24) throw std::invalid_argument("composite_binary_tree: h too large");
    const std::uint32_t m = 1u << (h - 1);  // nodes per tree
    std::vector<Edge> edges;
    auto id_of = [m](std::uint32_t tree, std::uint32_t heap_pos) {
        return tree * m + (m - heap_pos);  // heap_pos is 1-based; root last
    };
    for (std::uint32_t t = 0; t < s + 1; ++t)
        for (std::uint32_t p = 2; p <= m; ++p) edges.emplace_back(id_of(t, p), id_of(t, p / 2));
    std::vector<NodeIndex> targets;
    const NodeIndex extra_base = (s + 1) * m;
    for (std::uint32_t i = 1; i <= s; ++i) {
        NodeIndex sv = extra_base + (i - 1);
        edges.emplace_back(id_of(i - 1, 1), sv);
        edges.emplace_back(id_of(i, 1), sv);
        targets.push_back(sv);
    }
    return Dag(extra_base + s, std::move(edges), std::move(targets));
}

struct TimeOptimal {
    Dag dag;
    // the critical cut {r_2..r_s, v_{c1*s}} used by layer_transform
    std::vector<NodeIndex> x_set;
};

// Time-optimal hard graph: a height-s pyramid with a path threaded through
// every level, subpyramid roots r_i (left-aligned apexes), a path
// v_1..v_{c1*s} hanging off the roots, and a tail w_1..w_{s-1} ending in the
// single target. In-degree-3 nodes created by the level paths are replaced
// with pyramid gadgets; the cross edges (r_i, v_{k(i-1)}) are connected for
// indices within [1, c1*s] only.
inline TimeOptimal time_optimal(std::uint32_t s, std::uint32_t c1 = 2) {
    if (s < 2) throw std::invalid_argument("time_optimal: s must be >= 2");
    if (c1 < 2) throw std::invalid_argument("time_optimal: c1 must be >= 2");
    detail::GadgetBuilder gb;
    // pyramid levels with per-level paths
    std::vector<NodeIndex> below;  // representatives of the previous level
    std::vector<NodeIndex> r(s + 1, 0);
    for (std::uint32_t k = 1; k <= s; ++k) {
        std::vector<NodeIndex> cur;
        for (std::uint32_t j = 0; j <= s - k; ++j) {
            std::vector<NodeIndex> preds;
            if (k > 1) {
                preds.push_back(below[j]);
                preds.push_back(below[j + 1]);
            }
            if (j > 0) preds.push_back(cur[j - 1]);  // level path
            cur.push_back(gb.add_node(preds));
        }
        if (k >= 2) r[k] = cur[0];
        below.swap(cur);
    }
    // path v_1..v_{c1*s} with root edges
    const std::uint32_t nv = c1 * s;
    std::vector<NodeIndex> v(nv + 1, 0);
    for (std::uint32_t j = 1; j <= nv; ++j) {
        std::vector<NodeIndex> preds;
        if (j > 1) preds.push_back(v[j - 1]);
        if (j == 1) preds.push_back(r[s]);
        for (std::uint32_t i = 2; i <= s; ++i)
            if (j % (i - 1) == 0 && j / (i - 1) >= 1 && j / (i - 1) <= s) preds.push_back(r[i]);
        v[j] = gb.add_node(preds);
    }
    // tail w_1..w_{s-1}; target is w_{s-1}
    NodeIndex w = gb.add_node({v[nv], r[2]});
    for (std::uint32_t l = 2; l <= s - 1; ++l) w = gb.add_node({w, r[l + 1]});
    std::vector<NodeIndex> x_set(r.begin() + 2, r.end());
    x_set.push_back(v[nv]);
    NodeIndex n = gb.count();
    return TimeOptimal{Dag(n, gb.take_edges(), {w}), std::move(x_set)};
}

// Layering transform: appends s-1 copies of X and its descendant closure D,
// duplicating the induced edges and re-attaching edges from the rest of the
// graph to every copy. The input must have a single target, which becomes
// one target per copy.
inline Dag layer_transform(const Dag& g, std::uint32_t s, const std::vector<NodeIndex>& x_set) {
    if (g.targets().size() != 1)
        throw std::invalid_argument("layer_transform: input must have a single target");
    if (s == 0) throw std::invalid_argument("layer_transform: s must be >= 1");
    for (auto x : x_set)
        if (x >= g.node_count()) throw std::invalid_argument("layer_transform: x_set out of range");
    if (s == 1) return g;
    if (x_set.empty()) throw std::invalid_argument("layer_transform: empty x_set");

    // descendant closure
    std::vector<char> in_xd(g.node_count(), 0);
    for (auto x : x_set) in_xd[x] = 1;
    for (NodeIndex v = 0; v < g.node_count(); ++v)
        if (!in_xd[v])
            for (auto u : g.predecessors(v))
                if (in_xd[u]) {
                    in_xd[v] = 1;
                    break;
                }
    NodeIndex t0 = g.targets()[0];
    if (!in_xd[t0])
        throw std::invalid_argument("layer_transform: target not reachable from x_set");

    std::vector<NodeIndex> rank(g.node_count(), 0);
    std::vector<NodeIndex> members;
    for (NodeIndex v = 0; v < g.node_count(); ++v)
        if (in_xd[v]) {
            rank[v] = static_cast<NodeIndex>(members.size());
            members.push_back(v);
        }
    const NodeIndex base = g.node_count();
    const NodeIndex block = static_cast<NodeIndex>(members.size());

    std::vector<Edge> edges = g.edges();
    for (std::uint32_t copy = 1; copy < s; ++copy) {
        NodeIndex off = base + (copy - 1) * block;
        for (const auto& [u, vv] : g.edges()) {
            if (!in_xd[vv]) continue;
            NodeIndex nv = off + rank[vv];
            edges.emplace_back(in_xd[u] ? off + rank[u] : u, nv);
        }
    }
    std::vector<NodeIndex> targets{t0};
    for (std::uint32_t copy = 1; copy < s; ++copy)
        targets.push_back(base + (copy - 1) * block + rank[t0]);
    return Dag(base + (s - 1) * block, std::move(edges), std::move(targets));
}

struct CrossoverShape {
    std::uint32_t n_a, n_b, n_ab, c_size;
    std::vector<NodeIndex> junctions;  // 0-based ids of the A-path junction nodes
};

inline CrossoverShape crossover_shape(std::uint32_t n, double a, double b, double c) {
    if (!(a >= 0 && a < 1 && b >= 0 && b < 1 && c >= 0 && c < 1))
        throw std::invalid_argument("crossover: exponents must lie in [0,1)");
    if (!(b + c > a + 1) || !(a < b) || !(a < c))
        throw std::invalid_argument("crossover: requires b+c > a+1 and a < b, a < c");
    CrossoverShape sh;
    sh.n_a = static_cast<std::uint32_t>(std::floor(std::pow(double(n), a)));
    sh.n_b = static_cast<std::uint32_t>(std::floor(std::pow(double(n), b)));
    sh.n_ab = static_cast<std::uint32_t>(std::floor(std::pow(double(n), a + b)));
    if (sh.n_a < 1 || sh.n_b < 2 || sh.n_ab < sh.n_b || sh.n_ab >= n)
        throw std::invalid_argument("crossover: n too small for these exponents");
    sh.c_size = n - sh.n_ab;
    for (std::uint32_t m = 1; m <= sh.n_a; ++m) {
        std::uint32_t k = m * sh.n_b;  // 1-based position in A
        if (k > sh.n_ab) break;
        sh.junctions.push_back(k - 1);
    }
    if (sh.junctions.empty()) throw std::invalid_argument("crossover: no junction nodes");
    return sh;
}

// CC^alpha crossover family: a path through A (n^{a+b} nodes) and a path
// through C (the remaining nodes), with each C node fed by one junction node
// of A (positions k = m*n^b). Cross-edge indices outside [1, n] are dropped.
// Single target: the end of the C path.
inline Dag cc_alpha_crossover(std::uint32_t n, double a, double b, double c) {
    CrossoverShape sh = crossover_shape(n, a, b, c);
    std::vector<Edge> edges;
    for (std::uint32_t j = 0; j + 1 < n; ++j) edges.emplace_back(j, j + 1);  // A path, bridge, C path
    for (std::uint32_t m = 1; m <= sh.junctions.size(); ++m) {
        NodeIndex k = sh.junctions[m - 1];
        for (std::uint32_t q = 1;; ++q) {
            std::uint64_t l = std::uint64_t(sh.n_ab) + m + std::uint64_t(q - 1) * sh.n_a;  // 1-based
            if (l > n) break;
            if (l - 1 != k) edges.emplace_back(k, static_cast<NodeIndex>(l - 1));
        }
    }
    return Dag(n, std::move(edges), {static_cast<NodeIndex>(n - 1)});
}

// --- parameter record for the CLI -------------------------------------------

enum class Family {
    Pyramid,
    Cylinder,
    CompositeBinaryTree,
    TimeOptimal,
    LayeredTransform,
    CcAlphaCrossover,
    Wraparound,
};

struct ConstructionParams {
    Family family = Family::Pyramid;
    std::uint32_t h_or_s = 2;     // height h, parameter s, or node count n
    std::uint32_t s_extra = 1;    // composite-binary-tree target count
    std::uint32_t c1 = 2;         // time-optimal path factor
    std::uint32_t rows = 0;       // wraparound rows (0 = square)
    double a = 0.25, b = 2.0 / 3.0, c = 2.0 / 3.0;
};

inline Family family_from_string(const std::string& s) {
    if (s == "pyramid") return Family::Pyramid;
    if (s == "cylinder") return Family::Cylinder;
    if (s == "composite-binary-tree") return Family::CompositeBinaryTree;
    if (s == "time-optimal") return Family::TimeOptimal;
    if (s == "layered-transform") return Family::LayeredTransform;
    if (s == "cc-alpha-crossover") return Family::CcAlphaCrossover;
    if (s == "wraparound") return Family::Wraparound;
    throw std::invalid_argument("unknown family: " + s);
}

inline Dag make(const ConstructionParams& p) {
    switch (p.family) {
        case Family::Pyramid: return pyramid(p.h_or_s);
        case Family::Cylinder: return cylinder(p.h_or_s);
        case Family::CompositeBinaryTree: return composite_binary_tree(p.h_or_s, p.s_extra);
        case Family::TimeOptimal: return time_optimal(p.h_or_s, p.c1).dag;
        case Family::LayeredTransform: {
            auto to = time_optimal(p.h_or_s, p.c1);
            return layer_transform(to.dag, p.h_or_s, to.x_set);
        }
        case Family::CcAlphaCrossover: return cc_alpha_crossover(p.h_or_s, p.a, p.b, p.c);
        case Family::Wraparound:
            return wraparound(p.h_or_s, p.rows ? p.rows : p.h_or_s);
    }
    throw std::invalid_argument("unknown family");
}

}  // namespace pebbling::construct
