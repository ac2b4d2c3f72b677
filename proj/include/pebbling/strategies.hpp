#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pebbling/constructions.hpp"
#include "pebbling/engine.hpp"

namespace pebbling::solver {

using construct::CrossoverShape;
using engine::Config;
using engine::Strategy;
using graph::Dag;
using graph::NodeIndex;

// Parallel wavefront for the cylinder: one full level of h pebbles swept up
// the 2h levels, each move placing a level and dropping the one below it.
// Space h, time 2h, h pebbles held for all 2h steps.
inline Strategy wavefront_cylinder(std::uint32_t h) {
    if (h < 2) throw std::invalid_argument("wavefront_cylinder: h must be >= 2");
    const std::size_t n = 2 * std::size_t(h) * h;
    Strategy s = engine::standard_strategy(n);
    for (std::uint32_t t = 0; t < 2 * h; ++t) {
        Config c(n);
        for (std::uint32_t j = 0; j < h; ++j) c.black.set(std::size_t(t) * h + j);
        s.configs.push_back(std::move(c));
    }
    return s;
}

// Keep-everything parallel sweep: pebble each depth level in turn, never
// removing anything. The baseline for cumulative-cost comparisons.
inline Strategy trivial_sweep(const Dag& d) {
    const std::size_t n = d.node_count();
    std::vector<std::uint32_t> level(n, 0);
    std::uint32_t depth = 0;
    for (NodeIndex v = 0; v < n; ++v) {
        for (auto u : d.predecessors(v)) level[v] = std::max(level[v], level[u] + 1);
        depth = std::max(depth, level[v]);
    }
    Strategy s = engine::standard_strategy(n);
    Config cur(n);
    for (std::uint32_t t = 0; t <= depth; ++t) {
        for (NodeIndex v = 0; v < n; ++v)
            if (level[v] == t) cur.black.set(v);
        s.configs.push_back(cur);
    }
    return s;
}

namespace detail {

// Sequential walk helper: place a pebble on `from` (must be a source or have
// its predecessors pebbled) and slide it along a path to `to`, emitting one
// configuration per move.
inline NodeIndex walk_path(Strategy& s, Config& cur, NodeIndex from, NodeIndex to) {
    cur.black.set(from);
    s.configs.push_back(cur);
    for (NodeIndex v = from + 1; v <= to; ++v) {
        cur.black.reset(v - 1);
        cur.black.set(v);
        s.configs.push_back(cur);
    }
    return to;
}

}  // namespace detail

// P2: one topological sweep of the crossover graph, parking a pebble on each
// junction node of A. Space n^a + 1, time exactly n moves.
inline Strategy p2_linear_time(const Dag& d, const CrossoverShape& sh) {
    const std::size_t n = d.node_count();
    Strategy s = engine::standard_strategy(n);
    Config cur(n);
    std::vector<char> parked(n, 0);
    for (auto j : sh.junctions) parked[j] = 1;
    cur.black.set(0);
    s.configs.push_back(cur);
    for (NodeIndex v = 1; v < n; ++v) {
        if (!parked[v - 1]) cur.black.reset(v - 1);
        cur.black.set(v);
        s.configs.push_back(cur);
    }
    return s;
}

// P1: constant-space strategy. Parks s1-1 pebbles on the first junctions,
// then walks the C path, re-deriving every unparked junction on demand by
// walking a throwaway pebble up the A path from the nearest parked junction
// (or from the A source).
inline Strategy p1_constant_space(const Dag& d, const CrossoverShape& sh, std::uint32_t s1) {
    if (s1 < 1) throw std::invalid_argument("p1: s1 must be >= 1");
    const std::size_t n = d.node_count();
    const std::uint32_t n_parked = std::min<std::uint32_t>(s1 - 1, sh.junctions.size());
    Strategy s = engine::standard_strategy(n);
    Config cur(n);

    // initial A sweep up to the bridge node, parking the first n_parked junctions
    std::vector<char> parked(n, 0);
    for (std::uint32_t i = 0; i < n_parked; ++i) parked[sh.junctions[i]] = 1;
    cur.black.set(0);
    s.configs.push_back(cur);
    const NodeIndex bridge = sh.n_ab - 1;  // last A node, 0-based
    for (NodeIndex v = 1; v <= bridge; ++v) {
        if (!parked[v - 1]) cur.black.reset(v - 1);
        cur.black.set(v);
        s.configs.push_back(cur);
    }

    // junction feeding each C node: l = n_ab + m + (q-1)*n_a, 1-based
    auto junction_of = [&](NodeIndex c_node_0b) -> NodeIndex {
        std::uint64_t off = c_node_0b + 1 - sh.n_ab;  // m + (q-1)*n_a
        std::uint32_t m = static_cast<std::uint32_t>((off - 1) % sh.n_a) + 1;
        return sh.junctions[m - 1];
    };

    // re-derive one junction with a single walking pebble, then return it
    auto rederive = [&](NodeIndex target_junction) {
        NodeIndex start = 0;
        bool from_source = true;
        for (std::uint32_t i = 0; i < n_parked; ++i)
            if (sh.junctions[i] < target_junction) {
                start = sh.junctions[i] + 1;
                from_source = false;
            }
        if (from_source)
            detail::walk_path(s, cur, 0, target_junction);
        else
            detail::walk_path(s, cur, start, target_junction);
    };

    // walk C; the walker currently sits on the bridge node
    NodeIndex walker = bridge;
    for (NodeIndex c = sh.n_ab; c < n; ++c) {
        NodeIndex j = junction_of(c);
        bool have_j = cur.black.test(j);
        if (!have_j) rederive(j);
        cur.black.reset(walker);
        cur.black.set(c);
        if (!have_j && !parked[j]) cur.black.reset(j);  // drop the throwaway pebble
        s.configs.push_back(cur);
        walker = c;
    }
    return s;
}

// ---------------------------------------------------------------------------
// GenPeb: depth-reducing set S chosen greedily, then a parallel sweep that
// alternates balloon phases (pebble every level up to the next depth
// horizon, keeping everything) and light phases (drop every pebble that is
// not in S and no longer feeds an unpebbled node).

struct GenPebResult {
    Strategy strategy;
    std::vector<NodeIndex> s_set;
    std::uint32_t depth_target = 0;
    std::uint32_t residual_depth = 0;  // depth of G - S actually achieved
    std::uint64_t size_target = 0;     // 2*alpha*n*loglog(n)/log(n)
    bool size_target_met = true;
};

namespace detail {

inline std::uint32_t residual_depth(const Dag& d, const std::vector<char>& in_s) {
    std::vector<std::uint32_t> len(d.node_count(), 0);
    std::uint32_t best = 0;
    for (NodeIndex v = 0; v < d.node_count(); ++v) {
        if (in_s[v]) continue;
        for (auto u : d.predecessors(v))
            if (!in_s[u]) len[v] = std::max(len[v], len[u] + 1);
        best = std::max(best, len[v]);
    }
    return best;
}

}  // namespace detail

inline GenPebResult genpeb(const Dag& d, double alpha) {
    if (alpha < 1.0) throw std::invalid_argument("genpeb: alpha must be >= 1");
    const std::uint32_t n = d.node_count();
    GenPebResult out;

    double logn = std::log2(std::max<double>(n, 2.0));
    out.depth_target = std::max<std::uint32_t>(
        1, static_cast<std::uint32_t>(std::floor(n / std::pow(logn, alpha))));
    double loglogn = std::log2(std::max(logn, 2.0));
    out.size_target = static_cast<std::uint64_t>(std::ceil(2.0 * alpha * n * loglogn / logn));

    // Greedy depth reduction: repeatedly remove the node lying on the most
    // longest paths of the residual graph.
    std::vector<char> in_s(n, 0);
    while (detail::residual_depth(d, in_s) > out.depth_target) {
        std::vector<std::uint32_t> in_len(n, 0), out_len(n, 0);
        std::vector<double> cnt_in(n, 0.0), cnt_out(n, 0.0);
        std::uint32_t depth = 0;
        for (NodeIndex v = 0; v < n; ++v) {
            if (in_s[v]) continue;
            cnt_in[v] = 1.0;
            for (auto u : d.predecessors(v)) {
                if (in_s[u]) continue;
                if (in_len[u] + 1 > in_len[v]) {
                    in_len[v] = in_len[u] + 1;
                    cnt_in[v] = cnt_in[u];
                } else if (in_len[u] + 1 == in_len[v] && in_len[v] > 0) {
                    cnt_in[v] += cnt_in[u];
                }
            }
            depth = std::max(depth, in_len[v]);
        }
        for (NodeIndex vi = n; vi-- > 0;) {
            if (in_s[vi]) continue;
            cnt_out[vi] = 1.0;
            std::uint32_t best = 0;
            double cnt = 1.0;
            for (auto w : d.successors(vi)) {
                if (in_s[w]) continue;
                if (out_len[w] + 1 > best) {
                    best = out_len[w] + 1;
                    cnt = cnt_out[w];
                } else if (out_len[w] + 1 == best && best > 0) {
                    cnt += cnt_out[w];
                }
            }
            out_len[vi] = best;
            cnt_out[vi] = cnt;
        }
        NodeIndex pick = n;
        double best_score = -1.0;
        for (NodeIndex v = 0; v < n; ++v) {
            if (in_s[v] || in_len[v] + out_len[v] != depth) continue;
            double score = cnt_in[v] * cnt_out[v];
            if (score > best_score) {
                best_score = score;
                pick = v;
            }
        }
        if (pick == n) break;  // no critical node found; cannot happen while depth > target
        in_s[pick] = 1;
    }
    for (NodeIndex v = 0; v < n; ++v)
        if (in_s[v]) out.s_set.push_back(v);
    out.residual_depth = detail::residual_depth(d, in_s);
    out.size_target_met = out.s_set.size() <= out.size_target;

    // Parallel strategy: place level by level; prune dead non-S pebbles at
    // every depth-horizon boundary.
    std::vector<std::uint32_t> level(n, 0);
    std::uint32_t depth = 0;
    for (NodeIndex v = 0; v < n; ++v) {
        for (auto u : d.predecessors(v)) level[v] = std::max(level[v], level[u] + 1);
        depth = std::max(depth, level[v]);
    }
    std::vector<std::uint32_t> remaining_succs(n, 0);
    for (NodeIndex v = 0; v < n; ++v) remaining_succs[v] = d.out_degree(v);

    Strategy s = engine::standard_strategy(n);
    Config cur(n);
    for (std::uint32_t t = 0; t <= depth; ++t) {
        for (NodeIndex v = 0; v < n; ++v)
            if (level[v] == t) {
                cur.black.set(v);
                for (auto u : d.predecessors(v)) --remaining_succs[u];
            }
        bool horizon = ((t + 1) % out.depth_target == 0) || t == depth;
        if (horizon) {
            // drop dead non-S pebbles, but never one placed this very move:
            // it has to appear in a configuration for the visit to count
            for (NodeIndex v = 0; v < n; ++v)
                if (cur.black.test(v) && !in_s[v] && remaining_succs[v] == 0 && level[v] < t)
                    cur.black.reset(v);
        }
        s.configs.push_back(cur);
    }
    out.strategy = std::move(s);
    return out;
}

}  // namespace pebbling::solver
