#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pebbling/graph.hpp"
#include "pebbling/util.hpp"

namespace pebbling::engine {

using graph::Dag;
using graph::NodeIndex;

enum class Kind { Standard, Magic };
enum class Mode { Sequential, Parallel };

struct Config {
    NodeSet black;
    NodeSet magic;

    explicit Config(std::size_t n = 0) : black(n), magic(n) {}

    NodeSet pebbled() const { return black | magic; }
    std::size_t size() const { return black.count() + magic.count(); }
};

// A pebbling strategy is the sequence of configurations, starting at the
// empty configuration. Moves are the transitions between consecutive
// configurations.
struct Strategy {
    Kind kind = Kind::Standard;
    std::vector<Config> configs;
    std::optional<std::uint32_t> magic_bound;  // magic kind; nullopt = unbounded

    std::size_t moves() const { return configs.empty() ? 0 : configs.size() - 1; }
};

inline Strategy standard_strategy(std::size_t n) {
    Strategy s;
    s.kind = Kind::Standard;
    s.configs.emplace_back(n);
    return s;
}

inline Strategy magic_strategy(std::size_t n, std::optional<std::uint32_t> bound) {
    Strategy s;
    s.kind = Kind::Magic;
    s.magic_bound = bound;
    s.configs.emplace_back(n);
    return s;
}

namespace detail {

inline std::optional<std::string> check_common(const Dag& d, const Strategy& strat) {
    if (strat.configs.empty()) return std::string("strategy has no configurations");
    if (strat.configs[0].black.any() || strat.configs[0].magic.any())
        return std::string("initial configuration is not empty");
    for (std::size_t i = 0; i < strat.configs.size(); ++i) {
        const auto& c = strat.configs[i];
        if (c.black.size() != d.node_count() || c.magic.size() != d.node_count())
            return "configuration " + std::to_string(i) + " sized for a different graph";
        if (c.black.intersects(c.magic))
            return "configuration " + std::to_string(i) + " holds two pebbles on one node";
    }
    return std::nullopt;
}

inline bool placement_legal(const Dag& d, NodeIndex v, const NodeSet& prev_pebbled) {
    if (d.is_source(v)) return true;
    for (auto u : d.predecessors(v))
        if (!prev_pebbled.test(u)) return false;
    return true;
}

}  // namespace detail

// Checks a standard-game strategy move by move: every pebble added at move i
// must sit on a source or have all predecessors pebbled at i-1 (the slide
// rule's precondition is the same, so slides need no separate handling at
// configuration granularity). Sequential mode additionally limits each move
// to at most one added node. The goal is visiting pebbling: every target
// pebbled at some step.
inline std::optional<std::string> validate_standard(const Dag& d, const Strategy& strat,
                                                    const std::vector<NodeIndex>& targets,
                                                    Mode mode) {
    if (strat.kind != Kind::Standard) return std::string("strategy kind is not standard");
    if (auto err = detail::check_common(d, strat)) return err;
    for (const auto& c : strat.configs)
        if (c.magic.any()) return std::string("standard strategy contains magic pebbles");

    NodeSet visited(d.node_count());
    for (std::size_t i = 1; i < strat.configs.size(); ++i) {
        const NodeSet& prev = strat.configs[i - 1].black;
        const NodeSet& cur = strat.configs[i].black;
        std::size_t added = 0;
        std::optional<std::string> err;
        cur.for_each([&](std::size_t v) {
            if (prev.test(v)) return;
            ++added;
            if (!err && !detail::placement_legal(d, static_cast<NodeIndex>(v), prev))
                err = "illegal placement of node " + std::to_string(v) + " at move " +
                      std::to_string(i);
        });
        if (err) return err;
        if (mode == Mode::Sequential && added > 1)
            return "sequentiality breach at move " + std::to_string(i) + " (" +
                   std::to_string(added) + " pebbles added)";
        visited |= cur;
    }
    for (auto t : targets)
        if (!visited.test(t))
            return "goal not met: target " + std::to_string(t) + " never pebbled";
    return std::nullopt;
}

// Black-magic game: black moves follow the standard rules with black|magic
// counting as pebbled at i-1; magic pebbles may be placed anywhere and
// removed freely, but the set of nodes ever holding a magic pebble is capped
// by the bound and a node may not receive a second magic pebble after losing
// its first.
inline std::optional<std::string> validate_magic(const Dag& d, const Strategy& strat,
                                                 const std::vector<NodeIndex>& targets,
                                                 Mode mode) {
    if (strat.kind != Kind::Magic) return std::string("strategy kind is not magic");
    if (auto err = detail::check_common(d, strat)) return err;

    NodeSet visited(d.node_count());
    NodeSet ever_magic(d.node_count());
    for (std::size_t i = 1; i < strat.configs.size(); ++i) {
        const Config& prev = strat.configs[i - 1];
        const Config& cur = strat.configs[i];
        NodeSet prev_pebbled = prev.pebbled();
        std::optional<std::string> err;
        std::size_t added = 0;
        cur.black.for_each([&](std::size_t v) {
            if (prev.black.test(v)) return;
            ++added;
            if (!err && !detail::placement_legal(d, static_cast<NodeIndex>(v), prev_pebbled))
                err = "illegal black move: node " + std::to_string(v) + " at move " +
                      std::to_string(i);
        });
        if (err) return err;
        cur.magic.for_each([&](std::size_t v) {
            if (prev.magic.test(v)) return;
            ++added;
            if (!err && ever_magic.test(v))
                err = "magic pebble reused on node " + std::to_string(v) + " at move " +
                      std::to_string(i);
        });
        if (err) return err;
        if (mode == Mode::Sequential && added > 1)
            return "sequentiality breach at move " + std::to_string(i);
        ever_magic |= cur.magic;
        if (strat.magic_bound && ever_magic.count() > *strat.magic_bound)
            return "magic budget exceeded at move " + std::to_string(i) + " (" +
                   std::to_string(ever_magic.count()) + " > " +
                   std::to_string(*strat.magic_bound) + ")";
        visited |= cur.black;
        visited |= cur.magic;
    }
    for (auto t : targets)
        if (!visited.test(t))
            return "goal not met: target " + std::to_string(t) + " never pebbled";
    return std::nullopt;
}

inline std::optional<std::string> validate(const Dag& d, const Strategy& strat,
                                           const std::vector<NodeIndex>& targets, Mode mode) {
    return strat.kind == Kind::Standard ? validate_standard(d, strat, targets, mode)
                                        : validate_magic(d, strat, targets, mode);
}

// Sum of |P_i|^alpha over moves, exact in 128 bits while it fits.
struct PccValue {
    bool exact_valid = true;
    u128 exact = 0;
    long double approx = 0.0L;

    std::string to_string() const {
        return exact_valid ? u128_to_string(exact) : std::to_string(double(approx));
    }
};

inline bool pcc_less(const PccValue& a, const PccValue& b) {
    if (a.exact_valid && b.exact_valid) return a.exact < b.exact;
    return a.approx < b.approx;
}

struct CostReport {
    std::uint32_t space = 0;  // peak |P_i|
    std::uint32_t time = 0;   // number of moves
    std::vector<std::uint32_t> sustained;  // sustained[lambda], lambda in [0, space]
    std::uint32_t graph_opt_sustained = 0;
    bool graph_space_from_caller = false;
    std::map<std::uint32_t, std::uint32_t> delta_subopt;
    std::map<std::uint32_t, PccValue> pcc_int;
    std::map<double, long double> pcc_real;
    std::uint32_t magic_used = 0;   // m(P): nodes that ever held a magic pebble
    std::uint32_t magic_space = 0;  // max(m(P), peak)
    std::map<std::uint32_t, PccValue> pcc_magic_int;  // max(m^a, sum |P_i|^a)

    std::uint32_t sustained_at(std::uint32_t lambda) const {
        if (lambda >= sustained.size()) return 0;
        return sustained[lambda];
    }
};

// Computes every cost measure of a strategy. The strategy is re-validated
// first and measurement fails closed on an invalid strategy. graph_space, if
// supplied, is the graph's space complexity P_s(G,T) used for the
// graph-optimal sustained count; otherwise the strategy's own peak is used.
inline CostReport measure(const Dag& d, const Strategy& strat,
                          const std::vector<NodeIndex>& targets, Mode mode,
                          const std::vector<std::uint32_t>& alphas_int = {1, 2, 3},
                          const std::vector<double>& alphas_real = {},
                          const std::vector<std::uint32_t>& deltas = {0, 1},
                          std::optional<std::uint32_t> graph_space = std::nullopt) {
    if (auto err = validate(d, strat, targets, mode))
        throw std::invalid_argument("measure: invalid strategy: " + *err);

    CostReport r;
    r.time = static_cast<std::uint32_t>(strat.moves());
    std::vector<std::uint32_t> sizes;
    sizes.reserve(strat.moves());
    NodeSet ever_magic(d.node_count());
    for (std::size_t i = 1; i < strat.configs.size(); ++i) {
        sizes.push_back(static_cast<std::uint32_t>(strat.configs[i].size()));
        ever_magic |= strat.configs[i].magic;
        r.space = std::max(r.space, sizes.back());
    }
    r.magic_used = static_cast<std::uint32_t>(ever_magic.count());
    r.magic_space = std::max(r.magic_used, r.space);

    r.sustained.assign(r.space + 1, 0);
    for (auto sz : sizes)
        for (std::uint32_t lam = 0; lam <= sz; ++lam) r.sustained[lam]++;

    std::uint32_t gs = graph_space.value_or(r.space);
    r.graph_space_from_caller = graph_space.has_value();
    r.graph_opt_sustained = r.sustained_at(gs);
    for (auto dl : deltas) r.delta_subopt[dl] = r.sustained_at(gs > dl ? gs - dl : 0);

    for (auto a : alphas_int) {
        PccValue pv;
        for (auto sz : sizes) {
            u128 term;
            if (pv.exact_valid && checked_pow_u128(sz, a, term) &&
                term <= ~u128{0} - pv.exact) {
                pv.exact += term;
            } else {
                pv.exact_valid = false;
            }
            pv.approx += std::pow(static_cast<long double>(sz), static_cast<long double>(a));
        }
        r.pcc_int[a] = pv;
        if (strat.kind == Kind::Magic) {
            PccValue mv = pv;
            u128 mpow;
            if (mv.exact_valid && checked_pow_u128(r.magic_used, a, mpow)) {
                if (mpow > mv.exact) mv.exact = mpow;
            } else {
                mv.exact_valid = false;
            }
            mv.approx = std::max(mv.approx, std::pow(static_cast<long double>(r.magic_used),
                                                     static_cast<long double>(a)));
            r.pcc_magic_int[a] = mv;
        }
    }
    for (auto a : alphas_real) {
        long double acc = 0.0L;
        for (auto sz : sizes)
            acc += std::pow(static_cast<long double>(sz), static_cast<long double>(a));
        r.pcc_real[a] = acc;
    }
    return r;
}

}  // namespace pebbling::engine
