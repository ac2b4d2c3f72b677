#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pebbling/engine.hpp"
#include "pebbling/shf.hpp"
#include "pebbling/trace.hpp"

namespace pebbling::audit {

using engine::Config;
using engine::Strategy;
using graph::Dag;
using graph::NodeIndex;
using shf::QueryTrace;

struct ExPostFactoResult {
    Strategy strategy;                 // magic kind, parallel moves
    std::uint64_t unmatched_queries = 0;
    std::uint32_t magic_placements = 0;
    std::vector<std::size_t> moves_per_batch;  // strategy moves emitted per trace batch
};

namespace detail {

struct NodeTimes {
    std::vector<std::uint32_t> derived;  // batches whose queries produce this label
    std::vector<std::uint32_t> used;     // batches whose queries contain this label
};

inline bool necessary_at(const NodeTimes& nt, std::uint32_t batch) {
    // needed by a later query with no re-derivation in between
    auto use = std::upper_bound(nt.used.begin(), nt.used.end(), batch);
    if (use == nt.used.end()) return false;
    auto rederive = std::upper_bound(nt.derived.begin(), nt.derived.end(), batch);
    return rederive == nt.derived.end() || *rederive >= *use;
}

}  // namespace detail

// Reconstructs the black-magic pebbling induced by an oracle-query trace.
// Matched queries pebble their node: black when every predecessor was
// pebbled before the batch (or by an earlier move of it), magic pebbles on
// any predecessor labels the trace relies on without ever deriving them.
// Afterwards every pebble is dropped as soon as no later query needs it.
inline ExPostFactoResult ex_post_facto(const Dag& d, const shf::Oracle& oracle,
                                       const Bytes& zeta, const QueryTrace& trace,
                                       std::uint32_t label_bits = 0) {
    const std::size_t n = d.node_count();
    auto labels = shf::label_all(d, oracle, zeta, label_bits);
    std::map<Bytes, NodeIndex> by_input;
    for (NodeIndex v = 0; v < n; ++v)
        by_input[shf::pre_label_input(d, v, labels, zeta)] = v;

    ExPostFactoResult res;
    res.strategy = engine::magic_strategy(n, std::nullopt);

    // match queries and index derivation/use times per node
    const std::uint32_t batches = static_cast<std::uint32_t>(trace.batches.size());
    std::vector<std::vector<NodeIndex>> matched(batches);
    std::vector<detail::NodeTimes> times(n);
    for (std::uint32_t b = 0; b < batches; ++b) {
        for (const auto& q : trace.batches[b]) {
            if (oracle.eval(q.input) != q.output)
                throw std::runtime_error("trace inconsistent with the oracle at batch " +
                                         std::to_string(b));
            auto it = by_input.find(q.input);
            if (it == by_input.end()) {
                ++res.unmatched_queries;
                continue;
            }
            NodeIndex v = it->second;
            matched[b].push_back(v);
            times[v].derived.push_back(b);
            for (auto u : d.predecessors(v)) times[u].used.push_back(b);
        }
    }

    // replay, one batch at a time
    Config cur(n);
    for (std::uint32_t b = 0; b < batches; ++b) {
        std::size_t emitted = 0;
        std::vector<NodeIndex> pending;
        for (auto v : matched[b])
            if (!cur.black.test(v) && !cur.magic.test(v)) pending.push_back(v);
        while (!pending.empty()) {
            // wave of legal black placements against the last emitted move
            NodeSet pebbled = cur.pebbled();
            std::vector<NodeIndex> wave, rest;
            for (auto v : pending) {
                bool covered = true;
                for (auto u : d.predecessors(v)) covered = covered && pebbled.test(u);
                (covered ? wave : rest).push_back(v);
            }
            if (!wave.empty()) {
                for (auto v : wave) cur.black.set(v);
                res.strategy.configs.push_back(cur);
                ++emitted;
                pending.swap(rest);
                continue;
            }
            // nothing placeable: the first stuck query relies on labels that
            // were never derived; those predecessors get magic pebbles
            NodeIndex v = rest.front();
            for (auto u : d.predecessors(v))
                if (!pebbled.test(u)) {
                    cur.magic.set(u);
                    cur.black.reset(u);
                    ++res.magic_placements;
                }
            res.strategy.configs.push_back(cur);
            ++emitted;
            pending.swap(rest);
        }
        // prune pebbles that no later batch needs, keeping this batch's placements
        NodeSet placed_now(n);
        for (auto v : matched[b]) placed_now.set(v);
        bool pruned = false;
        Config next = cur;
        for (NodeIndex v = 0; v < n; ++v) {
            if (!(cur.black.test(v) || cur.magic.test(v))) continue;
            if (placed_now.test(v)) continue;
            if (!detail::necessary_at(times[v], b)) {
                next.black.reset(v);
                next.magic.reset(v);
                pruned = true;
            }
        }
        if (pruned) {
            if (emitted > 0) {
                res.strategy.configs.back() = next;  // fold removals into the last move
            } else {
                res.strategy.configs.push_back(next);
                ++emitted;
            }
            cur = next;
        }
        res.moves_per_batch.push_back(emitted);
    }
    return res;
}

struct AuditReport {
    bool legal = false;
    std::string violation;
    bool goal_met = false;
    std::uint32_t magic_used = 0;
    std::uint32_t chi = 0;  // floor(|x| / w)
    bool flagged = false;   // magic_used > chi
    std::vector<std::uint32_t> per_step_pebbles;
    std::uint64_t unmatched_queries = 0;
};

// Checks the reconstructed strategy against the game rules and the magic
// budget chi = floor(declared_input_bits / w) the security bound allows.
inline AuditReport audit(const Dag& d, const ExPostFactoResult& epf,
                         std::uint64_t declared_input_bits, std::uint32_t word_bits) {
    AuditReport rep;
    rep.unmatched_queries = epf.unmatched_queries;
    rep.chi = static_cast<std::uint32_t>(declared_input_bits / word_bits);
    auto err = engine::validate_magic(d, epf.strategy, {}, engine::Mode::Parallel);
    rep.legal = !err.has_value();
    if (err) rep.violation = *err;

    NodeSet visited(d.node_count());
    NodeSet ever_magic(d.node_count());
    for (std::size_t i = 1; i < epf.strategy.configs.size(); ++i) {
        const auto& c = epf.strategy.configs[i];
        visited |= c.black;
        visited |= c.magic;
        ever_magic |= c.magic;
        rep.per_step_pebbles.push_back(static_cast<std::uint32_t>(c.size()));
    }
    rep.magic_used = static_cast<std::uint32_t>(ever_magic.count());
    rep.flagged = rep.magic_used > rep.chi;
    rep.goal_met = true;
    for (auto t : d.targets()) rep.goal_met = rep.goal_met && visited.test(t);
    return rep;
}

}  // namespace pebbling::audit
