#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "pebbling/engine.hpp"
#include "pebbling/graph.hpp"

namespace pebbling::solver {

using engine::Kind;
using engine::Mode;
using engine::Strategy;
using graph::Dag;
using graph::NodeIndex;

struct SearchBudget {
    std::uint32_t max_pebbles = 16;
    std::uint64_t max_states = 50'000'000;
    double max_seconds = 600.0;
};

// Move granularity for the standard game. Batched is the default game (one
// added pebble per sequential move, removals free, any combination in
// parallel); the atomic rule sets restrict a sequential move to a single
// action and exist to exhibit the effect of the slide rule.
enum class ActionRules { Batched, AtomicSlide, AtomicNoSlide };

enum class Status { Found, ExhaustedNoSolution, BudgetExceeded };

struct SolveResult {
    Status status = Status::ExhaustedNoSolution;
    std::uint32_t space = 0;          // minimal space when Found
    std::uint32_t searched_up_to = 0; // exhausted bound when not Found
    Strategy witness;
    std::uint64_t states_explored = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct SolverGraph {
    std::uint32_t n = 0;
    std::vector<std::uint64_t> pred_mask;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<NodeIndex> targets;

    SolverGraph(const Dag& d, const std::vector<NodeIndex>& tgts) : targets(tgts) {
        if (d.node_count() > 64)
            throw std::invalid_argument("solver: graph exceeds 64 nodes");
        if (targets.size() > 16) throw std::invalid_argument("solver: more than 16 targets");
        n = d.node_count();
        pred_mask.assign(n, 0);
        for (const auto& [u, v] : d.edges()) pred_mask[v] |= std::uint64_t{1} << u;
        edges = d.edges();
    }

    std::uint64_t placeable(std::uint64_t pebbled) const {
        std::uint64_t out = 0;
        for (std::uint32_t v = 0; v < n; ++v) {
            std::uint64_t bit = std::uint64_t{1} << v;
            if ((pebbled & bit) == 0 && (pred_mask[v] & ~pebbled) == 0) out |= bit;
        }
        return out;
    }

    std::uint16_t hit_targets(std::uint64_t pebbled) const {
        std::uint16_t vis = 0;
        for (std::size_t i = 0; i < targets.size(); ++i)
            if (pebbled >> targets[i] & 1) vis |= std::uint16_t(1) << i;
        return vis;
    }

    std::uint16_t full_vis() const {
        return static_cast<std::uint16_t>((std::uint32_t{1} << targets.size()) - 1);
    }
};

struct StdKey {
    std::uint64_t p = 0;
    std::uint16_t vis = 0;
    bool operator==(const StdKey& o) const { return p == o.p && vis == o.vis; }
};
struct StdKeyHash {
    std::size_t operator()(const StdKey& k) const {
        return splitmix64(k.p ^ (std::uint64_t(k.vis) << 48));
    }
};

struct MagicKey {
    std::uint64_t b = 0, m = 0;
    std::uint16_t used = 0, vis = 0;
    bool operator==(const MagicKey& o) const {
        return b == o.b && m == o.m && used == o.used && vis == o.vis;
    }
};
struct MagicKeyHash {
    std::size_t operator()(const MagicKey& k) const {
        return splitmix64(k.b ^ splitmix64(k.m) ^ (std::uint64_t(k.used) << 32) ^
                          (std::uint64_t(k.vis) << 16));
    }
};

class Deadline {
public:
    Deadline(const SearchBudget& b, std::uint64_t& counter)
        : counter_(counter), max_states_(b.max_states),
          end_(std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>(b.max_seconds))) {}

    // Returns true while within budget. Checks the clock sparsely.
    bool tick() {
        ++counter_;
        if (counter_ > max_states_) return false;
        if ((counter_ & 0xfff) == 0 && std::chrono::steady_clock::now() > end_) return false;
        return true;
    }

private:
    std::uint64_t& counter_;
    std::uint64_t max_states_;
    std::chrono::steady_clock::time_point end_;
};

// Enumerates subsets of the bits in `pool` with at most `cap` set bits.
template <typename F>
void for_each_subset_capped(std::uint64_t pool, std::uint32_t cap, F&& f) {
    std::vector<std::uint32_t> bits;
    for (std::uint64_t t = pool; t; t &= t - 1)
        bits.push_back(static_cast<std::uint32_t>(__builtin_ctzll(t)));
    struct Frame {
        std::size_t idx;
        std::uint64_t chosen;
        std::uint32_t cnt;
    };
    std::vector<Frame> st{{0, 0, 0}};
    while (!st.empty()) {
        Frame fr = st.back();
        st.pop_back();
        if (fr.idx == bits.size()) {
            f(fr.chosen);
            continue;
        }
        st.push_back({fr.idx + 1, fr.chosen, fr.cnt});
        if (fr.cnt < cap)
            st.push_back({fr.idx + 1, fr.chosen | (std::uint64_t{1} << bits[fr.idx]), fr.cnt + 1});
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Standard game: minimum space via iterative deepening on the pebble count.

namespace detail {

template <typename EmitFn>
void standard_successors(const SolverGraph& g, std::uint64_t p, std::uint32_t k, Mode mode,
                         ActionRules rules, EmitFn&& emit) {
    const std::uint64_t cands = g.placeable(p);
    if (mode == Mode::Parallel) {
        for_each_subset_capped(p | cands, k, [&](std::uint64_t q) {
            if (q != p) emit(q);
        });
        return;
    }
    if (rules == ActionRules::Batched) {
        std::uint64_t r = p;
        while (true) {  // all submasks of p, including 0 and p
            std::uint64_t base = p & ~r;
            if (r != 0) emit(base);
            if (static_cast<std::uint32_t>(__builtin_popcountll(base)) < k)
                for (std::uint64_t t = cands; t; t &= t - 1)
                    emit(base | (t & -t));
            if (r == 0) break;
            r = (r - 1) & p;
        }
        return;
    }
    // atomic: one action per move
    if (static_cast<std::uint32_t>(__builtin_popcountll(p)) < k)
        for (std::uint64_t t = cands; t; t &= t - 1) emit(p | (t & -t));
    for (std::uint64_t t = p; t; t &= t - 1) emit(p & ~(t & -t));
    if (rules == ActionRules::AtomicSlide) {
        for (const auto& [u, v] : g.edges) {
            std::uint64_t ub = std::uint64_t{1} << u, vb = std::uint64_t{1} << v;
            if ((p & ub) && !(p & vb) && (g.pred_mask[v] & ~p) == 0) emit((p & ~ub) | vb);
        }
    }
}

inline std::optional<std::vector<std::uint64_t>> standard_search(
    const SolverGraph& g, std::uint32_t k, Mode mode, ActionRules rules, Deadline& dl,
    bool& budget_hit) {
    std::unordered_map<StdKey, StdKey, StdKeyHash> parent;
    std::deque<StdKey> queue;
    const StdKey start{0, 0};
    parent.emplace(start, start);
    queue.push_back(start);
    const std::uint16_t goal = g.full_vis();
    std::optional<StdKey> found;
    if (goal == 0) found = start;  // no targets: vacuous
    while (!queue.empty() && !found) {
        StdKey cur = queue.front();
        queue.pop_front();
        if (!dl.tick()) {
            budget_hit = true;
            return std::nullopt;
        }
        standard_successors(g, cur.p, k, mode, rules, [&](std::uint64_t q) {
            if (found) return;
            StdKey next{q, static_cast<std::uint16_t>(cur.vis | g.hit_targets(q))};
            auto [it, inserted] = parent.emplace(next, cur);
            if (!inserted) return;
            if (next.vis == goal) {
                found = next;
                return;
            }
            queue.push_back(next);
        });
    }
    if (!found) return std::nullopt;
    std::vector<std::uint64_t> path;
    StdKey cur = *found;
    while (true) {
        path.push_back(cur.p);
        StdKey par = parent.at(cur);
        if (par == cur) break;
        cur = par;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

inline Strategy configs_from_masks(const std::vector<std::uint64_t>& path, std::size_t n) {
    Strategy s = engine::standard_strategy(n);
    s.configs.clear();
    for (auto mask : path) {
        engine::Config c(n);
        for (std::uint64_t t = mask; t; t &= t - 1)
            c.black.set(static_cast<std::size_t>(__builtin_ctzll(t)));
        s.configs.push_back(std::move(c));
    }
    return s;
}

}  // namespace detail

// Minimum-space search for the standard game: reachability over pebble
// configurations of at most k pebbles for k = 1, 2, ..., tracking the set of
// targets visited so far. The returned witness always passes the engine
// validator for the requested mode.
inline SolveResult min_space_standard(const Dag& d, const std::vector<NodeIndex>& targets,
                                      Mode mode, const SearchBudget& budget = {},
                                      ActionRules rules = ActionRules::Batched) {
    if (mode == Mode::Parallel && rules != ActionRules::Batched)
        throw std::invalid_argument("atomic action rules are sequential-only");
    detail::SolverGraph g(d, targets);
    SolveResult res;
    detail::Deadline dl(budget, res.states_explored);
    for (std::uint32_t k = 1; k <= budget.max_pebbles; ++k) {
        bool budget_hit = false;
        auto path = detail::standard_search(g, k, mode, rules, dl, budget_hit);
        if (budget_hit) {
            res.status = Status::BudgetExceeded;
            res.searched_up_to = k - 1;
            return res;
        }
        if (path) {
            res.status = Status::Found;
            res.space = k;
            res.witness = detail::configs_from_masks(*path, g.n);
            if (auto err = engine::validate_standard(d, res.witness, targets, mode))
                throw std::logic_error("solver produced invalid witness: " + *err);
            return res;
        }
        res.searched_up_to = k;
    }
    res.status = Status::ExhaustedNoSolution;
    return res;
}

// ---------------------------------------------------------------------------
// Black-magic game: minimum magic space max(m(P), peak |P_i|) w.r.t. a magic
// pebble bound. Deepens on the magic-space value itself.

namespace detail {

template <typename EmitFn>
void magic_successors(const SolverGraph& g, const MagicKey& cur, std::uint32_t k,
                      std::uint32_t max_magic, Mode mode, EmitFn&& emit) {
    const std::uint64_t pebbled = cur.b | cur.m;
    const std::uint64_t cands = g.placeable(pebbled);
    const std::uint64_t all = (g.n == 64) ? ~std::uint64_t{0}
                                          : ((std::uint64_t{1} << g.n) - 1);
    if (mode == Mode::Parallel) {
        for_each_subset_capped(cur.b | cands, k, [&](std::uint64_t nb) {
            std::uint32_t nbc = static_cast<std::uint32_t>(__builtin_popcountll(nb));
            if (nbc > k) return;
            std::uint64_t km = cur.m;
            while (true) {  // kept magic: submasks of m
                std::uint32_t kmc = static_cast<std::uint32_t>(__builtin_popcountll(km));
                if (nbc + kmc <= k && (nb & km) == 0) {
                    std::uint32_t room = std::min(k - nbc - kmc, max_magic - cur.used);
                    std::uint64_t fresh = all & ~(nb | cur.m | cur.b);
                    for_each_subset_capped(fresh, room, [&](std::uint64_t nm_new) {
                        std::uint64_t nm = km | nm_new;
                        if (nb == cur.b && nm == cur.m) return;
                        emit(nb, nm,
                             cur.used + static_cast<std::uint16_t>(
                                            __builtin_popcountll(nm_new)));
                    });
                }
                if (km == 0) break;
                km = (km - 1) & cur.m;
            }
        });
        return;
    }
    // sequential, batched: arbitrary removals plus at most one added pebble
    std::uint64_t rb = cur.b;
    while (true) {
        std::uint64_t rm = cur.m;
        while (true) {
            std::uint64_t nb = cur.b & ~rb, nm = cur.m & ~rm;
            std::uint32_t sz = static_cast<std::uint32_t>(__builtin_popcountll(nb | nm));
            if (rb | rm) emit(nb, nm, cur.used);
            if (sz < k) {
                for (std::uint64_t t = cands; t; t &= t - 1)
                    emit(nb | (t & -t), nm, cur.used);
                if (cur.used < max_magic) {
                    std::uint64_t fresh = all & ~pebbled;
                    for (std::uint64_t t = fresh; t; t &= t - 1)
                        emit(nb, nm | (t & -t), cur.used + 1);
                }
            }
            if (rm == 0) break;
            rm = (rm - 1) & cur.m;
        }
        if (rb == 0) break;
        rb = (rb - 1) & cur.b;
    }
}

struct MagicSearchOut {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> path;  // (black, magic)
};

inline std::optional<MagicSearchOut> magic_search(const SolverGraph& g, std::uint32_t k,
                                                  std::uint32_t max_magic, Mode mode,
                                                  Deadline& dl, bool& budget_hit) {
    std::unordered_map<MagicKey, MagicKey, MagicKeyHash> parent;
    std::deque<MagicKey> queue;
    const MagicKey start{};
    parent.emplace(start, start);
    queue.push_back(start);
    const std::uint16_t goal = g.full_vis();
    std::optional<MagicKey> found;
    if (goal == 0) found = start;
    while (!queue.empty() && !found) {
        MagicKey cur = queue.front();
        queue.pop_front();
        if (!dl.tick()) {
            budget_hit = true;
            return std::nullopt;
        }
        magic_successors(g, cur, k, max_magic, mode,
                         [&](std::uint64_t nb, std::uint64_t nm, std::uint16_t used) {
                             if (found) return;
                             MagicKey next{nb, nm, used,
                                           static_cast<std::uint16_t>(
                                               cur.vis | g.hit_targets(nb | nm))};
                             auto [it, inserted] = parent.emplace(next, cur);
                             if (!inserted) return;
                             if (next.vis == goal) {
                                 found = next;
                                 return;
                             }
                             queue.push_back(next);
                         });
    }
    if (!found) return std::nullopt;
    MagicSearchOut out;
    MagicKey cur = *found;
    while (true) {
        out.path.emplace_back(cur.b, cur.m);
        MagicKey par = parent.at(cur);
        if (par == cur) break;
        cur = par;
    }
    std::reverse(out.path.begin(), out.path.end());
    return out;
}

}  // namespace detail

// Minimum magic space: smallest kappa such that some valid strategy with
// magic bound `mbound` has max(m(P), peak) <= kappa. When kappa reaches the
// target count and the bound allows it, the all-targets magic strategy is
// emitted directly rather than searched for.
inline SolveResult min_space_magic(const Dag& d, const std::vector<NodeIndex>& targets,
                                   std::optional<std::uint32_t> mbound, Mode mode,
                                   const SearchBudget& budget = {}) {
    detail::SolverGraph g(d, targets);
    SolveResult res;
    detail::Deadline dl(budget, res.states_explored);
    const std::uint32_t tcount = static_cast<std::uint32_t>(targets.size());
    for (std::uint32_t k = 1; k <= budget.max_pebbles; ++k) {
        const std::uint32_t max_magic = std::min(k, mbound.value_or(k));
        if (k >= tcount && max_magic >= tcount && tcount > 0) {
            // placing magic pebbles directly on all the target nodes
            Strategy s = engine::magic_strategy(g.n, mbound);
            engine::Config c(g.n);
            if (mode == Mode::Parallel) {
                for (auto t : targets) c.magic.set(t);
                s.configs.push_back(c);
            } else {
                for (auto t : targets) {
                    c.magic.set(t);
                    s.configs.push_back(c);
                }
            }
            res.status = Status::Found;
            res.space = k;
            res.witness = std::move(s);
        } else {
            bool budget_hit = false;
            auto found = detail::magic_search(g, k, max_magic, mode, dl, budget_hit);
            if (budget_hit) {
                res.status = Status::BudgetExceeded;
                res.searched_up_to = k - 1;
                return res;
            }
            if (!found) {
                res.searched_up_to = k;
                continue;
            }
            Strategy s = engine::magic_strategy(g.n, mbound);
            s.configs.clear();
            for (const auto& [bm, mm] : found->path) {
                engine::Config c(g.n);
                for (std::uint64_t t = bm; t; t &= t - 1)
                    c.black.set(static_cast<std::size_t>(__builtin_ctzll(t)));
                for (std::uint64_t t = mm; t; t &= t - 1)
                    c.magic.set(static_cast<std::size_t>(__builtin_ctzll(t)));
                s.configs.push_back(std::move(c));
            }
            res.status = Status::Found;
            res.space = k;
            res.witness = std::move(s);
        }
        if (auto err = engine::validate_magic(d, res.witness, targets, mode))
            throw std::logic_error("solver produced invalid magic witness: " + *err);
        return res;
    }
    res.status = Status::ExhaustedNoSolution;
    return res;
}

// ---------------------------------------------------------------------------
// Minimum Lambda-sustained count subject to a pebble budget (standard game):
// 0/1-weighted BFS where a move costs 1 iff the resulting configuration
// holds at least lambda pebbles.

struct SustainedResult {
    Status status = Status::ExhaustedNoSolution;
    std::uint32_t min_steps_at_lambda = 0;
    std::uint64_t states_explored = 0;
};

inline SustainedResult min_sustained_standard(const Dag& d,
                                              const std::vector<NodeIndex>& targets,
                                              std::uint32_t lambda, std::uint32_t pebble_budget,
                                              Mode mode, const SearchBudget& budget = {}) {
    detail::SolverGraph g(d, targets);
    SustainedResult res;
    detail::Deadline dl(budget, res.states_explored);
    std::unordered_map<detail::StdKey, std::uint32_t, detail::StdKeyHash> dist;
    std::deque<detail::StdKey> dq;
    const detail::StdKey start{0, 0};
    dist[start] = 0;
    dq.push_back(start);
    const std::uint16_t goal = g.full_vis();
    while (!dq.empty()) {
        detail::StdKey cur = dq.front();
        dq.pop_front();
        if (!dl.tick()) {
            res.status = Status::BudgetExceeded;
            return res;
        }
        std::uint32_t dcur = dist.at(cur);
        if (cur.vis == goal) {
            res.status = Status::Found;
            res.min_steps_at_lambda = dcur;
            return res;
        }
        detail::standard_successors(
            g, cur.p, pebble_budget, mode, ActionRules::Batched, [&](std::uint64_t q) {
                std::uint32_t w =
                    static_cast<std::uint32_t>(__builtin_popcountll(q)) >= lambda ? 1 : 0;
                detail::StdKey next{q, static_cast<std::uint16_t>(cur.vis | g.hit_targets(q))};
                auto it = dist.find(next);
                if (it != dist.end() && it->second <= dcur + w) return;
                dist[next] = dcur + w;
                if (w == 0)
                    dq.push_front(next);
                else
                    dq.push_back(next);
            });
    }
    return res;
}

}  // namespace pebbling::solver
