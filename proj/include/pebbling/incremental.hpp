#pragma once

#include <cstdint>
#include <vector>

#include "pebbling/solver.hpp"

namespace pebbling::engine {

struct IncrementalSubsetReport {
    std::vector<graph::NodeIndex> subset;   // C
    std::uint32_t budget = 0;               // |C| - 1 magic pebbles allowed
    bool hardness_holds = false;            // no strategy below |T| pebbles exists
    bool conclusive = false;                // solver exhausted the space below |T|
    std::uint32_t cheaper_space = 0;        // magic space of a counterexample, if any
};

struct IncrementalReport {
    std::uint32_t target_count = 0;
    std::vector<IncrementalSubsetReport> subsets;
    bool all_hold = true;
};

// Incremental-hardness check: for every subset C of the targets with
// |C| > mbound, ask the exhaustive magic solver whether pebbling C with
// magic budget |C|-1 can be done with fewer than |T| total pebbles.
inline IncrementalReport incremental_hardness_check(
    const graph::Dag& d, std::uint32_t mbound,
    std::pair<std::uint32_t, std::uint32_t> subset_size_range,
    const solver::SearchBudget& budget = {}, solver::Mode mode = solver::Mode::Sequential) {
    const auto& targets = d.targets();
    IncrementalReport rep;
    rep.target_count = static_cast<std::uint32_t>(targets.size());
    if (targets.size() > 20) throw std::invalid_argument("incremental check: too many targets");

    const std::uint32_t tc = rep.target_count;
    for (std::uint32_t size = subset_size_range.first;
         size <= subset_size_range.second && size <= tc; ++size) {
        if (size <= mbound || size == 0) continue;  // definition quantifies |C| > mbound
        std::vector<std::uint32_t> pick(size);
        for (std::uint32_t i = 0; i < size; ++i) pick[i] = i;
        while (true) {
            IncrementalSubsetReport sub;
            for (auto i : pick) sub.subset.push_back(targets[i]);
            sub.budget = size - 1;
            solver::SearchBudget b = budget;
            b.max_pebbles = tc - 1;  // only care whether anything below |T| exists
            auto res = solver::min_space_magic(d, sub.subset, sub.budget, mode, b);
            sub.conclusive = res.status != solver::Status::BudgetExceeded;
            if (res.status == solver::Status::Found) {
                sub.hardness_holds = false;
                sub.cheaper_space = res.space;
            } else {
                sub.hardness_holds = sub.conclusive;
            }
            rep.all_hold = rep.all_hold && sub.hardness_holds;
            rep.subsets.push_back(std::move(sub));
            // next combination
            std::uint32_t i = size;
            while (i > 0 && pick[i - 1] == tc - size + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::uint32_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return rep;
}

}  // namespace pebbling::engine
