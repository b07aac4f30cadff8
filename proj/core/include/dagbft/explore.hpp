#pragma once

#include <cstddef>
#include <vector>

#include <dagbft/invariant.hpp>
#include <dagbft/scenario.hpp>

namespace dagbft {

struct explore_violation_t {
    violation_t violation;
    bool expected;                 // fault-tolerance-only invariant on a non-fault-tolerant path
    std::vector<event_t> path;     // from the initial state
};

struct explore_report_t {
    std::size_t visited = 0;                 // distinct states within the depth bound
    std::size_t frontier = 0;                // states at the last depth, not expanded
    std::vector<std::size_t> per_depth;      // new states first reached at each depth
    bool truncated = false;                  // stopped by the state budget
    std::vector<explore_violation_t> violations;

    std::size_t failures() const;
};

// Breadth-first search over enabled_events (no randomness) up to `depth`
// events, deduplicating states by digest and checking every visited state.
// A state counts as fault-tolerant-reachable if some path to it is
// fault-tolerant throughout. budget = 0 means unbounded.
explore_report_t explore(const scenario_t &sc, std::size_t depth, std::size_t budget = 0);

} // namespace dagbft
