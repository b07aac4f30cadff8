#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <dagbft/invariant.hpp>
#include <dagbft/model.hpp>
#include <dagbft/scenario.hpp>
#include <dagbft/trace.hpp>

namespace dagbft {

using rng_t = std::mt19937_64;

// A finite, sound under-approximation of the events enabled in s: every
// advance (below max_round), commit and accept event, generated create
// candidates for the correct validators, and the adversary's proposals.
// Every returned event satisfies event_possible. With an rng, create
// candidates also include randomly chosen endorser sets. Sorted, no duplicates.
std::vector<event_t> enabled_events(const system_state_t &s, const scenario_t &sc, rng_t *rng = nullptr);

// Create events for the scenario's faulty validators under a strategy.
std::vector<event_t> adversary_propose(adversary_strategy strategy, const system_state_t &s, const scenario_t &sc);

// The transactions a correct validator puts in its certificate for a round.
std::vector<transaction_t> proposal_transactions(const address_t &a, round_t r, const scenario_t &sc);

// Deterministic in the scenario (seed included). Runs the script instead when
// the scenario has one; a disabled scripted event ends the run.
trace_t run_random(const scenario_t &sc);
trace_t run_script(const scenario_t &sc, const std::vector<event_t> &events);
trace_t run_scenario(const scenario_t &sc);

// Rebuilds a trace from an event list (digests, fault tolerance, anchors).
// Returns nullopt if some event is disabled.
std::optional<trace_t> build_trace(const scenario_t &sc, const std::vector<event_t> &events, std::size_t check_every = 0);

struct replay_result_t {
    bool ok = true;
    std::optional<std::size_t> step;   // 1-based step of the first divergence (0 = final state)
    std::string detail;
};

replay_result_t replay(const trace_t &t);

struct minimize_result_t {
    trace_t trace;
    bool reproducible = true;   // false: input returned unchanged
    std::size_t removed = 0;
};

// Greedy event deletion keeping executions that still exhibit the invariant's violation.
minimize_result_t minimize(const trace_t &t, invariant_id violated);

} // namespace dagbft
