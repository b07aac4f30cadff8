#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <dagbft/invariant.hpp>
#include <dagbft/model.hpp>
#include <dagbft/scenario.hpp>

namespace dagbft {

struct trace_step_t {
    event_t event;
    digest_t state_digest;
    bool ft = true;                    // every state up to and including this one is fault-tolerant
    std::vector<std::string> anchors;  // committed anchors ("author@round"), commit events only

    bool operator==(const trace_step_t &) const = default;
};

// A violation seen while checking the state after step `step` (0 = initial state).
struct found_violation_t {
    std::size_t step;
    bool expected;
    violation_t violation;
};

struct trace_t {
    scenario_t scenario;
    std::vector<trace_step_t> steps;
    system_state_t final_state;
    bool ft_throughout = true;

    // Not serialized: results of in-run checking, and why a scripted run
    // stopped early (empty if it did not).
    std::vector<found_violation_t> violations;
    std::size_t checked_states = 0;
    std::string halted;

    std::vector<event_t> events() const;
};

// JSON lines: scenario, one line per step, then the final state.
void write_trace(std::ostream &out, const trace_t &t);
std::string trace_to_string(const trace_t &t);
void save_trace(const std::string &path, const trace_t &t);
// Throws config_error on malformed input.
trace_t read_trace(std::istream &in);
trace_t load_trace(const std::string &path);

} // namespace dagbft
