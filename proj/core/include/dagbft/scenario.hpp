#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <dagbft/committee.hpp>
#include <dagbft/model.hpp>

namespace dagbft {

enum class adversary_strategy : std::uint8_t { none, equivocate, under_quorum };

std::string_view strategy_name(adversary_strategy s) noexcept;
// Throws config_error for an unknown id.
adversary_strategy parse_strategy(std::string_view name);

// Everything that determines an execution: the initial state, the protocol
// parameters, and how the scheduler resolves nondeterminism.
struct scenario_t {
    std::string name = "scenario";
    address_set_t correct;
    committee_t genesis;
    round_t lookback = 4;
    // Adversary identities; defaults to the genesis members that are not correct.
    address_set_t faulty;
    std::size_t max_events = 300;
    round_t max_round = 30;
    // Indexed by event_kind.
    std::array<double, 4> weights{4.0, 8.0, 1.0, 4.0};
    // A validator without its own certificate for its round, or with a commit
    // enabled, advances only when no other event is enabled.
    bool progress_bias = true;
    adversary_strategy adversary = adversary_strategy::none;
    // Certificates of correct validators may carry bond/unbond transactions.
    bool dynamic_stake = false;
    std::uint64_t seed = 1;
    // 0 disables in-run checking; otherwise check_all every this many events.
    std::size_t check_every = 0;
    // A fixed event list; when present it replaces random scheduling.
    std::optional<std::vector<event_t>> script;

    protocol_params_t params() const { return {genesis, lookback}; }
    double weight(event_kind k) const { return weights[static_cast<std::size_t>(k)]; }
};

// Throws config_error when the scenario is inconsistent.
void validate(const scenario_t &sc);

nlohmann::ordered_json encode_scenario(const scenario_t &sc);
// Validates; errors name the offending field.
scenario_t decode_scenario(const nlohmann::ordered_json &j);
scenario_t load_scenario(const std::string &path);

} // namespace dagbft
