#pragma once

#include <optional>
#include <string>
#include <vector>

#include <dagbft/anchor.hpp>
#include <dagbft/committee.hpp>
#include <dagbft/model.hpp>

namespace dagbft {

// Premise identifiers reported when an event is not enabled. Premises are
// evaluated in a fixed order, so the first failing one is deterministic.
namespace premise {
    inline constexpr const char *round_match = "round match";
    inline constexpr const char *round_one_previous = "round one iff no previous";
    inline constexpr const char *unique_author_round = "no existing (author, round) certificate";
    inline constexpr const char *author_closure = "author closure";
    inline constexpr const char *author_previous_quorum = "author previous quorum";
    inline constexpr const char *self_endorsement = "no self endorsement";
    inline constexpr const char *signer_quorum = "signer quorum";
    inline constexpr const char *endorser_newness = "endorser newness";
    inline constexpr const char *endorser_closure = "endorser closure";
    inline constexpr const char *endorser_previous_quorum = "endorser previous quorum";
    inline constexpr const char *in_network = "message in network";
    inline constexpr const char *correct_validator = "correct validator";
    inline constexpr const char *closure = "closure";
    inline constexpr const char *odd_round = "odd round not 1";
    inline constexpr const char *uncommitted = "round not yet committed";
    inline constexpr const char *anchor = "anchor";
    inline constexpr const char *election = "election";
}

struct enabled_result_t {
    bool enabled = true;
    std::optional<std::string> failed_premise;
    std::string detail;

    static enabled_result_t ok() { return {}; }
    static enabled_result_t fail(std::string premise, std::string detail = {})
    {
        return {false, std::move(premise), std::move(detail)};
    }
    explicit operator bool() const noexcept { return enabled; }
};

enabled_result_t create_possible(const certificate_t &c, const system_state_t &s, const protocol_params_t &params);
system_state_t create_next(const certificate_t &c, const system_state_t &s, const protocol_params_t &params);

enabled_result_t accept_possible(const message_t &m, const system_state_t &s, const protocol_params_t &params);
system_state_t accept_next(const message_t &m, const system_state_t &s, const protocol_params_t &params);

enabled_result_t advance_possible(const address_t &a, const system_state_t &s);
system_state_t advance_next(const address_t &a, const system_state_t &s);

enabled_result_t commit_possible(const address_t &a, const system_state_t &s, const protocol_params_t &params);
system_state_t commit_next(const address_t &a, const system_state_t &s, const protocol_params_t &params);

// The anchors a commit event by a would commit, oldest first (empty if not enabled).
anchor_sequence_t commit_anchors(const address_t &a, const system_state_t &s, const protocol_params_t &params);

enabled_result_t event_possible(const event_t &e, const system_state_t &s, const protocol_params_t &params);
// Throws contract_violation if the event is not enabled.
system_state_t event_next(const event_t &e, const system_state_t &s, const protocol_params_t &params);

struct run_result_t {
    std::vector<system_state_t> states;    // s0 .. the last state reached
    std::optional<std::size_t> failed_at;  // index of the first disabled event
    enabled_result_t failure;
};

run_result_t run_events(const system_state_t &s0, const std::vector<event_t> &events, const protocol_params_t &params);

std::string describe(const event_t &e);

} // namespace dagbft
