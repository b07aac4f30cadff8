#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <dagbft/committee.hpp>
#include <dagbft/model.hpp>

namespace dagbft {

enum class invariant_id : std::uint8_t {
    last_block_round,
    ordered_block_rounds,
    even_block_rounds,
    backward_closure,
    signer_quorum,
    signer_records,
    no_self_endorsement,
    signed_nonequivocation,
    dag_nonequivocation,
    signed_previous_quorum,
    dag_previous_quorum,
    last_anchor_presence,
    last_anchor_voters,
    anchor_paths,
    anchor_nonforking,
    committed_redundancy,
    blockchain_redundancy,
    blockchain_nonforking,
    committee_agreement,
};

inline constexpr std::size_t invariant_count = 19;
extern const std::array<invariant_id, invariant_count> all_invariants;

std::string_view invariant_name(invariant_id id) noexcept;
std::optional<invariant_id> parse_invariant(std::string_view name) noexcept;
// Invariants that only hold in fault-tolerant executions.
bool is_ft_only(invariant_id id) noexcept;

struct violation_t {
    invariant_id invariant;
    // "validator:v1", "cert:f3@1", "block:v1#0", ...
    std::vector<std::string> witnesses;
    std::string detail;

    bool operator==(const violation_t &) const = default;
};

address_set_t faulty_members(const committee_t &w, const system_state_t &s);
bool is_fault_tolerant(const system_state_t &s, const protocol_params_t &params);

cert_set_t all_certs(const system_state_t &s);
cert_set_t signed_certs(const address_t &a, const system_state_t &s);

// All violations of one invariant (empty iff it holds).
std::vector<violation_t> check_invariant(invariant_id id, const system_state_t &s, const protocol_params_t &params);

struct check_report_t {
    std::vector<violation_t> failures;   // unexpected: always a bug or tooling misuse
    std::vector<violation_t> expected;   // fault-tolerance-only invariants in non-fault-tolerant executions

    bool ok() const noexcept { return failures.empty(); }
    // number of invariants without any violation
    std::size_t holding() const;
};

// ft_known: the execution leading to s is known to be fault-tolerant throughout.
check_report_t check_all(const system_state_t &s, const protocol_params_t &params, bool ft_known);

} // namespace dagbft
