#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <dagbft/committee.hpp>
#include <dagbft/model.hpp>

namespace dagbft {

// Oldest anchor first.
using anchor_sequence_t = std::vector<certificate_t>;

// Public 64-bit mixer used for leader selection.
std::uint64_t leader_mix(std::uint64_t r) noexcept;

// Swaps the leader mixer; returns the previous one. Only meant for tests that
// check traces are sensitive to the leader schedule. Not thread-safe.
using leader_mixer_fn = std::uint64_t (*)(std::uint64_t);
leader_mixer_fn set_leader_mixer(leader_mixer_fn fn) noexcept;

// Throws contract_violation for an empty committee.
address_t leader_at(const committee_t &w, round_t r);

// The leader's certificate at round r, if the committee is defined and
// non-empty and the DAG has one (least one under equivocation).
std::optional<certificate_t> anchor_at(round_t r, const dag_t &dag, const committee_view &view);

bool is_anchor(const certificate_t &c, const dag_t &dag, const blockchain_t &chain, const protocol_params_t &params);
bool is_anchor(const certificate_t &c, const dag_t &dag, const committee_view &view);
bool is_elected(const certificate_t &c, const dag_t &dag, const blockchain_t &chain, const protocol_params_t &params);
bool is_elected(const certificate_t &c, const dag_t &dag, const committee_view &view);

// Throws contract_violation unless c is an anchor.
std::optional<certificate_t> previous_anchor(const certificate_t &c, const dag_t &dag, const blockchain_t &chain,
                                             const protocol_params_t &params);
std::optional<certificate_t> previous_anchor(const certificate_t &c, const dag_t &dag, const committee_view &view);

anchor_sequence_t collect_anchors(const certificate_t &c, round_t cutoff, const dag_t &dag, const blockchain_t &chain,
                                  const protocol_params_t &params);
anchor_sequence_t collect_anchors(const certificate_t &c, round_t cutoff, const dag_t &dag, const committee_view &view);

std::vector<certificate_t> order_certs(const cert_set_t &certs);
std::vector<transaction_t> collect_transactions(const std::vector<certificate_t> &certs);

// Throws contract_violation if some anchor is not in the DAG.
std::pair<blockchain_t, cert_set_t> extend_blockchain(const anchor_sequence_t &anchors, const dag_t &dag,
                                                      blockchain_t chain, cert_set_t committed);

std::optional<certificate_t> last_anchor(const validator_state_t &v, const protocol_params_t &params);
anchor_sequence_t collect_all_anchors(const validator_state_t &v, const protocol_params_t &params);

} // namespace dagbft
