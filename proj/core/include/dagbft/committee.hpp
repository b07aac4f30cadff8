#pragma once

#include <optional>
#include <span>
#include <vector>

#include <dagbft/model.hpp>

namespace dagbft {

struct protocol_params_t {
    committee_t genesis;
    round_t lookback = 4;
};

// 0 for the empty chain.
round_t last_block_round(const blockchain_t &chain) noexcept;

committee_t apply_transaction(committee_t w, const transaction_t &x);
committee_t apply_blocks(committee_t w, std::span<const block_t> blocks);

// Undefined (nullopt) when r is past the last block round plus two.
std::optional<committee_t> bonded_committee_at(round_t r, const blockchain_t &chain, const protocol_params_t &params);
std::optional<committee_t> active_committee_at(round_t r, const blockchain_t &chain, const protocol_params_t &params);

stake_t total_stake(const committee_t &w);
// Largest f with 3f < n; 0 when n is 0.
stake_t max_faulty_stake_of(stake_t total) noexcept;
stake_t max_faulty_stake(const committee_t &w);
stake_t quorum_stake(const committee_t &w);
// Throws membership_error if some address is not a member.
stake_t members_stake(const address_set_t &addrs, const committee_t &w);
// Like members_stake, but nullopt instead of throwing.
std::optional<stake_t> members_stake_checked(const address_set_t &addrs, const committee_t &w);

bool is_quorum(const address_set_t &addrs, round_t r, const blockchain_t &chain, const protocol_params_t &params);

// Every committee a chain can yield, computed once. Lookups return pointers
// into the view (nullptr = undefined), so a view must outlive its results.
// Hot paths build one view per chain instead of refolding the chain.
class committee_view {
public:
    committee_view(const blockchain_t &chain, const protocol_params_t &params);

    const committee_t *bonded(round_t r) const;
    const committee_t *active(round_t r) const;
    bool is_quorum(const address_set_t &addrs, round_t r) const;

    round_t last() const noexcept { return _last; }
    round_t lookback() const noexcept { return _lookback; }
    const committee_t &genesis() const noexcept { return _prefix.front(); }

private:
    std::vector<round_t> _rounds;       // block rounds, oldest first
    std::vector<committee_t> _prefix;   // _prefix[k] = genesis after the first k blocks
    round_t _last;
    round_t _lookback;
};

} // namespace dagbft
