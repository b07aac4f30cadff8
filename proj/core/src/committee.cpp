#include <dagbft/committee.hpp>

#include <dagbft/errors.hpp>

namespace dagbft {

round_t last_block_round(const blockchain_t &chain) noexcept
{
    return chain.empty() ? 0 : chain.back().round;
}

committee_t apply_transaction(committee_t w, const transaction_t &x)
{
    if (const auto *b = std::get_if<bond_t>(&x)) {
        auto [it, inserted] = w.try_emplace(b->validator, b->stake);
        if (!inserted)
            it->second = checked_add(it->second, b->stake);
    } else if (const auto *u = std::get_if<unbond_t>(&x)) {
        w.erase(u->validator);
    }
    return w;
}

committee_t apply_blocks(committee_t w, std::span<const block_t> blocks)
{
    for (const auto &b: blocks)
        for (const auto &x: b.transactions)
            w = apply_transaction(std::move(w), x);
    return w;
}

namespace {
    // Number of blocks left after dropping trailing blocks whose round is >= r.
    std::size_t prefix_before(round_t r, std::span<const round_t> rounds)
    {
        auto k = rounds.size();
        while (k > 0 && r <= rounds[k - 1])
            --k;
        return k;
    }
}

std::optional<committee_t> bonded_committee_at(round_t r, const blockchain_t &chain, const protocol_params_t &params)
{
    if (r > last_block_round(chain) + 2)
        return std::nullopt;
    auto k = chain.size();
    while (k > 0 && r <= chain[k - 1].round)
        --k;
    return apply_blocks(params.genesis, std::span{chain}.first(k));
}

std::optional<committee_t> active_committee_at(round_t r, const blockchain_t &chain, const protocol_params_t &params)
{
    if (r <= params.lookback)
        return params.genesis;
    return bonded_committee_at(r - params.lookback, chain, params);
}

stake_t total_stake(const committee_t &w)
{
    stake_t n = 0;
    for (const auto &[_, k]: w)
        n = checked_add(n, k);
    return n;
}

stake_t max_faulty_stake_of(stake_t total) noexcept
{
    return total == 0 ? 0 : (total - 1) / 3;
}

stake_t max_faulty_stake(const committee_t &w) { return max_faulty_stake_of(total_stake(w)); }

stake_t quorum_stake(const committee_t &w)
{
    const auto n = total_stake(w);
    return n - max_faulty_stake_of(n);
}

std::optional<stake_t> members_stake_checked(const address_set_t &addrs, const committee_t &w)
{
    stake_t sum = 0;
    for (const auto &a: addrs) {
        auto it = w.find(a);
        if (it == w.end())
            return std::nullopt;
        sum = checked_add(sum, it->second);
    }
    return sum;
}

stake_t members_stake(const address_set_t &addrs, const committee_t &w)
{
    for (const auto &a: addrs)
        if (!w.contains(a))
            throw membership_error("address " + a.value + " is not a committee member");
    return *members_stake_checked(addrs, w);
}

namespace {
    bool quorum_in(const address_set_t &addrs, const committee_t &w)
    {
        auto k = members_stake_checked(addrs, w);
        return k && *k >= quorum_stake(w);
    }
}

bool is_quorum(const address_set_t &addrs, round_t r, const blockchain_t &chain, const protocol_params_t &params)
{
    auto w = active_committee_at(r, chain, params);
    return w && quorum_in(addrs, *w);
}

committee_view::committee_view(const blockchain_t &chain, const protocol_params_t &params):
    _last{last_block_round(chain)}, _lookback{params.lookback}
{
    _rounds.reserve(chain.size());
    _prefix.reserve(chain.size() + 1);
    _prefix.push_back(params.genesis);
    for (const auto &b: chain) {
        _rounds.push_back(b.round);
        _prefix.push_back(apply_blocks(_prefix.back(), std::span{&b, 1}));
    }
}

const committee_t *committee_view::bonded(round_t r) const
{
    if (r > _last + 2)
        return nullptr;
    return &_prefix[prefix_before(r, _rounds)];
}

const committee_t *committee_view::active(round_t r) const
{
    if (r <= _lookback)
        return &_prefix.front();
    return bonded(r - _lookback);
}

bool committee_view::is_quorum(const address_set_t &addrs, round_t r) const
{
    const auto *w = active(r);
    return w && quorum_in(addrs, *w);
}

} // namespace dagbft
