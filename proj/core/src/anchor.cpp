#include <dagbft/anchor.hpp>

#include <algorithm>

#include <dagbft/dag.hpp>
#include <dagbft/errors.hpp>

namespace dagbft {

namespace {
    // Stafford's "Mix09" variant of the splitmix64 finalizer.
    std::uint64_t mix09(std::uint64_t z) noexcept
    {
        z = (z ^ (z >> 32)) * 0x4cd6944c5cc20b6dULL;
        z = (z ^ (z >> 29)) * 0xfc12c5b19d3259e9ULL;
        return z ^ (z >> 32);
    }

    leader_mixer_fn current_mixer = &mix09;
}

std::uint64_t leader_mix(std::uint64_t r) noexcept { return current_mixer(r); }

leader_mixer_fn set_leader_mixer(leader_mixer_fn fn) noexcept
{
    auto old = current_mixer;
    current_mixer = fn ? fn : &mix09;
    return old;
}

address_t leader_at(const committee_t &w, round_t r)
{
    if (w.empty())
        throw contract_violation("leader of an empty committee");
    // flat_map keys are already in address order
    return (w.begin() + static_cast<std::ptrdiff_t>(leader_mix(r) % w.size()))->first;
}

std::optional<certificate_t> anchor_at(round_t r, const dag_t &dag, const committee_view &view)
{
    const auto *w = view.active(r);
    if (!w || w->empty())
        return std::nullopt;
    return cert_with_author_round(leader_at(*w, r), r, dag).certificate;
}

bool is_anchor(const certificate_t &c, const dag_t &dag, const committee_view &view)
{
    if (!dag.contains(c))
        return false;
    const auto *w = view.active(c.round());
    return w && !w->empty() && leader_at(*w, c.round()) == c.author();
}

bool is_anchor(const certificate_t &c, const dag_t &dag, const blockchain_t &chain, const protocol_params_t &params)
{
    return is_anchor(c, dag, committee_view{chain, params});
}

bool is_elected(const certificate_t &c, const dag_t &dag, const committee_view &view)
{
    const auto *w = view.active(c.round() + 1);
    if (!w)
        return false;
    auto stake = members_stake_checked(voters_for(c, dag), *w);
    return stake && *stake > max_faulty_stake(*w);
}

bool is_elected(const certificate_t &c, const dag_t &dag, const blockchain_t &chain, const protocol_params_t &params)
{
    return is_elected(c, dag, committee_view{chain, params});
}

std::optional<certificate_t> previous_anchor(const certificate_t &c, const dag_t &dag, const committee_view &view)
{
    if (!is_anchor(c, dag, view))
        throw contract_violation("previous anchor of " + label(c) + ", which is not an anchor");
    for (round_t r = c.round(); r > 2;) {
        r -= 2;
        const auto *w = view.active(r);
        if (!w || w->empty())
            continue;
        const auto leader = leader_at(*w, r);
        for (const auto &x: dag.round_certificates(r))
            if (x.author() == leader && has_path(c, x, dag))
                return x;
    }
    return std::nullopt;
}

std::optional<certificate_t> previous_anchor(const certificate_t &c, const dag_t &dag, const blockchain_t &chain,
                                             const protocol_params_t &params)
{
    return previous_anchor(c, dag, committee_view{chain, params});
}

anchor_sequence_t collect_anchors(const certificate_t &c, round_t cutoff, const dag_t &dag, const committee_view &view)
{
    anchor_sequence_t reversed{c};
    auto prev = previous_anchor(c, dag, view);
    while (prev && cutoff < prev->round()) {
        reversed.push_back(*prev);
        prev = previous_anchor(*prev, dag, view);
    }
    return {reversed.rbegin(), reversed.rend()};
}

anchor_sequence_t collect_anchors(const certificate_t &c, round_t cutoff, const dag_t &dag, const blockchain_t &chain,
                                  const protocol_params_t &params)
{
    return collect_anchors(c, cutoff, dag, committee_view{chain, params});
}

std::vector<certificate_t> order_certs(const cert_set_t &certs)
{
    // the set is already in (round, author, rest) order
    return {certs.begin(), certs.end()};
}

std::vector<transaction_t> collect_transactions(const std::vector<certificate_t> &certs)
{
    std::vector<transaction_t> out;
    for (const auto &c: certs)
        out.insert(out.end(), c.transactions().begin(), c.transactions().end());
    return out;
}

std::pair<blockchain_t, cert_set_t> extend_blockchain(const anchor_sequence_t &anchors, const dag_t &dag,
                                                      blockchain_t chain, cert_set_t committed)
{
    for (const auto &c: anchors) {
        auto history = causal_history_ptr(c, dag);
        cert_set_t fresh;
        std::set_difference(history->begin(), history->end(), committed.begin(), committed.end(),
                            std::inserter(fresh, fresh.end()));
        chain.push_back(block_t{c.round(), collect_transactions(order_certs(fresh))});
        committed = *history;
    }
    return {std::move(chain), std::move(committed)};
}

std::optional<certificate_t> last_anchor(const validator_state_t &v, const protocol_params_t &params)
{
    if (v.last == 0)
        return std::nullopt;
    return anchor_at(v.last, v.dag, committee_view{v.blockchain, params});
}

anchor_sequence_t collect_all_anchors(const validator_state_t &v, const protocol_params_t &params)
{
    committee_view view{v.blockchain, params};
    if (v.last == 0)
        return {};
    auto c = anchor_at(v.last, v.dag, view);
    if (!c)
        return {};
    return collect_anchors(*c, 0, v.dag, view);
}

} // namespace dagbft
