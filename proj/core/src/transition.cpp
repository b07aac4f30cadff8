#include <dagbft/transition.hpp>

#include <dagbft/dag.hpp>
#include <dagbft/errors.hpp>

namespace dagbft {

namespace {
    std::string who(const address_t &a, round_t r) { return a.value + "@" + std::to_string(r); }

    // Checks a correct endorser q runs before signing: newness, and for rounds
    // past the first, closure and quorum of the previous authors.
    enabled_result_t endorser_checks(const certificate_t &c, const address_t &q, const validator_state_t &vq,
                                     const protocol_params_t &params)
    {
        if (!is_new(c.author(), c.round(), vq))
            return enabled_result_t::fail(premise::endorser_newness, q.value + " already has or endorsed " +
                                                                         who(c.author(), c.round()));
        if (c.round() != 1) {
            if (!is_closed(c.previous(), c.round() - 1, vq.dag))
                return enabled_result_t::fail(premise::endorser_closure,
                                              q.value + " lacks some previous certificate");
            if (!is_quorum(c.previous(), c.round() - 1, vq.blockchain, params))
                return enabled_result_t::fail(premise::endorser_previous_quorum,
                                              "previous authors are not a quorum for " + q.value);
        }
        return enabled_result_t::ok();
    }

    enabled_result_t all_endorser_checks(const certificate_t &c, const system_state_t &s,
                                         const protocol_params_t &params)
    {
        for (const auto &q: c.endorsers()) {
            auto it = s.validators.find(q);
            if (it == s.validators.end())
                continue;
            if (auto r = endorser_checks(c, q, it->second, params); !r)
                return r;
        }
        return enabled_result_t::ok();
    }

    bool has_correct_endorser(const certificate_t &c, const system_state_t &s)
    {
        for (const auto &q: c.endorsers())
            if (s.is_correct(q))
                return true;
        return false;
    }

    validator_state_t &mut(system_state_t &s, const address_t &a) { return s.validators.find(a)->second; }

    void require(const enabled_result_t &r, const event_t &e)
    {
        if (!r)
            throw contract_violation("event not enabled: " + describe(e) + " (" + *r.failed_premise +
                                     (r.detail.empty() ? "" : ": " + r.detail) + ")");
    }
}

enabled_result_t create_possible(const certificate_t &c, const system_state_t &s, const protocol_params_t &params)
{
    const auto &a = c.author();
    const auto r = c.round();
    auto it = s.validators.find(a);
    if (it == s.validators.end()) {
        // faulty author: only the correct endorsers' checks apply
        if (has_correct_endorser(c, s) && (r == 1) != c.previous().empty())
            return enabled_result_t::fail(premise::round_one_previous);
        return all_endorser_checks(c, s, params);
    }
    const auto &v = it->second;
    if (v.round != r)
        return enabled_result_t::fail(premise::round_match,
                                      a.value + " is at round " + std::to_string(v.round) + ", not " +
                                          std::to_string(r));
    if ((r == 1) != c.previous().empty())
        return enabled_result_t::fail(premise::round_one_previous);
    if (cert_with_author_round(a, r, v.dag).certificate)
        return enabled_result_t::fail(premise::unique_author_round, who(a, r));
    if (r != 1) {
        if (!is_closed(c.previous(), r - 1, v.dag))
            return enabled_result_t::fail(premise::author_closure);
        if (!is_quorum(c.previous(), r - 1, v.blockchain, params))
            return enabled_result_t::fail(premise::author_previous_quorum);
    }
    if (c.endorsers().contains(a))
        return enabled_result_t::fail(premise::self_endorsement);
    if (!is_quorum(c.signers(), r, v.blockchain, params))
        return enabled_result_t::fail(premise::signer_quorum);
    return all_endorser_checks(c, s, params);
}

system_state_t create_next(const certificate_t &c, const system_state_t &s, const protocol_params_t &params)
{
    require(create_possible(c, s, params), create_event_t{c});
    system_state_t next = s;
    const bool correct_author = s.is_correct(c.author());
    if (correct_author) {
        auto &v = mut(next, c.author());
        v.dag = v.dag.insert(c);
    }
    for (const auto &q: c.endorsers())
        if (next.is_correct(q))
            mut(next, q).endorsed.insert(endorsed_pair_t{c.author(), c.round()});
    for (const auto &[a, _]: s.validators)
        if (!correct_author || a != c.author())
            next.network.insert(message_t{c, a});
    return next;
}

enabled_result_t accept_possible(const message_t &m, const system_state_t &s, const protocol_params_t &params)
{
    const auto &c = m.certificate;
    if (!s.network.contains(m))
        return enabled_result_t::fail(premise::in_network);
    auto it = s.validators.find(m.destination);
    if (it == s.validators.end())
        return enabled_result_t::fail(premise::correct_validator, m.destination.value);
    const auto &v = it->second;
    if (c.round() != 1 && !is_closed(c.previous(), c.round() - 1, v.dag))
        return enabled_result_t::fail(premise::closure, m.destination.value + " lacks some previous certificate");
    if (c.endorsers().contains(c.author()))
        return enabled_result_t::fail(premise::self_endorsement);
    if (!is_quorum(c.signers(), c.round(), v.blockchain, params))
        return enabled_result_t::fail(premise::signer_quorum);
    return enabled_result_t::ok();
}

system_state_t accept_next(const message_t &m, const system_state_t &s, const protocol_params_t &params)
{
    require(accept_possible(m, s, params), accept_event_t{m});
    system_state_t next = s;
    auto &v = mut(next, m.destination);
    v.dag = v.dag.insert(m.certificate);
    v.endorsed.erase(endorsed_pair_t{m.certificate.author(), m.certificate.round()});
    next.network.erase(m);
    return next;
}

enabled_result_t advance_possible(const address_t &a, const system_state_t &s)
{
    if (!s.is_correct(a))
        return enabled_result_t::fail(premise::correct_validator, a.value);
    return enabled_result_t::ok();
}

system_state_t advance_next(const address_t &a, const system_state_t &s)
{
    require(advance_possible(a, s), advance_event_t{a});
    system_state_t next = s;
    mut(next, a).round += 1;
    return next;
}

namespace {
    struct commit_plan_t {
        enabled_result_t result;
        std::optional<certificate_t> anchor;
    };

    commit_plan_t plan_commit(const address_t &a, const system_state_t &s, const committee_view &view)
    {
        const auto &v = s.validators.find(a)->second;
        if (v.round % 2 == 0 || v.round == 1)
            return {enabled_result_t::fail(premise::odd_round, "round " + std::to_string(v.round)), {}};
        const round_t r = v.round - 1;
        if (v.last >= r)
            return {enabled_result_t::fail(premise::uncommitted, "last " + std::to_string(v.last)), {}};
        auto c = anchor_at(r, v.dag, view);
        if (!c)
            return {enabled_result_t::fail(premise::anchor, "no anchor at round " + std::to_string(r)), {}};
        if (!is_elected(*c, v.dag, view))
            return {enabled_result_t::fail(premise::election, label(*c) + " is not elected"), {}};
        return {enabled_result_t::ok(), c};
    }
}

enabled_result_t commit_possible(const address_t &a, const system_state_t &s, const protocol_params_t &params)
{
    auto it = s.validators.find(a);
    if (it == s.validators.end())
        return enabled_result_t::fail(premise::correct_validator, a.value);
    // cheap premises first, so the committee view is only built when needed
    const auto &v = it->second;
    if (v.round % 2 == 0 || v.round == 1)
        return enabled_result_t::fail(premise::odd_round, "round " + std::to_string(v.round));
    return plan_commit(a, s, committee_view{v.blockchain, params}).result;
}

anchor_sequence_t commit_anchors(const address_t &a, const system_state_t &s, const protocol_params_t &params)
{
    auto it = s.validators.find(a);
    if (it == s.validators.end())
        return {};
    const auto &v = it->second;
    committee_view view{v.blockchain, params};
    auto plan = plan_commit(a, s, view);
    if (!plan.result)
        return {};
    return collect_anchors(*plan.anchor, v.last, v.dag, view);
}

system_state_t commit_next(const address_t &a, const system_state_t &s, const protocol_params_t &params)
{
    require(commit_possible(a, s, params), commit_event_t{a});
    system_state_t next = s;
    auto &v = mut(next, a);
    auto anchors = commit_anchors(a, s, params);
    auto [chain, committed] = extend_blockchain(anchors, v.dag, std::move(v.blockchain), std::move(v.committed));
    v.last = anchors.back().round();
    v.blockchain = std::move(chain);
    v.committed = std::move(committed);
    return next;
}

enabled_result_t event_possible(const event_t &e, const system_state_t &s, const protocol_params_t &params)
{
    return std::visit([&](const auto &ev) {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, create_event_t>)
            return create_possible(ev.certificate, s, params);
        else if constexpr (std::is_same_v<T, accept_event_t>)
            return accept_possible(ev.message, s, params);
        else if constexpr (std::is_same_v<T, advance_event_t>)
            return advance_possible(ev.validator, s);
        else
            return commit_possible(ev.validator, s, params);
    }, e);
}

system_state_t event_next(const event_t &e, const system_state_t &s, const protocol_params_t &params)
{
    return std::visit([&](const auto &ev) {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, create_event_t>)
            return create_next(ev.certificate, s, params);
        else if constexpr (std::is_same_v<T, accept_event_t>)
            return accept_next(ev.message, s, params);
        else if constexpr (std::is_same_v<T, advance_event_t>)
            return advance_next(ev.validator, s);
        else
            return commit_next(ev.validator, s, params);
    }, e);
}

run_result_t run_events(const system_state_t &s0, const std::vector<event_t> &events, const protocol_params_t &params)
{
    run_result_t out;
    out.states.reserve(events.size() + 1);
    out.states.push_back(s0);
    for (std::size_t i = 0; i < events.size(); ++i) {
        auto r = event_possible(events[i], out.states.back(), params);
        if (!r) {
            out.failed_at = i;
            out.failure = std::move(r);
            break;
        }
        out.states.push_back(event_next(events[i], out.states.back(), params));
    }
    return out;
}

std::string describe(const event_t &e)
{
    return std::visit([](const auto &ev) -> std::string {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, create_event_t>)
            return "create " + label(ev.certificate);
        else if constexpr (std::is_same_v<T, accept_event_t>)
            return "accept " + label(ev.message.certificate) + " at " + ev.message.destination.value;
        else if constexpr (std::is_same_v<T, advance_event_t>)
            return "advance " + ev.validator.value;
        else
            return "commit " + ev.validator.value;
    }, e);
}

} // namespace dagbft
