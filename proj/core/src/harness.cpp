#include <dagbft/harness.hpp>

#include <algorithm>

#include <dagbft/codec.hpp>
#include <dagbft/committee.hpp>
#include <dagbft/dag.hpp>
#include <dagbft/errors.hpp>
#include <dagbft/transition.hpp>

namespace dagbft {

namespace {
    std::uint64_t draw(rng_t &rng, std::uint64_t n) { return n == 0 ? 0 : rng() % n; }

    double unit(rng_t &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

    template<typename T>
    void shuffle(std::vector<T> &xs, rng_t &rng)
    {
        // spelled out so traces do not depend on the standard library's shuffle
        for (std::size_t i = xs.size(); i > 1; --i)
            std::swap(xs[i - 1], xs[draw(rng, i)]);
    }

    address_set_t authors_at(round_t r, const dag_t &dag)
    {
        address_set_t out;
        for (const auto &c: dag.round_certificates(r))
            out.insert(c.author());
        return out;
    }

    std::string joined(const address_set_t &addrs)
    {
        std::string out;
        for (const auto &a: addrs)
            out += (out.empty() ? "" : ",") + a.value;
        return out;
    }

    // Whether correct validator q would endorse a certificate by `author` at
    // round r with the given previous authors.
    bool would_endorse(const address_t &author, round_t r, const address_set_t &prev, const validator_state_t &vq,
                       const committee_view &view)
    {
        if (!is_new(author, r, vq))
            return false;
        if (r == 1)
            return true;
        return is_closed(prev, r - 1, vq.dag) && view.is_quorum(prev, r - 1);
    }

    struct views_t {
        map_t<address_t, committee_view> by_validator;

        views_t(const system_state_t &s, const protocol_params_t &params)
        {
            for (const auto &[a, v]: s.validators)
                by_validator.emplace(a, committee_view{v.blockchain, params});
        }

        const committee_view &at(const address_t &a) const { return by_validator.at(a); }
    };

    // Adds members in order until the signers reach the quorum stake.
    std::optional<address_set_t> fill_quorum(stake_t start, const std::vector<address_t> &order, const committee_t &w)
    {
        const auto need = quorum_stake(w);
        stake_t have = start;
        address_set_t chosen;
        for (const auto &q: order) {
            if (have >= need)
                break;
            chosen.insert(q);
            have = checked_add(have, w.at(q));
        }
        if (have < need)
            return std::nullopt;
        return chosen;
    }

    void correct_candidates(const address_t &a, const validator_state_t &v, const system_state_t &s,
                            const scenario_t &sc, const views_t &views, rng_t *rng, std::vector<event_t> &out)
    {
        const round_t r = v.round;
        if (cert_with_author_round(a, r, v.dag).certificate)
            return;
        const auto &view = views.at(a);
        address_set_t prev;
        if (r != 1) {
            prev = authors_at(r - 1, v.dag);
            if (prev.empty() || !view.is_quorum(prev, r - 1))
                return;
        }
        const auto *w = view.active(r);
        if (!w || !w->contains(a))
            return;

        std::vector<address_t> eligible;
        for (const auto &[q, _]: *w) {
            if (q == a)
                continue;
            auto it = s.validators.find(q);
            if (it == s.validators.end() || would_endorse(a, r, prev, it->second, views.at(q)))
                eligible.push_back(q);
        }
        auto make = [&](const address_set_t &endorsers) {
            out.push_back(create_event_t{certificate_t{a, r, proposal_transactions(a, r, sc), prev, endorsers}});
        };

        auto greedy = eligible;
        std::stable_sort(greedy.begin(), greedy.end(),
                         [&](const address_t &x, const address_t &y) { return w->at(x) > w->at(y); });
        const auto own = w->at(a);
        auto first = fill_quorum(own, greedy, *w);
        if (first)
            make(*first);
        if (rng) {
            auto random = eligible;
            shuffle(random, *rng);
            if (auto second = fill_quorum(own, random, *w); second && second != first)
                make(*second);
        }
    }

    bool already_sent(const certificate_t &c, const system_state_t &s)
    {
        for (const auto &[a, v]: s.validators)
            if (v.dag.contains(c) || s.network.contains(message_t{c, a}))
                return true;
        return false;
    }
}

std::vector<transaction_t> proposal_transactions(const address_t &a, round_t r, const scenario_t &sc)
{
    std::vector<transaction_t> txs{other_t{"tx:" + a.value + "@" + std::to_string(r)}};
    if (!sc.dynamic_stake)
        return txs;
    hasher h;
    h.tag('P').u64(sc.seed).str(a.value).u64(r);
    const auto d = h.finish();
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i)
        x = (x << 8) | d.bytes[i];
    // Stake only moves towards correct validators: bonds go to correct
    // validators and unbonds remove faulty ones, so the faulty share of any
    // committee can only shrink.
    switch (x % 8) {
        case 0:
        case 1: {
            auto it = sc.correct.begin() + static_cast<std::ptrdiff_t>((x >> 8) % sc.correct.size());
            txs.push_back(bond_t{*it, 1 + (x >> 16) % 3});
            break;
        }
        case 2:
            if (!sc.faulty.empty()) {
                auto it = sc.faulty.begin() + static_cast<std::ptrdiff_t>((x >> 8) % sc.faulty.size());
                txs.push_back(unbond_t{*it});
            }
            break;
        default:
            break;
    }
    return txs;
}

std::vector<event_t> adversary_propose(adversary_strategy strategy, const system_state_t &s, const scenario_t &sc)
{
    std::vector<event_t> out;
    if (strategy == adversary_strategy::none || sc.faulty.empty())
        return out;
    const auto params = sc.params();
    const views_t views{s, params};
    round_t lo = sc.max_round, hi = 1;
    for (const auto &[_, v]: s.validators) {
        lo = std::min(lo, v.round);
        hi = std::max(hi, v.round);
    }
    hi = std::min(hi, sc.max_round);

    for (const auto &f: sc.faulty)
        for (round_t r = lo; r <= hi; ++r) {
            // committee as seen by the first correct validator that can compute it
            const committee_t *w = nullptr;
            for (const auto &[a, _]: s.validators)
                if ((w = views.at(a).active(r)))
                    break;
            if (!w)
                continue;
            const stake_t own = w->contains(f) ? w->at(f) : 0;
            const stake_t need = quorum_stake(*w);

            // correct members that could endorse at r, and those of them that
            // have not yet signed or seen (f, r)
            std::vector<address_t> eligible;
            address_set_t fresh_set;
            for (const auto &[q, vq]: s.validators)
                if (w->contains(q) && (r == 1 || !authors_at(r - 1, vq.dag).empty())) {
                    eligible.push_back(q);
                    if (is_new(f, r, vq))
                        fresh_set.insert(q);
                }
            std::vector<address_t> fresh;
            for (const auto &q: eligible)
                if (fresh_set.contains(q))
                    fresh.push_back(q);

            auto previous_for = [&](const address_set_t &group) -> std::optional<address_set_t> {
                if (r == 1)
                    return address_set_t{};
                std::optional<address_set_t> common;
                for (const auto &q: group) {
                    auto mine = authors_at(r - 1, s.at(q).dag);
                    if (!common) {
                        common = std::move(mine);
                        continue;
                    }
                    address_set_t both;
                    std::set_intersection(common->begin(), common->end(), mine.begin(), mine.end(),
                                          std::inserter(both, both.end()));
                    common = std::move(both);
                }
                if (!common || common->empty())
                    return std::nullopt;
                return common;
            };

            auto propose = [&](const std::string &tag, const address_set_t &endorsers,
                               std::optional<address_set_t> prev) {
                if (!prev)
                    return;
                certificate_t c{f, r, {other_t{tag + ":" + f.value + "@" + std::to_string(r) + "/" + joined(endorsers)}},
                                *prev, endorsers};
                if (!already_sent(c, s))
                    out.push_back(create_event_t{std::move(c)});
            };

            if (strategy == adversary_strategy::equivocate) {
                // disjoint endorser groups over all eligible members (fixed, so
                // later variants stay on offer), each closed as soon as it
                // completes a quorum
                std::vector<address_set_t> groups;
                address_set_t current;
                stake_t have = own;
                for (const auto &q: eligible) {
                    current.insert(q);
                    have = checked_add(have, w->at(q));
                    if (have >= need) {
                        groups.push_back(std::move(current));
                        current.clear();
                        have = own;
                    }
                }
                if (!current.empty())
                    groups.push_back(std::move(current));
                if (groups.size() == 1 && groups.front().size() > 1) {
                    address_set_t a, b;
                    std::size_t i = 0;
                    for (const auto &q: groups.front())
                        (i++ % 2 == 0 ? a : b).insert(q);
                    groups = {a, b};
                }
                if (groups.size() < 2)
                    continue;
                for (const auto &g: groups)
                    if (std::ranges::all_of(g, [&](const address_t &q) { return fresh_set.contains(q); }))
                        propose("eqv", g, previous_for(g));
            } else {
                propose("uq", {}, r == 1 ? address_set_t{} : address_set_t{f});
                for (const auto &q: fresh)
                    if (own + w->at(q) < need) {
                        propose("uq", {q}, previous_for({q}));
                        break;
                    }
            }
        }
    return out;
}

std::vector<event_t> enabled_events(const system_state_t &s, const scenario_t &sc, rng_t *rng)
{
    const auto params = sc.params();
    const views_t views{s, params};
    std::vector<event_t> out;
    for (const auto &[a, v]: s.validators)
        if (v.round < sc.max_round)
            out.push_back(advance_event_t{a});
    for (const auto &[a, _]: s.validators)
        if (commit_possible(a, s, params))
            out.push_back(commit_event_t{a});
    for (const auto &m: s.network)
        if (accept_possible(m, s, params))
            out.push_back(accept_event_t{m});

    std::vector<event_t> creates;
    for (const auto &[a, v]: s.validators)
        correct_candidates(a, v, s, sc, views, rng, creates);
    auto adversarial = adversary_propose(sc.adversary, s, sc);
    creates.insert(creates.end(), adversarial.begin(), adversarial.end());
    for (auto &e: creates)
        if (event_possible(e, s, params))
            out.push_back(std::move(e));

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {
    std::vector<std::string> anchor_labels(const anchor_sequence_t &anchors)
    {
        std::vector<std::string> out;
        for (const auto &c: anchors)
            out.push_back(label(c));
        return out;
    }

    // Applies events one by one, keeping digests, fault tolerance and checks.
    class recorder {
    public:
        explicit recorder(const scenario_t &sc): params{sc.params()}
        {
            t.scenario = sc;
            s = initial_state(sc.correct);
            ft = is_fault_tolerant(s, params);
            t.ft_throughout = ft;
        }

        void apply(const event_t &e)
        {
            trace_step_t step{e, {}, false, {}};
            if (const auto *c = std::get_if<commit_event_t>(&e))
                step.anchors = anchor_labels(commit_anchors(c->validator, s, params));
            s = event_next(e, s, params);
            ft = ft && is_fault_tolerant(s, params);
            step.state_digest = state_digest(s);
            step.ft = ft;
            t.steps.push_back(std::move(step));
        }

        void check()
        {
            auto report = check_all(s, params, ft);
            ++t.checked_states;
            for (auto &v: report.failures)
                t.violations.push_back({t.steps.size(), false, std::move(v)});
            for (auto &v: report.expected)
                t.violations.push_back({t.steps.size(), true, std::move(v)});
        }

        trace_t finish()
        {
            t.final_state = std::move(s);
            t.ft_throughout = ft;
            return std::move(t);
        }

        protocol_params_t params;
        system_state_t s;
        bool ft;
        trace_t t;
    };

    bool due(std::size_t step, std::size_t every) { return every != 0 && step % every == 0; }
}

trace_t run_random(const scenario_t &sc)
{
    validate(sc);
    recorder rec{sc};
    rng_t rng{sc.seed};
    if (due(0, sc.check_every))
        rec.check();
    std::array<std::vector<const event_t *>, 4> by_kind;
    for (std::size_t i = 0; i < sc.max_events; ++i) {
        auto events = enabled_events(rec.s, sc, &rng);
        for (auto &k: by_kind)
            k.clear();
        // with progress_bias, a validator that has no certificate for its
        // round, or could commit, only advances when nothing else is enabled:
        // skipped rounds starve the next round of its quorum, and a validator
        // without commits loses its committee past the lookback horizon
        std::vector<const event_t *> unready;
        for (const auto &e: events) {
            if (const auto *adv = std::get_if<advance_event_t>(&e); adv && sc.progress_bias) {
                const auto &v = rec.s.at(adv->validator);
                if (!cert_with_author_round(adv->validator, v.round, v.dag).certificate ||
                    commit_possible(adv->validator, rec.s, rec.params)) {
                    unready.push_back(&e);
                    continue;
                }
            }
            by_kind[static_cast<std::size_t>(kind_of(e))].push_back(&e);
        }
        if (std::all_of(by_kind.begin(), by_kind.end(), [](const auto &k) { return k.empty(); }))
            by_kind[static_cast<std::size_t>(event_kind::advance)] = std::move(unready);
        double total = 0;
        for (std::size_t k = 0; k < 4; ++k)
            if (!by_kind[k].empty())
                total += sc.weights[k];
        if (total <= 0)
            break;
        double u = unit(rng) * total;
        std::size_t kind = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            if (by_kind[k].empty() || sc.weights[k] <= 0)
                continue;
            kind = k;
            if (u < sc.weights[k])
                break;
            u -= sc.weights[k];
        }
        const auto &pool = by_kind[kind];
        rec.apply(*pool[draw(rng, pool.size())]);
        if (due(i + 1, sc.check_every))
            rec.check();
    }
    if (sc.check_every != 0 && !due(rec.t.steps.size(), sc.check_every))
        rec.check();
    return rec.finish();
}

trace_t run_script(const scenario_t &sc, const std::vector<event_t> &events)
{
    recorder rec{sc};
    if (due(0, sc.check_every))
        rec.check();
    for (std::size_t i = 0; i < events.size(); ++i) {
        auto r = event_possible(events[i], rec.s, rec.params);
        if (!r) {
            rec.t.halted = "scripted event " + std::to_string(i + 1) + " (" + describe(events[i]) +
                           ") is not enabled: " + *r.failed_premise + (r.detail.empty() ? "" : " (" + r.detail + ")");
            break;
        }
        rec.apply(events[i]);
        if (due(i + 1, sc.check_every))
            rec.check();
    }
    if (sc.check_every != 0 && !due(rec.t.steps.size(), sc.check_every))
        rec.check();
    return rec.finish();
}

trace_t run_scenario(const scenario_t &sc)
{
    if (sc.script)
        return run_script(sc, *sc.script);
    return run_random(sc);
}

std::optional<trace_t> build_trace(const scenario_t &sc, const std::vector<event_t> &events, std::size_t check_every)
{
    auto copy = sc;
    copy.check_every = check_every;
    auto t = run_script(copy, events);
    if (!t.halted.empty())
        return std::nullopt;
    return t;
}

namespace {
    std::string first_difference(const system_state_t &a, const system_state_t &b)
    {
        for (const auto &[addr, v]: a.validators) {
            auto it = b.validators.find(addr);
            if (it == b.validators.end())
                return "validator " + addr.value + " missing from the recorded state";
            const auto &w = it->second;
            const std::string who = "validator " + addr.value + ": ";
            if (v.round != w.round)
                return who + "round";
            if (!(v.dag == w.dag))
                return who + "dag";
            if (v.endorsed != w.endorsed)
                return who + "endorsed";
            if (v.last != w.last)
                return who + "last";
            if (v.blockchain != w.blockchain)
                return who + "blockchain";
            if (v.committed != w.committed)
                return who + "committed";
        }
        if (a.validators.size() != b.validators.size())
            return "set of correct validators";
        if (a.network != b.network)
            return "network";
        return "none";
    }
}

replay_result_t replay(const trace_t &t)
{
    const auto params = t.scenario.params();
    auto s = initial_state(t.scenario.correct);
    bool ft = is_fault_tolerant(s, params);
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const auto &step = t.steps[i];
        auto r = event_possible(step.event, s, params);
        if (!r)
            return {false, i + 1, describe(step.event) + " is not enabled: " + *r.failed_premise};
        std::vector<std::string> anchors;
        if (const auto *c = std::get_if<commit_event_t>(&step.event))
            anchors = anchor_labels(commit_anchors(c->validator, s, params));
        s = event_next(step.event, s, params);
        ft = ft && is_fault_tolerant(s, params);
        if (state_digest(s) != step.state_digest)
            return {false, i + 1, "state digest differs after " + describe(step.event)};
        if (ft != step.ft)
            return {false, i + 1, "fault-tolerance flag differs"};
        if (anchors != step.anchors)
            return {false, i + 1, "committed anchors differ"};
    }
    if (!(s == t.final_state))
        return {false, 0, "final state differs: " + first_difference(s, t.final_state)};
    if (ft != t.ft_throughout)
        return {false, 0, "fault-tolerance flag of the trace differs"};
    return {};
}

namespace {
    bool exhibits(const scenario_t &sc, const std::vector<event_t> &events, invariant_id id)
    {
        const auto params = sc.params();
        auto s = initial_state(sc.correct);
        for (const auto &e: events) {
            if (!event_possible(e, s, params))
                return false;
            s = event_next(e, s, params);
        }
        return !check_invariant(id, s, params).empty();
    }
}

minimize_result_t minimize(const trace_t &t, invariant_id violated)
{
    auto events = t.events();
    if (!exhibits(t.scenario, events, violated))
        return {t, false, 0};
    std::size_t removed = 0;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = events.size(); i-- > 0;) {
            auto candidate = events;
            candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(i));
            if (exhibits(t.scenario, candidate, violated)) {
                events = std::move(candidate);
                ++removed;
                changed = true;
            }
        }
    }
    auto sc = t.scenario;
    if (sc.script)
        sc.script = events;
    auto rebuilt = build_trace(sc, events);
    return {std::move(*rebuilt), true, removed};
}

} // namespace dagbft
