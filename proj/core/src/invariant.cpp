#include <dagbft/invariant.hpp>

#include <algorithm>
#include <map>

#include <dagbft/anchor.hpp>
#include <dagbft/dag.hpp>

namespace dagbft {

const std::array<invariant_id, invariant_count> all_invariants = {
    invariant_id::last_block_round,     invariant_id::ordered_block_rounds,   invariant_id::even_block_rounds,
    invariant_id::backward_closure,     invariant_id::signer_quorum,          invariant_id::signer_records,
    invariant_id::no_self_endorsement,  invariant_id::signed_nonequivocation, invariant_id::dag_nonequivocation,
    invariant_id::signed_previous_quorum, invariant_id::dag_previous_quorum,  invariant_id::last_anchor_presence,
    invariant_id::last_anchor_voters,   invariant_id::anchor_paths,           invariant_id::anchor_nonforking,
    invariant_id::committed_redundancy, invariant_id::blockchain_redundancy,  invariant_id::blockchain_nonforking,
    invariant_id::committee_agreement,
};

std::string_view invariant_name(invariant_id id) noexcept
{
    switch (id) {
        case invariant_id::last_block_round: return "last-block-round";
        case invariant_id::ordered_block_rounds: return "ordered-block-rounds";
        case invariant_id::even_block_rounds: return "even-block-rounds";
        case invariant_id::backward_closure: return "backward-closure";
        case invariant_id::signer_quorum: return "signer-quorum";
        case invariant_id::signer_records: return "signer-records";
        case invariant_id::no_self_endorsement: return "no-self-endorsement";
        case invariant_id::signed_nonequivocation: return "signed-nonequivocation";
        case invariant_id::dag_nonequivocation: return "dag-nonequivocation";
        case invariant_id::signed_previous_quorum: return "signed-previous-quorum";
        case invariant_id::dag_previous_quorum: return "dag-previous-quorum";
        case invariant_id::last_anchor_presence: return "last-anchor-presence";
        case invariant_id::last_anchor_voters: return "last-anchor-voters";
        case invariant_id::anchor_paths: return "anchor-paths";
        case invariant_id::anchor_nonforking: return "anchor-nonforking";
        case invariant_id::committed_redundancy: return "committed-redundancy";
        case invariant_id::blockchain_redundancy: return "blockchain-redundancy";
        case invariant_id::blockchain_nonforking: return "blockchain-nonforking";
        case invariant_id::committee_agreement: return "committee-agreement";
    }
    return "?";
}

std::optional<invariant_id> parse_invariant(std::string_view name) noexcept
{
    for (auto id: all_invariants)
        if (invariant_name(id) == name)
            return id;
    return std::nullopt;
}

bool is_ft_only(invariant_id id) noexcept
{
    switch (id) {
        case invariant_id::dag_nonequivocation:
        case invariant_id::dag_previous_quorum:
        case invariant_id::anchor_paths:
        case invariant_id::anchor_nonforking:
        case invariant_id::committed_redundancy:
        case invariant_id::blockchain_redundancy:
        case invariant_id::blockchain_nonforking:
        case invariant_id::committee_agreement:
            return true;
        default:
            return false;
    }
}

address_set_t faulty_members(const committee_t &w, const system_state_t &s)
{
    address_set_t out;
    for (const auto &[a, _]: w)
        if (!s.is_correct(a))
            out.insert(a);
    return out;
}

namespace {
    // Rounds past this bound have no defined active committee for this chain.
    round_t committee_horizon(const committee_view &view) { return view.last() + 2 + view.lookback(); }

    bool ft_under(const committee_t &w, const system_state_t &s)
    {
        return members_stake(faulty_members(w, s), w) <= max_faulty_stake(w);
    }
}

bool is_fault_tolerant(const system_state_t &s, const protocol_params_t &params)
{
    if (!ft_under(params.genesis, s))
        return false;
    for (const auto &[a, v]: s.validators) {
        committee_view view{v.blockchain, params};
        const committee_t *seen = &view.genesis();
        for (round_t r = 1; r <= committee_horizon(view); ++r) {
            const auto *w = view.active(r);
            if (!w || w == seen)
                continue;
            seen = w;
            if (!ft_under(*w, s))
                return false;
        }
    }
    return true;
}

cert_set_t all_certs(const system_state_t &s)
{
    std::vector<certificate_t> all;
    for (const auto &[_, v]: s.validators)
        all.insert(all.end(), v.dag.certificates().begin(), v.dag.certificates().end());
    for (const auto &m: s.network)
        all.push_back(m.certificate);
    return cert_set_t(all.begin(), all.end());
}

cert_set_t signed_certs(const address_t &a, const system_state_t &s)
{
    cert_set_t out;
    for (const auto &c: all_certs(s))
        if (c.author() == a || c.endorsers().contains(a))
            out.insert(out.end(), c);
    return out;
}

namespace {
    std::string vw(const address_t &a) { return "validator:" + a.value; }
    std::string cw(const certificate_t &c) { return "cert:" + label(c); }
    std::string bw(const address_t &a, std::size_t i) { return "block:" + a.value + "#" + std::to_string(i); }

    template<typename T>
    bool is_prefix(const std::vector<T> &a, const std::vector<T> &b)
    {
        return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
    }

    // Lazily computed per-state facts shared by the checkers.
    class context {
    public:
        context(const system_state_t &s, const protocol_params_t &params): s{s}, params{params}
        {
            for (const auto &[a, v]: s.validators)
                _views.emplace(a, committee_view{v.blockchain, params});
        }

        const system_state_t &s;
        const protocol_params_t &params;

        const committee_view &view(const address_t &a) const { return _views.at(a); }

        const cert_set_t &certs()
        {
            if (!_certs)
                _certs = all_certs(s);
            return *_certs;
        }

        bool signed_by(const address_t &a, const certificate_t &c) const
        {
            return c.author() == a || c.endorsers().contains(a);
        }

        // isLastAnch: anchors at round last(v) in v's DAG.
        const std::vector<certificate_t> &last_anchors(const address_t &a)
        {
            auto it = _last.find(a);
            if (it != _last.end())
                return it->second;
            std::vector<certificate_t> out;
            const auto &v = s.at(a);
            if (v.last != 0)
                for (const auto &c: v.dag.round_certificates(v.last))
                    if (is_anchor(c, v.dag, view(a)))
                        out.push_back(c);
            return _last.emplace(a, std::move(out)).first->second;
        }

        const anchor_sequence_t &all_anchors(const address_t &a)
        {
            auto it = _all.find(a);
            if (it != _all.end())
                return it->second;
            anchor_sequence_t out;
            const auto &last = last_anchors(a);
            if (!last.empty())
                out = collect_anchors(last.front(), 0, s.at(a).dag, view(a));
            return _all.emplace(a, std::move(out)).first->second;
        }

    private:
        // node-based: callers hold references across lookups
        std::map<address_t, committee_view> _views;
        std::optional<cert_set_t> _certs;
        std::map<address_t, std::vector<certificate_t>> _last;
        std::map<address_t, anchor_sequence_t> _all;
    };

    using out_t = std::vector<violation_t>;

    void check_last_block_round(context &cx, out_t &out)
    {
        for (const auto &[a, v]: cx.s.validators)
            if (v.last != last_block_round(v.blockchain))
                out.push_back({invariant_id::last_block_round, {vw(a)},
                               "last " + std::to_string(v.last) + " but newest block round " +
                                   std::to_string(last_block_round(v.blockchain))});
    }

    void check_ordered_block_rounds(context &cx, out_t &out)
    {
        for (const auto &[a, v]: cx.s.validators)
            for (std::size_t i = 1; i < v.blockchain.size(); ++i)
                if (v.blockchain[i - 1].round >= v.blockchain[i].round)
                    out.push_back({invariant_id::ordered_block_rounds, {vw(a), bw(a, i - 1), bw(a, i)},
                                   "block rounds do not strictly increase"});
    }

    void check_even_block_rounds(context &cx, out_t &out)
    {
        for (const auto &[a, v]: cx.s.validators)
            for (std::size_t i = 0; i < v.blockchain.size(); ++i)
                if (v.blockchain[i].round % 2 != 0)
                    out.push_back({invariant_id::even_block_rounds, {vw(a), bw(a, i)},
                                   "odd block round " + std::to_string(v.blockchain[i].round)});
    }

    void check_backward_closure(context &cx, out_t &out)
    {
        for (const auto &[a, v]: cx.s.validators)
            for (const auto &c: v.dag.certificates())
                for (const auto &p: c.previous())
                    if (c.round() == 1 || !cert_with_author_round(p, c.round() - 1, v.dag).certificate)
                        out.push_back({invariant_id::backward_closure, {vw(a), cw(c)},
                                       "missing previous certificate by " + p.value});
    }

    void check_signer_quorum(context &cx, out_t &out)
    {
        for (const auto &[a, v]: cx.s.validators)
            for (const auto &c: v.dag.certificates())
                if (!cx.view(a).is_quorum(c.signers(), c.round()))
                    out.push_back({invariant_id::signer_quorum, {vw(a), cw(c)}, "signers are not a quorum"});
    }

    void check_signer_records(context &cx, out_t &out)
    {
        for (const auto &c: cx.certs())
            for (const auto &[a, v]: cx.s.validators) {
                if (!cx.signed_by(a, c))
                    continue;
                if (cert_with_author_round(c.author(), c.round(), v.dag).certificate ||
                    v.endorsed.contains(endorsed_pair_t{c.author(), c.round()}))
                    continue;
                out.push_back({invariant_id::signer_records, {vw(a), cw(c)}, "signer keeps no record"});
            }
    }

    void check_no_self_endorsement(context &cx, out_t &out)
    {
        for (const auto &[a, v]: cx.s.validators)
            for (const auto &d: v.endorsed)
                if (d.author == a)
                    out.push_back({invariant_id::no_self_endorsement, {vw(a)},
                                   "endorsed pair for own round " + std::to_string(d.round)});
    }

    // Groups of two or more distinct certificates sharing author and round.
    template<typename F>
    void for_each_equivocation(const cert_set_t &certs, F &&f)
    {
        // sets are ordered by (round, author) first, so groups are contiguous
        for (auto it = certs.begin(); it != certs.end();) {
            auto end = std::find_if(it, certs.end(), [&](const certificate_t &x) {
                return x.round() != it->round() || x.author() != it->author();
            });
            if (std::distance(it, end) > 1)
                f(it, end);
            it = end;
        }
    }

    void check_signed_nonequivocation(context &cx, out_t &out)
    {
        for_each_equivocation(cx.certs(), [&](auto first, auto last) {
            for (const auto &[a, _]: cx.s.validators) {
                std::vector<std::string> w{vw(a)};
                for (auto it = first; it != last; ++it)
                    if (cx.signed_by(a, *it))
                        w.push_back(cw(*it));
                if (w.size() > 2)
                    out.push_back({invariant_id::signed_nonequivocation, std::move(w),
                                   "validator signed equivocal certificates"});
            }
        });
    }

    void check_dag_nonequivocation(context &cx, out_t &out)
    {
        std::vector<certificate_t> in_dags;
        for (const auto &[_, v]: cx.s.validators)
            in_dags.insert(in_dags.end(), v.dag.certificates().begin(), v.dag.certificates().end());
        cert_set_t certs(in_dags.begin(), in_dags.end());
        for_each_equivocation(certs, [&](auto first, auto last) {
            std::vector<std::string> w;
            for (const auto &[a, v]: cx.s.validators)
                for (auto it = first; it != last; ++it)
                    if (v.dag.contains(*it))
                        w.push_back(vw(a) + "/" + cw(*it));
            out.push_back({invariant_id::dag_nonequivocation, std::move(w),
                           "distinct certificates for " + first->author().value + "@" +
                               std::to_string(first->round()) + " in validators' DAGs"});
        });
    }

    bool previous_ok(const certificate_t &c, const committee_view &view)
    {
        if (c.round() == 1)
            return c.previous().empty();
        return !c.previous().empty() && view.is_quorum(c.previous(), c.round() - 1);
    }

    void check_signed_previous_quorum(context &cx, out_t &out)
    {
        for (const auto &c: cx.certs())
            for (const auto &[a, _]: cx.s.validators)
                if (cx.signed_by(a, c) && !previous_ok(c, cx.view(a)))
                    out.push_back({invariant_id::signed_previous_quorum, {vw(a), cw(c)},
                                   "previous authors are not a non-empty quorum"});
    }

    void check_dag_previous_quorum(context &cx, out_t &out)
    {
        for (const auto &[a, v]: cx.s.validators)
            for (const auto &c: v.dag.certificates())
                if (!previous_ok(c, cx.view(a)))
                    out.push_back({invariant_id::dag_previous_quorum, {vw(a), cw(c)},
                                   "previous authors are not a non-empty quorum"});
    }

    void check_last_anchor_presence(context &cx, out_t &out)
    {
        for (const auto &[a, v]: cx.s.validators)
            if (v.last != 0 && cx.last_anchors(a).empty())
                out.push_back({invariant_id::last_anchor_presence, {vw(a)},
                               "no anchor at last round " + std::to_string(v.last)});
    }

    void check_last_anchor_voters(context &cx, out_t &out)
    {
        for (const auto &[a, v]: cx.s.validators)
            for (const auto &c: cx.last_anchors(a))
                if (!is_elected(c, v.dag, cx.view(a)))
                    out.push_back({invariant_id::last_anchor_voters, {vw(a), cw(c)},
                                   "last anchor lacks voters above the faulty stake"});
    }

    void check_anchor_paths(context &cx, out_t &out)
    {
        for (const auto &[a, _]: cx.s.validators)
            for (const auto &c: cx.last_anchors(a))
                for (const auto &[a2, v2]: cx.s.validators) {
                    if (v2.dag.max_round() < c.round() + 2)
                        continue;
                    const auto reach = reachers_of(c, v2.dag);
                    for (round_t r = c.round() + 2; r <= v2.dag.max_round(); ++r)
                        for (const auto &x: v2.dag.round_certificates(r))
                            if (!reach.contains(x))
                                out.push_back({invariant_id::anchor_paths, {vw(a), cw(c), vw(a2), cw(x)},
                                               "no path to the last anchor of " + a.value});
                }
    }

    void check_anchor_nonforking(context &cx, out_t &out)
    {
        for (auto i = cx.s.validators.begin(); i != cx.s.validators.end(); ++i)
            for (auto j = std::next(i); j != cx.s.validators.end(); ++j) {
                const auto &x = cx.all_anchors(i->first);
                const auto &y = cx.all_anchors(j->first);
                if (!is_prefix(x, y) && !is_prefix(y, x))
                    out.push_back({invariant_id::anchor_nonforking, {vw(i->first), vw(j->first)},
                                   "committed anchor sequences fork"});
            }
    }

    void check_committed_redundancy(context &cx, out_t &out)
    {
        for (const auto &[a, v]: cx.s.validators) {
            const auto &last = cx.last_anchors(a);
            bool ok = last.empty() ? v.committed.empty()
                                   : std::any_of(last.begin(), last.end(), [&](const certificate_t &c) {
                                         return *causal_history_ptr(c, v.dag) == v.committed;
                                     });
            if (!ok)
                out.push_back({invariant_id::committed_redundancy, {vw(a)},
                               "committed set is not the last anchor's causal history"});
        }
    }

    void check_blockchain_redundancy(context &cx, out_t &out)
    {
        for (const auto &[a, v]: cx.s.validators) {
            auto [chain, _] = extend_blockchain(cx.all_anchors(a), v.dag, {}, {});
            if (chain != v.blockchain)
                out.push_back({invariant_id::blockchain_redundancy, {vw(a)},
                               "blockchain differs from the one rebuilt from committed anchors"});
        }
    }

    void check_blockchain_nonforking(context &cx, out_t &out)
    {
        for (auto i = cx.s.validators.begin(); i != cx.s.validators.end(); ++i)
            for (auto j = std::next(i); j != cx.s.validators.end(); ++j) {
                const auto &x = i->second.blockchain;
                const auto &y = j->second.blockchain;
                if (is_prefix(x, y) || is_prefix(y, x))
                    continue;
                std::size_t k = 0;
                while (x[k] == y[k])
                    ++k;
                out.push_back({invariant_id::blockchain_nonforking,
                               {vw(i->first), vw(j->first), bw(i->first, k), bw(j->first, k)},
                               "blockchains fork at block " + std::to_string(k)});
            }
    }

    void check_committee_agreement(context &cx, out_t &out)
    {
        round_t horizon = 0;
        for (const auto &[a, _]: cx.s.validators)
            horizon = std::max(horizon, committee_horizon(cx.view(a)));
        for (auto i = cx.s.validators.begin(); i != cx.s.validators.end(); ++i)
            for (auto j = std::next(i); j != cx.s.validators.end(); ++j)
                for (round_t r = 1; r <= horizon; ++r) {
                    const auto *w1 = cx.view(i->first).active(r);
                    const auto *w2 = cx.view(j->first).active(r);
                    if (w1 && w2 && *w1 != *w2) {
                        out.push_back({invariant_id::committee_agreement, {vw(i->first), vw(j->first)},
                                       "different active committees at round " + std::to_string(r)});
                        break;
                    }
                }
    }

    void run(invariant_id id, context &cx, out_t &out)
    {
        switch (id) {
            case invariant_id::last_block_round: return check_last_block_round(cx, out);
            case invariant_id::ordered_block_rounds: return check_ordered_block_rounds(cx, out);
            case invariant_id::even_block_rounds: return check_even_block_rounds(cx, out);
            case invariant_id::backward_closure: return check_backward_closure(cx, out);
            case invariant_id::signer_quorum: return check_signer_quorum(cx, out);
            case invariant_id::signer_records: return check_signer_records(cx, out);
            case invariant_id::no_self_endorsement: return check_no_self_endorsement(cx, out);
            case invariant_id::signed_nonequivocation: return check_signed_nonequivocation(cx, out);
            case invariant_id::dag_nonequivocation: return check_dag_nonequivocation(cx, out);
            case invariant_id::signed_previous_quorum: return check_signed_previous_quorum(cx, out);
            case invariant_id::dag_previous_quorum: return check_dag_previous_quorum(cx, out);
            case invariant_id::last_anchor_presence: return check_last_anchor_presence(cx, out);
            case invariant_id::last_anchor_voters: return check_last_anchor_voters(cx, out);
            case invariant_id::anchor_paths: return check_anchor_paths(cx, out);
            case invariant_id::anchor_nonforking: return check_anchor_nonforking(cx, out);
            case invariant_id::committed_redundancy: return check_committed_redundancy(cx, out);
            case invariant_id::blockchain_redundancy: return check_blockchain_redundancy(cx, out);
            case invariant_id::blockchain_nonforking: return check_blockchain_nonforking(cx, out);
            case invariant_id::committee_agreement: return check_committee_agreement(cx, out);
        }
    }
}

std::vector<violation_t> check_invariant(invariant_id id, const system_state_t &s, const protocol_params_t &params)
{
    context cx{s, params};
    out_t out;
    run(id, cx, out);
    return out;
}

std::size_t check_report_t::holding() const
{
    std::size_t n = 0;
    for (auto id: all_invariants) {
        auto hit = [&](const violation_t &v) { return v.invariant == id; };
        if (std::none_of(failures.begin(), failures.end(), hit) && std::none_of(expected.begin(), expected.end(), hit))
            ++n;
    }
    return n;
}

check_report_t check_all(const system_state_t &s, const protocol_params_t &params, bool ft_known)
{
    context cx{s, params};
    check_report_t report;
    for (auto id: all_invariants) {
        out_t out;
        run(id, cx, out);
        auto &dest = (is_ft_only(id) && !ft_known) ? report.expected : report.failures;
        dest.insert(dest.end(), std::make_move_iterator(out.begin()), std::make_move_iterator(out.end()));
    }
    return report;
}

} // namespace dagbft
