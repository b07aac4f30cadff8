#include <dagbft/model.hpp>

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include <dagbft/errors.hpp>

namespace dagbft {

address_t::address_t(std::string v): value{std::move(v)}
{
    if (value.empty())
        throw config_error("address must be non-empty");
}

namespace {
    void hash_transaction(hasher &h, const transaction_t &tx)
    {
        std::visit([&](const auto &x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, bond_t>)
                h.tag('B').str(x.validator.value).u64(x.stake);
            else if constexpr (std::is_same_v<T, unbond_t>)
                h.tag('U').str(x.validator.value);
            else
                h.tag('O').str(x.payload);
        }, tx);
    }

    template<typename Set>
    std::strong_ordering compare_sets(const Set &a, const Set &b)
    {
        return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
    }
}

certificate_t::certificate_t(address_t author, round_t round, std::vector<transaction_t> transactions,
                             address_set_t previous, address_set_t endorsers)
{
    hasher h;
    h.tag('C').str(author.value).u64(round).u64(transactions.size());
    for (const auto &tx: transactions)
        hash_transaction(h, tx);
    h.u64(previous.size());
    for (const auto &p: previous)
        h.str(p.value);
    h.u64(endorsers.size());
    for (const auto &e: endorsers)
        h.str(e.value);
    _body = std::make_shared<const body>(body{std::move(author), round, std::move(transactions),
                                              std::move(previous), std::move(endorsers), h.finish()});
}

address_set_t certificate_t::signers() const
{
    address_set_t s = endorsers();
    s.insert(author());
    return s;
}

std::strong_ordering certificate_t::operator<=>(const certificate_t &o) const
{
    if (_body == o._body)
        return std::strong_ordering::equal;
    if (auto c = round() <=> o.round(); c != 0)
        return c;
    if (auto c = author() <=> o.author(); c != 0)
        return c;
    if (digest() == o.digest() && *this == o)
        return std::strong_ordering::equal;
    if (auto c = std::lexicographical_compare_three_way(transactions().begin(), transactions().end(),
                                                        o.transactions().begin(), o.transactions().end());
        c != 0)
        return c;
    if (auto c = compare_sets(previous(), o.previous()); c != 0)
        return c;
    return compare_sets(endorsers(), o.endorsers());
}

bool certificate_t::operator==(const certificate_t &o) const
{
    if (_body == o._body)
        return true;
    if (digest() != o.digest())
        return false;
    return round() == o.round() && author() == o.author() && transactions() == o.transactions()
           && previous() == o.previous() && endorsers() == o.endorsers();
}

std::string label(const certificate_t &c)
{
    return c.author().value + "@" + std::to_string(c.round());
}

struct dag_t::impl {
    cert_set_t certs;
    map_t<round_t, std::vector<certificate_t>> by_round;
    digest_t digest;

    mutable std::mutex memo_mutex;
    mutable std::unordered_map<digest_t, std::shared_ptr<const cert_set_t>, digest_hash> memo;

    void rehash()
    {
        hasher h;
        h.tag('G').u64(certs.size());
        for (const auto &c: certs)
            h.digest(c.digest());
        digest = h.finish();
    }
};

std::shared_ptr<const dag_t::impl> dag_t::empty_impl()
{
    static const std::shared_ptr<const impl> empty = [] {
        auto p = std::make_shared<impl>();
        p->rehash();
        return std::shared_ptr<const impl>{std::move(p)};
    }();
    return empty;
}

dag_t::dag_t(): _impl{empty_impl()} {}

bool dag_t::empty() const noexcept { return _impl->certs.empty(); }

std::size_t dag_t::size() const noexcept { return _impl->certs.size(); }

bool dag_t::contains(const certificate_t &c) const { return _impl->certs.contains(c); }

const cert_set_t &dag_t::certificates() const noexcept { return _impl->certs; }

std::span<const certificate_t> dag_t::round_certificates(round_t r) const
{
    auto it = _impl->by_round.find(r);
    if (it == _impl->by_round.end())
        return {};
    return it->second;
}

std::vector<certificate_t> dag_t::find(const address_t &author, round_t r) const
{
    std::vector<certificate_t> out;
    for (const auto &c: round_certificates(r))
        if (c.author() == author)
            out.push_back(c);
    return out;
}

round_t dag_t::max_round() const noexcept
{
    return _impl->by_round.empty() ? 0 : _impl->by_round.rbegin()->first;
}

dag_t dag_t::insert(const certificate_t &c) const
{
    if (contains(c))
        return *this;
    auto next = std::make_shared<impl>();
    next->certs = _impl->certs;
    next->certs.insert(c);
    next->by_round = _impl->by_round;
    auto &layer = next->by_round.try_emplace(c.round()).first->second;
    layer.insert(std::upper_bound(layer.begin(), layer.end(), c), c);
    next->rehash();
    dag_t out;
    out._impl = std::move(next);
    return out;
}

std::shared_ptr<const cert_set_t> dag_t::cached_history(const certificate_t &c) const
{
    std::lock_guard lock{_impl->memo_mutex};
    auto it = _impl->memo.find(c.digest());
    if (it == _impl->memo.end())
        return nullptr;
    return it->second;
}

void dag_t::store_history(const certificate_t &c, std::shared_ptr<const cert_set_t> history) const
{
    std::lock_guard lock{_impl->memo_mutex};
    _impl->memo.emplace(c.digest(), std::move(history));
}

const digest_t &dag_t::digest() const noexcept { return _impl->digest; }

bool dag_t::operator==(const dag_t &o) const
{
    if (_impl == o._impl)
        return true;
    return _impl->digest == o._impl->digest && _impl->certs == o._impl->certs;
}

digest_t state_digest(const system_state_t &s)
{
    hasher h;
    h.tag('S').u64(s.validators.size());
    for (const auto &[a, v]: s.validators) {
        h.str(a.value).u64(v.round).u64(v.last).digest(v.dag.digest());
        h.u64(v.endorsed.size());
        for (const auto &d: v.endorsed)
            h.str(d.author.value).u64(d.round);
        h.u64(v.blockchain.size());
        for (const auto &b: v.blockchain) {
            h.u64(b.round).u64(b.transactions.size());
            for (const auto &tx: b.transactions)
                hash_transaction(h, tx);
        }
        h.u64(v.committed.size());
        for (const auto &c: v.committed)
            h.digest(c.digest());
    }
    h.tag('N').u64(s.network.size());
    for (const auto &m: s.network)
        h.digest(m.certificate.digest()).str(m.destination.value);
    return h.finish();
}

const validator_state_t &system_state_t::at(const address_t &a) const
{
    auto it = validators.find(a);
    if (it == validators.end())
        throw contract_violation("no correct validator with address " + a.value);
    return it->second;
}

address_set_t system_state_t::correct_addresses() const
{
    address_set_t out;
    for (const auto &[a, _]: validators)
        out.insert(a);
    return out;
}

event_kind kind_of(const event_t &e) noexcept
{
    return static_cast<event_kind>(e.index());
}

std::string_view kind_name(event_kind k) noexcept
{
    switch (k) {
        case event_kind::create: return "create";
        case event_kind::accept: return "accept";
        case event_kind::advance: return "advance";
        case event_kind::commit: return "commit";
    }
    return "?";
}

std::optional<event_kind> parse_event_kind(std::string_view name) noexcept
{
    for (auto k: {event_kind::create, event_kind::accept, event_kind::advance, event_kind::commit})
        if (kind_name(k) == name)
            return k;
    return std::nullopt;
}

system_state_t initial_state(const address_set_t &correct)
{
    if (correct.empty())
        throw config_error("the set of correct validators must be non-empty");
    system_state_t s;
    for (const auto &a: correct)
        s.validators.emplace(a, validator_state_t{});
    return s;
}

std::strong_ordering compare_addresses(const address_t &a, const address_t &b) noexcept
{
    return a <=> b;
}

stake_t checked_add(stake_t a, stake_t b)
{
    stake_t out;
    if (__builtin_add_overflow(a, b, &out))
        throw std::overflow_error("stake sum overflows 64 bits");
    return out;
}

} // namespace dagbft
