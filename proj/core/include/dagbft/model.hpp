#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/container/flat_map.hpp>
#include <boost/container/flat_set.hpp>

#include <dagbft/digest.hpp>

namespace dagbft {

// Round numbers start at 1; 0 is used only where "no round yet" is meaningful
// (the last committed round of a validator, the round of an empty blockchain).
using round_t = std::uint64_t;
// Stake amounts. Committee entries are >= 1; sums go through checked_add.
using stake_t = std::uint64_t;

template<typename T>
using set_t = boost::container::flat_set<T>;

template<typename K, typename V>
using map_t = boost::container::flat_map<K, V>;

// Opaque validator identifier; stands in for a public key.
struct address_t {
    std::string value;

    explicit address_t(std::string v);

    auto operator<=>(const address_t &) const = default;
    bool operator==(const address_t &) const = default;
};

using address_set_t = set_t<address_t>;

struct bond_t {
    address_t validator;
    stake_t stake;

    auto operator<=>(const bond_t &) const = default;
    bool operator==(const bond_t &) const = default;
};

struct unbond_t {
    address_t validator;

    auto operator<=>(const unbond_t &) const = default;
    bool operator==(const unbond_t &) const = default;
};

// Never inspected by protocol logic; the payload lets tests track transactions.
struct other_t {
    std::string payload;

    auto operator<=>(const other_t &) const = default;
    bool operator==(const other_t &) const = default;
};

using transaction_t = std::variant<bond_t, unbond_t, other_t>;

struct block_t {
    round_t round;
    std::vector<transaction_t> transactions;

    auto operator<=>(const block_t &) const = default;
    bool operator==(const block_t &) const = default;
};

// Oldest block first.
using blockchain_t = std::vector<block_t>;

// A DAG vertex. Immutable; copies share one body, and the content digest is
// computed once at construction.
class certificate_t {
public:
    certificate_t(address_t author, round_t round, std::vector<transaction_t> transactions,
                  address_set_t previous, address_set_t endorsers);

    const address_t &author() const noexcept { return _body->author; }
    round_t round() const noexcept { return _body->round; }
    const std::vector<transaction_t> &transactions() const noexcept { return _body->transactions; }
    const address_set_t &previous() const noexcept { return _body->previous; }
    const address_set_t &endorsers() const noexcept { return _body->endorsers; }
    const digest_t &digest() const noexcept { return _body->digest; }

    // author plus endorsers
    address_set_t signers() const;

    // Total order: round, author, then the remaining fields. Equality is structural.
    std::strong_ordering operator<=>(const certificate_t &o) const;
    bool operator==(const certificate_t &o) const;

private:
    struct body {
        address_t author;
        round_t round;
        std::vector<transaction_t> transactions;
        address_set_t previous;
        address_set_t endorsers;
        digest_t digest;
    };
    std::shared_ptr<const body> _body;
};

using cert_set_t = set_t<certificate_t>;

struct endorsed_pair_t {
    address_t author;
    round_t round;

    auto operator<=>(const endorsed_pair_t &) const = default;
    bool operator==(const endorsed_pair_t &) const = default;
};

using endorsed_set_t = set_t<endorsed_pair_t>;

// A set of certificates with derived lookup indexes. Values are immutable and
// cheap to copy; insert() returns a new DAG. Causal histories are memoized per
// DAG value, so every insertion starts with an empty memo.
class dag_t {
public:
    dag_t();

    bool empty() const noexcept;
    std::size_t size() const noexcept;
    bool contains(const certificate_t &c) const;
    const cert_set_t &certificates() const noexcept;

    // Certificates of one round, in certificate order.
    std::span<const certificate_t> round_certificates(round_t r) const;
    // Certificates with the given author and round; more than one only if the
    // DAG holds an equivocation.
    std::vector<certificate_t> find(const address_t &author, round_t r) const;
    // 0 for the empty DAG.
    round_t max_round() const noexcept;

    // Inserting an existing certificate yields an equal DAG.
    [[nodiscard]] dag_t insert(const certificate_t &c) const;

    // Memo hooks used by the causal history query.
    std::shared_ptr<const cert_set_t> cached_history(const certificate_t &c) const;
    void store_history(const certificate_t &c, std::shared_ptr<const cert_set_t> history) const;

    const digest_t &digest() const noexcept;

    bool operator==(const dag_t &o) const;

private:
    struct impl;
    static std::shared_ptr<const impl> empty_impl();
    std::shared_ptr<const impl> _impl;
};

struct message_t {
    certificate_t certificate;
    address_t destination;

    auto operator<=>(const message_t &) const = default;
    bool operator==(const message_t &) const = default;
};

using network_t = set_t<message_t>;

struct validator_state_t {
    round_t round = 1;
    dag_t dag;
    endorsed_set_t endorsed;
    round_t last = 0;
    blockchain_t blockchain;
    cert_set_t committed;

    bool operator==(const validator_state_t &) const = default;
};

using committee_t = map_t<address_t, stake_t>;

struct system_state_t {
    // Domain is the fixed set of correct validators.
    map_t<address_t, validator_state_t> validators;
    network_t network;

    bool operator==(const system_state_t &) const = default;

    bool is_correct(const address_t &a) const { return validators.contains(a); }
    const validator_state_t &at(const address_t &a) const;
    address_set_t correct_addresses() const;
};

struct create_event_t {
    certificate_t certificate;
    auto operator<=>(const create_event_t &) const = default;
    bool operator==(const create_event_t &) const = default;
};

struct accept_event_t {
    message_t message;
    auto operator<=>(const accept_event_t &) const = default;
    bool operator==(const accept_event_t &) const = default;
};

struct advance_event_t {
    address_t validator;
    auto operator<=>(const advance_event_t &) const = default;
    bool operator==(const advance_event_t &) const = default;
};

struct commit_event_t {
    address_t validator;
    auto operator<=>(const commit_event_t &) const = default;
    bool operator==(const commit_event_t &) const = default;
};

using event_t = std::variant<create_event_t, accept_event_t, advance_event_t, commit_event_t>;

enum class event_kind : std::uint8_t { create, accept, advance, commit };

event_kind kind_of(const event_t &e) noexcept;
std::string_view kind_name(event_kind k) noexcept;
std::optional<event_kind> parse_event_kind(std::string_view name) noexcept;

// Initial state for the given correct validators. Throws config_error when empty.
system_state_t initial_state(const address_set_t &correct);

std::strong_ordering compare_addresses(const address_t &a, const address_t &b) noexcept;

// Throws std::overflow_error instead of wrapping.
stake_t checked_add(stake_t a, stake_t b);

// "author@round"
std::string label(const certificate_t &c);

// Digest of a whole system state. Certificates and DAGs enter through their
// own cached digests, so this is cheap enough to compute after every event.
digest_t state_digest(const system_state_t &s);

} // namespace dagbft
