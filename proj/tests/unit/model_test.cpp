#include <doctest.h>

#include <random>

#include <dagbft/errors.hpp>
#include <dagbft/model.hpp>

#include "figures.hpp"

using namespace dagbft;
using namespace dagbft::figures;

TEST_SUITE("core-model") {

TEST_CASE("initial state of one validator")
{
    auto s = initial_state(addrs({"v1"}));
    REQUIRE(s.validators.size() == 1);
    const auto &v = s.at(addr("v1"));
    CHECK(v.round == 1);
    CHECK(v.dag.empty());
    CHECK(v.endorsed.empty());
    CHECK(v.last == 0);
    CHECK(v.blockchain.empty());
    CHECK(v.committed.empty());
    CHECK(s.network.empty());
}

TEST_CASE("initial state of four validators is uniform")
{
    auto s = initial_state(addrs({"v1", "v2", "v3", "v4"}));
    CHECK(s.validators.size() == 4);
    for (const auto &[a, v]: s.validators)
        CHECK(v == validator_state_t{});
    CHECK(s.network.empty());
    CHECK(s.correct_addresses() == addrs({"v1", "v2", "v3", "v4"}));
}

TEST_CASE("initial state rejects an empty validator set")
{
    CHECK_THROWS_AS(initial_state({}), config_error);
}

TEST_CASE("address comparison is lexicographic")
{
    CHECK(compare_addresses(addr("v1"), addr("v2")) == std::strong_ordering::less);
    CHECK(compare_addresses(addr("v2"), addr("v2")) == std::strong_ordering::equal);
    CHECK(compare_addresses(addr("v10"), addr("v2")) == std::strong_ordering::less);
}

TEST_CASE("address order is a strict total order on random triples")
{
    std::mt19937_64 rng(7);
    auto random_addr = [&] {
        std::string s;
        const auto n = 1 + rng() % 4;
        for (std::size_t i = 0; i < n; ++i)
            s.push_back(static_cast<char>('a' + rng() % 3));
        return address_t{s};
    };
    for (int i = 0; i < 2000; ++i) {
        const auto a = random_addr(), b = random_addr(), c = random_addr();
        CHECK_FALSE(std::is_lt(compare_addresses(a, a)));
        // totality: exactly one of <, =, >
        const auto ab = compare_addresses(a, b);
        CHECK(((ab < 0) + (ab == 0) + (ab > 0)) == 1);
        CHECK((ab == 0) == (a.value == b.value));
        if (compare_addresses(a, b) < 0 && compare_addresses(b, c) < 0)
            CHECK(std::is_lt(compare_addresses(a, c)));
    }
}

TEST_CASE("certificate equality is structural")
{
    const auto c = cert("v1", 2, {"v2", "v3"}, {"v4"}, "x");
    CHECK(c == cert("v1", 2, {"v3", "v2"}, {"v4"}, "x"));
    CHECK(c != cert("v1", 2, {"v2", "v3"}, {"v4"}, "y"));
    CHECK(c != cert("v1", 2, {"v2"}, {"v4"}, "x"));
    CHECK(c != cert("v1", 2, {"v2", "v3"}, {"v2"}, "x"));
    CHECK(c.digest() == cert("v1", 2, {"v3", "v2"}, {"v4"}, "x").digest());
    CHECK(c.digest() != cert("v1", 2, {"v2", "v3"}, {"v4"}, "y").digest());
    CHECK(c.signers() == addrs({"v1", "v4"}));
}

TEST_CASE("dag insertion has set semantics")
{
    const auto c1 = cert("v1", 1, {}, {"v2"}, "a");
    const auto c2 = cert("v2", 1, {}, {"v1"}, "b");
    dag_t g;
    const auto once = g.insert(c1);
    const auto twice = once.insert(c1);
    CHECK(once == twice);
    CHECK(once.digest() == twice.digest());
    CHECK(twice.size() == 1);
    const auto both = twice.insert(c2);
    CHECK(both.size() == 2);
    CHECK(both == dag_t{}.insert(c2).insert(c1));
    CHECK(both.digest() == dag_t{}.insert(c2).insert(c1).digest());
    CHECK(g.empty());   // values are immutable
}

TEST_CASE("dag indexes agree with the certificate set")
{
    const auto c1 = cert("v1", 1, {}, {"v2"}, "a");
    const auto c2 = cert("v2", 1, {}, {"v1"}, "b");
    const auto c3 = cert("v1", 2, {"v1", "v2"}, {"v2"}, "c");
    const auto c4 = cert("v1", 2, {"v1", "v2"}, {"v2"}, "d");
    const auto g = dag_t{}.insert(c3).insert(c1).insert(c2).insert(c4);
    CHECK(g.max_round() == 2);
    CHECK(g.round_certificates(1).size() == 2);
    CHECK(g.round_certificates(3).empty());
    CHECK(g.find(addr("v1"), 2).size() == 2);
    CHECK(g.find(addr("v2"), 2).empty());
    CHECK(g.contains(c4));
    CHECK_FALSE(g.contains(cert("v9", 1, {}, {}, "")));
}

TEST_CASE("network is a set of messages")
{
    auto s = initial_state(addrs({"v1", "v2"}));
    const auto c = cert("v1", 1, {}, {"v2"}, "a");
    s.network.insert(message_t{c, addr("v2")});
    s.network.insert(message_t{c, addr("v2")});
    CHECK(s.network.size() == 1);
}

TEST_CASE("stake sums do not wrap")
{
    CHECK(checked_add(1, 2) == 3);
    CHECK_THROWS_AS(checked_add(std::numeric_limits<stake_t>::max(), 1), std::overflow_error);
}

TEST_CASE("state digests separate states")
{
    auto s = initial_state(addrs({"v1", "v2"}));
    auto t = s;
    CHECK(state_digest(s) == state_digest(t));
    t.validators.find(addr("v1"))->second.round = 2;
    CHECK(state_digest(s) != state_digest(t));
    auto u = s;
    u.validators.find(addr("v2"))->second.round = 2;
    CHECK(state_digest(t) != state_digest(u));
}

TEST_CASE("event kinds")
{
    CHECK(kind_of(event_t{advance_event_t{addr("v1")}}) == event_kind::advance);
    CHECK(kind_of(event_t{commit_event_t{addr("v1")}}) == event_kind::commit);
    for (auto k: {event_kind::create, event_kind::accept, event_kind::advance, event_kind::commit})
        CHECK(parse_event_kind(kind_name(k)) == k);
    CHECK_FALSE(parse_event_kind("bogus"));
    CHECK(label(cert("v3", 7, {"v1"}, {}, "")) == "v3@7");
}

}
