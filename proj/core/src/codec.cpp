#include <dagbft/codec.hpp>

#include <dagbft/errors.hpp>

namespace dagbft::codec {

namespace {
    const json &field(const json &j, const char *name)
    {
        if (!j.is_object())
            throw config_error(std::string{"expected an object holding '"} + name + "'");
        auto it = j.find(name);
        if (it == j.end())
            throw config_error(std::string{"missing field '"} + name + "'");
        return *it;
    }

    std::uint64_t get_u64(const json &j, const char *name)
    {
        const auto &v = field(j, name);
        if (!v.is_number_unsigned())
            throw config_error(std::string{"field '"} + name + "' must be a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::string get_string(const json &j, const char *name)
    {
        const auto &v = field(j, name);
        if (!v.is_string())
            throw config_error(std::string{"field '"} + name + "' must be a string");
        return v.get<std::string>();
    }

    const json &get_array(const json &j, const char *name)
    {
        const auto &v = field(j, name);
        if (!v.is_array())
            throw config_error(std::string{"field '"} + name + "' must be an array");
        return v;
    }

    round_t positive_round(std::uint64_t r, const char *what)
    {
        if (r == 0)
            throw config_error(std::string{what} + " must be >= 1");
        return r;
    }

    std::vector<transaction_t> decode_transactions(const json &arr)
    {
        std::vector<transaction_t> out;
        out.reserve(arr.size());
        for (const auto &x: arr)
            out.push_back(decode_transaction(x));
        return out;
    }

    json encode_transactions(const std::vector<transaction_t> &txs)
    {
        json arr = json::array();
        for (const auto &x: txs)
            arr.push_back(encode(x));
        return arr;
    }

    json encode_certs(const cert_set_t &certs)
    {
        json arr = json::array();
        for (const auto &c: certs)
            arr.push_back(encode(c));
        return arr;
    }
}

json encode(const address_t &a) { return a.value; }

json encode(const address_set_t &addrs)
{
    json arr = json::array();
    for (const auto &a: addrs)
        arr.push_back(a.value);
    return arr;
}

json encode(const transaction_t &x)
{
    return std::visit([](const auto &t) -> json {
        using T = std::decay_t<decltype(t)>;
        json j;
        if constexpr (std::is_same_v<T, bond_t>) {
            j["kind"] = "bond";
            j["validator"] = t.validator.value;
            j["stake"] = t.stake;
        } else if constexpr (std::is_same_v<T, unbond_t>) {
            j["kind"] = "unbond";
            j["validator"] = t.validator.value;
        } else {
            j["kind"] = "other";
            j["payload"] = t.payload;
        }
        return j;
    }, x);
}

json encode(const block_t &b)
{
    json j;
    j["round"] = b.round;
    j["transactions"] = encode_transactions(b.transactions);
    return j;
}

json encode(const blockchain_t &chain)
{
    json arr = json::array();
    for (const auto &b: chain)
        arr.push_back(encode(b));
    return arr;
}

json encode(const certificate_t &c)
{
    json j;
    j["author"] = c.author().value;
    j["round"] = c.round();
    j["transactions"] = encode_transactions(c.transactions());
    j["previous"] = encode(c.previous());
    j["endorsers"] = encode(c.endorsers());
    return j;
}

json encode(const endorsed_pair_t &d)
{
    json j;
    j["author"] = d.author.value;
    j["round"] = d.round;
    return j;
}

json encode(const dag_t &g) { return encode_certs(g.certificates()); }

json encode(const message_t &m)
{
    json j;
    j["certificate"] = encode(m.certificate);
    j["destination"] = m.destination.value;
    return j;
}

json encode(const validator_state_t &v)
{
    json j;
    j["round"] = v.round;
    j["dag"] = encode(v.dag);
    json endorsed = json::array();
    for (const auto &d: v.endorsed)
        endorsed.push_back(encode(d));
    j["endorsed"] = std::move(endorsed);
    j["last"] = v.last;
    j["blockchain"] = encode(v.blockchain);
    j["committed"] = encode_certs(v.committed);
    return j;
}

json encode(const committee_t &w)
{
    json j = json::object();
    for (const auto &[a, k]: w)
        j[a.value] = k;
    return j;
}

json encode(const system_state_t &s)
{
    json j;
    json validators = json::object();
    for (const auto &[a, v]: s.validators)
        validators[a.value] = encode(v);
    j["validators"] = std::move(validators);
    json network = json::array();
    for (const auto &m: s.network)
        network.push_back(encode(m));
    j["network"] = std::move(network);
    return j;
}

json encode(const event_t &e)
{
    json j;
    j["kind"] = std::string{kind_name(kind_of(e))};
    std::visit([&](const auto &ev) {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, create_event_t>)
            j["certificate"] = encode(ev.certificate);
        else if constexpr (std::is_same_v<T, accept_event_t>)
            j["message"] = encode(ev.message);
        else
            j["validator"] = ev.validator.value;
    }, e);
    return j;
}

address_t decode_address(const json &j)
{
    if (!j.is_string())
        throw config_error("address must be a string");
    return address_t{j.get<std::string>()};
}

address_set_t decode_address_set(const json &j)
{
    if (!j.is_array())
        throw config_error("address set must be an array");
    address_set_t out;
    for (const auto &a: j)
        if (!out.insert(decode_address(a)).second)
            throw config_error("duplicate address in set: " + a.get<std::string>());
    return out;
}

transaction_t decode_transaction(const json &j)
{
    const auto kind = get_string(j, "kind");
    if (kind == "bond") {
        const auto stake = get_u64(j, "stake");
        if (stake == 0)
            throw config_error("bond stake must be >= 1");
        return bond_t{address_t{get_string(j, "validator")}, stake};
    }
    if (kind == "unbond")
        return unbond_t{address_t{get_string(j, "validator")}};
    if (kind == "other")
        return other_t{get_string(j, "payload")};
    throw config_error("unknown transaction kind '" + kind + "'");
}

block_t decode_block(const json &j)
{
    return block_t{positive_round(get_u64(j, "round"), "block round"),
                   decode_transactions(get_array(j, "transactions"))};
}

blockchain_t decode_blockchain(const json &j)
{
    if (!j.is_array())
        throw config_error("blockchain must be an array");
    blockchain_t out;
    for (const auto &b: j)
        out.push_back(decode_block(b));
    return out;
}

certificate_t decode_certificate(const json &j)
{
    return certificate_t{address_t{get_string(j, "author")},
                         positive_round(get_u64(j, "round"), "certificate round"),
                         decode_transactions(get_array(j, "transactions")),
                         decode_address_set(get_array(j, "previous")),
                         decode_address_set(get_array(j, "endorsers"))};
}

endorsed_pair_t decode_endorsed_pair(const json &j)
{
    return endorsed_pair_t{address_t{get_string(j, "author")},
                           positive_round(get_u64(j, "round"), "endorsed round")};
}

dag_t decode_dag(const json &j)
{
    if (!j.is_array())
        throw config_error("dag must be an array");
    dag_t g;
    for (const auto &c: j)
        g = g.insert(decode_certificate(c));
    return g;
}

message_t decode_message(const json &j)
{
    return message_t{decode_certificate(field(j, "certificate")), address_t{get_string(j, "destination")}};
}

validator_state_t decode_validator_state(const json &j)
{
    validator_state_t v;
    v.round = positive_round(get_u64(j, "round"), "validator round");
    v.dag = decode_dag(field(j, "dag"));
    for (const auto &d: get_array(j, "endorsed"))
        v.endorsed.insert(decode_endorsed_pair(d));
    v.last = get_u64(j, "last");
    v.blockchain = decode_blockchain(field(j, "blockchain"));
    for (const auto &c: get_array(j, "committed"))
        v.committed.insert(decode_certificate(c));
    return v;
}

committee_t decode_committee(const json &j)
{
    if (!j.is_object())
        throw config_error("committee must be an object mapping address to stake");
    committee_t w;
    for (const auto &[a, k]: j.items()) {
        if (!k.is_number_unsigned() || k.get<std::uint64_t>() == 0)
            throw config_error("stake of '" + a + "' must be a positive integer");
        w.insert_or_assign(address_t{a}, k.get<std::uint64_t>());
    }
    return w;
}

system_state_t decode_system_state(const json &j)
{
    system_state_t s;
    const auto &validators = field(j, "validators");
    if (!validators.is_object())
        throw config_error("'validators' must be an object");
    for (const auto &[a, v]: validators.items())
        s.validators.insert_or_assign(address_t{a}, decode_validator_state(v));
    for (const auto &m: get_array(j, "network"))
        s.network.insert(decode_message(m));
    return s;
}

event_t decode_event(const json &j)
{
    const auto kind = get_string(j, "kind");
    if (kind == "create")
        return create_event_t{decode_certificate(field(j, "certificate"))};
    if (kind == "accept")
        return accept_event_t{decode_message(field(j, "message"))};
    if (kind == "advance")
        return advance_event_t{address_t{get_string(j, "validator")}};
    if (kind == "commit")
        return commit_event_t{address_t{get_string(j, "validator")}};
    throw config_error("unknown event kind '" + kind + "'");
}

} // namespace dagbft::codec
