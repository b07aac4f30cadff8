#pragma once

#include <nlohmann/json.hpp>

#include <dagbft/model.hpp>

// Canonical structured-text encoding of the model types. Field names and
// field order are fixed, and sets are written in their sorted order, so
// encoding equal values always produces identical text.
namespace dagbft::codec {

using json = nlohmann::ordered_json;

json encode(const address_t &a);
json encode(const transaction_t &x);
json encode(const block_t &b);
json encode(const blockchain_t &chain);
json encode(const certificate_t &c);
json encode(const endorsed_pair_t &d);
json encode(const dag_t &g);
json encode(const message_t &m);
json encode(const validator_state_t &v);
json encode(const committee_t &w);
json encode(const system_state_t &s);
json encode(const event_t &e);
json encode(const address_set_t &addrs);

// Decoders throw config_error with the offending field named.
address_t decode_address(const json &j);
address_set_t decode_address_set(const json &j);
transaction_t decode_transaction(const json &j);
block_t decode_block(const json &j);
blockchain_t decode_blockchain(const json &j);
certificate_t decode_certificate(const json &j);
endorsed_pair_t decode_endorsed_pair(const json &j);
dag_t decode_dag(const json &j);
message_t decode_message(const json &j);
validator_state_t decode_validator_state(const json &j);
committee_t decode_committee(const json &j);
system_state_t decode_system_state(const json &j);
event_t decode_event(const json &j);

} // namespace dagbft::codec
