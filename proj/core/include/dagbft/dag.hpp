#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <dagbft/model.hpp>

namespace dagbft {

cert_set_t certs_with_round(round_t r, const dag_t &dag);

struct author_round_lookup_t {
    std::optional<certificate_t> certificate;   // least match, if any
    bool ambiguous = false;                     // more than one match (equivocation)
};

author_round_lookup_t cert_with_author_round(const address_t &a, round_t r, const dag_t &dag);

bool is_edge(const certificate_t &c, const certificate_t &c2, const dag_t &dag);
bool has_path(const certificate_t &c, const certificate_t &c2, const dag_t &dag);

// Throws contract_violation if c is not in the DAG. Memoized per DAG value.
std::shared_ptr<const cert_set_t> causal_history_ptr(const certificate_t &c, const dag_t &dag);
cert_set_t causal_history(const certificate_t &c, const dag_t &dag);

// Certificates of the DAG that have a path to c (c included if present).
cert_set_t reachers_of(const certificate_t &c, const dag_t &dag);

bool is_closed(const address_set_t &prevs, round_t r, const dag_t &dag);
bool is_new(const address_t &a, round_t r, const validator_state_t &v);
address_set_t voters_for(const certificate_t &c, const dag_t &dag);

// Graphviz rendering: one node per certificate, one edge per DAG edge,
// certificates grouped into per-round columns.
std::string to_dot(const dag_t &dag, const std::string &name = "dag");

} // namespace dagbft
