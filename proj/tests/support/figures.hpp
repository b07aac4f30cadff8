#pragma once

#include <optional>
#include <string>
#include <vector>

#include <dagbft/committee.hpp>
#include <dagbft/model.hpp>
#include <dagbft/scenario.hpp>

// Scripted executions shared by unit tests, the acceptance binary and the
// scenario generator.
namespace dagbft::figures {

// --- bonded/active committee example ---

struct committee_schedule_t {
    committee_t genesis, a, b, c;
    blockchain_t chain;   // blocks at rounds 2, 4 and 10 installing a, b, c
    round_t lookback = 4;

    protocol_params_t params() const { return {genesis, lookback}; }
};

committee_schedule_t committee_schedule();

// --- committed/skipped anchor example ---

// Rows of the drawing, top to bottom, as validator addresses. The relabeling
// makes the leader schedule put the anchors where the drawing has them.
const std::vector<address_t> &anchor_rows();
address_t anchor_row(int row);   // 1-based

// (round, row) pairs of the certificates present in the drawing
struct figure_cert_t {
    round_t round;
    int row;
    std::vector<int> previous_rows;   // rows at round - 1
};
const std::vector<figure_cert_t> &anchor_figure_certs();

// The certificate the script creates for a drawn one; the next two rows
// (cyclically) endorse it.
certificate_t figure_certificate(const figure_cert_t &fc);
// nullopt where the drawing has no certificate
std::optional<certificate_t> figure_certificate(round_t r, int row);
// Every drawn certificate.
dag_t anchor_figure_dag();

// The validator whose DAG the drawing shows; the only one that commits.
address_t anchor_observer();

// Per round: advance everybody, create the drawing's certificates, deliver
// every message; the observer commits at rounds 3 and 11.
scenario_t anchor_commitment_scenario();

// Same execution cut right after the given round's deliveries (and commit).
std::vector<event_t> anchor_events_through(round_t last_round);

// --- equivocation fork ---

// genesis {v1: 1, v2: 1, f3: 4}; f3 leads round 2 and feeds v1 and v2
// different certificates until they commit different blocks.
scenario_t equivocation_fork_scenario();
// The same scenario scheduled randomly with the equivocating adversary.
scenario_t equivocation_random_scenario(std::uint64_t seed);

// --- small helpers ---

address_t addr(const std::string &s);
address_set_t addrs(std::initializer_list<const char *> xs);
committee_t committee(std::initializer_list<std::pair<const char *, stake_t>> xs);
certificate_t cert(const char *author, round_t r, std::initializer_list<const char *> previous,
                   std::initializer_list<const char *> endorsers, const std::string &payload = {});

} // namespace dagbft::figures
