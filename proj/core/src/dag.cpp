#include <dagbft/dag.hpp>

#include <sstream>

#include <dagbft/errors.hpp>

namespace dagbft {

cert_set_t certs_with_round(round_t r, const dag_t &dag)
{
    auto layer = dag.round_certificates(r);
    cert_set_t out;
    out.insert(boost::container::ordered_unique_range, layer.begin(), layer.end());
    return out;
}

author_round_lookup_t cert_with_author_round(const address_t &a, round_t r, const dag_t &dag)
{
    author_round_lookup_t out;
    for (const auto &c: dag.round_certificates(r)) {
        if (c.author() != a)
            continue;
        if (out.certificate) {
            out.ambiguous = true;
            break;
        }
        out.certificate = c;   // layers are sorted, so the first match is the least
    }
    return out;
}

bool is_edge(const certificate_t &c, const certificate_t &c2, const dag_t &dag)
{
    return c.round() == c2.round() + 1 && c.previous().contains(c2.author()) && dag.contains(c)
           && dag.contains(c2);
}

std::shared_ptr<const cert_set_t> causal_history_ptr(const certificate_t &c, const dag_t &dag)
{
    if (auto cached = dag.cached_history(c))
        return cached;
    if (!dag.contains(c))
        throw contract_violation("causal history of " + label(c) + ", which is not in the DAG");

    // Edges depend only on the target's author and round, so the walk can go
    // one round at a time carrying the set of referenced authors.
    std::vector<certificate_t> found{c};
    address_set_t frontier = c.previous();
    for (round_t r = c.round() - 1; r >= 1 && !frontier.empty(); --r) {
        address_set_t next;
        for (const auto &x: dag.round_certificates(r)) {
            if (!frontier.contains(x.author()))
                continue;
            found.push_back(x);
            next.insert(x.previous().begin(), x.previous().end());
        }
        frontier = std::move(next);
    }
    auto history = std::make_shared<cert_set_t>(found.begin(), found.end());
    dag.store_history(c, history);
    return history;
}

cert_set_t causal_history(const certificate_t &c, const dag_t &dag) { return *causal_history_ptr(c, dag); }

bool has_path(const certificate_t &c, const certificate_t &c2, const dag_t &dag)
{
    if (!dag.contains(c) || !dag.contains(c2) || c2.round() > c.round())
        return false;
    return causal_history_ptr(c, dag)->contains(c2);
}

cert_set_t reachers_of(const certificate_t &c, const dag_t &dag)
{
    cert_set_t out;
    if (!dag.contains(c))
        return out;
    std::vector<certificate_t> found{c};
    address_set_t frontier{c.author()};
    for (round_t r = c.round() + 1; r <= dag.max_round() && !frontier.empty(); ++r) {
        address_set_t next;
        for (const auto &x: dag.round_certificates(r)) {
            bool hit = false;
            for (const auto &p: x.previous())
                if (frontier.contains(p)) {
                    hit = true;
                    break;
                }
            if (hit) {
                found.push_back(x);
                next.insert(x.author());
            }
        }
        frontier = std::move(next);
    }
    out.insert(found.begin(), found.end());
    return out;
}

bool is_closed(const address_set_t &prevs, round_t r, const dag_t &dag)
{
    for (const auto &p: prevs)
        if (!cert_with_author_round(p, r, dag).certificate)
            return false;
    return true;
}

bool is_new(const address_t &a, round_t r, const validator_state_t &v)
{
    return !cert_with_author_round(a, r, v.dag).certificate && !v.endorsed.contains(endorsed_pair_t{a, r});
}

address_set_t voters_for(const certificate_t &c, const dag_t &dag)
{
    address_set_t out;
    if (!dag.contains(c))
        return out;
    for (const auto &x: dag.round_certificates(c.round() + 1))
        if (x.previous().contains(c.author()))
            out.insert(x.author());
    return out;
}

namespace {
    std::string node_id(const certificate_t &c)
    {
        return "\"" + label(c) + "#" + c.digest().hex().substr(0, 8) + "\"";
    }
}

std::string to_dot(const dag_t &dag, const std::string &name)
{
    std::ostringstream out;
    out << "digraph \"" << name << "\" {\n";
    out << "  rankdir=RL;\n  node [shape=circle, style=filled, fillcolor=grey80];\n";
    for (round_t r = 1; r <= dag.max_round(); ++r) {
        auto layer = dag.round_certificates(r);
        out << "  subgraph \"cluster_round_" << r << "\" {\n    label=\"round " << r << "\";\n";
        for (const auto &c: layer)
            out << "    " << node_id(c) << " [label=\"" << label(c) << "\"];\n";
        out << "  }\n";
    }
    for (round_t r = 2; r <= dag.max_round(); ++r)
        for (const auto &c: dag.round_certificates(r))
            for (const auto &c2: dag.round_certificates(r - 1))
                if (c.previous().contains(c2.author()))
                    out << "  " << node_id(c) << " -> " << node_id(c2) << ";\n";
    out << "}\n";
    return out.str();
}

} // namespace dagbft
