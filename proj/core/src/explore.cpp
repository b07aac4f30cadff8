#include <dagbft/explore.hpp>

#include <unordered_map>

#include <dagbft/harness.hpp>
#include <dagbft/transition.hpp>

namespace dagbft {

std::size_t explore_report_t::failures() const
{
    std::size_t n = 0;
    for (const auto &v: violations)
        n += v.expected ? 0 : 1;
    return n;
}

namespace {
    struct node_t {
        system_state_t state;
        bool ft;
        std::size_t depth;
        std::optional<digest_t> parent;
        std::optional<event_t> via;
    };

    std::vector<event_t> path_to(const digest_t &d, const std::unordered_map<digest_t, node_t, digest_hash> &nodes)
    {
        std::vector<event_t> path;
        for (const node_t *n = &nodes.at(d); n->parent; n = &nodes.at(*n->parent))
            path.push_back(*n->via);
        return {path.rbegin(), path.rend()};
    }
}

explore_report_t explore(const scenario_t &sc, std::size_t depth, std::size_t budget)
{
    validate(sc);
    const auto params = sc.params();
    explore_report_t report;
    std::unordered_map<digest_t, node_t, digest_hash> nodes;

    // Checks a state; violations already reported for this state with the same
    // classification are not repeated when the state is revisited.
    auto check = [&](const digest_t &d) {
        const auto &n = nodes.at(d);
        auto r = check_all(n.state, params, n.ft);
        for (auto &v: r.failures)
            report.violations.push_back({std::move(v), false, path_to(d, nodes)});
        if (!n.ft)
            for (auto &v: r.expected)
                report.violations.push_back({std::move(v), true, path_to(d, nodes)});
    };

    auto s0 = initial_state(sc.correct);
    const auto d0 = state_digest(s0);
    const bool ft0 = is_fault_tolerant(s0, params);
    nodes.emplace(d0, node_t{std::move(s0), ft0, 0, std::nullopt, std::nullopt});
    report.per_depth.push_back(1);
    check(d0);

    std::vector<digest_t> level{d0};
    for (std::size_t k = 0; k < depth && !level.empty() && !report.truncated; ++k) {
        std::vector<digest_t> next;
        std::size_t fresh = 0;
        for (const auto &d: level) {
            // copy: inserting into the map may rehash
            const auto state = nodes.at(d).state;
            const bool ft = nodes.at(d).ft;
            for (const auto &e: enabled_events(state, sc)) {
                auto s2 = event_next(e, state, params);
                const auto d2 = state_digest(s2);
                const bool ft2 = ft && is_fault_tolerant(s2, params);
                auto it = nodes.find(d2);
                if (it == nodes.end()) {
                    if (budget != 0 && nodes.size() >= budget) {
                        report.truncated = true;
                        break;
                    }
                    nodes.emplace(d2, node_t{std::move(s2), ft2, k + 1, d, e});
                    ++fresh;
                    next.push_back(d2);
                    check(d2);
                } else if (ft2 && !it->second.ft) {
                    // a fault-tolerant path reaches a state first seen on a
                    // faulty one: upgrade it and expand it again
                    it->second.ft = true;
                    it->second.parent = d;
                    it->second.via = e;
                    check(d2);
                    if (it->second.depth == k + 1 || k + 1 < depth)
                        next.push_back(d2);
                }
            }
            if (report.truncated)
                break;
        }
        report.per_depth.push_back(fresh);
        level = std::move(next);
    }
    report.visited = nodes.size();
    report.frontier = level.size();
    return report;
}

} // namespace dagbft
