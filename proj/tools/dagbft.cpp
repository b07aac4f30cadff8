// dagbft: run, explore, replay and check executions of the protocol model.
//
// Exit status: 0 success (or only violations the scenario permits),
// 1 unexpected violation or replay divergence, 2 usage or I/O error.
#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <dagbft/dag.hpp>
#include <dagbft/errors.hpp>
#include <dagbft/explore.hpp>
#include <dagbft/harness.hpp>
#include <dagbft/invariant.hpp>
#include <dagbft/transition.hpp>

using namespace dagbft;

namespace {

enum exit_code : int { ok = 0, violation = 1, usage = 2 };

struct options_t {
    std::string config;
    std::string trace;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> events;
    std::optional<std::size_t> check_every;
    std::optional<std::string> strategy;
    std::string out;
    std::size_t depth = 4;
    std::size_t budget = 0;
    std::size_t runs = 1;
    unsigned jobs = 1;
    std::string validator;
};

scenario_t load_with_overrides(const options_t &o)
{
    auto sc = load_scenario(o.config);
    if (o.seed)
        sc.seed = *o.seed;
    if (o.events)
        sc.max_events = *o.events;
    if (o.check_every)
        sc.check_every = *o.check_every;
    if (o.strategy)
        sc.adversary = parse_strategy(*o.strategy);
    validate(sc);
    return sc;
}

std::string seed_path(const std::string &out, std::uint64_t seed)
{
    return out + "." + std::to_string(seed);
}

void print_path(std::ostream &os, const std::vector<event_t> &events)
{
    for (std::size_t i = 0; i < events.size(); ++i)
        os << "  " << i + 1 << ". " << describe(events[i]) << "\n";
}

void print_violation(std::ostream &os, const violation_t &v)
{
    os << invariant_name(v.invariant) << ": " << v.detail;
    for (const auto &w: v.witnesses)
        os << " [" << w << "]";
    os << "\n";
}

// Final-state summary plus whatever the run saw along the way.
// Returns the first unexpected violation, if any.
std::optional<invariant_id> summarize(std::ostream &os, const trace_t &t)
{
    const auto params = t.scenario.params();
    const auto final_report = check_all(t.final_state, params, t.ft_throughout);

    std::vector<found_violation_t> failures;
    std::map<invariant_id, std::size_t> permitted;
    for (const auto &v: t.violations)
        (v.expected ? (void)++permitted[v.violation.invariant] : failures.push_back(v));
    for (const auto &v: final_report.failures)
        failures.push_back({t.steps.size(), false, v});
    for (const auto &v: final_report.expected)
        ++permitted[v.invariant];

    std::size_t commits = 0;
    for (const auto &s: t.steps)
        commits += kind_of(s.event) == event_kind::commit;
    round_t top = 0;
    for (const auto &[_, v]: t.final_state.validators)
        top = std::max(top, v.round);
    os << t.steps.size() << " events, " << commits << " commits, highest round " << top << ", "
       << (t.ft_throughout ? "fault-tolerant" : "not fault-tolerant") << "\n";

    // invariants without any violation, counted on the final state and in-run checks together
    std::size_t holding = 0;
    for (auto id: all_invariants) {
        const bool bad = permitted.contains(id) ||
                         std::any_of(failures.begin(), failures.end(),
                                     [&](const found_violation_t &f) { return f.violation.invariant == id; });
        holding += !bad;
    }
    os << holding << "/" << invariant_count << " invariants hold\n";
    for (const auto &[id, n]: permitted)
        os << "non-FT execution; " << invariant_name(id) << " violated as permitted (" << n << " report"
           << (n == 1 ? "" : "s") << ")\n";

    if (failures.empty())
        return std::nullopt;
    for (const auto &f: failures) {
        os << "VIOLATION at step " << f.step << ": ";
        print_violation(os, f.violation);
    }
    return failures.front().violation.invariant;
}

void print_witness(std::ostream &os, const trace_t &t, invariant_id id)
{
    const auto m = minimize(t, id);
    if (!m.reproducible) {
        os << "witness does not reproduce on the final state; full path has " << t.steps.size() << " events\n";
        return;
    }
    os << "minimized witness (" << m.trace.steps.size() << " events, " << m.removed << " removed):\n";
    print_path(os, m.trace.events());
}

int finish_run(std::ostream &os, const trace_t &t, const std::string &out_path)
{
    if (!t.halted.empty()) {
        os << "error: script stopped: " << t.halted << "\n";
        return usage;
    }
    if (!out_path.empty()) {
        save_trace(out_path, t);
        os << "trace written to " << out_path << "\n";
    }
    if (const auto bad = summarize(os, t)) {
        print_witness(os, t, *bad);
        return violation;
    }
    return ok;
}

int cmd_simulate(const options_t &o)
{
    const auto base = load_with_overrides(o);
    if (o.runs <= 1) {
        return finish_run(std::cout, run_scenario(base), o.out);
    }

    // independent seeds, reported in seed order
    std::vector<std::string> reports(o.runs);
    std::vector<int> codes(o.runs, ok);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < o.runs;) {
            auto sc = base;
            sc.seed = base.seed + i;
            std::ostringstream os;
            os << "seed " << sc.seed << ": ";
            try {
                codes[i] = finish_run(os, run_scenario(sc), o.out.empty() ? "" : seed_path(o.out, sc.seed));
            } catch (const std::exception &e) {
                os << "error: " << e.what() << "\n";
                codes[i] = usage;
            }
            reports[i] = os.str();
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < std::max(1u, o.jobs); ++j)
        pool.emplace_back(worker);
    pool.clear();
    for (const auto &r: reports)
        std::cout << r;
    return *std::max_element(codes.begin(), codes.end());
}

int cmd_attack(options_t o)
{
    if (!o.strategy)
        o.strategy = "equivocate";
    if (!o.check_every)
        o.check_every = 1;
    const auto sc = load_with_overrides(o);
    if (sc.faulty.empty()) {
        std::cerr << "error: " << o.config << ": attack needs faulty validators\n";
        return usage;
    }
    std::cout << "adversary " << strategy_name(sc.adversary) << " controls stake "
              << members_stake(sc.faulty, sc.genesis) << " of " << total_stake(sc.genesis) << " (fstk "
              << max_faulty_stake(sc.genesis) << ")\n";
    return finish_run(std::cout, run_scenario(sc), o.out);
}

int cmd_explore(const options_t &o)
{
    const auto sc = load_with_overrides(o);
    const auto r = explore(sc, o.depth, o.budget);
    if (r.truncated)
        std::cout << "truncated: state budget of " << o.budget << " reached; results cover a partial search\n";
    std::cout << r.visited << (r.visited == 1 ? " state" : " states") << " visited (depth " << o.depth
              << ", frontier " << r.frontier << ")\n";
    std::cout << "new states per depth:";
    for (auto n: r.per_depth)
        std::cout << " " << n;
    std::cout << "\n";

    std::map<invariant_id, std::size_t> permitted;
    std::size_t shown = 0;
    for (const auto &v: r.violations) {
        if (v.expected) {
            ++permitted[v.violation.invariant];
            continue;
        }
        if (shown++ < 5) {
            std::cout << "VIOLATION ";
            print_violation(std::cout, v.violation);
            print_path(std::cout, v.path);
        }
    }
    for (const auto &[id, n]: permitted)
        std::cout << "non-FT execution; " << invariant_name(id) << " violated as permitted (" << n << " states)\n";
    if (shown == 0)
        std::cout << "no unexpected violations\n";
    return shown ? violation : ok;
}

int cmd_replay(const options_t &o)
{
    const auto t = load_trace(o.trace);
    const auto r = replay(t);
    if (!r.ok) {
        std::cout << "replay diverges at step " << *r.step << ": " << r.detail << "\n";
        return violation;
    }
    std::cout << "replay ok: " << t.steps.size() << " steps, final state matches\n";
    return ok;
}

int cmd_check(const options_t &o)
{
    const auto t = load_trace(o.trace);
    const auto report = check_all(t.final_state, t.scenario.params(), t.ft_throughout);
    std::cout << report.holding() << "/" << invariant_count << " invariants hold\n";
    std::set<invariant_id> permitted;
    for (const auto &v: report.expected)
        permitted.insert(v.invariant);
    for (auto id: permitted)
        std::cout << "non-FT execution; " << invariant_name(id) << " violated as permitted\n";
    for (const auto &v: report.failures) {
        std::cout << "VIOLATION ";
        print_violation(std::cout, v);
    }
    return report.ok() ? ok : violation;
}

int cmd_export_dag(const options_t &o)
{
    const auto t = load_trace(o.trace);
    const address_t who{o.validator};
    if (!t.final_state.validators.contains(who)) {
        std::cerr << "error: " << o.validator << " is not a correct validator of this trace\n";
        return usage;
    }
    const auto dot = to_dot(t.final_state.at(who).dag, o.validator);
    if (o.out.empty()) {
        std::cout << dot;
        return ok;
    }
    std::ofstream f{o.out};
    if (!(f << dot)) {
        std::cerr << "error: cannot write " << o.out << "\n";
        return usage;
    }
    return ok;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"dagbft: executable model of a DAG-based BFT protocol with dynamic stake"};
    app.require_subcommand(1);
    options_t o;

    auto config = [&](CLI::App *c) {
        c->add_option("--config,-c", o.config, "scenario file (JSON)")->required()->check(CLI::ExistingFile);
    };
    auto scheduling = [&](CLI::App *c) {
        c->add_option("--seed", o.seed, "override the scenario seed");
        c->add_option("--events", o.events, "override max_events");
        c->add_option("--check-every", o.check_every, "check all invariants every N events (0: final state only)");
        c->add_option("--strategy", o.strategy, "adversary strategy: none, equivocate, under-quorum");
        c->add_option("--out,-o", o.out, "write the trace (JSON lines) here");
    };
    auto trace_arg = [&](CLI::App *c) {
        c->add_option("trace", o.trace, "trace file")->required()->check(CLI::ExistingFile);
    };

    auto *simulate = app.add_subcommand("simulate", "run a seeded random (or scripted) execution");
    config(simulate);
    scheduling(simulate);
    simulate->add_option("--runs", o.runs, "number of consecutive seeds to run")->check(CLI::PositiveNumber);
    simulate->add_option("--jobs,-j", o.jobs, "threads for --runs")->check(CLI::PositiveNumber);

    auto *attack = app.add_subcommand("attack", "run with a Byzantine strategy (default equivocate)");
    config(attack);
    scheduling(attack);

    auto *explore_cmd = app.add_subcommand("explore", "breadth-first exploration of every enabled event");
    config(explore_cmd);
    explore_cmd->add_option("--depth,-d", o.depth, "maximum number of events")->capture_default_str();
    explore_cmd->add_option("--budget", o.budget, "stop after this many distinct states (0: none)");
    explore_cmd->add_option("--strategy", o.strategy, "adversary strategy");

    auto *replay_cmd = app.add_subcommand("replay", "re-execute a trace and compare every state digest");
    trace_arg(replay_cmd);
    auto *check_cmd = app.add_subcommand("check", "check all invariants on a trace's final state");
    trace_arg(check_cmd);
    auto *export_cmd = app.add_subcommand("export-dag", "write a validator's final DAG as Graphviz DOT");
    trace_arg(export_cmd);
    export_cmd->add_option("--validator,-v", o.validator, "correct validator")->required();
    export_cmd->add_option("--out,-o", o.out, "DOT file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return usage;
    }

    try {
        if (*simulate)
            return cmd_simulate(o);
        if (*attack)
            return cmd_attack(o);
        if (*explore_cmd)
            return cmd_explore(o);
        if (*replay_cmd)
            return cmd_replay(o);
        if (*check_cmd)
            return cmd_check(o);
        return cmd_export_dag(o);
    } catch (const config_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return usage;
    }
}
