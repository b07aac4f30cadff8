#include <map>

#include <benchmark/benchmark.h>

#include <dagbft/dag.hpp>
#include <dagbft/harness.hpp>
#include <dagbft/invariant.hpp>
#include <dagbft/transition.hpp>

using namespace dagbft;

namespace {

scenario_t bench_scenario(std::size_t events)
{
    scenario_t sc;
    sc.name = "bench";
    for (const auto *a: {"v1", "v2", "v3", "v4"}) {
        sc.correct.insert(address_t{a});
        sc.genesis.emplace(address_t{a}, 1);
    }
    sc.max_events = events;
    sc.max_round = 1000;
    sc.dynamic_stake = true;
    sc.seed = 3;
    return sc;
}

// a state after `events` random events, with the enabled events from it
struct fixture_t {
    scenario_t sc;
    trace_t t;
    std::vector<event_t> enabled;

    explicit fixture_t(std::size_t events): sc{bench_scenario(events)}, t{run_random(sc)}
    {
        enabled = enabled_events(t.final_state, sc);
    }
};

const fixture_t &fixture(std::size_t events)
{
    static std::map<std::size_t, fixture_t> cache;
    return cache.try_emplace(events, events).first->second;
}

void bm_event_next(benchmark::State &state)
{
    const auto &f = fixture(state.range(0));
    const auto params = f.sc.params();
    std::size_t i = 0;
    for (auto _: state) {
        benchmark::DoNotOptimize(event_next(f.enabled[i], f.t.final_state, params));
        i = (i + 1) % f.enabled.size();
    }
}
BENCHMARK(bm_event_next)->Arg(100)->Arg(300)->Arg(1000);

void bm_enabled_events(benchmark::State &state)
{
    const auto &f = fixture(state.range(0));
    for (auto _: state)
        benchmark::DoNotOptimize(enabled_events(f.t.final_state, f.sc));
}
BENCHMARK(bm_enabled_events)->Arg(100)->Arg(300)->Arg(1000);

void bm_check_all(benchmark::State &state)
{
    const auto &f = fixture(state.range(0));
    const auto params = f.sc.params();
    for (auto _: state)
        benchmark::DoNotOptimize(check_all(f.t.final_state, params, true));
}
BENCHMARK(bm_check_all)->Arg(100)->Arg(300)->Arg(1000)->Unit(benchmark::kMicrosecond);

void bm_has_path(benchmark::State &state)
{
    const auto &f = fixture(state.range(0));
    const auto &dag = f.t.final_state.validators.begin()->second.dag;
    const auto certs = dag.certificates();
    const std::vector<certificate_t> all(certs.begin(), certs.end());
    std::size_t i = 0;
    for (auto _: state) {
        // newest against a spread of older ones
        benchmark::DoNotOptimize(has_path(all.back(), all[i], dag));
        i = (i + 7) % all.size();
    }
}
BENCHMARK(bm_has_path)->Arg(300)->Arg(1000);

void bm_causal_history_cold(benchmark::State &state)
{
    const auto &f = fixture(state.range(0));
    const auto &dag = f.t.final_state.validators.begin()->second.dag;
    const auto certs = dag.certificates();
    const certificate_t top = *std::prev(certs.end());
    for (auto _: state) {
        // a fresh DAG value drops the memoized histories
        dag_t copy;
        for (const auto &c: certs)
            copy = copy.insert(c);
        benchmark::DoNotOptimize(causal_history(top, copy));
    }
}
BENCHMARK(bm_causal_history_cold)->Arg(300)->Arg(1000)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
