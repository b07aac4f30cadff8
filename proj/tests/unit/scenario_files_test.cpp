#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <dagbft/harness.hpp>
#include <dagbft/scenario.hpp>

#include "figures.hpp"

using namespace dagbft;

namespace {
    const std::string dir = DAGBFT_SCENARIO_DIR;

    std::string slurp(const std::string &path)
    {
        std::ifstream in{path};
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }
}

TEST_SUITE("scenario-files") {

TEST_CASE("scripted scenario files match their builders")
{
    for (const auto &sc: {figures::anchor_commitment_scenario(), figures::equivocation_fork_scenario()}) {
        CAPTURE(sc.name);
        CHECK(slurp(dir + "/" + sc.name + ".json") == encode_scenario(sc).dump(2) + "\n");
    }
}

TEST_CASE("every bundled scenario loads and runs")
{
    std::size_t n = 0;
    for (const auto &entry: std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".json")
            continue;
        CAPTURE(entry.path().string());
        auto sc = load_scenario(entry.path().string());
        sc.max_events = std::min<std::size_t>(sc.max_events, 60);
        if (sc.script && sc.script->size() > sc.max_events)
            sc.max_events = sc.script->size();
        const auto t = run_scenario(sc);
        CHECK(t.halted.empty());
        CHECK(replay(t).ok);
        ++n;
    }
    CHECK(n >= 4);
}

}
