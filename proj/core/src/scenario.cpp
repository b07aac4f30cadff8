#include <dagbft/scenario.hpp>

#include <fstream>

#include <dagbft/codec.hpp>
#include <dagbft/errors.hpp>

namespace dagbft {

using json = nlohmann::ordered_json;

std::string_view strategy_name(adversary_strategy s) noexcept
{
    switch (s) {
        case adversary_strategy::none: return "none";
        case adversary_strategy::equivocate: return "equivocate";
        case adversary_strategy::under_quorum: return "under-quorum";
    }
    return "?";
}

adversary_strategy parse_strategy(std::string_view name)
{
    for (auto s: {adversary_strategy::none, adversary_strategy::equivocate, adversary_strategy::under_quorum})
        if (strategy_name(s) == name)
            return s;
    throw config_error("unknown adversary strategy '" + std::string{name} + "'");
}

void validate(const scenario_t &sc)
{
    if (sc.correct.empty())
        throw config_error("correct: the set of correct validators must be non-empty");
    if (sc.genesis.empty())
        throw config_error("genesis: the genesis committee must be non-empty");
    for (const auto &[a, k]: sc.genesis)
        if (k == 0)
            throw config_error("genesis: stake of " + a.value + " must be >= 1");
    if (sc.lookback == 0)
        throw config_error("lookback: must be >= 1");
    for (const auto &f: sc.faulty)
        if (sc.correct.contains(f))
            throw config_error("faulty: " + f.value + " is also listed as correct");
    double total = 0;
    for (auto w: sc.weights) {
        if (!(w >= 0))
            throw config_error("weights: must be non-negative");
        total += w;
    }
    if (!sc.script && total <= 0)
        throw config_error("weights: at least one weight must be positive");
    if (sc.max_round == 0)
        throw config_error("max_round: must be >= 1");
}

json encode_scenario(const scenario_t &sc)
{
    json j;
    j["name"] = sc.name;
    j["correct"] = codec::encode(sc.correct);
    j["genesis"] = codec::encode(sc.genesis);
    j["lookback"] = sc.lookback;
    j["faulty"] = codec::encode(sc.faulty);
    j["max_events"] = sc.max_events;
    j["max_round"] = sc.max_round;
    json weights;
    for (auto k: {event_kind::create, event_kind::accept, event_kind::advance, event_kind::commit})
        weights[std::string{kind_name(k)}] = sc.weight(k);
    j["weights"] = std::move(weights);
    j["progress_bias"] = sc.progress_bias;
    j["adversary"] = {{"strategy", std::string{strategy_name(sc.adversary)}}};
    j["dynamic_stake"] = sc.dynamic_stake;
    j["seed"] = sc.seed;
    j["check_every"] = sc.check_every;
    if (sc.script) {
        json events = json::array();
        for (const auto &e: *sc.script)
            events.push_back(codec::encode(e));
        j["script"] = std::move(events);
    }
    return j;
}

namespace {
    template<typename T>
    T optional_field(const json &j, const char *name, T fallback)
    {
        auto it = j.find(name);
        if (it == j.end())
            return fallback;
        try {
            return it->get<T>();
        } catch (const json::exception &) {
            throw config_error(std::string{name} + ": wrong type");
        }
    }

    const json &required(const json &j, const char *name)
    {
        auto it = j.find(name);
        if (it == j.end())
            throw config_error(std::string{name} + ": missing");
        return *it;
    }

    template<typename F>
    auto in_field(const char *name, F &&f)
    {
        try {
            return f();
        } catch (const config_error &e) {
            throw config_error(std::string{name} + ": " + e.what());
        }
    }
}

scenario_t decode_scenario(const json &j)
{
    if (!j.is_object())
        throw config_error("scenario must be an object");
    scenario_t sc;
    sc.name = optional_field<std::string>(j, "name", sc.name);
    sc.correct = in_field("correct", [&] { return codec::decode_address_set(required(j, "correct")); });
    sc.genesis = in_field("genesis", [&] { return codec::decode_committee(required(j, "genesis")); });
    if (auto it = j.find("lookback"); it != j.end() && (!it->is_number_unsigned()))
        throw config_error("lookback: must be a positive integer");
    sc.lookback = optional_field<round_t>(j, "lookback", sc.lookback);
    if (j.contains("faulty")) {
        sc.faulty = in_field("faulty", [&] { return codec::decode_address_set(j.at("faulty")); });
    } else {
        for (const auto &[a, _]: sc.genesis)
            if (!sc.correct.contains(a))
                sc.faulty.insert(a);
    }
    sc.max_events = optional_field<std::size_t>(j, "max_events", sc.max_events);
    sc.max_round = optional_field<round_t>(j, "max_round", sc.max_round);
    if (auto it = j.find("weights"); it != j.end()) {
        if (!it->is_object())
            throw config_error("weights: must be an object keyed by event kind");
        sc.weights = {0, 0, 0, 0};
        for (const auto &[k, w]: it->items()) {
            auto kind = parse_event_kind(k);
            if (!kind)
                throw config_error("weights: unknown event kind '" + k + "'");
            if (!w.is_number())
                throw config_error("weights." + k + ": must be a number");
            sc.weights[static_cast<std::size_t>(*kind)] = w.get<double>();
        }
    }
    sc.progress_bias = optional_field<bool>(j, "progress_bias", sc.progress_bias);
    if (auto it = j.find("adversary"); it != j.end()) {
        if (it->is_string())
            sc.adversary = parse_strategy(it->get<std::string>());
        else
            sc.adversary = parse_strategy(optional_field<std::string>(*it, "strategy", "none"));
    }
    sc.dynamic_stake = optional_field<bool>(j, "dynamic_stake", sc.dynamic_stake);
    sc.seed = optional_field<std::uint64_t>(j, "seed", sc.seed);
    sc.check_every = optional_field<std::size_t>(j, "check_every", sc.check_every);
    if (auto it = j.find("script"); it != j.end()) {
        if (!it->is_array())
            throw config_error("script: must be an array of events");
        std::vector<event_t> events;
        for (std::size_t i = 0; i < it->size(); ++i)
            events.push_back(in_field(("script[" + std::to_string(i) + "]").c_str(),
                                      [&] { return codec::decode_event((*it)[i]); }));
        sc.script = std::move(events);
    }
    validate(sc);
    return sc;
}

scenario_t load_scenario(const std::string &path)
{
    std::ifstream in{path};
    if (!in)
        throw config_error("cannot open scenario file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw config_error(path + ": " + e.what());
    }
    try {
        return decode_scenario(j);
    } catch (const config_error &e) {
        throw config_error(path + ": " + e.what());
    }
}

} // namespace dagbft
