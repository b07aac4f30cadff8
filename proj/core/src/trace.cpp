#include <dagbft/trace.hpp>

#include <fstream>
#include <sstream>

#include <dagbft/codec.hpp>
#include <dagbft/errors.hpp>

namespace dagbft {

using json = nlohmann::ordered_json;

std::vector<event_t> trace_t::events() const
{
    std::vector<event_t> out;
    out.reserve(steps.size());
    for (const auto &s: steps)
        out.push_back(s.event);
    return out;
}

void write_trace(std::ostream &out, const trace_t &t)
{
    out << json{{"scenario", encode_scenario(t.scenario)}}.dump() << '\n';
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const auto &s = t.steps[i];
        json j;
        j["step"] = i + 1;
        j["event"] = codec::encode(s.event);
        j["state_digest"] = s.state_digest.hex();
        j["ft"] = s.ft;
        if (!s.anchors.empty())
            j["anchors"] = s.anchors;
        out << j.dump() << '\n';
    }
    json last;
    last["final_state"] = codec::encode(t.final_state);
    last["ft_throughout"] = t.ft_throughout;
    out << last.dump() << '\n';
}

std::string trace_to_string(const trace_t &t)
{
    std::ostringstream out;
    write_trace(out, t);
    return out.str();
}

void save_trace(const std::string &path, const trace_t &t)
{
    std::ofstream out{path, std::ios::binary};
    if (!out)
        throw config_error("cannot write trace file " + path);
    write_trace(out, t);
    if (!out)
        throw config_error("error writing trace file " + path);
}

trace_t read_trace(std::istream &in)
{
    std::vector<json> lines;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty())
            continue;
        try {
            lines.push_back(json::parse(line));
        } catch (const json::parse_error &e) {
            throw config_error("trace line " + std::to_string(n) + ": " + e.what());
        }
    }
    if (lines.size() < 2 || !lines.front().contains("scenario") || !lines.back().contains("final_state"))
        throw config_error("trace must start with a scenario line and end with a final-state line");
    trace_t t;
    t.scenario = decode_scenario(lines.front().at("scenario"));
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
        const auto &j = lines[i];
        try {
            trace_step_t s{codec::decode_event(j.at("event")), digest_t::from_hex(j.at("state_digest").get<std::string>()),
                           j.at("ft").get<bool>(), {}};
            if (j.contains("anchors"))
                s.anchors = j.at("anchors").get<std::vector<std::string>>();
            t.steps.push_back(std::move(s));
        } catch (const json::exception &e) {
            throw config_error("trace step " + std::to_string(i) + ": " + e.what());
        } catch (const std::invalid_argument &e) {
            throw config_error("trace step " + std::to_string(i) + ": " + e.what());
        } catch (const config_error &e) {
            throw config_error("trace step " + std::to_string(i) + ": " + e.what());
        }
    }
    t.final_state = codec::decode_system_state(lines.back().at("final_state"));
    t.ft_throughout = lines.back().value("ft_throughout", true);
    return t;
}

trace_t load_trace(const std::string &path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw config_error("cannot open trace file " + path);
    return read_trace(in);
}

} // namespace dagbft
