#ifndef ONPATH_JSON_IO_HPP
#define ONPATH_JSON_IO_HPP

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "onpath/core.hpp"

// JSON wire formats. The dataset format is a bit-exact contract:
//
//   {"periods": T,
//    "alternatives": [["a","b"],["c","d","e"], ...],
//    "observations": [{"budget": [[i1,...,iT], ...], "choice": [i1,...,iT]}, ...]}
//
// with 0-based indices into the per-period alternative lists. Emitted
// budgets are in canonical (lexicographic) member order.

namespace onpath {

using nlohmann::json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline json outcome_to_json(const ChoiceSpace& space, OutcomeId id) {
    return json(space.coords_of(id));
}

inline OutcomeId outcome_from_json(const ChoiceSpace& space, const json& j,
                                   const std::string& what) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(space.periods()))
        throw ParseError(what + ": expected an index vector of length " +
                         std::to_string(space.periods()));
    std::vector<int> coords;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw ParseError(what + ": indices must be integers");
        coords.push_back(v.get<int>());
    }
    for (int t = 0; t < space.periods(); ++t)
        if (coords[t] < 0 || coords[t] >= space.size(t))
            throw ParseError(what + ": index out of range for period " + std::to_string(t + 1));
    return space.id_of(coords);
}

inline json dataset_to_json(const Dataset& d) {
    json j;
    j["periods"] = d.space.periods();
    j["alternatives"] = d.space.alternatives;
    json obs = json::array();
    for (const auto& o : d.observations) {
        json jo;
        json budget = json::array();
        for (OutcomeId id : o.budget.members) budget.push_back(outcome_to_json(d.space, id));
        jo["budget"] = std::move(budget);
        jo["choice"] = outcome_to_json(d.space, o.choice);
        obs.push_back(std::move(jo));
    }
    j["observations"] = std::move(obs);
    return j;
}

inline Dataset dataset_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("dataset: expected an object");
    if (!j.contains("periods") || !j["periods"].is_number_integer())
        throw ParseError("dataset: missing integer field 'periods'");
    if (!j.contains("alternatives") || !j["alternatives"].is_array())
        throw ParseError("dataset: missing array field 'alternatives'");
    if (!j.contains("observations") || !j["observations"].is_array())
        throw ParseError("dataset: missing array field 'observations'");

    Dataset d;
    const int T = j["periods"].get<int>();
    if (T < 2) throw ParseError("dataset: periods must be at least 2");
    for (const auto& period : j["alternatives"]) {
        if (!period.is_array()) throw ParseError("dataset: alternatives must be string arrays");
        std::vector<std::string> labels;
        for (const auto& l : period) {
            if (!l.is_string()) throw ParseError("dataset: alternative labels must be strings");
            labels.push_back(l.get<std::string>());
        }
        d.space.alternatives.push_back(std::move(labels));
    }
    if (d.space.periods() != T)
        throw ParseError("dataset: 'periods' disagrees with the alternatives list");
    if (!d.space.valid()) throw ParseError("dataset: malformed choice space");

    int k = 0;
    for (const auto& jo : j["observations"]) {
        const std::string at = "observation " + std::to_string(k);
        if (!jo.is_object() || !jo.contains("budget") || !jo.contains("choice"))
            throw ParseError(at + ": expected {budget, choice}");
        Observation o;
        std::vector<OutcomeId> ids;
        for (const auto& m : jo["budget"]) ids.push_back(outcome_from_json(d.space, m, at));
        o.budget = Budget::from_ids(std::move(ids));
        o.choice = outcome_from_json(d.space, jo["choice"], at);
        d.observations.push_back(std::move(o));
        ++k;
    }
    auto violations = validate(d);
    if (!violations.empty()) throw ParseError("dataset: " + violations.front().reason);
    return d;
}

inline std::string dataset_to_string(const Dataset& d) { return dataset_to_json(d).dump(); }

inline Dataset dataset_from_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    return dataset_from_json(j);
}

inline Dataset dataset_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return dataset_from_string(ss.str());
}

// ---------------------------------------------------------------------------
// Preferences and profiles

inline json preference_to_json(const ChoiceSpace& space, const Preference& p) {
    json blocks = json::array();
    for (const auto& b : p.blocks()) {
        json block = json::array();
        for (OutcomeId id : b) block.push_back(outcome_to_json(space, id));
        blocks.push_back(std::move(block));
    }
    return json{{"blocks", std::move(blocks)}};
}

inline Preference preference_from_json(const ChoiceSpace& space, const json& j) {
    if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_array())
        throw ParseError("preference: expected {blocks: [...]}");
    std::vector<std::vector<OutcomeId>> blocks;
    for (const auto& jb : j["blocks"]) {
        std::vector<OutcomeId> block;
        for (const auto& m : jb) block.push_back(outcome_from_json(space, m, "preference"));
        blocks.push_back(std::move(block));
    }
    try {
        return Preference::from_blocks(space, std::move(blocks));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

inline json profile_to_json(const ChoiceSpace& space, const std::vector<Preference>& prefs) {
    json arr = json::array();
    for (const auto& p : prefs) arr.push_back(preference_to_json(space, p));
    return json{{"prefs", std::move(arr)}};
}

inline std::vector<Preference> profile_from_json(const ChoiceSpace& space, const json& j) {
    if (!j.is_object() || !j.contains("prefs") || !j["prefs"].is_array())
        throw ParseError("profile: expected {prefs: [...]}");
    std::vector<Preference> out;
    for (const auto& jp : j["prefs"]) out.push_back(preference_from_json(space, jp));
    return out;
}

// ---------------------------------------------------------------------------
// Content digest used by run reports (FNV-1a, 64-bit).

inline std::string content_digest(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace onpath

#endif  // ONPATH_JSON_IO_HPP
