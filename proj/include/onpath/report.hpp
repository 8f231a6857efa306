#ifndef ONPATH_REPORT_HPP
#define ONPATH_REPORT_HPP

#include <chrono>
#include <string>

#include "onpath/axioms.hpp"
#include "onpath/json_io.hpp"

// Wire format for verdicts and the self-contained run reports the CLI
// emits. Schema version bumps whenever a field changes meaning.

namespace onpath {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

inline json verdict_to_json(const ChoiceSpace& space, const AxiomVerdict& v) {
    json j;
    j["axiom"] = v.axiom;
    if (v.result == Verdict3::Inconclusive)
        j["holds"] = nullptr;
    else
        j["holds"] = v.result == Verdict3::Holds;
    j["mode"] = v.mode;
    j["exhaustive"] = v.exhaustive;
    json witness;
    if (v.cycle) witness["cycle"] = *v.cycle;
    if (v.subset) {
        witness["t"] = v.subset->t;
        witness["subset"] = v.subset->subset;
    }
    if (!v.eliminations.empty()) {
        json elims = json::array();
        for (const auto& rec : v.eliminations) {
            json ys = json::array();
            for (OutcomeId y : rec.picks) ys.push_back(outcome_to_json(space, y));
            elims.push_back(json{{"t", rec.t}, {"order", rec.order}, {"y", std::move(ys)}});
        }
        witness["eliminations"] = std::move(elims);
    }
    if (v.cond4) {
        json pairs = json::array();
        for (auto [k, s] : v.cond4->pairs) pairs.push_back(json::array({k, s}));
        witness["pairs"] = std::move(pairs);
        witness["subset"] = v.cond4->subset;
    }
    j["witness"] = witness.is_null() ? json(nullptr) : witness;
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

/// Self-contained run report: the command echo plus the input digest make
/// the payload reproducible byte for byte.
inline json run_report(const std::string& command_echo, const std::string& input_digest,
                       json payload, double seconds) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["tool_version"] = kToolVersion;
    j["command"] = command_echo;
    if (!input_digest.empty()) j["input_digest"] = input_digest;
    j["result"] = std::move(payload);
    j["seconds"] = seconds;
    return j;
}

}  // namespace onpath

#endif  // ONPATH_REPORT_HPP
