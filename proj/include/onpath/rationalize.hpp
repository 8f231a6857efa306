#ifndef ONPATH_RATIONALIZE_HPP
#define ONPATH_RATIONALIZE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "onpath/axioms.hpp"
#include "onpath/core.hpp"

// Behavioral model semantics (which outcomes a preference profile predicts
// on a budget), per-observation verification, and the constructive
// rationalization procedures. Every construct_* output is re-verified
// against its model before it is returned.

namespace onpath {

enum class ModelKind { Naive, NaiveNash, StrictNaiveNash, Sophisticated };

inline std::string model_name(ModelKind m) {
    switch (m) {
        case ModelKind::Naive: return "naive";
        case ModelKind::NaiveNash: return "nash";
        case ModelKind::StrictNaiveNash: return "strict-nash";
        case ModelKind::Sophisticated: return "sophisticated";
    }
    return "?";
}

inline std::optional<ModelKind> model_from_name(const std::string& s) {
    if (s == "naive") return ModelKind::Naive;
    if (s == "nash" || s == "naive-nash") return ModelKind::NaiveNash;
    if (s == "strict-nash" || s == "strict-naive-nash") return ModelKind::StrictNaiveNash;
    if (s == "sophisticated") return ModelKind::Sophisticated;
    return std::nullopt;
}

struct PreferenceProfile {
    std::vector<Preference> prefs;  // one per period

    const Preference& at(int t) const { return prefs[static_cast<std::size_t>(t)]; }
};

// ---------------------------------------------------------------------------
// Backward induction menus

/// The recursively defined menus M_t(x_{t-1}) for every reachable prefix of
/// a budget: at the last period the menu is the section itself, and each
/// earlier menu collects the next agent's maximal elements across the
/// feasible continuations.
struct BackwardInductionSets {
    std::map<std::vector<int>, std::vector<OutcomeId>> menu;  // keyed by prefix

    const std::vector<OutcomeId>& root() const { return menu.at({}); }
};

namespace detail {

inline std::vector<OutcomeId> menus_from(const ChoiceSpace& space, const Budget& budget,
                                         const PreferenceProfile& profile,
                                         std::vector<int>& prefix,
                                         BackwardInductionSets* record) {
    const int T = space.periods();
    const int len = static_cast<int>(prefix.size());
    std::vector<OutcomeId> result;
    if (len == T - 1) {
        result = section(space, budget, prefix).members;
    } else {
        Budget sec = section(space, budget, prefix);
        std::vector<int> nexts;
        for (OutcomeId id : sec.members) nexts.push_back(space.coord_of(id, len));
        std::sort(nexts.begin(), nexts.end());
        nexts.erase(std::unique(nexts.begin(), nexts.end()), nexts.end());
        for (int x : nexts) {
            prefix.push_back(x);
            auto sub = menus_from(space, budget, profile, prefix, record);
            prefix.pop_back();
            if (!sub.empty()) result = set_union(result, max_set(sub, profile.at(len + 1)));
        }
    }
    if (record) record->menu[prefix] = result;
    return result;
}

}  // namespace detail

inline BackwardInductionSets backward_induction_sets(const ChoiceSpace& space,
                                                     const Budget& budget,
                                                     const PreferenceProfile& profile) {
    BackwardInductionSets out;
    std::vector<int> prefix;
    detail::menus_from(space, budget, profile, prefix, &out);
    return out;
}

/// Two-period evaluation with the composite later period: the first agent's
/// maximal elements over the union of per-slice maxima of `pref_rest`.
inline std::vector<OutcomeId> composite_two_period_max(const ChoiceSpace& space,
                                                       const Budget& budget,
                                                       const Preference& pref_first,
                                                       const Preference& pref_rest) {
    std::vector<OutcomeId> pooled;
    for (int x1 : first_period_choices(space, budget)) {
        Budget slice = section(space, budget, {x1});
        pooled = set_union(pooled, max_set(slice, pref_rest));
    }
    return max_set(pooled, pref_first);
}

// ---------------------------------------------------------------------------
// Prediction and verification

struct Prediction {
    std::vector<OutcomeId> satisfying;           // outcomes that satisfy the model equations
    bool unique = false;                         // exactly one satisfying outcome
    std::vector<OutcomeId> sophisticated_max;    // max(M_1, pref_1); Sophisticated only
};

namespace detail {

/// Walks the naive path: the first agent's unique plan pins period 1, each
/// later agent re-optimizes on the realized prefix, and every step must have
/// a unique maximizer. Returns the resulting outcome, or nothing when some
/// step's maximizer is not unique.
inline std::optional<OutcomeId> naive_path(const ChoiceSpace& space, const Budget& budget,
                                           const PreferenceProfile& profile) {
    const int T = space.periods();
    std::vector<int> prefix;
    for (int t = 1; t < T; ++t) {
        auto ms = max_set(section(space, budget, prefix), profile.at(t - 1));
        if (ms.size() != 1) return std::nullopt;
        prefix.push_back(space.coord_of(ms.front(), t - 1));
        if (section(space, budget, prefix).empty())
            throw std::logic_error("internal: chosen coordinate has no continuation");
    }
    auto last = max_set(section(space, budget, prefix), profile.at(T - 1));
    if (last.size() != 1) return std::nullopt;
    return last.front();
}

inline bool nash_ok(const ChoiceSpace& space, const Budget& budget,
                    const PreferenceProfile& profile, OutcomeId x, bool strict) {
    const int T = space.periods();
    for (int t = 1; t <= T; ++t) {
        Budget sec = (t == T) ? section_at(space, budget, x, T - 1)
                              : section_fixing_others(space, budget, x, t - 1);
        auto ms = max_set(sec, profile.at(t - 1));
        const bool need_singleton = strict || t == T;
        if (need_singleton) {
            if (ms.size() != 1 || ms.front() != x) return false;
        } else {
            if (!set_contains(ms, x)) return false;
        }
    }
    return true;
}

}  // namespace detail

inline Prediction predict(const ChoiceSpace& space, const Budget& budget,
                          const PreferenceProfile& profile, ModelKind model) {
    Prediction p;
    switch (model) {
        case ModelKind::Sophisticated: {
            auto sets = backward_induction_sets(space, budget, profile);
            p.sophisticated_max = max_set(sets.root(), profile.at(0));
            if (p.sophisticated_max.size() == 1) p.satisfying = p.sophisticated_max;
            break;
        }
        case ModelKind::Naive: {
            if (auto x = detail::naive_path(space, budget, profile)) p.satisfying = {*x};
            break;
        }
        case ModelKind::NaiveNash:
        case ModelKind::StrictNaiveNash: {
            const bool strict = model == ModelKind::StrictNaiveNash;
            for (OutcomeId x : budget.members)
                if (detail::nash_ok(space, budget, profile, x, strict)) p.satisfying.push_back(x);
            break;
        }
    }
    p.unique = p.satisfying.size() == 1;
    return p;
}

struct ObservationDiagnosis {
    int observation = 0;
    bool ok = true;
    std::string reason;
};

struct VerifyResult {
    bool ok = true;
    std::vector<ObservationDiagnosis> details;
};

/// Checks the model equations observation by observation for the observed
/// choices, reporting the first failing equation per observation.
inline VerifyResult verify(const Dataset& d, const PreferenceProfile& profile, ModelKind model) {
    VerifyResult r;
    if (static_cast<int>(profile.prefs.size()) != d.periods())
        throw std::invalid_argument("profile must have one preference per period");
    for (auto& p : profile.prefs)
        if (p.outcome_count() != d.space.outcome_count())
            throw std::invalid_argument("profile preference over the wrong outcome set");
    const int T = d.periods();
    for (std::size_t k = 0; k < d.k(); ++k) {
        const auto& obs = d.observations[k];
        ObservationDiagnosis diag;
        diag.observation = static_cast<int>(k);
        switch (model) {
            case ModelKind::Sophisticated: {
                auto sets = backward_induction_sets(d.space, obs.budget, profile);
                auto ms = max_set(sets.root(), profile.at(0));
                if (ms.size() != 1) {
                    diag.ok = false;
                    diag.reason = "first-period maximum over the induced menu is not unique";
                } else if (ms.front() != obs.choice) {
                    diag.ok = false;
                    diag.reason = "backward induction selects a different outcome";
                }
                break;
            }
            case ModelKind::Naive: {
                for (int t = 1; t < T && diag.ok; ++t) {
                    auto ms = max_set(section_at(d.space, obs.budget, obs.choice, t - 1),
                                      profile.at(t - 1));
                    if (ms.size() != 1) {
                        diag.ok = false;
                        diag.reason = "period " + std::to_string(t) + " maximizer not unique";
                    } else if (d.space.coord_of(ms.front(), t - 1) !=
                               d.space.coord_of(obs.choice, t - 1)) {
                        diag.ok = false;
                        diag.reason = "period " + std::to_string(t) +
                                      " plan leaves the observed path";
                    }
                }
                if (diag.ok) {
                    auto ms = max_set(section_at(d.space, obs.budget, obs.choice, T - 1),
                                      profile.at(T - 1));
                    if (ms.size() != 1 || ms.front() != obs.choice) {
                        diag.ok = false;
                        diag.reason = "final period does not uniquely select the observed outcome";
                    }
                }
                break;
            }
            case ModelKind::NaiveNash:
            case ModelKind::StrictNaiveNash: {
                const bool strict = model == ModelKind::StrictNaiveNash;
                for (int t = 1; t <= T && diag.ok; ++t) {
                    Budget sec = (t == T)
                                     ? section_at(d.space, obs.budget, obs.choice, T - 1)
                                     : section_fixing_others(d.space, obs.budget, obs.choice, t - 1);
                    auto ms = max_set(sec, profile.at(t - 1));
                    const bool need_singleton = strict || t == T;
                    if (need_singleton ? (ms.size() != 1 || ms.front() != obs.choice)
                                       : !set_contains(ms, obs.choice)) {
                        diag.ok = false;
                        diag.reason = "period " + std::to_string(t) +
                                      (need_singleton ? " does not uniquely select the choice"
                                                      : " choice is not maximal");
                    }
                }
                break;
            }
        }
        r.ok = r.ok && diag.ok;
        r.details.push_back(std::move(diag));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Constructions

struct ConstructionError : std::runtime_error {
    AxiomVerdict verdict;
    ConstructionError(const std::string& what, AxiomVerdict v)
        : std::runtime_error(what), verdict(std::move(v)) {}
};

namespace detail {

/// Deterministic topological order over distinct choice values: an edge
/// (k, s) of the relation puts k's choice strictly above s's. Remaining
/// outcomes follow in lexicographic order. Requires the relation acyclic.
inline Preference ranked_extension(const Dataset& d, const RevealedRelation& rel) {
    std::vector<OutcomeId> values;
    for (const auto& o : d.observations) values.push_back(o.choice);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::map<OutcomeId, std::size_t> idx;
    for (std::size_t i = 0; i < values.size(); ++i) idx[values[i]] = i;

    const std::size_t m = values.size();
    std::vector<std::set<std::size_t>> above(m);  // nodes that must precede
    for (const auto& e : rel.edges) {
        OutcomeId hi = d.observations[e.first].choice;
        OutcomeId lo = d.observations[e.second].choice;
        if (hi != lo) above[idx[lo]].insert(idx[hi]);
    }
    std::vector<bool> placed(m, false);
    std::vector<OutcomeId> order;
    for (std::size_t step = 0; step < m; ++step) {
        std::size_t pick = m;
        for (std::size_t i = 0; i < m; ++i) {
            if (placed[i]) continue;
            bool ready = true;
            for (std::size_t j : above[i])
                if (!placed[j]) { ready = false; break; }
            if (ready && (pick == m || values[i] < values[pick])) pick = i;
        }
        if (pick == m) throw std::logic_error("internal: relation not acyclic");
        placed[pick] = true;
        order.push_back(values[pick]);
    }
    std::vector<OutcomeId> rest;
    for (OutcomeId id = 0; id < d.space.outcome_count(); ++id)
        if (idx.find(id) == idx.end()) rest.push_back(id);
    order.insert(order.end(), rest.begin(), rest.end());
    return Preference::from_ranking(d.space, order);
}

/// Linear order realizing an elimination record: the picked elements in
/// elimination order on top (first pick best), everything else below.
inline Preference chain_preference(const Dataset& d, const EliminationRecord& rec) {
    std::vector<OutcomeId> order;
    for (OutcomeId y : rec.picks)
        if (std::find(order.begin(), order.end(), y) == order.end()) order.push_back(y);
    for (OutcomeId id = 0; id < d.space.outcome_count(); ++id)
        if (std::find(order.begin(), order.end(), id) == order.end()) order.push_back(id);
    return Preference::from_ranking(d.space, order);
}

inline void require_verified(const Dataset& d, const PreferenceProfile& profile,
                             ModelKind model, const char* who) {
    auto res = verify(d, profile, model);
    if (!res.ok) {
        std::string why = who + std::string(": constructed profile failed verification");
        for (const auto& diag : res.details)
            if (!diag.ok)
                why += "; observation " + std::to_string(diag.observation) + ": " + diag.reason;
        throw std::logic_error(why);
    }
}

}  // namespace detail

inline bool distinct_first_period_choices(const Dataset& d) {
    std::vector<int> xs;
    for (const auto& o : d.observations) xs.push_back(d.space.coord_of(o.choice, 0));
    std::sort(xs.begin(), xs.end());
    return std::adjacent_find(xs.begin(), xs.end()) == xs.end();
}

/// Naive rationalization: the final period extends the last-period revealed
/// relation with observed choices above everything unobserved; every earlier
/// period carries the elimination chain of the subset condition.
inline PreferenceProfile construct_naive(const Dataset& d) {
    const int T = d.periods();
    AxiomVerdict sarp = (T == 2) ? check_nsarp(d) : check_tsarp(d, T);
    if (!sarp.holds()) throw ConstructionError("dataset violates " + sarp.axiom, sarp);
    AxiomVerdict cond = (T == 2) ? check_condition1(d) : check_condition5(d);
    if (!cond.holds()) throw ConstructionError("dataset violates " + cond.axiom, cond);

    PreferenceProfile profile;
    profile.prefs.resize(static_cast<std::size_t>(T), Preference::total_indifference(d.space));
    for (const auto& rec : cond.eliminations)
        if (rec.t < T) profile.prefs[static_cast<std::size_t>(rec.t - 1)] =
            detail::chain_preference(d, rec);
    profile.prefs[static_cast<std::size_t>(T - 1)] =
        detail::ranked_extension(d, build_relation(d, RelationKind::RT));
    detail::require_verified(d, profile, ModelKind::Naive, "construct_naive");
    return profile;
}

/// Naive Nash rationalization: the final period pins choices as unique
/// optima, all earlier periods are totally indifferent.
inline PreferenceProfile construct_nash(const Dataset& d) {
    const int T = d.periods();
    AxiomVerdict sarp = (T == 2) ? check_nsarp(d) : check_tsarp(d, T);
    if (!sarp.holds()) throw ConstructionError("dataset violates " + sarp.axiom, sarp);
    PreferenceProfile profile;
    profile.prefs.resize(static_cast<std::size_t>(T), Preference::total_indifference(d.space));
    profile.prefs[static_cast<std::size_t>(T - 1)] =
        detail::ranked_extension(d, build_relation(d, RelationKind::RT));
    detail::require_verified(d, profile, ModelKind::NaiveNash, "construct_nash");
    return profile;
}

/// Strict naive Nash rationalization: each period extends its own
/// period-level revealed relation with observed choices on top.
inline PreferenceProfile construct_strict_nash(const Dataset& d) {
    const int T = d.periods();
    for (int t = 1; t <= T; ++t) {
        AxiomVerdict v = check_tsarp(d, t);
        if (!v.holds())
            throw ConstructionError("dataset violates " + std::to_string(t) + "-sarp", v);
    }
    PreferenceProfile profile;
    for (int t = 1; t <= T; ++t)
        profile.prefs.push_back(
            detail::ranked_extension(d, build_relation(d, RelationKind::TLevel, t)));
    detail::require_verified(d, profile, ModelKind::StrictNaiveNash, "construct_strict_nash");
    return profile;
}

/// Sophisticated rationalization under pairwise-distinct first-period
/// choices: the first period extends the nested-section revealed relation;
/// the second period ranks, within each observed first-period slice, the
/// out-of-section part of the slice above the observed choice and the
/// observed choice above the rest of its section. Later periods reuse the
/// second-period preference.
inline PreferenceProfile construct_sophisticated(const Dataset& d) {
    if (!distinct_first_period_choices(d)) {
        AxiomVerdict v;
        v.axiom = "distinct-x1";
        v.result = Verdict3::Fails;
        v.note = "duplicate first-period choices are outside the characterized case";
        throw ConstructionError("duplicate first-period choices", v);
    }
    AxiomVerdict cond2 = check_condition2(d);
    if (!cond2.holds()) throw ConstructionError("dataset violates condition2", cond2);

    Preference first = detail::ranked_extension(d, build_relation(d, RelationKind::R1));

    std::map<int, std::size_t> chosen_by;  // first coordinate -> observation
    for (std::size_t k = 0; k < d.k(); ++k)
        chosen_by[d.space.coord_of(d.observations[k].choice, 0)] = k;
    std::vector<OutcomeId> order;
    for (int x1 = 0; x1 < d.space.size(0); ++x1) {
        std::vector<OutcomeId> slice;
        for (OutcomeId id = 0; id < d.space.outcome_count(); ++id)
            if (d.space.coord_of(id, 0) == x1) slice.push_back(id);
        auto it = chosen_by.find(x1);
        if (it == chosen_by.end()) {
            order.insert(order.end(), slice.begin(), slice.end());
            continue;
        }
        const auto& obs = d.observations[it->second];
        auto sec = section_at(d.space, obs.budget, obs.choice, 1).members;
        for (OutcomeId id : slice)
            if (!set_contains(sec, id)) order.push_back(id);
        order.push_back(obs.choice);
        for (OutcomeId id : sec)
            if (id != obs.choice) order.push_back(id);
    }
    Preference rest = Preference::from_ranking(d.space, order);

    PreferenceProfile profile;
    profile.prefs.push_back(first);
    for (int t = 2; t <= d.periods(); ++t) profile.prefs.push_back(rest);
    detail::require_verified(d, profile, ModelKind::Sophisticated, "construct_sophisticated");
    return profile;
}

}  // namespace onpath

#endif  // ONPATH_RATIONALIZE_HPP
