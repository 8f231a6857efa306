#ifndef ONPATH_ORACLE_HPP
#define ONPATH_ORACLE_HPP

#include <atomic>
#include <map>
#include <mutex>
#include <cstdint>
#include <future>
#include <optional>
#include <thread>
#include <vector>

#include "onpath/core.hpp"
#include "onpath/rationalize.hpp"

// Brute-force ground truth: enumerate preference profiles over small outcome
// spaces and decide rationalizability by definition. The literal mode scans
// the full profile product; the decomposed mode exploits that every model
// except the sophisticated one constrains each period's preference
// independently, and that the sophisticated first-period preference exists
// exactly when the induced strict constraints are acyclic.

namespace onpath {

enum class OrderClass { Linear, Weak };

struct SizeGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OracleLimits {
    std::size_t max_outcomes_linear = 6;
    std::size_t max_outcomes_weak = 6;
    std::uint64_t max_profiles = 2'000'000;
    unsigned threads = 1;  // >1 enables the chunked parallel scan (literal mode)
};

/// Exhaustive, duplicate-free, deterministic enumeration of preferences.
/// Linear: all |X|! total orders in lexicographic ranking order. Weak: all
/// ordered partitions, enumerated as surjections onto 1..m blocks for
/// m = 1..|X| in lexicographic label order.
inline std::vector<Preference> enumerate_preferences(const ChoiceSpace& space, OrderClass cls,
                                                     const OracleLimits& limits = {}) {
    const std::size_t n = space.outcome_count();
    std::vector<Preference> out;
    if (cls == OrderClass::Linear) {
        if (n > limits.max_outcomes_linear)
            throw SizeGuardError("linear preference enumeration refuses |X| > " +
                                 std::to_string(limits.max_outcomes_linear));
        std::vector<OutcomeId> perm(n);
        std::iota(perm.begin(), perm.end(), 0u);
        do {
            out.push_back(Preference::from_ranking(space, perm));
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        if (n > limits.max_outcomes_weak)
            throw SizeGuardError("weak preference enumeration refuses |X| > " +
                                 std::to_string(limits.max_outcomes_weak));
        for (std::size_t m = 1; m <= n; ++m) {
            std::vector<std::size_t> label(n, 0);
            while (true) {
                std::vector<bool> used(m, false);
                for (std::size_t l : label) used[l] = true;
                bool surjective = true;
                for (bool u : used) surjective = surjective && u;
                if (surjective) {
                    std::vector<std::vector<OutcomeId>> blocks(m);
                    for (std::size_t i = 0; i < n; ++i)
                        blocks[label[i]].push_back(static_cast<OutcomeId>(i));
                    out.push_back(Preference::from_blocks(space, std::move(blocks)));
                }
                std::size_t pos = n;
                while (pos > 0 && label[pos - 1] == m - 1) label[--pos] = 0;
                if (pos == 0) break;
                ++label[pos - 1];
            }
        }
    }
    return out;
}

/// Memoized enumeration keyed by outcome count and class; the streams are
/// deterministic, so sharing them across calls changes nothing.
inline const std::vector<Preference>& enumerate_preferences_cached(const ChoiceSpace& space,
                                                                   OrderClass cls,
                                                                   const OracleLimits& limits = {}) {
    static std::map<std::pair<std::size_t, int>, std::vector<Preference>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(space.outcome_count(), static_cast<int>(cls));
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, enumerate_preferences(space, cls, limits)).first;
    return it->second;
}

/// Model equations for the observed choices only, no diagnostics.
inline bool profile_fits(const Dataset& d, const PreferenceProfile& profile, ModelKind model) {
    const int T = d.periods();
    for (const auto& obs : d.observations) {
        switch (model) {
            case ModelKind::Sophisticated: {
                std::vector<int> prefix;
                auto root = detail::menus_from(d.space, obs.budget, profile, prefix, nullptr);
                auto ms = max_set(root, profile.at(0));
                if (ms.size() != 1 || ms.front() != obs.choice) return false;
                break;
            }
            case ModelKind::Naive: {
                bool ok = true;
                for (int t = 1; t < T && ok; ++t) {
                    auto ms = max_set(section_at(d.space, obs.budget, obs.choice, t - 1),
                                      profile.at(t - 1));
                    ok = ms.size() == 1 && d.space.coord_of(ms.front(), t - 1) ==
                                               d.space.coord_of(obs.choice, t - 1);
                }
                if (ok) {
                    auto ms = max_set(section_at(d.space, obs.budget, obs.choice, T - 1),
                                      profile.at(T - 1));
                    ok = ms.size() == 1 && ms.front() == obs.choice;
                }
                if (!ok) return false;
                break;
            }
            case ModelKind::NaiveNash:
            case ModelKind::StrictNaiveNash:
                if (!detail::nash_ok(d.space, obs.budget, profile,
                                     obs.choice, model == ModelKind::StrictNaiveNash))
                    return false;
                break;
        }
    }
    return true;
}

namespace oracle_detail {

inline PreferenceProfile profile_at_index(const std::vector<Preference>& prefs, int T,
                                          std::uint64_t index) {
    const std::uint64_t n = prefs.size();
    PreferenceProfile p;
    p.prefs.resize(static_cast<std::size_t>(T), prefs.front());
    for (int t = T - 1; t >= 0; --t) {
        p.prefs[static_cast<std::size_t>(t)] = prefs[static_cast<std::size_t>(index % n)];
        index /= n;
    }
    return p;
}

/// Outcome-level strict constraints "top -> below" are satisfiable by a
/// weak (equivalently, linear) order exactly when the digraph is acyclic;
/// the witness is the smallest-id-first topological order.
inline std::optional<Preference> linear_from_constraints(
    const ChoiceSpace& space, const std::vector<std::pair<OutcomeId, OutcomeId>>& edges) {
    const std::size_t n = space.outcome_count();
    std::vector<std::vector<OutcomeId>> above(n);
    for (auto [hi, lo] : edges) above[lo].push_back(hi);
    std::vector<bool> placed(n, false);
    std::vector<OutcomeId> order;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (placed[i]) continue;
            bool ready = true;
            for (OutcomeId j : above[i])
                if (!placed[j]) { ready = false; break; }
            if (ready) { pick = i; break; }
        }
        if (pick == n) return std::nullopt;  // cycle
        placed[pick] = true;
        order.push_back(static_cast<OutcomeId>(pick));
    }
    return Preference::from_ranking(space, order);
}

/// Whether one preference satisfies the period-t equations of the model for
/// every observation (the models other than the sophisticated one do not
/// couple periods).
inline bool period_fits(const Dataset& d, const Preference& p, ModelKind model, int t) {
    const int T = d.periods();
    for (const auto& obs : d.observations) {
        switch (model) {
            case ModelKind::Naive: {
                auto ms = max_set(section_at(d.space, obs.budget, obs.choice, t - 1), p);
                if (t < T) {
                    if (ms.size() != 1 || d.space.coord_of(ms.front(), t - 1) !=
                                              d.space.coord_of(obs.choice, t - 1))
                        return false;
                } else {
                    if (ms.size() != 1 || ms.front() != obs.choice) return false;
                }
                break;
            }
            case ModelKind::NaiveNash:
            case ModelKind::StrictNaiveNash: {
                Budget sec = (t == T)
                                 ? section_at(d.space, obs.budget, obs.choice, T - 1)
                                 : section_fixing_others(d.space, obs.budget, obs.choice, t - 1);
                auto ms = max_set(sec, p);
                const bool need_singleton = model == ModelKind::StrictNaiveNash || t == T;
                if (need_singleton ? (ms.size() != 1 || ms.front() != obs.choice)
                                   : !set_contains(ms, obs.choice))
                    return false;
                break;
            }
            case ModelKind::Sophisticated:
                throw std::logic_error("period_fits does not apply to the sophisticated model");
        }
    }
    return true;
}

}  // namespace oracle_detail

/// Plain product scan: the least profile index (lexicographic over per-period
/// preference indices) whose profile verifies, or none. With several threads
/// the index space is split into contiguous chunks and the reported witness
/// is still the globally least-indexed one.
inline std::optional<PreferenceProfile> rationalizable_literal(const Dataset& d, ModelKind model,
                                                               OrderClass cls,
                                                               const OracleLimits& limits = {}) {
    const auto& prefs = enumerate_preferences_cached(d.space, cls, limits);
    const int T = d.periods();
    std::uint64_t total = 1;
    for (int t = 0; t < T; ++t) {
        if (total > limits.max_profiles / prefs.size() + 1) break;
        total *= prefs.size();
    }
    if (total > limits.max_profiles)
        throw SizeGuardError("profile enumeration exceeds the configured bound");

    const unsigned workers =
        std::max(1u, std::min(limits.threads, std::thread::hardware_concurrency()));
    if (workers <= 1 || total < 4096) {
        for (std::uint64_t i = 0; i < total; ++i) {
            PreferenceProfile p = oracle_detail::profile_at_index(prefs, T, i);
            if (profile_fits(d, p, model)) return p;
        }
        return std::nullopt;
    }

    std::atomic<std::uint64_t> best{UINT64_MAX};
    const std::uint64_t chunk = (total + workers - 1) / workers;
    std::vector<std::future<void>> futs;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t lo = w * chunk;
        const std::uint64_t hi = std::min(total, lo + chunk);
        futs.push_back(std::async(std::launch::async, [&, lo, hi] {
            for (std::uint64_t i = lo; i < hi; ++i) {
                if (best.load(std::memory_order_relaxed) < lo) return;
                PreferenceProfile p = oracle_detail::profile_at_index(prefs, T, i);
                if (profile_fits(d, p, model)) {
                    std::uint64_t cur = best.load();
                    while (i < cur && !best.compare_exchange_weak(cur, i)) {}
                    return;
                }
            }
        }));
    }
    for (auto& f : futs) f.get();
    const std::uint64_t hit = best.load();
    if (hit == UINT64_MAX) return std::nullopt;
    return oracle_detail::profile_at_index(prefs, T, hit);
}

/// Period-decomposed search. For the naive and Nash families the model
/// equations split by period, so each period is searched independently.
/// For the sophisticated model the later-period preferences are scanned as
/// a product and the first-period preference is solved from the induced
/// strict constraints.
inline std::optional<PreferenceProfile> rationalizable_decomposed(const Dataset& d,
                                                                  ModelKind model, OrderClass cls,
                                                                  const OracleLimits& limits = {}) {
    const auto& prefs = enumerate_preferences_cached(d.space, cls, limits);
    const int T = d.periods();

    if (model != ModelKind::Sophisticated) {
        PreferenceProfile profile;
        for (int t = 1; t <= T; ++t) {
            bool found = false;
            for (const auto& p : prefs) {
                if (oracle_detail::period_fits(d, p, model, t)) {
                    profile.prefs.push_back(p);
                    found = true;
                    break;
                }
            }
            if (!found) return std::nullopt;
        }
        if (!profile_fits(d, profile, model))
            throw std::logic_error("internal: decomposed witness failed verification");
        return profile;
    }

    std::uint64_t total = 1;
    for (int t = 2; t <= T; ++t) {
        if (total > limits.max_profiles / prefs.size() + 1) break;
        total *= prefs.size();
    }
    if (total > limits.max_profiles)
        throw SizeGuardError("profile enumeration exceeds the configured bound");

    for (std::uint64_t i = 0; i < total; ++i) {
        PreferenceProfile rest = oracle_detail::profile_at_index(prefs, T - 1, i);
        PreferenceProfile padded;
        padded.prefs.push_back(prefs.front());  // placeholder, unused by the menus
        for (auto& p : rest.prefs) padded.prefs.push_back(p);

        std::vector<std::pair<OutcomeId, OutcomeId>> constraints;
        bool feasible = true;
        for (const auto& obs : d.observations) {
            std::vector<int> prefix;
            auto root = detail::menus_from(d.space, obs.budget, padded, prefix, nullptr);
            if (!set_contains(root, obs.choice)) { feasible = false; break; }
            for (OutcomeId y : root)
                if (y != obs.choice) constraints.emplace_back(obs.choice, y);
        }
        if (!feasible) continue;
        auto first = oracle_detail::linear_from_constraints(d.space, constraints);
        if (!first) continue;
        padded.prefs[0] = *first;
        if (!profile_fits(d, padded, ModelKind::Sophisticated))
            throw std::logic_error("internal: decomposed witness failed verification");
        return padded;
    }
    return std::nullopt;
}

/// Brute-force rationalizability, definition applied literally.
inline std::optional<PreferenceProfile> rationalizable_bruteforce(const Dataset& d,
                                                                  ModelKind model, OrderClass cls,
                                                                  const OracleLimits& limits = {}) {
    return rationalizable_literal(d, model, cls, limits);
}

}  // namespace onpath

#endif  // ONPATH_ORACLE_HPP
