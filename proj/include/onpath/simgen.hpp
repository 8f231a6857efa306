#ifndef ONPATH_SIMGEN_HPP
#define ONPATH_SIMGEN_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "onpath/core.hpp"
#include "onpath/oracle.hpp"
#include "onpath/rationalize.hpp"

// Deterministic random generation of spaces, budgets and preference
// profiles, plus forward simulation of each behavioral model. Budgets are
// drawn from per-observation substreams derived by seed hashing, so
// parallel and serial generation emit identical datasets.

namespace onpath {

struct GenConfig {
    std::uint64_t seed = 1;
    std::vector<int> sizes;  // per-period alternative counts
    int k = 2;
    double density = 0.8;    // inclusion probability per outcome
    bool distinct_x1 = false;
    ModelKind model = ModelKind::Sophisticated;
    OrderClass order_class = OrderClass::Linear;
};

struct Skeleton {
    ChoiceSpace space;
    std::vector<Budget> budgets;
};

struct GenError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Substream for observation k of run `seed`; attempt folds in resamples.
inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t k, std::uint64_t attempt = 0) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(0x517cc1b727220a95ull + k) ^
                                      splitmix64(0xd1b54a32d192ed03ull * (attempt + 1))));
}

}  // namespace rng

namespace detail_gen {

inline ChoiceSpace make_space(const std::vector<int>& sizes) {
    ChoiceSpace space;
    for (std::size_t t = 0; t < sizes.size(); ++t) {
        std::vector<std::string> labels;
        for (int i = 0; i < sizes[t]; ++i)
            labels.push_back("p" + std::to_string(t + 1) + "a" + std::to_string(i));
        space.alternatives.push_back(std::move(labels));
    }
    if (!space.valid()) throw GenError("sizes do not describe a valid space");
    return space;
}

inline Budget random_budget(const ChoiceSpace& space, std::mt19937_64& g, double density) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = space.outcome_count();
    for (int tries = 0; tries < 100; ++tries) {
        std::vector<OutcomeId> ids;
        for (OutcomeId id = 0; id < n; ++id)
            if (density >= 1.0 || u(g) < density) ids.push_back(id);
        if (!ids.empty()) return Budget::from_ids(std::move(ids));
    }
    throw GenError("could not draw a nonempty budget");
}

/// Distinct representatives of the budgets' first-period projections
/// (simple augmenting-path matching; everything here is tiny).
inline bool has_distinct_representatives(const ChoiceSpace& space,
                                         const std::vector<Budget>& budgets) {
    const int nx1 = space.size(0);
    std::vector<std::vector<int>> options;
    for (const auto& b : budgets) options.push_back(first_period_choices(space, b));
    std::vector<int> owner(static_cast<std::size_t>(nx1), -1);
    std::function<bool(int, std::vector<bool>&)> augment = [&](int k, std::vector<bool>& seen) {
        for (int x : options[static_cast<std::size_t>(k)]) {
            if (seen[static_cast<std::size_t>(x)]) continue;
            seen[static_cast<std::size_t>(x)] = true;
            if (owner[static_cast<std::size_t>(x)] < 0 ||
                augment(owner[static_cast<std::size_t>(x)], seen)) {
                owner[static_cast<std::size_t>(x)] = k;
                return true;
            }
        }
        return false;
    };
    for (std::size_t k = 0; k < budgets.size(); ++k) {
        std::vector<bool> seen(static_cast<std::size_t>(nx1), false);
        if (!augment(static_cast<int>(k), seen)) return false;
    }
    return true;
}

}  // namespace detail_gen

/// Budgets only, no choices. Reproducible from the seed; under the
/// distinct-x1 flag the budgets admit pairwise distinct first-period
/// choices across observations.
inline Skeleton random_instance(const GenConfig& cfg) {
    if (cfg.sizes.size() < 2) throw GenError("need at least 2 periods");
    if (cfg.k < 1) throw GenError("need at least one observation");
    if (cfg.density <= 0.0 || cfg.density > 1.0) throw GenError("density must lie in (0,1]");
    Skeleton sk;
    sk.space = detail_gen::make_space(cfg.sizes);
    if (cfg.distinct_x1 && cfg.k > cfg.sizes[0])
        throw GenError("distinct-x1 impossible: more observations than first-period alternatives");
    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
        sk.budgets.clear();
        for (int k = 0; k < cfg.k; ++k) {
            auto g = rng::stream(cfg.seed, static_cast<std::uint64_t>(k), attempt);
            sk.budgets.push_back(detail_gen::random_budget(sk.space, g, cfg.density));
        }
        if (!cfg.distinct_x1 || detail_gen::has_distinct_representatives(sk.space, sk.budgets))
            return sk;
    }
    throw GenError("could not satisfy distinct-x1 within the resampling budget");
}

inline Preference random_linear(const ChoiceSpace& space, std::mt19937_64& g) {
    std::vector<OutcomeId> order(space.outcome_count());
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), g);
    return Preference::from_ranking(space, order);
}

/// Random ordered partition: a random permutation cut at a random subset of
/// gaps (stars and bars over the shuffled outcomes).
inline Preference random_weak(const ChoiceSpace& space, std::mt19937_64& g) {
    std::vector<OutcomeId> order(space.outcome_count());
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), g);
    std::bernoulli_distribution cut(0.5);
    std::vector<std::vector<OutcomeId>> blocks(1);
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0 && cut(g)) blocks.emplace_back();
        blocks.back().push_back(order[i]);
    }
    return Preference::from_blocks(space, std::move(blocks));
}

inline PreferenceProfile random_profile(const ChoiceSpace& space, OrderClass cls,
                                        std::mt19937_64& g) {
    PreferenceProfile p;
    for (int t = 0; t < space.periods(); ++t)
        p.prefs.push_back(cls == OrderClass::Linear ? random_linear(space, g)
                                                    : random_weak(space, g));
    return p;
}

struct SimulateResult {
    Dataset dataset;
    int resampled = 0;  // budgets replaced because the model made no prediction
};

/// Plays the model on each budget. Budgets whose prediction set is empty
/// (no strict Nash outcome, a tie blocking the naive walk, ...) are
/// resampled from the observation's seed stream; the count is reported.
inline SimulateResult simulate(const Skeleton& sk, const PreferenceProfile& profile,
                               ModelKind model, const GenConfig& cfg) {
    SimulateResult res;
    res.dataset.space = sk.space;
    std::vector<bool> used_x1(static_cast<std::size_t>(sk.space.size(0)), false);
    for (std::size_t k = 0; k < sk.budgets.size(); ++k) {
        Budget budget = sk.budgets[k];
        bool placed = false;
        for (std::uint64_t attempt = 0; attempt < 100 && !placed; ++attempt) {
            if (attempt > 0) {
                auto g = rng::stream(cfg.seed, k, 1000 + attempt);
                budget = detail_gen::random_budget(sk.space, g, cfg.density);
                ++res.resampled;
            }
            Prediction pred = predict(sk.space, budget, profile, model);
            for (OutcomeId x : pred.satisfying) {
                const int x1 = sk.space.coord_of(x, 0);
                if (cfg.distinct_x1 && used_x1[static_cast<std::size_t>(x1)]) continue;
                used_x1[static_cast<std::size_t>(x1)] = true;
                res.dataset.observations.push_back(Observation{budget, x});
                placed = true;
                break;
            }
        }
        if (!placed) throw GenError("simulation exceeded the resampling budget");
    }
    return res;
}

/// Arbitrary (model-free) choices: a uniform draw from each budget,
/// respecting the distinct-x1 flag. This is the fuel for the axiom-vs-oracle
/// equivalence harnesses, where choices must not be model-generated.
inline Dataset random_choices(const Skeleton& sk, const GenConfig& cfg) {
    Dataset d;
    d.space = sk.space;
    std::vector<bool> used_x1(static_cast<std::size_t>(sk.space.size(0)), false);
    for (std::size_t k = 0; k < sk.budgets.size(); ++k) {
        Budget budget = sk.budgets[k];
        bool placed = false;
        for (std::uint64_t attempt = 0; attempt < 100 && !placed; ++attempt) {
            auto g = rng::stream(cfg.seed, k, 2000 + attempt);
            if (attempt > 0) budget = detail_gen::random_budget(sk.space, g, cfg.density);
            std::vector<OutcomeId> pool = budget.members;
            std::shuffle(pool.begin(), pool.end(), g);
            for (OutcomeId x : pool) {
                const int x1 = sk.space.coord_of(x, 0);
                if (cfg.distinct_x1 && used_x1[static_cast<std::size_t>(x1)]) continue;
                used_x1[static_cast<std::size_t>(x1)] = true;
                d.observations.push_back(Observation{budget, x});
                placed = true;
                break;
            }
        }
        if (!placed) throw GenError("choice drawing exceeded the resampling budget");
    }
    return d;
}

}  // namespace onpath

#endif  // ONPATH_SIMGEN_HPP
