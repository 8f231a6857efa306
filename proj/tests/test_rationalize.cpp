#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "onpath/rationalize.hpp"
#include "onpath/simgen.hpp"

using namespace onpath;
using test_helpers::load_figure;
using test_helpers::make_dataset;

namespace {

Dataset random_dataset(std::uint64_t seed, std::vector<int> sizes, int k, double density,
                       bool distinct_x1) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.sizes = std::move(sizes);
    cfg.k = k;
    cfg.density = density;
    cfg.distinct_x1 = distinct_x1;
    return random_choices(random_instance(cfg), cfg);
}

}  // namespace

TEST_CASE("backward induction on a two-slice example") {
    ChoiceSpace space{{{"a", "b"}, {"c", "d"}}};
    Budget full = Budget::from_ids({0, 1, 2, 3});
    // outcomes: 0=(a,c) 1=(a,d) 2=(b,c) 3=(b,d)
    PreferenceProfile profile;
    profile.prefs.push_back(Preference::from_ranking(space, {2, 1, 0, 3}));  // (b,c) first
    profile.prefs.push_back(Preference::from_ranking(space, {1, 0, 2, 3}));  // (a,d) first

    SECTION("sophisticated: slice maxima then the first agent's pick") {
        auto sets = backward_induction_sets(space, full, profile);
        CHECK(sets.root() == std::vector<OutcomeId>{1, 2});
        Prediction p = predict(space, full, profile, ModelKind::Sophisticated);
        CHECK(p.sophisticated_max == std::vector<OutcomeId>{2});
        CHECK(p.satisfying == std::vector<OutcomeId>{2});
        CHECK(p.unique);
    }

    SECTION("naive: the plan pins period 1, the follower re-optimizes") {
        Prediction p = predict(space, full, profile, ModelKind::Naive);
        CHECK(p.satisfying == std::vector<OutcomeId>{2});
    }

    SECTION("recursion invariants: last-period menus are the raw sections") {
        auto sets = backward_induction_sets(space, full, profile);
        std::vector<OutcomeId> pooled;
        for (int x1 = 0; x1 < 2; ++x1) {
            auto menu = sets.menu.at({x1});
            CHECK(menu == section(space, full, {x1}).members);
            pooled = set_union(pooled, max_set(menu, profile.at(1)));
        }
        CHECK(sets.root() == pooled);
    }
}

TEST_CASE("naive-Nash under total indifference keeps only the final-period bite") {
    // Three periods, one alternative in the last period: sections are
    // singletons, so every outcome satisfies the equations.
    ChoiceSpace space{{{"a", "b"}, {"c", "d"}, {"z"}}};
    Budget full = Budget::from_ids({0, 1, 2, 3});
    PreferenceProfile indiff;
    for (int t = 0; t < 3; ++t) indiff.prefs.push_back(Preference::total_indifference(space));
    Prediction p = predict(space, full, indiff, ModelKind::NaiveNash);
    CHECK(p.satisfying == full.members);
}

TEST_CASE("verify rejects strict-Nash under total indifference with conflicting data") {
    Dataset d = make_dataset({2, 2}, {{{{0, 0}, {0, 1}}, {0, 0}},
                                      {{{0, 0}, {0, 1}}, {0, 1}}});
    PreferenceProfile indiff;
    indiff.prefs.push_back(Preference::total_indifference(d.space));
    indiff.prefs.push_back(Preference::total_indifference(d.space));
    auto res = verify(d, indiff, ModelKind::StrictNaiveNash);
    CHECK_FALSE(res.ok);
    CHECK_FALSE(res.details[0].ok);
}

TEST_CASE("constructions refuse datasets that fail their axioms") {
    CHECK_THROWS_AS(construct_naive(load_figure(1)), ConstructionError);   // N-SARP fails
    CHECK_THROWS_AS(construct_naive(load_figure(2)), ConstructionError);   // condition 1 fails
    CHECK_THROWS_AS(construct_sophisticated(load_figure(3)), ConstructionError);
    CHECK_THROWS_AS(construct_strict_nash(load_figure(4)), ConstructionError);

    SECTION("the carried witness re-verifies") {
        try {
            construct_sophisticated(load_figure(3));
            FAIL("expected a construction error");
        } catch (const ConstructionError& e) {
            CHECK(e.verdict.axiom == "condition2");
            REQUIRE(e.verdict.cycle.has_value());
        }
    }

    SECTION("duplicate first-period choices are an unsupported case") {
        Dataset d = make_dataset({2, 2}, {{{{0, 0}, {0, 1}}, {0, 0}},
                                          {{{0, 0}, {0, 1}}, {0, 0}}});
        CHECK_THROWS_AS(construct_sophisticated(d), ConstructionError);
    }
}

TEST_CASE("constructions on the figures that admit them") {
    SECTION("figure 3 is strict-Nash rationalizable") {
        Dataset fig3 = load_figure(3);
        PreferenceProfile profile = construct_strict_nash(fig3);
        CHECK(verify(fig3, profile, ModelKind::StrictNaiveNash).ok);
    }

    SECTION("single observation is sophisticated rationalizable") {
        Dataset solo = make_dataset({2, 2}, {{{{0, 0}, {0, 1}, {1, 0}}, {0, 1}}});
        PreferenceProfile profile = construct_sophisticated(solo);
        CHECK(verify(solo, profile, ModelKind::Sophisticated).ok);
    }

    SECTION("vacuous relations: distinct choices in both coordinates") {
        // The diagonal budget makes every period-level section a singleton,
        // so both revealed relations are empty and any observed-on-top
        // order rationalizes.
        Dataset d = make_dataset({2, 2}, {{{{0, 0}, {1, 1}}, {0, 0}},
                                          {{{0, 0}, {1, 1}}, {1, 1}}});
        for (int t = 1; t <= 2; ++t)
            CHECK(build_relation(d, RelationKind::TLevel, t).edges.empty());
        PreferenceProfile profile = construct_strict_nash(d);
        CHECK(verify(d, profile, ModelKind::StrictNaiveNash).ok);
    }
}

TEST_CASE("construct/verify round trips on random admissible datasets") {
    std::uint64_t seed = test_helpers::base_seed() + 211;
    int naive_ok = 0, soph_ok = 0, strict_ok = 0, nash_ok = 0;
    for (int trial = 0; trial < 1500; ++trial) {
        Dataset d = random_dataset(seed + static_cast<std::uint64_t>(trial),
                                   trial % 3 == 2 ? std::vector<int>{2, 2, 2}
                                                  : std::vector<int>{trial % 2 ? 3 : 2, 3},
                                   2 + trial % 2, 0.55 + 0.05 * (trial % 8), trial % 2 == 0);
        try {
            PreferenceProfile p = construct_naive(d);
            CHECK(verify(d, p, ModelKind::Naive).ok);
            ++naive_ok;
        } catch (const ConstructionError&) {}
        try {
            PreferenceProfile p = construct_nash(d);
            CHECK(verify(d, p, ModelKind::NaiveNash).ok);
            ++nash_ok;
        } catch (const ConstructionError&) {}
        try {
            PreferenceProfile p = construct_strict_nash(d);
            CHECK(verify(d, p, ModelKind::StrictNaiveNash).ok);
            ++strict_ok;
        } catch (const ConstructionError&) {}
        if (distinct_first_period_choices(d)) {
            try {
                PreferenceProfile p = construct_sophisticated(d);
                CHECK(verify(d, p, ModelKind::Sophisticated).ok);
                ++soph_ok;
            } catch (const ConstructionError&) {}
        }
    }
    // the suites must actually exercise the success paths
    CHECK(naive_ok > 200);
    CHECK(nash_ok > 200);
    CHECK(strict_ok > 200);
    CHECK(soph_ok > 200);
}

TEST_CASE("path independence of maximization over unions") {
    std::uint64_t seed = test_helpers::base_seed() + 223;
    ChoiceSpace space{{{"a", "b"}, {"c", "d", "e"}}};
    auto g = rng::stream(seed, 3);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int trial = 0; trial < 500; ++trial) {
        Preference pref = trial % 2 ? random_weak(space, g) : random_linear(space, g);
        std::vector<OutcomeId> a, b;
        for (OutcomeId id = 0; id < space.outcome_count(); ++id) {
            if (coin(g)) a.push_back(id);
            if (coin(g)) b.push_back(id);
        }
        if (a.empty() || b.empty()) continue;
        auto unioned = set_union(a, b);
        auto lhs = max_set(unioned, pref);
        auto pooled = set_union(max_set(a, pref), max_set(b, pref));
        auto rhs = max_set(pooled, pref);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("a shared later-period preference collapses to the composite two-period view") {
    std::uint64_t seed = test_helpers::base_seed() + 227;
    for (int trial = 0; trial < 300; ++trial) {
        GenConfig cfg;
        cfg.seed = seed + static_cast<std::uint64_t>(trial);
        cfg.sizes = {2, 2, 2};
        cfg.k = 1;
        cfg.density = 0.7;
        Skeleton sk = random_instance(cfg);
        auto g = rng::stream(cfg.seed, 5);
        Preference first = random_linear(sk.space, g);
        Preference rest = trial % 2 ? random_weak(sk.space, g) : random_linear(sk.space, g);
        PreferenceProfile profile;
        profile.prefs = {first, rest, rest};

        auto sets = backward_induction_sets(sk.space, sk.budgets[0], profile);
        auto recursive = max_set(sets.root(), first);
        auto composite = composite_two_period_max(sk.space, sk.budgets[0], first, rest);
        CHECK(recursive == composite);
    }
}

TEST_CASE("constructions are deterministic") {
    Dataset fig3 = load_figure(3);
    auto a = construct_strict_nash(fig3);
    auto b = construct_strict_nash(fig3);
    REQUIRE(a.prefs.size() == b.prefs.size());
    for (std::size_t t = 0; t < a.prefs.size(); ++t) CHECK(a.prefs[t] == b.prefs[t]);
}
