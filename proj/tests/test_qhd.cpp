#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>

#include "helpers.hpp"
#include "onpath/qhd_repro.hpp"

using namespace onpath::qhd;
using Catch::Matchers::WithinAbs;

namespace {

QhdInstance thm2_instance() {
    return QhdInstance::make(CubicOnUnit{}, 0.8, 0.8, {3.1, 2.0, 1.0}, 0.694);
}

double fd_central(const std::function<double(double)>& f, double x, double h = 1e-5) {
    return (f(x + h) - f(x - h)) / (2 * h);
}

}  // namespace

TEST_CASE("agent 2's response") {
    SECTION("counterexample numbers") {
        QhdInstance inst = thm2_instance();
        Agent2Response r = agent2_response(inst, 0.04);
        CHECK_THAT(r.x2, WithinAbs(0.05, 1e-3));
        CHECK_THAT(r.x3, WithinAbs(0.47, 1e-3));
        CHECK_FALSE(r.boundary);
        CHECK(std::abs(r.foc_residual) < 1e-10);
        // budget exhaustion on the remaining income
        CHECK(std::abs(inst.p[1] * r.x2 + r.x3 - (inst.m - inst.p[0] * 0.04)) < 1e-10);
        // analytic response map value at the solved x2
        ResponseMap rm{inst};
        CHECK_THAT(rm.g(0.05), WithinAbs(0.46979, 1e-5));
        CHECK_THAT(rm.g(r.x2), WithinAbs(r.x3, 1e-10));
    }

    SECTION("no discounting splits the remainder evenly") {
        QhdInstance inst = QhdInstance::make(CubicOnUnit{}, 1.0, 1.0, {1.0, 1.0, 1.0}, 0.9);
        Agent2Response r = agent2_response(inst, 0.3);
        CHECK_THAT(r.x2, WithinAbs(0.3, 1e-12));
        CHECK_THAT(r.x3, WithinAbs(0.3, 1e-12));
    }

    SECTION("unit product collapses the response to the diagonal") {
        // beta delta p2 = 1 exactly
        QhdInstance inst = QhdInstance::make(CubicOnUnit{}, 0.5, 1.0, {1.0, 2.0, 1.0}, 0.8);
        ResponseMap rm{inst};
        CHECK(inst.A() == 1.0);
        for (double x2 : {0.1, 0.25, 0.4}) CHECK_THAT(rm.g(x2), WithinAbs(x2, 1e-15));
    }

    SECTION("infeasible first-period consumption") {
        QhdInstance inst = thm2_instance();
        CHECK_THROWS_AS(agent2_response(inst, 1.0), QhdError);
    }

    SECTION("interpolated utilities go through the bisection path") {
        auto u = build_marginal_interpolation(
            {{0.1, 1.0, -0.5}, {0.4, 0.8, -0.5}, {0.8, 0.5, -0.5}});
        QhdInstance inst = QhdInstance::make(u, 0.9, 0.9, {1.0, 1.0, 1.0}, 0.9);
        Agent2Response r = agent2_response(inst, 0.2);
        CHECK(std::abs(r.foc_residual) < 1e-10);
        CHECK(std::abs(r.x2 + r.x3 - 0.7) < 1e-10);
    }
}

TEST_CASE("equilibrium of the counterexample instance") {
    QhdInstance inst = thm2_instance();
    Equilibrium eq = equilibrium(inst);

    // The reduced objective decreases to an interior local minimum near
    // x2 = 0.030 and then increases all the way to the f = 0 corner, so the
    // global optimum parks the first period at zero. (The published interior
    // point (0.0106, 0.093, 0.475) is not stationary; see repro_theorem2.)
    CHECK(eq.at_boundary);
    CHECK_THAT(eq.x[0], WithinAbs(0.0, 1e-9));
    CHECK_THAT(eq.x[1], WithinAbs(0.1082988, 1e-6));
    CHECK_THAT(eq.x[2], WithinAbs(0.4774023, 1e-6));
    CHECK_THAT(eq.value, WithinAbs(0.29490068, 1e-8));

    REQUIRE_FALSE(eq.stationary.empty());
    const auto& s = eq.stationary.front();
    CHECK_THAT(s.x2, WithinAbs(0.0300, 2e-4));
    CHECK(s.local_min);

    SECTION("budget exhaustion at the optimum") {
        CHECK(std::abs(inst.p[0] * eq.x[0] + inst.p[1] * eq.x[1] + eq.x[2] - inst.m) < 1e-10);
    }
}

TEST_CASE("equilibrium on concave instances") {
    SECTION("symmetric instance picks equal consumption") {
        QhdInstance inst = QhdInstance::make(CubicOnUnit{}, 1.0, 1.0, {1.0, 1.0, 1.0}, 0.3);
        Equilibrium eq = equilibrium(inst);
        for (int i = 0; i < 3; ++i) CHECK_THAT(eq.x[i], WithinAbs(0.1, 1e-6));

        // a bundle whose residuals vanish shows up among the diagnostics
        FocResiduals r = foc_residuals({0.1, 0.1, 0.1}, inst);
        CHECK(std::abs(r.foc1) < 1e-8);
        CHECK(std::abs(r.foc2) < 1e-8);
        bool listed = false;
        for (const auto& s : eq.stationary) listed = listed || std::abs(s.x2 - 0.1) < 1e-6;
        CHECK(listed);
    }

    SECTION("unit-A prices from the large-dataset construction") {
        const double p1 = 5125.0 / 2304.0;
        const double m = p1 * 0.2 + 1.5625 * 0.2 + 0.2;
        QhdInstance inst = QhdInstance::make(CubicOnUnit{}, 0.8, 0.8, {p1, 1.5625, 1.0}, m);
        Equilibrium eq = equilibrium(inst);
        for (int i = 0; i < 3; ++i) CHECK_THAT(eq.x[i], WithinAbs(0.2, 1e-3));
    }
}

TEST_CASE("first-order residuals") {
    SECTION("counterexample data is stationary only at the printed precision") {
        FocResiduals r = foc_residuals({0.04, 0.05, 0.47}, thm2_instance());
        CHECK(r.foc2_rel < 2e-3);
        CHECK(r.foc1_rel < 2e-3);
        CHECK(r.foc2_rel > 1e-5);  // not an exact stationary point
    }

    SECTION("unit beta delta p2 zeroes the later agent's residual exactly") {
        QhdInstance inst = QhdInstance::make(CubicOnUnit{}, 0.25, 1.0, {1.0, 4.0, 1.0}, 0.9);
        FocResiduals r = foc_residuals({0.2, 0.2, 0.2}, inst);
        CHECK(r.foc2 == 0.0);
    }

    SECTION("the spec's one-third example is zero to machine precision") {
        QhdInstance inst = QhdInstance::make(CubicOnUnit{}, 1.0 / 3.0, 1.0, {1.0, 3.0, 1.0}, 1.0);
        FocResiduals r = foc_residuals({0.2, 0.2, 0.2}, inst);
        CHECK(std::abs(r.foc2) < 1e-15);
    }

    SECTION("fully symmetric bundle") {
        QhdInstance inst = QhdInstance::make(CubicOnUnit{}, 1.0, 1.0, {1.0, 1.0, 1.0}, 0.6);
        FocResiduals r = foc_residuals({0.2, 0.2, 0.2}, inst);
        CHECK(std::abs(r.foc2) < 1e-15);
        CHECK(std::abs(r.foc1) < 1e-14);
    }
}

TEST_CASE("focs certificates") {
    SECTION("equal consumption at the counterexample prices") {
        auto res = focs_rationalize({0.1, 0.1, 0.1}, {4.0, 3.0, 1.0});
        REQUIRE(res.certificate.has_value());
        const auto& c = *res.certificate;
        CHECK(c.lambda == 1.0);
        CHECK(c.delta == 1.0);
        CHECK_THAT(c.beta, WithinAbs(1.0 / 3.0, 1e-12));
        CHECK_THAT(c.mu[1], WithinAbs(3.0 / 8.0, 1e-12));
        CHECK(c.mu[0] == 1.0);
        CHECK(c.mu[2] == 1.0);
        for (double m : c.marginal) CHECK_THAT(m, WithinAbs(12.0, 1e-9));
        CHECK(verify_focs_certificate(c, {0.1, 0.1, 0.1}, {4.0, 3.0, 1.0}));
        CHECK_FALSE(c.strong);  // ties block the curvature witness
    }

    SECTION("decreasing prices with a dominant middle ratio certify any bundle") {
        // p1 > p2 > p3 and p2^2 > p1 p3: the n + v recipe applies.
        std::mt19937_64 g(test_helpers::base_seed() + 11);
        std::uniform_real_distribution<double> ux(0.05, 3.0);
        for (int trial = 0; trial < 100; ++trial) {
            std::array<double, 3> x{ux(g), ux(g), ux(g)};
            auto res = focs_rationalize(x, {2.0, 1.9, 1.0});
            REQUIRE(res.certificate.has_value());
            CHECK(res.certificate->method.find("footnote") != std::string::npos);
            CHECK(verify_focs_certificate(*res.certificate, x, {2.0, 1.9, 1.0}));
            if (x[0] != x[1] && x[1] != x[2] && x[0] != x[2]) CHECK(res.certificate->strong);
        }
    }

    SECTION("the exponential-refutation bundle has no certificate") {
        // Concavity forces m2 > m1 > m3 while the ratio equations would need
        // m1 m3 / m2^2 > p1 p3 / p2^2 = 2; the exhaustive grid agrees.
        auto res = focs_rationalize({3.0, 2.0, 4.0}, {8.0, 2.0, 1.0});
        CHECK_FALSE(res.certificate.has_value());
        CHECK(res.grid_points_checked == 200ull * 200ull * 200ull);
        CHECK(res.grid_best_violation > 0.0);
    }

    SECTION("repeated consumption with flat prices has no certificate") {
        auto res = focs_rationalize({2.0, 1.0, 1.0}, {1.0, 1.0, 1.0});
        CHECK_FALSE(res.certificate.has_value());
    }

    SECTION("certificate soundness on random instances") {
        std::mt19937_64 g(test_helpers::base_seed() + 13);
        std::uniform_real_distribution<double> ux(0.1, 2.0), up(0.5, 4.0);
        std::uniform_int_distribution<int> tie(0, 3);
        int found = 0;
        for (int trial = 0; trial < 120; ++trial) {
            std::array<double, 3> x{ux(g), ux(g), ux(g)};
            if (tie(g) == 0) x[1] = x[2];
            std::array<double, 3> p{up(g), up(g), 1.0};
            auto res = focs_rationalize(x, p);
            if (res.certificate) {
                ++found;
                CHECK(verify_focs_certificate(*res.certificate, x, p));
            }
        }
        CHECK(found > 10);
    }
}

TEST_CASE("implicit-function mu2") {
    SECTION("matches the response slope for the counterexample instance") {
        QhdInstance inst = thm2_instance();
        // consistent bundle: x2, x3 from the actual response at x1
        Agent2Response r = agent2_response(inst, 0.04);
        const double mu2 =
            strong_focs_mu2(inst.utility, inst.beta, inst.delta, inst.p[1], {0.04, r.x2, r.x3});
        const double h = 1e-6;
        const double s2p =
            (agent2_response(inst, 0.04 + h).x2 - agent2_response(inst, 0.04 - h).x2) / (2 * h);
        CHECK_THAT(mu2, WithinAbs(-s2p * inst.p[1] / inst.p[0], 1e-6));
        CHECK_THAT(mu2, WithinAbs(0.96008, 1e-4));
    }

    SECTION("symmetric curvature gives one half") {
        CHECK_THAT(strong_focs_mu2(CubicOnUnit{}, 1.0, 1.0, 1.0, {0.3, 0.2, 0.2}),
                   WithinAbs(0.5, 1e-15));
    }

    SECTION("vanishing curvature is a singularity") {
        CHECK_THROWS_AS(strong_focs_mu2(CubicOnUnit{}, 0.8, 0.8, 2.0, {0.1, 0.0, 0.0}), QhdError);
    }
}

TEST_CASE("marginal interpolation") {
    SECTION("single knot") {
        auto u = build_marginal_interpolation({{0.5, 1.0, -1.0}});
        CHECK_THAT(u.marginal(0.5), WithinAbs(1.0, 1e-15));
        CHECK_THAT(u.second(0.5), WithinAbs(-1.0, 1e-15));
    }

    SECTION("hits all six derivative targets at the counterexample knots") {
        const double a1 = 1 - 0.04 * 0.04, a2 = 1 - 0.05 * 0.05, a3 = 1 - 0.47 * 0.47;
        const double b1 = -0.7, b2 = -0.09, b3 = -1.1;
        auto u = build_marginal_interpolation({{0.04, a1, b1}, {0.05, a2, b2}, {0.47, a3, b3}});
        CHECK_THAT(u.marginal(0.04), WithinAbs(a1, 1e-10));
        CHECK_THAT(u.marginal(0.05), WithinAbs(a2, 1e-10));
        CHECK_THAT(u.marginal(0.47), WithinAbs(a3, 1e-10));
        CHECK_THAT(u.second(0.04), WithinAbs(b1, 1e-10));
        CHECK_THAT(u.second(0.05), WithinAbs(b2, 1e-10));
        CHECK_THAT(u.second(0.47), WithinAbs(b3, 1e-10));
    }

    SECTION("order-incompatible knots are refused with the pair named") {
        CHECK_THROWS_WITH(
            build_marginal_interpolation({{0.1, 0.5, -1.0}, {0.2, 0.9, -1.0}}),
            Catch::Matchers::ContainsSubstring("knots 0,1"));
        CHECK_THROWS_AS(build_marginal_interpolation({{0.1, 0.5, 1.0}}), QhdError);
        CHECK_THROWS_AS(build_marginal_interpolation({{0.1, -0.5, -1.0}}), QhdError);
    }

    SECTION("marginal is strictly decreasing, positive, and inverts on the hull") {
        auto u = build_marginal_interpolation(
            {{0.1, 2.0, -1.0}, {0.5, 1.2, -0.4}, {0.9, 0.7, -0.2}});
        double prev = u.marginal(u.lo());
        CHECK(prev > 0);
        for (double x = u.lo() + 1e-3; x <= u.hi(); x += 1e-3) {
            const double cur = u.marginal(x);
            CHECK(cur > 0);
            CHECK(cur < prev);
            prev = cur;
        }
        std::mt19937_64 g(7);
        std::uniform_real_distribution<double> um(u.marginal(u.hi()), u.marginal(u.lo()));
        for (int i = 0; i < 200; ++i) {
            const double m = um(g);
            CHECK_THAT(u.marginal(u.inverse_marginal(m)), WithinAbs(m, 1e-12));
        }
    }

    SECTION("cubic inverse marginal round trips") {
        CubicOnUnit cu;
        std::mt19937_64 g(8);
        std::uniform_real_distribution<double> um(0.05, 0.99);
        for (int i = 0; i < 200; ++i) {
            const double m = um(g);
            CHECK_THAT(cu.marginal(cu.inverse_marginal(m)), WithinAbs(m, 1e-12));
        }
    }
}

TEST_CASE("exponential-discounting feasibility") {
    SECTION("the refutation bundle forces an empty delta interval") {
        auto res = exp_focs_check({3.0, 2.0, 4.0}, {8.0, 2.0, 1.0});
        CHECK_FALSE(res.delta.has_value());
        CHECK_THAT(res.delta_lo, WithinAbs(0.5, 1e-12));
        CHECK_THAT(res.delta_hi, WithinAbs(0.25, 1e-12));
    }

    SECTION("constant consumption at flat prices") {
        auto res = exp_focs_check({0.2, 0.2, 0.2}, {1.0, 1.0, 1.0});
        REQUIRE(res.delta.has_value());
        CHECK(*res.delta == 1.0);
        CHECK(res.marginal[0] == res.marginal[1]);
        CHECK(res.marginal[1] == res.marginal[2]);
    }

    SECTION("increasing consumption at flat prices pins delta at one") {
        auto res = exp_focs_check({1.0, 2.0, 3.0}, {1.0, 1.0, 1.0});
        REQUIRE(res.delta.has_value());
        CHECK_THAT(*res.delta, WithinAbs(1.0, 1e-12));
        CHECK_THAT(res.marginal[0], WithinAbs(res.marginal[2], 1e-12));
    }

    SECTION("a feasible witness maximizes the assembled objective on the budget") {
        // Independent oracle: integrate a weakly decreasing piecewise-linear
        // marginal through the targets and grid-search the budget simplex.
        std::mt19937_64 g(test_helpers::base_seed() + 17);
        std::uniform_real_distribution<double> ux(0.2, 2.0), up(0.5, 3.0);
        int feasible = 0;
        for (int trial = 0; trial < 250 && feasible < 40; ++trial) {
            std::array<double, 3> x{ux(g), ux(g), ux(g)};
            std::array<double, 3> p{up(g), up(g), 1.0};
            auto res = exp_focs_check(x, p);
            if (!res.delta) continue;
            ++feasible;
            const double delta = *res.delta;

            // piecewise-linear u' through (x_t, m_t), constant outside
            std::vector<std::pair<double, double>> pts;
            for (int t = 0; t < 3; ++t) pts.push_back({x[t], res.marginal[t]});
            std::sort(pts.begin(), pts.end());
            auto marg = [&](double z) {
                if (z <= pts.front().first) return pts.front().second;
                if (z >= pts.back().first) return pts.back().second;
                for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                    if (z <= pts[i + 1].first) {
                        const double span = pts[i + 1].first - pts[i].first;
                        if (span == 0) return pts[i].second;
                        const double w = (z - pts[i].first) / span;
                        return pts[i].second + w * (pts[i + 1].second - pts[i].second);
                    }
                return pts.back().second;
            };
            auto uval = [&](double z) {
                // exact integral of the piecewise-linear marginal from 0,
                // splitting at the knots
                std::vector<double> cuts{0.0};
                for (const auto& pt : pts)
                    if (pt.first > 0 && pt.first < z) cuts.push_back(pt.first);
                cuts.push_back(z);
                std::sort(cuts.begin(), cuts.end());
                double acc = 0;
                for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
                    acc += 0.5 * (marg(cuts[i]) + marg(cuts[i + 1])) * (cuts[i + 1] - cuts[i]);
                return acc;
            };
            auto objective = [&](double z1, double z2, double z3) {
                return uval(z1) + delta * uval(z2) + delta * delta * uval(z3);
            };
            const double m = p[0] * x[0] + p[1] * x[1] + x[2];
            const double observed = objective(x[0], x[1], x[2]);
            double best = observed;
            const int n = 60;
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j) {
                    const double z1 = m / p[0] * i / n;
                    const double z2 = (m - p[0] * z1) / p[1] * j / n;
                    const double z3 = m - p[0] * z1 - p[1] * z2;
                    if (z3 < 0) continue;
                    best = std::max(best, objective(z1, z2, z3));
                }
            CHECK(observed >= best - 1e-6 * std::max(1.0, std::abs(best)));
        }
        CHECK(feasible >= 40);
    }
}

TEST_CASE("derivative consistency and budget exhaustion across random instances") {
    std::mt19937_64 g(test_helpers::base_seed() + 19);
    std::uniform_real_distribution<double> ub(0.5, 0.95), up(1.0, 3.0), um(0.3, 0.8);
    for (int trial = 0; trial < 100; ++trial) {
        const double beta = ub(g), delta = ub(g), p2 = up(g), p1 = up(g);
        QhdInstance inst = QhdInstance::make(CubicOnUnit{}, beta, delta, {p1, p2, 1.0}, um(g));
        ResponseMap rm{inst};
        // probe strictly inside the feasible interval
        double lo = inst.A() > 1.0 ? std::sqrt(1.0 - 1.0 / inst.A()) + 1e-3 : 1e-3;
        double hi = lo;
        for (double x = lo; x < 1.0; x += 1e-3) {
            bool ok = true;
            try {
                ok = rm.f(x) > 1e-3 && rm.g(x) < 0.999;
            } catch (const QhdError&) {
                ok = false;
            }
            if (!ok) break;
            hi = x;
        }
        if (hi - lo < 5e-2) continue;
        for (double frac : {0.25, 0.5, 0.75}) {
            const double x2 = lo + frac * (hi - lo);
            const double gp = fd_central([&](double z) { return rm.g(z); }, x2);
            const double gpp = fd_central([&](double z) { return rm.g_prime(z); }, x2);
            const double fp = fd_central([&](double z) { return rm.f(z); }, x2);
            CHECK_THAT(rm.g_prime(x2), WithinAbs(gp, 1e-6 * std::max(1.0, std::abs(gp))));
            CHECK_THAT(rm.g_second(x2), WithinAbs(gpp, 1e-6 * std::max(1.0, std::abs(gpp))));
            CHECK_THAT(rm.f_prime(x2), WithinAbs(fp, 1e-6 * std::max(1.0, std::abs(fp))));
            // response slope equals the reciprocal of f' at the matching point
            const double x1 = rm.f(x2);
            const double h = 1e-5;
            const double s2p =
                (agent2_response(inst, x1 + h).x2 - agent2_response(inst, x1 - h).x2) / (2 * h);
            CHECK_THAT(s2p, WithinAbs(1.0 / rm.f_prime(x2), 1e-5 * std::abs(1.0 / rm.f_prime(x2))));
        }
        Equilibrium eq = equilibrium(inst);
        CHECK(std::abs(inst.p[0] * eq.x[0] + inst.p[1] * eq.x[1] + eq.x[2] - inst.m) < 1e-10);
    }
}

TEST_CASE("counterexample reproductions") {
    SECTION("equal-consumption report") {
        auto rep = repro_theorem1();
        CHECK(rep["focs_value"] == 12.0);
        CHECK_THAT(rep["beta_delta"].get<double>(), WithinAbs(1.0 / 3.0, 1e-12));
        CHECK_THAT(rep["delta_required"].get<double>(), WithinAbs(2.0, 1e-12));
        CHECK(rep["rationalizable"] == onpath::qhd::json(false));

        SECTION("the conclusion is independent of the consumption level") {
            for (double c : {0.05, 0.1, 0.2}) {
                auto r = repro_theorem1(4.0, 3.0, c);
                CHECK_THAT(r["delta_required"].get<double>(), WithinAbs(2.0, 1e-12));
            }
        }

        SECTION("softer prices leave the screen undetermined") {
            auto r = repro_theorem1(3.24, 1.8, 0.1);
            CHECK(r["rationalizable"] == "undetermined");
            CHECK_THAT(r["delta_required"].get<double>(), WithinAbs(5.0 / 9.0, 1e-12));
            CHECK_THAT(r["beta_required"].get<double>(), WithinAbs(1.0, 1e-12));
        }
    }

    SECTION("cubic counterexample report") {
        auto rep = repro_theorem2();
        CHECK(rep["ok"].get<bool>());
        CHECK(rep["A"] == 0.78125);
        CHECK_THAT(rep["g_prime_at_0.05"].get<double>(), WithinAbs(0.08315, 5e-5));
        CHECK_THAT(rep["g_second_at_0.05"].get<double>(), WithinAbs(1.65, 5e-3));
        CHECK_THAT(rep["soc_positive"].get<double>(), WithinAbs(0.126, 1e-3));
        CHECK_THAT(rep["soc_negative_magnitude"].get<double>(), WithinAbs(0.103, 1e-3));
        CHECK(rep["observed"]["stationary"].get<bool>());
        CHECK(rep["observed"]["local_min"].get<bool>());
        CHECK(rep["observed_not_equilibrium_outcome"].get<bool>());
        // the published interior optimum fails its own first-order condition
        CHECK_FALSE(rep["paper_claim"]["matches_computed_equilibrium"].get<bool>());
        CHECK(std::abs(rep["paper_claim"]["reduced_derivative"].get<double>()) > 1e-4);
        CHECK(rep["equilibrium"]["value"].get<double>() >
              rep["paper_claim"]["reduced_value"].get<double>());
    }

    SECTION("large-dataset construction") {
        CHECK_THROWS_AS(gen_appendixA(1), QhdError);
        auto res = gen_appendixA(50);
        CHECK(res.dataset.observations.size() == 52);
        CHECK(res.report["ok"].get<bool>());
        CHECK_THAT(res.report["p1_K_plus_1"].get<double>(), WithinAbs(5125.0 / 2304.0, 1e-15));
        CHECK_THAT(res.report["delta_recovered"].get<double>(), WithinAbs(0.8, 1e-9));
        CHECK(res.report["marginal_max_rel_err"].get<double>() <= 1e-9);
        CHECK(res.report["last_observation"]["soc_violated"].get<bool>());
        CHECK(res.report["inconsistencies"].size() == 2);
        CHECK(res.report["claimed_optimum_cost"].get<double>() >
              res.report["last_observation"]["income"].get<double>());

        SECTION("emitted dataset round-trips through JSON") {
            auto j = qhd_dataset_to_json(res.dataset);
            QhdDataset back = qhd_dataset_from_json(j);
            REQUIRE(back.observations.size() == res.dataset.observations.size());
            for (std::size_t i = 0; i < back.observations.size(); ++i) {
                CHECK(back.observations[i].x == res.dataset.observations[i].x);
                CHECK(back.observations[i].p == res.dataset.observations[i].p);
            }
        }

        SECTION("every built observation is itself FOCs rationalizable") {
            auto resK = gen_appendixA(6);
            for (const auto& o : resK.dataset.observations) {
                auto c = focs_rationalize(o.x, o.p);
                INFO("x = " << o.x[0] << "," << o.x[1] << "," << o.x[2]);
                CHECK(c.certificate.has_value());
            }
        }
    }
}

TEST_CASE("price normalization on ingestion") {
    QhdInstance inst = QhdInstance::make(CubicOnUnit{}, 0.8, 0.8, {6.2, 4.0, 2.0}, 1.388);
    CHECK(inst.prices_rescaled);
    CHECK(inst.p[2] == 1.0);
    CHECK_THAT(inst.p[0], WithinAbs(3.1, 1e-12));
    CHECK_THAT(inst.m, WithinAbs(0.694, 1e-12));

    auto d = qhd_dataset_from_json(onpath::qhd::json::parse(
        R"({"observations":[{"x":[0.1,0.1,0.1],"p":[8,6,2]}]})"));
    CHECK(d.prices_rescaled);
    CHECK(d.observations[0].p[0] == 4.0);
}
