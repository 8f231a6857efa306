#ifndef ONPATH_QHD_HPP
#define ONPATH_QHD_HPP

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

// Three-period quasi-hyperbolic consumer: backward-induction equilibria,
// first-order-condition certificates, exponential-discounting feasibility,
// and the counterexample reproductions. Prices are normalized to p3 = 1.

namespace onpath::qhd {

using nlohmann::json;

struct QhdError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Utilities

/// u(x) = x - x^3/3 on [0, 1]: strictly increasing and strictly concave,
/// with u'(x) = 1 - x^2 and u''(x) = -2x.
struct CubicOnUnit {
    double lo = 0.0, hi = 1.0;

    double value(double x) const { return x - x * x * x / 3.0; }
    double marginal(double x) const { return 1.0 - x * x; }
    double second(double x) const { return -2.0 * x; }
    double inverse_marginal(double m) const {
        if (m < 0.0 || m > 1.0) throw QhdError("inverse marginal out of range for cubic utility");
        return std::sqrt(1.0 - m);
    }
};

/// Marginal utility assembled from prescribed knots (x_t, a_t, b_t):
/// u'(x_t) = a_t and u''(x_t) = b_t, with u' piecewise linear, strictly
/// decreasing and positive across the knot hull, and constant outside it.
/// u itself is the integral anchored at (anchor_x, anchor_u).
struct PiecewiseLinearMarginal {
    std::vector<double> xs;      // segment breakpoints, increasing
    std::vector<double> hs;      // marginal value at each breakpoint
    std::vector<double> slopes;  // per-segment slope; knot segments carry b_t exactly
    double anchor_x = 0.0;
    double anchor_u = 0.0;
    std::vector<double> cum;    // integral of the marginal from xs.front() to xs[i]

    double lo() const { return xs.front(); }
    double hi() const { return xs.back(); }

    double marginal(double x) const {
        if (x <= xs.front()) return hs.front();
        if (x >= xs.back()) return hs.back();
        std::size_t i = segment_of(x);
        const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
        return hs[i] + t * (hs[i + 1] - hs[i]);
    }

    double second(double x) const {
        if (x <= xs.front() || x >= xs.back()) return 0.0;
        std::size_t i = segment_of(x);
        return slopes[i];
    }

    double value(double x) const { return anchor_u + integral_from_front(x) - integral_from_front(anchor_x); }

    double inverse_marginal(double m) const {
        if (m > hs.front() || m < hs.back())
            throw QhdError("inverse marginal out of range for interpolated utility");
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            if (m <= hs[i] && m >= hs[i + 1]) {
                if (hs[i] == hs[i + 1]) return xs[i];
                const double t = (hs[i] - m) / (hs[i] - hs[i + 1]);
                return xs[i] + t * (xs[i + 1] - xs[i]);
            }
        }
        return xs.back();
    }

    std::size_t segment_of(double x) const {
        std::size_t i = 0;
        while (i + 2 < xs.size() && x >= xs[i + 1]) ++i;
        return i;
    }

    double integral_from_front(double x) const {
        if (x <= xs.front()) return hs.front() * (x - xs.front());
        if (x >= xs.back()) return cum.back() + hs.back() * (x - xs.back());
        std::size_t i = segment_of(x);
        const double dx = x - xs[i];
        const double hx = marginal(x);
        return cum[i] + 0.5 * (hs[i] + hx) * dx;
    }
};

using Utility = std::variant<CubicOnUnit, PiecewiseLinearMarginal>;

inline double u_value(const Utility& u, double x) {
    return std::visit([&](const auto& f) { return f.value(x); }, u);
}
inline double u_marginal(const Utility& u, double x) {
    return std::visit([&](const auto& f) { return f.marginal(x); }, u);
}
inline double u_second(const Utility& u, double x) {
    return std::visit([&](const auto& f) { return f.second(x); }, u);
}
inline double u_inverse_marginal(const Utility& u, double m) {
    return std::visit([&](const auto& f) { return f.inverse_marginal(m); }, u);
}
inline double u_domain_lo(const Utility& u) {
    return std::holds_alternative<CubicOnUnit>(u) ? std::get<CubicOnUnit>(u).lo
                                                  : std::get<PiecewiseLinearMarginal>(u).lo();
}
inline double u_domain_hi(const Utility& u) {
    return std::holds_alternative<CubicOnUnit>(u) ? std::get<CubicOnUnit>(u).hi
                                                  : std::get<PiecewiseLinearMarginal>(u).hi();
}

struct MarginalKnot {
    double x;
    double a;  // prescribed u'(x), positive
    double b;  // prescribed u''(x), negative
};

/// Builds the interpolated marginal. Knot neighborhoods get half the
/// minimum knot gap, shrunk until the assembled marginal is strictly
/// decreasing and positive. Optionally anchors u at a given point.
inline PiecewiseLinearMarginal build_marginal_interpolation(
    std::vector<MarginalKnot> knots, std::optional<std::pair<double, double>> anchor = {}) {
    if (knots.empty()) throw QhdError("marginal interpolation needs at least one knot");
    std::sort(knots.begin(), knots.end(),
              [](const MarginalKnot& a, const MarginalKnot& b) { return a.x < b.x; });
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (knots[i].a <= 0)
            throw QhdError("knot " + std::to_string(i) + ": marginal must be positive");
        if (knots[i].b >= 0)
            throw QhdError("knot " + std::to_string(i) + ": second derivative must be negative");
        if (i > 0 && knots[i].x == knots[i - 1].x)
            throw QhdError("knots " + std::to_string(i - 1) + "," + std::to_string(i) +
                           ": duplicate abscissa");
        if (i > 0 && knots[i].a >= knots[i - 1].a)
            throw QhdError("knots " + std::to_string(i - 1) + "," + std::to_string(i) +
                           ": marginals must decrease with consumption");
    }

    double w = knots.front().x > 0 ? knots.front().x : 1.0;
    w = std::min(w, 1.0);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        w = std::min(w, 0.5 * (knots[i + 1].x - knots[i].x));
    // Keep neighbor segments strictly decreasing and the right tail positive.
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double gap = knots[i].a - knots[i + 1].a;
        const double slopes = -knots[i].b - knots[i + 1].b;
        if (slopes > 0) w = std::min(w, 0.5 * gap / slopes);
    }
    w = std::min(w, 0.5 * knots.back().a / -knots.back().b);
    if (!(w > 0)) throw QhdError("could not choose a neighborhood width");

    PiecewiseLinearMarginal plm;
    for (const auto& k : knots) {
        plm.xs.push_back(k.x - w);
        plm.hs.push_back(k.a - k.b * w);
        plm.xs.push_back(k.x + w);
        plm.hs.push_back(k.a + k.b * w);
    }
    for (std::size_t i = 0; i + 1 < plm.hs.size(); ++i)
        if (plm.hs[i + 1] >= plm.hs[i])
            throw QhdError("internal: assembled marginal is not strictly decreasing");
    for (std::size_t i = 0; i + 1 < plm.xs.size(); ++i) {
        if (i % 2 == 0)  // inside knot i/2's neighborhood: curvature as prescribed
            plm.slopes.push_back(knots[i / 2].b);
        else
            plm.slopes.push_back((plm.hs[i + 1] - plm.hs[i]) / (plm.xs[i + 1] - plm.xs[i]));
    }
    plm.cum.assign(plm.xs.size(), 0.0);
    for (std::size_t i = 0; i + 1 < plm.xs.size(); ++i)
        plm.cum[i + 1] =
            plm.cum[i] + 0.5 * (plm.hs[i] + plm.hs[i + 1]) * (plm.xs[i + 1] - plm.xs[i]);
    if (anchor) {
        plm.anchor_x = anchor->first;
        plm.anchor_u = anchor->second;
    } else {
        plm.anchor_x = plm.xs.front();
        plm.anchor_u = 0.0;
    }
    return plm;
}

// ---------------------------------------------------------------------------
// Instances and response maps

struct QhdInstance {
    Utility utility;
    double beta = 0.8;   // in (0, 1]; the rationalizability notions use beta < 1
    double delta = 0.8;  // in (0, 1]
    std::array<double, 3> p{1.0, 1.0, 1.0};
    double m = 1.0;
    bool prices_rescaled = false;

    static QhdInstance make(Utility u, double beta, double delta, std::array<double, 3> p,
                            double m) {
        if (!(beta > 0.0 && beta <= 1.0)) throw QhdError("beta must lie in (0,1]");
        if (!(delta > 0.0 && delta <= 1.0)) throw QhdError("delta must lie in (0,1]");
        if (!(p[0] > 0 && p[1] > 0 && p[2] > 0)) throw QhdError("prices must be positive");
        if (!(m > 0)) throw QhdError("income must be positive");
        QhdInstance inst{std::move(u), beta, delta, p, m, false};
        if (p[2] != 1.0) {
            inst.p = {p[0] / p[2], p[1] / p[2], 1.0};
            inst.m = m / p[2];
            inst.prices_rescaled = true;
        }
        return inst;
    }

    double A() const { return 1.0 / (beta * delta * p[1]); }
};

/// Closures derived from the later agent's first-order condition:
/// g maps period-2 consumption to the optimal period-3 consumption,
/// f recovers period-1 consumption from the budget identity.
struct ResponseMap {
    const QhdInstance& inst;

    double A() const { return inst.A(); }

    double g(double x2) const {
        if (std::holds_alternative<CubicOnUnit>(inst.utility)) {
            const double r = 1.0 - A() * (1.0 - x2 * x2);
            if (r < 0) throw QhdError("response map undefined: marginal target out of range");
            return std::sqrt(r);
        }
        return u_inverse_marginal(inst.utility, A() * u_marginal(inst.utility, x2));
    }

    double g_prime(double x2) const {
        if (std::holds_alternative<CubicOnUnit>(inst.utility)) return A() * x2 / g(x2);
        return A() * u_second(inst.utility, x2) / u_second(inst.utility, g(x2));
    }

    double g_second(double x2) const {
        if (std::holds_alternative<CubicOnUnit>(inst.utility)) {
            const double gg = g(x2);
            return A() * (1.0 - A()) / (gg * gg * gg);
        }
        const double h = 1e-6;
        return (g_prime(x2 + h) - g_prime(x2 - h)) / (2 * h);
    }

    double f(double x2) const { return (inst.m - inst.p[1] * x2 - g(x2)) / inst.p[0]; }
    double f_prime(double x2) const { return -(inst.p[1] + g_prime(x2)) / inst.p[0]; }
};

// ---------------------------------------------------------------------------
// Agent 2's problem

struct Agent2Response {
    double x2 = 0, x3 = 0;
    bool boundary = false;
    double foc_residual = 0;  // u'(x2) - p2 beta delta u'(x3)
};

/// Unique maximizer of u(x2) + beta delta u(x3) on the remaining budget
/// line p2 x2 + x3 = m - p1 x1. The objective is strictly concave, so the
/// first-order residual is strictly decreasing and bisection suffices; the
/// cubic family uses its closed form.
inline Agent2Response agent2_response(const QhdInstance& inst, double x1) {
    const double w = inst.m - inst.p[0] * x1;
    if (!(w > 0)) throw QhdError("infeasible first-period consumption: no income left");
    const double p2 = inst.p[1];
    const double bd = inst.beta * inst.delta;
    const double dom_hi = u_domain_hi(inst.utility);

    double lo = std::max(0.0, (w - dom_hi) / p2);  // keep x3 inside the utility domain
    double hi = std::min({w / p2, dom_hi});
    if (lo > hi) throw QhdError("agent 2 has no feasible consumption in the utility domain");

    auto residual = [&](double x2) {
        return u_marginal(inst.utility, x2) - p2 * bd * u_marginal(inst.utility, w - p2 * x2);
    };

    Agent2Response r;
    if (residual(lo) <= 0) {
        r.x2 = lo;
        r.boundary = true;
    } else if (residual(hi) >= 0) {
        r.x2 = hi;
        r.boundary = true;
    } else if (std::holds_alternative<CubicOnUnit>(inst.utility)) {
        // 1 - x2^2 = c (1 - (w - p2 x2)^2), c = p2 beta delta.
        const double c = p2 * bd;
        const double qa = c * p2 * p2 - 1.0;
        const double qb = -2.0 * c * w * p2;
        const double qc = c * w * w + 1.0 - c;
        double root;
        if (std::abs(qa) < 1e-14) {
            root = -qc / qb;
        } else {
            const double disc = qb * qb - 4 * qa * qc;
            if (disc < 0) throw QhdError("internal: cubic response has no real root");
            const double r1 = (-qb + std::sqrt(disc)) / (2 * qa);
            const double r2 = (-qb - std::sqrt(disc)) / (2 * qa);
            const bool ok1 = r1 >= lo - 1e-12 && r1 <= hi + 1e-12;
            const bool ok2 = r2 >= lo - 1e-12 && r2 <= hi + 1e-12;
            if (ok1 && ok2)
                root = std::abs(residual(r1)) <= std::abs(residual(r2)) ? r1 : r2;
            else if (ok1)
                root = r1;
            else if (ok2)
                root = r2;
            else
                throw QhdError("internal: cubic response root left the feasible interval");
        }
        r.x2 = std::clamp(root, lo, hi);
    } else {
        double a = lo, b = hi;
        for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
            const double mid = 0.5 * (a + b);
            (residual(mid) > 0 ? a : b) = mid;
        }
        r.x2 = 0.5 * (a + b);
    }
    r.x3 = w - p2 * r.x2;
    r.foc_residual = residual(r.x2);
    return r;
}

// ---------------------------------------------------------------------------
// First-order residuals of the reduced problem

struct FocResiduals {
    double foc2 = 0, foc1 = 0;          // raw residuals
    double foc2_rel = 0, foc1_rel = 0;  // relative to the leading term
    bool boundary = false;
};

inline FocResiduals foc_residuals(const std::array<double, 3>& x, const QhdInstance& inst) {
    ResponseMap rm{inst};
    FocResiduals r;
    const double bd = inst.beta * inst.delta;
    const double bd2 = bd * inst.delta;
    r.foc2 = u_marginal(inst.utility, x[1]) - inst.p[1] * bd * u_marginal(inst.utility, x[2]);
    const double t1 = u_marginal(inst.utility, rm.f(x[1])) * rm.f_prime(x[1]);
    const double t2 = bd * u_marginal(inst.utility, x[1]);
    const double t3 = bd2 * u_marginal(inst.utility, rm.g(x[1])) * rm.g_prime(x[1]);
    r.foc1 = t1 + t2 + t3;
    r.foc2_rel = std::abs(r.foc2) / std::max(std::abs(u_marginal(inst.utility, x[1])), 1e-300);
    r.foc1_rel = std::abs(r.foc1) / std::max(std::abs(t1), 1e-300);
    const double eps = 1e-12;
    r.boundary = x[0] <= eps || x[1] <= eps || x[2] <= eps;
    return r;
}

// ---------------------------------------------------------------------------
// Equilibrium of the intrapersonal game

struct StationaryPoint {
    double x2 = 0;
    std::array<double, 3> bundle{0, 0, 0};
    double value = 0;
    double soc_value = 0;          // second derivative of the reduced objective
    double soc_positive_term = 0;  // the convexity term contributed by g''
    double soc_negative_sum = 0;   // the concavity terms
    bool local_min = false;
};

struct BoundaryCandidate {
    double x2 = 0;
    std::array<double, 3> bundle{0, 0, 0};
    double value = 0;
};

struct Equilibrium {
    std::array<double, 3> x{0, 0, 0};
    double value = 0;
    bool at_boundary = false;
    std::vector<StationaryPoint> stationary;
    std::vector<BoundaryCandidate> boundary;
};

namespace detail {

inline double reduced_value(const ResponseMap& rm, double x2) {
    const QhdInstance& inst = rm.inst;
    const double bd = inst.beta * inst.delta;
    return u_value(inst.utility, rm.f(x2)) + bd * u_value(inst.utility, x2) +
           bd * inst.delta * u_value(inst.utility, rm.g(x2));
}

inline double reduced_derivative(const ResponseMap& rm, double x2) {
    const QhdInstance& inst = rm.inst;
    const double bd = inst.beta * inst.delta;
    return u_marginal(inst.utility, rm.f(x2)) * rm.f_prime(x2) +
           bd * u_marginal(inst.utility, x2) +
           bd * inst.delta * u_marginal(inst.utility, rm.g(x2)) * rm.g_prime(x2);
}

/// Second derivative at a stationary point, split into the g'' convexity
/// term and the strictly concave terms.
inline StationaryPoint classify_stationary(const ResponseMap& rm, double x2) {
    const QhdInstance& inst = rm.inst;
    StationaryPoint s;
    s.x2 = x2;
    s.bundle = {rm.f(x2), x2, rm.g(x2)};
    s.value = reduced_value(rm, x2);
    const double bd = inst.beta * inst.delta;
    const double gp = rm.g_prime(x2);
    const double fp = rm.f_prime(x2);
    s.soc_positive_term = rm.g_second(x2) * u_marginal(inst.utility, x2) * inst.delta *
                          (1.0 - inst.beta) / (gp + inst.p[1]);
    s.soc_negative_sum = u_second(inst.utility, rm.f(x2)) * fp * fp +
                         bd * u_second(inst.utility, x2) +
                         bd * inst.delta * u_second(inst.utility, rm.g(x2)) * gp * gp;
    s.soc_value = s.soc_positive_term + s.soc_negative_sum;
    s.local_min = s.soc_value > 0;
    return s;
}

inline double golden_max(const ResponseMap& rm, double a, double b, double tol) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = reduced_value(rm, c), fd = reduced_value(rm, d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - phi * (b - a);
            fc = reduced_value(rm, c);
        } else {
            a = c; c = d; fc = fd;
            d = a + phi * (b - a);
            fd = reduced_value(rm, d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

/// Global maximizer of the reduced objective u(f(x2)) + bd u(x2) + bd^2 u(g(x2))
/// over the feasible interval of x2: grid scan at step 1e-4, golden-section
/// refinement of every bracketed interior maximum to 1e-8, boundary
/// candidates always included, ties broken toward the smaller x2.
/// Diagnostics carry every stationary point with its curvature split.
inline Equilibrium equilibrium(const QhdInstance& inst) {
    ResponseMap rm{inst};
    const double dom_hi = u_domain_hi(inst.utility);

    // Feasible interval: x2, g(x2), f(x2) inside the domain, f(x2) >= 0.
    double lo = 0.0;
    if (std::holds_alternative<CubicOnUnit>(inst.utility) && inst.A() > 1.0)
        lo = std::sqrt(1.0 - 1.0 / inst.A()) + 1e-12;
    double hi = std::min(inst.m / inst.p[1], dom_hi);
    // g increases and f decreases in x2; shrink until both stay feasible.
    while (hi - lo > 1e-12 && (rm.g(hi) > dom_hi || rm.f(hi) < 0)) {
        double a = lo, b = hi;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (rm.g(mid) > dom_hi || rm.f(mid) < 0) b = mid; else a = mid;
        }
        hi = a;
        break;
    }
    while (hi - lo > 1e-12 && rm.f(lo) > dom_hi) {
        double a = lo, b = hi;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (rm.f(mid) > dom_hi) a = mid; else b = mid;
        }
        lo = b;
        break;
    }
    if (!(hi >= lo)) throw QhdError("empty feasible set");

    Equilibrium eq;
    const double step = 1e-4;
    const int cells = std::max(1, static_cast<int>(std::ceil((hi - lo) / step)));
    std::vector<double> xs(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i)
        xs[static_cast<std::size_t>(i)] = std::min(hi, lo + step * i);
    xs.back() = hi;

    std::vector<double> vs(xs.size()), ds(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        vs[i] = detail::reduced_value(rm, xs[i]);
        ds[i] = detail::reduced_derivative(rm, xs[i]);
    }

    // Stationary points: derivative sign changes, refined by bisection.
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if (ds[i] == 0.0 && (i == 0 || ds[i - 1] != 0.0))
            eq.stationary.push_back(detail::classify_stationary(rm, xs[i]));
        if (ds[i] * ds[i + 1] < 0) {
            double a = xs[i], b = xs[i + 1];
            const bool dec = ds[i] > 0;
            for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
                const double mid = 0.5 * (a + b);
                const double dm = detail::reduced_derivative(rm, mid);
                if ((dm > 0) == dec) a = mid; else b = mid;
            }
            eq.stationary.push_back(detail::classify_stationary(rm, 0.5 * (a + b)));
        }
    }

    // Candidates: refined interior maxima plus both endpoints.
    struct Cand { double x2, v; };
    std::vector<Cand> cands{{lo, vs.front()}, {hi, vs.back()}};
    eq.boundary.push_back({lo, {rm.f(lo), lo, rm.g(lo)}, vs.front()});
    eq.boundary.push_back({hi, {rm.f(hi), hi, rm.g(hi)}, vs.back()});
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        if (vs[i] >= vs[i - 1] && vs[i] >= vs[i + 1]) {
            const double x = detail::golden_max(rm, xs[i - 1], xs[i + 1], 1e-8);
            cands.push_back({x, detail::reduced_value(rm, x)});
        }
    }
    for (const auto& s : eq.stationary)
        if (!s.local_min) cands.push_back({s.x2, s.value});

    Cand best = cands.front();
    for (const auto& c : cands)
        if (c.v > best.v + 1e-12 || (std::abs(c.v - best.v) <= 1e-12 && c.x2 < best.x2))
            best = c;
    eq.x = {rm.f(best.x2), best.x2, rm.g(best.x2)};
    eq.value = best.v;
    eq.at_boundary = best.x2 <= lo + 1e-10 || best.x2 >= hi - 1e-10;
    return eq;
}

}  // namespace onpath::qhd

#endif  // ONPATH_QHD_HPP
