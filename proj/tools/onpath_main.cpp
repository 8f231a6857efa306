// Command-line entry point: axiom checking, constructive rationalization,
// the brute-force oracle, dataset generation, and the quasi-hyperbolic
// reproductions. All results are JSON on standard output.
//
// Exit codes: 0 pass, 1 definitional failure, 2 usage/parse error,
// 3 size-guard refusal.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "onpath/axioms.hpp"
#include "onpath/json_io.hpp"
#include "onpath/oracle.hpp"
#include "onpath/qhd_repro.hpp"
#include "onpath/rationalize.hpp"
#include "onpath/report.hpp"
#include "onpath/simgen.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;
constexpr int kSizeGuard = 3;

struct Output {
    bool pretty = false;
    void emit(const onpath::json& j) const { std::cout << (pretty ? j.dump(2) : j.dump()) << "\n"; }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw onpath::ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> parse_triple(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if (out.size() != 3) throw onpath::ParseError(std::string(what) + " needs three numbers");
    return out;
}

onpath::AxiomVerdict run_axiom(const onpath::Dataset& d, const std::string& name,
                               const std::string& mode, int t) {
    using namespace onpath;
    if (name == "nsarp") return check_nsarp(d);
    if (name == "nnsarp") return check_nnsarp(d);
    if (name == "tsarp") return check_tsarp(d, t);
    if (name == "cond1" || name == "condition1") return check_condition1(d, mode);
    if (name == "cond2" || name == "condition2") return check_condition2(d);
    if (name == "cond3" || name == "condition3") return check_condition3(d);
    if (name == "cond4" || name == "condition4") return check_condition4(d);
    if (name == "cond5" || name == "condition5") return check_condition5(d, mode);
    throw onpath::ParseError("unknown axiom: " + name);
}

int cmd_check(const std::string& path, const std::string& axioms, const std::string& mode,
              int t_flag, const Output& out) {
    using namespace onpath;
    Stopwatch timer;
    const std::string text = slurp(path);
    Dataset d = dataset_from_string(text);

    std::vector<std::pair<std::string, int>> requested;
    std::stringstream ss(axioms);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "all") {
            requested.push_back({"nsarp", 0});
            requested.push_back({"nnsarp", 0});
            for (int t = 1; t <= d.periods(); ++t) requested.push_back({"tsarp", t});
            requested.push_back({"condition1", 0});
            requested.push_back({"condition2", 0});
            requested.push_back({"condition3", 0});
            requested.push_back({"condition4", 0});
            requested.push_back({"condition5", 0});
        } else if (tok == "tsarp" && t_flag == 0) {
            for (int t = 1; t <= d.periods(); ++t) requested.push_back({"tsarp", t});
        } else {
            requested.push_back({tok, t_flag});
        }
    }
    if (requested.empty()) throw ParseError("no axioms requested");

    json verdicts = json::array();
    bool all_hold = true;
    for (const auto& [name, t] : requested) {
        AxiomVerdict v = run_axiom(d, name, mode, t);
        all_hold = all_hold && v.holds();
        verdicts.push_back(verdict_to_json(d.space, v));
    }
    json payload{{"verdicts", verdicts}, {"holds", all_hold}};
    out.emit(run_report("check " + path + " --axiom " + axioms + " --mode " + mode,
                        content_digest(text), payload, timer.seconds()));
    return all_hold ? kOk : kFail;
}

int cmd_rationalize(const std::string& path, const std::string& model_name, const Output& out) {
    using namespace onpath;
    Stopwatch timer;
    const std::string text = slurp(path);
    Dataset d = dataset_from_string(text);
    auto model = model_from_name(model_name);
    if (!model) throw ParseError("unknown model: " + model_name);

    json payload;
    int code = kOk;
    try {
        PreferenceProfile profile;
        switch (*model) {
            case ModelKind::Naive: profile = construct_naive(d); break;
            case ModelKind::NaiveNash: profile = construct_nash(d); break;
            case ModelKind::StrictNaiveNash: profile = construct_strict_nash(d); break;
            case ModelKind::Sophisticated: profile = construct_sophisticated(d); break;
        }
        payload["profile"] = profile_to_json(d.space, profile.prefs);
        payload["verified"] = verify(d, profile, *model).ok;
    } catch (const ConstructionError& e) {
        payload["error"] = e.what();
        payload["witness"] = verdict_to_json(d.space, e.verdict);
        code = kFail;
    }
    out.emit(run_report("rationalize " + path + " --model " + model_name, content_digest(text),
                        payload, timer.seconds()));
    return code;
}

int cmd_oracle(const std::string& path, const std::string& model_name, const std::string& cls,
               std::uint64_t max_profiles, const std::string& mode, const Output& out) {
    using namespace onpath;
    Stopwatch timer;
    const std::string text = slurp(path);
    Dataset d = dataset_from_string(text);
    auto model = model_from_name(model_name);
    if (!model) throw ParseError("unknown model: " + model_name);
    OrderClass oc = cls == "linear" ? OrderClass::Linear : OrderClass::Weak;
    OracleLimits limits;
    if (max_profiles > 0) limits.max_profiles = max_profiles;

    auto witness = mode == "decomposed" ? rationalizable_decomposed(d, *model, oc, limits)
                                        : rationalizable_literal(d, *model, oc, limits);
    json payload;
    payload["model"] = model_name;
    payload["class"] = cls;
    payload["mode"] = mode;
    payload["witness"] =
        witness ? profile_to_json(d.space, witness->prefs) : json(nullptr);
    out.emit(run_report("oracle " + path + " --model " + model_name + " --class " + cls,
                        content_digest(text), payload, timer.seconds()));
    return witness ? kOk : kFail;
}

int cmd_gen(std::uint64_t seed, const std::string& model_name, const std::string& sizes_str,
            int k, double density, bool distinct_x1, const std::string& cls,
            const std::string& out_path, const Output& out) {
    using namespace onpath;
    GenConfig cfg;
    cfg.seed = seed;
    cfg.k = k;
    cfg.density = density;
    cfg.distinct_x1 = distinct_x1;
    cfg.order_class = cls == "weak" ? OrderClass::Weak : OrderClass::Linear;
    {
        std::stringstream ss(sizes_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.sizes.push_back(std::stoi(tok));
    }
    if (cfg.sizes.size() < 2) throw ParseError("--sizes needs at least two periods");

    Skeleton sk = random_instance(cfg);
    Dataset d;
    if (model_name == "random") {
        d = random_choices(sk, cfg);
    } else {
        auto model = model_from_name(model_name);
        if (!model) throw ParseError("unknown model: " + model_name);
        if (cfg.order_class == OrderClass::Weak && *model != ModelKind::NaiveNash)
            throw ParseError("weak-order simulation is only defined for the nash model");
        auto g = rng::stream(cfg.seed, 0xabcdef);
        PreferenceProfile profile = random_profile(sk.space, cfg.order_class, g);
        SimulateResult sim = simulate(sk, profile, *model, cfg);
        if (sim.resampled > 0)
            std::cerr << "resampled " << sim.resampled << " budgets\n";
        d = sim.dataset;
    }
    json j = dataset_to_json(d);
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        f << j.dump(2) << "\n";
    } else {
        out.emit(j);
    }
    return kOk;
}

int cmd_qhd_equilibrium(double beta, double delta, const std::string& u_name,
                        const std::string& p_str, double m, const Output& out) {
    using namespace onpath;
    Stopwatch timer;
    if (u_name != "cubic") throw ParseError("only the cubic utility is exposed on the CLI");
    auto p = parse_triple(p_str, "--p");
    qhd::QhdInstance inst =
        qhd::QhdInstance::make(qhd::CubicOnUnit{}, beta, delta, {p[0], p[1], p[2]}, m);
    qhd::Equilibrium eq = qhd::equilibrium(inst);
    json payload;
    payload["prices_rescaled"] = inst.prices_rescaled;
    payload["x"] = eq.x;
    payload["value"] = eq.value;
    payload["at_boundary"] = eq.at_boundary;
    json stat = json::array();
    for (const auto& s : eq.stationary)
        stat.push_back(json{{"x2", s.x2},
                            {"bundle", s.bundle},
                            {"value", s.value},
                            {"soc_value", s.soc_value},
                            {"soc_positive_term", s.soc_positive_term},
                            {"soc_negative_sum", s.soc_negative_sum},
                            {"local_min", s.local_min}});
    payload["stationary"] = stat;
    json bnd = json::array();
    for (const auto& b : eq.boundary)
        bnd.push_back(json{{"x2", b.x2}, {"bundle", b.bundle}, {"value", b.value}});
    payload["boundary_candidates"] = bnd;
    out.emit(run_report("qhd equilibrium", "", payload, timer.seconds()));
    return kOk;
}

int cmd_qhd_focs(const std::string& path, bool exponential, const Output& out) {
    using namespace onpath;
    Stopwatch timer;
    const std::string text = slurp(path);
    qhd::QhdDataset d = qhd::qhd_dataset_from_json(json::parse(text));
    json results = json::array();
    bool all = true;
    for (const auto& o : d.observations) {
        json entry{{"x", o.x}, {"p", o.p}};
        if (exponential) {
            auto res = qhd::exp_focs_check(o.x, o.p);
            entry["feasible"] = res.delta.has_value();
            entry["delta_interval"] = {res.delta_lo, res.delta_hi};
            if (res.delta) {
                entry["delta"] = *res.delta;
                entry["marginal"] = res.marginal;
            } else {
                all = false;
            }
        } else {
            auto res = qhd::focs_rationalize(o.x, o.p);
            entry["feasible"] = res.certificate.has_value();
            if (res.certificate) {
                const auto& c = *res.certificate;
                entry["certificate"] = json{{"lambda", c.lambda}, {"beta", c.beta},
                                            {"delta", c.delta},   {"mu", c.mu},
                                            {"marginal", c.marginal}, {"strong", c.strong},
                                            {"method", c.method}};
            } else {
                entry["grid_points_checked"] = res.grid_points_checked;
                entry["note"] = res.note;
                all = false;
            }
        }
        results.push_back(std::move(entry));
    }
    json payload{{"observations", results}, {"all_feasible", all}};
    out.emit(run_report(std::string(exponential ? "qhd exp-focs " : "qhd focs-check ") + path,
                        content_digest(text), payload, timer.seconds()));
    return all ? kOk : kFail;
}

int cmd_qhd_repro(const std::string& which, int K, const Output& out) {
    using namespace onpath;
    Stopwatch timer;
    json rep;
    bool ok = true;
    if (which == "thm1") {
        rep = qhd::repro_theorem1();
        ok = rep["focs_feasible"].get<bool>() && rep["focs_value"] == 12.0 &&
             std::abs(rep["beta_delta"].get<double>() - 1.0 / 3.0) <= 1e-12 &&
             std::abs(rep["delta_required"].get<double>() - 2.0) <= 1e-12 &&
             rep["rationalizable"] == json(false);
    } else if (which == "thm2") {
        rep = qhd::repro_theorem2();
        ok = rep["ok"].get<bool>();
    } else if (which == "appendixA") {
        auto res = qhd::gen_appendixA(K);
        rep = res.report;
        ok = rep["ok"].get<bool>();
    } else {
        throw ParseError("unknown reproduction: " + which);
    }
    out.emit(run_report("qhd repro " + which, "", rep, timer.seconds()));
    return ok ? kOk : kFail;
}

int cmd_qhd_gen_appendix(int K, const std::string& out_path, const Output& out) {
    using namespace onpath;
    auto res = qhd::gen_appendixA(K);
    json j{{"dataset", qhd::qhd_dataset_to_json(res.dataset)}, {"report", res.report}};
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        f << j.dump(2) << "\n";
    } else {
        out.emit(j);
    }
    return res.report["ok"].get<bool>() ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification engine for on-path choice data"};
    app.require_subcommand(1);
    Output out;
    app.add_flag("--pretty", out.pretty, "pretty-print JSON output");

    std::string path, axioms = "all", mode = "greedy", model = "naive", cls = "weak";
    int t_flag = 0;
    auto* check = app.add_subcommand("check", "decide axioms for a dataset");
    check->add_option("file", path)->required();
    check->add_option("--axiom", axioms, "comma-separated list or 'all'");
    check->add_option("--mode", mode)->check(CLI::IsMember({"greedy", "exhaustive"}));
    check->add_option("--t", t_flag, "period for tsarp");

    auto* rat = app.add_subcommand("rationalize", "construct a rationalizing profile");
    rat->add_option("file", path)->required();
    rat->add_option("--model", model)->required();

    std::uint64_t max_profiles = 0;
    std::string oracle_mode = "literal";
    auto* orc = app.add_subcommand("oracle", "brute-force rationalizability");
    orc->add_option("file", path)->required();
    orc->add_option("--model", model)->required();
    orc->add_option("--class", cls)->check(CLI::IsMember({"linear", "weak"}));
    orc->add_option("--max-profiles", max_profiles);
    orc->add_option("--oracle-mode", oracle_mode)->check(CLI::IsMember({"literal", "decomposed"}));

    std::uint64_t seed = 1;
    std::string sizes = "2,3", out_path, gen_cls = "linear";
    int k = 2;
    double density = 0.8;
    bool distinct_x1 = false;
    auto* gen = app.add_subcommand("gen", "generate a dataset");
    gen->add_option("--seed", seed);
    gen->add_option("--model", model, "naive|nash|strict-nash|sophisticated|random");
    gen->add_option("--sizes", sizes, "per-period alternative counts, comma separated");
    gen->add_option("--k", k);
    gen->add_option("--density", density);
    gen->add_flag("--distinct-x1", distinct_x1);
    gen->add_option("--class", gen_cls)->check(CLI::IsMember({"linear", "weak"}));
    gen->add_option("--out", out_path);

    auto* qhd_cmd = app.add_subcommand("qhd", "quasi-hyperbolic consumer tools");
    qhd_cmd->require_subcommand(1);
    double beta = 0.8, delta = 0.8, income = 1.0;
    std::string u_name = "cubic", p_str = "1,1,1", which = "thm1";
    int K = 50;
    auto* eq = qhd_cmd->add_subcommand("equilibrium");
    eq->add_option("--beta", beta)->required();
    eq->add_option("--delta", delta)->required();
    eq->add_option("--u", u_name);
    eq->add_option("--p", p_str)->required();
    eq->add_option("--m", income)->required();
    auto* focs = qhd_cmd->add_subcommand("focs-check");
    focs->add_option("file", path)->required();
    auto* expf = qhd_cmd->add_subcommand("exp-focs");
    expf->add_option("file", path)->required();
    auto* repro = qhd_cmd->add_subcommand("repro");
    repro->add_option("which", which)->required()->check(CLI::IsMember({"thm1", "thm2", "appendixA"}));
    repro->add_option("--K", K);
    auto* genA = qhd_cmd->add_subcommand("gen-appendixA");
    genA->add_option("--K", K);
    genA->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kUsage : kOk;
    }

    try {
        if (*check) return cmd_check(path, axioms, mode, t_flag, out);
        if (*rat) return cmd_rationalize(path, model, out);
        if (*orc) return cmd_oracle(path, model, cls, max_profiles, oracle_mode, out);
        if (*gen) return cmd_gen(seed, model, sizes, k, density, distinct_x1, gen_cls, out_path, out);
        if (*eq) return cmd_qhd_equilibrium(beta, delta, u_name, p_str, income, out);
        if (*focs) return cmd_qhd_focs(path, false, out);
        if (*expf) return cmd_qhd_focs(path, true, out);
        if (*repro) return cmd_qhd_repro(which, K, out);
        if (*genA) return cmd_qhd_gen_appendix(K, out_path, out);
    } catch (const onpath::SizeGuardError& e) {
        std::cerr << "size guard: " << e.what() << "\n";
        return kSizeGuard;
    } catch (const onpath::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const onpath::json::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        if (what.find("refuses") != std::string::npos) {
            std::cerr << "size guard: " << what << "\n";
            return kSizeGuard;
        }
        std::cerr << "parse error: " << what << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}
