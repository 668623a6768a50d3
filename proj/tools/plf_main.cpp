#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>

#include "plf/io.hpp"

using namespace plf;

namespace {

// element literal: "a" (rational) or "a:b:..." coordinates on 1, th, th^2, ...
AlgebraicNumber parse_element(const std::string& text, const FieldPtr& K) {
    std::vector<mpq_class> coords;
    std::string cur;
    for (char ch : text + ":") {
        if (ch == ':') {
            coords.push_back(parse_rational(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    while (static_cast<long>(coords.size()) < K->degree()) coords.emplace_back(0);
    if (static_cast<long>(coords.size()) != K->degree())
        throw InputError("too many coordinates for this field");
    return AlgebraicNumber(K, std::move(coords));
}

std::vector<AlgebraicNumber> parse_element_list(const std::string& text, const FieldPtr& K) {
    std::vector<AlgebraicNumber> out;
    std::string cur;
    for (char ch : text + ",") {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(parse_element(cur, K));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return out;
}

FieldPtr parse_field(const std::string& min_poly) {
    if (min_poly.empty() || min_poly == "Q") return NumberField::rationals();
    std::vector<mpz_class> coeffs;
    std::string cur;
    for (char ch : min_poly + ",") {
        if (ch == ',') {
            coeffs.emplace_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return NumberField::create(coeffs);
}

void emit(const Json& report, const std::string& out_path) {
    std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw InputError("cannot open output path: " + out_path);
        out << text;
    }
}

struct AuditFailure : Error {
    using Error::Error;
};

int dispatch(int argc, char** argv) {
    CLI::App app{"exact p-adic linear-forms toolkit"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);
    std::string out_path;
    long precision = 60;
    long seed = 0;
    app.add_option("--out", out_path, "write the report to this path instead of stdout");
    app.add_option("--precision", precision, "p-adic working digits");
    app.add_option("--seed", seed, "seed recorded in the report (runs are deterministic)");

    // ---- heights ----
    auto* heights_cmd = app.add_subcommand("heights", "height zoo of an affine vector over K");
    heights_cmd->set_help_flag("--help", "print help");
    heights_cmd->fallthrough(true);
    std::string h_minpoly, h_vec;
    heights_cmd->add_option("--min-poly", h_minpoly, "monic integer min poly c0,c1,...,1");
    heights_cmd->add_option("--x", h_vec, "vector entries a or a:b, comma separated")->required();

    // ---- product-formula ----
    auto* pf_cmd = app.add_subcommand("product-formula", "check prod |x|_v = 1");
    pf_cmd->set_help_flag("--help", "print help");
    pf_cmd->fallthrough(true);
    std::string pf_minpoly, pf_x;
    pf_cmd->add_option("--min-poly", pf_minpoly, "monic integer min poly");
    pf_cmd->add_option("--x", pf_x, "nonzero element")->required();

    // ---- schwarz ----
    auto* sw_cmd = app.add_subcommand("schwarz", "Schwarz bound exponent in valuation space");
    sw_cmd->set_help_flag("--help", "print help");
    sw_cmd->fallthrough(true);
    std::string sw_s, sw_t, sw_delta, sw_mu, sw_normt;
    long sw_k = 0, sw_l = 0, sw_p = 0;
    sw_cmd->add_option("--s", sw_s, "radius exponent of s (rational)")->required();
    sw_cmd->add_option("--t", sw_t, "radius exponent of t (rational)")->required();
    sw_cmd->add_option("--k", sw_k)->required();
    sw_cmd->add_option("--l", sw_l)->required();
    sw_cmd->add_option("--delta", sw_delta, "exponent of delta (rational)")->required();
    sw_cmd->add_option("--mu", sw_mu, "exponent of mu (rational)")->required();
    sw_cmd->add_option("--normt", sw_normt, "exponent of |f|_t (rational)")->required();
    sw_cmd->add_option("--p", sw_p)->required();

    // ---- siegel ----
    auto* si_cmd = app.add_subcommand("siegel", "small integral solution of M forms in N > M unknowns");
    si_cmd->set_help_flag("--help", "print help");
    si_cmd->fallthrough(true);
    std::string si_minpoly, si_forms;
    si_cmd->add_option("--min-poly", si_minpoly, "monic integer min poly");
    si_cmd->add_option("--forms", si_forms, "rows 'a,b,c;d,e,f' of O_K entries")->required();

    // ---- exp-series ----
    auto* es_cmd = app.add_subcommand("exp-series", "normalized exponential series of a model");
    es_cmd->set_help_flag("--help", "print help");
    es_cmd->fallthrough(true);
    std::string es_model = "gm", es_minpoly;
    long es_order = 8;
    es_cmd->add_option("--model", es_model, "gm, gm^n or gm:k");
    es_cmd->add_option("--min-poly", es_minpoly, "monic integer min poly");
    es_cmd->add_option("--order", es_order, "truncation order");

    // ---- semistable ----
    auto* ss_cmd = app.add_subcommand("semistable", "torus semistability of (G_m^n, ker l)");
    ss_cmd->set_help_flag("--help", "print help");
    ss_cmd->fallthrough(true);
    std::string ss_minpoly, ss_beta;
    ss_cmd->add_option("--min-poly", ss_minpoly, "monic integer min poly");
    ss_cmd->add_option("--beta", ss_beta, "linear-form coefficients")->required();

    // ---- params ----
    auto* pa_cmd = app.add_subcommand("params", "parameter formulas S0, D0, S, D, T");
    pa_cmd->set_help_flag("--help", "print help");
    pa_cmd->fallthrough(true);
    std::string pa_c = "3", pa_omega = "1", pa_b, pa_h, pa_logb, pa_logh, pa_c2 = "1";
    long pa_n = 1;
    pa_cmd->add_option("--c", pa_c, "master constant (rational)");
    pa_cmd->add_option("--omega", pa_omega, "omega_L (rational)");
    pa_cmd->add_option("--n", pa_n)->required();
    pa_cmd->add_option("--b", pa_b, "log B (decimal or rational)")->required();
    pa_cmd->add_option("--h", pa_h, "log H (decimal or rational)")->required();
    pa_cmd->add_option("--log-b", pa_logb, "exact override for log b (rational)");
    pa_cmd->add_option("--log-h", pa_logh, "exact override for log h (rational)");
    pa_cmd->add_option("--c2", pa_c2, "feasibility constant (rational)");

    // ---- bound ----
    auto* bo_cmd = app.add_subcommand("bound", "Theorem lower-bound value");
    bo_cmd->set_help_flag("--help", "print help");
    bo_cmd->fallthrough(true);
    std::string bo_omega = "1", bo_b, bo_h, bo_c0 = "1";
    long bo_n = 1, bo_p = 2, bo_nu = -1;
    bo_cmd->add_option("--omega", bo_omega, "omega_L (rational)");
    bo_cmd->add_option("--n", bo_n)->required();
    bo_cmd->add_option("--b", bo_b, "log B (decimal or rational)")->required();
    bo_cmd->add_option("--h", bo_h, "log H (decimal or rational)")->required();
    bo_cmd->add_option("--p", bo_p)->required();
    bo_cmd->add_option("--c0", bo_c0, "constant (rational)");
    bo_cmd->add_option("--nu", bo_nu, "statement-2 form when >= 0");

    // ---- verify-gm ----
    auto* vg_cmd = app.add_subcommand("verify-gm", "numerical Theorem check on a G_m^n instance");
    vg_cmd->set_help_flag("--help", "print help");
    vg_cmd->fallthrough(true);
    std::string vg_instance, vg_c0 = "1";
    vg_cmd->add_option("instance", vg_instance, "instance file (JSON)")->required();
    vg_cmd->add_option("--c0", vg_c0, "constant (rational)");

    // ---- pipeline ----
    auto* pl_cmd = app.add_subcommand("pipeline", "toy-scale proof machinery with audits");
    pl_cmd->set_help_flag("--help", "print help");
    pl_cmd->fallthrough(true);
    std::string pl_instance;
    long pl_S0 = 2, pl_T = 2, pl_D = 3, pl_D0 = 4, pl_S = 3;
    pl_cmd->add_option("instance", pl_instance, "instance file (JSON)")->required();
    pl_cmd->add_option("--S0", pl_S0);
    pl_cmd->add_option("--T", pl_T);
    pl_cmd->add_option("--D", pl_D);
    pl_cmd->add_option("--D0", pl_D0);
    pl_cmd->add_option("--S", pl_S);

    app.parse(argc, argv);

    Json report;
    report["seed"] = seed;
    bool failed = false;
    // real-interval working precision in bits, scaled from the p-adic digit
    // budget but never below the library default
    mpfr_prec_t rprec = std::max<mpfr_prec_t>(Interval::kDefaultPrec, 4 * precision);

    if (*heights_cmd) {
        FieldPtr K = parse_field(h_minpoly);
        auto xs = parse_element_list(h_vec, K);
        VectorHeights vh = heights_vector(xs, rprec);
        report["h_max"] = interval_to_json(vh.h_max);
        report["h_l2"] = interval_to_json(vh.h_l2);
        report["h_plus"] = interval_to_json(vh.h_plus);
        report["h_l2_plus"] = interval_to_json(vh.h_l2_plus);
        Json habs = Json::array();
        for (const auto& x : xs) habs.push_back(interval_to_json(height(x)));
        report["absolute_heights"] = habs;
        // the height chain is a theorem; report and check it
        long d = K->degree();
        Interval slack = vh.h_max +
                         Interval::log_q(mpq_class(xs.size() + 1)).mul_q(mpq_class(d, 2)) -
                         vh.h_l2;
        bool chain = !Interval::certainly_lt(vh.h_l2, vh.h_max) && !(slack.hi_double() < 0);
        report["chain_ok"] = chain;
        if (!chain) failed = true;
    } else if (*pf_cmd) {
        FieldPtr K = parse_field(pf_minpoly);
        AlgebraicNumber x = parse_element(pf_x, K);
        auto v = product_formula_check(x, rprec);
        report["pass"] = v.pass;
        report["exact"] = v.exact;
        report["sum"] = interval_to_json(v.sum);
        report["width"] = v.width;
        if (!v.pass) failed = true;
    } else if (*sw_cmd) {
        ValExp e = schwarz_bound(parse_rational(sw_s), parse_rational(sw_t), sw_k, sw_l,
                                 parse_rational(sw_delta), ValExp(parse_rational(sw_mu)),
                                 ValExp(parse_rational(sw_normt)), sw_p);
        report["bound_exponent"] = valexp_to_json(e);
    } else if (*si_cmd) {
        FieldPtr K = parse_field(si_minpoly);
        std::vector<std::vector<AlgebraicNumber>> forms;
        std::string cur;
        for (char ch : si_forms + ";") {
            if (ch == ';') {
                if (!cur.empty()) forms.push_back(parse_element_list(cur, K));
                cur.clear();
            } else {
                cur += ch;
            }
        }
        auto r = siegel_solve(forms);
        Json sol = Json::array();
        for (const auto& x : r.solution) sol.push_back(element_to_json(x));
        report["solution"] = sol;
        report["h_plus"] = interval_to_json(r.h_plus);
        report["bound"] = interval_to_json(r.bound);
        report["candidates_tried"] = r.candidates_tried;
    } else if (*es_cmd) {
        FieldPtr K = parse_field(es_minpoly);
        GroupModel model = [&] {
            if (es_model == "gm") return make_gm_power(1, K);
            if (es_model.rfind("gm:", 0) == 0)
                return make_gm_scaled(K, std::stol(es_model.substr(3)));
            if (es_model.rfind("gm^", 0) == 0) {
                std::string rest = es_model.substr(3);
                auto colon = rest.find(':');
                if (colon == std::string::npos) return make_gm_power(std::stoi(rest), K);
                return make_gm_scaled(K, std::stol(rest.substr(colon + 1)),
                                      std::stoi(rest.substr(0, colon)));
            }
            throw InputError("unknown model: " + es_model);
        }();
        ExpSeries es = exp_series(model, es_order);
        report["model"] = model_to_json(model);
        Json f = Json::array();
        for (const auto& fi : es.f) {
            Json terms = Json::array();
            for (const auto& [e, c] : fi.terms())
                terms.push_back(Json{{"expo", e}, {"coeff", element_to_json(c)}});
            f.push_back(terms);
        }
        report["f"] = f;
        bool pde = pde_consistent(model, es);
        bool add = addition_exp_compatible(model, es, es_order - 1);
        report["pde_consistent"] = pde;
        report["addition_compatible"] = add;
        if (!pde || !add) failed = true;
    } else if (*ss_cmd) {
        FieldPtr K = parse_field(ss_minpoly);
        auto beta = parse_element_list(ss_beta, K);
        auto v = is_semistable_gm(beta);
        report["semistable"] = v.semistable;
        if (!v.semistable) {
            Json w = Json::array();
            for (const auto& q : v.witness) w.push_back(rational_to_string(q));
            report["witness"] = w;
        }
    } else if (*pa_cmd) {
        Interval b = Interval::from_mpq(parse_decimal_or_rational(pa_b));
        Interval h = Interval::from_mpq(parse_decimal_or_rational(pa_h));
        ParamInputs in = (!pa_logb.empty() && !pa_logh.empty())
                             ? ParamInputs::with_exact_logs(b, h, parse_rational(pa_logb),
                                                            parse_rational(pa_logh))
                             : ParamInputs::from(b, h);
        auto par = choose_parameters(parse_rational(pa_c),
                                     Interval::from_mpq(parse_rational(pa_omega)), pa_n, in,
                                     parse_rational(pa_c2));
        report["S0"] = par.S0;
        report["D0"] = par.D0;
        report["S"] = par.S;
        report["D"] = par.D;
        report["T"] = par.T;
    } else if (*bo_cmd) {
        Interval b = Interval::from_mpq(parse_decimal_or_rational(bo_b));
        Interval h = Interval::from_mpq(parse_decimal_or_rational(bo_h));
        std::optional<long> nu;
        if (bo_nu >= 0) nu = bo_nu;
        Interval v = theorem_bound(Interval::from_mpq(parse_rational(bo_omega)), bo_n, b, h, bo_p,
                                   parse_rational(bo_c0), nu);
        report["bound"] = interval_to_json(v);
    } else if (*vg_cmd) {
        ProofInstance inst = instance_from_file(vg_instance);
        PipelineConfig cfg;
        cfg.precision = precision;
        GmVerdict v = verify_gm(inst, parse_rational(vg_c0), cfg);
        report["instance"] = instance_to_json(inst, precision);
        report["omega_L"] = interval_to_json(inst.omega_L);
        report["b"] = interval_to_json(inst.b);
        report["h"] = interval_to_json(inst.h);
        report["verdict"] = verdict_to_json(v);
        if (v.outcome == GmVerdict::Outcome::fail) failed = true;
        if (v.outcome == GmVerdict::Outcome::below_precision)
            throw PrecisionInsufficient("l(u) below working precision");
    } else if (*pl_cmd) {
        ProofInstance inst = instance_from_file(pl_instance);
        PipelineConfig cfg;
        cfg.precision = precision;
        Parameters par;
        par.c = 3;
        par.S0 = pl_S0;
        par.T = pl_T;
        par.D = pl_D;
        par.D0 = pl_D0;
        par.S = pl_S;
        report["instance"] = instance_to_json(inst, precision);
        report["parameters"] =
            Json{{"S0", par.S0}, {"T", par.T}, {"D", par.D}, {"D0", par.D0}, {"S", par.S}};
        report["consistency_min_valuation"] =
            rational_to_string(instance_consistency_check(inst, 8));
        {
            Json tjs = Json::array();
            for (long s = 0; s < par.S0; ++s) {
                auto td = translation_polynomials(inst, s, par.D);
                tjs.push_back(Json{{"s", s},
                                   {"den_s", td.den_s.get_str()},
                                   {"height", interval_to_json(td.height)},
                                   {"tracked_bound", interval_to_json(td.tracked_bound)},
                                   {"height_ok",
                                    Interval::certainly_le(td.height, td.tracked_bound)},
                                   {"gamma_power_bound_ok", td.gamma_power_bound_ok}});
            }
            report["translation_polynomials"] = tjs;
        }
        auto aux = construct_auxiliary(inst, par, cfg);
        report["auxiliary"] = Json{{"n_vars", aux.n_vars},
                                   {"n_conditions", aux.n_conditions},
                                   {"system_integral", aux.scaled_system_integral},
                                   {"height", interval_to_json(aux.height)},
                                   {"height_bound", interval_to_json(aux.height_bound)},
                                   {"height_ok", aux.height_ok}};
        auto audit = audit_vanishing(inst, aux.P, par);
        report["vanishing_audit"] =
            Json{{"all_vanish", audit.all_vanish}, {"conditions", audit.conditions}};
        bool extrapolation_ok = true;
        if (par.S0 >= 2) {
            std::vector<int> t(static_cast<size_t>(inst.model.n), 0);
            if (par.T > 1) t[0] = 1;
            auto ex = extrapolate(inst, par, aux.P, t, cfg);
            Json margins = Json::array();
            for (const auto& [s_at, m] : ex.difference_margins)
                margins.push_back(Json{{"s", s_at}, {"margin", rational_to_string(m)}});
            report["extrapolation"] = Json{
                {"difference_bound_ok", ex.difference_bound_ok},
                {"difference_bound_margins", margins},
                {"epsilon", rational_to_string(ex.epsilon)},
                {"schwarz_exponent", valexp_to_json(ex.schwarz_exponent)},
                {"relaxed_exponent_log", interval_to_json(ex.relaxed_exponent)},
                {"schwarz_audit_ok", ex.schwarz_audit_ok},
                {"threshold_active", ex.threshold_active},
                {"threshold_conclusion_ok", ex.threshold_conclusion_ok}};
            extrapolation_ok = ex.difference_bound_ok && ex.schwarz_audit_ok;
        } else {
            report["extrapolation"] = "skipped (S0 < 2)";
        }
        auto vo = vanishing_order_audit(inst, par, aux.P, cfg);
        Json orders = Json::array();
        for (const auto& o : vo.orders)
            orders.push_back(o.capped ? Json(">= " + std::to_string(o.order)) : Json(o.order));
        report["vanishing_orders"] = Json{{"orders", orders},
                                          {"initial_range_ok", vo.initial_range_ok},
                                          {"dichotomy_holds", vo.dichotomy_holds},
                                          {"lhs", vo.dichotomy_lhs.get_str()},
                                          {"rhs", vo.dichotomy_rhs.get_str()}};
        // first nonzero derivative past the box, if any, for the lower bound
        bool liouville_done = false;
        for (long s = 0; s < par.S + 2 && !liouville_done; ++s) {
            for (long tv = 0; tv <= 2 * par.T + 2 && !liouville_done; ++tv) {
                std::vector<int> tt(static_cast<size_t>(inst.model.n), 0);
                tt[0] = static_cast<int>(tv);
                if (!delta_psi_exact(inst, aux.P, s, tt).is_zero()) {
                    auto lr = liouville_lower(inst, par, aux.P, s, tt, cfg);
                    report["liouville_lower"] =
                        Json{{"s", s},
                             {"t", tt},
                             {"valuation", rational_to_string(lr.valuation)},
                             {"dual_route_equal", lr.dual_route_equal},
                             {"height", interval_to_json(lr.height)},
                             {"liouville_ok", lr.liouville_ok},
                             {"formula_ok", lr.formula_ok}};
                    if (!lr.dual_route_equal || !lr.liouville_ok) failed = true;
                    liouville_done = true;
                }
            }
        }
        GmVerdict v = verify_gm(inst, 1, cfg);
        report["verdict"] = verdict_to_json(v);
        if (!audit.all_vanish || !aux.scaled_system_integral || !aux.height_ok ||
            !extrapolation_ok || !vo.initial_range_ok)
            failed = true;
        if (v.outcome == GmVerdict::Outcome::fail) failed = true;
    }

    emit(report, out_path);
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const CLI::ParseError& e) {
        CLI::App app;
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const PrecisionInsufficient& e) {
        std::cerr << "precision insufficient: " << e.what() << "\n";
        return 3;
    } catch (const UncertifiedTail& e) {
        std::cerr << "precision insufficient: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const BadParameters& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleParameters& e) {
        std::cerr << "infeasible parameters: " << e.what() << "\n";
        return 1;
    } catch (const NoSolutionFound& e) {
        std::cerr << "audit failure: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
