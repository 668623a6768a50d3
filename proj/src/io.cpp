#include "plf/io.hpp"

#include <fstream>
#include <sstream>

namespace plf {

Json padic_to_json(const PadicNumber& x) {
    Json j;
    j["p"] = x.prime();
    switch (x.kind()) {
        case PadicNumber::Kind::exact_zero:
            j["state"] = "zero";
            break;
        case PadicNumber::Kind::below_precision:
            j["state"] = "below_precision";
            j["valuation_lower_bound"] = rational_to_string(x.valuation_lower_bound().value());
            break;
        case PadicNumber::Kind::nonzero:
            j["valuation"] = rational_to_string(x.valuation().value());
            j["digits"] = x.digits();
            j["precision"] = x.precision();
            break;
    }
    return j;
}

PadicNumber padic_from_json(const Json& j) {
    long p = j.at("p").get<long>();
    if (j.contains("state")) {
        std::string s = j.at("state").get<std::string>();
        if (s == "zero") return PadicNumber::zero(p);
        if (s == "below_precision")
            return PadicNumber::below_precision(
                p, parse_rational(j.at("valuation_lower_bound").get<std::string>()));
        throw InputError("unknown p-adic state: " + s);
    }
    mpq_class val = parse_rational(j.at("valuation").get<std::string>());
    long prec = j.at("precision").get<long>();
    std::vector<long> digits = j.at("digits").get<std::vector<long>>();
    mpz_class unit = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (*it < 0 || *it >= p) throw InputError("digit out of range");
        unit = unit * p + *it;
    }
    return PadicNumber::from_unit(p, val, unit, prec);
}

Json series_to_json(const PadicSeries& f) {
    Json j;
    j["p"] = f.prime();
    Json cs = Json::array();
    for (const auto& c : f.coeffs()) cs.push_back(padic_to_json(c));
    j["coeffs"] = cs;
    if (f.tail()) {
        j["tail"] = Json{{"alpha", rational_to_string(f.tail()->alpha)},
                         {"beta", rational_to_string(f.tail()->beta)}};
    }
    return j;
}

PadicSeries series_from_json(const Json& j) {
    long p = j.at("p").get<long>();
    std::vector<PadicNumber> coeffs;
    for (const auto& c : j.at("coeffs")) coeffs.push_back(padic_from_json(c));
    if (j.contains("tail")) {
        TailCertificate t{parse_rational(j["tail"].at("alpha").get<std::string>()),
                          parse_rational(j["tail"].at("beta").get<std::string>())};
        return PadicSeries::truncated(p, std::move(coeffs), t);
    }
    return PadicSeries::polynomial(p, std::move(coeffs));
}

Json field_to_json(const FieldPtr& K) {
    Json j;
    Json mp = Json::array();
    for (const auto& c : K->min_poly()) mp.push_back(c.get_str());
    j["min_poly"] = mp;
    return j;
}

FieldPtr field_from_json(const Json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "Q" || s == "rationals") return NumberField::rationals();
        throw InputError("unknown field shorthand: " + s);
    }
    std::vector<mpz_class> mp;
    for (const auto& c : j.at("min_poly")) {
        if (c.is_string())
            mp.emplace_back(c.get<std::string>());
        else
            mp.emplace_back(c.get<long>());
    }
    return NumberField::create(mp);
}

Json element_to_json(const AlgebraicNumber& x) {
    Json arr = Json::array();
    for (const auto& c : x.coords()) arr.push_back(rational_to_string(c));
    return arr;
}

AlgebraicNumber element_from_json(const Json& j, const FieldPtr& K) {
    std::vector<mpq_class> coords;
    if (j.is_array()) {
        for (const auto& c : j) {
            if (c.is_string())
                coords.push_back(parse_rational(c.get<std::string>()));
            else
                coords.push_back(mpq_class(c.get<long>()));
        }
    } else if (j.is_string()) {
        coords.push_back(parse_rational(j.get<std::string>()));
    } else {
        coords.push_back(mpq_class(j.get<long>()));
    }
    while (static_cast<long>(coords.size()) < K->degree()) coords.emplace_back(0);
    return AlgebraicNumber(K, std::move(coords));
}

Json interval_to_json(const Interval& v) {
    return Json{{"lower", v.lo_string()}, {"upper", v.hi_string()}};
}

Json valexp_to_json(const ValExp& v) {
    return v.is_infinity() ? Json("+inf") : Json(rational_to_string(v.value()));
}

std::string poly_to_string(const KPoly& P, const std::vector<std::string>& var_names) {
    if (P.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : P.terms()) {
        if (!first) os << " + ";
        os << "(" << c.str() << ")";
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            os << "*" << var_names[i];
            if (e[i] > 1) os << "^" << e[i];
        }
        first = false;
    }
    return os.str();
}

Json model_to_json(const GroupModel& m) {
    Json j;
    j["name"] = m.name;
    j["n"] = m.n;
    j["N"] = m.N;
    j["delta_L"] = m.delta_L.get_str();
    j["c_deg"] = m.c_deg;
    j["b_E"] = m.b_E;
    Json dp = Json::array();
    for (const auto& row : m.deriv_polys) {
        Json r = Json::array();
        for (const auto& P : row) {
            Json terms = Json::array();
            for (const auto& [e, c] : P.terms())
                terms.push_back(Json{{"expo", e}, {"coeff", element_to_json(c)}});
            r.push_back(terms);
        }
        dp.push_back(r);
    }
    j["deriv_polys"] = dp;
    Json ad = Json::array();
    for (const auto& E : m.addition) {
        Json terms = Json::array();
        for (const auto& [e, c] : E.terms())
            terms.push_back(Json{{"expo", e}, {"coeff", element_to_json(c)}});
        ad.push_back(terms);
    }
    j["addition"] = ad;
    return j;
}

Json instance_to_json(const ProofInstance& inst, long precision) {
    Json j;
    j["model"] = inst.model.name;
    j["field"] = field_to_json(inst.model.field);
    Json b = Json::array();
    for (const auto& x : inst.beta) b.push_back(element_to_json(x));
    j["beta"] = b;
    Json g = Json::array();
    for (const auto& x : inst.gamma_factors) g.push_back(element_to_json(x));
    j["gamma"] = g;
    j["p"] = inst.p;
    j["precision"] = precision;
    return j;
}

ProofInstance instance_from_json(const Json& j) {
    std::string model = j.at("model").get<std::string>();
    FieldPtr K = j.contains("field") ? field_from_json(j.at("field")) : NumberField::rationals();
    long p = j.at("p").get<long>();
    long precision = j.contains("precision") ? j.at("precision").get<long>() : 60;
    int n = 0;
    if (model == "gm") {
        n = 1;
    } else if (model.rfind("gm^", 0) == 0) {
        n = std::stoi(model.substr(3));
    } else {
        throw InputError("unknown model preset: " + model);
    }
    std::vector<AlgebraicNumber> beta, gamma;
    for (const auto& x : j.at("beta")) beta.push_back(element_from_json(x, K));
    for (const auto& x : j.at("gamma")) gamma.push_back(element_from_json(x, K));
    return make_gm_instance(n, K, beta, gamma, p, precision);
}

ProofInstance instance_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open instance file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InputError(std::string("malformed instance file: ") + e.what());
    }
    return instance_from_json(j);
}

Json verdict_to_json(const GmVerdict& v) {
    Json j;
    switch (v.outcome) {
        case GmVerdict::Outcome::pass:
            j["outcome"] = "pass";
            break;
        case GmVerdict::Outcome::fail:
            j["outcome"] = "fail";
            break;
        case GmVerdict::Outcome::linear_form_zero:
            j["outcome"] = "LinearFormZero";
            break;
        case GmVerdict::Outcome::below_precision:
            j["outcome"] = "below_precision";
            j["valuation_lower_bound"] = rational_to_string(v.v_lower_bound);
            break;
    }
    if (v.v_l_u) {
        j["v_l_u"] = rational_to_string(*v.v_l_u);
        j["log_l_u"] = interval_to_json(v.log_l_u);
    }
    if (v.outcome == GmVerdict::Outcome::pass || v.outcome == GmVerdict::Outcome::fail)
        j["theorem_bound"] = interval_to_json(v.bound);
    j["nu"] = v.nu;
    j["cleared_path_consistent"] = v.cleared_path_consistent;
    return j;
}

}  // namespace plf
