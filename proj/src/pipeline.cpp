#include "plf/pipeline.hpp"

#include <algorithm>

namespace plf {

namespace {

Interval log3(mpfr_prec_t prec = Interval::kDefaultPrec) {
    return Interval::log_q(mpq_class(3), prec);
}

long ipow(long b, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

}  // namespace

ProofInstance make_gm_instance(int n, const FieldPtr& field,
                               const std::vector<AlgebraicNumber>& beta,
                               const std::vector<AlgebraicNumber>& gamma_factors, long p,
                               long precision) {
    if (static_cast<int>(beta.size()) != n || static_cast<int>(gamma_factors.size()) != n)
        throw BadParameters("beta and gamma must have n entries");
    ProofInstance inst(make_gm_power(n, field), PadicEmbedding(field, p, precision));
    inst.beta = beta;
    inst.p = p;
    inst.d = field->degree();
    bool nonzero = false;
    mpz_class clear = 1;
    for (const auto& b : beta) {
        if (!b.is_zero()) nonzero = true;
        mpz_class den = denominator(b);
        clear = clear / gcd(clear, den) * den;
    }
    if (!nonzero) throw BadParameters("linear form must be nonzero");
    inst.beta_clearing = clear;
    AlgebraicNumber cl = AlgebraicNumber::from_rational(field, mpq_class(clear));
    for (const auto& b : beta) inst.beta_integral.push_back(b * cl);
    inst.gamma_factors = gamma_factors;

    // projective coordinates: gamma_mask = prod_{i in mask} (g_i - 1)
    inst.gamma.push_back(AlgebraicNumber::one(field));
    for (int mask = 1; mask <= inst.model.N; ++mask) {
        AlgebraicNumber c = AlgebraicNumber::one(field);
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i))
                c = c * (gamma_factors[static_cast<size_t>(i)] - AlgebraicNumber::one(field));
        inst.gamma.push_back(c);
    }

    // u_i = log_p of the embedded factor; requires v(g_i - 1) > 0
    for (const auto& g : gamma_factors) inst.u.push_back(log_p(inst.emb.embed(g)));

    // b = max(log 3, max h(beta'_i)), h = max(log 3, h(gamma))
    Interval b = log3();
    for (const auto& bi : inst.beta_integral)
        if (!bi.is_zero()) b = Interval::max(b, height(bi));
    inst.b = b;
    std::vector<AlgebraicNumber> affine(inst.gamma.begin() + 1, inst.gamma.end());
    Interval hg = heights_vector(affine).h_plus.mul_q(mpq_class(1, inst.d));
    inst.h = Interval::max(log3(), hg);

    inst.e_L = inst.model.delta_L == 1
                   ? mpq_class(0)
                   : mpq_class(valuation_z(inst.model.delta_L, mpz_class(p)));
    Interval inner = inst.model.c_height();
    if (inst.model.delta_L != 1) inner += Interval::log_q(mpq_class(inst.model.delta_L));
    if (inst.model.c_deg > 1) inner += Interval::log_q(mpq_class(inst.model.c_deg));
    mpq_class el_factor = std::max(mpq_class(1), inst.e_L);
    inst.omega_L = Interval::max(Interval::from_long(1), inner.mul_q(el_factor));
    return inst;
}

mpq_class instance_consistency_check(const ProofInstance& inst, long order) {
    ExpSeries es = exp_series(inst.model, order);
    const long p = inst.p;
    mpq_class rp = r_p_exponent(p);
    mpq_class rho;
    bool rho_set = false;
    for (const auto& ui : inst.u) {
        if (ui.is_exact_zero()) continue;
        mpq_class v = ui.valuation().value();
        if (!rho_set || v < rho) rho = v;
        rho_set = true;
    }
    mpq_class best;
    bool best_set = false;
    for (int i = 0; i < inst.model.N; ++i) {
        PadicNumber acc = PadicNumber::zero(p);
        for (const auto& [e, c] : es.f[static_cast<size_t>(i)].terms()) {
            PadicNumber term = inst.emb.embed(c);
            for (size_t j = 0; j < e.size(); ++j)
                for (int rep = 0; rep < e[j]; ++rep) term = term * inst.u[j];
            acc = acc + term;
        }
        PadicNumber diff = acc - inst.emb.embed(inst.gamma[static_cast<size_t>(i + 1)]);
        mpq_class dv =
            diff.is_exact_zero() ? mpq_class(order + 1) : diff.valuation_lower_bound().value();
        if (rho_set) {
            // truncation tail of the series evaluation
            mpq_class tail = mpq_class(order + 1) * (rho - inst.e_L - rp) + rp;
            dv = std::min(dv, tail);
        }
        if (!best_set || dv < best) best = dv;
        best_set = true;
    }
    return best;
}

ParamInputs ParamInputs::from(const Interval& b, const Interval& h) {
    return ParamInputs{b, h, b.log(), h.log()};
}

ParamInputs ParamInputs::with_exact_logs(const Interval& b, const Interval& h,
                                         const mpq_class& log_b, const mpq_class& log_h) {
    return ParamInputs{b, h, Interval::from_mpq(log_b), Interval::from_mpq(log_h)};
}

Parameters choose_parameters(const mpq_class& c, const Interval& omega_L, int n,
                             const ParamInputs& in, const mpq_class& c2) {
    if (c <= 0) throw BadParameters("c must be positive");
    if (n < 1) throw BadParameters("n must be >= 1");
    Parameters out;
    out.c = c;
    auto floor_or_throw = [](const Interval& v, const char* what) {
        auto f = v.floor_unambiguous();
        if (!f) throw PrecisionInsufficient(std::string("ambiguous floor for ") + what);
        if (*f < 0) throw InfeasibleParameters(std::string(what) + " negative");
        return static_cast<long>(f->get_si());
    };
    Interval S0I = Interval::from_mpq(c) * omega_L * (in.log_b + in.log_h);
    out.S0 = floor_or_throw(S0I, "S0");
    if (out.S0 < 2) throw InfeasibleParameters("S0 < 2: c is not large enough");
    mpq_class c5n1 = pow_q(c, 5 * n + 1);
    mpq_class c5n6 = pow_q(c, 5 * n + 6);
    mpz_class S0z(out.S0);
    Interval D0I =
        Interval::from_mpq(c5n1 * mpq_class(pow_z(S0z, static_cast<unsigned long>(n + 1)))) *
        in.h.pow_ui(static_cast<unsigned long>(n));
    out.D0 = floor_or_throw(D0I, "D0");
    out.S = static_cast<long>(floor_q(c * c * mpq_class(out.S0)).get_si());
    Interval DI =
        Interval::from_mpq(c5n1 * mpq_class(pow_z(S0z, static_cast<unsigned long>(n)))) * in.b *
        in.h.pow_ui(static_cast<unsigned long>(n - 1));
    out.D = floor_or_throw(DI, "D");
    Interval TI =
        Interval::from_mpq(c5n6 * mpq_class(pow_z(S0z, static_cast<unsigned long>(n + 1)))) *
        in.b * in.h.pow_ui(static_cast<unsigned long>(n));
    out.T = floor_or_throw(TI, "T");
    // feasibility of the Siegel step: D0 D^n >= c2 S0 T^n, exact rationals
    mpq_class lhs =
        mpq_class(out.D0) * mpq_class(pow_z(mpz_class(out.D), static_cast<unsigned long>(n)));
    mpq_class rhs = c2 * mpq_class(out.S0) *
                    mpq_class(pow_z(mpz_class(out.T), static_cast<unsigned long>(n)));
    if (lhs < rhs) throw InfeasibleParameters("D0 D^n < c2 S0 T^n");
    return out;
}

NuReduction nu_reduction(const std::vector<PadicNumber>& u, long p) {
    if (u.empty()) throw BadParameters("empty point");
    mpq_class vu;
    bool set = false;
    for (const auto& ui : u) {
        if (ui.is_exact_zero()) continue;
        mpq_class v = ui.valuation().value();  // PrecisionInsufficient propagates
        if (!set || v < vu) vu = v;
        set = true;
    }
    if (!set) throw BadParameters("nu_reduction of the zero point");
    NuReduction out;
    out.v_u = vu;
    mpz_class nu_z = floor_q(r_p_exponent(p) - vu) + 1;
    out.nu = nu_z < 0 ? 0 : static_cast<long>(nu_z.get_si());
    out.h_bound_factor = pow_z(mpz_class(p), static_cast<unsigned long>(2 * out.nu));
    for (const auto& ui : u) out.u_prime.push_back(ui.shift(mpq_class(out.nu)));
    for (const auto& ui : out.u_prime)
        if (!ui.is_exact_zero() && !(ui.valuation().value() > r_p_exponent(p)))
            throw Error("nu reduction failed to land inside the convergence domain");
    return out;
}

ExtendedData build_extended(const ProofInstance& inst) {
    ExtendedData out;
    PadicNumber l = PadicNumber::zero(inst.p);
    for (size_t i = 0; i < inst.u.size(); ++i)
        l = l + inst.emb.embed(inst.beta_integral[i]) * inst.u[i];
    out.l_of_u = l;
    out.u_bar.push_back(PadicNumber::zero(inst.p));
    for (const auto& ui : inst.u) out.u_bar.push_back(ui);
    out.w.push_back(l);
    for (const auto& ui : inst.u) out.w.push_back(ui);
    return out;
}

std::vector<AlgebraicNumber> gamma_power(const ProofInstance& inst, long s) {
    if (s < 0) throw BadParameters("negative power");
    const FieldPtr& K = inst.model.field;
    const int N = inst.model.N;
    std::vector<AlgebraicNumber> cur(static_cast<size_t>(N + 1), AlgebraicNumber::zero(K));
    cur[0] = AlgebraicNumber::one(K);  // identity (1:0:...:0)
    for (long step = 0; step < s; ++step) {
        std::vector<AlgebraicNumber> pt;
        pt.reserve(2 * (static_cast<size_t>(N) + 1));
        for (const auto& z : cur) pt.push_back(z);
        for (const auto& x : inst.gamma) pt.push_back(x);
        std::vector<AlgebraicNumber> next;
        for (int k = 0; k <= N; ++k)
            next.push_back(inst.model.addition[static_cast<size_t>(k)].evaluate(pt));
        if (next[0].is_zero()) throw AdditionFormulaUndefined("E_0 vanished while powering gamma");
        AlgebraicNumber inv = next[0].inverse();
        for (auto& x : next) x = x * inv;
        cur = next;
    }
    return cur;
}

namespace {

// E_k with the Z-slots fixed at the coordinates of gamma^s and X_0 = 1, as
// a polynomial in the N affine coordinates T_1..T_N.
std::vector<KPoly> translated_addition(const ProofInstance& inst,
                                       const std::vector<AlgebraicNumber>& gs, int upto) {
    const FieldPtr& K = inst.model.field;
    const int N = inst.model.N;
    std::vector<KPoly> out;
    for (int k = 0; k <= upto; ++k) {
        std::vector<std::optional<AlgebraicNumber>> fix(2 * (static_cast<size_t>(N) + 1),
                                                        std::nullopt);
        for (int i = 0; i <= N; ++i) fix[static_cast<size_t>(i)] = gs[static_cast<size_t>(i)];
        fix[static_cast<size_t>(N) + 1] = AlgebraicNumber::one(K);
        KPoly fixed = inst.model.addition[static_cast<size_t>(k)].partial_evaluate(fix);
        KPoly compact(K, N);
        for (const auto& [e, c] : fixed.terms()) {
            Expo e2(static_cast<size_t>(N), 0);
            for (int i = 1; i <= N; ++i)
                e2[static_cast<size_t>(i - 1)] = e[static_cast<size_t>(N + 1 + i)];
            compact.add_term(e2, c);
        }
        out.push_back(compact);
    }
    return out;
}

Interval habs_plus(const std::vector<AlgebraicNumber>& v, long d, mpfr_prec_t prec) {
    if (v.empty()) return Interval::zero(prec);
    return heights_vector(v, prec).h_plus.mul_q(mpq_class(1, d));
}

}  // namespace

TranslationData translation_polynomials(const ProofInstance& inst, long s, long D,
                                        mpfr_prec_t prec) {
    const FieldPtr& K = inst.model.field;
    const int n = inst.model.n, N = inst.model.N;
    std::vector<AlgebraicNumber> gs = gamma_power(inst, s);
    std::vector<KPoly> Etil = translated_addition(inst, gs, n);

    TranslationData out;
    std::vector<AlgebraicNumber> joint;
    for (const Expo& mj : expo_list_exact(n + 1, D)) {
        KPoly q = KPoly::constant_q(K, N, mpq_class(1));
        for (int k = 0; k <= n; ++k)
            for (int rep = 0; rep < mj[static_cast<size_t>(k)]; ++rep)
                q = q * Etil[static_cast<size_t>(k)];
        for (const auto& c : q.coefficient_vector()) joint.push_back(c);
        out.q.push_back(std::move(q));
    }
    mpz_class den = 1;
    for (const auto& c : joint) {
        mpz_class dc = denominator(c);
        den = den / gcd(den, dc) * dc;
    }
    out.den_s = den;
    out.height = habs_plus(joint, inst.d, prec);

    // provable bound: each factor Etil_k has h^+ <= log(Cmax) + h_E + b_E h(gamma^s);
    // a product of D factors adds coefficient-count logs on top
    std::vector<AlgebraicNumber> ecoeffs;
    size_t cmax = 1;
    for (const auto& E : inst.model.addition) {
        cmax = std::max(cmax, E.terms().size());
        for (const auto& c : E.coefficient_vector()) ecoeffs.push_back(c);
    }
    size_t cprime = 1;
    for (const auto& q : Etil) cprime = std::max(cprime, q.terms().size());
    Interval hE = habs_plus(ecoeffs, inst.d, prec);
    std::vector<AlgebraicNumber> gs_affine(gs.begin() + 1, gs.end());
    out.gamma_s_height = habs_plus(gs_affine, inst.d, prec);
    Interval per_factor = hE + out.gamma_s_height.mul_q(mpq_class(inst.model.b_E)) +
                          Interval::log_q(mpq_class(static_cast<long>(cmax)), prec);
    out.tracked_bound =
        per_factor.mul_q(mpq_class(D)) +
        Interval::log_q(mpq_class(static_cast<long>(cprime)), prec).mul_q(mpq_class(2 * D + 1));

    // h(gamma^s) <= s^2 h audit (the quadratic height-inflation bound). For s <= 1
    // the bound degenerates to the definitional h(gamma) <= h, an exact
    // equality the interval comparison cannot separate; check overlap there.
    if (s <= 1) {
        out.gamma_power_bound_ok =
            !Interval::certainly_lt(inst.h.mul_q(mpq_class(s) * mpq_class(s)),
                                    out.gamma_s_height);
    } else {
        Interval rhs = inst.h.mul_q(mpq_class(s) * mpq_class(s));
        out.gamma_power_bound_ok = Interval::certainly_le(out.gamma_s_height, rhs);
    }
    return out;
}

namespace {

// decompose a term of P(Y, X_0..X_n): y-degree and the monomial in the
// affine coordinates (X_0 -> 1)
struct PTerm {
    int y_deg;
    Expo r_expo;  // in N variables
    AlgebraicNumber coeff;
};

std::vector<PTerm> p_terms(const ProofInstance& inst, const KPoly& P) {
    const int n = inst.model.n, N = inst.model.N;
    if (P.nvars() != n + 2) throw BadParameters("auxiliary polynomial arity mismatch");
    std::vector<PTerm> out;
    for (const auto& [e, c] : P.terms()) {
        PTerm t;
        t.y_deg = e[0];
        t.r_expo.assign(static_cast<size_t>(N), 0);
        for (int k = 1; k <= n; ++k)
            t.r_expo[static_cast<size_t>(k - 1)] = e[static_cast<size_t>(k + 1)];
        t.coeff = c;
        out.push_back(t);
    }
    return out;
}

// prod binomial(t_k, m_k) * beta^{t-m}
AlgebraicNumber beta_binomial_factor(const ProofInstance& inst, const std::vector<int>& t,
                                     const Expo& m) {
    const FieldPtr& K = inst.model.field;
    AlgebraicNumber f = AlgebraicNumber::one(K);
    for (size_t k = 0; k < t.size(); ++k) {
        f = f * AlgebraicNumber::from_rational(
                    K, mpq_class(binomial(static_cast<unsigned long>(t[k]),
                                          static_cast<unsigned long>(m[k]))));
        int e = t[k] - m[k];
        if (e > 0) f = f * inst.beta_integral[k].pow(static_cast<unsigned long>(e));
    }
    return f;
}

}  // namespace

AlgebraicNumber delta_psi_exact(const ProofInstance& inst, const KPoly& P, long s,
                                const std::vector<int>& t) {
    const FieldPtr& K = inst.model.field;
    const int n = inst.model.n;
    if (static_cast<int>(t.size()) != n) throw BadParameters("multi-index arity mismatch");
    std::vector<AlgebraicNumber> gs = gamma_power(inst, s);
    std::vector<AlgebraicNumber> gs_affine(gs.begin() + 1, gs.end());
    long tsum = 0;
    for (int x : t) tsum += x;

    AlgebraicNumber acc = AlgebraicNumber::zero(K);
    std::map<std::pair<Expo, Expo>, AlgebraicNumber> r_cache;
    for (const PTerm& term : p_terms(inst, P)) {
        // (d/dy)^k y^i vanishes at 0 unless k = i, so |m| = |t| - y_deg
        long msum = tsum - term.y_deg;
        if (msum < 0) continue;
        AlgebraicNumber inner = AlgebraicNumber::zero(K);
        for (const Expo& m : expo_list_exact(n, msum)) {
            bool ok = true;
            for (int k = 0; k < n; ++k)
                if (m[static_cast<size_t>(k)] > t[static_cast<size_t>(k)]) ok = false;
            if (!ok) continue;
            auto key = std::make_pair(term.r_expo, m);
            auto it = r_cache.find(key);
            if (it == r_cache.end()) {
                KPoly R = KPoly::monomial(K, inst.model.N, term.r_expo, AlgebraicNumber::one(K));
                KPoly Rm = derivative_polynomial(inst.model, R, m).poly;
                it = r_cache.emplace(key, Rm.evaluate(gs_affine)).first;
            }
            inner = inner + beta_binomial_factor(inst, t, m) * it->second;
        }
        AlgebraicNumber ifact = AlgebraicNumber::from_rational(
            K, mpq_class(factorial(static_cast<unsigned long>(term.y_deg))));
        acc = acc + term.coeff * ifact * inner;
    }
    return acc;
}

namespace {

// Psi*_s(y, x) = P(y, 1, f_1(su+x), ..., f_n(su+x)) in the n+1 variables
// (y, x_1..x_n)
KSeries psi_translated_series(const ProofInstance& inst, const KPoly& P, long s, long trunc) {
    const FieldPtr& K = inst.model.field;
    const int n = inst.model.n;
    ExpSeries es = exp_series(inst.model, std::max(1L, trunc));
    std::vector<std::vector<AlgebraicNumber>> inj(
        static_cast<size_t>(n),
        std::vector<AlgebraicNumber>(static_cast<size_t>(n + 1), AlgebraicNumber::zero(K)));
    for (int j = 0; j < n; ++j)
        inj[static_cast<size_t>(j)][static_cast<size_t>(j + 1)] = AlgebraicNumber::one(K);
    std::vector<KSeries> flift;
    for (const auto& fi : es.f) flift.push_back(fi.compose_linear(inj, n + 1));

    std::vector<AlgebraicNumber> gs = gamma_power(inst, s);
    std::vector<KPoly> Etil = translated_addition(inst, gs, n);
    std::vector<KSeries> num;
    for (int k = 0; k <= n; ++k)
        num.push_back(KSeries::compose_poly(Etil[static_cast<size_t>(k)], flift));
    if (num[0].constant_term().is_zero())
        throw AdditionFormulaUndefined("E_0(su, x) vanishes at x = 0");
    KSeries inv0 = num[0].inverse();

    std::vector<KSeries> args;
    args.push_back(KSeries::variable(K, n + 1, 0, trunc));                        // Y
    args.push_back(KSeries::constant(K, n + 1, trunc, AlgebraicNumber::one(K)));  // X_0
    for (int k = 1; k <= n; ++k) args.push_back(num[static_cast<size_t>(k)] * inv0);
    return KSeries::compose_poly(P, args);
}

KSeries apply_delta_t(const ProofInstance& inst, KSeries s, const std::vector<int>& t) {
    for (size_t k = 0; k < t.size(); ++k) {
        for (int rep = 0; rep < t[k]; ++rep) {
            KSeries dy = s.derivative(0).scale(inst.beta_integral[k]);
            KSeries dx = s.derivative(static_cast<int>(k) + 1);
            s = dy + dx;
        }
    }
    return s;
}

}  // namespace

AlgebraicNumber delta_psi_series(const ProofInstance& inst, const KPoly& P, long s,
                                 const std::vector<int>& t) {
    long tsum = 0;
    for (int x : t) tsum += x;
    KSeries psi = psi_translated_series(inst, P, s, tsum + 1);
    return apply_delta_t(inst, psi, t).constant_term();
}

VanishingAudit audit_vanishing(const ProofInstance& inst, const KPoly& P, const Parameters& par,
                               const TamperHook& tamper) {
    VanishingAudit out;
    const int n = inst.model.n;
    std::vector<int> t(static_cast<size_t>(n), 0);
    auto advance = [&]() {
        for (auto& x : t) {
            if (x + 1 < 2 * par.T) {
                ++x;
                return true;
            }
            x = 0;
        }
        return false;
    };
    for (long s = 0; s < par.S0; ++s) {
        std::fill(t.begin(), t.end(), 0);
        do {
            AlgebraicNumber v = delta_psi_exact(inst, P, s, t);
            if (tamper) v = tamper(v, s, t);
            ++out.conditions;
            if (!v.is_zero()) out.failures.emplace_back(s, t);
        } while (advance());
    }
    out.all_vanish = out.failures.empty();
    return out;
}

PadicNumber delta_psi_at_w(const ProofInstance& inst, const KPoly& P, long s,
                           const std::vector<int>& t) {
    const FieldPtr& K = inst.model.field;
    const int n = inst.model.n;
    ExtendedData ext = build_extended(inst);
    PadicNumber y0 =
        ext.l_of_u * PadicNumber::from_integer(inst.p, mpz_class(std::max(s, 1L)), inst.emb.digits());
    if (s == 0) y0 = PadicNumber::zero(inst.p);
    std::vector<AlgebraicNumber> gs = gamma_power(inst, s);
    std::vector<AlgebraicNumber> gs_affine(gs.begin() + 1, gs.end());
    long tsum = 0;
    for (int x : t) tsum += x;

    PadicNumber acc = PadicNumber::zero(inst.p);
    std::map<std::pair<Expo, Expo>, AlgebraicNumber> r_cache;
    for (const PTerm& term : p_terms(inst, P)) {
        for (long msum = std::max(0L, tsum - term.y_deg); msum <= tsum; ++msum) {
            long kappa = tsum - msum;  // y-derivative order
            if (kappa > term.y_deg) continue;
            mpz_class fall = 1;  // i! / (i-kappa)!
            for (long j = 0; j < kappa; ++j) fall *= (term.y_deg - j);
            for (const Expo& m : expo_list_exact(n, msum)) {
                bool ok = true;
                for (int k2 = 0; k2 < n; ++k2)
                    if (m[static_cast<size_t>(k2)] > t[static_cast<size_t>(k2)]) ok = false;
                if (!ok) continue;
                auto key = std::make_pair(term.r_expo, m);
                auto it = r_cache.find(key);
                if (it == r_cache.end()) {
                    KPoly R =
                        KPoly::monomial(K, inst.model.N, term.r_expo, AlgebraicNumber::one(K));
                    KPoly Rm = derivative_polynomial(inst.model, R, m).poly;
                    it = r_cache.emplace(key, Rm.evaluate(gs_affine)).first;
                }
                AlgebraicNumber exact = term.coeff * beta_binomial_factor(inst, t, m) *
                                        AlgebraicNumber::from_rational(K, mpq_class(fall)) *
                                        it->second;
                if (exact.is_zero()) continue;
                PadicNumber contrib = inst.emb.embed(exact);
                long ypow = term.y_deg - kappa;
                if (ypow > 0) {
                    if (y0.is_exact_zero()) continue;
                    contrib = contrib * y0.pow(static_cast<unsigned long>(ypow));
                }
                acc = acc + contrib;
            }
        }
    }
    return acc;
}

PolyDifferenceVerdict poly_difference_bound_check(const KPoly& Q, const PadicNumber& x0,
                            const std::vector<PadicNumber>& x, const PadicEmbedding& emb) {
    if (Q.nvars() != static_cast<int>(x.size()) + 1) throw BadParameters("arity mismatch");
    long l = Q.degree_in(0);
    if (l < 1) throw BadParameters("lemma requires deg_Y >= 1");
    for (const auto& c : Q.coefficient_vector())
        if (emb.valuation(c) < 0) throw BadParameters("coefficients must be integral at p");
    for (const auto& xi : x)
        if (!xi.is_exact_zero() && xi.valuation_lower_bound() < ValExp(0L))
            throw BadParameters("x must be integral");
    auto eval_at = [&](const PadicNumber& y) {
        PadicNumber acc = PadicNumber::zero(emb.prime());
        for (const auto& [e, c] : Q.terms()) {
            PadicNumber term = emb.embed(c);
            if (e[0] > 0) {
                if (y.is_exact_zero()) continue;
                term = term * y.pow(static_cast<unsigned long>(e[0]));
            }
            for (size_t i = 0; i < x.size(); ++i)
                for (int rep = 0; rep < e[i + 1]; ++rep) term = term * x[i];
            acc = acc + term;
        }
        return acc;
    };
    PolyDifferenceVerdict out;
    PadicNumber diff = eval_at(x0) - eval_at(PadicNumber::zero(emb.prime()));
    out.difference_valuation = diff.valuation_lower_bound();
    ValExp vx0 = x0.valuation_lower_bound();
    out.bound = vx0;
    if (!vx0.is_infinity() && vx0.value() < 0) out.bound = ValExp(mpq_class(l) * vx0.value());
    out.holds = out.difference_valuation >= out.bound;
    return out;
}

bool value_group_gap_check(long d_max, const std::vector<long>& primes, long a_max) {
    for (long d = 1; d <= d_max; ++d) {
        for (long dv = 1; dv <= d; ++dv) {
            for (long p : primes) {
                for (long a = 1; a <= a_max; ++a) {
                    mpq_class v(a, dv);
                    v.canonicalize();
                    if (!(v > mpq_class(1, p - 1))) continue;
                    mpq_class lhs = v - mpq_class(1, p - 1);
                    if (!(lhs >= mpq_class(1, 2 * d * d))) return false;
                }
            }
        }
    }
    return true;
}

AuxiliaryPolynomial construct_auxiliary(const ProofInstance& inst, const Parameters& par,
                                        const PipelineConfig& cfg) {
    const FieldPtr& K = inst.model.field;
    const int n = inst.model.n;
    const long D = par.D, D0 = par.D0, T = par.T, S0 = par.S0;
    if (D < 1 || D0 < 0 || T < 1 || S0 < 1) throw BadParameters("bad toy parameters");
    {
        mpq_class lhs =
            mpq_class(D0) * mpq_class(pow_z(mpz_class(D), static_cast<unsigned long>(n)));
        mpq_class rhs =
            cfg.c2 * mpq_class(S0) * mpq_class(pow_z(mpz_class(T), static_cast<unsigned long>(n)));
        if (lhs < rhs) throw InfeasibleParameters("D0 D^n < c2 S0 T^n");
    }
    std::vector<Expo> monomials = expo_list_exact(n + 1, D);
    const long D1 = static_cast<long>(monomials.size());
    const long nvars = (D0 + 1) * D1;
    long mcond = S0 * ipow(2 * T, n);
    if (nvars <= mcond)
        throw InfeasibleParameters("Siegel system is not underdetermined at these parameters");

    long order = std::max(1L, n * (2 * T - 1));
    ExpSeries es = exp_series(inst.model, order);

    AuxiliaryPolynomial out;
    out.D = D;
    out.D0 = D0;
    out.n_vars = nvars;
    out.n_conditions = mcond;
    out.scaled_system_integral = true;

    mpz_class dpow = pow_z(inst.model.delta_L, static_cast<unsigned long>(2 * n * T));
    std::vector<std::vector<AlgebraicNumber>> forms;
    for (long s = 0; s < S0; ++s) {
        TranslationData td = translation_polynomials(inst, s, D);
        std::vector<KSeries> G;
        for (const auto& q : td.q) G.push_back(KSeries::compose_poly(q, es.f));
        AlgebraicNumber scale =
            AlgebraicNumber::from_rational(K, mpq_class(td.den_s) * mpq_class(dpow));
        std::vector<int> t(static_cast<size_t>(n), 0);
        auto advance = [&]() {
            for (auto& x : t) {
                if (x + 1 < 2 * T) {
                    ++x;
                    return true;
                }
                x = 0;
            }
            return false;
        };
        do {
            long tsum = 0;
            for (int x : t) tsum += x;
            std::vector<AlgebraicNumber> row;
            for (long i = 0; i <= D0; ++i) {
                long msum = tsum - i;
                for (long j = 0; j < D1; ++j) {
                    AlgebraicNumber a = AlgebraicNumber::zero(K);
                    if (msum >= 0) {
                        for (const Expo& m : expo_list_exact(n, msum)) {
                            bool ok = true;
                            for (int k2 = 0; k2 < n; ++k2)
                                if (m[static_cast<size_t>(k2)] > t[static_cast<size_t>(k2)])
                                    ok = false;
                            if (!ok) continue;
                            // (d^m (Q_{j,s} o f))(0) = m! coeff_m
                            mpz_class mfact = 1;
                            for (int k2 = 0; k2 < n; ++k2)
                                mfact *= factorial(
                                    static_cast<unsigned long>(m[static_cast<size_t>(k2)]));
                            AlgebraicNumber part =
                                G[static_cast<size_t>(j)].coeff(m) *
                                AlgebraicNumber::from_rational(K, mpq_class(mfact));
                            a = a + beta_binomial_factor(inst, t, m) * part;
                        }
                        a = a * AlgebraicNumber::from_rational(
                                    K, mpq_class(factorial(static_cast<unsigned long>(i))));
                    }
                    AlgebraicNumber scaled = a * scale;
                    if (denominator(scaled) != 1) out.scaled_system_integral = false;
                    row.push_back(scaled);
                }
            }
            // clear any residual denominator; scaling a form is solution-safe
            mpz_class extra = 1;
            for (const auto& a : row) {
                mpz_class da = denominator(a);
                extra = extra / gcd(extra, da) * da;
            }
            if (extra != 1) {
                AlgebraicNumber ex = AlgebraicNumber::from_rational(K, mpq_class(extra));
                for (auto& a : row) a = a * ex;
            }
            forms.push_back(std::move(row));
        } while (advance());
    }

    out.siegel = siegel_solve(forms);
    KPoly P(K, n + 2);
    long idx = 0;
    for (long i = 0; i <= D0; ++i) {
        for (long j = 0; j < D1; ++j) {
            const AlgebraicNumber& pij = out.siegel.solution[static_cast<size_t>(idx++)];
            if (pij.is_zero()) continue;
            Expo e(static_cast<size_t>(n + 2), 0);
            e[0] = static_cast<int>(i);
            for (int k = 0; k <= n; ++k)
                e[static_cast<size_t>(k + 1)] = monomials[static_cast<size_t>(j)][static_cast<size_t>(k)];
            P.add_term(e, pij);
        }
    }
    out.P = P;
    out.height = habs_plus(P.coefficient_vector(), inst.d, Interval::kDefaultPrec);
    Interval cc = inst.model.c_height();
    Interval inner = cc;
    if (inst.model.delta_L != 1) inner += Interval::log_q(mpq_class(inst.model.delta_L));
    inner += Interval::log_q(mpq_class(D + T * inst.model.c_deg));
    Interval bound = inner.mul_q(mpq_class(T)) + inst.b.mul_q(mpq_class(D0)) +
                     inst.h.mul_q(mpq_class(D) * mpq_class(S0) * mpq_class(S0));
    out.height_bound = bound.mul_q(cfg.c3);
    out.height_ok = Interval::certainly_le(out.height, out.height_bound);
    // condition 2 of the proposition, re-verified by the independent exact
    // route before the polynomial is handed out
    out.conditions_audit = audit_vanishing(inst, out.P, par);
    return out;
}

ExtrapolationReport extrapolate(const ProofInstance& inst, const Parameters& par, const KPoly& P,
                                const std::vector<int>& t, const PipelineConfig& cfg) {
    const int n = inst.model.n;
    const long p = inst.p;
    long tsum = 0;
    for (int x : t) tsum += x;
    if (tsum >= par.T) throw BadParameters("extrapolation requires |t| < T");
    if (par.S0 < 2) throw BadParameters("extrapolation requires S0 >= 2");
    ExtrapolationReport out;
    ExtendedData ext = build_extended(inst);
    mpq_class rp = r_p_exponent(p);
    // the Schwarz application needs u strictly inside B^n(r_p |delta_L|_p)
    for (const auto& ui : inst.u)
        if (!ui.is_exact_zero() && !(ui.valuation_lower_bound().value() > inst.e_L + rp))
            throw BadParameters("instance point is outside the certified Schwarz domain");
    ValExp vl = ext.l_of_u.valuation_lower_bound();

    // ---- difference-bound audit over s < S for this t ----
    out.difference_bound_ok = true;
    ValExp rhs_diff = vl - mpq_class(2 * n * par.T) * inst.e_L;
    for (long s = 0; s < par.S; ++s) {
        PadicNumber at_w = delta_psi_at_w(inst, P, s, t);
        AlgebraicNumber at_ubar = delta_psi_exact(inst, P, s, t);
        PadicNumber diff = at_w - inst.emb.embed(at_ubar);
        ValExp lhs = diff.valuation_lower_bound();
        if (!(lhs >= rhs_diff)) out.difference_bound_ok = false;
        mpq_class margin = 0;
        if (!lhs.is_infinity() && !rhs_diff.is_infinity()) margin = lhs.value() - rhs_diff.value();
        out.difference_margins.emplace_back(s, margin);
    }

    // ---- restricted series f(z) = (Delta^t Psi)(z w) with a tail certificate ----
    long Mz = tsum + 8;
    {
        KSeries psi = psi_translated_series(inst, P, 0, Mz);
        KSeries dpsi = apply_delta_t(inst, psi, t);
        mpq_class rho;
        bool rho_set = false;
        for (const auto& wi : ext.w) {
            if (wi.is_exact_zero()) continue;
            mpq_class v = wi.valuation_lower_bound().value();
            if (!rho_set || v < rho) rho = v;
            rho_set = true;
        }
        if (!rho_set) rho = 1;
        std::vector<PadicNumber> coeffs;
        for (long k = 0; k <= dpsi.trunc(); ++k) {
            PadicNumber ck = PadicNumber::zero(p);
            for (const Expo& a : expo_list_exact(n + 1, k)) {
                AlgebraicNumber c = dpsi.coeff(a);
                if (c.is_zero()) continue;
                PadicNumber term = inst.emb.embed(c);
                bool dead = false;
                for (size_t i = 0; i < a.size(); ++i) {
                    if (a[i] == 0) continue;
                    if (ext.w[i].is_exact_zero()) {
                        dead = true;
                        break;
                    }
                    term = term * ext.w[i].pow(static_cast<unsigned long>(a[i]));
                }
                if (!dead) ck = ck + term;
            }
            coeffs.push_back(ck);
        }
        TailCertificate cert;
        cert.alpha = rho - inst.e_L - rp;
        cert.beta = rp - mpq_class(tsum) * (inst.e_L + rp);
        out.restricted = PadicSeries::truncated(p, std::move(coeffs), cert);
    }

    // ---- Schwarz application: s = 1, t = p^eps, Gamma = {0..S0-1} ----
    out.epsilon = mpq_class(1, 3 * inst.d * inst.d);
    long delta_exp = 0;
    for (long a = 1; a < par.S0; ++a)
        delta_exp = std::max(delta_exp, valuation_z(mpz_class(a), mpz_class(p)));
    ValExp mu_exp = vl - mpq_class(2 * n * par.T) * inst.e_L;
    ValExp norm_t_exp(-mpq_class(par.T) * inst.e_L);
    out.schwarz_exponent = schwarz_bound(mpq_class(0), -out.epsilon, par.T, par.S0,
                                         mpq_class(delta_exp), mu_exp, norm_t_exp, p);
    // relaxed delta^{-1} < S0 form, in natural-log units:
    // v(f) log p >= (eps S0 - e_L)T log p
    //              + min{0, v(l) log p - ((2n-1)e_L + eps S0 + 1/(p-1))T log p
    //                       - S0 T log S0}
    {
        Interval logp = Interval::log_q(mpq_class(p));
        Interval logs0 = Interval::log_q(mpq_class(par.S0));
        mpq_class head = (out.epsilon * par.S0 - inst.e_L) * mpq_class(par.T);
        Interval vl_term = vl.is_infinity() ? logp.mul_q(mpq_class(1000000000))
                                            : logp.mul_q(vl.value());
        Interval tail_v =
            vl_term -
            logp.mul_q((mpq_class(2 * n - 1) * inst.e_L + out.epsilon * par.S0 + rp) *
                       mpq_class(par.T)) -
            logs0.mul_q(mpq_class(par.S0) * mpq_class(par.T));
        out.relaxed_exponent = logp.mul_q(head) + Interval::min(Interval::zero(), tail_v);
    }
    out.schwarz_audit_ok = true;
    for (long s = 0; s < par.S; ++s) {
        PadicNumber at_w = delta_psi_at_w(inst, P, s, t);
        if (!(at_w.valuation_lower_bound() >= out.schwarz_exponent))
            out.schwarz_audit_ok = false;
    }

    // ---- final-threshold proposition ----
    out.conclusion_exponent = (out.epsilon * par.S0 - inst.e_L) * par.T;
    {
        Interval logp = Interval::log_q(mpq_class(p));
        Interval logs0 = Interval::log_q(mpq_class(std::max(par.S0, 2L)));
        Interval cond_rhs = (logp.mul_q((mpq_class(par.S0) + rp + inst.e_L) * mpq_class(par.T)) +
                             logs0.mul_q(mpq_class(par.S0) * mpq_class(par.T)))
                                .mul_q(cfg.c4);
        if (!vl.is_infinity()) {
            Interval lhs = logp.mul_q(vl.value());
            out.threshold_active = Interval::certainly_le(cond_rhs, lhs);
        } else {
            out.threshold_active = true;  // l(u) = 0 exactly
        }
        if (out.threshold_active) {
            out.threshold_conclusion_ok = true;
            for (long s = 0; s < par.S; ++s) {
                AlgebraicNumber v = delta_psi_exact(inst, P, s, t);
                if (v.is_zero()) continue;
                mpq_class val = inst.emb.valuation(v);
                if (!(val >= out.conclusion_exponent)) out.threshold_conclusion_ok = false;
            }
        }
    }
    return out;
}

LiouvilleLowerReport liouville_lower(const ProofInstance& inst, const Parameters& par,
                                     const KPoly& P, long s, const std::vector<int>& t,
                                     const PipelineConfig& cfg) {
    LiouvilleLowerReport out;
    out.value = delta_psi_exact(inst, P, s, t);
    AlgebraicNumber via_series = delta_psi_series(inst, P, s, t);
    out.dual_route_equal = (out.value == via_series);
    if (out.value.is_zero()) throw ZeroValue("derivative vanishes at this (s, t)");
    out.valuation = inst.emb.valuation(out.value);
    out.height = height(out.value);
    out.liouville_bound = -(out.height.mul_q(mpq_class(inst.d)));
    Interval lhs = Interval::log_q(mpq_class(inst.p)).mul_q(-out.valuation);
    out.liouville_ok = !Interval::certainly_lt(lhs, out.liouville_bound);
    long tsum = 0;
    for (int x : t) tsum += x;
    Interval inner = inst.model.c_height();
    if (inst.model.delta_L != 1) inner += Interval::log_q(mpq_class(inst.model.delta_L));
    inner += Interval::log_q(mpq_class(par.D + std::max(1L, tsum) * inst.model.c_deg));
    Interval f = inner.mul_q(mpq_class(tsum)) + inst.b.mul_q(mpq_class(par.D0)) +
                 inst.h.mul_q(mpq_class(par.D) * mpq_class(par.S) * mpq_class(par.S));
    out.formula_bound = -(f.mul_q(cfg.c5));
    out.formula_ok = !Interval::certainly_lt(lhs, out.formula_bound);
    return out;
}

VanishingOrderReport vanishing_order_audit(const ProofInstance& inst, const Parameters& par,
                                           const KPoly& P, const PipelineConfig& cfg) {
    VanishingOrderReport out;
    const int n = inst.model.n;
    for (long s = 0; s < par.S; ++s) {
        auto eval = [&](const std::vector<int>& t) {
            return delta_psi_exact(inst, P, s, t).is_zero() ? ZeroTest::zero : ZeroTest::nonzero;
        };
        out.orders.push_back(ord_along(eval, n, par.T));
    }
    out.initial_range_ok = true;
    for (long s = 0; s < std::min(par.S0, par.S); ++s)
        if (!out.orders[static_cast<size_t>(s)].capped) out.initial_range_ok = false;
    out.dichotomy_lhs =
        binomial(static_cast<unsigned long>(par.T + n), static_cast<unsigned long>(n)) * par.S;
    mpq_class rhs = cfg.c_dich * mpq_class(par.D0) *
                    mpq_class(pow_z(mpz_class(par.D), static_cast<unsigned long>(n)));
    out.dichotomy_rhs = floor_q(rhs);
    out.dichotomy_holds = mpq_class(out.dichotomy_lhs) <= rhs;
    return out;
}

Interval theorem_bound(const Interval& omega_L, int n, const Interval& b, const Interval& h,
                       long p, const mpq_class& c0, std::optional<long> nu, mpfr_prec_t prec) {
    Interval l3 = Interval::log_q(mpq_class(3), prec).add_q(mpq_class(-1, 1000));
    if (Interval::certainly_lt(b, l3) || Interval::certainly_lt(h, l3))
        throw BadParameters("theorem bound requires b, h >= log 3");
    Interval logp = Interval::log_q(mpq_class(p), prec);
    Interval core = b.log() + h.log();
    if (nu && *nu > 0) core += logp.mul_q(mpq_class(2 * *nu));
    Interval value = omega_L.pow_ui(static_cast<unsigned long>(n + 3)) * b *
                     h.pow_ui(static_cast<unsigned long>(n)) *
                     core.pow_ui(static_cast<unsigned long>(n + 3)) * logp;
    return -(value.mul_q(c0));
}

GmVerdict verify_gm(const ProofInstance& inst, const mpq_class& c0, const PipelineConfig& cfg) {
    (void)cfg;
    GmVerdict out;
    ExtendedData ext = build_extended(inst);
    const long p = inst.p;

    // certified zero: for rational beta', l(u) = (1/q) log prod g^m with
    // integer m; zero iff the product is torsion in 1 + p Z_p
    bool rational_beta = true;
    for (const auto& b : inst.beta_integral)
        if (!b.is_rational()) rational_beta = false;
    if (rational_beta) {
        const FieldPtr& K = inst.model.field;
        AlgebraicNumber prod = AlgebraicNumber::one(K);
        for (size_t i = 0; i < inst.beta_integral.size(); ++i) {
            mpq_class m = inst.beta_integral[i].as_rational();
            if (m.get_den() != 1) throw Error("integral beta expected");
            mpz_class mi = m.get_num();
            if (mi == 0) continue;
            AlgebraicNumber g = inst.gamma_factors[i];
            AlgebraicNumber powed =
                mi > 0 ? g.pow(mi.get_ui()) : g.inverse().pow(mpz_class(-mi).get_ui());
            prod = prod * powed;
        }
        bool is_one = (prod == AlgebraicNumber::one(K));
        bool is_minus_one = (p == 2) && (prod == -AlgebraicNumber::one(K));
        if (is_one || is_minus_one) {
            out.outcome = GmVerdict::Outcome::linear_form_zero;
            return out;
        }
    }

    NuReduction nr = nu_reduction(inst.u, p);
    out.nu = nr.nu;
    std::optional<long> nu_opt;
    if (nr.nu > 0) nu_opt = nr.nu;
    out.bound = theorem_bound(inst.omega_L, inst.model.n, inst.b, inst.h, p, c0, nu_opt);

    if (ext.l_of_u.is_below_precision()) {
        out.outcome = GmVerdict::Outcome::below_precision;
        out.v_lower_bound = ext.l_of_u.valuation_lower_bound().value();
        return out;
    }
    if (ext.l_of_u.is_exact_zero()) {
        out.outcome = GmVerdict::Outcome::linear_form_zero;
        return out;
    }
    mpq_class v = ext.l_of_u.valuation().value();
    out.v_l_u = v;
    out.log_l_u = Interval::log_q(mpq_class(p)).mul_q(-v);

    // denominator-clearing consistency: v(l) = v(l') - v_p(clearing)
    if (inst.beta_clearing != 1) {
        PadicNumber l_orig = PadicNumber::zero(p);
        for (size_t i = 0; i < inst.u.size(); ++i)
            l_orig = l_orig + inst.emb.embed(inst.beta[i]) * inst.u[i];
        if (l_orig.is_provably_nonzero()) {
            mpq_class vo = l_orig.valuation().value();
            long vc = valuation_z(inst.beta_clearing, mpz_class(p));
            out.cleared_path_consistent = (vo == v - vc);
        }
    }

    out.outcome = Interval::certainly_lt(out.bound, out.log_l_u) ? GmVerdict::Outcome::pass
                                                                 : GmVerdict::Outcome::fail;
    return out;
}

}  // namespace plf
