#pragma once

#include <functional>
#include <optional>

#include "plf/groups.hpp"
#include "plf/series.hpp"

namespace plf {

// Effective constants of the proof. The theory only asserts that they
// exist; every comparison the pipeline reports is parametric in them, with
// defaults chosen so the toy parameter sets are feasible.
struct PipelineConfig {
    mpq_class c = 3;        // master parameter of the choice of S0, D0, S, D, T
    mpq_class c0 = 1;       // theorem bound, statement 1
    mpq_class c1 = 1;       // theorem bound, statement 2
    mpq_class c2 = 1;       // Siegel feasibility D0 D^n >= c2 S0 T^n
    mpq_class c3 = 64;      // auxiliary polynomial height bound
    mpq_class c4 = 1;       // extrapolation threshold
    mpq_class c5 = 64;      // Liouville lower bound shape
    mpq_class c_dich = 1;   // multiplicity-estimate dichotomy inequality
    long precision = 60;    // p-adic working digits
};

// Instance (model, beta, u, gamma, p, b, h) with everything the sections of
// the proof consume. gamma is the projective point Exp(u) with gamma_0 = 1;
// for G_m^n it is assembled from per-factor values g_i in 1 + p Z_p.
struct ProofInstance {
    ProofInstance(GroupModel m, PadicEmbedding e) : model(std::move(m)), emb(std::move(e)) {}

    GroupModel model;
    PadicEmbedding emb;
    std::vector<AlgebraicNumber> beta;           // as given (K coefficients)
    std::vector<AlgebraicNumber> beta_integral;  // cleared to O_K
    mpz_class beta_clearing = 1;                 // lcm of the beta denominators
    std::vector<AlgebraicNumber> gamma_factors;  // per-factor g_i
    std::vector<AlgebraicNumber> gamma;          // N+1 projective coords, gamma[0] = 1
    long p = 0;
    long d = 1;
    Interval b;  // log B >= log 3
    Interval h;  // log H >= log 3
    std::vector<PadicNumber> u;  // u_i = log_p(g_i)
    mpq_class e_L = 0;           // v(delta_L)
    Interval omega_L;            // max(1, max(1,e_L)(c_height + log delta_L + log c_deg))
};

// Builds a G_m^n instance over Q or a supported monogenic field. Factors
// must map into 1 + p Z_p under the fixed embedding.
ProofInstance make_gm_instance(int n, const FieldPtr& field,
                               const std::vector<AlgebraicNumber>& beta,
                               const std::vector<AlgebraicNumber>& gamma_factors, long p,
                               long precision);

// Checks f_i(u) = gamma_i / gamma_0 to working precision; returns the
// minimum certified valuation of the differences.
mpq_class instance_consistency_check(const ProofInstance& inst, long order);

struct Parameters {
    mpq_class c;
    long S0 = 0, D0 = 0, S = 0, D = 0, T = 0;
};

// Interval inputs for the parameter formulas; exact log overrides let tests
// reproduce idealized hand computations (log b = log h = 1 at b = h = e).
struct ParamInputs {
    Interval b, h, log_b, log_h;
    static ParamInputs from(const Interval& b, const Interval& h);
    static ParamInputs with_exact_logs(const Interval& b, const Interval& h,
                                       const mpq_class& log_b, const mpq_class& log_h);
};

// S0 = [c w (log b + log h)], D0 = [c^{5n+1} S0^{n+1} h^n], S = [c^2 S0],
// D = [c^{5n+1} S0^n b h^{n-1}], T = [c^{5n+6} S0^{n+1} b h^n].
Parameters choose_parameters(const mpq_class& c, const Interval& omega_L, int n,
                             const ParamInputs& in, const mpq_class& c2);

struct NuReduction {
    long nu = 0;
    mpq_class v_u;
    std::vector<PadicNumber> u_prime;
    mpz_class h_bound_factor = 1;  // p^{2 nu}
};
NuReduction nu_reduction(const std::vector<PadicNumber>& u, long p);

struct ExtendedData {
    std::vector<PadicNumber> u_bar;  // (0, u)
    std::vector<PadicNumber> w;      // (l(u), u)
    PadicNumber l_of_u;
};
ExtendedData build_extended(const ProofInstance& inst);

// Q_{j,s} with M_j(E_0(su,x),...,E_n(su,x)) = Q_{j,s}(f_1(x),...,f_N(x)),
// one polynomial per degree-D monomial M_j in X_0..X_n.
struct TranslationData {
    std::vector<KPoly> q;      // polynomials in the N affine coordinates
    mpz_class den_s = 1;       // common denominator of all coefficients
    Interval height;           // h^+ of the joint coefficient vector (absolute)
    Interval tracked_bound;    // provable upper bound for the above
    Interval gamma_s_height;   // h(gamma^s)
    bool gamma_power_bound_ok = false;  // h(gamma^s) <= s^2 h audit (s >= 1)
};
TranslationData translation_polynomials(const ProofInstance& inst, long s, long D,
                                        mpfr_prec_t prec = Interval::kDefaultPrec);

// Exact projective coordinates of gamma^s via the addition formula,
// normalized to gamma^s_0 = 1.
std::vector<AlgebraicNumber> gamma_power(const ProofInstance& inst, long s);

struct VanishingAudit {
    bool all_vanish = false;
    long conditions = 0;
    std::vector<std::pair<long, std::vector<int>>> failures;
};

struct AuxiliaryPolynomial {
    KPoly P;  // in n+2 variables Y, X_0..X_n; O_K coefficients
    long D = 0, D0 = 0;
    long n_vars = 0;        // (D0+1) * #monomials
    long n_conditions = 0;  // S0 (2T)^n
    Interval height;        // h(P) (absolute)
    Interval height_bound;  // c3 (T(cc + log delta_L + log(D + T c_deg)) + D0 b + D S0^2 h)
    bool height_ok = false;
    bool scaled_system_integral = false;  // den_s delta_L^{2nT} a_{ij}^{st} in O_K
    SiegelResult siegel;
    VanishingAudit conditions_audit;  // condition 2 re-verified, never assumed
};
AuxiliaryPolynomial construct_auxiliary(const ProofInstance& inst, const Parameters& par,
                                        const PipelineConfig& cfg);

// (Delta^t Psi_P)(s u_bar) as an exact element of K.
// Route B: binomial expansion + Lemma-ww derivative polynomials evaluated at
// the exact coordinates of gamma^s.
AlgebraicNumber delta_psi_exact(const ProofInstance& inst, const KPoly& P, long s,
                                const std::vector<int>& t);
// Route A: translate the exponential series, expand, differentiate.
// Independent of route B; equality of the two is the dual-route audit.
AlgebraicNumber delta_psi_series(const ProofInstance& inst, const KPoly& P, long s,
                                 const std::vector<int>& t);

// Re-verifies condition 2 of the auxiliary-polynomial proposition for every
// (s, t) with 0 <= s < S0 and 0 <= t_i < 2T. The tamper hook perturbs the
// computed value and exists for audit-of-the-audit tests.
using TamperHook =
    std::function<AlgebraicNumber(const AlgebraicNumber&, long, const std::vector<int>&)>;
VanishingAudit audit_vanishing(const ProofInstance& inst, const KPoly& P, const Parameters& par,
                               const TamperHook& tamper = nullptr);

// (Delta^t Psi)(s w) with the y-slot evaluated at the p-adic s*l(u).
PadicNumber delta_psi_at_w(const ProofInstance& inst, const KPoly& P, long s,
                           const std::vector<int>& t);

// |Q(x0,x) - Q(0,x)|_p <= max_{1<=i<=l} |x0|_p^i for Q over O_v, x integral.
struct PolyDifferenceVerdict {
    bool holds = false;
    ValExp difference_valuation;
    ValExp bound;
};
PolyDifferenceVerdict poly_difference_bound_check(const KPoly& Q, const PadicNumber& x0,
                            const std::vector<PadicNumber>& x, const PadicEmbedding& emb);

// v(alpha) - 1/(p-1) >= 1/(2 d^2) over the value-group grid (1/dv) Z.
bool value_group_gap_check(long d_max, const std::vector<long>& primes, long a_max);

struct ExtrapolationReport {
    // difference bound: v(D^t Psi(sw) - D^t Psi(s u_bar)) >= v(l(u)) - 2nT e_L
    bool difference_bound_ok = false;
    std::vector<std::pair<long, mpq_class>> difference_margins;  // per audited s
    // restricted one-variable series along w with a tail certificate
    PadicSeries restricted;
    // Schwarz application with s = 1, t = p^eps, Gamma = {0..S0-1}
    mpq_class epsilon;        // 1/(3 d^2)
    ValExp schwarz_exponent;  // exact-delta form of the bound exponent
    Interval relaxed_exponent;  // delta^{-1} < S0 form, (eps S0 - e_L)T - ... log_p S0 term
    bool schwarz_audit_ok = false;  // v(D^t Psi(sw)) >= schwarz_exponent on samples
    // final-threshold proposition
    bool threshold_active = false;
    bool threshold_conclusion_ok = false;
    mpq_class conclusion_exponent;  // (eps S0 - e_L) T
};
ExtrapolationReport extrapolate(const ProofInstance& inst, const Parameters& par, const KPoly& P,
                                const std::vector<int>& t, const PipelineConfig& cfg);

struct LiouvilleLowerReport {
    AlgebraicNumber value;
    bool dual_route_equal = false;
    mpq_class valuation;       // exact v of the value at the working place
    Interval height;           // h(value)
    Interval liouville_bound;  // -[K:Q] h(value), lower bound for log|value|_p
    bool liouville_ok = false;
    Interval formula_bound;  // -c5(T'(cc+log cd+log(D+T' c_deg)) + D0 b + D S^2 h)
    bool formula_ok = false;
};
LiouvilleLowerReport liouville_lower(const ProofInstance& inst, const Parameters& par,
                                     const KPoly& P, long s, const std::vector<int>& t,
                                     const PipelineConfig& cfg);

struct VanishingOrderReport {
    std::vector<OrdResult> orders;  // per s in 0..S-1 along the Delta basis
    bool initial_range_ok = false;  // order >= T for s < S0
    bool dichotomy_holds = false;   // binom(T+n,n) S <= c_dich D0 D^n
    mpz_class dichotomy_lhs, dichotomy_rhs;
};
VanishingOrderReport vanishing_order_audit(const ProofInstance& inst, const Parameters& par,
                                           const KPoly& P, const PipelineConfig& cfg);

// -c0 w^{n+3} b h^n (log b + log h [+ 2 nu log p])^{n+3} log p
Interval theorem_bound(const Interval& omega_L, int n, const Interval& b, const Interval& h,
                       long p, const mpq_class& c0, std::optional<long> nu,
                       mpfr_prec_t prec = Interval::kDefaultPrec);

struct GmVerdict {
    enum class Outcome { pass, fail, linear_form_zero, below_precision };
    Outcome outcome = Outcome::fail;
    std::optional<mpq_class> v_l_u;  // certified valuation when available
    mpq_class v_lower_bound = 0;     // sound bound when below precision
    Interval log_l_u;                // log|l(u)|_p when certified
    Interval bound;                  // theorem bound (statement 1 or 2)
    long nu = 0;
    bool cleared_path_consistent = true;  // |l(u)|_p = |delta^{-1}|_p |l'(u)|_p check
};
GmVerdict verify_gm(const ProofInstance& inst, const mpq_class& c0, const PipelineConfig& cfg);

}  // namespace plf
