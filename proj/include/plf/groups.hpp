#pragma once

#include <functional>
#include <string>

#include "plf/interval.hpp"
#include "plf/kpoly.hpp"
#include "plf/numfield.hpp"
#include "plf/padic.hpp"

namespace plf {

// Projective model of a commutative algebraic group: dimension n, ambient
// P^N, invariant-derivative polynomials P_{i,L(j)} in the affine coordinates
// xi_1..xi_N, and a bihomogeneous addition formula E_0..E_N in
// (Z_0..Z_N, X_0..X_N). The identity sits at (1:0:...:0) and X_0 does not
// vanish on the points the pipeline touches.
struct GroupModel {
    std::string name;
    FieldPtr field;
    int n = 0;  // group dimension
    int N = 0;  // ambient projective dimension
    std::vector<std::vector<KPoly>> deriv_polys;  // [i in 0..N-1][j in 0..n-1], N variables
    std::vector<KPoly> addition;                  // N+1 polynomials in 2(N+1) variables
    int b_E = 1;                                  // bidegree of the addition formula
    mpz_class delta_L = 1;                        // denominator of the basis L
    int c_deg = 1;                                // max deg P_{i,L(j)}

    // absolute h^+ of each P's coefficient point, and of all of them jointly
    Interval c_height(mpfr_prec_t prec = Interval::kDefaultPrec) const;
    Interval joint_coeff_height(mpfr_prec_t prec = Interval::kDefaultPrec) const;
};

// G_m^n via the per-factor chart g -> (1 : g-1) and the Segre product
// embedding: coordinates are indexed by subsets S of {1..n} (bitmask k),
// N = 2^n - 1, delta_L = 1, c_deg = 1, c_height = 0.
GroupModel make_gm_power(int n, const FieldPtr& field);

// G_m^n with the basis vector L(1) scaled by 1/k: delta_L = k. Exercises
// the denominator bookkeeping.
GroupModel make_gm_scaled(const FieldPtr& field, long k, int n = 1);

// Truncated normalized exponential series: N series f_i in n variables with
// f(0) = 0 and d/dz_j f_i = P_{i,L(j)}(f_1..f_N) through total degree M.
struct ExpSeries {
    long order = 0;
    std::vector<KSeries> f;
};

// Solves the PDE system degree by degree; throws InconsistentSystem if the
// mixed-derivative consistency check fails.
ExpSeries exp_series(const GroupModel& model, long M);

// Re-checks d_j d_k f_i = d_k d_j f_i and the defining PDEs on a computed
// series.
bool pde_consistent(const GroupModel& model, const ExpSeries& es);

// f_i(z+w) * E_0(f(z), f(w)) = E_i(f(z), f(w)) as series in 2n variables,
// compared through total degree `order`.
bool addition_exp_compatible(const GroupModel& model, const ExpSeries& es, long order);

// The polynomial P_t with d^t P(f_1..f_N) = P_t(f_1..f_N), built by the
// chain-rule recursion, together with a certified height bound that is
// monotone in |t|.
struct DerivPolyResult {
    KPoly poly;
    Interval height_bound;  // provable upper bound for h^+(P_t)/d
};
DerivPolyResult derivative_polynomial(const GroupModel& model, const KPoly& P,
                                      const std::vector<int>& t,
                                      mpfr_prec_t prec = Interval::kDefaultPrec);

// delta_L^{|t|} * P_t has O_K coefficients when P does.
struct DenominatorPowerVerdict {
    bool holds = false;
    mpz_class worst_denominator;  // of delta_L^{|t|} P_t
};
DenominatorPowerVerdict denominator_power_check(const GroupModel& model, const KPoly& P,
                                                const std::vector<int>& t);

// Embedding of K into Q_p through a simple root of the minimal polynomial;
// requires a residue-degree-1 unramified place above p.
class PadicEmbedding {
public:
    PadicEmbedding(FieldPtr field, long p, long digits);
    PadicNumber embed(const AlgebraicNumber& x) const;
    long prime() const { return p_; }
    long digits() const { return digits_; }
    const FieldPtr& field() const { return field_; }
    // the finite place the embedding factors through (e = f = 1)
    const Place& place() const { return place_; }
    // exact valuation of a nonzero K element at that place
    mpq_class valuation(const AlgebraicNumber& x) const;

private:
    FieldPtr field_;
    long p_ = 0;
    long digits_ = 0;
    PadicNumber theta_ = PadicNumber::zero(2);
    Place place_;
};

// |f_i(x)|_p < 1 on the certified polydisk: term-wise evaluation plus the
// tail bound v(coeff of degree T) >= -T e_L - (T-1)/(p-1).
struct SupNormVerdict {
    bool holds = false;
    bool coefficient_bound_verified = false;
    mpq_class min_value_valuation;  // over all i and sample points
};
SupNormVerdict sup_norm_check(const GroupModel& model, const ExpSeries& es,
                              const PadicEmbedding& emb,
                              const std::vector<std::vector<PadicNumber>>& points);

// Least total derivative order along the span of the given directions at
// which the evaluator is nonzero; scans multi-indices by total degree.
enum class ZeroTest { zero, nonzero };
using DerivEvaluator = std::function<ZeroTest(const std::vector<int>&)>;
struct OrdResult {
    bool capped = false;
    long order = 0;
    std::vector<int> witness;
};
OrdResult ord_along(const DerivEvaluator& eval, int dim, long cap);

// Order along a subspace from a local series expansion: directions are rows
// of `basis` (dim x nvars). Requires F.trunc() >= cap - 1.
OrdResult ord_along_series(const KSeries& F, const std::vector<std::vector<AlgebraicNumber>>& basis,
                           long cap);

// dim V / dim G, with the convention 1 for dim G = 0.
mpq_class tau_index(long dim_v, long dim_g);

// For G = G_m^n and W = ker(l), semistability over Qbar is equivalent to W
// containing no nonzero Q-rational vector; a witness relation is returned
// on failure.
struct SemistabilityVerdict {
    bool semistable = false;
    std::vector<mpq_class> witness;  // rational relation sum q_i beta_i = 0
};
SemistabilityVerdict is_semistable_gm(const std::vector<AlgebraicNumber>& beta);

}  // namespace plf
