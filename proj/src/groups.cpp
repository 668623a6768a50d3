#include "plf/groups.hpp"

#include <algorithm>

namespace plf {

Interval GroupModel::c_height(mpfr_prec_t prec) const {
    Interval best = Interval::zero(prec);
    for (const auto& row : deriv_polys)
        for (const auto& P : row) {
            if (P.is_zero()) continue;
            VectorHeights vh = heights_vector(P.coefficient_vector(), prec);
            best = Interval::max(best, vh.h_plus.mul_q(mpq_class(1, field->degree())));
        }
    return best;
}

Interval GroupModel::joint_coeff_height(mpfr_prec_t prec) const {
    std::vector<AlgebraicNumber> all;
    for (const auto& row : deriv_polys)
        for (const auto& P : row)
            for (const auto& c : P.coefficient_vector()) all.push_back(c);
    if (all.empty()) return Interval::zero(prec);
    VectorHeights vh = heights_vector(all, prec);
    return vh.h_plus.mul_q(mpq_class(1, field->degree()));
}

GroupModel make_gm_power(int n, const FieldPtr& field) {
    if (n < 1) throw BadParameters("group dimension must be >= 1");
    if (n > 10) throw BadParameters("Segre embedding of this size is beyond desk scale");
    GroupModel m;
    m.name = n == 1 ? "gm" : ("gm^" + std::to_string(n));
    m.field = field;
    m.n = n;
    m.N = (1 << n) - 1;
    m.b_E = 1;
    m.delta_L = 1;
    m.c_deg = 1;
    // coordinates: xi_S for nonempty subsets S (bitmask 1..N), xi_S = prod_{i in S}(x_i - 1)
    // L(j) = x_j d/dx_j:  L(j) xi_S = xi_S + xi_{S minus j} if j in S, else 0
    m.deriv_polys.assign(static_cast<size_t>(m.N), {});
    for (int mask = 1; mask <= m.N; ++mask) {
        auto& row = m.deriv_polys[static_cast<size_t>(mask - 1)];
        for (int j = 0; j < n; ++j) {
            KPoly P(field, m.N);
            if (mask & (1 << j)) {
                Expo e(static_cast<size_t>(m.N), 0);
                e[static_cast<size_t>(mask - 1)] = 1;
                P.add_term(e, AlgebraicNumber::one(field));
                int rest = mask & ~(1 << j);
                if (rest == 0) {
                    P.add_term(Expo(static_cast<size_t>(m.N), 0), AlgebraicNumber::one(field));
                } else {
                    Expo e2(static_cast<size_t>(m.N), 0);
                    e2[static_cast<size_t>(rest - 1)] = 1;
                    P.add_term(e2, AlgebraicNumber::one(field));
                }
            }
            row.push_back(P);
        }
    }
    // addition: E_S(Z, X) = sum over A, B subsets of S with A union B = S of Z_A X_B
    // variables: Z_mask at index mask (0..N), X_mask at index N+1+mask
    int nv = 2 * (m.N + 1);
    for (int mask = 0; mask <= m.N; ++mask) {
        KPoly E(field, nv);
        // enumerate A over subsets of mask, B must contain mask \ A
        for (int A = mask;; A = (A - 1) & mask) {
            int need = mask & ~A;
            // B ranges over supersets of `need` within mask
            int freebits = mask & ~need;
            for (int Bsub = freebits;; Bsub = (Bsub - 1) & freebits) {
                int B = need | Bsub;
                Expo e(static_cast<size_t>(nv), 0);
                e[static_cast<size_t>(A)] = 1;
                e[static_cast<size_t>(m.N + 1 + B)] = 1;
                E.add_term(e, AlgebraicNumber::one(field));
                if (Bsub == 0) break;
            }
            if (A == 0) break;
        }
        m.addition.push_back(E);
    }
    return m;
}

GroupModel make_gm_scaled(const FieldPtr& field, long k, int n) {
    if (k < 1) throw BadParameters("scale must be a positive integer");
    GroupModel m = make_gm_power(n, field);
    m.name = (n == 1 ? std::string("gm") : "gm^" + std::to_string(n)) + ":" + std::to_string(k);
    m.delta_L = k;
    // L(1) = (1/k) x_1 d/dx_1
    for (int i = 0; i < m.N; ++i)
        m.deriv_polys[static_cast<size_t>(i)][0] =
            m.deriv_polys[static_cast<size_t>(i)][0].scale_q(mpq_class(1, k));
    return m;
}

ExpSeries exp_series(const GroupModel& model, long M) {
    if (M < 1) throw BadParameters("series order must be >= 1");
    const FieldPtr& K = model.field;
    ExpSeries es;
    es.order = M;
    es.f.assign(static_cast<size_t>(model.N), KSeries::zero(K, model.n, M));
    for (long deg = 1; deg <= M; ++deg) {
        // right-hand sides P_{i,L(j)}(f) need only degree deg-1 data
        std::vector<std::vector<KSeries>> rhs(static_cast<size_t>(model.N));
        for (int i = 0; i < model.N; ++i)
            for (int j = 0; j < model.n; ++j)
                rhs[static_cast<size_t>(i)].push_back(
                    KSeries::compose_poly(model.deriv_polys[static_cast<size_t>(i)]
                                                           [static_cast<size_t>(j)],
                                          es.f)
                        .truncate(deg - 1));
        for (int i = 0; i < model.N; ++i) {
            for (const Expo& a : expo_list_exact(model.n, deg)) {
                std::optional<AlgebraicNumber> value;
                for (int j = 0; j < model.n; ++j) {
                    if (a[static_cast<size_t>(j)] == 0) continue;
                    Expo b = a;
                    b[static_cast<size_t>(j)] -= 1;
                    AlgebraicNumber cand =
                        rhs[static_cast<size_t>(i)][static_cast<size_t>(j)].coeff(b) *
                        AlgebraicNumber::from_rational(K, mpq_class(1, a[static_cast<size_t>(j)]));
                    if (!value) {
                        value = cand;
                    } else if (!(*value == cand)) {
                        throw InconsistentSystem("mixed derivatives disagree at degree " +
                                                 std::to_string(deg));
                    }
                }
                if (value && !value->is_zero())
                    es.f[static_cast<size_t>(i)].add_term(a, *value);
            }
        }
    }
    return es;
}

bool pde_consistent(const GroupModel& model, const ExpSeries& es) {
    for (int i = 0; i < model.N; ++i) {
        for (int j = 0; j < model.n; ++j) {
            KSeries lhs = es.f[static_cast<size_t>(i)].derivative(j);
            KSeries rhs =
                KSeries::compose_poly(
                    model.deriv_polys[static_cast<size_t>(i)][static_cast<size_t>(j)], es.f)
                    .truncate(es.order - 1);
            if (!(lhs == rhs)) return false;
            for (int k2 = j + 1; k2 < model.n; ++k2) {
                KSeries a = es.f[static_cast<size_t>(i)].derivative(j).derivative(k2);
                KSeries b = es.f[static_cast<size_t>(i)].derivative(k2).derivative(j);
                if (!(a == b)) return false;
            }
        }
    }
    return true;
}

bool addition_exp_compatible(const GroupModel& model, const ExpSeries& es, long order) {
    const FieldPtr& K = model.field;
    const int n = model.n, N = model.N;
    const int nv2 = 2 * n;
    // injections z -> (z, 0), w -> (0, w) and the sum map z+w
    auto embed = [&](const KSeries& s, bool second) {
        std::vector<std::vector<AlgebraicNumber>> B(
            static_cast<size_t>(n), std::vector<AlgebraicNumber>(static_cast<size_t>(nv2),
                                                                 AlgebraicNumber::zero(K)));
        for (int j = 0; j < n; ++j)
            B[static_cast<size_t>(j)][static_cast<size_t>(second ? n + j : j)] =
                AlgebraicNumber::one(K);
        return s.compose_linear(B, nv2);
    };
    auto sum_map = [&](const KSeries& s) {
        std::vector<std::vector<AlgebraicNumber>> B(
            static_cast<size_t>(n), std::vector<AlgebraicNumber>(static_cast<size_t>(nv2),
                                                                 AlgebraicNumber::zero(K)));
        for (int j = 0; j < n; ++j) {
            B[static_cast<size_t>(j)][static_cast<size_t>(j)] = AlgebraicNumber::one(K);
            B[static_cast<size_t>(j)][static_cast<size_t>(n + j)] = AlgebraicNumber::one(K);
        }
        return s.compose_linear(B, nv2);
    };
    std::vector<KSeries> args;
    // Z_0 = 1, Z_k = f_k(z); X_0 = 1, X_k = f_k(w)
    args.push_back(KSeries::constant(K, nv2, es.order, AlgebraicNumber::one(K)));
    for (int k = 1; k <= N; ++k) args.push_back(embed(es.f[static_cast<size_t>(k - 1)], false));
    args.push_back(KSeries::constant(K, nv2, es.order, AlgebraicNumber::one(K)));
    for (int k = 1; k <= N; ++k) args.push_back(embed(es.f[static_cast<size_t>(k - 1)], true));
    KSeries E0 = KSeries::compose_poly(model.addition[0], args).truncate(order);
    for (int i = 1; i <= N; ++i) {
        KSeries lhs = (sum_map(es.f[static_cast<size_t>(i - 1)]) * E0).truncate(order);
        KSeries rhs =
            KSeries::compose_poly(model.addition[static_cast<size_t>(i)], args).truncate(order);
        if (!(lhs == rhs)) return false;
    }
    return true;
}

namespace {

// one invariant-derivative step: Q -> sum_i dQ/dT_i * P_{i,L(j)}
KPoly apply_invariant_derivative(const GroupModel& model, const KPoly& Q, int j) {
    KPoly out(model.field, model.N);
    for (int i = 0; i < model.N; ++i) {
        KPoly dQ = Q.partial_derivative(i);
        if (dQ.is_zero()) continue;
        out = out + dQ * model.deriv_polys[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    return out;
}

}  // namespace

DerivPolyResult derivative_polynomial(const GroupModel& model, const KPoly& P,
                                      const std::vector<int>& t, mpfr_prec_t prec) {
    if (static_cast<int>(t.size()) != model.n) throw BadParameters("multi-index arity mismatch");
    DerivPolyResult out{P, Interval::zero(prec)};
    long D = std::max(0L, P.total_degree());
    Interval bound = P.is_zero()
                         ? Interval::zero(prec)
                         : heights_vector(P.coefficient_vector(), prec)
                               .h_plus.mul_q(mpq_class(1, model.field->degree()));
    Interval joint = model.joint_coeff_height(prec);
    // per step k: h^+ grows by at most Hcc + log(N * C(c_deg+N, N) * (D + k c_deg + 1))
    mpz_class binom_count = binomial(static_cast<unsigned long>(model.c_deg + model.N),
                                     static_cast<unsigned long>(model.N));
    long k = 0;
    for (int j = 0; j < model.n; ++j) {
        for (int rep = 0; rep < t[static_cast<size_t>(j)]; ++rep) {
            out.poly = apply_invariant_derivative(model, out.poly, j);
            mpz_class cnt = mpz_class(model.N) * binom_count * (D + k * model.c_deg + 1);
            bound = bound + joint + Interval::log_q(mpq_class(cnt), prec);
            ++k;
        }
    }
    out.height_bound = bound;
    return out;
}

DenominatorPowerVerdict denominator_power_check(const GroupModel& model, const KPoly& P,
                                                const std::vector<int>& t) {
    for (const auto& c : P.coefficient_vector())
        if (denominator(c) != 1)
            throw BadParameters("denominator_power_check requires O_K coefficients");
    long T = 0;
    for (int x : t) T += x;
    DerivPolyResult r = derivative_polynomial(model, P, t);
    mpz_class dpow = pow_z(model.delta_L, static_cast<unsigned long>(T));
    AlgebraicNumber scale = AlgebraicNumber::from_rational(model.field, mpq_class(dpow));
    DenominatorPowerVerdict v;
    v.holds = true;
    v.worst_denominator = 1;
    for (const auto& c : r.poly.coefficient_vector()) {
        mpz_class den = denominator(c * scale);
        if (den != 1) v.holds = false;
        v.worst_denominator = std::max(v.worst_denominator, den);
    }
    return v;
}

PadicEmbedding::PadicEmbedding(FieldPtr field, long p, long digits)
    : field_(std::move(field)), p_(p), digits_(digits), theta_(PadicNumber::zero(p)) {
    if (field_->is_rationals()) {
        theta_ = PadicNumber::zero(p);
        place_ = field_->places_above(mpz_class(p))[0];
        return;
    }
    auto places = field_->places_above(mpz_class(p));
    std::optional<mpz_class> root;
    for (const auto& v : places) {
        if (v.e == 1 && v.f == 1) {
            // factor = x + c: root = -c mod p
            mpz_class r = (-v.factor[0]) % p;
            if (r < 0) r += p;
            if (!root || r < *root) {
                root = r;
                place_ = v;
            }
        }
    }
    if (!root)
        throw InputError("no residue-degree-1 unramified place above " + std::to_string(p) +
                         "; instance rejected");
    theta_ = hensel_lift(field_->min_poly(), *root, p, digits);
}

mpq_class PadicEmbedding::valuation(const AlgebraicNumber& x) const {
    if (x.is_zero()) throw ZeroElement("valuation of zero");
    // e = f = 1: the place valuation is already normalized with v(p) = 1
    return mpq_class(field_->finite_valuation(x, place_));
}

PadicNumber PadicEmbedding::embed(const AlgebraicNumber& x) const {
    if (x.field() != field_) throw BadParameters("element from another field");
    if (x.is_zero()) return PadicNumber::zero(p_);
    if (field_->is_rationals())
        return PadicNumber::from_rational(p_, x.as_rational(), digits_);
    PadicNumber acc = PadicNumber::zero(p_);
    PadicNumber tp = PadicNumber::one(p_, digits_);
    for (size_t i = 0; i < x.coords().size(); ++i) {
        if (x.coords()[i] != 0)
            acc = acc + PadicNumber::from_rational(p_, x.coords()[i], digits_) * tp;
        if (i + 1 < x.coords().size()) tp = tp * theta_;
    }
    return acc;
}

SupNormVerdict sup_norm_check(const GroupModel& model, const ExpSeries& es,
                              const PadicEmbedding& emb,
                              const std::vector<std::vector<PadicNumber>>& points) {
    const long p = emb.prime();
    const mpq_class rp = r_p_exponent(p);
    const mpq_class eL(model.delta_L == 1 ? 0 : valuation_z(model.delta_L, mpz_class(p)));
    SupNormVerdict out;

    // coefficient bound audit: v(c_a) >= -|a| e_L - (|a|-1)/(p-1)
    out.coefficient_bound_verified = true;
    auto places = model.field->places_above(mpz_class(p));
    auto val_of = [&](const AlgebraicNumber& c) -> mpq_class {
        // minimum over places above p of the Q-normalized valuation
        bool first = true;
        mpq_class best = 0;
        for (const auto& v : places) {
            mpq_class w(model.field->finite_valuation(c, v), v.e);
            w.canonicalize();
            if (first || w < best) best = w;
            first = false;
        }
        return best;
    };
    for (const auto& fi : es.f) {
        for (const auto& [e, c] : fi.terms()) {
            long T = expo_total(e);
            mpq_class lower = -mpq_class(T) * eL - mpq_class(T - 1) * rp;
            if (val_of(c) < lower) out.coefficient_bound_verified = false;
        }
    }

    bool first_val = true;
    out.holds = true;
    for (const auto& x : points) {
        if (static_cast<int>(x.size()) != model.n) throw BadParameters("point arity mismatch");
        mpq_class rho;
        bool rho_set = false;
        bool zero_point = true;
        for (const auto& xi : x) {
            if (xi.is_exact_zero()) continue;
            zero_point = false;
            mpq_class v = xi.valuation().value();
            if (!rho_set || v < rho) rho = v;
            rho_set = true;
        }
        if (!zero_point && !(rho > eL + rp))
            throw DomainError("sample point outside the certified polydisk");
        for (const auto& fi : es.f) {
            // exact term-wise evaluation
            PadicNumber acc = PadicNumber::zero(p);
            for (const auto& [e, c] : fi.terms()) {
                PadicNumber term = emb.embed(c);
                for (size_t j = 0; j < e.size(); ++j)
                    for (int rep = 0; rep < e[j]; ++rep) term = term * x[j];
                acc = acc + term;
            }
            mpq_class value_v;
            if (acc.is_exact_zero()) {
                value_v = mpq_class(es.order + 1);  // placeholder large valuation
            } else {
                value_v = acc.valuation_lower_bound().value();
            }
            // tail bound: degrees > M contribute v >= (M+1)(rho - e_L - rp) + rp
            if (!zero_point) {
                mpq_class tail = mpq_class(es.order + 1) * (rho - eL - rp) + rp;
                if (!(tail > 0)) throw UncertifiedTail("series order too small to certify");
                value_v = std::min(value_v, tail);
            }
            if (!(value_v > 0)) out.holds = false;
            if (first_val || value_v < out.min_value_valuation)
                out.min_value_valuation = value_v;
            first_val = false;
        }
    }
    return out;
}

OrdResult ord_along(const DerivEvaluator& eval, int dim, long cap) {
    if (dim < 1 || cap < 1) throw BadParameters("ord_along needs dim >= 1, cap >= 1");
    for (long deg = 0; deg < cap; ++deg) {
        for (const Expo& t : expo_list_exact(dim, deg)) {
            if (eval(t) == ZeroTest::nonzero) {
                OrdResult r;
                r.order = deg;
                r.witness = t;
                return r;
            }
        }
    }
    OrdResult r;
    r.capped = true;
    r.order = cap;
    return r;
}

OrdResult ord_along_series(const KSeries& F, const std::vector<std::vector<AlgebraicNumber>>& basis,
                           long cap) {
    if (basis.empty()) throw BadParameters("empty direction basis");
    if (F.trunc() < cap - 1)
        throw BadParameters("series truncation too small for the requested cap");
    const int dim = static_cast<int>(basis.size());
    const int nv = F.nvars();
    // old var j = sum_i basis[i][j] w_i
    std::vector<std::vector<AlgebraicNumber>> B(
        static_cast<size_t>(nv),
        std::vector<AlgebraicNumber>(static_cast<size_t>(dim), AlgebraicNumber::zero(F.field())));
    for (int i = 0; i < dim; ++i) {
        if (static_cast<int>(basis[static_cast<size_t>(i)].size()) != nv)
            throw BadParameters("direction arity mismatch");
        for (int j = 0; j < nv; ++j)
            B[static_cast<size_t>(j)][static_cast<size_t>(i)] =
                basis[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    KSeries G = F.compose_linear(B, dim);
    return ord_along(
        [&](const std::vector<int>& t) {
            return G.coeff(t).is_zero() ? ZeroTest::zero : ZeroTest::nonzero;
        },
        dim, cap);
}

mpq_class tau_index(long dim_v, long dim_g) {
    if (dim_v < 0 || dim_g < 0) throw BadParameters("negative dimension");
    if (dim_g == 0) return mpq_class(1);
    mpq_class t(dim_v, dim_g);
    t.canonicalize();
    return t;
}

SemistabilityVerdict is_semistable_gm(const std::vector<AlgebraicNumber>& beta) {
    if (beta.empty()) throw BadParameters("empty linear form");
    bool all_zero = true;
    for (const auto& b : beta)
        if (!b.is_zero()) all_zero = false;
    if (all_zero) throw BadParameters("linear form must be nonzero");
    const FieldPtr& K = beta[0].field();
    const long d = K->degree();
    const size_t n = beta.size();
    // rational vectors q with sum q_i beta_i = 0: d conditions on q over Q
    QMat A(static_cast<size_t>(d), QVec(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (long r = 0; r < d; ++r)
            A[static_cast<size_t>(r)][i] = beta[i].coords()[static_cast<size_t>(r)];
    QMat ker = rational_kernel(A);
    SemistabilityVerdict v;
    if (ker.empty()) {
        v.semistable = true;
    } else {
        v.semistable = false;
        v.witness.assign(ker[0].begin(), ker[0].end());
    }
    return v;
}

}  // namespace plf
