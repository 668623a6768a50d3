#include <algorithm>
#include <set>

#include "plf/numfield.hpp"

namespace plf {

namespace {

struct ComplexInterval {
    Interval re, im;
};

Interval eval_real(const std::vector<mpq_class>& coords, const Interval& root,
                   mpfr_prec_t prec) {
    Interval acc = Interval::zero(prec);
    for (auto it = coords.rbegin(); it != coords.rend(); ++it)
        acc = acc * root + Interval::from_mpq(*it, prec);
    return acc;
}

ComplexInterval eval_complex(const std::vector<mpq_class>& coords, const Interval& re,
                             const Interval& im, mpfr_prec_t prec) {
    ComplexInterval acc{Interval::zero(prec), Interval::zero(prec)};
    for (auto it = coords.rbegin(); it != coords.rend(); ++it) {
        Interval nre = acc.re * re - acc.im * im + Interval::from_mpq(*it, prec);
        Interval nim = acc.re * im + acc.im * re;
        acc.re = nre;
        acc.im = nim;
    }
    return acc;
}

// |tau_v(x)|^2 for a complex embedding, |tau_v(x)| interval squared for real
Interval arch_abs_sq(const AlgebraicNumber& x, const NumberField::ArchEmbedding& e,
                     mpfr_prec_t prec) {
    if (e.is_real) {
        Interval v = eval_real(x.coords(), e.re, prec);
        return v * v;
    }
    ComplexInterval v = eval_complex(x.coords(), e.re, e.im, prec);
    return v.re * v.re + v.im * v.im;
}

// candidate primes where some |x_i|_v may differ from 1
std::vector<mpz_class> candidate_primes(const std::vector<AlgebraicNumber>& xs) {
    std::set<mpz_class> primes;
    mpz_class norm_gcd = 0;
    bool any_nonzero = false;
    for (const auto& x : xs) {
        if (x.is_zero()) continue;
        any_nonzero = true;
        mpz_class c = 1;
        for (const auto& q : x.coords()) c = c / gcd(c, q.get_den()) * q.get_den();
        if (c > 1)
            for (const auto& [p, e] : factor_integer(c)) {
                (void)e;
                primes.insert(p);
            }
        // numerator part: c*x is integral; its norm bounds positive valuations
        AlgebraicNumber ax = x * AlgebraicNumber::from_rational(x.field(), mpq_class(c));
        mpq_class n = ax.norm();
        norm_gcd = gcd(norm_gcd, n.get_num());
    }
    if (any_nonzero && (norm_gcd == 0)) throw Error("norm gcd vanished for nonzero vector");
    if (any_nonzero && norm_gcd > 1)
        for (const auto& [p, e] : factor_integer(norm_gcd)) {
            (void)e;
            primes.insert(p);
        }
    return std::vector<mpz_class>(primes.begin(), primes.end());
}

}  // namespace

Interval normalized_abs_log(const AlgebraicNumber& x, const Place& v, mpfr_prec_t prec) {
    if (x.is_zero()) throw ZeroElement("log of |0|");
    const auto& K = x.field();
    if (v.kind == Place::Kind::finite) {
        long w = K->finite_valuation(x, v);
        // log|x|_v = -f * w * log p
        return Interval::log_q(mpq_class(v.p), prec).mul_q(mpq_class(-v.f * w));
    }
    for (mpfr_prec_t P = prec;; P *= 2) {
        const auto& emb = K->embeddings(P);
        const auto& e = emb[static_cast<size_t>(v.arch_index)];
        Interval sq = arch_abs_sq(x, e, P);
        if (!sq.contains_zero()) {
            // real: log|tau| = (1/2) log(tau^2); complex: log|tau|^2 directly
            Interval lg = sq.log();
            return e.is_real ? lg.mul_q(mpq_class(1, 2)) : lg;
        }
        if (P > 64 * prec)
            throw PrecisionInsufficient("archimedean embedding cannot separate from zero");
    }
}

ProductFormulaVerdict product_formula_check(const AlgebraicNumber& x, mpfr_prec_t prec) {
    if (x.is_zero()) throw ZeroElement("product formula for zero");
    ProductFormulaVerdict out;
    const auto& K = x.field();
    if (K->is_rationals()) {
        mpq_class q = abs(x.as_rational());
        mpq_class prod = q;
        for (const auto& [p, e] : factor_integer(q.get_num())) {
            (void)e;
            prod *= pow_q(mpq_class(p), -valuation_q(q, p));
        }
        for (const auto& [p, e] : factor_integer(q.get_den())) {
            (void)e;
            if (valuation_q(q, p) < 0) prod *= pow_q(mpq_class(p), -valuation_q(q, p));
        }
        out.exact = true;
        out.pass = (prod == 1);
        out.sum = Interval::zero(prec);
        out.width = 0;
        return out;
    }
    Interval sum = Interval::zero(prec);
    for (const Place& v : K->archimedean_places()) sum += normalized_abs_log(x, v, prec);
    for (const auto& p : candidate_primes({x}))
        for (const Place& v : K->places_above(p)) {
            long w = K->finite_valuation(x, v);
            if (w != 0) sum += Interval::log_q(mpq_class(p), prec).mul_q(mpq_class(-v.f * w));
        }
    out.exact = false;
    out.sum = sum;
    out.width = sum.width();
    out.pass = sum.contains_zero();
    return out;
}

VectorHeights heights_vector(const std::vector<AlgebraicNumber>& xs, mpfr_prec_t prec) {
    VectorHeights out{Interval::zero(prec), Interval::zero(prec), Interval::zero(prec),
                      Interval::zero(prec)};
    if (xs.empty()) return out;
    bool all_zero = true;
    for (const auto& x : xs)
        if (!x.is_zero()) all_zero = false;
    if (all_zero) return out;
    const auto& K = xs[0].field();
    for (const auto& x : xs)
        if (x.field() != K) throw BadParameters("mixed fields in heights_vector");

    // finite places: the max-coordinate valuation is also the L2 local norm
    for (const auto& p : candidate_primes(xs)) {
        for (const Place& v : K->places_above(p)) {
            long minv = 0;
            bool seen = false;
            for (const auto& x : xs) {
                if (x.is_zero()) continue;
                long w = K->finite_valuation(x, v);
                minv = seen ? std::min(minv, w) : w;
                seen = true;
            }
            if (!seen || minv == 0) continue;
            mpq_class factor(-v.f * minv);
            Interval term = Interval::log_q(mpq_class(p), prec).mul_q(factor);
            out.h_max += term;
            out.h_l2 += term;
            out.h_plus += term.max0();
            out.h_l2_plus += term.max0();
        }
    }

    // archimedean places
    for (mpfr_prec_t P = prec;; P *= 2) {
        bool ok = true;
        Interval hmax = Interval::zero(prec), hl2 = Interval::zero(prec),
                 hplus = Interval::zero(prec), hl2plus = Interval::zero(prec);
        const auto& emb = K->embeddings(P);
        for (const auto& e : emb) {
            Interval max_sq = Interval::zero(P);
            Interval sum_sq = Interval::zero(P);
            bool first = true;
            for (const auto& x : xs) {
                if (x.is_zero()) continue;
                Interval sq = arch_abs_sq(x, e, P);
                max_sq = first ? sq : Interval::max(max_sq, sq);
                sum_sq = sum_sq + sq;
                first = false;
            }
            if (max_sq.contains_zero() || sum_sq.contains_zero()) {
                ok = false;
                break;
            }
            // real: |x|_v = |tau|, |x|_{L2,v} = sqrt(sum tau^2)
            // complex: |x|_v = |tau|^2, |x|_{L2,v} = sum |tau|^2
            mpq_class half(1, 2);
            Interval lmax = e.is_real ? max_sq.log().mul_q(half) : max_sq.log();
            Interval l2 = e.is_real ? sum_sq.log().mul_q(half) : sum_sq.log();
            hmax += lmax;
            hl2 += l2;
            hplus += lmax.max0();
            hl2plus += l2.max0();
        }
        if (ok) {
            out.h_max += hmax;
            out.h_l2 += hl2;
            out.h_plus += hplus;
            out.h_l2_plus += hl2plus;
            break;
        }
        if (P > 64 * prec)
            throw PrecisionInsufficient("archimedean heights cannot separate from zero");
    }
    return out;
}

Interval height(const AlgebraicNumber& x, mpfr_prec_t prec) {
    if (x.is_zero()) return Interval::zero(prec);
    VectorHeights vh = heights_vector({x}, prec);
    return vh.h_plus.mul_q(mpq_class(1, x.field()->degree()));
}

LiouvilleVerdict liouville_check(const AlgebraicNumber& x, const Place& v, mpfr_prec_t prec) {
    if (x.is_zero()) throw ZeroElement("liouville check for zero");
    LiouvilleVerdict out;
    const long d = x.field()->degree();
    out.lhs = normalized_abs_log(x, v, prec);
    out.rhs = -(height(x, prec).mul_q(mpq_class(d)));
    if (Interval::certainly_le(out.rhs, out.lhs)) {
        out.pass = true;
        return out;
    }
    // Boundary cases (units, prime powers) are exact equalities where the
    // interval comparison cannot decide. Rewrite via the product formula:
    //   log|x|_v + d h(x) = log^+|x|_v + sum_{w != v} max(0, -log|x|_w),
    // a sum of termwise nonnegative quantities, hence certified >= 0.
    const auto& K = x.field();
    auto same_place = [&](const Place& a, const Place& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == Place::Kind::finite) return a.p == b.p && a.factor == b.factor;
        return a.arch_index == b.arch_index;
    };
    Interval slack = Interval::zero(prec);
    for (const Place& w : K->archimedean_places()) {
        Interval lg = normalized_abs_log(x, w, prec);
        slack += same_place(w, v) ? lg.max0() : (-lg).max0();
    }
    for (const auto& p : candidate_primes({x})) {
        for (const Place& w : K->places_above(p)) {
            long val = K->finite_valuation(x, w);
            if (val == 0 && !(v.kind == Place::Kind::finite && same_place(w, v))) continue;
            Interval lg = Interval::log_q(mpq_class(p), prec).mul_q(mpq_class(-w.f * val));
            slack += same_place(w, v) ? lg.max0() : (-lg).max0();
        }
    }
    // a definite reverse inequality would mean the rewrite and the direct
    // computation disagree: report it as a failure rather than mask it
    out.pass = slack.is_nonnegative() && !Interval::certainly_lt(out.lhs, out.rhs);
    return out;
}

mpz_class denominator(const AlgebraicNumber& x) {
    mpz_class c = 1;
    for (const auto& q : x.coords()) c = c / gcd(c, q.get_den()) * q.get_den();
    return c;
}

DenominatorResult denominator_with_check(const AlgebraicNumber& x, mpfr_prec_t prec) {
    DenominatorResult out;
    out.delta = denominator(x);
    const long d = x.field()->degree();
    out.log_delta =
        out.delta == 1 ? Interval::zero(prec) : Interval::log_q(mpq_class(out.delta), prec);
    out.bound = x.is_zero() ? Interval::zero(prec) : height(x, prec).mul_q(mpq_class(d));
    if (out.delta == 1) {
        out.lemma_holds = true;
        return out;
    }
    if (Interval::certainly_le(out.log_delta, out.bound)) {
        out.lemma_holds = true;
        return out;
    }
    // Exact comparison per prime: the finite part of d h(x) dominates
    // log(delta) prime by prime; sum f_w (-v_w)^+ >= a_p with
    // delta = prod p^{a_p}, a_p = max_w ceil(-v_w / e_w).
    const auto& K = x.field();
    bool ok = !Interval::certainly_lt(out.bound, out.log_delta);
    for (const auto& [p, ap] : factor_integer(out.delta)) {
        long sum_plus = 0;
        for (const Place& w : K->places_above(p)) {
            long val = K->finite_valuation(x, w);
            if (val < 0) sum_plus += w.f * (-val);
        }
        ok = ok && (sum_plus >= ap);
        if (!ok) break;
    }
    out.lemma_holds = ok;
    return out;
}

}  // namespace plf
