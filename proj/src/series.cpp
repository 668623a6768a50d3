#include "plf/series.hpp"

#include <algorithm>

namespace plf {

PadicSeries::PadicSeries(long p, std::vector<PadicNumber> c, std::optional<TailCertificate> t,
                         bool polynomial)
    : p_(p), polynomial_(polynomial), coeffs_(std::move(c)), tail_(std::move(t)) {
    for (const auto& a : coeffs_)
        if (a.prime() != p_) throw BadParameters("coefficient prime mismatch");
}

PadicSeries PadicSeries::polynomial(long p, std::vector<PadicNumber> coeffs) {
    return PadicSeries(p, std::move(coeffs), std::nullopt, true);
}

PadicSeries PadicSeries::truncated(long p, std::vector<PadicNumber> coeffs,
                                   std::optional<TailCertificate> tail) {
    return PadicSeries(p, std::move(coeffs), std::move(tail), false);
}

PadicSeries PadicSeries::from_rationals(long p, const std::vector<mpq_class>& coeffs, long prec) {
    std::vector<PadicNumber> c;
    c.reserve(coeffs.size());
    for (const auto& q : coeffs) c.push_back(PadicNumber::from_rational(p, q, prec));
    return polynomial(p, std::move(c));
}

PadicSeries PadicSeries::derivative(long n) const {
    if (n < 0) throw BadParameters("negative derivative order");
    if (n == 0) return *this;
    std::vector<PadicNumber> out;
    long deg = truncation_degree();
    for (long j = 0; j + n <= deg; ++j) {
        // (j+n)! / j! = (j+1)...(j+n), an exact integer factor
        mpz_class fac = 1;
        for (long i = 1; i <= n; ++i) fac *= (j + i);
        const PadicNumber& a = coeffs_[static_cast<size_t>(j + n)];
        long prec = a.is_provably_nonzero() ? a.precision() : 8;
        out.push_back(a * PadicNumber::from_integer(p_, fac, prec + 4));
    }
    std::optional<TailCertificate> tail;
    if (tail_) {
        // v(a_{j+n} * (j+1)...(j+n)) >= alpha (j+n) + beta = alpha j + (beta + alpha n)
        tail = TailCertificate{tail_->alpha, tail_->beta + tail_->alpha * n};
    }
    return PadicSeries(p_, std::move(out), std::move(tail), polynomial_);
}

PadicNumber PadicSeries::evaluate(const PadicNumber& x) const {
    if (x.is_below_precision()) throw PrecisionInsufficient("evaluation point indeterminate");
    PadicNumber acc = PadicNumber::zero(p_);
    if (!x.is_exact_zero()) {
        PadicNumber xk = PadicNumber::one(p_, x.precision() + 4);
        for (size_t n = 0; n < coeffs_.size(); ++n) {
            if (n > 0) xk = xk * x;
            if (coeffs_[n].is_exact_zero()) continue;
            acc = acc + coeffs_[n] * xk;
        }
    } else if (!coeffs_.empty()) {
        acc = coeffs_[0];
    }
    if (tail_) {
        mpq_class vx;
        if (x.is_exact_zero()) return acc;
        vx = x.valuation().value();
        // tail terms have v >= (alpha + v(x)) n + beta; need growth
        if (tail_->alpha + vx <= 0)
            throw UncertifiedTail("series evaluation outside certified radius");
        long n0 = truncation_degree() + 1;
        mpq_class tail_v = (tail_->alpha + vx) * n0 + tail_->beta;
        acc = acc + PadicNumber::below_precision(p_, tail_v);
    }
    return acc;
}

namespace {

struct CoeffPoint {
    long n;
    mpq_class v;
};

// Exact coefficient valuations; below-precision coefficients are returned
// separately as (index, lower bound) and must be cleared against the hull.
void collect_points(const PadicSeries& f, std::vector<CoeffPoint>& pts,
                    std::vector<CoeffPoint>& uncertain) {
    const auto& c = f.coeffs();
    for (size_t n = 0; n < c.size(); ++n) {
        if (c[n].is_exact_zero()) continue;
        if (c[n].is_below_precision()) {
            uncertain.push_back({static_cast<long>(n), c[n].valuation_lower_bound().value()});
        } else {
            pts.push_back({static_cast<long>(n), c[n].valuation().value()});
        }
    }
}

}  // namespace

ValExp gauss_norm(const PadicSeries& f, const mpq_class& q) {
    std::vector<CoeffPoint> pts, uncertain;
    collect_points(f, pts, uncertain);
    ValExp best = ValExp::infinity();
    for (const auto& pt : pts) best = ValExp::min(best, ValExp(pt.v + q * pt.n));
    // a below-precision coefficient may not dip below the certified minimum
    for (const auto& pt : uncertain) {
        ValExp bound(pt.v + q * pt.n);
        if (!(best <= bound))
            throw PrecisionInsufficient("coefficient uncertainty reaches the Gauss norm");
    }
    if (f.is_polynomial()) return best;
    if (!f.tail()) throw UncertifiedTail("truncated series without a tail certificate");
    const TailCertificate& t = *f.tail();
    mpq_class slope = t.alpha + q;
    long n0 = f.truncation_degree() + 1;
    if (slope <= 0) {
        // tail contributions do not increase: the sup is not certifiable
        throw UncertifiedTail("tail certificate does not cover this radius");
    }
    ValExp tail_inf(slope * n0 + t.beta);
    if (best <= tail_inf) return best;
    throw UncertifiedTail("tail may attain the Gauss norm at this radius");
}

NewtonPolygon newton_polygon(const PadicSeries& f) {
    std::vector<CoeffPoint> pts, uncertain;
    collect_points(f, pts, uncertain);
    if (pts.empty()) {
        if (!uncertain.empty())
            throw PrecisionInsufficient("all coefficients below precision in newton_polygon");
        throw ZeroSeries("newton polygon of the zero series");
    }
    // pts are ordered by n; lower convex hull by monotone chain
    NewtonPolygon np;
    np.origin_order = pts.front().n;
    std::vector<CoeffPoint> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // drop b if it lies on or above segment a-pt
            mpq_class lhs = (b.v - a.v) * (pt.n - a.n);
            mpq_class rhs = (pt.v - a.v) * (b.n - a.n);
            if (lhs >= rhs)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }
    for (const auto& h : hull) np.vertices.emplace_back(h.n, h.v);
    for (size_t i = 0; i + 1 < hull.size(); ++i) {
        mpq_class slope = (hull[i + 1].v - hull[i].v) / (hull[i + 1].n - hull[i].n);
        np.slopes.emplace_back(slope, hull[i + 1].n - hull[i].n);
    }
    // any below-precision coefficient must certifiably sit above the hull
    for (const auto& u : uncertain) {
        // hull value at index u.n (only indices inside the hull range matter;
        // beyond the last vertex the polygon is not asserted)
        if (u.n <= hull.back().n) {
            mpq_class hv;
            if (u.n <= hull.front().n) {
                hv = hull.front().v;
            } else {
                for (size_t i = 0; i + 1 < hull.size(); ++i) {
                    if (hull[i].n <= u.n && u.n <= hull[i + 1].n) {
                        hv = hull[i].v +
                             (hull[i + 1].v - hull[i].v) * (u.n - hull[i].n) /
                                 (hull[i + 1].n - hull[i].n);
                        break;
                    }
                }
            }
            if (u.v <= hv)
                throw PrecisionInsufficient("below-precision coefficient may touch the hull");
        }
    }
    return np;
}

long count_zeros(const PadicSeries& f, const mpq_class& q, bool closed) {
    NewtonPolygon np = newton_polygon(f);
    // certification: beyond the stored range no hull edge of slope <= -q may
    // appear. For polynomials this is automatic. With a tail certificate,
    // every tail point must lie strictly above the line of slope -q through
    // the last vertex v* of the <= -q part of the hull.
    long count = np.origin_order;
    std::pair<long, mpq_class> vstar = np.vertices.front();
    size_t edge = 0;
    for (; edge < np.slopes.size(); ++edge) {
        bool in_range = closed ? (np.slopes[edge].first <= -q) : (np.slopes[edge].first < -q);
        if (!in_range) break;
        count += np.slopes[edge].second;
        vstar = np.vertices[edge + 1];
    }
    if (!f.is_polynomial()) {
        if (!f.tail()) throw UncertifiedTail("truncated series without a tail certificate");
        const TailCertificate& t = *f.tail();
        long n0 = f.truncation_degree() + 1;
        // require (alpha + q) n + beta > vstar.v + q*vstar.n for all n >= n0
        mpq_class slope = t.alpha + q;
        if (slope <= 0) throw UncertifiedTail("tail certificate does not cover this radius");
        mpq_class lhs = slope * n0 + t.beta;
        mpq_class rhs = vstar.second + q * vstar.first;
        if (!(lhs > rhs)) throw UncertifiedTail("tail may add zeros inside this disk");
        // also: stored points beyond the hull are covered by convexity, and
        // tail points beyond n0 rise along slope > -q, so no new edges.
    }
    return count;
}

LemmaVerdict check_growth_lemma(const PadicSeries& f, const mpq_class& s_exp,
                                const mpq_class& t_exp) {
    if (s_exp < t_exp) throw BadParameters("growth lemma requires s <= t, i.e. s_exp >= t_exp");
    LemmaVerdict v;
    v.zero_count = count_zeros(f, s_exp, /*closed=*/true);
    ValExp ws = gauss_norm(f, s_exp);
    ValExp wt = gauss_norm(f, t_exp);
    v.lhs = ws;
    v.rhs = ValExp(mpq_class(v.zero_count) * (s_exp - t_exp)) + wt;
    v.holds = v.lhs >= v.rhs;
    return v;
}

LemmaVerdict check_reverse_lemma(const PadicSeries& f, const mpq_class& s_exp,
                                 const mpq_class& t_exp) {
    if (s_exp < t_exp) throw BadParameters("reverse lemma requires s <= t, i.e. s_exp >= t_exp");
    LemmaVerdict v;
    v.zero_count = count_zeros(f, t_exp, /*closed=*/false);
    ValExp ws = gauss_norm(f, s_exp);
    ValExp wt = gauss_norm(f, t_exp);
    // |f|_t <= (t/s)^m |f|_s  <=>  w_t >= w_s - m (s_exp - t_exp)
    v.lhs = wt;
    if (ws.is_infinity())
        v.rhs = ValExp::infinity();
    else
        v.rhs = ValExp(ws.value() - mpq_class(v.zero_count) * (s_exp - t_exp));
    v.holds = v.lhs >= v.rhs;
    return v;
}

ValExp schwarz_bound(const mpq_class& s_exp, const mpq_class& t_exp, long k, long l,
                     const mpq_class& delta_exp, const ValExp& mu_exp, const ValExp& norm_t_exp,
                     long p) {
    if (k < 1) throw BadParameters("schwarz bound requires k >= 1");
    if (l < 2) throw BadParameters("schwarz bound requires l >= 2");
    if (delta_exp < 0) throw BadParameters("schwarz bound requires |delta|_p <= 1");
    if (s_exp < t_exp) throw BadParameters("schwarz bound requires s <= t");
    if (p < 2) throw BadParameters("prime must be >= 2");
    long kl = k * l;
    ValExp first = ValExp(mpq_class(kl) * (s_exp - t_exp)) + norm_t_exp;
    ValExp second;
    if (mu_exp.is_infinity()) {
        second = ValExp::infinity();
    } else {
        mpq_class rp_term(k - 1, p - 1);
        rp_term.canonicalize();
        second = ValExp(mu_exp.value() + mpq_class(kl - 1) * (s_exp - delta_exp) - rp_term);
    }
    return ValExp::min(first, second);
}

}  // namespace plf
