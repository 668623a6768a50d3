#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "plf/padic.hpp"
#include "plf/valuation.hpp"

namespace plf {

// Affine lower bound v(a_n) >= alpha*n + beta for every coefficient beyond
// the stored truncation.
struct TailCertificate {
    mpq_class alpha;
    mpq_class beta;
};

// One-variable truncated power series over Q_p. A series is either an
// honest polynomial (no tail) or a truncation with a tail-valuation
// certificate; norm and zero-count queries refuse to answer when the
// certificate cannot exclude tail interference.
class PadicSeries {
public:
    PadicSeries() : p_(2) {}
    static PadicSeries polynomial(long p, std::vector<PadicNumber> coeffs);
    static PadicSeries truncated(long p, std::vector<PadicNumber> coeffs,
                                 std::optional<TailCertificate> tail);
    static PadicSeries from_rationals(long p, const std::vector<mpq_class>& coeffs, long prec);

    long prime() const { return p_; }
    bool is_polynomial() const { return polynomial_; }
    const std::vector<PadicNumber>& coeffs() const { return coeffs_; }
    const std::optional<TailCertificate>& tail() const { return tail_; }
    long truncation_degree() const { return static_cast<long>(coeffs_.size()) - 1; }

    // Exact coefficient-wise derivative d^n/dz^n without implicit division:
    // the falling-factorial factors are integers.
    PadicSeries derivative(long n) const;

    // Sum a_k x^k; requires convergence certified by the tail bound.
    PadicNumber evaluate(const PadicNumber& x) const;

private:
    PadicSeries(long p, std::vector<PadicNumber> c, std::optional<TailCertificate> t,
                bool polynomial);

    long p_;
    bool polynomial_ = true;
    std::vector<PadicNumber> coeffs_;
    std::optional<TailCertificate> tail_;
};

// Lower convex hull of {(n, v(a_n))}: slopes are weakly increasing and a
// slope -q segment of horizontal length m certifies m zeros of valuation q.
struct NewtonPolygon {
    long origin_order = 0;  // multiplicity of the zero at z = 0
    std::vector<std::pair<long, mpq_class>> vertices;
    std::vector<std::pair<mpq_class, long>> slopes;  // (slope, multiplicity)
};

// Exponent w with |f|_{p^{-q}} = p^{-w}: w = min_n (v(a_n) + n q).
ValExp gauss_norm(const PadicSeries& f, const mpq_class& q);

NewtonPolygon newton_polygon(const PadicSeries& f);

// Number of zeros of f (with multiplicity, in C_p) of valuation >= q
// (closed disk of radius p^{-q}) or > q (open disk).
long count_zeros(const PadicSeries& f, const mpq_class& q, bool closed);

struct LemmaVerdict {
    bool holds = false;
    long zero_count = 0;
    ValExp lhs;  // valuation exponents of the two sides
    ValExp rhs;
};

// |f|_s <= (s/t)^k |f|_t with k zeros in the closed disk of radius s;
// radii are p^{-s_exp} <= p^{-t_exp}.
LemmaVerdict check_growth_lemma(const PadicSeries& f, const mpq_class& s_exp,
                                const mpq_class& t_exp);

// |f|_t <= (t/s)^m |f|_s with m zeros in the open disk of radius t.
LemmaVerdict check_reverse_lemma(const PadicSeries& f, const mpq_class& s_exp,
                                 const mpq_class& t_exp);

// Valuation exponent of the Schwarz bound
//   max{ (s/t)^{kl} |f|_t , mu (s/delta)^{kl-1} r_p^{-(k-1)} },
// computed in valuation space as a min. Inputs are exponents of p.
ValExp schwarz_bound(const mpq_class& s_exp, const mpq_class& t_exp, long k, long l,
                     const mpq_class& delta_exp, const ValExp& mu_exp, const ValExp& norm_t_exp,
                     long p);

}  // namespace plf
