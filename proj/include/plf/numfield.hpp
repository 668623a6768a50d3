#pragma once

#include <gmpxx.h>

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "plf/errors.hpp"
#include "plf/interval.hpp"
#include "plf/intlinalg.hpp"
#include "plf/rational.hpp"

namespace plf {

class NumberField;
class AlgebraicNumber;
using FieldPtr = std::shared_ptr<const NumberField>;

// A place of K: archimedean (real embedding or conjugate complex pair) or
// finite (prime ideal above p, described by an irreducible factor of the
// minimal polynomial mod p).
struct Place {
    enum class Kind { real, complex_pair, finite };
    Kind kind = Kind::real;
    long arch_index = -1;          // archimedean: index into embeddings()
    mpz_class p = 0;               // finite
    std::vector<mpz_class> factor; // monic irreducible factor of m mod p
    long e = 1;                    // ramification index
    long f = 1;                    // residue degree
    long local_degree() const {
        return kind == Kind::finite ? e * f : (kind == Kind::real ? 1 : 2);
    }
};

// Monogenic number field Q(theta), O_K = Z[theta]. Construction verifies
// irreducibility of the minimal polynomial and p-maximality of Z[theta] at
// every prime dividing disc(m) (Dedekind's criterion); fields failing the
// check are rejected.
class NumberField : public std::enable_shared_from_this<NumberField> {
public:
    struct ArchEmbedding {
        bool is_real = true;
        Interval re;
        Interval im;  // zero for real embeddings; positive representative of the pair
    };

    static FieldPtr rationals();
    static FieldPtr create(const std::vector<mpz_class>& min_poly);

    long degree() const { return d_; }
    bool is_rationals() const { return d_ == 1; }
    const std::vector<mpz_class>& min_poly() const { return min_poly_; }
    const mpz_class& discriminant() const { return disc_; }
    long r1() const { return r1_; }
    long r2() const { return r2_; }

    const std::vector<ArchEmbedding>& embeddings(mpfr_prec_t prec) const;
    std::vector<Place> archimedean_places() const;
    std::vector<Place> places_above(const mpz_class& p) const;

    // Valuation of a nonzero x at a finite place, normalized so the
    // uniformizer has valuation 1 (v(p) = e).
    long finite_valuation(const AlgebraicNumber& x, const Place& v) const;

    // theta^k reduced mod m for k = 0..2d-2, integer coordinate rows.
    const ZMat& power_table() const { return theta_pow_; }

private:
    NumberField() = default;

    std::vector<mpz_class> min_poly_;
    long d_ = 0;
    mpz_class disc_;
    long r1_ = 0, r2_ = 0;
    ZMat theta_pow_;

    // lazily refined archimedean data and cached prime-ideal powers
    mutable std::mutex mu_;
    mutable mpfr_prec_t emb_prec_ = 0;
    mutable std::vector<ArchEmbedding> emb_;
    struct IdealCache {
        std::vector<ZMat> powers;  // powers[k] = HNF basis of ideal^(k+1)
    };
    mutable std::vector<std::pair<std::pair<mpz_class, size_t>, IdealCache>> ideal_cache_;
    mutable std::vector<std::pair<mpz_class, std::vector<Place>>> place_cache_;

    void compute_embeddings(mpfr_prec_t prec) const;
    const ZMat& ideal_power(const Place& v, long k, size_t factor_index) const;
    friend long finite_valuation_impl(const NumberField& K, const std::vector<mpq_class>& coords,
                                      const Place& v);
};

// Exact element of K in coordinates over the power basis 1, theta, ...,
// theta^(d-1).
class AlgebraicNumber {
public:
    AlgebraicNumber() = default;
    AlgebraicNumber(FieldPtr field, std::vector<mpq_class> coords);
    static AlgebraicNumber from_rational(const FieldPtr& field, const mpq_class& q);
    static AlgebraicNumber generator(const FieldPtr& field);
    static AlgebraicNumber zero(const FieldPtr& field);
    static AlgebraicNumber one(const FieldPtr& field);

    const FieldPtr& field() const { return field_; }
    const std::vector<mpq_class>& coords() const { return coords_; }
    bool is_zero() const;
    bool is_rational() const;
    mpq_class as_rational() const;

    friend AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b);
    friend AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b);
    friend AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b);
    friend AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b);
    AlgebraicNumber operator-() const;
    AlgebraicNumber inverse() const;
    AlgebraicNumber pow(unsigned long k) const;
    friend bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b);
    friend bool operator!=(const AlgebraicNumber& a, const AlgebraicNumber& b);

    mpq_class norm() const;  // N_{K/Q}
    std::string str() const;

private:
    FieldPtr field_;
    std::vector<mpq_class> coords_;
};

// log|x|_v with the normalization |p|_v = p^{-[K_v:Q_p]},
// |x|_v = |tau_v(x)|^{[K_v:R]}. Finite places are exact rational multiples
// of log p.
Interval normalized_abs_log(const AlgebraicNumber& x, const Place& v,
                            mpfr_prec_t prec = Interval::kDefaultPrec);

struct ProductFormulaVerdict {
    bool pass = false;
    bool exact = false;  // over Q the check is an exact rational identity
    Interval sum;        // sum of log|x|_v over all places
    double width = 0;
};
ProductFormulaVerdict product_formula_check(const AlgebraicNumber& x,
                                            mpfr_prec_t prec = Interval::kDefaultPrec);

// Absolute logarithmic Weil height of the projective point (1 : x).
Interval height(const AlgebraicNumber& x, mpfr_prec_t prec = Interval::kDefaultPrec);

// K-relative heights of an affine vector (no division by the degree):
// h_max, h_{L^2} and their log^+ variants.
struct VectorHeights {
    Interval h_max;
    Interval h_l2;
    Interval h_plus;
    Interval h_l2_plus;
};
VectorHeights heights_vector(const std::vector<AlgebraicNumber>& x,
                             mpfr_prec_t prec = Interval::kDefaultPrec);

struct LiouvilleVerdict {
    bool pass = false;
    Interval lhs;  // log|x|_v
    Interval rhs;  // -[K:Q] h(x)
};
// Liouville's inequality at a place: a nonzero algebraic number cannot be
// smaller than exp(-[K:Q] h(x)) in the normalized absolute value.
LiouvilleVerdict liouville_check(const AlgebraicNumber& x, const Place& v,
                                 mpfr_prec_t prec = Interval::kDefaultPrec);

// Least positive integer delta with delta*x integral.
mpz_class denominator(const AlgebraicNumber& x);

struct DenominatorResult {
    mpz_class delta;
    bool lemma_holds = false;
    Interval log_delta;
    Interval bound;  // [K:Q] h(x)
};
DenominatorResult denominator_with_check(const AlgebraicNumber& x,
                                         mpfr_prec_t prec = Interval::kDefaultPrec);

// Small integral solution of an underdetermined linear system over O_K,
// witnessing Siegel's lemma: the returned vector satisfies every form
// exactly and meets the Bombieri-Vaaler height bound
//   h^+(x) <= (1/2) log|disc K| + M/(N-M) max_i h_{L^2}(l_i).
struct SiegelResult {
    std::vector<AlgebraicNumber> solution;
    Interval h_plus;
    Interval bound;
    long candidates_tried = 0;
};
SiegelResult siegel_solve(const std::vector<std::vector<AlgebraicNumber>>& forms,
                          mpfr_prec_t prec = Interval::kDefaultPrec);

}  // namespace plf
