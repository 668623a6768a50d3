#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "plf/errors.hpp"
#include "plf/rational.hpp"
#include "plf/valuation.hpp"

namespace plf {

// Element of Q_p at finite precision. The value is p^valuation * unit with
// the unit part known modulo p^precision and its first digit nonzero.
// Exact zero carries the +infinity valuation sentinel. A third state,
// below_precision, records a value that cancelled to the full working
// precision: all that is known is a lower bound on its valuation. Every
// arithmetic operation propagates these states soundly rather than
// inventing digits.
class PadicNumber {
public:
    enum class Kind { exact_zero, nonzero, below_precision };

    PadicNumber() : PadicNumber(2, Kind::exact_zero) {}

    static PadicNumber zero(long p);
    static PadicNumber one(long p, long prec);
    static PadicNumber from_integer(long p, const mpz_class& n, long prec);
    static PadicNumber from_rational(long p, const mpq_class& q, long prec);
    // Unknown value with v >= bound.
    static PadicNumber below_precision(long p, const mpq_class& val_lower_bound);
    // p^val * unit, unit a p-unit reduced mod p^prec. val must be an integer
    // rational for honest Q_p elements; the rational slot is kept so that
    // valuation arithmetic stays uniform.
    static PadicNumber from_unit(long p, const mpq_class& val, const mpz_class& unit, long prec);

    long prime() const { return p_; }
    Kind kind() const { return kind_; }
    bool is_exact_zero() const { return kind_ == Kind::exact_zero; }
    bool is_below_precision() const { return kind_ == Kind::below_precision; }
    bool is_provably_nonzero() const { return kind_ == Kind::nonzero; }

    // Exact valuation; +inf for zero; throws PrecisionInsufficient on a
    // below-precision value.
    ValExp valuation() const;
    // Sound lower bound, defined for every state.
    ValExp valuation_lower_bound() const;

    long precision() const;             // significant digits (nonzero only)
    const mpz_class& unit() const;      // unit part (nonzero only)
    std::vector<long> digits() const;   // base-p digits of the unit, LSD first

    friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b);
    PadicNumber operator-() const;
    PadicNumber inverse() const;
    PadicNumber pow(unsigned long k) const;
    // Multiply by an exact power of p: valuation shift only.
    PadicNumber shift(const mpq_class& dv) const;

    std::string str() const;

private:
    PadicNumber(long p, Kind k) : p_(p), kind_(k), val_(0), unit_(0), prec_(0) {}

    long p_ = 0;
    Kind kind_ = Kind::exact_zero;
    mpq_class val_;   // exact valuation (nonzero) or lower bound (below_precision)
    mpz_class unit_;  // in [1, p^prec), p does not divide it
    long prec_ = 0;
};

// Exponent q with r_p = p^(-q): q = 1/(p-1), the exp/log convergence radius.
mpq_class r_p_exponent(long p);

// Principal-branch p-adic logarithm, domain v(x-1) > 0. The truncation
// error is certified by the tail-valuation bound, so the result carries
// an honest precision.
PadicNumber log_p(const PadicNumber& x);

// p-adic exponential, domain v(z) > 1/(p-1).
PadicNumber exp_p(const PadicNumber& z);

// Lift a simple root of f mod p to a root mod p^digits; f given by integer
// coefficients, f[i] the coefficient of X^i.
PadicNumber hensel_lift(const std::vector<mpz_class>& f, const mpz_class& root_mod_p, long p,
                        long digits);

}  // namespace plf
