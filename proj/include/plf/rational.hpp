#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "plf/errors.hpp"

namespace plf {

// Exact helpers on GMP integers/rationals shared across the library.

// Parses "num/den" or a plain integer. Decimal notation is rejected; the
// flags that feed valuation arithmetic must stay exact.
mpq_class parse_rational(const std::string& text);

// Parses an integer or a decimal string ("1.0986") into an exact rational.
// Used for height-like inputs where a decimal is just shorthand for the
// rational it denotes.
mpq_class parse_decimal_or_rational(const std::string& text);

std::string rational_to_string(const mpq_class& q);

inline mpz_class floor_q(const mpq_class& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline mpz_class ceil_q(const mpq_class& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline mpz_class pow_z(const mpz_class& base, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline mpz_class pow_z(long base, unsigned long e) { return pow_z(mpz_class(base), e); }

mpq_class pow_q(const mpq_class& base, long e);

// v_p of a nonzero integer.
long valuation_z(const mpz_class& n, const mpz_class& p);

// v_p of a nonzero rational.
long valuation_q(const mpq_class& q, const mpz_class& p);

inline mpz_class binomial(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline mpz_class factorial(unsigned long n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

// v_p(n!) by Legendre's formula.
mpz_class factorial_valuation(unsigned long n, const mpz_class& p);

// Base-p digit sum of n.
mpz_class digit_sum(const mpz_class& n, const mpz_class& p);

bool is_probable_prime(const mpz_class& n);

// Factors |n| > 1 into (prime, exponent) pairs, trial division plus
// Pollard rho; inputs at desk scale stay small.
std::vector<std::pair<mpz_class, long>> factor_integer(const mpz_class& n);

}  // namespace plf
