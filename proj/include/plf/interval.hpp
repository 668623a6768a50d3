#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <string>

namespace plf {

// Certified real interval with MPFR endpoints and directed rounding.
// Heights and archimedean data are transcendental reals; every inequality
// the library reports is checked against interval endpoints, so a "pass"
// is a proof at the working precision.
class Interval {
public:
    static constexpr mpfr_prec_t kDefaultPrec = 256;

    Interval() : Interval(kDefaultPrec) {}
    explicit Interval(mpfr_prec_t prec);
    Interval(const Interval& o);
    Interval(Interval&& o) noexcept;
    Interval& operator=(const Interval& o);
    Interval& operator=(Interval&& o) noexcept;
    ~Interval();

    static Interval zero(mpfr_prec_t prec = kDefaultPrec);
    static Interval from_mpq(const mpq_class& q, mpfr_prec_t prec = kDefaultPrec);
    static Interval from_long(long v, mpfr_prec_t prec = kDefaultPrec);
    // [lo, hi] from exact rational endpoints, rounded outward.
    static Interval from_endpoints(const mpq_class& lo, const mpq_class& hi,
                                   mpfr_prec_t prec = kDefaultPrec);
    // log of an exact positive rational.
    static Interval log_q(const mpq_class& q, mpfr_prec_t prec = kDefaultPrec);

    mpfr_prec_t precision() const { return prec_; }

    friend Interval operator+(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a, const Interval& b);
    friend Interval operator*(const Interval& a, const Interval& b);
    Interval operator-() const;
    Interval& operator+=(const Interval& b);

    Interval mul_q(const mpq_class& q) const;  // exact rational scale
    Interval add_q(const mpq_class& q) const;
    Interval log() const;   // requires lo > 0
    Interval sqrt() const;  // requires lo >= 0
    Interval pow_ui(unsigned long e) const;
    Interval abs() const;

    static Interval max(const Interval& a, const Interval& b);
    static Interval min(const Interval& a, const Interval& b);
    Interval max0() const;  // max with 0, i.e. log^+ style clamp

    bool contains_zero() const;
    bool is_nonnegative() const;  // lo >= 0
    // a.hi <= b.lo: the inequality a <= b holds for all represented values.
    static bool certainly_le(const Interval& a, const Interval& b);
    static bool certainly_lt(const Interval& a, const Interval& b);
    // upper bound of |width|, rounded up, as double.
    double width() const;
    bool width_below(const mpq_class& tol) const;

    double lo_double() const;
    double hi_double() const;
    // Floor valid for every value in the interval, when unambiguous.
    std::optional<mpz_class> floor_unambiguous() const;

    std::string lo_string(int digits = 40) const;
    std::string hi_string(int digits = 40) const;
    std::string str(int digits = 20) const;

private:
    mpfr_prec_t prec_;
    mpfr_t lo_;
    mpfr_t hi_;
};

}  // namespace plf
