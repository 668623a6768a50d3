#include "plf/interval.hpp"

#include <cstdio>
#include <cstring>
#include <utility>

#include "plf/errors.hpp"

namespace plf {

Interval::Interval(mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& o) : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

Interval& Interval::operator=(const Interval& o) {
    if (this == &o) return *this;
    if (prec_ != o.prec_) {
        mpfr_set_prec(lo_, o.prec_);
        mpfr_set_prec(hi_, o.prec_);
        prec_ = o.prec_;
    }
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
    return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    std::swap(prec_, o.prec_);
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval Interval::zero(mpfr_prec_t prec) { return Interval(prec); }

Interval Interval::from_mpq(const mpq_class& q, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::from_long(long v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_si(r.lo_, v, MPFR_RNDD);
    mpfr_set_si(r.hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::from_endpoints(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec) {
    if (lo > hi) throw BadParameters("interval endpoints out of order");
    Interval r(prec);
    mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::log_q(const mpq_class& q, mpfr_prec_t prec) {
    if (q <= 0) throw DomainError("log of nonpositive rational");
    Interval r(prec);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_log(r.lo_, r.lo_, MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    mpfr_log(r.hi_, r.hi_, MPFR_RNDU);
    return r;
}

Interval operator+(const Interval& a, const Interval& b) {
    Interval r(std::max(a.prec_, b.prec_));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval operator-(const Interval& a, const Interval& b) {
    Interval r(std::max(a.prec_, b.prec_));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
}

Interval operator*(const Interval& a, const Interval& b) {
    Interval r(std::max(a.prec_, b.prec_));
    mpfr_t c[4];
    for (auto& x : c) mpfr_init2(x, r.prec_);
    mpfr_mul(c[0], a.lo_, b.lo_, MPFR_RNDD);
    mpfr_mul(c[1], a.lo_, b.hi_, MPFR_RNDD);
    mpfr_mul(c[2], a.hi_, b.lo_, MPFR_RNDD);
    mpfr_mul(c[3], a.hi_, b.hi_, MPFR_RNDD);
    mpfr_set(r.lo_, c[0], MPFR_RNDD);
    for (int i = 1; i < 4; ++i)
        if (mpfr_cmp(c[i], r.lo_) < 0) mpfr_set(r.lo_, c[i], MPFR_RNDD);
    mpfr_mul(c[0], a.lo_, b.lo_, MPFR_RNDU);
    mpfr_mul(c[1], a.lo_, b.hi_, MPFR_RNDU);
    mpfr_mul(c[2], a.hi_, b.lo_, MPFR_RNDU);
    mpfr_mul(c[3], a.hi_, b.hi_, MPFR_RNDU);
    mpfr_set(r.hi_, c[0], MPFR_RNDU);
    for (int i = 1; i < 4; ++i)
        if (mpfr_cmp(c[i], r.hi_) > 0) mpfr_set(r.hi_, c[i], MPFR_RNDU);
    for (auto& x : c) mpfr_clear(x);
    return r;
}

Interval Interval::operator-() const {
    Interval r(prec_);
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

Interval& Interval::operator+=(const Interval& b) {
    *this = *this + b;
    return *this;
}

Interval Interval::mul_q(const mpq_class& q) const {
    Interval b = Interval::from_mpq(q, prec_);
    return *this * b;
}

Interval Interval::add_q(const mpq_class& q) const { return *this + Interval::from_mpq(q, prec_); }

Interval Interval::log() const {
    if (mpfr_sgn(lo_) <= 0) throw DomainError("log of interval touching zero");
    Interval r(prec_);
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::sqrt() const {
    if (mpfr_sgn(lo_) < 0) throw DomainError("sqrt of interval below zero");
    Interval r(prec_);
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::pow_ui(unsigned long e) const {
    Interval r = Interval::from_long(1, prec_);
    Interval base = *this;
    // small exponents only; repeated interval multiplication keeps soundness
    for (unsigned long i = 0; i < e; ++i) r = r * base;
    return r;
}

Interval Interval::abs() const {
    Interval r(prec_);
    if (mpfr_sgn(lo_) >= 0) return *this;
    if (mpfr_sgn(hi_) <= 0) return -*this;
    mpfr_set_zero(r.lo_, 1);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    if (mpfr_cmp(hi_, r.hi_) > 0) mpfr_set(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::max(const Interval& a, const Interval& b) {
    Interval r(std::max(a.prec_, b.prec_));
    mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::min(const Interval& a, const Interval& b) {
    Interval r(std::max(a.prec_, b.prec_));
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::max0() const { return max(*this, Interval::zero(prec_)); }

bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

bool Interval::is_nonnegative() const { return mpfr_sgn(lo_) >= 0; }

bool Interval::certainly_le(const Interval& a, const Interval& b) {
    return mpfr_cmp(a.hi_, b.lo_) <= 0;
}

bool Interval::certainly_lt(const Interval& a, const Interval& b) {
    return mpfr_cmp(a.hi_, b.lo_) < 0;
}

double Interval::width() const {
    mpfr_t w;
    mpfr_init2(w, prec_);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
}

bool Interval::width_below(const mpq_class& tol) const {
    mpfr_t w, t;
    mpfr_init2(w, prec_);
    mpfr_init2(t, prec_);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    mpfr_set_q(t, tol.get_mpq_t(), MPFR_RNDD);
    bool ok = mpfr_cmp(w, t) < 0;
    mpfr_clear(w);
    mpfr_clear(t);
    return ok;
}

double Interval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

std::optional<mpz_class> Interval::floor_unambiguous() const {
    mpz_class flo, fhi;
    mpfr_t t;
    mpfr_init2(t, prec_);
    mpfr_floor(t, lo_);
    mpfr_get_z(flo.get_mpz_t(), t, MPFR_RNDD);
    mpfr_floor(t, hi_);
    mpfr_get_z(fhi.get_mpz_t(), t, MPFR_RNDD);
    mpfr_clear(t);
    if (flo == fhi) return flo;
    return std::nullopt;
}

namespace {
std::string mpfr_to_string(const mpfr_t v, int digits, mpfr_rnd_t rnd) {
    char buf[256];
    std::string fmt = "%." + std::to_string(digits) + "R*g";
    mpfr_snprintf(buf, sizeof buf, fmt.c_str(), rnd, v);
    return std::string(buf);
}
}  // namespace

std::string Interval::lo_string(int digits) const { return mpfr_to_string(lo_, digits, MPFR_RNDD); }
std::string Interval::hi_string(int digits) const { return mpfr_to_string(hi_, digits, MPFR_RNDU); }

std::string Interval::str(int digits) const {
    return "[" + lo_string(digits) + ", " + hi_string(digits) + "]";
}

}  // namespace plf
