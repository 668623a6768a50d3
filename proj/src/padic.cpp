#include "plf/padic.hpp"

#include <algorithm>
#include <sstream>

namespace plf {

namespace {

void check_prime(long p) {
    if (p < 2) throw BadParameters("prime must be >= 2");
}

mpz_class mod_pow_prec(const mpz_class& x, long p, long prec) {
    mpz_class m = pow_z(p, static_cast<unsigned long>(prec));
    mpz_class r = x % m;
    if (r < 0) r += m;
    return r;
}

mpz_class invert_mod(const mpz_class& u, const mpz_class& m) {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t()) == 0)
        throw DomainError("unit not invertible at this modulus");
    return r;
}

// valuation must be an integer for a genuine Q_p element
long val_as_long(const mpq_class& v) {
    if (v.get_den() != 1) throw BadParameters("non-integer valuation for a Q_p element");
    return static_cast<long>(v.get_num().get_si());
}

}  // namespace

PadicNumber PadicNumber::zero(long p) {
    check_prime(p);
    return PadicNumber(p, Kind::exact_zero);
}

PadicNumber PadicNumber::one(long p, long prec) { return from_integer(p, 1, prec); }

PadicNumber PadicNumber::from_integer(long p, const mpz_class& n, long prec) {
    return from_rational(p, mpq_class(n), prec);
}

PadicNumber PadicNumber::from_rational(long p, const mpq_class& q, long prec) {
    check_prime(p);
    if (prec < 1) throw BadParameters("precision must be positive");
    if (q == 0) return zero(p);
    mpz_class pz(p);
    long vn = valuation_z(q.get_num(), pz);
    long vd = valuation_z(q.get_den(), pz);
    mpz_class num = q.get_num() / pow_z(pz, static_cast<unsigned long>(vn));
    mpz_class den = q.get_den() / pow_z(pz, static_cast<unsigned long>(vd));
    mpz_class m = pow_z(pz, static_cast<unsigned long>(prec));
    mpz_class unit = (num % m) * invert_mod(den % m, m) % m;
    if (unit < 0) unit += m;
    return from_unit(p, mpq_class(vn - vd), unit, prec);
}

PadicNumber PadicNumber::below_precision(long p, const mpq_class& bound) {
    check_prime(p);
    PadicNumber x(p, Kind::below_precision);
    // elements of Q_p have integer valuations: a fractional lower bound
    // tightens soundly to its ceiling
    x.val_ = bound.get_den() == 1 ? bound : mpq_class(ceil_q(bound));
    return x;
}

PadicNumber PadicNumber::from_unit(long p, const mpq_class& val, const mpz_class& unit,
                                   long prec) {
    check_prime(p);
    if (prec < 1) throw BadParameters("precision must be positive");
    PadicNumber x(p, Kind::nonzero);
    x.val_ = val;
    x.unit_ = mod_pow_prec(unit, p, prec);
    x.prec_ = prec;
    if (x.unit_ == 0) throw BadParameters("unit part vanishes mod p^prec");
    if (x.unit_ % p == 0) throw BadParameters("unit part divisible by p");
    return x;
}

ValExp PadicNumber::valuation() const {
    switch (kind_) {
        case Kind::exact_zero:
            return ValExp::infinity();
        case Kind::nonzero:
            return ValExp(val_);
        case Kind::below_precision:
            throw PrecisionInsufficient("valuation of a below-precision value");
    }
    return ValExp::infinity();
}

ValExp PadicNumber::valuation_lower_bound() const {
    if (kind_ == Kind::exact_zero) return ValExp::infinity();
    return ValExp(val_);
}

long PadicNumber::precision() const {
    if (kind_ != Kind::nonzero) throw DomainError("precision of a non-unit value");
    return prec_;
}

const mpz_class& PadicNumber::unit() const {
    if (kind_ != Kind::nonzero) throw DomainError("unit of a non-unit value");
    return unit_;
}

std::vector<long> PadicNumber::digits() const {
    std::vector<long> d;
    if (kind_ != Kind::nonzero) return d;
    mpz_class u = unit_, q, r;
    mpz_class pz(p_);
    for (long i = 0; i < prec_; ++i) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), u.get_mpz_t(), pz.get_mpz_t());
        d.push_back(r.get_si());
        u = q;
    }
    return d;
}

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
    if (a.p_ != b.p_) throw BadParameters("mixed primes in p-adic addition");
    const long p = a.p_;
    if (a.is_exact_zero()) return b;
    if (b.is_exact_zero()) return a;

    // Absolute knowledge level: the sum is determined modulo p^A.
    auto abs_level = [](const PadicNumber& x) {
        return x.kind_ == PadicNumber::Kind::nonzero ? x.val_ + x.prec_ : x.val_;
    };
    mpq_class A = std::min(abs_level(a), abs_level(b));
    if (a.is_below_precision() && b.is_below_precision())
        return PadicNumber::below_precision(p, std::min(a.val_, b.val_));

    mpq_class m = A;  // minimum valuation among unit contributions
    if (a.kind_ == PadicNumber::Kind::nonzero) m = std::min(m, a.val_);
    if (b.kind_ == PadicNumber::Kind::nonzero) m = std::min(m, b.val_);
    if (m >= A) return PadicNumber::below_precision(p, A);

    long k = val_as_long(A - m);  // digits of knowledge above level m
    mpz_class modulus = pow_z(p, static_cast<unsigned long>(k));
    mpz_class W = 0;
    for (const PadicNumber* x : {&a, &b}) {
        if (x->kind_ != PadicNumber::Kind::nonzero) continue;
        long sh = val_as_long(x->val_ - m);
        if (sh >= k) continue;
        W += x->unit_ * pow_z(p, static_cast<unsigned long>(sh));
    }
    W %= modulus;
    if (W < 0) W += modulus;
    if (W == 0) return PadicNumber::below_precision(p, A);
    long j = valuation_z(W, mpz_class(p));
    if (j >= k) return PadicNumber::below_precision(p, A);
    mpz_class unit = W / pow_z(p, static_cast<unsigned long>(j));
    return PadicNumber::from_unit(p, m + j, unit, k - j);
}

PadicNumber PadicNumber::operator-() const {
    if (kind_ != Kind::nonzero) return *this;
    mpz_class m = pow_z(p_, static_cast<unsigned long>(prec_));
    return from_unit(p_, val_, m - unit_, prec_);
}

PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
    if (a.p_ != b.p_) throw BadParameters("mixed primes in p-adic multiplication");
    const long p = a.p_;
    if (a.is_exact_zero() || b.is_exact_zero()) return PadicNumber::zero(p);
    if (a.is_below_precision() || b.is_below_precision())
        return PadicNumber::below_precision(p, a.val_ + b.val_);
    long prec = std::min(a.prec_, b.prec_);
    return PadicNumber::from_unit(p, a.val_ + b.val_, a.unit_ * b.unit_, prec);
}

PadicNumber PadicNumber::inverse() const {
    if (kind_ == Kind::exact_zero) throw ZeroElement("inverse of zero");
    if (kind_ == Kind::below_precision)
        throw PrecisionInsufficient("inverse of a below-precision value");
    mpz_class m = pow_z(p_, static_cast<unsigned long>(prec_));
    return from_unit(p_, -val_, invert_mod(unit_, m), prec_);
}

PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) { return a * b.inverse(); }

PadicNumber PadicNumber::pow(unsigned long k) const {
    if (k == 0) {
        if (kind_ == Kind::nonzero) return one(p_, prec_);
        throw DomainError("0^0 or indeterminate^0 in p-adic pow");
    }
    PadicNumber r = *this;
    for (unsigned long i = 1; i < k; ++i) r = r * *this;
    return r;
}

PadicNumber PadicNumber::shift(const mpq_class& dv) const {
    PadicNumber r = *this;
    if (kind_ == Kind::exact_zero) return r;
    r.val_ += dv;
    return r;
}

std::string PadicNumber::str() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::exact_zero:
            os << "0_(" << p_ << ")";
            break;
        case Kind::below_precision:
            os << "O(" << p_ << "^" << rational_to_string(val_) << ")";
            break;
        case Kind::nonzero:
            os << p_ << "^" << rational_to_string(val_) << " * " << unit_.get_str() << " (mod "
               << p_ << "^" << prec_ << ")";
            break;
    }
    return os.str();
}

mpq_class r_p_exponent(long p) {
    check_prime(p);
    return mpq_class(1, p - 1);
}

PadicNumber log_p(const PadicNumber& x) {
    const long p = x.prime();
    PadicNumber w = x - PadicNumber::one(p, x.is_provably_nonzero() ? x.precision() : 1);
    if (w.is_exact_zero()) return PadicNumber::zero(p);
    if (w.is_below_precision()) return PadicNumber::below_precision(p, w.valuation_lower_bound().value());
    mpq_class lam = w.valuation().value();
    if (lam <= 0) throw DomainError("log_p requires v(x-1) > 0");
    long lam_l = val_as_long(lam);
    // the sum is determined modulo p^A
    long A = lam_l + w.precision();
    mpz_class pz(p);
    PadicNumber acc = PadicNumber::zero(p);
    PadicNumber wk = PadicNumber::one(p, w.precision() + 2);
    for (long k = 1;; ++k) {
        // v(term_k) >= k*lam - floor(log_p k), increasing in k once >= A stop
        long logk = 0;
        {
            mpz_class t(k);
            while (t >= p) {
                t /= p;
                ++logk;
            }
        }
        if (k > 1 && k * lam_l - logk >= A) break;
        wk = wk * w;
        PadicNumber term = wk * PadicNumber::from_rational(p, mpq_class(1, k), A + logk + 2);
        if (k % 2 == 0) term = -term;
        acc = acc + term;
        if (k > 4 * A + 16) throw PrecisionInsufficient("log_p series did not certify");
    }
    return acc;
}

PadicNumber exp_p(const PadicNumber& z) {
    const long p = z.prime();
    if (z.is_exact_zero()) return PadicNumber::one(p, 1);
    if (z.is_below_precision()) {
        if (mpq_class(z.valuation_lower_bound().value()) <= r_p_exponent(p))
            throw PrecisionInsufficient("exp_p argument not certified inside the domain");
        // exp(z) = 1 + O(p^v)
        return PadicNumber::one(p, 1) +
               PadicNumber::below_precision(p, z.valuation_lower_bound().value());
    }
    mpq_class v = z.valuation().value();
    mpq_class rp = r_p_exponent(p);
    if (v <= rp) throw DomainError("exp_p requires v(z) > 1/(p-1)");
    long vz = val_as_long(v);
    long A = vz + z.precision();
    mpz_class pz(p);
    PadicNumber acc = PadicNumber::one(p, A + 2);
    PadicNumber zk = PadicNumber::one(p, z.precision() + 2);
    for (long k = 1;; ++k) {
        // v(term_k) = k v(z) - v(k!) >= k (v(z) - 1/(p-1)); stop when
        // the exact term valuation bound clears the knowledge level A.
        mpz_class vfact = factorial_valuation(static_cast<unsigned long>(k), pz);
        mpq_class term_val = mpq_class(k) * v - mpq_class(vfact);
        if (k > 1 && term_val >= A) {
            // monotone from here on: k*(v - rp) grows without bound
            mpq_class margin = v - rp;
            if (mpq_class(k) * margin >= A) break;
        }
        zk = zk * z;
        mpq_class inv_fact(1, 1);
        inv_fact /= mpq_class(factorial(static_cast<unsigned long>(k)));
        long need = A + static_cast<long>(mpz_get_si(vfact.get_mpz_t())) + 2;
        PadicNumber term = zk * PadicNumber::from_rational(p, inv_fact, std::max(need, 2L));
        acc = acc + term;
        if (k > 16 * A + 64) throw PrecisionInsufficient("exp_p series did not certify");
    }
    return acc;
}

PadicNumber hensel_lift(const std::vector<mpz_class>& f, const mpz_class& a, long p,
                        long digits) {
    check_prime(p);
    if (digits < 1) throw BadParameters("requested digits must be positive");
    if (f.empty()) throw BadParameters("empty polynomial");
    mpz_class pz(p);
    auto eval = [&](const mpz_class& x, const mpz_class& mod) {
        mpz_class acc = 0;
        for (auto it = f.rbegin(); it != f.rend(); ++it) acc = (acc * x + *it) % mod;
        if (acc < 0) acc += mod;
        return acc;
    };
    auto eval_deriv = [&](const mpz_class& x, const mpz_class& mod) {
        mpz_class acc = 0;
        for (long i = static_cast<long>(f.size()) - 1; i >= 1; --i)
            acc = (acc * x + i * f[static_cast<size_t>(i)]) % mod;
        if (acc < 0) acc += mod;
        return acc;
    };
    mpz_class a0 = a % pz;
    if (a0 < 0) a0 += pz;
    if (eval(a0, pz) != 0) throw DomainError("root_mod_p is not a root of f mod p");
    if (eval_deriv(a0, pz) == 0) throw NotSimpleRoot("f'(a) = 0 mod p");

    long k = 1;
    mpz_class x = a0;
    while (k < digits) {
        long k2 = std::min(2 * k, digits);
        mpz_class mod = pow_z(pz, static_cast<unsigned long>(k2));
        mpz_class fx = eval(x, mod);
        mpz_class dfx = eval_deriv(x, mod);
        mpz_class inv;
        if (mpz_invert(inv.get_mpz_t(), dfx.get_mpz_t(), mod.get_mpz_t()) == 0)
            throw NotSimpleRoot("derivative not invertible during lift");
        x = (x - fx * inv) % mod;
        if (x < 0) x += mod;
        k = k2;
    }
    mpz_class mod = pow_z(pz, static_cast<unsigned long>(digits));
    if (eval(x, mod) != 0) throw PrecisionInsufficient("hensel lift failed to certify residual");
    if (x == 0) {
        if (f[0] == 0) return PadicNumber::zero(p);
        throw PrecisionInsufficient("lifted root vanishes to working precision");
    }
    long v = valuation_z(x, pz);
    if (v >= digits) throw PrecisionInsufficient("lifted root vanishes to working precision");
    mpz_class unit = x / pow_z(pz, static_cast<unsigned long>(v));
    return PadicNumber::from_unit(p, mpq_class(v), unit, digits - v);
}

}  // namespace plf
