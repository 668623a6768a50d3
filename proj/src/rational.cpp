#include "plf/rational.hpp"

#include <algorithm>
#include <cstdlib>

namespace plf {

mpq_class parse_rational(const std::string& text) {
    if (text.empty()) throw InputError("empty rational literal");
    if (text.find('.') != std::string::npos || text.find('e') != std::string::npos ||
        text.find('E') != std::string::npos)
        throw InputError("decimal notation rejected for exact rational input: " + text);
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw InputError("cannot parse rational: " + text);
    if (q.get_den() == 0) throw InputError("zero denominator: " + text);
    q.canonicalize();
    return q;
}

mpq_class parse_decimal_or_rational(const std::string& text) {
    auto dot = text.find('.');
    if (dot == std::string::npos) return parse_rational(text);
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    size_t frac_len = text.size() - dot - 1;
    if (digits.empty() || frac_len == 0) throw InputError("cannot parse decimal: " + text);
    mpz_class num;
    if (num.set_str(digits, 10) != 0) throw InputError("cannot parse decimal: " + text);
    mpq_class q(num, pow_z(10, frac_len));
    q.canonicalize();
    return q;
}

std::string rational_to_string(const mpq_class& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpq_class pow_q(const mpq_class& base, long e) {
    if (e == 0) return mpq_class(1);
    if (base == 0) {
        if (e < 0) throw DomainError("0 raised to negative power");
        return mpq_class(0);
    }
    mpq_class b = e > 0 ? base : mpq_class(1) / base;
    unsigned long k = static_cast<unsigned long>(e > 0 ? e : -e);
    mpz_class num = pow_z(b.get_num(), k);
    mpz_class den = pow_z(b.get_den(), k);
    mpq_class r(num, den);
    r.canonicalize();
    return r;
}

long valuation_z(const mpz_class& n, const mpz_class& p) {
    if (n == 0) throw DomainError("valuation of zero integer");
    mpz_class m = abs(n);
    long v = 0;
    mpz_class q, r;
    for (;;) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        if (r != 0) break;
        m = q;
        ++v;
    }
    return v;
}

long valuation_q(const mpq_class& q, const mpz_class& p) {
    if (q == 0) throw DomainError("valuation of zero rational");
    long vn = (q.get_num() == 1 || q.get_num() == -1) ? 0 : valuation_z(q.get_num(), p);
    long vd = (q.get_den() == 1) ? 0 : valuation_z(q.get_den(), p);
    return vn - vd;
}

mpz_class factorial_valuation(unsigned long n, const mpz_class& p) {
    mpz_class total = 0;
    mpz_class pk = p;
    while (pk <= n) {
        total += mpz_class(n) / pk;
        pk *= p;
    }
    return total;
}

mpz_class digit_sum(const mpz_class& n, const mpz_class& p) {
    mpz_class m = abs(n), s = 0, q, r;
    while (m > 0) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        s += r;
        m = q;
    }
    return s;
}

bool is_probable_prime(const mpz_class& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

namespace {

mpz_class pollard_rho(const mpz_class& n) {
    // n odd composite, not a prime power of interest; Brent variant.
    if (n % 2 == 0) return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xC0FFEEu);
    for (;;) {
        mpz_class x = rng.get_z_range(n - 2) + 1;
        mpz_class c = rng.get_z_range(n - 1) + 1;
        mpz_class y = x, d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            mpz_class diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_rec(const mpz_class& n, std::vector<mpz_class>& primes) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        primes.push_back(n);
        return;
    }
    mpz_class d = pollard_rho(n);
    factor_rec(d, primes);
    factor_rec(n / d, primes);
}

}  // namespace

std::vector<std::pair<mpz_class, long>> factor_integer(const mpz_class& n_in) {
    mpz_class n = abs(n_in);
    if (n <= 1) return {};
    std::vector<mpz_class> primes;
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L}) {
        while (n % p == 0) {
            primes.emplace_back(p);
            n /= p;
        }
    }
    // trial division up to 10^4 before handing to rho
    mpz_class d = 41;
    while (d * d <= n && d < 10000) {
        while (n % d == 0) {
            primes.push_back(d);
            n /= d;
        }
        d += 2;
    }
    if (n > 1) factor_rec(n, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<mpz_class, long>> out;
    for (const auto& p : primes) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.emplace_back(p, 1);
    }
    return out;
}

}  // namespace plf
