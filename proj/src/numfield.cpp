#include "plf/numfield.hpp"

#include <algorithm>
#include <sstream>

namespace plf {

namespace {

// ---------- F_p[x] helpers (coefficients reduced into [0, p)) ----------

using FpPoly = std::vector<mpz_class>;

FpPoly fp_trim(FpPoly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

long fp_deg(const FpPoly& f) { return static_cast<long>(f.size()) - 1; }

FpPoly fp_reduce(const std::vector<mpz_class>& f, const mpz_class& p) {
    FpPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        r[i] = f[i] % p;
        if (r[i] < 0) r[i] += p;
    }
    return fp_trim(r);
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, const mpz_class& p) {
    if (a.empty() || b.empty()) return {};
    FpPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return fp_trim(c);
}

mpz_class fp_inv(const mpz_class& a, const mpz_class& p) {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()) == 0)
        throw Error("non-invertible residue");
    return r;
}

// division with remainder; divisor must be nonzero
std::pair<FpPoly, FpPoly> fp_divmod(FpPoly a, const FpPoly& b, const mpz_class& p) {
    a = fp_trim(a);
    if (b.empty()) throw Error("division by zero polynomial");
    FpPoly q(a.size() > b.size() ? a.size() - b.size() + 1 : 1, 0);
    mpz_class lead_inv = fp_inv(b.back(), p);
    while (fp_deg(a) >= fp_deg(b)) {
        long shift = fp_deg(a) - fp_deg(b);
        mpz_class c = a.back() * lead_inv % p;
        q[static_cast<size_t>(shift)] = c;
        for (size_t i = 0; i < b.size(); ++i) {
            size_t k = i + static_cast<size_t>(shift);
            a[k] = (a[k] - c * b[i]) % p;
            if (a[k] < 0) a[k] += p;
        }
        a = fp_trim(a);
    }
    return {fp_trim(q), a};
}

FpPoly fp_gcd(FpPoly a, FpPoly b, const mpz_class& p) {
    a = fp_trim(a);
    b = fp_trim(b);
    while (!b.empty()) {
        auto [q, r] = fp_divmod(a, b, p);
        a = b;
        b = r;
    }
    if (!a.empty() && a.back() != 1) {
        mpz_class inv = fp_inv(a.back(), p);
        for (auto& c : a) c = c * inv % p;
    }
    return a;
}

FpPoly fp_derivative(const FpPoly& f, const mpz_class& p) {
    FpPoly d;
    for (size_t i = 1; i < f.size(); ++i) d.push_back(mpz_class(i) * f[i] % p);
    return fp_trim(d);
}

mpz_class fp_eval(const FpPoly& f, const mpz_class& x, const mpz_class& p) {
    mpz_class acc = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = (acc * x + *it) % p;
    if (acc < 0) acc += p;
    return acc;
}

// f(x) = g(x^p) -> g ; valid when all nonzero exponents are multiples of p
FpPoly fp_deflate(const FpPoly& f, const mpz_class& p) {
    if (p > 64) throw InputError("residue-characteristic deflation too large");
    long step = static_cast<long>(p.get_si());
    FpPoly g;
    for (size_t i = 0; i < f.size(); i += static_cast<size_t>(step)) g.push_back(f[i]);
    return fp_trim(g);
}

void fp_squarefree_decompose(const FpPoly& f, const mpz_class& p, long mult,
                             std::vector<std::pair<FpPoly, long>>& out) {
    FpPoly fd = fp_derivative(f, p);
    if (fp_trim(fd).empty()) {
        if (fp_deg(f) <= 0) return;
        // f = g(x)^p with identical coefficients (Frobenius fixes F_p)
        fp_squarefree_decompose(fp_deflate(f, p), p, mult * static_cast<long>(p.get_si()), out);
        return;
    }
    FpPoly c = fp_gcd(f, fd, p);
    FpPoly w = fp_divmod(f, c, p).first;
    long i = 1;
    while (fp_deg(w) > 0) {
        FpPoly y = fp_gcd(w, c, p);
        FpPoly z = fp_divmod(w, y, p).first;
        if (fp_deg(z) > 0) out.emplace_back(z, mult * i);
        ++i;
        w = y;
        c = fp_divmod(c, y, p).first;
    }
    if (fp_deg(c) > 0) fp_squarefree_decompose(fp_deflate(c, p), p,
                                               mult * static_cast<long>(p.get_si()), out);
}

// next monic polynomial of fixed degree in lex order over [0,p)^deg
bool fp_next_tuple(std::vector<mpz_class>& t, const mpz_class& p) {
    for (auto& c : t) {
        c += 1;
        if (c < p) return true;
        c = 0;
    }
    return false;
}

FpPoly fp_powmod(FpPoly base, mpz_class e, const FpPoly& mod, const mpz_class& p) {
    FpPoly r = {mpz_class(1)};
    base = fp_divmod(base, mod, p).second;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = fp_divmod(fp_mul(r, base, p), mod, p).second;
        base = fp_divmod(fp_mul(base, base, p), mod, p).second;
        e >>= 1;
    }
    return r;
}

// all roots in F_p of a squarefree h: split gcd(x^p - x, h) by random shifts
std::vector<mpz_class> fp_roots(const FpPoly& h, const mpz_class& p) {
    std::vector<mpz_class> roots;
    if (fp_deg(h) < 1) return roots;
    if (p <= 64) {
        for (mpz_class a = 0; a < p; ++a)
            if (fp_eval(h, a, p) == 0) roots.push_back(a);
        return roots;
    }
    FpPoly x = {mpz_class(0), mpz_class(1)};
    FpPoly xp = fp_powmod(x, p, h, p);
    FpPoly diff = xp;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] - 1) % p;
    if (diff[1] < 0) diff[1] += p;
    FpPoly g = fp_gcd(fp_trim(diff), h, p);
    if (fp_deg(g) < 1) return roots;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xBADA55u);
    std::vector<FpPoly> stack = {g};
    while (!stack.empty()) {
        FpPoly cur = stack.back();
        stack.pop_back();
        if (fp_deg(cur) == 1) {
            mpz_class r = (p - cur[0]) % p;  // monic x + c
            if (r < 0) r += p;
            roots.push_back(r);
            continue;
        }
        if (fp_deg(cur) < 1) continue;
        for (;;) {
            mpz_class a = rng.get_z_range(p);
            FpPoly shifted = {a, mpz_class(1)};
            FpPoly w = fp_powmod(shifted, (p - 1) / 2, cur, p);
            if (!w.empty()) {
                w[0] = (w[0] - 1) % p;
                if (w[0] < 0) w[0] += p;
            } else {
                w = {p - 1};
            }
            FpPoly s = fp_gcd(fp_trim(w), cur, p);
            if (fp_deg(s) >= 1 && fp_deg(s) < fp_deg(cur)) {
                stack.push_back(s);
                stack.push_back(fp_divmod(cur, s, p).first);
                break;
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

void fp_factor_squarefree(FpPoly h, const mpz_class& p, long mult,
                          std::vector<std::pair<FpPoly, long>>& out) {
    // strip linear factors first
    for (const mpz_class& a : fp_roots(h, p)) {
        FpPoly lin = {(p - a) % p, 1};
        h = fp_divmod(h, lin, p).first;
        out.emplace_back(lin, mult);
    }
    long dh = fp_deg(h);
    if (dh <= 0) return;
    if (dh <= 3) {  // no roots left: degree 2 or 3 is irreducible
        out.emplace_back(h, mult);
        return;
    }
    // scan monic divisors of degree k = 2..dh/2 (small primes only; fields
    // with such residue factorizations are desk-scale presets)
    if (p > 1400) throw InputError("residue factorization beyond desk scale");
    for (long k = 2; 2 * k <= fp_deg(h); ++k) {
        mpz_class count = 1;
        for (long i = 0; i < k; ++i) count *= p;
        if (count > 2000000) throw InputError("residue factorization search too large");
        std::vector<mpz_class> tail(static_cast<size_t>(k), 0);
        bool more = true;
        while (more && fp_deg(h) >= 2 * k) {
            FpPoly cand = tail;
            cand.push_back(1);
            auto [q, r] = fp_divmod(h, cand, p);
            if (r.empty() && fp_deg(cand) <= fp_deg(h)) {
                // cand has no roots and no smaller divisors: irreducible
                out.emplace_back(cand, mult);
                h = q;
                continue;  // same candidate may divide again? squarefree: no
            }
            more = fp_next_tuple(tail, p);
        }
    }
    if (fp_deg(h) > 0) out.emplace_back(h, mult);
}

std::vector<std::pair<FpPoly, long>> fp_factor(const std::vector<mpz_class>& f,
                                               const mpz_class& p) {
    FpPoly fb = fp_reduce(f, p);
    if (fb.empty()) throw Error("zero polynomial mod p");
    if (fb.back() != 1) {
        mpz_class inv = fp_inv(fb.back(), p);
        for (auto& c : fb) c = c * inv % p;
    }
    std::vector<std::pair<FpPoly, long>> sqf;
    fp_squarefree_decompose(fb, p, 1, sqf);
    std::vector<std::pair<FpPoly, long>> out;
    for (const auto& [g, m] : sqf) fp_factor_squarefree(g, p, m, out);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------- Q[x] helpers ----------

using QPoly = std::vector<mpq_class>;

QPoly q_trim(QPoly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

long q_deg(const QPoly& f) { return static_cast<long>(f.size()) - 1; }

QPoly q_derivative(const QPoly& f) {
    QPoly d;
    for (size_t i = 1; i < f.size(); ++i) d.push_back(mpq_class(i) * f[i]);
    return d;
}

mpq_class q_eval(const QPoly& f, const mpq_class& x) {
    mpq_class acc = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::pair<QPoly, QPoly> q_divmod(QPoly a, const QPoly& b) {
    a = q_trim(a);
    if (b.empty()) throw Error("division by zero polynomial");
    QPoly q(a.size() > b.size() ? a.size() - b.size() + 1 : 1, 0);
    while (q_deg(a) >= q_deg(b)) {
        long shift = q_deg(a) - q_deg(b);
        mpq_class c = a.back() / b.back();
        q[static_cast<size_t>(shift)] = c;
        for (size_t i = 0; i < b.size(); ++i)
            a[i + static_cast<size_t>(shift)] -= c * b[i];
        a = q_trim(a);
    }
    return {q_trim(q), a};
}

// Sturm chain sign-variation count at x.
long sturm_variations(const std::vector<QPoly>& chain, const mpq_class& x) {
    long var = 0;
    int last = 0;
    for (const auto& s : chain) {
        mpq_class v = q_eval(s, x);
        int sg = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (sg == 0) continue;
        if (last != 0 && sg != last) ++var;
        last = sg;
    }
    return var;
}

std::vector<QPoly> sturm_chain(const QPoly& f) {
    std::vector<QPoly> chain;
    chain.push_back(q_trim(f));
    chain.push_back(q_trim(q_derivative(f)));
    while (q_deg(chain.back()) > 0) {
        auto rem = q_divmod(chain[chain.size() - 2], chain.back()).second;
        if (rem.empty()) break;  // non-squarefree would stop here
        for (auto& c : rem) c = -c;
        chain.push_back(rem);
    }
    return chain;
}

// ---------- integer polynomial helpers for field construction ----------

mpz_class resultant_z(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
    long da = static_cast<long>(a.size()) - 1, db = static_cast<long>(b.size()) - 1;
    long n = da + db;
    if (n == 0) return 1;
    ZMat S(static_cast<size_t>(n), ZVec(static_cast<size_t>(n), 0));
    for (long i = 0; i < db; ++i)
        for (long j = 0; j <= da; ++j) S[static_cast<size_t>(i)][static_cast<size_t>(i + j)] =
            a[static_cast<size_t>(da - j)];
    for (long i = 0; i < da; ++i)
        for (long j = 0; j <= db; ++j)
            S[static_cast<size_t>(db + i)][static_cast<size_t>(i + j)] =
                b[static_cast<size_t>(db - j)];
    return determinant(S);
}

bool has_integer_root(const std::vector<mpz_class>& m) {
    mpz_class c0 = m[0];
    if (c0 == 0) return true;
    auto primes = factor_integer(c0);
    std::vector<mpz_class> divisors = {1};
    for (const auto& [p, e] : primes) {
        std::vector<mpz_class> next;
        mpz_class pk = 1;
        for (long i = 0; i <= e; ++i) {
            for (const auto& dv : divisors) next.push_back(dv * pk);
            pk *= p;
        }
        divisors = next;
    }
    auto eval = [&](const mpz_class& x) {
        mpz_class acc = 0;
        for (auto it = m.rbegin(); it != m.rend(); ++it) acc = acc * x + *it;
        return acc;
    };
    for (const auto& dv : divisors) {
        if (eval(dv) == 0 || eval(-dv) == 0) return true;
    }
    return false;
}

// exact irreducibility for monic integer quartics: no linear factor (checked
// by caller) and no monic quadratic factorization
bool quartic_has_quadratic_factor(const std::vector<mpz_class>& m) {
    // m = x^4 + m3 x^3 + m2 x^2 + m1 x + m0 = (x^2+ax+b)(x^2+cx+e)
    const mpz_class m0 = m[0], m1 = m[1], m2 = m[2], m3 = m[3];
    if (m0 == 0) return true;
    auto primes = factor_integer(m0);
    std::vector<mpz_class> divisors = {1};
    for (const auto& [p, e] : primes) {
        std::vector<mpz_class> next;
        mpz_class pk = 1;
        for (long i = 0; i <= e; ++i) {
            for (const auto& dv : divisors) next.push_back(dv * pk);
            pk *= p;
        }
        divisors = next;
    }
    std::vector<mpz_class> cands;
    for (const auto& dv : divisors) {
        cands.push_back(dv);
        cands.push_back(-dv);
    }
    for (const auto& b : cands) {
        if (b == 0) continue;
        mpz_class e = m0 / b;
        if (b * e != m0) continue;
        // a + c = m3, ac = m2 - b - e, ae + bc = m1
        mpz_class s = m3, prod = m2 - b - e;
        mpz_class disc = s * s - 4 * prod;
        if (disc < 0) continue;
        mpz_class rt;
        mpz_sqrt(rt.get_mpz_t(), disc.get_mpz_t());
        if (rt * rt != disc) continue;
        for (int sign = -1; sign <= 1; sign += 2) {
            mpz_class twice_a = s + sign * rt;
            if (twice_a % 2 != 0) continue;
            mpz_class a = twice_a / 2, c = s - a;
            if (a * e + b * c == m1) return true;
        }
    }
    return false;
}

}  // namespace

// ---------- NumberField ----------

FieldPtr NumberField::rationals() {
    static FieldPtr q = [] {
        auto f = std::shared_ptr<NumberField>(new NumberField());
        f->min_poly_ = {mpz_class(0), mpz_class(1)};
        f->d_ = 1;
        f->disc_ = 1;
        f->r1_ = 1;
        f->r2_ = 0;
        f->theta_pow_ = {{mpz_class(1)}};
        return FieldPtr(f);
    }();
    return q;
}

FieldPtr NumberField::create(const std::vector<mpz_class>& min_poly_in) {
    std::vector<mpz_class> m = min_poly_in;
    while (m.size() > 1 && m.back() == 0) m.pop_back();
    if (m.size() < 2) throw InputError("minimal polynomial must have positive degree");
    if (m.back() != 1) throw InputError("minimal polynomial must be monic");
    long d = static_cast<long>(m.size()) - 1;
    if (d == 1) return rationals();

    if (has_integer_root(m)) throw InputError("minimal polynomial has a rational root");
    if (d == 4 && quartic_has_quadratic_factor(m))
        throw InputError("minimal polynomial factors into quadratics");
    if (d >= 5) {
        // need a mod-p irreducibility witness
        bool witness = false;
        for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L, 43L,
                       47L, 53L, 59L, 61L, 67L, 71L, 73L, 79L, 83L, 89L, 97L, 101L}) {
            mpz_class pz(p);
            FpPoly fb = fp_reduce(m, pz);
            if (fp_deg(fb) != d) continue;
            auto fac = fp_factor(m, pz);
            if (fac.size() == 1 && fac[0].second == 1) {
                witness = true;
                break;
            }
        }
        if (!witness)
            throw InputError("no irreducibility certificate for degree >= 5 polynomial");
    }

    std::vector<mpz_class> md;
    for (size_t i = 1; i < m.size(); ++i) md.push_back(mpz_class(i) * m[i]);
    mpz_class res = resultant_z(m, md);
    long s = (d * (d - 1) / 2) % 2;
    mpz_class disc = s ? -res : res;
    if (disc == 0) throw InputError("minimal polynomial is not squarefree");

    // Dedekind criterion at every prime dividing disc(m)
    for (const auto& [p, e] : factor_integer(disc)) {
        (void)e;
        auto fac = fp_factor(m, p);
        FpPoly g = {mpz_class(1)}, h = {mpz_class(1)};
        for (const auto& [gi, ei] : fac) {
            g = fp_mul(g, gi, p);
            FpPoly gpow = {mpz_class(1)};
            for (long k = 1; k < ei; ++k) gpow = fp_mul(gpow, gi, p);
            h = fp_mul(h, gpow, p);
        }
        // lift g, h to Z[x] with coefficients in [0,p), T = (g*h - m)/p
        std::vector<mpz_class> gh(g.size() + h.size() - 1, 0);
        for (size_t i = 0; i < g.size(); ++i)
            for (size_t j = 0; j < h.size(); ++j) gh[i + j] += g[i] * h[j];
        std::vector<mpz_class> T(std::max(gh.size(), m.size()), 0);
        for (size_t i = 0; i < T.size(); ++i) {
            mpz_class a = i < gh.size() ? gh[i] : mpz_class(0);
            mpz_class b = i < m.size() ? m[i] : mpz_class(0);
            mpz_class diff = a - b;
            if (diff % p != 0) throw Error("dedekind lift mismatch");
            T[i] = diff / p;
        }
        FpPoly Tbar = fp_reduce(T, p);
        FpPoly ggcd = fp_gcd(Tbar, g, p);
        ggcd = fp_gcd(ggcd, h, p);
        if (fp_deg(ggcd) > 0)
            throw InputError("Z[theta] is not maximal at " + p.get_str() +
                             "; field not supported");
    }

    // signature via Sturm
    QPoly mq;
    for (const auto& c : m) mq.push_back(mpq_class(c));
    auto chain = sturm_chain(mq);
    mpz_class B = 1;
    for (const auto& c : m) B = std::max(B, mpz_class(abs(c)));
    mpq_class lo = -mpq_class(B + 1) - mpq_class(1, 3);
    mpq_class hi = mpq_class(B + 1) + mpq_class(1, 3);
    long r1 = sturm_variations(chain, lo) - sturm_variations(chain, hi);
    long r2 = (d - r1) / 2;
    if (r1 + 2 * r2 != d) throw Error("signature computation failed");
    if (r2 > 0 && d > 2)
        throw InputError(
            "complex embeddings are supported for quadratic fields only at desk scale");

    auto f = std::shared_ptr<NumberField>(new NumberField());
    f->min_poly_ = m;
    f->d_ = d;
    f->disc_ = disc;
    f->r1_ = r1;
    f->r2_ = r2;
    // theta^k mod m for k = 0..2d-2
    f->theta_pow_.assign(static_cast<size_t>(2 * d - 1), ZVec(static_cast<size_t>(d), 0));
    for (long k = 0; k < d; ++k) f->theta_pow_[static_cast<size_t>(k)][static_cast<size_t>(k)] = 1;
    for (long k = d; k <= 2 * d - 2; ++k) {
        // theta^k = theta * theta^(k-1), reduce the overflow term
        ZVec prev = f->theta_pow_[static_cast<size_t>(k - 1)];
        ZVec cur(static_cast<size_t>(d), 0);
        // shift
        mpz_class top = prev[static_cast<size_t>(d - 1)];
        for (long i = d - 1; i >= 1; --i) cur[static_cast<size_t>(i)] = prev[static_cast<size_t>(i - 1)];
        cur[0] = 0;
        // theta^d = -(m_0 + m_1 theta + ... + m_{d-1} theta^{d-1})
        for (long i = 0; i < d; ++i) cur[static_cast<size_t>(i)] -= top * m[static_cast<size_t>(i)];
        f->theta_pow_[static_cast<size_t>(k)] = cur;
    }
    return FieldPtr(f);
}

void NumberField::compute_embeddings(mpfr_prec_t prec) const {
    std::vector<ArchEmbedding> out;
    if (d_ == 1) {
        ArchEmbedding e;
        e.is_real = true;
        e.re = Interval::zero(prec);
        e.im = Interval::zero(prec);
        // theta = root of x + c: -c
        mpq_class root = -mpq_class(min_poly_[0]);
        e.re = Interval::from_mpq(root, prec);
        out.push_back(e);
        emb_ = out;
        emb_prec_ = prec;
        return;
    }
    QPoly mq;
    for (const auto& c : min_poly_) mq.push_back(mpq_class(c));
    auto chain = sturm_chain(mq);
    mpz_class B = 1;
    for (const auto& c : min_poly_) B = std::max(B, mpz_class(abs(c)));
    mpq_class lo = -mpq_class(B + 1) - mpq_class(1, 3);
    mpq_class hi = mpq_class(B + 1) + mpq_class(1, 3);

    // isolate real roots by bisection on variation counts
    std::vector<std::pair<mpq_class, mpq_class>> intervals;
    std::vector<std::pair<mpq_class, mpq_class>> stack = {{lo, hi}};
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        long n = sturm_variations(chain, a) - sturm_variations(chain, b);
        if (n == 0) continue;
        if (n == 1) {
            intervals.emplace_back(a, b);
            continue;
        }
        mpq_class mid = (a + b) / 2;
        // rational midpoints are never roots of an irreducible m of degree >= 2
        stack.emplace_back(a, mid);
        stack.emplace_back(mid, b);
    }
    std::sort(intervals.begin(), intervals.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    if (static_cast<long>(intervals.size()) != r1_) throw Error("root isolation failed");

    // refine to the requested precision
    mpq_class target(1, 1);
    for (mpfr_prec_t i = 0; i < prec + 8; ++i) target /= 2;
    for (auto& [a, b] : intervals) {
        while (b - a > target) {
            mpq_class mid = (a + b) / 2;
            long n = sturm_variations(chain, a) - sturm_variations(chain, mid);
            if (n == 1)
                b = mid;
            else
                a = mid;
        }
        ArchEmbedding e;
        e.is_real = true;
        e.re = Interval::from_endpoints(a, b, prec);
        e.im = Interval::zero(prec);
        out.push_back(e);
    }
    if (r2_ > 0) {
        // quadratic complex pair: x^2 + bx + c with b^2 - 4c < 0
        mpq_class b(min_poly_[1]), c(min_poly_[0]);
        mpq_class disc = b * b - 4 * c;
        ArchEmbedding e;
        e.is_real = false;
        e.re = Interval::from_mpq(-b / 2, prec);
        e.im = Interval::from_mpq(-disc, prec).sqrt().mul_q(mpq_class(1, 2));
        out.push_back(e);
    }
    emb_ = out;
    emb_prec_ = prec;
}

const std::vector<NumberField::ArchEmbedding>& NumberField::embeddings(mpfr_prec_t prec) const {
    std::lock_guard<std::mutex> lock(mu_);
    if (emb_prec_ < prec) compute_embeddings(prec);
    return emb_;
}

std::vector<Place> NumberField::archimedean_places() const {
    std::vector<Place> out;
    for (long i = 0; i < r1_ + r2_; ++i) {
        Place v;
        v.kind = i < r1_ ? Place::Kind::real : Place::Kind::complex_pair;
        v.arch_index = i;
        out.push_back(v);
    }
    return out;
}

std::vector<Place> NumberField::places_above(const mpz_class& p) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        for (const auto& [key, val] : place_cache_)
            if (key == p) return val;
    }
    std::vector<Place> out;
    if (d_ == 1) {
        Place v;
        v.kind = Place::Kind::finite;
        v.p = p;
        v.factor = {mpz_class(0), mpz_class(1)};
        v.e = 1;
        v.f = 1;
        out.push_back(v);
    } else {
        auto fac = fp_factor(min_poly_, p);
        long check = 0;
        for (const auto& [g, e] : fac) {
            Place v;
            v.kind = Place::Kind::finite;
            v.p = p;
            v.factor = g;
            v.e = e;
            v.f = fp_deg(g);
            check += v.e * v.f;
            out.push_back(v);
        }
        if (check != d_) throw Error("local degrees do not sum to the field degree");
    }
    std::lock_guard<std::mutex> lock(mu_);
    place_cache_.emplace_back(p, out);
    return out;
}

namespace {

ZVec mul_zz(const ZVec& a, const ZVec& b, const ZMat& pow_table, long d) {
    std::vector<mpz_class> conv(static_cast<size_t>(2 * d - 1), 0);
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j)
            conv[static_cast<size_t>(i + j)] += a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
    ZVec out(static_cast<size_t>(d), 0);
    for (long k = 0; k < 2 * d - 1; ++k)
        for (long j = 0; j < d; ++j)
            out[static_cast<size_t>(j)] += conv[static_cast<size_t>(k)] *
                                           pow_table[static_cast<size_t>(k)][static_cast<size_t>(j)];
    return out;
}

}  // namespace

const ZMat& NumberField::ideal_power(const Place& v, long k, size_t factor_index) const {
    std::lock_guard<std::mutex> lock(mu_);
    IdealCache* cache = nullptr;
    for (auto& [key, c] : ideal_cache_)
        if (key.first == v.p && key.second == factor_index) cache = &c;
    if (!cache) {
        ideal_cache_.emplace_back(std::make_pair(v.p, factor_index), IdealCache{});
        cache = &ideal_cache_.back().second;
    }
    while (static_cast<long>(cache->powers.size()) < k) {
        if (cache->powers.empty()) {
            // generators p*theta^i and g(theta)*theta^i
            ZVec g(static_cast<size_t>(d_), 0);
            for (size_t i = 0; i < v.factor.size() && i < static_cast<size_t>(d_); ++i)
                g[i] = v.factor[i];
            // v.factor may have degree d (inert): reduce via power table
            if (v.factor.size() == static_cast<size_t>(d_) + 1) {
                g.assign(static_cast<size_t>(d_), 0);
                for (size_t i = 0; i < v.factor.size(); ++i)
                    for (long j = 0; j < d_; ++j)
                        g[static_cast<size_t>(j)] +=
                            v.factor[i] * theta_pow_[i][static_cast<size_t>(j)];
            }
            ZMat gens;
            for (long i = 0; i < d_; ++i) {
                ZVec e(static_cast<size_t>(d_), 0);
                e[static_cast<size_t>(i)] = v.p;
                gens.push_back(e);
                ZVec ti(static_cast<size_t>(d_), 0);
                ti[static_cast<size_t>(i)] = 1;
                gens.push_back(mul_zz(g, ti, theta_pow_, d_));
            }
            cache->powers.push_back(hnf_rows(std::move(gens)));
        } else {
            const ZMat& prev = cache->powers.back();
            const ZMat& first = cache->powers.front();
            ZMat gens;
            for (const auto& a : prev)
                for (const auto& b : first) gens.push_back(mul_zz(a, b, theta_pow_, d_));
            cache->powers.push_back(hnf_rows(std::move(gens)));
        }
    }
    return cache->powers[static_cast<size_t>(k - 1)];
}

long finite_valuation_impl(const NumberField& K, const std::vector<mpq_class>& coords,
                           const Place& v) {
    const long d = K.d_;
    if (d == 1) {
        return valuation_q(coords[0], v.p);
    }
    // x = A(theta)/c with c the lcm of coordinate denominators
    mpz_class c = 1;
    for (const auto& q : coords) c = c / gcd(c, q.get_den()) * q.get_den();
    ZVec A(static_cast<size_t>(d));
    bool zero = true;
    for (long i = 0; i < d; ++i) {
        mpq_class scaled = coords[static_cast<size_t>(i)] * c;
        A[static_cast<size_t>(i)] = scaled.get_num();
        if (A[static_cast<size_t>(i)] != 0) zero = false;
    }
    if (zero) throw ZeroElement("valuation of zero element");
    long vc = c == 1 ? 0 : valuation_z(c, v.p);

    // v_v(A): largest k with A in ideal^k; bounded by v_p(N(A))
    // compute N(A) via the multiplication matrix determinant
    ZMat M(static_cast<size_t>(d), ZVec(static_cast<size_t>(d), 0));
    for (long i = 0; i < d; ++i) {
        ZVec ti(static_cast<size_t>(d), 0);
        ti[static_cast<size_t>(i)] = 1;
        ZVec col = mul_zz(A, ti, K.theta_pow_, d);
        for (long j = 0; j < d; ++j) M[static_cast<size_t>(j)][static_cast<size_t>(i)] = col[static_cast<size_t>(j)];
    }
    mpz_class nrm = determinant(M);
    if (nrm == 0) throw Error("norm of nonzero element vanished");
    long cap = valuation_z(nrm, v.p) + 1;

    // identify this place's factor index among places_above(p)
    auto places = K.places_above(v.p);
    size_t idx = places.size();
    for (size_t i = 0; i < places.size(); ++i)
        if (places[i].factor == v.factor) idx = i;
    if (idx == places.size()) throw BadParameters("place does not belong to this field");

    long k = 0;
    while (k < cap + 1) {
        const ZMat& H = K.ideal_power(v, k + 1, idx);
        if (!in_lattice(H, A)) break;
        ++k;
    }
    return k - vc * v.e;
}

long NumberField::finite_valuation(const AlgebraicNumber& x, const Place& v) const {
    if (v.kind != Place::Kind::finite) throw BadParameters("finite_valuation at archimedean place");
    return finite_valuation_impl(*this, x.coords(), v);
}

// ---------- AlgebraicNumber ----------

AlgebraicNumber::AlgebraicNumber(FieldPtr field, std::vector<mpq_class> coords)
    : field_(std::move(field)), coords_(std::move(coords)) {
    if (!field_) throw BadParameters("null field");
    if (coords_.size() != static_cast<size_t>(field_->degree()))
        throw BadParameters("coordinate length does not match the field degree");
    for (auto& c : coords_) c.canonicalize();
}

AlgebraicNumber AlgebraicNumber::from_rational(const FieldPtr& field, const mpq_class& q) {
    std::vector<mpq_class> c(static_cast<size_t>(field->degree()), mpq_class(0));
    c[0] = q;
    return AlgebraicNumber(field, std::move(c));
}

AlgebraicNumber AlgebraicNumber::generator(const FieldPtr& field) {
    if (field->degree() == 1)
        return from_rational(field, -mpq_class(field->min_poly()[0]));
    std::vector<mpq_class> c(static_cast<size_t>(field->degree()), mpq_class(0));
    c[1] = 1;
    return AlgebraicNumber(field, std::move(c));
}

AlgebraicNumber AlgebraicNumber::zero(const FieldPtr& field) {
    return from_rational(field, mpq_class(0));
}
AlgebraicNumber AlgebraicNumber::one(const FieldPtr& field) {
    return from_rational(field, mpq_class(1));
}

bool AlgebraicNumber::is_zero() const {
    for (const auto& c : coords_)
        if (c != 0) return false;
    return true;
}

bool AlgebraicNumber::is_rational() const {
    for (size_t i = 1; i < coords_.size(); ++i)
        if (coords_[i] != 0) return false;
    return true;
}

mpq_class AlgebraicNumber::as_rational() const {
    if (!is_rational()) throw DomainError("element is not rational");
    return coords_[0];
}

namespace {
void check_same_field(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    if (a.field() != b.field()) throw BadParameters("mixed fields in arithmetic");
}
}  // namespace

AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    check_same_field(a, b);
    std::vector<mpq_class> c(a.coords().size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = a.coords()[i] + b.coords()[i];
    return AlgebraicNumber(a.field(), std::move(c));
}

AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    check_same_field(a, b);
    std::vector<mpq_class> c(a.coords().size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = a.coords()[i] - b.coords()[i];
    return AlgebraicNumber(a.field(), std::move(c));
}

AlgebraicNumber AlgebraicNumber::operator-() const {
    std::vector<mpq_class> c(coords_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = -coords_[i];
    return AlgebraicNumber(field_, std::move(c));
}

AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    check_same_field(a, b);
    const long d = a.field()->degree();
    std::vector<mpq_class> conv(static_cast<size_t>(2 * d - 1), mpq_class(0));
    for (long i = 0; i < d; ++i) {
        if (a.coords()[static_cast<size_t>(i)] == 0) continue;
        for (long j = 0; j < d; ++j)
            conv[static_cast<size_t>(i + j)] +=
                a.coords()[static_cast<size_t>(i)] * b.coords()[static_cast<size_t>(j)];
    }
    const ZMat& pt = a.field()->power_table();
    std::vector<mpq_class> out(static_cast<size_t>(d), mpq_class(0));
    for (long k = 0; k < 2 * d - 1; ++k) {
        if (conv[static_cast<size_t>(k)] == 0) continue;
        for (long j = 0; j < d; ++j)
            out[static_cast<size_t>(j)] +=
                conv[static_cast<size_t>(k)] * mpq_class(pt[static_cast<size_t>(k)][static_cast<size_t>(j)]);
    }
    return AlgebraicNumber(a.field(), std::move(out));
}

AlgebraicNumber AlgebraicNumber::inverse() const {
    if (is_zero()) throw ZeroElement("inverse of zero");
    const long d = field_->degree();
    if (d == 1) {
        return from_rational(field_, 1 / coords_[0]);
    }
    // extended Euclid in Q[x]: u*A + w*m = 1
    QPoly A;
    for (const auto& c : coords_) A.push_back(c);
    A = q_trim(A);
    QPoly m;
    for (const auto& c : field_->min_poly()) m.push_back(mpq_class(c));
    QPoly r0 = m, r1 = A;
    QPoly s0 = {mpq_class(0)}, s1 = {mpq_class(1)};  // coefficients on A
    while (q_deg(r1) > 0) {
        auto [q, r] = q_divmod(r0, r1);
        // s2 = s0 - q*s1
        QPoly qs(q.size() + s1.size(), mpq_class(0));
        for (size_t i = 0; i < q.size(); ++i)
            for (size_t j = 0; j < s1.size(); ++j) qs[i + j] += q[i] * s1[j];
        QPoly s2(std::max(s0.size(), qs.size()), mpq_class(0));
        for (size_t i = 0; i < s2.size(); ++i) {
            if (i < s0.size()) s2[i] += s0[i];
            if (i < qs.size()) s2[i] -= qs[i];
        }
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = q_trim(s2);
    }
    if (r1.empty()) throw Error("gcd(A, m) nontrivial: minimal polynomial not irreducible?");
    mpq_class lead = r1[0];
    std::vector<mpq_class> out(static_cast<size_t>(d), mpq_class(0));
    for (size_t i = 0; i < s1.size() && i < out.size(); ++i) out[i] = s1[i] / lead;
    return AlgebraicNumber(field_, std::move(out));
}

AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    return a * b.inverse();
}

AlgebraicNumber AlgebraicNumber::pow(unsigned long k) const {
    AlgebraicNumber r = one(field_);
    AlgebraicNumber base = *this;
    unsigned long e = k;
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    return a.field() == b.field() && a.coords() == b.coords();
}
bool operator!=(const AlgebraicNumber& a, const AlgebraicNumber& b) { return !(a == b); }

mpq_class AlgebraicNumber::norm() const {
    const long d = field_->degree();
    if (d == 1) return coords_[0];
    // determinant of the multiplication-by-x matrix over Q
    QMat M(static_cast<size_t>(d), QVec(static_cast<size_t>(d), mpq_class(0)));
    const ZMat& pt = field_->power_table();
    for (long i = 0; i < d; ++i) {
        // column i: coords of x * theta^i
        std::vector<mpq_class> conv(static_cast<size_t>(2 * d - 1), mpq_class(0));
        for (long k = 0; k < d; ++k) conv[static_cast<size_t>(k + i)] = coords_[static_cast<size_t>(k)];
        for (long k = 0; k < 2 * d - 1; ++k) {
            if (conv[static_cast<size_t>(k)] == 0) continue;
            for (long j = 0; j < d; ++j)
                M[static_cast<size_t>(j)][static_cast<size_t>(i)] +=
                    conv[static_cast<size_t>(k)] * mpq_class(pt[static_cast<size_t>(k)][static_cast<size_t>(j)]);
        }
    }
    // Gaussian elimination determinant
    mpq_class det = 1;
    const size_t n = M.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = n;
        for (size_t r = col; r < n; ++r)
            if (M[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv == n) return 0;
        if (piv != col) {
            std::swap(M[piv], M[col]);
            det = -det;
        }
        det *= M[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            if (M[r][col] == 0) continue;
            mpq_class f = M[r][col] / M[col][col];
            for (size_t c2 = col; c2 < n; ++c2) M[r][c2] -= f * M[col][c2];
        }
    }
    return det;
}

std::string AlgebraicNumber::str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i] == 0) continue;
        if (!first) os << " + ";
        os << rational_to_string(coords_[i]);
        if (i >= 1) os << "*th" << (i > 1 ? std::to_string(i) : "");
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace plf
