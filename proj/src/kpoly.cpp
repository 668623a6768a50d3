#include "plf/kpoly.hpp"

#include <algorithm>

namespace plf {

long expo_total(const Expo& e) {
    long t = 0;
    for (int x : e) t += x;
    return t;
}

namespace {
void expo_rec(int nvars, long remaining, Expo& cur, std::vector<Expo>& out) {
    if (static_cast<int>(cur.size()) == nvars - 1) {
        cur.push_back(static_cast<int>(remaining));
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (long k = 0; k <= remaining; ++k) {
        cur.push_back(static_cast<int>(k));
        expo_rec(nvars, remaining - k, cur, out);
        cur.pop_back();
    }
}
}  // namespace

std::vector<Expo> expo_list(int nvars, long max_total) {
    std::vector<Expo> out;
    if (nvars == 0) {
        out.push_back({});
        return out;
    }
    Expo cur;
    for (long d = 0; d <= max_total; ++d) expo_rec(nvars, d, cur, out);
    return out;
}

std::vector<Expo> expo_list_exact(int nvars, long deg) {
    std::vector<Expo> out;
    if (nvars == 0) {
        if (deg == 0) out.push_back({});
        return out;
    }
    Expo cur;
    expo_rec(nvars, deg, cur, out);
    return out;
}

// ---------- KPoly ----------

KPoly::KPoly(FieldPtr field, int nvars) : field_(std::move(field)), nvars_(nvars) {
    if (!field_) throw BadParameters("null field");
    if (nvars_ < 0) throw BadParameters("negative variable count");
}

KPoly KPoly::constant(const FieldPtr& f, int nvars, const AlgebraicNumber& c) {
    KPoly p(f, nvars);
    p.add_term(Expo(static_cast<size_t>(nvars), 0), c);
    return p;
}

KPoly KPoly::constant_q(const FieldPtr& f, int nvars, const mpq_class& c) {
    return constant(f, nvars, AlgebraicNumber::from_rational(f, c));
}

KPoly KPoly::variable(const FieldPtr& f, int nvars, int index) {
    if (index < 0 || index >= nvars) throw BadParameters("variable index out of range");
    KPoly p(f, nvars);
    Expo e(static_cast<size_t>(nvars), 0);
    e[static_cast<size_t>(index)] = 1;
    p.add_term(e, AlgebraicNumber::one(f));
    return p;
}

KPoly KPoly::monomial(const FieldPtr& f, int nvars, const Expo& e, const AlgebraicNumber& c) {
    KPoly p(f, nvars);
    p.add_term(e, c);
    return p;
}

long KPoly::total_degree() const {
    long d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, expo_total(e));
    return d;
}

long KPoly::degree_in(int var) const {
    long d = 0;
    for (const auto& [e, c] : terms_)
        d = std::max(d, static_cast<long>(e[static_cast<size_t>(var)]));
    return d;
}

AlgebraicNumber KPoly::coeff(const Expo& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? AlgebraicNumber::zero(field_) : it->second;
}

std::vector<AlgebraicNumber> KPoly::coefficient_vector() const {
    std::vector<AlgebraicNumber> out;
    out.reserve(terms_.size());
    for (const auto& [e, c] : terms_) out.push_back(c);
    return out;
}

void KPoly::add_term(const Expo& e, const AlgebraicNumber& c) {
    if (static_cast<int>(e.size()) != nvars_) throw BadParameters("exponent arity mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

KPoly operator+(const KPoly& a, const KPoly& b) {
    if (a.nvars_ != b.nvars_) throw BadParameters("polynomial arity mismatch");
    KPoly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
}

KPoly operator-(const KPoly& a, const KPoly& b) { return a + (-b); }

KPoly KPoly::operator-() const {
    KPoly r(field_, nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

KPoly operator*(const KPoly& a, const KPoly& b) {
    if (a.nvars_ != b.nvars_) throw BadParameters("polynomial arity mismatch");
    KPoly r(a.field_, a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            Expo e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

KPoly KPoly::scale(const AlgebraicNumber& c) const {
    KPoly r(field_, nvars_);
    if (c.is_zero()) return r;
    for (const auto& [e, x] : terms_) r.terms_.emplace(e, x * c);
    return r;
}

KPoly KPoly::scale_q(const mpq_class& c) const {
    return scale(AlgebraicNumber::from_rational(field_, c));
}

bool operator==(const KPoly& a, const KPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
}

KPoly KPoly::partial_derivative(int var) const {
    KPoly r(field_, nvars_);
    for (const auto& [e, c] : terms_) {
        int k = e[static_cast<size_t>(var)];
        if (k == 0) continue;
        Expo e2 = e;
        e2[static_cast<size_t>(var)] = k - 1;
        r.add_term(e2, c * AlgebraicNumber::from_rational(field_, mpq_class(k)));
    }
    return r;
}

AlgebraicNumber KPoly::evaluate(const std::vector<AlgebraicNumber>& point) const {
    if (static_cast<int>(point.size()) != nvars_) throw BadParameters("point arity mismatch");
    AlgebraicNumber acc = AlgebraicNumber::zero(field_);
    for (const auto& [e, c] : terms_) {
        AlgebraicNumber t = c;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) t = t * point[i].pow(static_cast<unsigned long>(e[i]));
        acc = acc + t;
    }
    return acc;
}

KPoly KPoly::partial_evaluate(const std::vector<std::optional<AlgebraicNumber>>& values) const {
    if (static_cast<int>(values.size()) != nvars_) throw BadParameters("values arity mismatch");
    KPoly r(field_, nvars_);
    for (const auto& [e, c] : terms_) {
        AlgebraicNumber t = c;
        Expo e2 = e;
        for (size_t i = 0; i < e.size(); ++i) {
            if (values[i] && e[i] > 0) {
                t = t * values[i]->pow(static_cast<unsigned long>(e[i]));
                e2[i] = 0;
            }
        }
        r.add_term(e2, t);
    }
    return r;
}

VectorHeights poly_height(const KPoly& P, mpfr_prec_t prec) {
    return heights_vector(P.coefficient_vector(), prec);
}

// ---------- KSeries ----------

KSeries::KSeries(FieldPtr field, int nvars, long trunc)
    : field_(std::move(field)), nvars_(nvars), trunc_(trunc) {
    if (!field_) throw BadParameters("null field");
    if (nvars_ < 0 || trunc_ < 0) throw BadParameters("bad series shape");
}

KSeries KSeries::zero(const FieldPtr& f, int nvars, long trunc) { return KSeries(f, nvars, trunc); }

KSeries KSeries::constant(const FieldPtr& f, int nvars, long trunc, const AlgebraicNumber& c) {
    KSeries s(f, nvars, trunc);
    s.add_term(Expo(static_cast<size_t>(nvars), 0), c);
    return s;
}

KSeries KSeries::variable(const FieldPtr& f, int nvars, int index, long trunc) {
    if (index < 0 || index >= nvars) throw BadParameters("variable index out of range");
    KSeries s(f, nvars, trunc);
    Expo e(static_cast<size_t>(nvars), 0);
    e[static_cast<size_t>(index)] = 1;
    s.add_term(e, AlgebraicNumber::one(f));
    return s;
}

KSeries KSeries::from_poly(const KPoly& p, long trunc) {
    KSeries s(p.field(), p.nvars(), trunc);
    for (const auto& [e, c] : p.terms()) s.add_term(e, c);
    return s;
}

AlgebraicNumber KSeries::coeff(const Expo& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? AlgebraicNumber::zero(field_) : it->second;
}

AlgebraicNumber KSeries::constant_term() const {
    return coeff(Expo(static_cast<size_t>(nvars_), 0));
}

void KSeries::add_term(const Expo& e, const AlgebraicNumber& c) {
    if (static_cast<int>(e.size()) != nvars_) throw BadParameters("exponent arity mismatch");
    if (expo_total(e) > trunc_) return;  // beyond truncation
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

KSeries operator+(const KSeries& a, const KSeries& b) {
    if (a.nvars_ != b.nvars_) throw BadParameters("series arity mismatch");
    KSeries r(a.field_, a.nvars_, std::min(a.trunc_, b.trunc_));
    for (const auto& [e, c] : a.terms_) r.add_term(e, c);
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
}

KSeries operator-(const KSeries& a, const KSeries& b) { return a + (-b); }

KSeries KSeries::operator-() const {
    KSeries r(field_, nvars_, trunc_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

KSeries operator*(const KSeries& a, const KSeries& b) {
    if (a.nvars_ != b.nvars_) throw BadParameters("series arity mismatch");
    KSeries r(a.field_, a.nvars_, std::min(a.trunc_, b.trunc_));
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            Expo e(ea.size());
            long tot = 0;
            for (size_t i = 0; i < e.size(); ++i) {
                e[i] = ea[i] + eb[i];
                tot += e[i];
            }
            if (tot > r.trunc_) continue;
            r.add_term(e, ca * cb);
        }
    return r;
}

KSeries KSeries::scale(const AlgebraicNumber& c) const {
    KSeries r(field_, nvars_, trunc_);
    if (c.is_zero()) return r;
    for (const auto& [e, x] : terms_) r.terms_.emplace(e, x * c);
    return r;
}

bool operator==(const KSeries& a, const KSeries& b) {
    return a.nvars_ == b.nvars_ && a.trunc_ == b.trunc_ && a.terms_ == b.terms_;
}

KSeries KSeries::truncate(long new_trunc) const {
    KSeries r(field_, nvars_, std::min(new_trunc, trunc_));
    for (const auto& [e, c] : terms_)
        if (expo_total(e) <= r.trunc_) r.terms_.emplace(e, c);
    return r;
}

KSeries KSeries::derivative(int var) const {
    KSeries r(field_, nvars_, std::max(0L, trunc_ - 1));
    for (const auto& [e, c] : terms_) {
        int k = e[static_cast<size_t>(var)];
        if (k == 0) continue;
        Expo e2 = e;
        e2[static_cast<size_t>(var)] = k - 1;
        r.add_term(e2, c * AlgebraicNumber::from_rational(field_, mpq_class(k)));
    }
    return r;
}

KSeries KSeries::inverse() const {
    AlgebraicNumber c0 = constant_term();
    if (c0.is_zero()) throw DomainError("series inverse needs a unit constant term");
    AlgebraicNumber inv0 = c0.inverse();
    KSeries g(field_, nvars_, trunc_);
    g.add_term(Expo(static_cast<size_t>(nvars_), 0), inv0);
    // g_a = -inv0 * sum_{0 < b <= a} f_b g_{a-b}, filled in graded order
    for (long deg = 1; deg <= trunc_; ++deg) {
        for (const Expo& a : expo_list_exact(nvars_, deg)) {
            AlgebraicNumber acc = AlgebraicNumber::zero(field_);
            for (const auto& [b, fb] : terms_) {
                if (expo_total(b) == 0) continue;
                bool le = true;
                Expo rest(a.size());
                for (size_t i = 0; i < a.size(); ++i) {
                    rest[i] = a[i] - b[i];
                    if (rest[i] < 0) {
                        le = false;
                        break;
                    }
                }
                if (!le) continue;
                AlgebraicNumber gr = g.coeff(rest);
                if (gr.is_zero()) continue;
                acc = acc + fb * gr;
            }
            if (!acc.is_zero()) g.add_term(a, -(inv0 * acc));
        }
    }
    return g;
}

KSeries KSeries::compose_poly(const KPoly& P, const std::vector<KSeries>& args) {
    if (static_cast<int>(args.size()) != P.nvars())
        throw BadParameters("composition arity mismatch");
    if (args.empty()) throw BadParameters("empty composition");
    const FieldPtr& f = args[0].field();
    int nv = args[0].nvars();
    long tr = args[0].trunc();
    for (const auto& s : args) {
        if (s.nvars() != nv) throw BadParameters("composition arg arity mismatch");
        tr = std::min(tr, s.trunc());
    }
    std::vector<std::vector<KSeries>> pows(args.size());
    for (size_t i = 0; i < args.size(); ++i)
        pows[i].push_back(KSeries::constant(f, nv, tr, AlgebraicNumber::one(f)));
    KSeries acc(f, nv, tr);
    for (const auto& [e, c] : P.terms()) {
        KSeries term = KSeries::constant(f, nv, tr, c);
        for (size_t i = 0; i < e.size(); ++i) {
            int k = e[i];
            while (static_cast<int>(pows[i].size()) <= k)
                pows[i].push_back(pows[i].back() * args[i].truncate(tr));
            if (k > 0) term = term * pows[i][static_cast<size_t>(k)];
        }
        acc = acc + term;
    }
    return acc;
}

KSeries KSeries::compose_linear(const std::vector<std::vector<AlgebraicNumber>>& B,
                                int new_nvars) const {
    if (static_cast<int>(B.size()) != nvars_) throw BadParameters("linear map shape mismatch");
    // old var j maps to the linear form sum_i B[j][i] w_i
    std::vector<KSeries> images;
    for (int j = 0; j < nvars_; ++j) {
        KSeries s(field_, new_nvars, trunc_);
        for (int i = 0; i < new_nvars; ++i) {
            if (B[static_cast<size_t>(j)][static_cast<size_t>(i)].is_zero()) continue;
            Expo e(static_cast<size_t>(new_nvars), 0);
            e[static_cast<size_t>(i)] = 1;
            s.add_term(e, B[static_cast<size_t>(j)][static_cast<size_t>(i)]);
        }
        images.push_back(s);
    }
    std::vector<std::vector<KSeries>> pows(images.size());
    for (size_t i = 0; i < images.size(); ++i)
        pows[i].push_back(
            KSeries::constant(field_, new_nvars, trunc_, AlgebraicNumber::one(field_)));
    KSeries acc(field_, new_nvars, trunc_);
    for (const auto& [e, c] : terms_) {
        KSeries term = KSeries::constant(field_, new_nvars, trunc_, c);
        for (size_t j = 0; j < e.size(); ++j) {
            int k = e[j];
            while (static_cast<int>(pows[j].size()) <= k)
                pows[j].push_back(pows[j].back() * images[j]);
            if (k > 0) term = term * pows[j][static_cast<size_t>(k)];
        }
        acc = acc + term;
    }
    return acc;
}

}  // namespace plf
