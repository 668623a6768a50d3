#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "plf/numfield.hpp"

namespace plf {

using Expo = std::vector<int>;

long expo_total(const Expo& e);
// graded-lex enumeration of all exponent vectors in nvars with total degree
// <= max_total
std::vector<Expo> expo_list(int nvars, long max_total);
// all with total degree exactly deg
std::vector<Expo> expo_list_exact(int nvars, long deg);

// Sparse multivariate polynomial with AlgebraicNumber coefficients.
class KPoly {
public:
    KPoly() : field_(NumberField::rationals()), nvars_(0) {}
    KPoly(FieldPtr field, int nvars);
    static KPoly constant(const FieldPtr& f, int nvars, const AlgebraicNumber& c);
    static KPoly constant_q(const FieldPtr& f, int nvars, const mpq_class& c);
    static KPoly variable(const FieldPtr& f, int nvars, int index);
    static KPoly monomial(const FieldPtr& f, int nvars, const Expo& e, const AlgebraicNumber& c);

    const FieldPtr& field() const { return field_; }
    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    long total_degree() const;  // -1 for the zero polynomial
    long degree_in(int var) const;
    const std::map<Expo, AlgebraicNumber>& terms() const { return terms_; }
    AlgebraicNumber coeff(const Expo& e) const;
    std::vector<AlgebraicNumber> coefficient_vector() const;  // deterministic order

    void add_term(const Expo& e, const AlgebraicNumber& c);

    friend KPoly operator+(const KPoly& a, const KPoly& b);
    friend KPoly operator-(const KPoly& a, const KPoly& b);
    friend KPoly operator*(const KPoly& a, const KPoly& b);
    KPoly operator-() const;
    KPoly scale(const AlgebraicNumber& c) const;
    KPoly scale_q(const mpq_class& c) const;
    friend bool operator==(const KPoly& a, const KPoly& b);

    KPoly partial_derivative(int var) const;
    AlgebraicNumber evaluate(const std::vector<AlgebraicNumber>& point) const;
    // fix some variables to numbers, keep others symbolic
    KPoly partial_evaluate(const std::vector<std::optional<AlgebraicNumber>>& values) const;

private:
    FieldPtr field_;
    int nvars_;
    std::map<Expo, AlgebraicNumber> terms_;
};

// Heights of the coefficient vector of a polynomial (K-relative, like
// heights_vector). The zero polynomial has all four heights zero.
VectorHeights poly_height(const KPoly& P, mpfr_prec_t prec = Interval::kDefaultPrec);

// Truncated multivariate power series (total degree <= trunc) over K.
class KSeries {
public:
    KSeries() : field_(NumberField::rationals()), nvars_(0), trunc_(0) {}
    KSeries(FieldPtr field, int nvars, long trunc);
    static KSeries zero(const FieldPtr& f, int nvars, long trunc);
    static KSeries constant(const FieldPtr& f, int nvars, long trunc, const AlgebraicNumber& c);
    static KSeries variable(const FieldPtr& f, int nvars, int index, long trunc);
    static KSeries from_poly(const KPoly& p, long trunc);

    const FieldPtr& field() const { return field_; }
    int nvars() const { return nvars_; }
    long trunc() const { return trunc_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Expo, AlgebraicNumber>& terms() const { return terms_; }
    AlgebraicNumber coeff(const Expo& e) const;
    AlgebraicNumber constant_term() const;

    void add_term(const Expo& e, const AlgebraicNumber& c);

    friend KSeries operator+(const KSeries& a, const KSeries& b);
    friend KSeries operator-(const KSeries& a, const KSeries& b);
    friend KSeries operator*(const KSeries& a, const KSeries& b);
    KSeries operator-() const;
    KSeries scale(const AlgebraicNumber& c) const;
    friend bool operator==(const KSeries& a, const KSeries& b);

    KSeries truncate(long new_trunc) const;
    KSeries derivative(int var) const;  // truncation drops by one
    // multiplicative inverse; requires an invertible constant term
    KSeries inverse() const;
    // substitute series arguments into a polynomial in N variables
    static KSeries compose_poly(const KPoly& P, const std::vector<KSeries>& args);
    // linear change of variables: old var j = sum_i B[j][i] * new var i
    KSeries compose_linear(const std::vector<std::vector<AlgebraicNumber>>& B,
                           int new_nvars) const;

private:
    FieldPtr field_;
    int nvars_;
    long trunc_;
    std::map<Expo, AlgebraicNumber> terms_;
};

}  // namespace plf
