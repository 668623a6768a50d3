#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>

#include "plf/errors.hpp"
#include "plf/rational.hpp"

namespace plf {

// A valuation exponent: a rational number or +infinity. All p-adic
// magnitudes in the library travel as exponents of p so every comparison
// stays exact; +infinity is the valuation of zero and absorbs addition.
class ValExp {
public:
    ValExp() : inf_(false), v_(0) {}
    ValExp(const mpq_class& v) : inf_(false), v_(v) {}
    ValExp(long v) : inf_(false), v_(v) {}

    static ValExp infinity() {
        ValExp e;
        e.inf_ = true;
        return e;
    }

    bool is_infinity() const { return inf_; }

    const mpq_class& value() const {
        if (inf_) throw DomainError("value() on infinite valuation exponent");
        return v_;
    }

    friend ValExp operator+(const ValExp& a, const ValExp& b) {
        if (a.inf_ || b.inf_) return infinity();
        return ValExp(a.v_ + b.v_);
    }

    ValExp operator-() const {
        if (inf_) throw DomainError("negating infinite valuation exponent");
        return ValExp(-v_);
    }

    friend ValExp operator-(const ValExp& a, const mpq_class& b) {
        if (a.inf_) return infinity();
        return ValExp(a.v_ - b);
    }

    // Scaling by a nonnegative integer count (k copies of a zero stay zero).
    friend ValExp operator*(long k, const ValExp& a) {
        if (k == 0) return ValExp(0);
        if (a.inf_) return infinity();
        return ValExp(k * a.v_);
    }

    friend bool operator==(const ValExp& a, const ValExp& b) {
        if (a.inf_ != b.inf_) return false;
        return a.inf_ || a.v_ == b.v_;
    }

    friend bool operator<(const ValExp& a, const ValExp& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.v_ < b.v_;
    }
    friend bool operator>(const ValExp& a, const ValExp& b) { return b < a; }
    friend bool operator<=(const ValExp& a, const ValExp& b) { return !(b < a); }
    friend bool operator>=(const ValExp& a, const ValExp& b) { return !(a < b); }

    static ValExp min(const ValExp& a, const ValExp& b) { return a < b ? a : b; }
    static ValExp max(const ValExp& a, const ValExp& b) { return a < b ? b : a; }

    std::string str() const { return inf_ ? "+inf" : rational_to_string(v_); }

private:
    bool inf_;
    mpq_class v_;
};

}  // namespace plf
