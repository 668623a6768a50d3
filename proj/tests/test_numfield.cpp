#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plf/numfield.hpp"
#include "test_util.hpp"

using namespace plf;
using namespace plf_test;

namespace {
FieldPtr Q() { return NumberField::rationals(); }
FieldPtr Qsqrt2() {
    static FieldPtr K = NumberField::create({mpz_class(-2), mpz_class(0), mpz_class(1)});
    return K;
}
AlgebraicNumber rat(const FieldPtr& K, const mpq_class& q) {
    return AlgebraicNumber::from_rational(K, q);
}
}  // namespace

TEST_CASE("field construction and rejection") {
    auto K = Qsqrt2();
    CHECK(K->degree() == 2);
    CHECK(K->discriminant() == 8);
    CHECK(K->r1() == 2);
    CHECK(K->r2() == 0);

    // x^2 - 5: Z[sqrt 5] is not maximal at 2
    CHECK_THROWS_AS(NumberField::create({mpz_class(-5), mpz_class(0), mpz_class(1)}), InputError);
    // x^2 - 4 is reducible
    CHECK_THROWS_AS(NumberField::create({mpz_class(-4), mpz_class(0), mpz_class(1)}), InputError);
    // x^2 + 1: complex quadratic, supported
    auto Ki = NumberField::create({mpz_class(1), mpz_class(0), mpz_class(1)});
    CHECK(Ki->r2() == 1);
    CHECK(Ki->discriminant() == -4);
    // x^2 + x + 1: third cyclotomic
    auto K3 = NumberField::create({mpz_class(1), mpz_class(1), mpz_class(1)});
    CHECK(K3->discriminant() == -3);
    // x^3 - 2 has a complex pair: beyond desk scale
    CHECK_THROWS_AS(NumberField::create({mpz_class(-2), mpz_class(0), mpz_class(0), mpz_class(1)}),
                    InputError);
    // totally real cubic x^3 - 3x - 1 is accepted
    auto K33 = NumberField::create({mpz_class(-1), mpz_class(-3), mpz_class(0), mpz_class(1)});
    CHECK(K33->r1() == 3);
    CHECK(K33->discriminant() == 81);
}

TEST_CASE("places and local degrees") {
    auto K = Qsqrt2();
    auto p2 = K->places_above(2);
    REQUIRE(p2.size() == 1);
    CHECK(p2[0].e == 2);
    CHECK(p2[0].f == 1);
    auto p3 = K->places_above(3);  // inert
    REQUIRE(p3.size() == 1);
    CHECK(p3[0].e == 1);
    CHECK(p3[0].f == 2);
    auto p7 = K->places_above(7);  // split: 3^2 = 2 mod 7
    REQUIRE(p7.size() == 2);
    CHECK(p7[0].e * p7[0].f + p7[1].e * p7[1].f == 2);
    CHECK(K->archimedean_places().size() == 2);
}

TEST_CASE("normalized absolute values") {
    auto x = rat(Q(), mpq_class(3, 4));
    auto arch = Q()->archimedean_places()[0];
    Interval l = normalized_abs_log(x, arch);
    Interval target = Interval::log_q(mpq_class(3, 4));
    CHECK(!Interval::certainly_lt(l, target));
    CHECK(!Interval::certainly_lt(target, l));

    auto v2 = Q()->places_above(2)[0];
    Interval l2 = normalized_abs_log(x, v2);  // |3/4|_2 = 4
    Interval t2 = Interval::log_q(mpq_class(4));
    CHECK(!Interval::certainly_lt(l2, t2));
    CHECK(!Interval::certainly_lt(t2, l2));

    // |sqrt2|_v = 1/2 at the ramified place above 2
    auto K = Qsqrt2();
    auto s2 = AlgebraicNumber::generator(K);
    Interval lv = normalized_abs_log(s2, K->places_above(2)[0]);
    Interval tv = -Interval::log_q(mpq_class(2));
    CHECK(!Interval::certainly_lt(lv, tv));
    CHECK(!Interval::certainly_lt(tv, lv));

    CHECK_THROWS_AS(normalized_abs_log(rat(Q(), 0), arch), ZeroElement);
}

TEST_CASE("product formula: examples and randomized audits") {
    auto pf = product_formula_check(rat(Q(), mpq_class(3, 4)));
    CHECK(pf.pass);
    CHECK(pf.exact);

    auto K = Qsqrt2();
    auto unit = AlgebraicNumber::one(K) + AlgebraicNumber::generator(K);
    auto pf2 = product_formula_check(unit);
    CHECK(pf2.pass);
    CHECK(pf2.width < 1e-30);

    CHECK_THROWS_AS(product_formula_check(rat(Q(), 0)), ZeroElement);

    for (int i = 0; i < 300; ++i) {
        auto v = product_formula_check(rat(Q(), rand_nonzero_rational(500, 200)));
        REQUIRE(v.pass);
        REQUIRE(v.exact);
    }
    for (int i = 0; i < 300; ++i) {
        auto v = product_formula_check(rand_nonzero_element(K, 30, 12));
        REQUIRE(v.pass);
        REQUIRE(v.width < 1e-30);
    }
}

TEST_CASE("absolute height examples and the rational oracle") {
    CHECK(height(rat(Q(), 0)).contains_zero());
    CHECK(height(rat(Q(), 1)).contains_zero());
    for (int i = 0; i < 300; ++i) {
        mpq_class q = rand_nonzero_rational(400, 150);
        Interval h = height(rat(Q(), q));
        mpz_class m = std::max(mpz_class(abs(q.get_num())), mpz_class(q.get_den()));
        Interval oracle = Interval::log_q(mpq_class(m));
        CHECK(!Interval::certainly_lt(h, oracle));
        CHECK(!Interval::certainly_lt(oracle, h));
    }
    // h(sqrt 2) = (1/2) log 2
    Interval hs = height(AlgebraicNumber::generator(Qsqrt2()));
    Interval target = Interval::log_q(mpq_class(2)).mul_q(mpq_class(1, 2));
    CHECK(!Interval::certainly_lt(hs, target));
    CHECK(!Interval::certainly_lt(target, hs));
}

TEST_CASE("vector heights: fixed points") {
    auto K = Q();
    {
        std::vector<AlgebraicNumber> e1{rat(K, 1), rat(K, 0), rat(K, 0)};
        auto vh = heights_vector(e1);
        CHECK(vh.h_max.contains_zero());
        CHECK(vh.h_l2.contains_zero());
        CHECK(vh.h_plus.contains_zero());
        CHECK(vh.h_l2_plus.contains_zero());
    }
    {
        std::vector<AlgebraicNumber> x{rat(K, 3), rat(K, 4)};
        auto vh = heights_vector(x);
        Interval l4 = Interval::log_q(mpq_class(4));
        CHECK(!Interval::certainly_lt(vh.h_max, l4));
        CHECK(!Interval::certainly_lt(l4, vh.h_max));
    }
    {
        std::vector<AlgebraicNumber> x{rat(K, 1), rat(K, 1)};
        auto vh = heights_vector(x);
        CHECK(vh.h_max.contains_zero());
        Interval half_log2 = Interval::log_q(mpq_class(2)).mul_q(mpq_class(1, 2));
        CHECK(!Interval::certainly_lt(vh.h_l2, half_log2));
        CHECK(!Interval::certainly_lt(half_log2, vh.h_l2));
    }
}

TEST_CASE("height chain and height laws on random data") {
    for (int i = 0; i < 400; ++i) {
        FieldPtr K = (i % 2 == 0) ? Q() : Qsqrt2();
        long n = rand_long(1, 6);
        std::vector<AlgebraicNumber> xs;
        for (long j = 0; j < n; ++j) xs.push_back(rand_element(K, 25, 10));
        auto vh = heights_vector(xs);
        long d = K->degree();
        mpq_class half_d(d, 2);
        half_d.canonicalize();
        Interval slack = Interval::log_q(mpq_class(n + 1)).mul_q(half_d);
        REQUIRE(!Interval::certainly_lt(vh.h_l2, vh.h_max));
        REQUIRE(!Interval::certainly_lt(vh.h_max + slack, vh.h_l2));
        REQUIRE(!Interval::certainly_lt(vh.h_l2_plus, vh.h_plus));
        REQUIRE(!Interval::certainly_lt(vh.h_plus + slack, vh.h_l2_plus));
    }
    // h(ab) <= h(a) + h(b); h(sum a_i) <= log r + sum h(a_i)
    for (int i = 0; i < 300; ++i) {
        FieldPtr K = (i % 2 == 0) ? Q() : Qsqrt2();
        auto a = rand_element(K, 30, 12);
        auto b = rand_element(K, 30, 12);
        REQUIRE(!Interval::certainly_lt(height(a) + height(b), height(a * b)));
        long r = rand_long(2, 4);
        std::vector<AlgebraicNumber> terms;
        AlgebraicNumber sum = AlgebraicNumber::zero(K);
        Interval rhs = Interval::log_q(mpq_class(r));
        for (long j = 0; j < r; ++j) {
            auto x = rand_element(K, 25, 10);
            terms.push_back(x);
            sum = sum + x;
            rhs += height(x);
        }
        REQUIRE(!Interval::certainly_lt(rhs, height(sum)));
    }
}

TEST_CASE("liouville inequality examples and randomized audit") {
    auto half = rat(Q(), mpq_class(1, 2));
    auto v2 = Q()->places_above(2)[0];
    CHECK(liouville_check(half, v2).pass);
    CHECK(liouville_check(half, Q()->archimedean_places()[0]).pass);  // equality case

    for (int i = 0; i < 250; ++i) {
        FieldPtr K = (i % 2 == 0) ? Q() : Qsqrt2();
        auto x = rand_nonzero_element(K, 40, 15);
        for (const auto& v : K->archimedean_places()) REQUIRE(liouville_check(x, v).pass);
        // finite support places
        mpz_class den = denominator(x);
        AlgebraicNumber xi = x * rat(K, mpq_class(den));
        mpq_class nm = xi.norm();
        std::vector<mpz_class> primes;
        for (const auto& [p, e] : factor_integer(den)) primes.push_back(p);
        for (const auto& [p, e] : factor_integer(nm.get_num())) primes.push_back(p);
        for (const auto& p : primes)
            for (const auto& v : K->places_above(p)) REQUIRE(liouville_check(x, v).pass);
    }
}

TEST_CASE("denominator and its height bound") {
    auto d1 = denominator_with_check(rat(Q(), mpq_class(3, 2)));
    CHECK(d1.delta == 2);
    CHECK(d1.lemma_holds);
    CHECK(denominator(rat(Q(), 7)) == 1);

    auto K = Qsqrt2();
    auto x = (AlgebraicNumber::one(K) + AlgebraicNumber::generator(K)) * rat(K, mpq_class(1, 3));
    CHECK(denominator(x) == 3);
    CHECK(denominator_with_check(x).lemma_holds);

    // minimality by divisor scan
    for (int i = 0; i < 100; ++i) {
        auto y = rand_nonzero_element(K, 20, 12);
        mpz_class delta = denominator(y);
        AlgebraicNumber dy = y * rat(K, mpq_class(delta));
        REQUIRE(denominator(dy) == 1);
        for (mpz_class dv = 1; dv < delta; ++dv) {
            if (delta % dv != 0) continue;
            AlgebraicNumber scaled = y * rat(K, mpq_class(dv));
            REQUIRE(denominator(scaled) != 1);
        }
        REQUIRE(denominator_with_check(y).lemma_holds);
    }
}

TEST_CASE("powers of rational points: h(x^k) = k h(x)") {
    for (int i = 0; i < 100; ++i) {
        mpq_class q = rand_nonzero_rational(30, 15);
        if (q == 1 || q == -1) continue;
        auto x = rat(Q(), q);
        long k = rand_long(1, 5);
        Interval lhs = height(x.pow(static_cast<unsigned long>(k)));
        Interval rhs = height(x).mul_q(mpq_class(k));
        REQUIRE(!Interval::certainly_lt(lhs, rhs));
        REQUIRE(!Interval::certainly_lt(rhs, lhs));
        // the quadratic form of the height inflation is a valid upper bound
        Interval quad = height(x).mul_q(mpq_class(k) * mpq_class(k));
        REQUIRE(!Interval::certainly_lt(quad, lhs));
    }
}

TEST_CASE("element arithmetic closes and inverts") {
    auto K = Qsqrt2();
    for (int i = 0; i < 100; ++i) {
        auto a = rand_nonzero_element(K, 20, 9);
        auto b = rand_nonzero_element(K, 20, 9);
        CHECK((a * b) / b == a);
        CHECK(a * a.inverse() == AlgebraicNumber::one(K));
        CHECK((a + b) - b == a);
    }
    // norm of 1 + sqrt2 is -1
    CHECK((AlgebraicNumber::one(K) + AlgebraicNumber::generator(K)).norm() == -1);
}
