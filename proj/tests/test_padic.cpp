#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plf/padic.hpp"
#include "test_util.hpp"

using namespace plf;
using namespace plf_test;

TEST_CASE("valuation of integers and rationals") {
    CHECK(PadicNumber::from_integer(2, 12, 30).valuation().value() == 2);
    CHECK(PadicNumber::zero(2).valuation().is_infinity());
    CHECK(PadicNumber::from_rational(2, mpq_class(3, 4), 30).valuation().value() == -2);
}

TEST_CASE("r_p exponent") {
    CHECK(r_p_exponent(2) == 1);
    CHECK(r_p_exponent(3) == mpq_class(1, 2));
    CHECK(r_p_exponent(5) == mpq_class(1, 4));
}

TEST_CASE("valuation arithmetic laws over random samples") {
    for (int p : {2, 3, 5, 7}) {
        for (int i = 0; i < 200; ++i) {
            mpq_class a = rand_nonzero_rational(50, 20);
            mpq_class b = rand_nonzero_rational(50, 20);
            auto x = PadicNumber::from_rational(p, a, 40);
            auto y = PadicNumber::from_rational(p, b, 40);
            mpq_class va(valuation_q(a, p)), vb(valuation_q(b, p));
            CHECK((x * y).valuation().value() == va + vb);
            mpq_class sum = a + b;
            PadicNumber z = x + y;
            if (sum == 0) {
                CHECK(!z.is_provably_nonzero());
            } else {
                CHECK(z.valuation_lower_bound() >= ValExp::min(ValExp(va), ValExp(vb)));
                if (va != vb) CHECK(z.valuation().value() == std::min(va, vb));
                CHECK(z.valuation_lower_bound().value() == valuation_q(sum, p));
            }
        }
    }
}

TEST_CASE("log_p on the torsion and identity cosets") {
    // x = 1: the result is zero to the full working precision
    auto one = PadicNumber::from_integer(5, 1, 40);
    auto l1 = log_p(one);
    CHECK(!l1.is_provably_nonzero());
    CHECK(l1.valuation_lower_bound() >= ValExp(40L));

    // x = -1 at p = 2: torsion, 2 log(-1) = log 1 = 0
    auto minus_one = PadicNumber::from_integer(2, -1, 40);
    auto lm = log_p(minus_one);
    CHECK(!lm.is_provably_nonzero());
    CHECK(lm.valuation_lower_bound() >= ValExp(35L));
}

TEST_CASE("log_p of 1+p and the exp round trip") {
    for (long p : {3L, 5L, 7L}) {
        auto x = PadicNumber::from_integer(p, 1 + p, 40);
        auto l = log_p(x);
        CHECK(l.valuation().value() == 1);
        auto back = exp_p(l) - x;
        CHECK(!back.is_provably_nonzero());
        CHECK(back.valuation_lower_bound() >= ValExp(38L));
    }
}

TEST_CASE("log_p domain") {
    CHECK_THROWS_AS(log_p(PadicNumber::from_integer(5, 2, 30)), DomainError);
    CHECK_THROWS_AS(log_p(PadicNumber::zero(5)), DomainError);
}

TEST_CASE("exp_p basic values and domain") {
    auto e0 = exp_p(PadicNumber::zero(3));
    CHECK(e0.valuation().value() == 0);

    auto z = PadicNumber::from_integer(3, 9, 40);
    auto e = exp_p(z);
    CHECK((e - PadicNumber::one(3, 40)).valuation().value() == 2);
    auto rt = log_p(e) - z;
    CHECK(!rt.is_provably_nonzero());

    // boundary v(z) = 1/(p-1) excluded
    CHECK_THROWS_AS(exp_p(PadicNumber::from_integer(2, 2, 30)), DomainError);
    CHECK_THROWS_AS(exp_p(PadicNumber::from_integer(3, 1, 30)), DomainError);
}

TEST_CASE("round trip v(log(exp z) - z) over 500 random points") {
    int count = 0;
    while (count < 500) {
        long p = std::vector<long>{2, 3, 5, 7}[static_cast<size_t>(rand_long(0, 3))];
        long vmin = p == 2 ? 2 : 1;
        long v = rand_long(vmin, vmin + 3);
        mpz_class unit = rand_long(1, 1000);
        if (unit % p == 0) continue;
        auto z = PadicNumber::from_unit(p, mpq_class(v), unit, 30);
        auto diff = log_p(exp_p(z)) - z;
        CHECK(!diff.is_provably_nonzero());
        CHECK(diff.valuation_lower_bound() >= ValExp(mpq_class(v + 28)));
        ++count;
    }
}

TEST_CASE("hensel lift examples") {
    auto r = hensel_lift({mpz_class(-2), mpz_class(0), mpz_class(1)}, 3, 7, 25);
    auto residual = r * r - PadicNumber::from_integer(7, 2, 25);
    CHECK(!residual.is_provably_nonzero());
    CHECK(residual.valuation_lower_bound() >= ValExp(25L));

    auto five = hensel_lift({mpz_class(-5), mpz_class(1)}, 2, 3, 20);
    auto diff = five - PadicNumber::from_integer(3, 5, 20);
    CHECK(!diff.is_provably_nonzero());

    CHECK_THROWS_AS(hensel_lift({mpz_class(-2), mpz_class(0), mpz_class(1)}, 0, 2, 10),
                    NotSimpleRoot);
}

TEST_CASE("factorial valuation matches Legendre up to 10^4") {
    for (long p : {2L, 3L, 5L, 7L}) {
        mpz_class pz(p);
        mpz_class acc = 0;
        for (unsigned long n = 1; n <= 10000; ++n) {
            acc += valuation_z(mpz_class(n), pz);
            mpz_class legendre = factorial_valuation(n, pz);
            REQUIRE(acc == legendre);
            // v(1/n!) >= -(n-1)/(p-1)
            mpq_class bound(n - 1, p - 1);
            bound.canonicalize();
            REQUIRE(mpq_class(legendre) <= bound);
            // Legendre via digit sums: v(n!) = (n - s_p(n))/(p-1)
            REQUIRE(legendre * (p - 1) == mpz_class(n) - digit_sum(mpz_class(n), pz));
        }
    }
}

TEST_CASE("division and inversion") {
    auto x = PadicNumber::from_rational(5, mpq_class(7, 3), 30);
    auto y = x * x.inverse();
    auto diff = y - PadicNumber::one(5, 30);
    CHECK(!diff.is_provably_nonzero());
    CHECK_THROWS_AS(PadicNumber::zero(5).inverse(), ZeroElement);
}

TEST_CASE("digits round trip the unit part") {
    auto x = PadicNumber::from_integer(7, 123456, 10);
    auto d = x.digits();
    CHECK(d.size() == 10);
    mpz_class rebuilt = 0;
    for (auto it = d.rbegin(); it != d.rend(); ++it) rebuilt = rebuilt * 7 + *it;
    CHECK(rebuilt == x.unit());
    CHECK(d[0] != 0);
}
