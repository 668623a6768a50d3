#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plf/numfield.hpp"
#include "test_util.hpp"

using namespace plf;
using namespace plf_test;

namespace {
FieldPtr Q() { return NumberField::rationals(); }
AlgebraicNumber rat(const FieldPtr& K, long q) { return AlgebraicNumber::from_rational(K, q); }

void check_solution(const std::vector<std::vector<AlgebraicNumber>>& forms,
                    const SiegelResult& r) {
    bool nonzero = false;
    for (const auto& x : r.solution) {
        REQUIRE(denominator(x) == 1);
        if (!x.is_zero()) nonzero = true;
    }
    REQUIRE(nonzero);
    for (const auto& row : forms) {
        AlgebraicNumber acc = AlgebraicNumber::zero(r.solution[0].field());
        for (size_t j = 0; j < row.size(); ++j) acc = acc + row[j] * r.solution[j];
        REQUIRE(acc.is_zero());
    }
    REQUIRE(Interval::certainly_le(r.h_plus, r.bound));
}
}  // namespace

TEST_CASE("single form x1 + x2") {
    auto K = Q();
    std::vector<std::vector<AlgebraicNumber>> forms{{rat(K, 1), rat(K, 1)}};
    auto r = siegel_solve(forms);
    check_solution(forms, r);
    CHECK(r.h_plus.contains_zero());  // (1, -1) has height zero
}

TEST_CASE("single form x1 + 2x2 + 3x3 admits a height-zero witness") {
    auto K = Q();
    std::vector<std::vector<AlgebraicNumber>> forms{{rat(K, 1), rat(K, 2), rat(K, 3)}};
    auto r = siegel_solve(forms);
    check_solution(forms, r);
    // exhaustive box search confirms a zero-height solution exists
    bool zero_height_exists = false;
    for (long a = -2; a <= 2; ++a)
        for (long b = -2; b <= 2; ++b)
            for (long c = -2; c <= 2; ++c) {
                if (a == 0 && b == 0 && c == 0) continue;
                if (a + 2 * b + 3 * c != 0) continue;
                if (std::abs(a) <= 1 && std::abs(b) <= 1 && std::abs(c) <= 1)
                    zero_height_exists = true;
            }
    CHECK(zero_height_exists);
    CHECK(r.h_plus.contains_zero());
}

TEST_CASE("M = N is rejected") {
    auto K = Q();
    std::vector<std::vector<AlgebraicNumber>> forms{{rat(K, 1), rat(K, 2)},
                                                    {rat(K, 3), rat(K, 4)}};
    CHECK_THROWS_AS(siegel_solve(forms), BadParameters);
}

TEST_CASE("non-integral coefficients are rejected") {
    auto K = Q();
    std::vector<std::vector<AlgebraicNumber>> forms{
        {AlgebraicNumber::from_rational(K, mpq_class(1, 2)), rat(K, 1), rat(K, 1)}};
    CHECK_THROWS_AS(siegel_solve(forms), InputError);
}

TEST_CASE("randomized systems over Q meet the Bombieri-Vaaler bound") {
    auto K = Q();
    for (int trial = 0; trial < 70; ++trial) {
        long N = rand_long(2, 8);
        long M = rand_long(1, N - 1);
        std::vector<std::vector<AlgebraicNumber>> forms;
        for (long i = 0; i < M; ++i) {
            std::vector<AlgebraicNumber> row;
            for (long j = 0; j < N; ++j) row.push_back(rat(K, rand_long(-9, 9)));
            forms.push_back(row);
        }
        auto r = siegel_solve(forms);
        check_solution(forms, r);
    }
}

TEST_CASE("randomized systems over a quadratic field") {
    auto K = NumberField::create({mpz_class(-2), mpz_class(0), mpz_class(1)});
    for (int trial = 0; trial < 30; ++trial) {
        long N = rand_long(2, 5);
        long M = rand_long(1, N - 1);
        std::vector<std::vector<AlgebraicNumber>> forms;
        for (long i = 0; i < M; ++i) {
            std::vector<AlgebraicNumber> row;
            for (long j = 0; j < N; ++j) {
                std::vector<mpq_class> coords{mpq_class(rand_long(-6, 6)),
                                              mpq_class(rand_long(-6, 6))};
                row.emplace_back(K, coords);
            }
            forms.push_back(row);
        }
        auto r = siegel_solve(forms);
        check_solution(forms, r);
    }
}
