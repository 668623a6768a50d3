#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plf/intlinalg.hpp"
#include "test_util.hpp"

using namespace plf;
using namespace plf_test;

namespace {
ZMat rand_zmat(size_t m, size_t n, long bound) {
    ZMat A(m, ZVec(n));
    for (auto& row : A)
        for (auto& x : row) x = rand_long(-bound, bound);
    return A;
}

bool is_zero_row(const ZVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}
}  // namespace

TEST_CASE("integer kernel annihilates and is saturated") {
    // saturation spot check: kernel of [2 4] is generated by (2, -1)
    ZMat A{{mpz_class(2), mpz_class(4)}};
    ZMat k = integer_kernel(A);
    REQUIRE(k.size() == 1);
    CHECK(abs(k[0][0]) == 2);
    CHECK(abs(k[0][1]) == 1);

    for (int trial = 0; trial < 100; ++trial) {
        size_t m = static_cast<size_t>(rand_long(1, 3));
        size_t n = static_cast<size_t>(rand_long(m + 1, 6));
        ZMat B = rand_zmat(m, n, 9);
        ZMat ker = integer_kernel(B);
        for (const auto& v : ker) {
            CHECK(!is_zero_row(v));
            for (size_t i = 0; i < m; ++i) {
                mpz_class dot = 0;
                for (size_t j = 0; j < n; ++j) dot += B[i][j] * v[j];
                REQUIRE(dot == 0);
            }
        }
        // rank-nullity over Q
        QMat Bq(m, QVec(n));
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < n; ++j) Bq[i][j] = mpq_class(B[i][j]);
        CHECK(static_cast<long>(ker.size()) == static_cast<long>(n) - rank(Bq));
    }
}

TEST_CASE("row HNF is echelon with positive pivots and preserves the lattice") {
    for (int trial = 0; trial < 50; ++trial) {
        ZMat B = rand_zmat(4, 4, 12);
        ZMat H = hnf_rows(B);
        // pivots strictly to the right as rows descend; positive pivots
        long last = -1;
        for (const auto& row : H) {
            size_t pc = 0;
            while (pc < row.size() && row[pc] == 0) ++pc;
            REQUIRE(pc < row.size());
            CHECK(static_cast<long>(pc) > last);
            CHECK(row[pc] > 0);
            last = static_cast<long>(pc);
        }
        // every original row is in the lattice spanned by H
        for (const auto& row : B) CHECK(in_lattice(H, row));
    }
}

TEST_CASE("in_lattice membership") {
    ZMat H = hnf_rows({{mpz_class(2), mpz_class(1)}, {mpz_class(0), mpz_class(3)}});
    CHECK(in_lattice(H, {mpz_class(2), mpz_class(1)}));
    CHECK(in_lattice(H, {mpz_class(2), mpz_class(4)}));
    CHECK(!in_lattice(H, {mpz_class(1), mpz_class(0)}));
}

TEST_CASE("LLL keeps the lattice and shortens the basis") {
    for (int trial = 0; trial < 30; ++trial) {
        size_t k = static_cast<size_t>(rand_long(2, 4));
        ZMat B = rand_zmat(k, k + 1, 15);
        QMat Bq(k, QVec(k + 1));
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k + 1; ++j) Bq[i][j] = mpq_class(B[i][j]);
        if (rank(Bq) != static_cast<long>(k)) continue;
        ZMat R = lll_reduce(B);
        REQUIRE(R.size() == k);
        // same lattice: HNFs agree
        CHECK(hnf_rows(B) == hnf_rows(R));
        // first vector no longer than the shortest input row
        auto norm2 = [](const ZVec& v) {
            mpz_class s = 0;
            for (const auto& x : v) s += x * x;
            return s;
        };
        mpz_class shortest_in = norm2(B[0]);
        for (const auto& row : B) shortest_in = std::min(shortest_in, norm2(row));
        CHECK(norm2(R[0]) <= shortest_in);
    }
}

TEST_CASE("determinant by Bareiss") {
    CHECK(determinant({{mpz_class(1), mpz_class(2)}, {mpz_class(3), mpz_class(4)}}) == -2);
    CHECK(determinant({{mpz_class(2)}}) == 2);
    CHECK(determinant({{mpz_class(0), mpz_class(1)}, {mpz_class(1), mpz_class(0)}}) == -1);
    // singular
    CHECK(determinant({{mpz_class(1), mpz_class(2)}, {mpz_class(2), mpz_class(4)}}) == 0);
    // cofactor cross-check on random 4x4
    for (int trial = 0; trial < 20; ++trial) {
        ZMat A = rand_zmat(4, 4, 8);
        mpz_class det = determinant(A);
        // expansion along the first row
        mpz_class acc = 0;
        for (size_t j = 0; j < 4; ++j) {
            ZMat minor;
            for (size_t r = 1; r < 4; ++r) {
                ZVec row;
                for (size_t c = 0; c < 4; ++c)
                    if (c != j) row.push_back(A[r][c]);
                minor.push_back(row);
            }
            mpz_class m = determinant(minor);
            acc += ((j % 2 == 0) ? 1 : -1) * A[0][j] * m;
        }
        REQUIRE(det == acc);
    }
}

TEST_CASE("rational kernel") {
    QMat A{{mpq_class(2), mpq_class(1)}};
    QMat k = rational_kernel(A);
    REQUIRE(k.size() == 1);
    CHECK(2 * k[0][0] + k[0][1] == 0);
    // integer-scaled and coprime
    CHECK(k[0][0].get_den() == 1);
    CHECK(k[0][1].get_den() == 1);
}
