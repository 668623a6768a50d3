#pragma once

#include <random>

#include "plf/numfield.hpp"

namespace plf_test {

using namespace plf;

// deterministic rng for reproducible suites
inline std::mt19937_64& rng() {
    static std::mt19937_64 r(0x5eed5eedULL);
    return r;
}

inline long rand_long(long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    return d(rng());
}

inline mpq_class rand_rational(long max_num, long max_den) {
    long num = rand_long(-max_num, max_num);
    long den = rand_long(1, max_den);
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

inline mpq_class rand_nonzero_rational(long max_num, long max_den) {
    for (;;) {
        mpq_class q = rand_rational(max_num, max_den);
        if (q != 0) return q;
    }
}

inline AlgebraicNumber rand_element(const FieldPtr& K, long max_num, long max_den) {
    std::vector<mpq_class> coords;
    for (long i = 0; i < K->degree(); ++i) coords.push_back(rand_rational(max_num, max_den));
    return AlgebraicNumber(K, std::move(coords));
}

inline AlgebraicNumber rand_nonzero_element(const FieldPtr& K, long max_num, long max_den) {
    for (;;) {
        AlgebraicNumber x = rand_element(K, max_num, max_den);
        if (!x.is_zero()) return x;
    }
}

}  // namespace plf_test
