#include <algorithm>

#include "plf/numfield.hpp"

namespace plf {

namespace {

// x_j = sum_k y_{j,k} theta^k; returns the column of integer coordinates of
// a * theta^k for the restriction-of-scalars matrix.
ZVec mul_column(const AlgebraicNumber& a, long k, const FieldPtr& K) {
    const long d = K->degree();
    const ZMat& pt = K->power_table();
    ZVec out(static_cast<size_t>(d), 0);
    for (long i = 0; i < d; ++i) {
        mpq_class ci = a.coords()[static_cast<size_t>(i)];
        if (ci == 0) continue;
        if (ci.get_den() != 1) throw InputError("siegel_solve requires O_K coefficients");
        for (long j = 0; j < d; ++j)
            out[static_cast<size_t>(j)] +=
                ci.get_num() * pt[static_cast<size_t>(i + k)][static_cast<size_t>(j)];
    }
    return out;
}

std::vector<AlgebraicNumber> decode(const ZVec& y, const FieldPtr& K, size_t N) {
    const long d = K->degree();
    std::vector<AlgebraicNumber> out;
    for (size_t j = 0; j < N; ++j) {
        std::vector<mpq_class> coords(static_cast<size_t>(d));
        for (long k = 0; k < d; ++k)
            coords[static_cast<size_t>(k)] = mpq_class(y[j * static_cast<size_t>(d) +
                                                         static_cast<size_t>(k)]);
        out.emplace_back(K, std::move(coords));
    }
    return out;
}

bool is_zero_vec(const ZVec& y) {
    for (const auto& v : y)
        if (v != 0) return false;
    return true;
}

}  // namespace

SiegelResult siegel_solve(const std::vector<std::vector<AlgebraicNumber>>& forms,
                          mpfr_prec_t prec) {
    if (forms.empty()) throw BadParameters("siegel_solve needs at least one form");
    const size_t M = forms.size();
    const size_t N = forms[0].size();
    for (const auto& row : forms)
        if (row.size() != N) throw BadParameters("ragged form matrix");
    if (N <= M) throw BadParameters("siegel_solve requires more unknowns than forms");
    FieldPtr K = forms[0][0].field();
    const long d = K->degree();

    // Bombieri-Vaaler bound: (1/2) log|disc K| + M/(N-M) max_i h_{L2}(l_i)
    Interval max_hl2 = Interval::zero(prec);
    bool first = true;
    for (const auto& row : forms) {
        VectorHeights vh = heights_vector(row, prec);
        max_hl2 = first ? vh.h_l2 : Interval::max(max_hl2, vh.h_l2);
        first = false;
    }
    // the bound is nonnegative: |disc| >= 1 and h_L2 >= h_max, a projective
    // height; the max0 keeps the zero-height boundary decidable on intervals
    Interval bound =
        (Interval::log_q(mpq_class(abs(K->discriminant())), prec).mul_q(mpq_class(1, 2)) +
         max_hl2.mul_q(mpq_class(static_cast<long>(M), static_cast<long>(N - M))))
            .max0();

    // restriction of scalars to an integer system (M d) x (N d)
    ZMat A(M * static_cast<size_t>(d), ZVec(N * static_cast<size_t>(d), 0));
    for (size_t i = 0; i < M; ++i)
        for (size_t j = 0; j < N; ++j)
            for (long k = 0; k < d; ++k) {
                ZVec col = mul_column(forms[i][j], k, K);
                for (long r = 0; r < d; ++r)
                    A[i * static_cast<size_t>(d) + static_cast<size_t>(r)]
                     [j * static_cast<size_t>(d) + static_cast<size_t>(k)] = col[static_cast<size_t>(r)];
            }

    ZMat kernel = integer_kernel(A);
    if (kernel.empty()) throw NoSolutionFound("system has full rank over Z; no kernel");
    kernel = lll_reduce(std::move(kernel));

    auto check = [&](const ZVec& y) -> std::optional<SiegelResult> {
        if (is_zero_vec(y)) return std::nullopt;
        std::vector<AlgebraicNumber> sol = decode(y, K, N);
        // exact verification of the system
        for (const auto& row : forms) {
            AlgebraicNumber acc = AlgebraicNumber::zero(K);
            for (size_t j = 0; j < N; ++j) acc = acc + row[j] * sol[j];
            if (!acc.is_zero()) throw Error("kernel vector fails the system exactly");
        }
        VectorHeights vh = heights_vector(sol, prec);
        if (Interval::certainly_le(vh.h_plus, bound)) {
            SiegelResult r;
            r.solution = std::move(sol);
            r.h_plus = vh.h_plus;
            r.bound = bound;
            return r;
        }
        return std::nullopt;
    };

    long tried = 0;
    // single reduced basis vectors first, then small combinations
    for (const auto& y : kernel) {
        ++tried;
        if (auto r = check(y)) {
            r->candidates_tried = tried;
            return *r;
        }
    }
    const size_t kdim = kernel.size();
    const size_t combo_dims = std::min<size_t>(kdim, 8);
    std::vector<long> coeff(combo_dims, -1);
    auto advance = [&]() {
        for (auto& c : coeff) {
            if (c < 1) {
                ++c;
                return true;
            }
            c = -1;
        }
        return false;
    };
    do {
        ZVec y(kernel[0].size(), 0);
        for (size_t i = 0; i < combo_dims; ++i) {
            if (coeff[i] == 0) continue;
            for (size_t c = 0; c < y.size(); ++c) y[c] += coeff[i] * kernel[i][c];
        }
        ++tried;
        if (auto r = check(y)) {
            r->candidates_tried = tried;
            return *r;
        }
    } while (advance());
    // wider box over the first few vectors
    const size_t wide_dims = std::min<size_t>(kdim, 4);
    std::vector<long> wc(wide_dims, -3);
    auto advance_wide = [&]() {
        for (auto& c : wc) {
            if (c < 3) {
                ++c;
                return true;
            }
            c = -3;
        }
        return false;
    };
    do {
        ZVec y(kernel[0].size(), 0);
        for (size_t i = 0; i < wide_dims; ++i) {
            if (wc[i] == 0) continue;
            for (size_t c = 0; c < y.size(); ++c) y[c] += wc[i] * kernel[i][c];
        }
        ++tried;
        if (auto r = check(y)) {
            r->candidates_tried = tried;
            return *r;
        }
    } while (advance_wide());
    throw NoSolutionFound("no kernel vector met the Bombieri-Vaaler bound");
}

}  // namespace plf
