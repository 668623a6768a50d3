#include "plf/intlinalg.hpp"

#include <algorithm>

#include "plf/errors.hpp"

namespace plf {

namespace {

size_t cols_of(const ZMat& A) { return A.empty() ? 0 : A[0].size(); }

}  // namespace

ZMat integer_kernel(const ZMat& A) {
    const size_t m = A.size();
    const size_t n = cols_of(A);
    // Column-reduce A while tracking the unimodular transform U: A U has a
    // staircase of pivot columns; kernel basis = columns of U over the zero
    // columns of A U. Work on transposes so everything is row operations.
    ZMat W(n, ZVec(m, 0));  // W = A^T
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < n; ++j) W[j][i] = A[i][j];
    ZMat U(n, ZVec(n, 0));
    for (size_t i = 0; i < n; ++i) U[i][i] = 1;

    size_t row = 0;
    for (size_t col = 0; col < m && row < n; ++col) {
        // eliminate entries in W[row..][col] by gcd steps
        for (;;) {
            size_t piv = n;
            for (size_t r = row; r < n; ++r)
                if (W[r][col] != 0 &&
                    (piv == n || abs(W[r][col]) < abs(W[piv][col])))
                    piv = r;
            if (piv == n) break;  // column cleared below row
            std::swap(W[piv], W[row]);
            std::swap(U[piv], U[row]);
            bool all_zero = true;
            for (size_t r = row + 1; r < n; ++r) {
                if (W[r][col] == 0) continue;
                mpz_class q = W[r][col] / W[row][col];  // truncated division
                if (q != 0) {
                    for (size_t c = col; c < m; ++c) W[r][c] -= q * W[row][c];
                    for (size_t c = 0; c < n; ++c) U[r][c] -= q * U[row][c];
                }
                if (W[r][col] != 0) all_zero = false;
            }
            if (all_zero) {
                ++row;
                break;
            }
        }
    }
    ZMat kernel;
    for (size_t r = row; r < n; ++r) kernel.push_back(U[r]);
    return kernel;
}

ZMat hnf_rows(ZMat B) {
    if (B.empty()) return B;
    const size_t n = B[0].size();
    size_t row = 0;
    for (size_t col = 0; col < n && row < B.size(); ++col) {
        for (;;) {
            size_t piv = B.size();
            for (size_t r = row; r < B.size(); ++r)
                if (B[r][col] != 0 && (piv == B.size() || abs(B[r][col]) < abs(B[piv][col])))
                    piv = r;
            if (piv == B.size()) break;
            std::swap(B[piv], B[row]);
            bool cleared = true;
            for (size_t r = row + 1; r < B.size(); ++r) {
                if (B[r][col] == 0) continue;
                mpz_class q = B[r][col] / B[row][col];
                if (q != 0)
                    for (size_t c = 0; c < n; ++c) B[r][c] -= q * B[row][c];
                if (B[r][col] != 0) cleared = false;
            }
            if (cleared) {
                if (B[row][col] < 0)
                    for (size_t c = 0; c < n; ++c) B[row][c] = -B[row][c];
                // reduce entries above the pivot into [0, pivot)
                for (size_t r = 0; r < row; ++r) {
                    mpz_class q;
                    mpz_fdiv_q(q.get_mpz_t(), B[r][col].get_mpz_t(), B[row][col].get_mpz_t());
                    if (q != 0)
                        for (size_t c = 0; c < n; ++c) B[r][c] -= q * B[row][c];
                }
                ++row;
                break;
            }
        }
    }
    B.resize(row);
    return B;
}

bool in_lattice(const ZMat& H, const ZVec& v) {
    // H in row HNF; attempt to express v as an integer combination.
    ZVec w = v;
    const size_t n = w.size();
    size_t r = 0;
    for (size_t col = 0; col < n; ++col) {
        if (r < H.size()) {
            // find pivot column of row r
            size_t pc = 0;
            while (pc < n && H[r][pc] == 0) ++pc;
            if (pc == col) {
                mpz_class q, rem;
                mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), w[col].get_mpz_t(),
                            H[r][pc].get_mpz_t());
                if (rem != 0) return false;
                for (size_t c = col; c < n; ++c) w[c] -= q * H[r][c];
                ++r;
                continue;
            }
        }
        if (w[col] != 0) return false;
    }
    return true;
}

ZMat lll_reduce(ZMat B) {
    const size_t k = B.size();
    if (k <= 1) return B;
    const size_t n = B[0].size();
    auto dotzz = [&](const ZVec& a, const ZVec& b) {
        mpz_class s = 0;
        for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
        return s;
    };

    // rational Gram-Schmidt with incremental updates (Cohen Alg. 2.6.3)
    QMat mu(k, QVec(k, 0));
    QVec Bn(k, 0);  // |b*_i|^2
    {
        std::vector<QVec> star(k, QVec(n, 0));
        for (size_t i = 0; i < k; ++i) {
            for (size_t c = 0; c < n; ++c) star[i][c] = mpq_class(B[i][c]);
            for (size_t j = 0; j < i; ++j) {
                mpq_class num = 0;
                for (size_t c = 0; c < n; ++c) num += mpq_class(B[i][c]) * star[j][c];
                mu[i][j] = Bn[j] == 0 ? mpq_class(0) : mpq_class(num / Bn[j]);
                for (size_t c = 0; c < n; ++c) star[i][c] -= mu[i][j] * star[j][c];
            }
            mpq_class nsq = 0;
            for (size_t c = 0; c < n; ++c) nsq += star[i][c] * star[i][c];
            Bn[i] = nsq;
        }
    }

    auto size_reduce = [&](size_t i, size_t j) {
        mpq_class m = mu[i][j];
        if (m == 0) return;
        mpz_class r;
        mpq_class shifted = m + mpq_class(1, 2);  // nearest integer, ties up
        mpz_fdiv_q(r.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
        if (r == 0) return;
        for (size_t c = 0; c < n; ++c) B[i][c] -= r * B[j][c];
        for (size_t l = 0; l < j; ++l) mu[i][l] -= mpq_class(r) * mu[j][l];
        mu[i][j] -= mpq_class(r);
    };

    const mpq_class delta(3, 4);
    size_t i = 1;
    size_t guard = 0;
    while (i < k) {
        size_reduce(i, i - 1);
        if (Bn[i] >= (delta - mu[i][i - 1] * mu[i][i - 1]) * Bn[i - 1]) {
            for (size_t j = i - 1; j-- > 0;) size_reduce(i, j);
            ++i;
        } else {
            mpq_class nu = mu[i][i - 1];
            mpq_class Bk = Bn[i] + nu * nu * Bn[i - 1];
            mu[i][i - 1] = Bk == 0 ? mpq_class(0) : mpq_class(nu * Bn[i - 1] / Bk);
            Bn[i] = Bk == 0 ? mpq_class(0) : mpq_class(Bn[i - 1] * Bn[i] / Bk);
            Bn[i - 1] = Bk;
            std::swap(B[i], B[i - 1]);
            for (size_t j = 0; j + 1 < i; ++j) std::swap(mu[i - 1][j], mu[i][j]);
            for (size_t r = i + 1; r < k; ++r) {
                mpq_class t = mu[r][i];
                mu[r][i] = mu[r][i - 1] - nu * t;
                mu[r][i - 1] = t + mu[i][i - 1] * mu[r][i];
            }
            i = i > 1 ? i - 1 : 1;
        }
        if (++guard > 2000000) throw Error("LLL failed to terminate");
    }
    // sort by squared length, shortest first
    std::sort(B.begin(), B.end(), [&](const ZVec& a, const ZVec& b) {
        return dotzz(a, a) < dotzz(b, b);
    });
    return B;
}

long rank(QMat A) {
    if (A.empty()) return 0;
    const size_t m = A.size(), n = A[0].size();
    long r = 0;
    for (size_t col = 0; col < n && static_cast<size_t>(r) < m; ++col) {
        size_t piv = m;
        for (size_t i = r; i < m; ++i)
            if (A[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv == m) continue;
        std::swap(A[piv], A[static_cast<size_t>(r)]);
        for (size_t i = r + 1; i < m; ++i) {
            if (A[i][col] == 0) continue;
            mpq_class f = A[i][col] / A[static_cast<size_t>(r)][col];
            for (size_t c = col; c < n; ++c) A[i][c] -= f * A[static_cast<size_t>(r)][c];
        }
        ++r;
    }
    return r;
}

QMat rational_kernel(const QMat& A) {
    if (A.empty()) return {};
    const size_t m = A.size(), n = A[0].size();
    QMat R = A;
    std::vector<long> pivot_col;
    size_t r = 0;
    for (size_t col = 0; col < n && r < m; ++col) {
        size_t piv = m;
        for (size_t i = r; i < m; ++i)
            if (R[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv == m) continue;
        std::swap(R[piv], R[r]);
        mpq_class d = R[r][col];
        for (size_t c = 0; c < n; ++c) R[r][c] /= d;
        for (size_t i = 0; i < m; ++i) {
            if (i == r || R[i][col] == 0) continue;
            mpq_class f = R[i][col];
            for (size_t c = 0; c < n; ++c) R[i][c] -= f * R[r][c];
        }
        pivot_col.push_back(static_cast<long>(col));
        ++r;
    }
    std::vector<bool> is_pivot(n, false);
    for (long c : pivot_col) is_pivot[static_cast<size_t>(c)] = true;
    QMat kernel;
    for (size_t freec = 0; freec < n; ++freec) {
        if (is_pivot[freec]) continue;
        QVec v(n, 0);
        v[freec] = 1;
        for (size_t i = 0; i < pivot_col.size(); ++i)
            v[static_cast<size_t>(pivot_col[i])] = -R[i][freec];
        // scale to coprime integers
        mpz_class lcm = 1;
        for (const auto& x : v) lcm = lcm / gcd(lcm, x.get_den()) * x.get_den();
        mpz_class g = 0;
        for (auto& x : v) {
            x *= lcm;
            g = gcd(g, x.get_num());
        }
        if (g > 1)
            for (auto& x : v) x /= g;
        kernel.push_back(v);
    }
    return kernel;
}

mpz_class determinant(ZMat A) {
    const size_t n = A.size();
    if (n == 0) return 1;
    mpz_class prev = 1;
    long sign = 1;
    for (size_t kcol = 0; kcol + 1 < n; ++kcol) {
        if (A[kcol][kcol] == 0) {
            size_t piv = n;
            for (size_t i = kcol + 1; i < n; ++i)
                if (A[i][kcol] != 0) {
                    piv = i;
                    break;
                }
            if (piv == n) return 0;
            std::swap(A[kcol], A[piv]);
            sign = -sign;
        }
        for (size_t i = kcol + 1; i < n; ++i) {
            for (size_t j = kcol + 1; j < n; ++j) {
                A[i][j] = (A[kcol][kcol] * A[i][j] - A[i][kcol] * A[kcol][j]) / prev;
            }
            A[i][kcol] = 0;
        }
        prev = A[kcol][kcol];
    }
    return sign * A[n - 1][n - 1];
}

}  // namespace plf
