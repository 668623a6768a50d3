#pragma once

#include <gmpxx.h>

#include <vector>

namespace plf {

using ZVec = std::vector<mpz_class>;
using ZMat = std::vector<ZVec>;  // row-major
using QVec = std::vector<mpq_class>;
using QMat = std::vector<QVec>;

// Basis of the integer kernel {x in Z^n : A x = 0}, returned as rows.
// The basis generates the full kernel lattice (saturated by construction).
ZMat integer_kernel(const ZMat& A);

// Row Hermite normal form of the lattice spanned by the rows of B:
// returns a basis in echelon form with positive pivots. Zero rows dropped.
ZMat hnf_rows(ZMat B);

// Is v in the row lattice of H, where H is a full-column-rank HNF basis?
bool in_lattice(const ZMat& H, const ZVec& v);

// Lattice product basis: all pairwise products reduced by the caller.
// (kept in numfield where ring multiplication lives)

// LLL reduction (delta = 3/4) of the lattice spanned by the rows of B,
// exact rational Gram-Schmidt. Rows must be linearly independent.
ZMat lll_reduce(ZMat B);

// Rank of a rational matrix.
long rank(QMat A);

// Basis of the rational kernel {x in Q^n : A x = 0}, rows scaled to
// coprime integers.
QMat rational_kernel(const QMat& A);

// Determinant by fraction-free Bareiss elimination.
mpz_class determinant(ZMat A);

}  // namespace plf
