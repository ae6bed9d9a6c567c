#pragma once

#include "hsiegel/exactnum.hpp"

#include <vector>

namespace hsiegel {

using ZMat = std::vector<std::vector<Integer>>;
using QMat = std::vector<std::vector<Rational>>;
using FMat = std::vector<std::vector<int>>;

ZMat zmat(size_t rows, size_t cols);
QMat qmat(size_t rows, size_t cols);

/** Row Hermite normal form; zero rows are dropped. */
ZMat hnf_rows(ZMat M);
/** Bareiss determinant. */
Integer det(const ZMat& M);
Rational det(const QMat& M);
QMat inverse(const QMat& M);
QMat to_q(const ZMat& M);
ZMat mul(const ZMat& A, const ZMat& B);
QMat mul(const QMat& A, const QMat& B);

/**
 * Integer solutions of x A = b (x a row vector): returns false if none;
 * otherwise a particular solution and a Z-basis (rows) of the left kernel.
 */
bool solve_left(const ZMat& A, const std::vector<Integer>& b, std::vector<Integer>& x0, ZMat& kernel);

/** Z-basis (rows) of the lattice {z in Z^n : z A = 0 mod p} for an n x m matrix A. */
ZMat kernel_mod_p_lattice(const ZMat& A, long p);

// Linear algebra over a residue field, row-vector conventions.
/** Reduced row echelon form in place; returns pivot columns. */
std::vector<int> rref(const ResidueField& F, FMat& M);
int rank(const ResidueField& F, FMat M);
/** Basis (rows) of {x : x M = 0}. */
FMat left_kernel(const ResidueField& F, const FMat& M);
/** Solve x M = b; returns false if inconsistent. */
bool solve_left(const ResidueField& F, const FMat& M, const std::vector<int>& b, std::vector<int>& x);
FMat mul(const ResidueField& F, const FMat& A, const FMat& B);
FMat identity(const ResidueField& F, int n);
bool invert(const ResidueField& F, const FMat& M, FMat& inv);

}  // namespace hsiegel
