#pragma once

#include "hsiegel/exactnum.hpp"
#include "hsiegel/linalg.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hsiegel {

/** Integer polynomial, constant term first, no trailing zeros (zero is empty). */
using Poly = std::vector<Integer>;

Poly poly_trim(Poly f);
int poly_degree(const Poly& f);
Poly poly_add(const Poly& f, const Poly& g);
Poly poly_sub(const Poly& f, const Poly& g);
Poly poly_mul(const Poly& f, const Poly& g);
Poly poly_derivative(const Poly& f);
Integer poly_content(const Poly& f);
/** f / content, with positive leading coefficient. */
Poly poly_primitive(const Poly& f);
/** Exact division over Z; false if g does not divide f. */
bool poly_divides(const Poly& g, const Poly& f, Poly* quotient = nullptr);
/** Primitive gcd (positive leading coefficient). */
Poly poly_gcd(const Poly& f, const Poly& g);
Integer poly_eval(const Poly& f, const Integer& x);
std::string poly_str(const Poly& f, const std::string& var = "x");

/** det(x I - A) by the division-free Berkowitz recursion. */
Poly charpoly(const ZMat& A);
/** det(x I - A) for rational A with integral characteristic polynomial; throws otherwise. */
Poly charpoly(const QMat& A);
/** f(A) for square rational A. */
QMat poly_eval(const Poly& f, const QMat& A);

/**
 * Irreducible factors over Z with multiplicity (positive leading
 * coefficients, content dropped): squarefree split, factorization modulo a
 * few primes, Hensel lifting and subset recombination.
 */
std::vector<std::pair<Poly, int>> factor(const Poly& f);

// rational linear algebra with column vectors
/** Basis (columns, as rows of the result) of { v : A v = 0 }. */
QMat right_kernel(const QMat& A);
/** Rows form a basis of the row space (reduced echelon form). */
QMat row_basis(const QMat& A);

}  // namespace hsiegel
