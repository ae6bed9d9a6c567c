#pragma once

#include "hsiegel/exactnum.hpp"
#include "hsiegel/linalg.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace hsiegel {

using IVec = std::vector<int64_t>;
using IMat = std::vector<IVec>;

/** Positive definite Gram matrix with rational entries. */
class GramLattice {
  public:
    explicit GramLattice(QMat G);
    static GramLattice from_int(const IMat& G);
    int rank() const { return static_cast<int>(G_.size()); }
    const QMat& gram() const { return G_; }
    /** Smallest positive integer s with s G integral, and s G. */
    const Integer& scale() const { return scale_; }
    const IMat& int_gram() const { return iG_; }

  private:
    QMat G_;
    Integer scale_;
    IMat iG_;
};

/** G = R^T D R with R upper unitriangular. */
struct LDLDecomposition {
    QMat R;
    std::vector<Rational> D;
};

/** Throws MathError naming the first non-positive leading minor. */
LDLDecomposition cholesky_rational(const GramLattice& G);

/** All v with v^T G v = target, both signs, sorted lexicographically. */
std::vector<IVec> vectors_of_norm(const GramLattice& G, const Rational& target);

/**
 * Enumeration engine over an integral positive definite Gram matrix.
 * Exact pruning with Schur complements d_k S_k (integral by Cramer's
 * rule); coordinates are fixed from the last to the first.
 */
class Enumerator {
  public:
    /**
     * pin_last: the last coordinate is fixed to 1 (affine enumeration of a
     * homogenised form); the leading (n-1) x (n-1) block must then be
     * positive definite.
     */
    Enumerator(const IMat& G, bool pin_last = false);

    /**
     * Calls f(x) for every x with Q(x) = target (exact = true) or
     * 0 < Q(x) <= target.  With half = true only one of +-x is visited
     * (the one whose last nonzero coordinate is positive); ignored when
     * pin_last is set.  f returns false to stop the enumeration.
     */
    void run(const Integer& target, bool exact, bool half, const std::function<bool(const int64_t*)>& f) const;

    int dim() const { return n_; }

  private:
    template <class Big>
    void run_impl(const Big& target, bool exact, bool half, const std::function<bool(const int64_t*)>& f) const;
    int n_;
    bool pin_;
    // Schur data: a_[k] = d_{k+1}, d_[k], coef_[k][j] = (d_k S_k)[k][j] for j > k
    std::vector<Integer> zd_, za_;
    std::vector<std::vector<Integer>> zcoef_;
    bool small_ = false;  // int64 data available
    std::vector<int64_t> d64_, a64_;
    std::vector<std::vector<int64_t>> coef64_;
};

/** LLL reduction of a Gram matrix: returns U (unimodular) with U G U^T reduced. */
IMat lll_gram(const IMat& G, IMat* reduced = nullptr);

IMat imat_mul(const IMat& A, const IMat& B);
IMat transpose(const IMat& A);
/** x^T G x. */
Integer quad_form(const IMat& G, const int64_t* x);

}  // namespace hsiegel
