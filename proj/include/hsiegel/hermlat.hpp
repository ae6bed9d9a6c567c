#pragma once

#include "hsiegel/exactnum.hpp"
#include "hsiegel/quatalg.hpp"
#include "hsiegel/zlattice.hpp"

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <vector>

namespace hsiegel {

/** Element of the maximal order by its 8 integer coordinates. */
using OVec = std::array<int64_t, 8>;
/** Row vector of O_D^2: first entry in 0..7, second in 8..15. */
using DVec = std::array<int64_t, 16>;
/** 2x2 matrix over O_D, rows stacked: h[0..15] is row one. */
using DMat = std::array<int64_t, 32>;

OVec add(const OVec& a, const OVec& b);
OVec sub(const OVec& a, const OVec& b);
OVec neg(const OVec& a);

/** Integer arithmetic in a maximal order through its structure constants. */
class OrderArith {
  public:
    explicit OrderArith(const QuatOrder& O);
    const QuatOrder& order() const { return O_; }
    const QuatAlgebra& algebra() const { return O_.algebra(); }
    long d() const { return O_.algebra().d(); }

    OVec mul(const OVec& a, const OVec& b) const;
    OVec conj(const OVec& a) const;
    OVec one() const { return central(1, 0); }
    /** x + y w. */
    OVec central(int64_t x, int64_t y) const;
    /** O_F coordinates (x, y) of a central element; throws otherwise. */
    std::array<int64_t, 2> central_coords(const OVec& a) const;
    std::array<int64_t, 2> nr(const OVec& a) const { return central_coords(mul(a, conj(a))); }
    std::array<int64_t, 2> trd(const OVec& a) const { return central_coords(add(a, conj(a))); }

    OVec from_quat(const QuatElement& x) const;
    QuatElement to_quat(const OVec& a) const;
    FieldElement to_field(const std::array<int64_t, 2>& c) const;
    std::array<int64_t, 2> from_field(const FieldElement& x) const;

    /** Row times matrix. */
    DVec mul(const DVec& x, const DMat& h) const;
    DMat mul(const DMat& a, const DMat& b) const;
    DMat identity() const;

  private:
    QuatOrder O_;
    std::vector<std::array<OVec, 8>> mt_;  // mt_[i][j] = b_i b_j
    std::array<OVec, 8> conj_;
    OVec one_, w_;
    int ci_ = 0, cj_ = 1;  // coordinates used to read central elements
    int64_t cdet_ = 1;
};

/** [[s, conj r], [r, t]] with s, t in F and r in D. */
struct HermitianMatrix {
    FieldElement s, t;
    QuatElement r;
};

FieldElement det_D(const QuatAlgebra& A, const HermitianMatrix& g);
bool is_totally_positive(const QuatAlgebra& A, const HermitianMatrix& g);
/** m g. */
HermitianMatrix scale(const QuatAlgebra& A, const HermitianMatrix& g, const FieldElement& m);

/** 2x2 matrix over D, row-major. */
using QuatMat2 = std::array<QuatElement, 4>;
QuatMat2 mat_mul(const QuatAlgebra& A, const QuatMat2& x, const QuatMat2& y);
QuatMat2 conj_transpose(const QuatAlgebra& A, const QuatMat2& x);
/** x A conj(x)^t for hermitian A. */
HermitianMatrix congruence(const QuatAlgebra& A, const QuatMat2& x, const HermitianMatrix& g);
QuatMat2 to_quat(const OrderArith& R, const DMat& h);
/** Inverse of to_quat; throws if an entry leaves the order. */
DMat from_quat(const OrderArith& R, const QuatMat2& x);
QuatMat2 as_mat2(const QuatAlgebra& A, const HermitianMatrix& g);
QuatMat2 herm_inverse(const QuatAlgebra& A, const HermitianMatrix& g);

/** Smallest-trace representative of x modulo squares of units. */
FieldElement reduce_by_unit_squares(const FieldElement& x);

/**
 * An integral hermitian form on O_D^2 (entries of the matrix in O_D)
 * together with the data to enumerate its vectors exactly.
 */
class HermForm {
  public:
    HermForm(const OrderArith& R, const HermitianMatrix& g);
    /** The form restricted to the Z-span of the rows of basis (a sublattice of O_D^2). */
    HermForm(const OrderArith& R, const HermitianMatrix& g, const IMat& basis);
    const HermitianMatrix& matrix() const { return g_; }
    const OrderArith& arith() const { return R_; }

    /** H(x, y) = x g conj(y)^t. */
    OVec H(const DVec& x, const DVec& y) const;
    /** H(x, x) as O_F coordinates. */
    std::array<int64_t, 2> norm(const DVec& x) const;

    /** All x with H(x, x) = v; f returns false to stop. */
    void vectors(const std::array<int64_t, 2>& v, const std::function<bool(const DVec&)>& f) const;
    /** All y with H(y, y) = v and H(y, x) = c. */
    void affine(const DVec& x, const OVec& c, const std::array<int64_t, 2>& v,
                const std::function<bool(const DVec&)>& f) const;
    /** All h in M_2(O_D) with h g conj(h)^t = eta (eta integral). */
    void represent(const HermitianMatrix& eta, const std::function<bool(const DMat&)>& f) const;
    std::vector<DMat> represent(const HermitianMatrix& eta) const;
    /** Number of x with H(x, x) = v. */
    long count(const std::array<int64_t, 2>& v) const;

  private:
    const OrderArith& R_;
    HermitianMatrix g_;
    OVec s_, t_, r_, rbar_;
    IMat G0_, G1_;  // G0 + G1 w = trd H(b_i, b_j)
    IMat B_;        // rows span the lattice; empty for all of O_D^2
};

/** Left kernel basis and particular solution of x A = b over Z with int64 results. */
bool solve_left_int(const IMat& A, const IVec& b, IVec& x0, IMat& kernel);

/** The lattice O_D^2 alpha with gamma = alpha conj(alpha)^t (the left ideal class is trivial). */
struct LatticeRep {
    HermitianMatrix gamma;
    QuatMat2 alpha;
};

struct LatticeInvariants {
    Ideal norm;          // nu(L), O_F-content of the gram entries
    Ideal discriminant;  // generated by det_D(gamma)
    Integer dual_index;  // [L^# : L] as a Z-module index
};
LatticeInvariants lattice_invariants(const OrderArith& R, const HermitianMatrix& gamma);
/** [L : L h] = (det_D(h conj(h)^t)) for h in M_2(O_D). */
Ideal lattice_index(const OrderArith& R, const DMat& h);

struct GenusVerdict {
    bool is_modular = false;
    bool in_principal_genus = false;
};
GenusVerdict genus_tests(const OrderArith& R, const HermitianMatrix& gamma);

/**
 * alpha lower triangular with alpha conj(alpha)^t = gamma and entries in
 * O_D[1/q], q generating the auxiliary prime.  Throws when nothing is
 * found with q-exponent at most max_k.
 */
QuatMat2 solve_alpha(const OrderArith& R, const HermitianMatrix& gamma, const FieldElement& q, int max_k = 8);

/** h with h g conj(h)^t = g. */
std::vector<DMat> stabilizer(const HermForm& F);

/** Vector counts H(x, x) = v for v over the given list. */
std::vector<long> theta_prefix(const HermForm& F, const std::vector<std::array<int64_t, 2>>& values);
/** Totally positive generators of the integral ideals of norm <= bound, sorted by (norm, trace). */
std::vector<FieldElement> tp_ideal_generators(long d, long bound);

struct ThetaSeries {
    std::vector<FieldElement> ideals;  // totally positive generators
    std::vector<long> vectors;         // R_L
    std::vector<long> orbits;          // r_L, orbits under the stabilizer
};
ThetaSeries theta_coeffs(const HermForm& F, const std::vector<DMat>& stab, long bound);

/** Is there h in GL_2(O_D) with h g conj(h)^t = g' (up to units)? */
bool equivalent(const HermForm& F, const HermForm& Fp, DMat* witness = nullptr);

Rational mass(long d);

struct ClassSet {
    std::vector<LatticeRep> reps;
    std::vector<long> stab_orders;
    std::vector<std::vector<DMat>> stabilizers;
    Rational mass;
};
/** Mass-driven class enumeration; q is the auxiliary prime for alpha. */
ClassSet enumerate_classes(const OrderArith& R, const FieldElement& q, long max_s_norm = 64);

/** Rank of h modulo P as a 4x4 matrix over the residue field (P of degree one). */
int reduced_rank(const OrderArith& R, const DMat& h, const PrimeIdeal& P);

/**
 * S(u; a, b) = { h : h gamma_b conj(h)^t = u gamma_a } restricted to
 * rank(h mod P) = 3 - i.
 */
std::vector<DMat> hecke_theta_sets(const OrderArith& R, int i, const PrimeIdeal& P, const FieldElement& u,
                                   const HermForm& Fa, const HermForm& Fb);

}  // namespace hsiegel
