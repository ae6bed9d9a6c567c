#pragma once

#include "hsiegel/exactnum.hpp"
#include "hsiegel/linalg.hpp"

#include <array>
#include <string>
#include <vector>

namespace hsiegel {

/** w + x i + y j + z k in (a, b / F). */
struct QuatElement {
    std::array<FieldElement, 4> c;

    QuatElement() = default;
    QuatElement(const FieldElement& w, const FieldElement& x, const FieldElement& y, const FieldElement& z)
        : c{w, x, y, z} {}
    static QuatElement scalar(const FieldElement& s);

    QuatElement operator+(const QuatElement& o) const;
    QuatElement operator-(const QuatElement& o) const;
    QuatElement operator-() const;
    QuatElement scale(const FieldElement& s) const;
    bool operator==(const QuatElement& o) const;
    bool operator!=(const QuatElement& o) const { return !(*this == o); }
    bool is_zero() const;
    std::string str() const;
};

class QuatAlgebra {
  public:
    QuatAlgebra(long d, FieldElement a, FieldElement b);

    long d() const { return d_; }
    const FieldElement& a() const { return a_; }
    const FieldElement& b() const { return b_; }

    QuatElement mul(const QuatElement& x, const QuatElement& y) const;
    QuatElement conj(const QuatElement& x) const;
    FieldElement nr(const QuatElement& x) const;
    FieldElement trd(const QuatElement& x) const;
    QuatElement inverse(const QuatElement& x) const;
    QuatElement one() const;
    QuatElement zero() const;
    QuatElement scalar(long n) const;

  private:
    long d_;
    FieldElement a_, b_;
};

struct ConjNrTr {
    QuatElement conj;
    FieldElement nr, tr;
};
ConjNrTr conj_nr_tr(const QuatAlgebra& A, const QuatElement& u);

/** Place of F: finite prime or one of the two real embeddings. */
struct Place {
    bool infinite = false;
    int embedding = 0;  // for infinite places
    PrimeIdeal prime;   // for finite places
};

/** Ramified places of D (finite primes decided by Hilbert symbols). */
std::vector<Place> ramified_primes(const QuatAlgebra& A);
/** Hilbert symbol (a, b)_P for a finite prime P. */
int hilbert_symbol(const FieldElement& a, const FieldElement& b, const PrimeIdeal& P);

/**
 * An O_F-order given by a Z-basis of 8 elements with its structure
 * constants.  Coordinates of elements are with respect to that basis.
 */
class QuatOrder {
  public:
    /** Closure of the Z-span of the generators (and their F-multiples by w) under multiplication. */
    static QuatOrder from_generators(const QuatAlgebra& A, const std::vector<QuatElement>& gens);
    /** Use the given Z-basis; throws if it is not closed under multiplication or lacks 1. */
    QuatOrder(const QuatAlgebra& A, const std::vector<QuatElement>& zbasis);

    const QuatAlgebra& algebra() const { return A_; }
    const std::vector<QuatElement>& basis() const { return basis_; }
    int rank() const { return 8; }

    /** Rational coordinates with respect to the Z-basis. */
    std::vector<Rational> coords(const QuatElement& x) const;
    bool contains(const QuatElement& x) const;
    QuatElement element(const std::vector<Integer>& c) const;
    QuatElement element(const std::vector<long>& c) const;

    /** Structure constants: b_i b_j = sum_k mult[i][j][k] b_k. */
    const std::vector<std::vector<std::vector<long>>>& mult_table() const { return mult_; }
    /** conj(b_i) = sum_k conj[i][k] b_k. */
    const std::vector<std::vector<long>>& conj_matrix() const { return conj_; }
    /** Coordinates of 1 and of w. */
    const std::vector<long>& one_coords() const { return one_; }
    const std::vector<long>& w_coords() const { return wc_; }

    /** O_F-basis f_1..f_4 of the order (it is free). */
    const std::vector<QuatElement>& of_basis() const { return ofb_; }
    /** Z-coordinates to O_F-coordinates: e = c * z_to_of() with e = (x_1, y_1, ..., x_4, y_4). */
    const std::vector<std::vector<long>>& z_to_of() const { return z2of_; }
    /** O_F-coordinates (as field elements) of an element. */
    std::array<FieldElement, 4> of_coords(const QuatElement& x) const;

    /** Z-discriminant det(Tr_{F/Q} trd(b_i b_j)). */
    Integer discriminant() const;

  private:
    void build();
    QuatAlgebra A_;
    std::vector<QuatElement> basis_;
    QMat inv_;  // Q^8 coordinates -> Z-basis coordinates
    std::vector<std::vector<std::vector<long>>> mult_;
    std::vector<std::vector<long>> conj_;
    std::vector<long> one_, wc_;
    std::vector<QuatElement> ofb_;
    std::vector<std::vector<long>> z2of_;
};

/** Closed under multiplication and containing 1. */
bool is_order(const QuatAlgebra& A, const std::vector<QuatElement>& zbasis);
/** Reduced discriminant equals the product of the finite ramified primes. */
bool verify_maximal_order(const QuatOrder& O);

/**
 * Ring map O -> M_2(F_P) for an odd prime P unramified in D.
 * images[i] is the matrix of the i-th Z-basis element (row-major 2x2).
 */
class LocalSplitting {
  public:
    LocalSplitting(const QuatOrder& O, const PrimeIdeal& P);
    const ResidueField& field() const { return F_; }
    using Mat2 = std::array<int, 4>;
    const std::vector<Mat2>& images() const { return img_; }
    /** Image of an element whose Z-coordinates have denominators prime to p. */
    Mat2 image(const QuatElement& x) const;
    Mat2 image_coords(const std::vector<long>& zc) const;
    Mat2 mul(const Mat2& x, const Mat2& y) const;

  private:
    QuatOrder O_;
    ResidueField F_;
    std::vector<Mat2> img_;
};

/** Build the order (-1,-1 / Q(sqrt 2)) maximal order O_F[e1, e2, e3, e4]. */
QuatOrder sqrt2_maximal_order();

}  // namespace hsiegel
