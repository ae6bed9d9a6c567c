#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hsiegel {

using Integer = mpz_class;
using Rational = mpq_class;

class MathError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

Rational make_rational(long num, long den = 1);
std::string to_string(const Integer& x);
std::string to_string(const Rational& x);

/** Integer square root (floor) of a nonnegative integer. */
Integer isqrt(const Integer& n);
bool is_square(const Integer& n);
bool is_prime(long n);
std::vector<std::pair<long, int>> factor_integer(long n);

/**
 * The real quadratic field Q(sqrt d), d > 1 squarefree.
 * The integral basis is {1, w} with w = sqrt d, or (1 + sqrt d)/2 when
 * d = 1 mod 4; w satisfies w^2 = trace_w * w + norm_c.
 */
class QuadField {
  public:
    explicit QuadField(long d);

    long d() const { return d_; }
    long disc() const { return d_ % 4 == 1 ? d_ : 4 * d_; }
    /** w^2 = t w + n. */
    long w_trace() const { return d_ % 4 == 1 ? 1 : 0; }
    long w_const() const { return d_ % 4 == 1 ? (d_ - 1) / 4 : d_; }
    bool operator==(const QuadField& o) const { return d_ == o.d_; }

  private:
    long d_;
};

/**
 * An element a + b sqrt(d) of Q(sqrt d), stored with exact rationals.
 * Elements of different fields must not be mixed (checked).
 */
class FieldElement {
  public:
    FieldElement() = default;
    FieldElement(long d, Rational a, Rational b = 0);
    static FieldElement from_basis(long d, const Rational& x, const Rational& y);

    long d() const { return d_; }
    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }

    /** Coordinates (x, y) with this = x + y w. */
    std::pair<Rational, Rational> basis_coords() const;
    bool is_integral() const;
    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }

    FieldElement conj() const;
    Rational norm() const;
    Rational trace() const;
    /** Sign of the embedding sending sqrt d to +sqrt d (k = 0) or -sqrt d (k = 1). */
    int sign(int k) const;
    bool is_totally_positive() const;

    FieldElement operator-() const;
    FieldElement& operator+=(const FieldElement& o);
    FieldElement& operator-=(const FieldElement& o);
    FieldElement& operator*=(const FieldElement& o);
    FieldElement& operator/=(const FieldElement& o);
    FieldElement inverse() const;

    friend FieldElement operator+(FieldElement x, const FieldElement& y) { return x += y; }
    friend FieldElement operator-(FieldElement x, const FieldElement& y) { return x -= y; }
    friend FieldElement operator*(FieldElement x, const FieldElement& y) { return x *= y; }
    friend FieldElement operator/(FieldElement x, const FieldElement& y) { return x /= y; }
    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    std::string str() const;

  private:
    void check(const FieldElement& o) const;
    long d_ = 0;
    Rational a_, b_;
};

bool is_totally_positive(const FieldElement& a);
/** x + y w written as "3+w", "-2w", "1/2+w". */
std::string basis_str(const FieldElement& x);

/**
 * Integral ideal of O_F as the Z-module a Z + (b + c w) Z in Hermite
 * normal form: c | a, c | b, 0 <= b < a.  The zero ideal has a = 0.
 */
class Ideal {
  public:
    Ideal() = default;
    /** Ideal generated by the given elements (must be integral). */
    Ideal(long d, const std::vector<FieldElement>& gens);
    static Ideal principal(const FieldElement& g);
    static Ideal unit(long d);

    long d() const { return d_; }
    const Integer& a() const { return a_; }
    const Integer& b() const { return b_; }
    const Integer& c() const { return c_; }
    bool is_zero() const { return a_ == 0; }

    Integer norm() const { return a_ * c_; }
    bool contains(const FieldElement& x) const;
    bool divides(const Ideal& other) const;  // this | other  <=>  other subset this
    Ideal operator*(const Ideal& o) const;
    bool operator==(const Ideal& o) const { return d_ == o.d_ && a_ == o.a_ && b_ == o.b_ && c_ == o.c_; }
    bool operator!=(const Ideal& o) const { return !(*this == o); }
    /** Exact quotient this / o, requires o | this. */
    Ideal divide(const Ideal& o) const;
    /** The two Z-basis elements. */
    std::pair<FieldElement, FieldElement> z_basis() const;
    /** A generator (class number one fields); throws if none is found. */
    FieldElement generator() const;
    /** A totally positive generator, if one exists. */
    bool tp_generator(FieldElement& out) const;
    bool is_square() const;
    std::string str() const;

  private:
    static Ideal from_zvectors(long d, std::vector<std::pair<Integer, Integer>> v);
    long d_ = 0;
    Integer a_ = 0, b_ = 0, c_ = 0;
};

/** A fractional ideal (1/den) I with I integral. */
struct FractionalIdeal {
    Ideal num;
    Integer den = 1;
    FractionalIdeal inverse() const;
    FractionalIdeal operator*(const FractionalIdeal& o) const;
    bool is_unit() const;
    bool operator==(const FractionalIdeal& o) const;
};

struct PrimeIdeal {
    Ideal ideal;
    long p = 0;
    int f = 1;  // residue degree
    int e = 1;  // ramification index
    Integer norm() const { return ideal.norm(); }
};

/** Dedekind factorization of (p); returns primes with their exponent. */
std::vector<std::pair<PrimeIdeal, int>> factor_rational_prime(long p, long d);
/** P-adic valuation of a nonzero element. */
int valuation(const FieldElement& x, const PrimeIdeal& P);
/** Factorization of an integral ideal into prime ideals. */
std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const Ideal& I);

/** The fundamental unit > 1, via the continued fraction of w. */
FieldElement fundamental_unit(long d);
/** Totally positive units modulo squares of units. */
std::vector<FieldElement> tp_units_mod_squares(long d);
/** zeta_F(s) for s in {-1, -3}, using Siegel's divisor-sum formula. */
Rational zeta_special_value(long d, int s);

/**
 * The residue field O_F / p.  Elements are encoded as integers
 * x + y p (0 <= x, y < p), y = 0 when the residue degree is one.
 * For degree two the field is F_p[t] / (t^2 - tr t - c) where t is the
 * image of w.
 */
class ResidueField {
  public:
    ResidueField() = default;
    explicit ResidueField(const PrimeIdeal& P);

    long p() const { return p_; }
    int degree() const { return f_; }
    long size() const { return q_; }
    const PrimeIdeal& prime() const { return P_; }
    /** Image of w when the degree is one. */
    long w_image() const { return wimg_; }

    int add(int x, int y) const { return add_[x * q_ + y]; }
    int mul(int x, int y) const { return mul_[x * q_ + y]; }
    int neg(int x) const { return neg_[x]; }
    int sub(int x, int y) const { return add(x, neg(y)); }
    int inv(int x) const;
    int from_int(long n) const;
    int reduce(const FieldElement& x) const;
    /** Reduction of any P-integral element (denominators divisible by p allowed). */
    int reduce_local(const FieldElement& x) const;
    int reduce_basis(const Integer& x, const Integer& y) const;
    /** Canonical lift x + y w with 0 <= x, y < p. */
    FieldElement lift(int e) const;
    /** Is x a square (x != 0)? */
    bool is_square(int x) const;

  private:
    PrimeIdeal P_;
    long p_ = 0;
    int f_ = 1;
    int q_ = 0;
    long wimg_ = 0;
    long tr_ = 0, c_ = 0;  // degree-2 minimal polynomial of w
    long d_ = 0;
    std::vector<int> add_, mul_, neg_, inv_;
};

}  // namespace hsiegel
