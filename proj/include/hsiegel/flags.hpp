#pragma once

#include "hsiegel/exactnum.hpp"

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace hsiegel {

enum class FlagVariant { Siegel, Klingen, Borel };

const char* variant_name(FlagVariant v);
FlagVariant parse_variant(const std::string& s);

/** Row vector of F^4 in the basis e1, e2, f1, f2 (pairing J = [[0, 1],[-1, 0]]). */
using FVec = std::array<int, 4>;
/** 4x4 matrix over the residue field, row-major; acts on row vectors from the right. */
using FMat4 = std::array<int, 16>;

/**
 * Canonical data of a flag.  Siegel: the reduced row echelon basis of an
 * isotropic plane.  Klingen: a point of P^3 with first nonzero coordinate 1.
 * Borel: rows[0] the normalized line, rows[1..2] the plane containing it.
 */
struct Flag {
    FlagVariant variant = FlagVariant::Siegel;
    std::vector<FVec> rows;
    bool operator==(const Flag& o) const { return variant == o.variant && rows == o.rows; }
};

int symplectic_pairing(const ResidueField& F, const FVec& x, const FVec& y);
FVec vec_mul(const ResidueField& F, const FVec& x, const FMat4& g);
FMat4 mat_mul(const ResidueField& F, const FMat4& a, const FMat4& b);
FMat4 identity4(const ResidueField& F);
/** g J g^t = lambda J with lambda != 0; returns lambda or 0. */
int similitude_factor(const ResidueField& F, const FMat4& g);

/** |F_G(p)| for a prime of norm q. */
long flag_count_formula(long q, FlagVariant v);

/**
 * Pluecker point (a0 : ... : a5) of a plane, minors in the order
 * (12, 13, 14, 23, 24, 34).  Every plane satisfies a0 a5 - a1 a4 + a2 a3 = 0
 * and the plane is isotropic iff a1 + a4 = 0.  Normalized with first
 * nonzero coordinate 1; throws if the rows are dependent.
 */
std::array<int, 6> plucker(const ResidueField& F, const std::vector<FVec>& plane);

class FlagSpace {
  public:
    FlagSpace(const ResidueField& F, FlagVariant v);
    const ResidueField& field() const { return F_; }
    FlagVariant variant() const { return v_; }
    size_t size() const { return flags_.size(); }
    const Flag& operator[](size_t i) const { return flags_[i]; }
    const std::vector<Flag>& flags() const { return flags_; }
    /** Index of a canonical flag, -1 if absent. */
    long index(const Flag& f) const;

    /** Canonical form of arbitrary spanning rows; false if they are degenerate. */
    bool canonical(const std::vector<FVec>& rows, Flag& out) const;
    /** x g for a similitude g; throws otherwise. */
    Flag act(const FMat4& g, const Flag& x) const;
    /** Index of x g, or -1 if g collapses x (g need not be invertible). */
    long act_index(const FMat4& g, size_t i) const;

  private:
    uint64_t key(const Flag& f) const;
    ResidueField F_;
    FlagVariant v_;
    std::vector<Flag> flags_;
    std::unordered_map<uint64_t, size_t> index_;
};

}  // namespace hsiegel
