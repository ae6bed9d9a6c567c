#pragma once

#include "hsiegel/flags.hpp"
#include "hsiegel/hermlat.hpp"
#include "hsiegel/linalg.hpp"
#include "hsiegel/poly.hpp"
#include "hsiegel/quatalg.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hsiegel {

/** T_i(P); u is a totally positive generator of P^i. */
struct HeckeOperator {
    PrimeIdeal P;
    int i = 1;
    FieldElement pi;  // totally positive generator of P, the printed label
    FieldElement u;
    long norm() const { return P.norm().get_si(); }
    /** N^(i-1) (N+1)(N^2+1). */
    long degree() const;
    std::string label() const;
};
HeckeOperator hecke_operator(const PrimeIdeal& P, int i);
/** Prime ideals of norm <= bound, by norm and then by the printed generator. */
std::vector<PrimeIdeal> primes_up_to(long d, long bound);
/** Totally positive generator of P with the smallest trace. */
FieldElement prime_label(const PrimeIdeal& P);

/**
 * One coset h Gamma_b of S(u; a, b) = { h : h gamma_b conj(h)^t = u gamma_a }:
 * L_a h^-1 is a neighbour of L_a isometric to L_b after scaling by u.
 */
struct Neighbor {
    int a = 0, b = 0;
    DMat h{};
};

/**
 * All neighbours for T.  At the dyadic prime they come from the sets S(u; a, b)
 * split into cosets; at odd primes from Lagrangian planes (i = 1) or lines
 * with their lifts (i = 2) in L / P L, each identified by an explicit isometry.
 */
std::vector<Neighbor> hecke_neighbors(const OrderArith& R, const ClassSet& cs, const HeckeOperator& T);

/** 4x4 matrix over F_P of x -> x X on (O_D / P)^2 in the coordinates of flags.h. */
FMat4 transport(const LocalSplitting& LS, const QuatMat2& X);
FMat4 transport(const LocalSplitting& LS, const DMat& h);

/**
 * Functions on the flags of each class modulo its unitary group: the basis is
 * (class, orbit) in class order.  Level one has one orbit per class.
 */
class HeckeModule {
  public:
    HeckeModule(const OrderArith& R, const ClassSet& cs, const std::optional<PrimeIdeal>& level,
                FlagVariant v = FlagVariant::Siegel);
    size_t dim() const { return cls_.size(); }
    int class_of(size_t k) const { return cls_[k]; }
    long orbit_size(size_t k) const { return size_[k]; }
    const std::optional<PrimeIdeal>& level() const { return level_; }
    bool at_level(const HeckeOperator& T) const { return level_ && level_->ideal == T.P.ideal; }
    /** l with l B = deg(T) l for every Brandt matrix (l_k = |orbit| / |Gamma_a|). */
    std::vector<Rational> eisenstein_functional() const;

    /**
     * entry [(a, O), (b, O')] = #{ neighbours h of class a with x h in O' } for x in O.
     * At the level prime, neighbours that collapse the flag are dropped.  With
     * check set, every entry is recomputed from a second point of O.
     */
    ZMat brandt(const HeckeOperator& T, const std::vector<Neighbor>& nb, bool check = false) const;

  private:
    const OrderArith& R_;
    const ClassSet& cs_;
    std::optional<PrimeIdeal> level_;
    std::unique_ptr<LocalSplitting> LS_;
    std::unique_ptr<FlagSpace> flags_;
    std::vector<FMat4> a_, ainv_;           // transport of alpha_a and its inverse
    std::vector<std::vector<long>> basis_;  // per class: flag -> basis index
    std::vector<int> cls_;
    std::vector<size_t> rep_, rep2_;
    std::vector<long> size_;
};

/** Decomposition data for the cuspidal part. */
struct Eigensystem {
    long dim = 0;                    // dimension of the constituent
    Poly field;                      // minimal polynomial of the generator
    long disc = 1;                   // field discriminant (degree two)
    std::vector<std::string> labels; // operator labels
    // values x + y omega_disc (degree <= 2); otherwise only charpolys
    std::vector<std::array<Integer, 2>> values;
    std::vector<Poly> charpolys;     // per operator, irreducible factor on the constituent
    bool rational() const { return field.size() == 2; }
    bool quadratic() const { return field.size() == 3; }
    std::string value_str(size_t k) const;
};

struct CuspSplit {
    std::vector<Rational> functional;
    long dim_m = 0, dim_s = 0;
    std::vector<QMat> ops;  // operators on the cuspidal quotient
};

/** Checks the Eisenstein functional against every matrix and restricts to its kernel. */
CuspSplit eisenstein_and_cusp(const HeckeModule& M, const std::vector<ZMat>& brandt,
                              const std::vector<long>& degrees);

/**
 * Simultaneous decomposition of the cusp space under the operators listed in
 * split (T_1 matrices); values of every operator are read off each constituent.
 */
std::vector<Eigensystem> eigensystems(const CuspSplit& S, const std::vector<std::string>& labels,
                                      const std::vector<size_t>& split);

/** (lambda_1, lambda_2) of the lift of a weight-k form with eigenvalue a at a prime of norm N. */
std::pair<Integer, Integer> sk_eigenvalues(const Integer& a, long N, int k);
/** a_P from lambda_1 when lambda_2 agrees at every prime, else nothing. */
std::optional<std::vector<Integer>> sk_detect(const std::vector<std::pair<Integer, Integer>>& lambdas,
                                              const std::vector<long>& norms, int k = 4);

}  // namespace hsiegel
