#include "doctest.h"
#include "hsiegel/hermlat.hpp"

#include <random>

using namespace hsiegel;

namespace {

struct Setup {
    QuatOrder O = sqrt2_maximal_order();
    OrderArith R{O};
    long d = 2;
    FieldElement f(long a, long b = 0) const { return FieldElement(d, a, b); }
    HermitianMatrix id() const { return {f(1), f(1), R.algebra().zero()}; }
    // the second class as printed: s = t = 2, r = ((2+s2) + (-2+s2) i) / 2
    HermitianMatrix gamma2() const {
        QuatElement r(FieldElement(d, 1, Rational(1, 2)), FieldElement(d, -1, Rational(1, 2)), f(0), f(0));
        return {f(2), f(2), r};
    }
};

const Setup& S() {
    static Setup s;
    return s;
}

DMat random_dmat(std::mt19937& rng, int range) {
    std::uniform_int_distribution<int> dist(-range, range);
    DMat h;
    for (auto& v : h) v = dist(rng);
    return h;
}

HermitianMatrix gram_of(const DMat& h) { return congruence(S().R.algebra(), to_quat(S().R, h), S().id()); }

DMat elementary(const OrderArith& R, const OVec& a, bool upper) {
    DMat h = R.identity();
    int off = upper ? 8 : 16;
    for (int k = 0; k < 8; ++k) h[off + k] = a[k];
    return h;
}

}  // namespace

TEST_CASE("det_D examples") {
    const auto& A = S().R.algebra();
    CHECK(det_D(A, S().id()) == S().f(1));
    CHECK(det_D(A, S().gamma2()) == S().f(1));
    FieldElement m(2, 3, 1);
    CHECK(det_D(A, scale(A, S().gamma2(), m)) == m * m * det_D(A, S().gamma2()));
}

TEST_CASE("invariants of the unimodular lattices") {
    auto inv = lattice_invariants(S().R, S().id());
    CHECK(inv.norm == Ideal::unit(2));
    CHECK(inv.discriminant == Ideal::unit(2));
    CHECK(inv.dual_index == 1);
    auto inv2 = lattice_invariants(S().R, S().gamma2());
    CHECK(inv2.discriminant == Ideal::unit(2));
    CHECK(inv2.dual_index == 1);
}

TEST_CASE("dual index is a square on random sublattices") {
    std::mt19937 rng(5);
    int done = 0;
    while (done < 20) {
        DMat h = random_dmat(rng, 1);
        HermitianMatrix g = gram_of(h);
        if (det_D(S().R.algebra(), g).is_zero()) continue;
        auto inv = lattice_invariants(S().R, g);
        Integer n = det_D(S().R.algebra(), g).norm().get_num();
        if (n < 0) n = -n;
        Integer n4 = n * n * n * n;
        CHECK(inv.dual_index == n4);
        CHECK(is_square(inv.dual_index));
        ++done;
    }
}

TEST_CASE("index is multiplicative") {
    std::mt19937 rng(9);
    const auto& A = S().R.algebra();
    int done = 0;
    while (done < 20) {
        DMat h1 = random_dmat(rng, 1), h2 = random_dmat(rng, 1);
        Ideal i1 = lattice_index(S().R, h1), i2 = lattice_index(S().R, h2);
        if (i1.is_zero() || i2.is_zero()) continue;
        CHECK(lattice_index(S().R, S().R.mul(h1, h2)) == i1 * i2);
        // d of the image lattice equals d times the index
        HermitianMatrix g = congruence(A, to_quat(S().R, h1), S().gamma2());
        CHECK(Ideal::principal(det_D(A, g)) == Ideal::principal(det_D(A, S().gamma2())) * i1);
        ++done;
    }
    CHECK(lattice_index(S().R, S().R.identity()) == Ideal::unit(2));
}

TEST_CASE("genus verdicts") {
    CHECK(genus_tests(S().R, S().id()).in_principal_genus);
    CHECK(genus_tests(S().R, S().gamma2()).in_principal_genus);
    HermitianMatrix bad{S().f(1), S().f(1, 1), S().R.algebra().zero()};
    CHECK_FALSE(genus_tests(S().R, bad).in_principal_genus);
}

TEST_CASE("solve_alpha round trips") {
    const auto& A = S().R.algebra();
    FieldElement q(2, 0, 1);
    QuatMat2 a1 = solve_alpha(S().R, S().id(), q);
    CHECK(a1[0] == A.one());
    CHECK(a1[3] == A.one());
    CHECK(a1[2].is_zero());
    QuatMat2 a2 = solve_alpha(S().R, S().gamma2(), q);
    HermitianMatrix back = congruence(A, a2, S().id());
    CHECK(back.s == S().f(2));
    CHECK(back.r == S().gamma2().r);
    // only powers of sqrt 2 in the denominators
    for (auto& e : a2)
        for (auto& c : S().O.coords(A.mul(e, QuatElement::scalar(S().f(8))))) CHECK(c.get_den() == 1);
    HermitianMatrix g{S().f(2), S().f(1), A.zero()};
    QuatMat2 a3 = solve_alpha(S().R, g, q);
    CHECK(A.nr(a3[0]) == S().f(2));
}

TEST_CASE("unitary group of the standard form against a brute-force oracle") {
    const auto& R = S().R;
    HermForm F(R, S().id());
    auto st = stabilizer(F);
    CHECK(st.size() == 4608);
    bool has_id = false;
    for (auto& h : st) has_id |= h == R.identity();
    CHECK(has_id);
    for (size_t i = 0; i < st.size(); i += 97) {
        HermitianMatrix g = gram_of(st[i]);
        CHECK(g.s == S().f(1));
        CHECK(g.t == S().f(1));
        CHECK(g.r.is_zero());
    }
    // oracle: units from a box search, unitary matrices from pairs of rows
    std::vector<OVec> units;
    OVec c;
    std::function<void(int)> rec = [&](int k) {
        if (k == 8) {
            if (R.nr(c) == std::array<int64_t, 2>{1, 0}) units.push_back(c);
            return;
        }
        for (int v = -2; v <= 2; ++v) {
            c[k] = v;
            rec(k + 1);
        }
    };
    rec(0);
    CHECK(units.size() == 48);
    std::vector<DVec> rows;
    for (auto& u : units) {
        DVec a{}, b{};
        std::copy(u.begin(), u.end(), a.begin());
        std::copy(u.begin(), u.end(), b.begin() + 8);
        rows.push_back(a);
        rows.push_back(b);
    }
    long pairs = 0;
    for (auto& x : rows)
        for (auto& y : rows)
            if (F.H(y, x) == OVec{}) ++pairs;
    CHECK(pairs == 4608);
}

TEST_CASE("stabilizer of the second class") {
    HermForm F(S().R, S().gamma2());
    CHECK(stabilizer(F).size() == 3840);
}

TEST_CASE("equivalence test") {
    const auto& R = S().R;
    HermForm F1(R, S().id()), F2(R, S().gamma2());
    CHECK(equivalent(F1, F1));
    CHECK_FALSE(equivalent(F1, F2));
    CHECK_FALSE(equivalent(F2, F1));
    std::mt19937 rng(2);
    std::uniform_int_distribution<int> dist(-1, 1);
    for (int t = 0; t < 3; ++t) {
        OVec a, b;
        for (auto& v : a) v = dist(rng);
        for (auto& v : b) v = dist(rng);
        DMat h = R.mul(elementary(R, a, true), elementary(R, b, false));
        HermitianMatrix g = congruence(R.algebra(), to_quat(R, h), S().gamma2());
        HermForm G(R, g);
        DMat w;
        CHECK(equivalent(F2, G, &w));
        CHECK(equivalent(G, F2));
        HermitianMatrix back = congruence(R.algebra(), to_quat(R, w), S().gamma2());
        CHECK(back.s == g.s);
        CHECK(back.t == g.t);
        CHECK(back.r == g.r);
    }
}

TEST_CASE("theta series separate the two classes") {
    const auto& R = S().R;
    HermForm F1(R, S().id()), F2(R, S().gamma2());
    auto st1 = stabilizer(F1);
    auto th1 = theta_coeffs(F1, st1, 4);
    REQUIRE(!th1.ideals.empty());
    CHECK(th1.ideals[0] == S().f(1));
    CHECK(th1.vectors[0] == 96);
    CHECK(th1.orbits[0] == 1);
    auto gens = tp_ideal_generators(2, 16);
    std::vector<std::array<int64_t, 2>> vals;
    for (auto& g : gens) vals.push_back(R.from_field(g));
    auto p1 = theta_prefix(F1, vals), p2 = theta_prefix(F2, vals);
    CHECK(p1 != p2);
    CHECK(p2[0] == 0);
}

TEST_CASE("mass") {
    CHECK(mass(2) == Rational(11, 23040));
    CHECK(mass(2) == Rational(1, 4608) + Rational(1, 3840));
    CHECK(mass(5) == Rational(1, 16) * Rational(1, 30) * Rational(1, 60));
    CHECK(mass(13) > 0);
}

TEST_CASE("class enumeration") {
    const auto& R = S().R;
    ClassSet cs = enumerate_classes(R, FieldElement(2, 0, 1));
    REQUIRE(cs.reps.size() == 2);
    CHECK(cs.stab_orders[0] == 4608);
    CHECK(cs.stab_orders[1] == 3840);
    CHECK(cs.mass == Rational(11, 23040));
    for (auto& r : cs.reps) CHECK(genus_tests(R, r.gamma).in_principal_genus);
    HermForm C2(R, cs.reps[1].gamma), P2(R, S().gamma2());
    CHECK(equivalent(C2, P2));
}

TEST_CASE("first Hecke sets at the dyadic prime") {
    const auto& R = S().R;
    HermForm F1(R, S().id()), F2(R, S().gamma2());
    PrimeIdeal P = factor_rational_prime(2, 2)[0].first;
    FieldElement u(2, 2, 1);
    const HermForm* F[2] = {&F1, &F2};
    long order[2] = {4608, 3840};
    long want[2][2] = {{9, 6}, {5, 10}};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            auto S1 = hecke_theta_sets(R, 1, P, u, *F[a], *F[b]);
            CHECK(static_cast<long>(S1.size()) == want[a][b] * order[b]);
            for (size_t i = 0; i < S1.size(); i += 501) {
                HermitianMatrix g = congruence(R.algebra(), to_quat(R, S1[i]), F[b]->matrix());
                CHECK(g.s == u * F[a]->matrix().s);
                CHECK(g.r == F[a]->matrix().r.scale(u));
            }
        }
}
