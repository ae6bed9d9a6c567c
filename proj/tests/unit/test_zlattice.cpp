#include "doctest.h"
#include "hsiegel/quatalg.hpp"
#include "hsiegel/zlattice.hpp"

#include <map>
#include <random>
#include <set>

using namespace hsiegel;

namespace {

IMat random_pd(std::mt19937& rng, int n, int entry) {
    std::uniform_int_distribution<int> dist(-entry, entry);
    IMat B(n, IVec(n));
    for (;;) {
        for (auto& r : B)
            for (auto& v : r) v = dist(rng);
        ZMat Z(n, std::vector<Integer>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) Z[i][j] = B[i][j];
        if (det(Z) != 0) break;
    }
    IMat G = imat_mul(B, transpose(B));
    return G;
}

// every x in the box [-R, R]^n, used as an independent oracle
void box(int n, int R, const std::function<void(const IVec&)>& f) {
    IVec x(n, -R);
    for (;;) {
        f(x);
        int i = 0;
        while (i < n && x[i] == R) x[i++] = -R;
        if (i == n) return;
        ++x[i];
    }
}

// crude coordinate bound: |x_i| <= sqrt(T * (G^-1)_ii)
int coord_bound(const IMat& G, long T) {
    QMat Q = qmat(G.size(), G.size());
    for (size_t i = 0; i < G.size(); ++i)
        for (size_t j = 0; j < G.size(); ++j) Q[i][j] = Rational(G[i][j]);
    QMat I = inverse(Q);
    double m = 0;
    for (size_t i = 0; i < G.size(); ++i) m = std::max(m, I[i][i].get_d());
    return static_cast<int>(std::sqrt(T * m)) + 1;
}

}  // namespace

TEST_CASE("LDL of small Gram matrices") {
    auto L = cholesky_rational(GramLattice::from_int({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    for (auto& d : L.D) CHECK(d == 1);
    auto M = cholesky_rational(GramLattice::from_int({{2, 1}, {1, 2}}));
    CHECK(M.D[0] == 2);
    CHECK(M.D[1] == Rational(3, 2));
    CHECK(M.R[0][1] == Rational(1, 2));
    CHECK_THROWS_AS(GramLattice::from_int({{1, 2}, {2, 1}}), MathError);
}

TEST_CASE("LDL reconstructs random Gram matrices") {
    std::mt19937 rng(7);
    for (int t = 0; t < 20; ++t) {
        int n = 2 + t % 5;
        IMat G = random_pd(rng, n, 3);
        auto L = cholesky_rational(GramLattice::from_int(G));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Rational s = 0;
                for (int k = 0; k < n; ++k) s += L.R[k][i] * L.D[k] * L.R[k][j];
                CHECK(s == G[i][j]);
            }
    }
}

TEST_CASE("enumeration matches a box search") {
    std::mt19937 rng(11);
    for (int t = 0; t < 24; ++t) {
        int n = 1 + t % 5;
        IMat G = random_pd(rng, n, 2);
        long T = 6 + t % 7;
        int R = coord_bound(G, T);
        if (std::pow(2 * R + 1, n) > 3e5) continue;
        std::set<IVec> want_eq, want_le;
        box(n, R, [&](const IVec& x) {
            Integer q = quad_form(G, x.data());
            if (q == T) want_eq.insert(x);
            if (q > 0 && q <= T) want_le.insert(x);
        });
        Enumerator E(G);
        std::set<IVec> got_eq, got_le, got_half;
        E.run(T, true, false, [&](const int64_t* x) {
            got_eq.insert(IVec(x, x + n));
            return true;
        });
        E.run(T, false, false, [&](const int64_t* x) {
            got_le.insert(IVec(x, x + n));
            return true;
        });
        E.run(T, false, true, [&](const int64_t* x) {
            IVec v(x, x + n), w(n);
            for (int i = 0; i < n; ++i) w[i] = -v[i];
            CHECK(got_half.count(w) == 0);
            got_half.insert(v);
            return true;
        });
        CHECK(got_eq == want_eq);
        CHECK(got_le == want_le);
        CHECK(2 * got_half.size() == want_le.size());
        // the set is closed under x -> -x
        for (auto& v : got_eq) {
            IVec w(n);
            for (int i = 0; i < n; ++i) w[i] = -v[i];
            CHECK(got_eq.count(w) == 1);
        }
        auto vs = vectors_of_norm(GramLattice::from_int(G), Rational(T));
        CHECK(std::set<IVec>(vs.begin(), vs.end()) == want_eq);
        CHECK(std::is_sorted(vs.begin(), vs.end()));
    }
}

TEST_CASE("pinned enumeration solves an affine problem") {
    // Q(y0 + x) through the homogenised form with last coordinate 1
    IMat A = {{2, 1}, {1, 3}};
    IVec y0 = {1, 2};
    IMat H = {{A[0][0], A[0][1], A[0][0] * y0[0] + A[0][1] * y0[1]},
              {A[1][0], A[1][1], A[1][0] * y0[0] + A[1][1] * y0[1]},
              {0, 0, 0}};
    H[2][0] = H[0][2];
    H[2][1] = H[1][2];
    H[2][2] = quad_form(A, y0.data()).get_si();
    for (long T = 1; T <= 30; ++T) {
        std::set<IVec> want;
        box(2, 12, [&](const IVec& x) {
            IVec z = {x[0] + y0[0], x[1] + y0[1]};
            if (quad_form(A, z.data()) == T) want.insert(x);
        });
        std::set<IVec> got;
        Enumerator E(H, true);
        E.run(T, true, false, [&](const int64_t* x) {
            CHECK(x[2] == 1);
            got.insert(IVec{x[0], x[1]});
            return true;
        });
        CHECK(got == want);
    }
}

TEST_CASE("big entries fall back to exact arithmetic") {
    long s = 1L << 40;
    IMat G = {{s, 0}, {0, s}};
    Enumerator E(G);
    int count = 0;
    E.run(Integer(s) * 2, true, false, [&](const int64_t*) {
        ++count;
        return true;
    });
    CHECK(count == 4);
    IMat H = {{3 * s + 1, s}, {s, 5 * s + 7}};
    Enumerator F(H);
    std::set<IVec> got;
    Integer T = Integer(50) * s;
    F.run(T, false, false, [&](const int64_t* x) {
        got.insert(IVec(x, x + 2));
        return true;
    });
    std::set<IVec> want;
    box(2, 8, [&](const IVec& x) {
        Integer q = quad_form(H, x.data());
        if (q > 0 && q <= T) want.insert(x);
    });
    CHECK(got == want);
}

TEST_CASE("LLL is unimodular and preserves the form") {
    std::mt19937 rng(3);
    for (int t = 0; t < 10; ++t) {
        int n = 3 + t % 6;
        IMat G = random_pd(rng, n, 6);
        IMat R;
        IMat U = lll_gram(G, &R);
        CHECK(imat_mul(imat_mul(U, G), transpose(U)) == R);
        ZMat Z(n, std::vector<Integer>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) Z[i][j] = U[i][j];
        Integer d = det(Z);
        CHECK((d == 1 || d == -1));
    }
}

TEST_CASE("units of the maximal order") {
    // nr = 1 elements: on the trace form Tr_{F/Q} trd(x conj y) they have norm 4
    QuatOrder O = sqrt2_maximal_order();
    const QuatAlgebra& A = O.algebra();
    IMat G(8, IVec(8));
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            FieldElement t = A.trd(A.mul(O.basis()[i], A.conj(O.basis()[j])));
            G[i][j] = t.trace().get_num().get_si();
        }
    auto vs = vectors_of_norm(GramLattice::from_int(G), 4);
    int units = 0;
    for (auto& v : vs) {
        std::vector<long> c(v.begin(), v.end());
        if (A.nr(O.element(c)) == FieldElement(2, 1)) ++units;
    }
    CHECK(units == 48);
    // independent count over a box
    int boxed = 0;
    box(8, 2, [&](const IVec& v) {
        if (quad_form(G, v.data()) != 4) return;
        std::vector<long> c(v.begin(), v.end());
        if (A.nr(O.element(c)) == FieldElement(2, 1)) ++boxed;
    });
    CHECK(boxed == units);
}
