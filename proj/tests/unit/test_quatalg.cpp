#include "doctest.h"
#include "hsiegel/quatalg.hpp"

#include <random>

using namespace hsiegel;

namespace {

QuatElement rand_q(std::mt19937& rng, long d) {
    std::uniform_int_distribution<int> u(-9, 9), v(1, 4);
    QuatElement x;
    for (auto& c : x.c) c = FieldElement(d, Rational(u(rng), v(rng)), Rational(u(rng), v(rng)));
    return x;
}

int rank_mod_p(std::vector<std::vector<int>> M, long p) {
    int r = 0;
    size_t m = M.empty() ? 0 : M[0].size();
    for (size_t c = 0; c < m; ++c) {
        size_t piv = r;
        while (piv < M.size() && M[piv][c] % p == 0) ++piv;
        if (piv == M.size()) continue;
        std::swap(M[piv], M[r]);
        long inv = 1;
        while ((inv * M[r][c]) % p != 1) ++inv;
        for (auto& x : M[r]) x = static_cast<int>((x * inv) % p);
        for (size_t i = 0; i < M.size(); ++i) {
            if (static_cast<int>(i) == r) continue;
            long f = M[i][c];
            for (size_t k = 0; k < m; ++k) M[i][k] = static_cast<int>(((M[i][k] - f * M[r][k]) % p + p) % p);
        }
        ++r;
    }
    return r;
}

int det2(const ResidueField& F, const LocalSplitting::Mat2& m) { return F.sub(F.mul(m[0], m[3]), F.mul(m[1], m[2])); }

}  // namespace

TEST_CASE("quaternion arithmetic") {
    QuatAlgebra A(2, FieldElement(2, -1), FieldElement(2, -1));
    auto r = conj_nr_tr(A, A.one());
    CHECK(r.conj == A.one());
    CHECK(r.nr == FieldElement(2, 1));
    CHECK(r.tr == FieldElement(2, 2));
    FieldElement h(2, 0, Rational(1, 2)), z(2, 0);
    CHECK(A.nr(QuatElement(h, h, z, z)) == FieldElement(2, 1));
    std::mt19937 rng(5);
    for (int n = 0; n < 200; ++n) {
        QuatElement x = rand_q(rng, 2), y = rand_q(rng, 2);
        CHECK(A.nr(A.mul(x, y)) == A.nr(x) * A.nr(y));
        CHECK(A.conj(A.mul(x, y)) == A.mul(A.conj(y), A.conj(x)));
        CHECK(A.mul(x, A.conj(x)) == QuatElement::scalar(A.nr(x)));
    }
}

TEST_CASE("maximal order over Q(sqrt 2)") {
    QuatOrder O = sqrt2_maximal_order();
    const QuatAlgebra& A = O.algebra();
    CHECK(O.contains(A.one()));
    for (auto& x : O.basis()) {
        CHECK(A.nr(x).is_integral());
        CHECK(A.trd(x).is_integral());
        for (auto& y : O.basis()) CHECK(O.contains(A.mul(x, y)));
    }
    CHECK(verify_maximal_order(O));
    CHECK(ramified_primes(A).size() == 2);
    for (auto& pl : ramified_primes(A)) CHECK(pl.infinite);
    // the suborder O_F<1, i, j, k> is not maximal
    FieldElement o(2, 1), z(2, 0);
    QuatOrder S = QuatOrder::from_generators(A, {QuatElement(z, o, z, z), QuatElement(z, z, o, z)});
    CHECK(S.discriminant() != O.discriminant());
    CHECK_FALSE(verify_maximal_order(S));
    CHECK(is_order(A, O.basis()));
}

TEST_CASE("ramification over Q(sqrt 5)") {
    QuatAlgebra A(5, FieldElement(5, -1), FieldElement(5, -1));
    auto R = ramified_primes(A);
    int finite = 0;
    for (auto& pl : R) finite += !pl.infinite;
    CHECK(finite == 0);
    CHECK(R.size() % 2 == 0);
    // over Q(sqrt 3) the dyadic prime ramifies: (3 primes) -> disc (sqrt 3 + 1)?
    QuatAlgebra B(3, FieldElement(3, -1), FieldElement(3, -1));
    CHECK(ramified_primes(B).size() % 2 == 0);
}

TEST_CASE("local splitting") {
    QuatOrder O = sqrt2_maximal_order();
    const QuatAlgebra& A = O.algebra();
    FieldElement o(2, 1), z(2, 0);
    QuatElement i(z, o, z, z), j(z, z, o, z);
    for (long p : {3L, 7L, 17L, 5L}) {
        for (auto& [P, e] : factor_rational_prime(p, 2)) {
            LocalSplitting S(O, P);
            const ResidueField& F = S.field();
            auto I = S.image(i), J = S.image(j), one = S.image(A.one());
            CHECK(one == LocalSplitting::Mat2{1, 0, 0, 1});
            int m1 = F.neg(1);
            CHECK(S.mul(I, I) == LocalSplitting::Mat2{m1, 0, 0, m1});
            CHECK(S.mul(J, J) == LocalSplitting::Mat2{m1, 0, 0, m1});
            auto IJ = S.mul(I, J), JI = S.mul(J, I);
            for (int k = 0; k < 4; ++k) CHECK(IJ[k] == F.neg(JI[k]));
            // spanning: the 8 images span M_2(F_P) over F_p
            std::mt19937 rng(11);
            std::uniform_int_distribution<long> u(-20, 20);
            for (int n = 0; n < 100; ++n) {
                std::vector<long> c(8);
                for (auto& x : c) x = u(rng);
                QuatElement x = O.element(c);
                CHECK(det2(F, S.image(x)) == F.reduce(A.nr(x)));
                auto y = S.image(x);
                CHECK(F.add(y[0], y[3]) == F.reduce(A.trd(x)));
            }
            FMat span;
            for (auto& m : S.images()) {
                std::vector<int> row;
                for (int k = 0; k < 4; ++k) {
                    // F_p-coordinates of the entries
                    row.push_back(m[k] % static_cast<int>(P.p));
                    if (F.degree() == 2) row.push_back(m[k] / static_cast<int>(P.p));
                }
                span.push_back(row);
            }
            CHECK(rank_mod_p(span, p) == 4 * F.degree());
        }
    }
}
