#include "doctest.h"
#include "hsiegel/cache.hpp"
#include "hsiegel/hecke.hpp"

#include <filesystem>
#include <map>
#include <random>
#include <unistd.h>

using namespace hsiegel;

namespace {

struct World {
    QuatOrder O = sqrt2_maximal_order();
    OrderArith R{O};
    ClassSet cs = enumerate_classes(R, FieldElement(2, 0, 1));
    std::vector<PrimeIdeal> primes = primes_up_to(2, 7);
    std::map<std::pair<size_t, int>, std::vector<Neighbor>> memo;

    const std::vector<Neighbor>& nb(size_t p, int i) {
        auto key = std::make_pair(p, i);
        auto it = memo.find(key);
        if (it == memo.end()) it = memo.emplace(key, hecke_neighbors(R, cs, hecke_operator(primes[p], i))).first;
        return it->second;
    }
};

World& W() {
    static World w;
    return w;
}

ZMat Z(std::initializer_list<std::initializer_list<long>> rows) {
    ZMat M;
    for (auto& r : rows) {
        std::vector<Integer> v;
        for (long x : r) v.push_back(x);
        M.push_back(v);
    }
    return M;
}

PrimeIdeal prime_of(long x, long y) { return factor_ideal(Ideal::principal(FieldElement(2, x, y)))[0].first; }

}  // namespace

TEST_CASE("operator labels and degrees") {
    auto ps = primes_up_to(2, 9);
    REQUIRE(ps.size() == 4);
    std::vector<std::string> want = {"T1(2+w)", "T1(3+w)", "T1(3-w)", "T1(3)"};
    std::vector<long> deg1 = {15, 400, 400, 820}, deg2 = {30, 2800, 2800, 7380};
    for (size_t k = 0; k < 4; ++k) {
        auto T1 = hecke_operator(ps[k], 1), T2 = hecke_operator(ps[k], 2);
        CHECK(T1.label() == want[k]);
        CHECK(T1.degree() == deg1[k]);
        CHECK(T2.degree() == deg2[k]);
        CHECK(T1.u.is_totally_positive());
        CHECK(Ideal::principal(T2.u) == ps[k].ideal * ps[k].ideal);
    }
    CHECK(hecke_operator(ps[0], 2).u == FieldElement(2, 2));
}

TEST_CASE("level one Brandt matrices") {
    auto& w = W();
    HeckeModule M(w.R, w.cs, std::nullopt);
    CHECK(M.dim() == 2);
    std::vector<std::pair<ZMat, ZMat>> want = {
        {Z({{9, 6}, {5, 10}}), Z({{12, 18}, {15, 15}})},
        {Z({{208, 192}, {160, 240}}), Z({{1264, 1536}, {1280, 1520}})},
        {Z({{208, 192}, {160, 240}}), Z({{1264, 1536}, {1280, 1520}})},
    };
    for (size_t p = 0; p < 3; ++p) {
        CHECK(M.brandt(hecke_operator(w.primes[p], 1), w.nb(p, 1)) == want[p].first);
        CHECK(M.brandt(hecke_operator(w.primes[p], 2), w.nb(p, 2)) == want[p].second);
    }
}

TEST_CASE("neighbours are exact isometries") {
    auto& w = W();
    const QuatAlgebra& A = w.R.algebra();
    for (size_t p = 0; p < 3; ++p)
        for (int i = 1; i <= 2; ++i) {
            auto T = hecke_operator(w.primes[p], i);
            const auto& nb = w.nb(p, i);
            CHECK(static_cast<long>(nb.size()) == T.degree() * static_cast<long>(w.cs.reps.size()));
            for (size_t k = 0; k < nb.size(); k += 97) {
                const auto& n = nb[k];
                HermitianMatrix g = congruence(A, to_quat(w.R, n.h), w.cs.reps[n.b].gamma);
                HermitianMatrix e = scale(A, w.cs.reps[n.a].gamma, T.u);
                CHECK(g.s == e.s);
                CHECK(g.t == e.t);
                CHECK(g.r == e.r);
            }
        }
}

TEST_CASE("transport is multiplicative and lands in similitudes") {
    auto& w = W();
    LocalSplitting LS(w.O, prime_of(3, 1));
    const ResidueField& F = LS.field();
    const auto& rep = w.cs.reps[1];
    const QuatAlgebra& A = w.R.algebra();
    FMat4 a = transport(LS, rep.alpha);
    FMat4 ai = transport(LS, mat_mul(A, conj_transpose(A, rep.alpha), herm_inverse(A, rep.gamma)));
    CHECK(mat_mul(F, a, ai) == identity4(F));
    std::mt19937 rng(5);
    const auto& st = w.cs.stabilizers[1];
    std::uniform_int_distribution<size_t> pick(0, st.size() - 1);
    for (int t = 0; t < 20; ++t) {
        const DMat &x = st[pick(rng)], &y = st[pick(rng)];
        FMat4 gx = transport(LS, x), gy = transport(LS, y);
        CHECK(transport(LS, w.R.mul(x, y)) == mat_mul(F, gx, gy));
        // unitary for gamma_1, so a similitude only in the frame of alpha_1
        CHECK(similitude_factor(F, mat_mul(F, mat_mul(F, ai, gx), a)) == F.from_int(1));
    }
}

TEST_CASE("level (3+w): dimension, degree identity, commutativity") {
    auto& w = W();
    HeckeModule M(w.R, w.cs, prime_of(3, 1));
    CHECK(M.dim() == 6);
    std::vector<ZMat> Bs;
    std::vector<long> degs;
    for (size_t p = 0; p < 3; ++p)
        for (int i = 1; i <= 2; ++i) {
            auto T = hecke_operator(w.primes[p], i);
            ZMat B = M.brandt(T, w.nb(p, i), true);
            long q = T.norm();
            for (auto& row : B) {
                Integer s = 0;
                for (auto& x : row) s += x;
                if (M.at_level(T))
                    CHECK(s == (i == 1 ? q * q * q : 0));
                else
                    CHECK(s == T.degree());
            }
            Bs.push_back(B);
            degs.push_back(M.at_level(T) ? 0 : T.degree());
        }
    for (auto& X : Bs)
        for (auto& Y : Bs) CHECK(mul(X, Y) == mul(Y, X));
    auto S = eisenstein_and_cusp(M, Bs, degs);
    CHECK(S.dim_s == 5);
    CHECK(S.ops.size() == Bs.size());
    auto es = eigensystems(S, {"a", "b", "c", "d", "e", "f"}, {0, 2, 4});
    long total = 0;
    bool f1 = false, f2 = false;
    for (auto& e : es) {
        total += e.dim;
        if (!e.rational()) continue;
        std::vector<long> v;
        for (auto& x : e.values) v.push_back(x[0].get_si());
        if (v == std::vector<long>{10, 15, -7, 0, 60, 80}) f1 = true;
        if (v == std::vector<long>{-4, 1, 7, 0, 32, 80}) f2 = true;
    }
    CHECK(total == 5);
    CHECK(f1);
    CHECK(f2);
}

TEST_CASE("eigensystems of a synthetic quadratic block") {
    // A = companion of x^2 - 2, B = 3 + 2 A, C = diag-free rational operator on a rational line
    CuspSplit S;
    S.dim_s = 3;
    QMat A = {{0, 2, 0}, {1, 0, 0}, {0, 0, 5}};
    QMat B = {{3, 4, 0}, {2, 3, 0}, {0, 0, -1}};
    S.ops = {A, B};
    auto es = eigensystems(S, {"A", "B"}, {0});
    REQUIRE(es.size() == 2);
    CHECK(es[0].rational());
    CHECK(es[0].values[0][0] == 5);
    CHECK(es[0].values[1][0] == -1);
    CHECK(es[1].quadratic());
    CHECK(es[1].disc == 8);
    // values +-(w8) and 3 +- 2 w8 with matching signs
    CHECK(es[1].values[0][0] == 0);
    CHECK(abs(es[1].values[0][1]) == 1);
    CHECK(es[1].values[1][0] == 3);
    CHECK(es[1].values[1][1] == 2 * es[1].values[0][1]);
}

TEST_CASE("Saito-Kurokawa relations") {
    CHECK(sk_eigenvalues(-2, 2, 4) == std::make_pair(Integer(4), Integer(-3)));
    CHECK(sk_eigenvalues(26, 9, 4) == std::make_pair(Integer(116), Integer(340)));
    std::vector<std::pair<Integer, Integer>> lam = {{4, -3}, {48, -16}, {48, -16}, {116, 340}};
    std::vector<long> norms = {2, 7, 7, 9};
    auto a = sk_detect(lam, norms);
    REQUIRE(a);
    CHECK(*a == std::vector<Integer>{-2, -8, -8, 26});
    lam[3].second += 1;
    CHECK(!sk_detect(lam, norms));
}

TEST_CASE("cache round trip") {
    auto& w = W();
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / ("hsiegel-test-cache-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    Cache c(dir.string());
    FieldElement q(2, 0, 1);
    ClassSet a = c.classes(w.R, q, [&] { return w.cs; });
    ClassSet b = c.classes(w.R, q, []() -> ClassSet { throw std::logic_error("cache miss"); });
    CHECK(b.stab_orders == a.stab_orders);
    CHECK(b.mass == a.mass);
    CHECK(class_key(w.R, b) == class_key(w.R, a));
    CHECK(b.stabilizers == a.stabilizers);
    auto T = hecke_operator(w.primes[0], 1);
    auto n1 = c.neighbors(w.R, w.cs, T);
    auto n2 = c.neighbors(w.R, w.cs, T);
    REQUIRE(n1.size() == n2.size());
    for (size_t k = 0; k < n1.size(); ++k) {
        CHECK(n1[k].a == n2[k].a);
        CHECK(n1[k].h == n2[k].h);
    }
    for (auto& e : fs::directory_iterator(dir)) CHECK(e.path().string().find(".tmp.") == std::string::npos);
    fs::remove_all(dir);
}
