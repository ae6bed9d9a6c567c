#include "doctest.h"
#include "hsiegel/flags.hpp"

#include <algorithm>
#include <queue>
#include <random>
#include <set>

using namespace hsiegel;

namespace {

// F_p or F_q from a prime of some real quadratic field with the wanted norm
ResidueField field_of_norm(long q) {
    for (long d : {2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17}) {
        if (d == q) continue;
        long p = q;
        for (long r = 2; r <= q; ++r)
            if (q % r == 0) {
                p = r;
                break;
            }
        for (auto& [P, e] : factor_rational_prime(p, d))
            if (P.norm() == q) return ResidueField(P);
    }
    throw std::runtime_error("no field");
}

FVec unrank(long n, long q) {
    FVec x;
    for (int k = 3; k >= 0; --k) {
        x[k] = static_cast<int>(n % q);
        n /= q;
    }
    return x;
}

// all elements of the span of the rows, as a sorted set of ranks
std::set<long> span_set(const ResidueField& F, const std::vector<FVec>& rows) {
    long q = F.size();
    std::set<long> s;
    long total = 1;
    for (size_t i = 0; i < rows.size(); ++i) total *= q;
    for (long n = 0; n < total; ++n) {
        FVec v{0, 0, 0, 0};
        long m = n;
        for (auto& r : rows) {
            int c = static_cast<int>(m % q);
            m /= q;
            for (int k = 0; k < 4; ++k) v[k] = F.add(v[k], F.mul(c, r[k]));
        }
        long code = 0;
        for (int k = 0; k < 4; ++k) code = code * q + v[k];
        s.insert(code);
    }
    return s;
}

// counts from ordered bases: isotropic pairs / |GL_2|, and with a marked line / |B_2|
void brute_counts(const ResidueField& F, long& siegel, long& klingen, long& borel) {
    long q = F.size();
    long n4 = q * q * q * q, pairs = 0;
    for (long a = 1; a < n4; ++a)
        for (long b = 1; b < n4; ++b) {
            FVec x = unrank(a, q), y = unrank(b, q);
            if (symplectic_pairing(F, x, y) != 0) continue;
            // independence: y not a multiple of x
            bool dep = false;
            for (int c = 1; c < q && !dep; ++c) {
                bool all = true;
                for (int k = 0; k < 4; ++k)
                    if (y[k] != F.mul(c, x[k])) all = false;
                dep = all;
            }
            if (!dep) ++pairs;
        }
    siegel = pairs / ((q * q - 1) * (q * q - q));
    borel = pairs / ((q - 1) * (q * q - q));
    klingen = (n4 - 1) / (q - 1);
}

FMat4 transvection(const ResidueField& F, const FVec& v, int a) {
    // x -> x + a <x, v> v
    FMat4 g = identity4(F);
    for (int i = 0; i < 4; ++i) {
        FVec e{0, 0, 0, 0};
        e[i] = F.from_int(1);
        int c = F.mul(a, symplectic_pairing(F, e, v));
        for (int j = 0; j < 4; ++j) g[4 * i + j] = F.add(g[4 * i + j], F.mul(c, v[j]));
    }
    return g;
}

std::vector<FMat4> transvections(const ResidueField& F) {
    long q = F.size();
    std::vector<FMat4> gens;
    for (long n = 1; n < q * q * q * q; ++n) gens.push_back(transvection(F, unrank(n, q), F.from_int(1)));
    return gens;
}

long orbit_size(const FlagSpace& S, const std::vector<FMat4>& gens, size_t start) {
    std::vector<char> seen(S.size(), 0);
    std::queue<size_t> todo;
    todo.push(start);
    seen[start] = 1;
    long n = 1;
    while (!todo.empty()) {
        size_t i = todo.front();
        todo.pop();
        for (auto& g : gens) {
            long j = S.act_index(g, i);
            REQUIRE(j >= 0);
            if (!seen[j]) {
                seen[j] = 1;
                ++n;
                todo.push(j);
            }
        }
    }
    return n;
}

}  // namespace

TEST_CASE("flag counts against the closed formulas") {
    for (long q : {2L, 3L, 4L, 5L, 7L, 9L, 11L, 13L, 17L, 19L, 23L, 25L}) {
        ResidueField F = field_of_norm(q);
        REQUIRE(F.size() == q);
        for (auto v : {FlagVariant::Siegel, FlagVariant::Klingen, FlagVariant::Borel})
            CHECK(static_cast<long>(FlagSpace(F, v).size()) == flag_count_formula(q, v));
    }
    CHECK(flag_count_formula(2, FlagVariant::Siegel) == 15);
    CHECK(flag_count_formula(3, FlagVariant::Klingen) == 40);
    CHECK(flag_count_formula(3, FlagVariant::Borel) == 160);
}

TEST_CASE("flag counts against brute force subspace enumeration") {
    for (long q : {2L, 3L, 4L, 5L, 7L, 9L}) {
        ResidueField F = field_of_norm(q);
        long s, k, b;
        brute_counts(F, s, k, b);
        CHECK(static_cast<long>(FlagSpace(F, FlagVariant::Siegel).size()) == s);
        CHECK(static_cast<long>(FlagSpace(F, FlagVariant::Klingen).size()) == k);
        CHECK(static_cast<long>(FlagSpace(F, FlagVariant::Borel).size()) == b);
    }
}

TEST_CASE("flags are distinct subspaces with the defining properties") {
    for (long q : {2L, 3L}) {
        ResidueField F = field_of_norm(q);
        FlagSpace S(F, FlagVariant::Siegel), B(F, FlagVariant::Borel);
        std::set<std::set<long>> spans;
        for (auto& f : S.flags()) {
            CHECK(symplectic_pairing(F, f.rows[0], f.rows[1]) == 0);
            spans.insert(span_set(F, f.rows));
        }
        CHECK(spans.size() == S.size());
        std::set<std::pair<std::set<long>, std::set<long>>> pairs;
        for (auto& f : B.flags()) {
            auto P = span_set(F, {f.rows[1], f.rows[2]});
            auto L = span_set(F, {f.rows[0]});
            CHECK(std::includes(P.begin(), P.end(), L.begin(), L.end()));
            pairs.insert({L, P});
        }
        CHECK(pairs.size() == B.size());
    }
}

TEST_CASE("Borel flags fiber over Siegel flags") {
    ResidueField F = field_of_norm(7);
    FlagSpace S(F, FlagVariant::Siegel), B(F, FlagVariant::Borel);
    std::vector<long> fiber(S.size(), 0);
    for (auto& f : B.flags()) {
        Flag p;
        REQUIRE(S.canonical({f.rows[1], f.rows[2]}, p));
        long i = S.index(p);
        REQUIRE(i >= 0);
        ++fiber[i];
    }
    for (long c : fiber) CHECK(c == 8);
}

TEST_CASE("Sp4(F2) on the Siegel flags") {
    ResidueField F = field_of_norm(2);
    std::vector<FMat4> group;
    for (long n = 0; n < (1L << 16); ++n) {
        FMat4 g;
        for (int k = 0; k < 16; ++k) g[k] = (n >> k) & 1;
        if (similitude_factor(F, g) == 1) group.push_back(g);
    }
    CHECK(group.size() == 720);
    FlagSpace S(F, FlagVariant::Siegel);
    Flag std;
    REQUIRE(S.canonical({{1, 0, 0, 0}, {0, 1, 0, 0}}, std));
    std::set<long> orbit;
    long stab = 0;
    for (auto& g : group) {
        Flag y = S.act(g, std);
        orbit.insert(S.index(y));
        if (y == std) ++stab;
    }
    CHECK(orbit.size() == 15);
    CHECK(stab == 48);
}

TEST_CASE("the symplectic group is transitive on each flag space") {
    for (long q : {2L, 3L}) {
        ResidueField F = field_of_norm(q);
        auto gens = transvections(F);
        for (auto v : {FlagVariant::Siegel, FlagVariant::Klingen, FlagVariant::Borel}) {
            FlagSpace S(F, v);
            CHECK(orbit_size(S, gens, 0) == static_cast<long>(S.size()));
        }
    }
}

TEST_CASE("act is a right action and canonical forms are stable") {
    ResidueField F = field_of_norm(7);
    auto gens = transvections(F);
    std::mt19937 rng(5);
    std::uniform_int_distribution<size_t> pick(0, gens.size() - 1);
    auto random_element = [&] {
        FMat4 g = identity4(F);
        for (int k = 0; k < 6; ++k) g = mat_mul(F, g, gens[pick(rng)]);
        // a similitude with factor 3
        FMat4 d = identity4(F);
        d[10] = d[15] = F.from_int(3);
        return mat_mul(F, g, d);
    };
    for (auto v : {FlagVariant::Siegel, FlagVariant::Klingen, FlagVariant::Borel}) {
        FlagSpace S(F, v);
        std::uniform_int_distribution<size_t> pf(0, S.size() - 1);
        for (int t = 0; t < 50; ++t) {
            FMat4 g = random_element(), h = random_element();
            CHECK(similitude_factor(F, g) == F.from_int(3));
            const Flag& x = S[pf(rng)];
            CHECK(S.act(identity4(F), x) == x);
            CHECK(S.act(mat_mul(F, g, h), x) == S.act(h, S.act(g, x)));
            Flag c;
            REQUIRE(S.canonical(x.rows, c));
            CHECK(c == x);
            Flag y = S.act(g, x);
            CHECK(S.index(y) >= 0);
        }
    }
    FMat4 bad = identity4(F);
    bad[0] = F.from_int(2);
    CHECK_THROWS(FlagSpace(F, FlagVariant::Siegel).act(bad, FlagSpace(F, FlagVariant::Siegel)[0]));
}

TEST_CASE("Pluecker coordinates") {
    ResidueField F = field_of_norm(3);
    auto e12 = plucker(F, {{1, 0, 0, 0}, {0, 1, 0, 0}});
    CHECK(e12 == std::array<int, 6>{1, 0, 0, 0, 0, 0});
    FlagSpace S(F, FlagVariant::Siegel);
    std::set<std::array<int, 6>> points;
    for (auto& f : S.flags()) {
        auto a = plucker(F, f.rows);
        int quad = F.add(F.sub(F.mul(a[0], a[5]), F.mul(a[1], a[4])), F.mul(a[2], a[3]));
        CHECK(quad == 0);
        CHECK(F.add(a[1], a[4]) == 0);
        points.insert(a);
    }
    CHECK(points.size() == S.size());
    // a non-isotropic plane still lies on the quadric but off the linear section
    auto a = plucker(F, {{1, 0, 0, 0}, {0, 0, 1, 0}});
    CHECK(F.add(a[1], a[4]) != 0);
    CHECK_THROWS(plucker(F, {{1, 0, 0, 0}, {2, 0, 0, 0}}));
}
