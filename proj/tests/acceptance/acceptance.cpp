// One line per acceptance criterion; exit status 1 if any fails.
#include "hsiegel/poly.hpp"
#include "hsiegel/verify.hpp"
#include "hsiegel/zlattice.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <unistd.h>

using namespace hsiegel;

namespace {

struct Suite {
    long checks = 0, failures = 0;
    void expect(bool ok) {
        ++checks;
        if (!ok) ++failures;
    }
};

IMat random_pd(std::mt19937& rng, int n) {
    std::uniform_int_distribution<int> dist(-2, 2);
    IMat B(n, IVec(n));
    for (;;) {
        ZMat Z = zmat(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) Z[i][j] = B[i][j] = dist(rng);
        if (det(Z) != 0) break;
    }
    return imat_mul(B, transpose(B));
}

// every norm <= T vector by a box search around the origin
std::set<IVec> box_vectors(const IMat& G, long T, int R) {
    int n = static_cast<int>(G.size());
    std::set<IVec> out;
    IVec x(n, -R);
    for (;;) {
        Integer q = quad_form(G, x.data());
        if (q > 0 && q <= T) out.insert(x);
        int i = 0;
        while (i < n && x[i] == R) x[i++] = -R;
        if (i == n) break;
        ++x[i];
    }
    return out;
}

int coord_bound(const IMat& G, long T) {
    QMat Q = qmat(G.size(), G.size());
    for (size_t i = 0; i < G.size(); ++i)
        for (size_t j = 0; j < G.size(); ++j) Q[i][j] = Rational(G[i][j]);
    QMat I = inverse(Q);
    double m = 0;
    for (size_t i = 0; i < G.size(); ++i) m = std::max(m, I[i][i].get_d());
    return static_cast<int>(std::sqrt(T * m)) + 1;
}

void zlattice_oracle(Suite& s) {
    std::mt19937 rng(101);
    int done = 0;
    for (int t = 0; done < 30 && t < 400; ++t) {
        int n = 1 + t % 6;
        IMat G = random_pd(rng, n);
        long T = 4 + t % 6;
        int R = coord_bound(G, T);
        if (std::pow(2.0 * R + 1, n) > 4e5) continue;
        std::set<IVec> got;
        Enumerator(G).run(T, false, false, [&](const int64_t* x) {
            got.insert(IVec(x, x + n));
            return true;
        });
        s.expect(got == box_vectors(G, T, R));
        ++done;
    }
    s.expect(done == 30);
}

DMat random_dmat(std::mt19937& rng) {
    std::uniform_int_distribution<int> dist(-1, 1);
    DMat h;
    for (auto& v : h) v = dist(rng);
    return h;
}

void lattice_index_oracle(Suite& s, const World& w) {
    const QuatAlgebra& A = w.R.algebra();
    std::mt19937 rng(202);
    HermitianMatrix id{FieldElement(2, 1), FieldElement(2, 1), A.zero()};
    int done = 0;
    while (done < 20) {
        DMat h = random_dmat(rng);
        HermitianMatrix g = congruence(A, to_quat(w.R, h), id);
        if (det_D(A, g).is_zero()) continue;
        Integer idx = lattice_invariants(w.R, g).dual_index;
        s.expect(is_square(idx));
        ++done;
    }
    done = 0;
    const HermitianMatrix& g2 = w.cs.reps[1].gamma;
    while (done < 20) {
        DMat h1 = random_dmat(rng), h2 = random_dmat(rng);
        Ideal i1 = lattice_index(w.R, h1), i2 = lattice_index(w.R, h2);
        if (i1.is_zero() || i2.is_zero()) continue;
        s.expect(lattice_index(w.R, w.R.mul(h1, h2)) == i1 * i2);
        HermitianMatrix g = congruence(A, to_quat(w.R, h1), g2);
        s.expect(Ideal::principal(det_D(A, g)) == Ideal::principal(det_D(A, g2)) * i1);
        ++done;
    }
}

void equivalence_round_trips(Suite& s, const World& w) {
    std::mt19937 rng(303);
    std::uniform_int_distribution<int> dist(-1, 1);
    const QuatAlgebra& A = w.R.algebra();
    for (size_t a = 0; a < w.cs.reps.size(); ++a) {
        HermForm F(w.R, w.cs.reps[a].gamma);
        for (int t = 0; t < 3; ++t) {
            // an elementary unimodular change of basis
            DMat up = w.R.identity(), lo = w.R.identity();
            for (int k = 0; k < 8; ++k) {
                up[8 + k] = dist(rng);
                lo[16 + k] = dist(rng);
            }
            DMat h = w.R.mul(up, lo);
            HermitianMatrix g = congruence(A, to_quat(w.R, h), w.cs.reps[a].gamma);
            HermForm G(w.R, g);
            DMat wit;
            bool eq = equivalent(F, G, &wit);
            s.expect(eq);
            if (!eq) continue;
            HermitianMatrix back = congruence(A, to_quat(w.R, wit), w.cs.reps[a].gamma);
            s.expect(back.s == g.s && back.t == g.t && back.r == g.r);
            for (size_t b = 0; b < w.cs.reps.size(); ++b)
                if (b != a) s.expect(!equivalent(HermForm(w.R, w.cs.reps[b].gamma), G));
        }
    }
}

void factor_recovery(Suite& s) {
    std::mt19937 rng(404);
    std::uniform_int_distribution<int> c(-9, 9), e(1, 3);
    for (int t = 0; t < 20; ++t) {
        std::map<Poly, int> want;
        for (int k = 0; k < 4; ++k) {
            Poly g;
            if (k % 2 == 0) {
                g = {Integer(c(rng)), Integer(1)};
            } else {
                long b = c(rng), d = b * b / 4 + 1 + std::abs(c(rng));
                g = {Integer(d), Integer(b), Integer(1)};
            }
            want[g] += e(rng);
        }
        Poly f = {1};
        for (auto& [g, m] : want)
            for (int k = 0; k < m; ++k) f = poly_mul(f, g);
        auto got = factor(f);
        s.expect(std::map<Poly, int>(got.begin(), got.end()) == want);
        // a block diagonal matrix of companion blocks has charpoly f
        size_t n = static_cast<size_t>(poly_degree(f));
        ZMat M = zmat(n, n);
        size_t off = 0;
        for (auto& [g, m] : want)
            for (int k = 0; k < m; ++k) {
                size_t dg = static_cast<size_t>(poly_degree(g));
                for (size_t i = 1; i < dg; ++i) M[off + i][off + i - 1] = 1;
                for (size_t i = 0; i < dg; ++i) M[off + i][off + dg - 1] = -g[i];
                off += dg;
            }
        s.expect(charpoly(M) == f);
    }
}

}  // namespace

int main() {
    namespace fs = std::filesystem;
    std::string dir;
    if (const char* env = std::getenv("HSIEGEL_CACHE")) dir = env;
    bool temp = dir.empty();
    if (temp) dir = (fs::temp_directory_path() / ("hsiegel-acceptance-" + std::to_string(::getpid()))).string();
    Cache cache(dir);
    int failed = 0;
    auto report = [&](const CheckResult& r) {
        if (!r.pass) ++failed;
        std::printf("[%s] %d. %s (%s; %.1fs)\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(),
                    r.seconds);
        std::fflush(stdout);
    };
    try {
        run_reference_suite(cache, report);
    } catch (const std::exception& e) {
        std::printf("[FAIL] reference suite aborted: %s\n", e.what());
        ++failed;
    }

    auto t0 = std::chrono::steady_clock::now();
    Suite s;
    try {
        World w = default_world(cache);
        zlattice_oracle(s);
        lattice_index_oracle(s, w);
        equivalence_round_trips(s, w);
        factor_recovery(s);
    } catch (const std::exception& e) {
        ++s.failures;
        std::printf("oracle suite error: %s\n", e.what());
    }
    CheckResult r9{9, "oracle suites: enumeration vs box, dual index squares, index multiplicativity, equivalence round trips, factoring",
                   s.failures == 0, std::to_string(s.checks - s.failures) + "/" + std::to_string(s.checks) + " checks",
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
    report(r9);
    if (temp) fs::remove_all(dir);
    return failed ? 1 : 0;
}
