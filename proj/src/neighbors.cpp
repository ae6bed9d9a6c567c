#include "hsiegel/hecke.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace hsiegel {

long HeckeOperator::degree() const {
    long q = norm();
    long d = (q + 1) * (q * q + 1);
    return i == 1 ? d : q * d;
}

std::string HeckeOperator::label() const { return "T" + std::to_string(i) + "(" + basis_str(pi) + ")"; }

FieldElement prime_label(const PrimeIdeal& P) {
    FieldElement g;
    if (!P.ideal.tp_generator(g)) throw MathError("prime without a totally positive generator");
    return reduce_by_unit_squares(g);
}

HeckeOperator hecke_operator(const PrimeIdeal& P, int i) {
    if (i != 1 && i != 2) throw std::invalid_argument("Hecke operator index must be 1 or 2");
    HeckeOperator T;
    T.P = P;
    T.i = i;
    T.pi = prime_label(P);
    T.u = i == 1 ? T.pi : reduce_by_unit_squares(T.pi * T.pi);
    return T;
}

std::vector<PrimeIdeal> primes_up_to(long d, long bound) {
    std::vector<std::pair<PrimeIdeal, FieldElement>> ps;
    for (long p = 2; p <= bound; ++p) {
        if (!is_prime(p)) continue;
        for (auto& [P, e] : factor_rational_prime(p, d))
            if (P.norm() <= bound) ps.push_back({P, prime_label(P)});
    }
    std::stable_sort(ps.begin(), ps.end(), [](const auto& x, const auto& y) {
        if (x.first.norm() != y.first.norm()) return x.first.norm() < y.first.norm();
        auto [xa, xb] = x.second.basis_coords();
        auto [ya, yb] = y.second.basis_coords();
        if (xa != ya) return xa < ya;
        return xb > yb;
    });
    std::vector<PrimeIdeal> out;
    for (auto& pr : ps) out.push_back(pr.first);
    return out;
}

// ----------------------------------------------------------------- transport

namespace {

constexpr int kSigma[4] = {0, 2, 1, 3};

FMat4 assemble(const ResidueField& F, const std::array<LocalSplitting::Mat2, 4>& m) {
    (void)F;
    int G[4][4];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) G[2 * i + r][2 * j + c] = m[2 * i + j][2 * r + c];
    FMat4 g;
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) g[4 * k + l] = G[kSigma[k]][kSigma[l]];
    return g;
}

std::vector<long> as_long(const OVec& x) { return std::vector<long>(x.begin(), x.end()); }

}  // namespace

FMat4 transport(const LocalSplitting& LS, const QuatMat2& X) {
    std::array<LocalSplitting::Mat2, 4> m;
    for (int k = 0; k < 4; ++k) m[k] = LS.image(X[k]);
    return assemble(LS.field(), m);
}

FMat4 transport(const LocalSplitting& LS, const DMat& h) {
    std::array<LocalSplitting::Mat2, 4> m;
    for (int k = 0; k < 4; ++k) {
        OVec e;
        std::copy(h.begin() + 8 * k, h.begin() + 8 * k + 8, e.begin());
        m[k] = LS.image_coords(as_long(e));
    }
    return assemble(LS.field(), m);
}

// ---------------------------------------------------------------- neighbours

namespace {

IMat to_imat(const ZMat& M) {
    IMat out;
    for (auto& r : M) {
        IVec v;
        for (auto& x : r) v.push_back(x.get_si());
        out.push_back(v);
    }
    return out;
}

std::vector<long> flat_key(const ZMat& M) {
    std::vector<long> k;
    for (auto& r : M)
        for (auto& x : r) k.push_back(x.get_si());
    return k;
}

struct DMatHash {
    size_t operator()(const DMat& h) const {
        size_t s = 0;
        for (auto x : h) s = s * 1000003u + static_cast<size_t>(x);
        return s;
    }
};

std::vector<Neighbor> dyadic_neighbors(const OrderArith& R, const ClassSet& cs, const HeckeOperator& T) {
    std::vector<Neighbor> out;
    size_t h = cs.reps.size();
    for (size_t a = 0; a < h; ++a) {
        HermForm Fa(R, cs.reps[a].gamma);
        for (size_t b = 0; b < h; ++b) {
            HermForm Fb(R, cs.reps[b].gamma);
            auto S = hecke_theta_sets(R, T.i, T.P, T.u, Fa, Fb);
            std::unordered_set<DMat, DMatHash> seen;
            size_t cosets = 0;
            for (auto& x : S) {
                if (seen.count(x)) continue;
                ++cosets;
                out.push_back({static_cast<int>(a), static_cast<int>(b), x});
                for (auto& k : cs.stabilizers[b]) seen.insert(R.mul(x, k));
            }
            if (cosets * cs.stabilizers[b].size() != S.size())
                throw std::logic_error("Hecke set is not a union of cosets");
        }
    }
    return out;
}

// Lattice data of one class at an odd prime.
struct LocalClass {
    const OrderArith& R;
    const LocalSplitting& LS;
    const ResidueField& F;
    long p;
    int f;
    std::array<std::array<FVec, 2>, 16> rows;  // J2 coordinates of the rows of e_i alpha

    LocalClass(const OrderArith& R_, const LocalSplitting& LS_, const QuatMat2& alpha)
        : R(R_), LS(LS_), F(LS_.field()), p(F.p()), f(F.degree()) {
        std::array<LocalSplitting::Mat2, 4> A;
        for (int k = 0; k < 4; ++k) A[k] = LS.image(alpha[k]);
        for (int i = 0; i < 16; ++i) {
            int row = i / 8, k = i % 8;
            const auto& b = LS.images()[k];
            auto x1 = LS.mul(b, A[2 * row]), x2 = LS.mul(b, A[2 * row + 1]);
            for (int r = 0; r < 2; ++r) {
                FVec u{x1[2 * r], x1[2 * r + 1], x2[2 * r], x2[2 * r + 1]};
                rows[i][r] = {u[kSigma[0]], u[kSigma[1]], u[kSigma[2]], u[kSigma[3]]};
            }
        }
    }

    // F_p coordinates of an F_q value
    void put(ZMat& A, size_t i, size_t col, int e) const {
        if (f == 1) {
            A[i][col] = e;
        } else {
            A[i][col] = e % p;
            A[i][col + 1] = e / p;
        }
    }

    // {x : both rows of x alpha are orthogonal to every w}
    ZMat orthogonal(const std::vector<FVec>& ws) const {
        ZMat A = zmat(16, 2 * ws.size() * f);
        for (size_t i = 0; i < 16; ++i)
            for (int r = 0; r < 2; ++r)
                for (size_t j = 0; j < ws.size(); ++j)
                    put(A, i, (2 * j + r) * f, symplectic_pairing(F, rows[i][r], ws[j]));
        return kernel_mod_p_lattice(A, p);
    }

    // x with rows of x alpha equal to (v, 0) modulo P
    DVec lift_line(const FVec& v) const {
        size_t m = 8 * f;
        ZMat A = zmat(17, m);
        for (size_t i = 0; i < 16; ++i)
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 4; ++c) put(A, i, (4 * r + c) * f, rows[i][r][c]);
        for (int c = 0; c < 4; ++c) put(A, 16, c * f, F.neg(v[c]));
        ZMat K = kernel_mod_p_lattice(A, p);
        for (auto& row : K) {
            long t = Integer(row[16] % p).get_si();
            if (t < 0) t += p;
            if (t == 0) continue;
            long inv = 1;
            while ((inv * t) % p != 1) ++inv;
            DVec x;
            for (int i = 0; i < 16; ++i) {
                long e = Integer((row[i] * inv) % p).get_si();
                x[i] = e < 0 ? e + p : e;
            }
            return x;
        }
        throw std::logic_error("line does not lift");
    }
};

Integer index_of(const ZMat& H) {
    Integer d = 1;
    for (size_t i = 0; i < H.size(); ++i) d *= H[i][i];
    return d;
}

// h with h gamma_b conj(h)^t = u gamma_a from the rows of a sublattice of L_a
bool identify(const OrderArith& R, const ClassSet& cs, size_t a, const ZMat& N, const FieldElement& u,
              const std::vector<size_t>& order, Neighbor& out) {
    const QuatAlgebra& A = R.algebra();
    HermForm Fs(R, cs.reps[a].gamma, to_imat(N));
    for (size_t b : order) {
        const auto& gb = cs.reps[b].gamma;
        bool found = false;
        DMat hp{};
        Fs.represent(scale(A, gb, u), [&](const DMat& x) {
            hp = x;
            found = true;
            return false;
        });
        if (!found) continue;
        QuatMat2 h = mat_mul(A, mat_mul(A, as_mat2(A, cs.reps[a].gamma), conj_transpose(A, to_quat(R, hp))),
                             herm_inverse(A, gb));
        out = {static_cast<int>(a), static_cast<int>(b), from_quat(R, h)};
        HermitianMatrix c = congruence(A, h, gb);
        HermitianMatrix want = scale(A, cs.reps[a].gamma, u);
        if (c.s != want.s || c.t != want.t || c.r != want.r)
            throw std::logic_error("neighbour isometry check failed");
        return true;
    }
    return false;
}

std::vector<Neighbor> odd_neighbors(const OrderArith& R, const ClassSet& cs, const HeckeOperator& T) {
    LocalSplitting LS(R.order(), T.P);
    const ResidueField& F = LS.field();
    FlagSpace flags(F, T.i == 1 ? FlagVariant::Siegel : FlagVariant::Klingen);
    std::vector<size_t> order(cs.reps.size());
    for (size_t b = 0; b < order.size(); ++b) order[b] = b;
    std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
        return cs.reps[x].gamma.s.trace() < cs.reps[y].gamma.s.trace();
    });
    long q = F.size();
    std::vector<Neighbor> out;
    for (size_t a = 0; a < cs.reps.size(); ++a) {
        LocalClass C(R, LS, cs.reps[a].alpha);
        HermForm Fa(R, cs.reps[a].gamma);
        std::set<std::vector<long>> seen;
        auto emit = [&](const ZMat& N) {
            if (!seen.insert(flat_key(N)).second) return;
            Neighbor nb;
            if (!identify(R, cs, a, N, T.u, order, nb)) throw std::logic_error("neighbour in no known class");
            out.push_back(nb);
        };
        for (size_t fi = 0; fi < flags.size(); ++fi) {
            const Flag& fl = flags[fi];
            if (T.i == 1) {
                ZMat N = C.orthogonal(fl.rows);
                if (index_of(N) != Integer(q * q * q * q)) throw std::logic_error("Lagrangian lattice of wrong index");
                emit(N);
                continue;
            }
            const FVec& v = fl.rows[0];
            DVec x0 = C.lift_line(v);
            ZMat N1 = C.orthogonal({v});
            if (index_of(N1) != Integer(q * q)) throw std::logic_error("line complement of wrong index");
            FieldElement h00 = R.to_field(Fa.norm(x0)) / T.pi;
            std::vector<long> diag;
            for (size_t k = 0; k < 16; ++k) diag.push_back(N1[k][k].get_si());
            std::vector<long> c(16, 0);
            OVec pi_o = R.central(R.from_field(T.pi)[0], R.from_field(T.pi)[1]);
            long lifts = 0;
            while (true) {
                DVec z{};
                for (size_t k = 0; k < 16; ++k) z[k] = c[k];
                FieldElement t = h00 + R.to_field(R.trd(Fa.H(z, x0)));
                if (T.P.ideal.contains(t)) {
                    ++lifts;
                    DVec xt;
                    for (int s = 0; s < 2; ++s) {
                        OVec zs, xs;
                        for (int k = 0; k < 8; ++k) {
                            zs[k] = z[8 * s + k];
                            xs[k] = x0[8 * s + k];
                        }
                        OVec e = add(xs, R.mul(pi_o, zs));
                        for (int k = 0; k < 8; ++k) xt[8 * s + k] = e[k];
                    }
                    ZMat G = zmat(24, 16);
                    for (int k = 0; k < 8; ++k) {
                        OVec bk{};
                        bk[k] = 1;
                        for (int s = 0; s < 2; ++s) {
                            OVec xs;
                            for (int l = 0; l < 8; ++l) xs[l] = xt[8 * s + l];
                            OVec e = R.mul(bk, xs);
                            for (int l = 0; l < 8; ++l) G[k][8 * s + l] = e[l];
                        }
                    }
                    for (int k = 0; k < 16; ++k) {
                        for (int s = 0; s < 2; ++s) {
                            OVec xs;
                            for (int l = 0; l < 8; ++l) xs[l] = N1[k][8 * s + l].get_si();
                            OVec e = R.mul(pi_o, xs);
                            for (int l = 0; l < 8; ++l) G[8 + k][8 * s + l] = e[l];
                        }
                    }
                    ZMat N = hnf_rows(G);
                    if (N.size() != 16 || index_of(N) != Integer(q * q * q * q * q * q * q * q))
                        throw std::logic_error("isotropic lift of wrong index");
                    emit(N);
                }
                size_t k = 0;
                while (k < 16 && ++c[k] == diag[k]) c[k++] = 0;
                if (k == 16) break;
            }
            if (lifts != q) throw std::logic_error("unexpected number of isotropic lifts");
        }
        if (static_cast<long>(seen.size()) != T.degree()) throw std::logic_error("neighbour count differs from the degree");
    }
    return out;
}

}  // namespace

std::vector<Neighbor> hecke_neighbors(const OrderArith& R, const ClassSet& cs, const HeckeOperator& T) {
    if (T.P.p == 2) return dyadic_neighbors(R, cs, T);
    return odd_neighbors(R, cs, T);
}

}  // namespace hsiegel
