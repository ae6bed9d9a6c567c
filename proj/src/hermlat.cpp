#include "hsiegel/hermlat.hpp"

#include <algorithm>
#include <set>

namespace hsiegel {

OVec add(const OVec& a, const OVec& b) {
    OVec r;
    for (int i = 0; i < 8; ++i) r[i] = a[i] + b[i];
    return r;
}
OVec sub(const OVec& a, const OVec& b) {
    OVec r;
    for (int i = 0; i < 8; ++i) r[i] = a[i] - b[i];
    return r;
}
OVec neg(const OVec& a) {
    OVec r;
    for (int i = 0; i < 8; ++i) r[i] = -a[i];
    return r;
}

namespace {

OVec part(const DVec& x, int k) {
    OVec r;
    std::copy(x.begin() + 8 * k, x.begin() + 8 * k + 8, r.begin());
    return r;
}
OVec entry(const DMat& h, int i, int j) {
    OVec r;
    std::copy(h.begin() + 16 * i + 8 * j, h.begin() + 16 * i + 8 * j + 8, r.begin());
    return r;
}
void set_part(DVec& x, int k, const OVec& v) { std::copy(v.begin(), v.end(), x.begin() + 8 * k); }
void set_entry(DMat& h, int i, int j, const OVec& v) { std::copy(v.begin(), v.end(), h.begin() + 16 * i + 8 * j); }

int64_t qf(const IMat& G, const int64_t* x, int n) {
    int64_t s = 0;
    for (int i = 0; i < n; ++i) {
        if (!x[i]) continue;
        int64_t r = 0;
        for (int j = 0; j < n; ++j) r += G[i][j] * x[j];
        s += r * x[i];
    }
    return s;
}

}  // namespace

// -------------------------------------------------------------- OrderArith

OrderArith::OrderArith(const QuatOrder& O) : O_(O) {
    const auto& m = O.mult_table();
    mt_.resize(8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            for (int k = 0; k < 8; ++k) mt_[i][j][k] = m[i][j][k];
    for (int i = 0; i < 8; ++i)
        for (int k = 0; k < 8; ++k) conj_[i][k] = O.conj_matrix()[i][k];
    for (int k = 0; k < 8; ++k) {
        one_[k] = O.one_coords()[k];
        w_[k] = O.w_coords()[k];
    }
    // pick two coordinates on which 1 and w are independent, unimodular if possible
    int64_t best = 0;
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) {
            int64_t dt = one_[i] * w_[j] - one_[j] * w_[i];
            if (dt != 0 && (best == 0 || std::llabs(dt) < std::llabs(best))) {
                best = dt;
                ci_ = i;
                cj_ = j;
            }
        }
    if (best == 0) throw MathError("1 and w are dependent in the order");
    cdet_ = best;
}

OVec OrderArith::mul(const OVec& a, const OVec& b) const {
    OVec r{};
    for (int i = 0; i < 8; ++i) {
        if (!a[i]) continue;
        for (int j = 0; j < 8; ++j) {
            if (!b[j]) continue;
            int64_t c = a[i] * b[j];
            const OVec& m = mt_[i][j];
            for (int k = 0; k < 8; ++k) r[k] += c * m[k];
        }
    }
    return r;
}

OVec OrderArith::conj(const OVec& a) const {
    OVec r{};
    for (int i = 0; i < 8; ++i)
        if (a[i])
            for (int k = 0; k < 8; ++k) r[k] += a[i] * conj_[i][k];
    return r;
}

OVec OrderArith::central(int64_t x, int64_t y) const {
    OVec r;
    for (int k = 0; k < 8; ++k) r[k] = x * one_[k] + y * w_[k];
    return r;
}

std::array<int64_t, 2> OrderArith::central_coords(const OVec& a) const {
    int64_t xn = a[ci_] * w_[cj_] - a[cj_] * w_[ci_];
    int64_t yn = one_[ci_] * a[cj_] - one_[cj_] * a[ci_];
    if (xn % cdet_ || yn % cdet_) throw MathError("element is not central");
    std::array<int64_t, 2> c{xn / cdet_, yn / cdet_};
    if (central(c[0], c[1]) != a) throw MathError("element is not central");
    return c;
}

OVec OrderArith::from_quat(const QuatElement& x) const {
    auto c = O_.coords(x);
    OVec r;
    for (int k = 0; k < 8; ++k) {
        if (c[k].get_den() != 1 || !c[k].get_num().fits_slong_p()) throw MathError("element is not in the order");
        r[k] = c[k].get_num().get_si();
    }
    return r;
}

QuatElement OrderArith::to_quat(const OVec& a) const { return O_.element(std::vector<long>(a.begin(), a.end())); }

FieldElement OrderArith::to_field(const std::array<int64_t, 2>& c) const {
    return FieldElement::from_basis(d(), Rational(static_cast<long>(c[0])), Rational(static_cast<long>(c[1])));
}

std::array<int64_t, 2> OrderArith::from_field(const FieldElement& x) const {
    auto [a, b] = x.basis_coords();
    if (a.get_den() != 1 || b.get_den() != 1) throw MathError("field element is not integral");
    return {a.get_num().get_si(), b.get_num().get_si()};
}

DVec OrderArith::mul(const DVec& x, const DMat& h) const {
    DVec r;
    OVec x1 = part(x, 0), x2 = part(x, 1);
    set_part(r, 0, add(mul(x1, entry(h, 0, 0)), mul(x2, entry(h, 1, 0))));
    set_part(r, 1, add(mul(x1, entry(h, 0, 1)), mul(x2, entry(h, 1, 1))));
    return r;
}

DMat OrderArith::mul(const DMat& a, const DMat& b) const {
    DMat r;
    for (int i = 0; i < 2; ++i) {
        DVec row;
        std::copy(a.begin() + 16 * i, a.begin() + 16 * i + 16, row.begin());
        DVec p = mul(row, b);
        std::copy(p.begin(), p.end(), r.begin() + 16 * i);
    }
    return r;
}

DMat OrderArith::identity() const {
    DMat r{};
    set_entry(r, 0, 0, one());
    set_entry(r, 1, 1, one());
    return r;
}

// -------------------------------------------------------- hermitian matrices

FieldElement det_D(const QuatAlgebra& A, const HermitianMatrix& g) { return g.s * g.t - A.nr(g.r); }

bool is_totally_positive(const QuatAlgebra& A, const HermitianMatrix& g) {
    return g.s.is_totally_positive() && det_D(A, g).is_totally_positive();
}

HermitianMatrix scale(const QuatAlgebra&, const HermitianMatrix& g, const FieldElement& m) {
    return {g.s * m, g.t * m, g.r.scale(m)};
}

QuatMat2 mat_mul(const QuatAlgebra& A, const QuatMat2& x, const QuatMat2& y) {
    QuatMat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[2 * i + j] = A.mul(x[2 * i], y[j]) + A.mul(x[2 * i + 1], y[2 + j]);
    return r;
}

QuatMat2 conj_transpose(const QuatAlgebra& A, const QuatMat2& x) {
    return {A.conj(x[0]), A.conj(x[2]), A.conj(x[1]), A.conj(x[3])};
}

HermitianMatrix congruence(const QuatAlgebra& A, const QuatMat2& x, const HermitianMatrix& g) {
    QuatMat2 G = {QuatElement::scalar(g.s), A.conj(g.r), g.r, QuatElement::scalar(g.t)};
    QuatMat2 P = mat_mul(A, mat_mul(A, x, G), conj_transpose(A, x));
    if (!P[0].c[1].is_zero() || !P[0].c[2].is_zero() || !P[0].c[3].is_zero() || !P[3].c[1].is_zero() ||
        !P[3].c[2].is_zero() || !P[3].c[3].is_zero() || P[1] != A.conj(P[2]))
        throw MathError("congruence is not hermitian");
    return {P[0].c[0], P[3].c[0], P[2]};
}

QuatMat2 to_quat(const OrderArith& R, const DMat& h) {
    QuatMat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[2 * i + j] = R.to_quat(entry(h, i, j));
    return r;
}

DMat from_quat(const OrderArith& R, const QuatMat2& x) {
    DMat h;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            OVec e = R.from_quat(x[2 * i + j]);
            std::copy(e.begin(), e.end(), h.begin() + 16 * i + 8 * j);
        }
    return h;
}

// ----------------------------------------------------------------- HermForm

HermForm::HermForm(const OrderArith& R, const HermitianMatrix& g) : R_(R), g_(g) {
    s_ = R.central(R.from_field(g.s)[0], R.from_field(g.s)[1]);
    t_ = R.central(R.from_field(g.t)[0], R.from_field(g.t)[1]);
    r_ = R.from_quat(g.r);
    rbar_ = R.conj(r_);
    if (!is_totally_positive(R.algebra(), g)) throw MathError("hermitian form is not totally positive");
    G0_.assign(16, IVec(16));
    G1_.assign(16, IVec(16));
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            DVec x{}, y{};
            x[i] = 1;
            y[j] = 1;
            auto t = R.trd(H(x, y));
            G0_[i][j] = t[0];
            G1_[i][j] = t[1];
        }
}

HermForm::HermForm(const OrderArith& R, const HermitianMatrix& g, const IMat& basis) : HermForm(R, g) {
    if (basis.size() != 16) throw MathError("sublattice basis must have 16 rows");
    B_ = basis;
}

OVec HermForm::H(const DVec& x, const DVec& y) const {
    OVec x1 = part(x, 0), x2 = part(x, 1);
    OVec y1 = R_.conj(part(y, 0)), y2 = R_.conj(part(y, 1));
    OVec a = R_.mul(R_.mul(x1, s_), y1);
    OVec b = R_.mul(R_.mul(x1, rbar_), y2);
    OVec c = R_.mul(R_.mul(x2, r_), y1);
    OVec d = R_.mul(R_.mul(x2, t_), y2);
    return add(add(a, b), add(c, d));
}

std::array<int64_t, 2> HermForm::norm(const DVec& x) const { return R_.central_coords(H(x, x)); }

namespace {

// Gram of Tr(lambda * 2 H(x, x)) for lambda = conj(v); the target then lies on
// the tangent of the norm hyperbola at v, which keeps the candidates few
struct Weighted {
    IMat G;
    Integer target;
};
Weighted weighted(long d, const IMat& G0, const IMat& G1, const std::array<int64_t, 2>& v) {
    QuadField K(d);
    int64_t t = K.w_trace(), nc = K.w_const();
    FieldElement vf = FieldElement::from_basis(d, Rational(static_cast<long>(v[0])), Rational(static_cast<long>(v[1])));
    FieldElement lam = vf.conj();
    auto [l0q, l1q] = lam.basis_coords();
    int64_t l0 = l0q.get_num().get_si(), l1 = l1q.get_num().get_si();
    int64_t c0 = 2 * l0 + t * l1, c1 = 2 * nc * l1 + t * l0 + t * t * l1;
    size_t n = G0.size();
    Weighted w{IMat(n, IVec(n)), 0};
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) w.G[i][j] = c0 * G0[i][j] + c1 * G1[i][j];
    w.target = (lam * vf * FieldElement(d, 2)).trace().get_num();
    return w;
}

}  // namespace

void HermForm::vectors(const std::array<int64_t, 2>& v, const std::function<bool(const DVec&)>& f) const {
    FieldElement vf = R_.to_field(v);
    if (!vf.is_totally_positive()) return;
    Weighted w = weighted(R_.d(), G0_, G1_, v);
    IMat red;
    IMat U = B_.empty() ? lll_gram(w.G, &red) : lll_gram(imat_mul(imat_mul(B_, w.G), transpose(B_)), &red);
    if (!B_.empty()) U = imat_mul(U, B_);
    Enumerator E(red);
    E.run(w.target, true, false, [&](const int64_t* y) {
        DVec x{};
        for (int i = 0; i < 16; ++i)
            if (y[i])
                for (int j = 0; j < 16; ++j) x[j] += y[i] * U[i][j];
        if (qf(G1_, x.data(), 16) != 2 * v[1] || qf(G0_, x.data(), 16) != 2 * v[0]) return true;
        return f(x);
    });
}

long HermForm::count(const std::array<int64_t, 2>& v) const {
    long n = 0;
    vectors(v, [&](const DVec&) {
        ++n;
        return true;
    });
    return n;
}

namespace {

int rank_mod_prime(std::vector<std::vector<int64_t>> M, int64_t W) {
    const int64_t p = 2147483629;  // prime below 2^31
    for (auto& r : M)
        for (auto& v : r) v = ((v / W) % p + p) % p;
    int rk = 0, rows = static_cast<int>(M.size()), cols = rows ? static_cast<int>(M[0].size()) : 0;
    auto pw = [&](int64_t a, int64_t e) {
        int64_t r = 1;
        for (a %= p; e; e >>= 1, a = a * a % p)
            if (e & 1) r = r * a % p;
        return r;
    };
    for (int c = 0; c < cols && rk < rows; ++c) {
        int piv = rk;
        while (piv < rows && M[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(M[piv], M[rk]);
        int64_t inv = pw(M[rk][c], p - 2);
        for (int i = rk + 1; i < rows; ++i) {
            int64_t f = M[i][c] * inv % p;
            if (!f) continue;
            for (int j = c; j < cols; ++j) M[i][j] = ((M[i][j] - f * M[rk][j]) % p + p) % p;
        }
        ++rk;
    }
    return rk;
}

}  // namespace

bool solve_left_int(const IMat& A, const IVec& b, IVec& x0, IMat& kernel) {
    // Embedding lattice rows (e_i, 0, W A_i) and (0, 1, -W b): after LLL the
    // vectors with vanishing tail span {(z, t) : z A = t b}.  The result is
    // verified exactly; the HNF route is the fallback.
    int n = static_cast<int>(A.size()), m = static_cast<int>(b.size());
    for (int64_t W = 1 << 10; W <= (int64_t(1) << 22); W <<= 6) {
        int N = n + 1, M = n + 1 + m;
        IMat V(N, IVec(M, 0));
        for (int i = 0; i < n; ++i) {
            V[i][i] = 1;
            for (int j = 0; j < m; ++j) V[i][n + 1 + j] = W * A[i][j];
        }
        V[n][n] = 1;
        for (int j = 0; j < m; ++j) V[n][n + 1 + j] = -W * b[j];
        IMat G = imat_mul(V, transpose(V));
        IMat U = lll_gram(G);
        IMat B = imat_mul(U, V);
        std::vector<IVec> zero;
        for (auto& row : B)
            if (std::all_of(row.begin() + n + 1, row.end(), [](int64_t v) { return v == 0; }))
                zero.push_back(IVec(row.begin(), row.begin() + n + 1));
        // the tails of the other rows must be independent (rank modulo a
        // prime is a lower bound for the rank over Q)
        std::vector<std::vector<int64_t>> tails;
        for (auto& row : B)
            if (!std::all_of(row.begin() + n + 1, row.end(), [](int64_t v) { return v == 0; }))
                tails.push_back(std::vector<int64_t>(row.begin() + n + 1, row.end()));
        if (rank_mod_prime(tails, W) != static_cast<int>(tails.size())) continue;
        // gcd elimination on the t column
        int k = static_cast<int>(zero.size());
        for (int i = 1; i < k; ++i) {
            while (zero[i][n] != 0) {
                int64_t q = zero[0][n] / zero[i][n];
                for (int l = 0; l <= n; ++l) zero[0][l] -= q * zero[i][l];
                std::swap(zero[0], zero[i]);
            }
        }
        if (k == 0 || (zero[0][n] != 1 && zero[0][n] != -1)) return false;
        int64_t sg = zero[0][n];
        x0.assign(n, 0);
        for (int l = 0; l < n; ++l) x0[l] = sg * zero[0][l];
        kernel.clear();
        for (int i = 1; i < k; ++i) kernel.push_back(IVec(zero[i].begin(), zero[i].begin() + n));
        return true;
    }
    ZMat Z(n, std::vector<Integer>(m));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) Z[i][j] = static_cast<long>(A[i][j]);
    std::vector<Integer> bz(m), xz;
    for (int j = 0; j < m; ++j) bz[j] = static_cast<long>(b[j]);
    ZMat K;
    if (!solve_left(Z, bz, xz, K)) return false;
    throw MathError("kernel basis is too large for the small-integer solver");
}

void HermForm::affine(const DVec& x, const OVec& c, const std::array<int64_t, 2>& v,
                      const std::function<bool(const DVec&)>& f) const {
    // the map y -> H(y, x) is Z-linear
    IMat A(16, IVec(8));
    for (int i = 0; i < 16; ++i) {
        DVec e{};
        e[i] = 1;
        OVec h = H(e, x);
        std::copy(h.begin(), h.end(), A[i].begin());
    }
    IVec x0, b(c.begin(), c.end());
    IMat K;
    if (B_.empty()) {
        if (!solve_left_int(A, b, x0, K)) return;
    } else {
        IVec z0;
        IMat Kz;
        if (!solve_left_int(imat_mul(B_, A), b, z0, Kz)) return;
        x0 = imat_mul(IMat{z0}, B_)[0];
        K = imat_mul(Kz, B_);
    }
    int k = static_cast<int>(K.size());
    if (!R_.to_field(v).is_totally_positive()) return;
    Weighted w = weighted(R_.d(), G0_, G1_, v);
    IMat GK = imat_mul(imat_mul(K, w.G), transpose(K));
    IMat V = lll_gram(GK);
    K = imat_mul(V, K);
    IMat KG = imat_mul(K, w.G);
    IMat Hm(k + 1, IVec(k + 1));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            int64_t s = 0;
            for (int l = 0; l < 16; ++l) s += KG[i][l] * K[j][l];
            Hm[i][j] = s;
        }
        int64_t s = 0;
        for (int l = 0; l < 16; ++l) s += KG[i][l] * x0[l];
        Hm[i][k] = Hm[k][i] = s;
    }
    Hm[k][k] = qf(w.G, x0.data(), 16);
    Enumerator E(Hm, true);
    E.run(w.target, true, false, [&](const int64_t* z) {
        DVec y;
        for (int l = 0; l < 16; ++l) y[l] = x0[l];
        for (int i = 0; i < k; ++i)
            if (z[i])
                for (int l = 0; l < 16; ++l) y[l] += z[i] * K[i][l];
        if (qf(G1_, y.data(), 16) != 2 * v[1] || qf(G0_, y.data(), 16) != 2 * v[0]) return true;
        return f(y);
    });
}

void HermForm::represent(const HermitianMatrix& eta, const std::function<bool(const DMat&)>& f) const {
    auto se = R_.from_field(eta.s), te = R_.from_field(eta.t);
    OVec re = R_.from_quat(eta.r);
    bool stop = false;
    vectors(se, [&](const DVec& h1) {
        affine(h1, re, te, [&](const DVec& h2) {
            DMat h;
            std::copy(h1.begin(), h1.end(), h.begin());
            std::copy(h2.begin(), h2.end(), h.begin() + 16);
            stop = !f(h);
            return !stop;
        });
        return !stop;
    });
}

std::vector<DMat> HermForm::represent(const HermitianMatrix& eta) const {
    std::vector<DMat> out;
    represent(eta, [&](const DMat& h) {
        out.push_back(h);
        return true;
    });
    return out;
}

}  // namespace hsiegel

namespace hsiegel {

namespace {

// norm form of O_D on its Z-basis: nr(x) = (x G0 x + (x G1 x) w) / 2
struct NormForm {
    IMat G0, G1, GT, U, red;
    explicit NormForm(const OrderArith& R) {
        G0.assign(8, IVec(8));
        G1.assign(8, IVec(8));
        GT.assign(8, IVec(8));
        int64_t trw = QuadField(R.d()).w_trace();
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                OVec a{}, b{};
                a[i] = 1;
                b[j] = 1;
                auto t = R.trd(R.mul(a, R.conj(b)));
                G0[i][j] = t[0];
                G1[i][j] = t[1];
                GT[i][j] = 2 * t[0] + trw * t[1];
            }
        U = lll_gram(GT, &red);
    }
    bool find(const OrderArith& R, const std::array<int64_t, 2>& v, OVec& out) const {
        int64_t trw = QuadField(R.d()).w_trace();
        Integer target = Integer(2) * (2 * v[0] + trw * v[1]);
        if (target <= 0) return false;
        bool found = false;
        Enumerator(red).run(target, true, false, [&](const int64_t* y) {
            OVec x{};
            for (int i = 0; i < 8; ++i)
                if (y[i])
                    for (int j = 0; j < 8; ++j) x[j] += y[i] * U[i][j];
            if (qf(G1, x.data(), 8) != 2 * v[1]) return true;
            out = x;
            found = true;
            return false;
        });
        return found;
    }
};

FieldElement power(const FieldElement& x, int k) {
    FieldElement r(x.d(), 1);
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

}  // namespace

// smallest-trace representative of x modulo squares of units
FieldElement reduce_by_unit_squares(const FieldElement& x) {
    FieldElement e = fundamental_unit(x.d());
    FieldElement e2 = e * e;
    FieldElement y = x;
    for (;;) {
        FieldElement a = y * e2, b = y / e2;
        if (a.trace() < y.trace())
            y = a;
        else if (b.trace() < y.trace())
            y = b;
        else
            return y;
    }
}

// --------------------------------------------------------------- invariants

LatticeInvariants lattice_invariants(const OrderArith& R, const HermitianMatrix& gamma) {
    const QuatOrder& O = R.order();
    std::vector<FieldElement> gens = {gamma.s, gamma.t};
    for (auto& c : O.of_coords(gamma.r)) gens.push_back(c);
    LatticeInvariants inv;
    inv.norm = Ideal(R.d(), gens);
    inv.discriminant = Ideal::principal(det_D(R.algebra(), gamma));
    HermitianMatrix id{FieldElement(R.d(), 1), FieldElement(R.d(), 1), R.algebra().zero()};
    auto zgram = [&](const HermitianMatrix& g) {
        HermForm F(R, g);
        int64_t trw = QuadField(R.d()).w_trace();
        ZMat Z(16, std::vector<Integer>(16));
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j) {
                DVec x{}, y{};
                x[i] = 1;
                y[j] = 1;
                auto t = R.trd(F.H(x, y));
                Z[i][j] = static_cast<long>(2 * t[0] + trw * t[1]);
            }
        return det(Z);
    };
    Integer a = zgram(gamma), b = zgram(id);
    if (a % b != 0) throw MathError("dual index is not integral");
    inv.dual_index = a / b;
    return inv;
}

Ideal lattice_index(const OrderArith& R, const DMat& h) {
    HermitianMatrix id{FieldElement(R.d(), 1), FieldElement(R.d(), 1), R.algebra().zero()};
    HermitianMatrix hh = congruence(R.algebra(), to_quat(R, h), id);
    return Ideal::principal(det_D(R.algebra(), hh));
}

GenusVerdict genus_tests(const OrderArith& R, const HermitianMatrix& gamma) {
    GenusVerdict v;
    if (!is_totally_positive(R.algebra(), gamma)) return v;
    LatticeInvariants inv = lattice_invariants(R, gamma);
    Integer nn = inv.norm.norm(), n8;
    mpz_pow_ui(n8.get_mpz_t(), nn.get_mpz_t(), 8);
    v.is_modular = inv.dual_index == n8;
    // d_L nu^-2 must be a square ideal
    Ideal nu2 = inv.norm * inv.norm;
    v.in_principal_genus = v.is_modular && nu2.divides(inv.discriminant) && inv.discriminant.divide(nu2).is_square();
    return v;
}

// ------------------------------------------------------------------- alpha

QuatMat2 solve_alpha(const OrderArith& R, const HermitianMatrix& gamma, const FieldElement& q, int max_k) {
    const QuatAlgebra& A = R.algebra();
    long d = R.d();
    if (!is_totally_positive(A, gamma)) throw MathError("gamma is not totally positive");
    NormForm nf(R);
    FieldElement q2 = q * q;
    // element of norm target * q^(2k), divided by q^k
    auto root = [&](const FieldElement& target) -> QuatElement {
        if (target == FieldElement(d, 1)) return A.one();
        for (int k = 0; k <= max_k; ++k) {
            FieldElement v = target * power(q2, k);
            if (!v.is_integral()) continue;
            OVec x;
            if (nf.find(R, R.from_field(v), x)) return R.to_quat(x).scale(power(q, k).inverse());
        }
        throw MathError("no element of norm " + target.str() + " with q-exponent <= " + std::to_string(max_k));
    };
    QuatElement x = root(gamma.s);
    QuatElement y = A.mul(gamma.r, x).scale(gamma.s.inverse());
    QuatElement z = root(det_D(A, gamma) / gamma.s);
    QuatMat2 alpha = {x, A.zero(), y, z};
    HermitianMatrix id{FieldElement(d, 1), FieldElement(d, 1), A.zero()};
    HermitianMatrix back = congruence(A, alpha, id);
    if (back.s != gamma.s || back.t != gamma.t || back.r != gamma.r) throw MathError("alpha round trip failed");
    return alpha;
}

std::vector<DMat> stabilizer(const HermForm& F) { return F.represent(F.matrix()); }

// -------------------------------------------------------------------- theta

std::vector<long> theta_prefix(const HermForm& F, const std::vector<std::array<int64_t, 2>>& values) {
    std::vector<long> out;
    for (auto& v : values) out.push_back(F.count(v));
    return out;
}

std::vector<FieldElement> tp_ideal_generators(long d, long bound) {
    std::vector<FieldElement> out;
    for (long N = 1; N <= bound; ++N)
        for (long c = 1; c <= N; ++c) {
            if (N % c) continue;
            long a = N / c;
            if (a % c) continue;
            for (long b = 0; b < a; b += c) {
                FieldElement g2 = FieldElement::from_basis(d, Rational(b), Rational(c));
                Ideal I(d, {FieldElement(d, Rational(a)), g2});
                if (I.norm() != N || I.a() != a || I.b() != b || I.c() != c) continue;
                FieldElement g;
                if (!I.tp_generator(g)) throw MathError("narrow class number is not one");
                out.push_back(reduce_by_unit_squares(g));
            }
        }
    std::stable_sort(out.begin(), out.end(), [](const FieldElement& x, const FieldElement& y) {
        Rational nx = x.norm(), ny = y.norm();
        if (nx != ny) return nx < ny;
        return x.trace() < y.trace();
    });
    return out;
}

ThetaSeries theta_coeffs(const HermForm& F, const std::vector<DMat>& stab, long bound) {
    const OrderArith& R = F.arith();
    ThetaSeries th;
    th.ideals = tp_ideal_generators(R.d(), bound);
    for (auto& g : th.ideals) {
        std::vector<DVec> vs;
        F.vectors(R.from_field(g), [&](const DVec& x) {
            vs.push_back(x);
            return true;
        });
        std::sort(vs.begin(), vs.end());
        std::vector<char> seen(vs.size(), 0);
        long orbits = 0;
        for (size_t i = 0; i < vs.size(); ++i) {
            if (seen[i]) continue;
            ++orbits;
            for (auto& h : stab) {
                DVec y = R.mul(vs[i], h);
                auto it = std::lower_bound(vs.begin(), vs.end(), y);
                if (it == vs.end() || *it != y) throw MathError("stabilizer does not preserve the norm");
                seen[it - vs.begin()] = 1;
            }
        }
        th.vectors.push_back(static_cast<long>(vs.size()));
        th.orbits.push_back(orbits);
    }
    return th;
}

QuatMat2 as_mat2(const QuatAlgebra& A, const HermitianMatrix& g) {
    return {QuatElement::scalar(g.s), A.conj(g.r), g.r, QuatElement::scalar(g.t)};
}

QuatMat2 herm_inverse(const QuatAlgebra& A, const HermitianMatrix& g) {
    FieldElement di = det_D(A, g).inverse();
    return {QuatElement::scalar(g.t * di), A.conj(g.r).scale(-di), g.r.scale(-di), QuatElement::scalar(g.s * di)};
}

namespace {

// work needed to represent eta grows with its diagonal
Rational diag_size(const HermitianMatrix& g) { return g.s.trace() + g.t.trace(); }

}  // namespace

bool equivalent(const HermForm& F, const HermForm& Fp, DMat* witness) {
    const OrderArith& R = F.arith();
    const QuatAlgebra& A = R.algebra();
    FieldElement d1 = det_D(A, F.matrix());
    bool swap = diag_size(Fp.matrix()) > diag_size(F.matrix());
    for (auto& u : tp_units_mod_squares(R.d())) {
        // h g conj(h)^t = u g' forces Nrd(h) = u det(g') / det(g), a unit
        FieldElement ratio = det_D(A, scale(A, Fp.matrix(), u)) / d1;
        if (!ratio.is_integral() || (ratio.norm() != 1 && ratio.norm() != -1)) continue;
        bool found = false;
        if (!swap) {
            F.represent(scale(A, Fp.matrix(), u), [&](const DMat& h) {
                if (witness) *witness = h;
                found = true;
                return false;
            });
        } else {
            // k (u g') conj(k)^t = g, then h = k^-1 = u g' conj(k)^t g^-1
            HermitianMatrix eta = scale(A, F.matrix(), u.inverse());
            Fp.represent(eta, [&](const DMat& k) {
                if (witness) {
                    QuatMat2 K = to_quat(R, k);
                    QuatMat2 H = mat_mul(A, mat_mul(A, as_mat2(A, scale(A, Fp.matrix(), u)), conj_transpose(A, K)),
                                         herm_inverse(A, F.matrix()));
                    *witness = from_quat(R, H);
                }
                found = true;
                return false;
            });
        }
        if (found) return true;
    }
    return false;
}

Rational mass(long d) { return zeta_special_value(d, -1) * zeta_special_value(d, -3) / 16; }

// ------------------------------------------------------- class enumeration

ClassSet enumerate_classes(const OrderArith& R, const FieldElement& q, long max_s_norm) {
    const QuatAlgebra& A = R.algebra();
    long d = R.d();
    if (fundamental_unit(d).norm() != -1) throw MathError("narrow class number is not one");
    ClassSet cs;
    cs.mass = 0;
    Rational target = mass(d);
    std::vector<std::unique_ptr<HermForm>> forms;
    std::vector<std::vector<long>> thetas;
    std::vector<std::array<int64_t, 2>> screen;
    for (auto& g : tp_ideal_generators(d, 8)) screen.push_back(R.from_field(g));
    auto units = tp_units_mod_squares(d);
    for (const FieldElement& s : tp_ideal_generators(d, max_s_norm)) {
        // residues of O_D modulo s O_D from the HNF of s b_i
        OVec sv = R.central(R.from_field(s)[0], R.from_field(s)[1]);
        ZMat M(8, std::vector<Integer>(8));
        for (int i = 0; i < 8; ++i) {
            OVec e{};
            e[i] = 1;
            OVec p = R.mul(sv, e);
            for (int k = 0; k < 8; ++k) M[i][k] = static_cast<long>(p[k]);
        }
        ZMat Hn = hnf_rows(M);
        std::vector<long> box(8);
        for (int i = 0; i < 8; ++i) {
            if (Hn[i][i] <= 0) throw MathError("unexpected HNF shape");
            box[i] = Hn[i][i].get_si();
        }
        std::vector<long> c(8, 0);
        for (;;) {
            OVec r;
            for (int k = 0; k < 8; ++k) r[k] = c[k];
            QuatElement rq = R.to_quat(r);
            for (auto& u : units) {
                FieldElement t = (A.nr(rq) + u) / s;
                if (!t.is_integral()) continue;
                HermitianMatrix gam{s, t, rq};
                if (!genus_tests(R, gam).in_principal_genus) continue;
                auto F = std::make_unique<HermForm>(R, gam);
                std::vector<long> th = theta_prefix(*F, screen);
                bool known = false;
                for (size_t j = 0; j < forms.size() && !known; ++j)
                    if (thetas[j] == th && equivalent(*forms[j], *F)) known = true;
                if (known) continue;
                std::vector<DMat> st = stabilizer(*F);
                cs.reps.push_back({gam, solve_alpha(R, gam, q)});
                cs.stab_orders.push_back(static_cast<long>(st.size()));
                cs.stabilizers.push_back(std::move(st));
                cs.mass += Rational(1, cs.stab_orders.back());
                forms.push_back(std::move(F));
                thetas.push_back(th);
                if (cs.mass == target) return cs;
                if (cs.mass > target) throw MathError("accumulated mass exceeds the mass formula");
            }
            int i = 7;
            while (i >= 0 && ++c[i] == box[i]) c[i--] = 0;
            if (i < 0) break;
        }
    }
    throw MathError("mass not reached with s of norm <= " + std::to_string(max_s_norm) + " (have " +
                    to_string(cs.mass) + " of " + to_string(target) + ")");
}

// ------------------------------------------------------------ Hecke sets

namespace {

// rank of h mod P through the O_F-basis of O_D^2
class RankReducer {
  public:
    RankReducer(const OrderArith& R, const PrimeIdeal& P) : R_(R), F_(P) {
        if (P.f != 1) throw MathError("reduced_rank needs a prime of degree one");
        for (auto& f : R.order().of_basis()) fb_.push_back(R.from_quat(f));
        for (auto& r : R.order().z_to_of()) z2of_.push_back(IVec(r.begin(), r.end()));
    }
    int operator()(const DMat& h) const {
        long p = F_.p(), wi = F_.w_image();
        FMat M;
        for (int side = 0; side < 2; ++side)
            for (int k = 0; k < 4; ++k) {
                DVec x{};
                set_part(x, side, fb_[k]);
                DVec y = R_.mul(x, h);
                std::vector<int> row;
                for (int pi = 0; pi < 2; ++pi)
                    for (int l = 0; l < 4; ++l) {
                        int64_t a = 0, b = 0;
                        for (int m = 0; m < 8; ++m) {
                            a += y[8 * pi + m] * z2of_[m][2 * l];
                            b += y[8 * pi + m] * z2of_[m][2 * l + 1];
                        }
                        row.push_back(static_cast<int>((((a + b * wi) % p) + p) % p));
                    }
                M.push_back(row);
            }
        int r = rank(F_, M);
        if (r % 2) throw MathError("odd rank on the residue module");
        return r / 2;
    }

  private:
    const OrderArith& R_;
    ResidueField F_;
    std::vector<OVec> fb_;
    IMat z2of_;
};

}  // namespace

int reduced_rank(const OrderArith& R, const DMat& h, const PrimeIdeal& P) { return RankReducer(R, P)(h); }

std::vector<DMat> hecke_theta_sets(const OrderArith& R, int i, const PrimeIdeal& P, const FieldElement& u,
                                   const HermForm& Fa, const HermForm& Fb) {
    const QuatAlgebra& A = R.algebra();
    if (!u.is_totally_positive()) throw MathError("u must be totally positive");
    HermitianMatrix eta = scale(A, Fa.matrix(), u);
    std::vector<DMat> out;
    RankReducer rr(R, P);
    Fb.represent(eta, [&](const DMat& h) {
        int r = rr(h);
        if (i == 1 && r != 2) throw MathError("element of the first Hecke set with rank " + std::to_string(r));
        if (r == 3 - i) out.push_back(h);
        return true;
    });
    return out;
}

}  // namespace hsiegel
