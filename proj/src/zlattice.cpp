#include "hsiegel/zlattice.hpp"

#include <algorithm>
#include <cmath>

namespace hsiegel {

namespace {

struct Overflow {};

using i128 = __int128;

// checked 128-bit arithmetic; the engine reruns with GMP on overflow
inline i128 cmul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
}
inline i128 cadd(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
    return r;
}
inline i128 csub(i128 a, i128 b) {
    i128 r;
    if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
    return r;
}
inline i128 isqrt128(i128 n) {
    i128 v = static_cast<i128>(std::sqrt(static_cast<long double>(n)));
    while (v > 0 && v * v > n) --v;
    while ((v + 1) * (v + 1) <= n) ++v;
    return v;
}
inline i128 floordiv(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
inline i128 exactdiv(i128 a, i128 b) { return a / b; }

inline Integer cmul(const Integer& a, const Integer& b) { return a * b; }
inline Integer cadd(const Integer& a, const Integer& b) { return a + b; }
inline Integer csub(const Integer& a, const Integer& b) { return a - b; }
inline Integer isqrt128(const Integer& n) { return isqrt(n); }
inline Integer floordiv(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}
inline Integer exactdiv(const Integer& a, const Integer& b) {
    Integer q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

template <class Big>
Big conv(const Integer& z);
template <>
i128 conv<i128>(const Integer& z) {
    if (!z.fits_slong_p()) throw Overflow{};
    return z.get_si();
}
template <>
Integer conv<Integer>(const Integer& z) {
    return z;
}

inline bool tosmall(const i128& v, int64_t& out) {
    if (v > INT64_MAX || v < INT64_MIN) return false;
    out = static_cast<int64_t>(v);
    return true;
}
inline bool tosmall(const Integer& v, int64_t& out) {
    if (!v.fits_slong_p()) return false;
    out = v.get_si();
    return true;
}

}  // namespace

// ------------------------------------------------------------- GramLattice

GramLattice::GramLattice(QMat G) : G_(std::move(G)) {
    size_t n = G_.size();
    scale_ = 1;
    for (size_t i = 0; i < n; ++i) {
        if (G_[i].size() != n) throw MathError("Gram matrix must be square");
        for (size_t j = 0; j < n; ++j) {
            if (G_[i][j] != G_[j][i]) throw MathError("Gram matrix must be symmetric");
            scale_ = lcm(scale_, G_[i][j].get_den());
        }
    }
    iG_.assign(n, IVec(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Integer v = G_[i][j].get_num() * (scale_ / G_[i][j].get_den());
            if (!v.fits_slong_p()) throw MathError("Gram entries too large");
            iG_[i][j] = v.get_si();
        }
    cholesky_rational(*this);
}

GramLattice GramLattice::from_int(const IMat& G) {
    QMat Q = qmat(G.size(), G.size());
    for (size_t i = 0; i < G.size(); ++i)
        for (size_t j = 0; j < G.size(); ++j) Q[i][j] = Rational(G[i][j]);
    return GramLattice(Q);
}

LDLDecomposition cholesky_rational(const GramLattice& L) {
    const QMat& G = L.gram();
    size_t n = G.size();
    LDLDecomposition r{qmat(n, n), std::vector<Rational>(n)};
    for (size_t i = 0; i < n; ++i) r.R[i][i] = 1;
    for (size_t j = 0; j < n; ++j) {
        Rational s = G[j][j];
        for (size_t k = 0; k < j; ++k) s -= r.R[k][j] * r.R[k][j] * r.D[k];
        if (s <= 0) throw MathError("Gram matrix is not positive definite (leading minor " + std::to_string(j + 1) + ")");
        r.D[j] = s;
        for (size_t i = j + 1; i < n; ++i) {
            Rational t = G[j][i];
            for (size_t k = 0; k < j; ++k) t -= r.R[k][j] * r.R[k][i] * r.D[k];
            r.R[j][i] = t / s;
        }
    }
    return r;
}

// -------------------------------------------------------------- Enumerator

Enumerator::Enumerator(const IMat& G, bool pin_last) : n_(static_cast<int>(G.size())), pin_(pin_last) {
    int n = n_;
    std::vector<std::vector<Integer>> M(n, std::vector<Integer>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M[i][j] = G[i][j];
    zd_.assign(n + 1, 1);
    za_.assign(n, 0);
    zcoef_.assign(n, std::vector<Integer>(n, 0));
    Integer prev = 1;
    for (int k = 0; k < n; ++k) {
        // M now holds d_k S_k on indices >= k
        zd_[k] = prev;
        za_[k] = M[k][k];
        for (int j = k + 1; j < n; ++j) zcoef_[k][j] = M[k][j];
        bool need_pd = !pin_ || k < n - 1;
        if (need_pd && M[k][k] <= 0) throw MathError("Gram matrix is not positive definite");
        if (k + 1 < n) {
            for (int i = k + 1; i < n; ++i)
                for (int j = k + 1; j < n; ++j) {
                    Integer t = M[k][k] * M[i][j] - M[i][k] * M[k][j];
                    mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                    M[i][j] = t;
                }
            prev = M[k][k];
        }
    }
    small_ = true;
    d64_.resize(n);
    a64_.resize(n);
    coef64_.assign(n, std::vector<int64_t>(n, 0));
    for (int k = 0; k < n && small_; ++k) {
        small_ &= tosmall(zd_[k], d64_[k]) && tosmall(za_[k], a64_[k]);
        for (int j = k + 1; j < n; ++j) small_ &= tosmall(zcoef_[k][j], coef64_[k][j]);
    }
}

template <class Big>
void Enumerator::run_impl(const Big& T, bool exact, bool half, const std::function<bool(const int64_t*)>& f) const {
    int n = n_;
    std::vector<Big> d(n), a(n), dT(n);
    std::vector<std::vector<Big>> coef(n, std::vector<Big>(n, Big(0)));
    for (int k = 0; k < n; ++k) {
        d[k] = conv<Big>(zd_[k]);
        a[k] = conv<Big>(za_[k]);
        dT[k] = cmul(d[k], T);
        for (int j = k + 1; j < n; ++j) coef[k][j] = conv<Big>(zcoef_[k][j]);
    }
    std::vector<int64_t> x(n, 0);
    bool stop = false;
    if (pin_) half = false;

    // level k with value V of the already fixed tail at level k + 1
    std::function<void(int, const Big&, bool)> rec = [&](int k, const Big& Vup, bool zero_above) {
        Big b(0);
        for (int j = k + 1; j < n; ++j)
            if (x[j]) b = cadd(b, cmul(coef[k][j], Big(x[j])));
        Big c(0);
        if (k + 1 < n) c = exactdiv(cadd(cmul(d[k], Vup), cmul(b, b)), a[k]);
        if (pin_ && k == n - 1) {
            x[k] = 1;
            Big V = cadd(cadd(a[k], cmul(Big(2), b)), c);
            if (k == 0) {
                if (exact ? V == T : (V > 0 && !(T < V))) stop = !f(x.data());
                return;
            }
            rec(k - 1, V, false);
            return;
        }
        Big R = csub(dT[k], c);
        Big disc = cadd(cmul(b, b), cmul(a[k], R));
        if (disc < 0) return;
        Big s = isqrt128(disc);
        Big lo = -floordiv(cadd(b, s), a[k]);  // ceil((-b - s) / a)
        Big hi = floordiv(csub(s, b), a[k]);
        if (half && zero_above && lo < 0) lo = 0;
        for (Big xv = lo; !(hi < xv) && !stop; xv = xv + 1) {
            int64_t xs;
            if (!tosmall(xv, xs)) throw MathError("enumeration coordinate out of range");
            x[k] = xs;
            Big V = cadd(cadd(cmul(a[k], cmul(xv, xv)), cmul(cmul(Big(2), b), xv)), c);
            if (k == 0) {
                if (exact ? V == T : (V > 0 && !(T < V)))
                    if (!(half && zero_above && xs == 0)) stop = !f(x.data());
            } else {
                rec(k - 1, V, zero_above && xs == 0);
            }
        }
        x[k] = 0;
    };
    rec(n - 1, Big(0), true);
}

void Enumerator::run(const Integer& target, bool exact, bool half, const std::function<bool(const int64_t*)>& f) const {
    if (n_ == 0) return;
    // Both paths visit solutions in the same order; after an overflow the
    // GMP rerun skips what was already delivered.
    size_t delivered = 0;
    if (small_ && target.fits_slong_p()) {
        try {
            run_impl<i128>(static_cast<i128>(target.get_si()), exact, half, [&](const int64_t* x) {
                ++delivered;
                return f(x);
            });
            return;
        } catch (const Overflow&) {
        }
    }
    size_t seen = 0;
    run_impl<Integer>(target, exact, half, [&](const int64_t* x) {
        if (seen++ < delivered) return true;
        return f(x);
    });
}

// --------------------------------------------------------------------- LLL

IMat imat_mul(const IMat& A, const IMat& B) {
    size_t n = A.size(), m = B.empty() ? 0 : B[0].size();
    IMat C(n, IVec(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < B.size(); ++k) {
            int64_t a = A[i][k];
            if (!a) continue;
            for (size_t j = 0; j < m; ++j) C[i][j] += a * B[k][j];
        }
    return C;
}

IMat transpose(const IMat& A) {
    if (A.empty()) return {};
    IMat T(A[0].size(), IVec(A.size()));
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < A[i].size(); ++j) T[j][i] = A[i][j];
    return T;
}

Integer quad_form(const IMat& G, const int64_t* x) {
    Integer s = 0;
    size_t n = G.size();
    for (size_t i = 0; i < n; ++i) {
        if (!x[i]) continue;
        Integer r = 0;
        for (size_t j = 0; j < n; ++j) r += Integer(static_cast<long>(G[i][j])) * static_cast<long>(x[j]);
        s += r * static_cast<long>(x[i]);
    }
    return s;
}

IMat lll_gram(const IMat& G0, IMat* reduced) {
    // Only the basis choice depends on this routine; all later decisions are
    // exact.  Row k of the Gram-Schmidt data is recomputed from the exact
    // Gram matrix whenever k is visited.
    int n = static_cast<int>(G0.size());
    IMat G = G0, U(n, IVec(n, 0));
    for (int i = 0; i < n; ++i) U[i][i] = 1;
    std::vector<std::vector<long double>> mu(n, std::vector<long double>(n, 0));
    std::vector<long double> B(n, 0);
    auto row = [&](int k) {
        for (int j = 0; j < k; ++j) {
            long double s = static_cast<long double>(G[k][j]);
            for (int l = 0; l < j; ++l) s -= mu[j][l] * mu[k][l] * B[l];
            mu[k][j] = s / B[j];
        }
        long double s = static_cast<long double>(G[k][k]);
        for (int l = 0; l < k; ++l) s -= mu[k][l] * mu[k][l] * B[l];
        B[k] = s;
    };
    auto reduce = [&](int k, int j, int64_t r) {
        // b_k -= r b_j
        for (int t = 0; t < n; ++t) U[k][t] -= r * U[j][t];
        int64_t gkk = G[k][k] - 2 * r * G[k][j] + r * r * G[j][j];
        for (int t = 0; t < n; ++t)
            if (t != k) G[k][t] -= r * G[j][t];
        G[k][k] = gkk;
        for (int t = 0; t < n; ++t) G[t][k] = G[k][t];
        for (int l = 0; l < j; ++l) mu[k][l] -= static_cast<long double>(r) * mu[j][l];
        mu[k][j] -= static_cast<long double>(r);
    };
    auto swap = [&](int k) {
        std::swap(U[k], U[k - 1]);
        std::swap(G[k], G[k - 1]);
        for (int t = 0; t < n; ++t) std::swap(G[t][k], G[t][k - 1]);
    };
    if (n == 0) return U;
    row(0);
    int k = 1, guard = 0;
    while (k < n && guard++ < 1000000) {
        row(k);
        bool again = true;
        for (int pass = 0; again && pass < 50; ++pass) {
            again = false;
            for (int j = k - 1; j >= 0; --j) {
                if (std::fabs(mu[k][j]) > 0.51L) {
                    reduce(k, j, static_cast<int64_t>(std::llround(mu[k][j])));
                    again = true;
                }
            }
            if (again) row(k);
        }
        if (B[k] < (0.99L - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            swap(k);
            k = std::max(k - 1, 1);
            if (k == 1) row(0);
        } else {
            ++k;
        }
    }
    if (reduced) *reduced = G;
    return U;
}

// ---------------------------------------------------------- vectors_of_norm

std::vector<IVec> vectors_of_norm(const GramLattice& L, const Rational& target) {
    if (target <= 0) throw MathError("target must be positive");
    Rational t = target * L.scale();
    std::vector<IVec> out;
    if (t.get_den() != 1) return out;
    IMat R;
    IMat U = lll_gram(L.int_gram(), &R);
    Enumerator E(R);
    int n = L.rank();
    E.run(t.get_num(), true, false, [&](const int64_t* y) {
        IVec v(n, 0);
        for (int i = 0; i < n; ++i)
            if (y[i])
                for (int j = 0; j < n; ++j) v[j] += y[i] * U[i][j];
        out.push_back(v);
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace hsiegel
