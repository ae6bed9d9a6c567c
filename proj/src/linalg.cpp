#include "hsiegel/linalg.hpp"

#include <algorithm>

namespace hsiegel {

ZMat zmat(size_t rows, size_t cols) { return ZMat(rows, std::vector<Integer>(cols, 0)); }
QMat qmat(size_t rows, size_t cols) { return QMat(rows, std::vector<Rational>(cols, 0)); }

// Row HNF of M with unimodular U such that U M = H (H keeps zero rows at the bottom).
static void hnf_transform(ZMat& H, ZMat* U) {
    size_t n = H.size();
    if (!n) return;
    size_t m = H[0].size();
    if (U) {
        *U = zmat(n, n);
        for (size_t i = 0; i < n; ++i) (*U)[i][i] = 1;
    }
    auto rowop = [&](size_t i, size_t j, const Integer& a, const Integer& b, const Integer& c, const Integer& d) {
        // (row_i, row_j) <- (a row_i + b row_j, c row_i + d row_j)
        for (size_t k = 0; k < m; ++k) {
            Integer x = H[i][k], y = H[j][k];
            H[i][k] = a * x + b * y;
            H[j][k] = c * x + d * y;
        }
        if (U)
            for (size_t k = 0; k < n; ++k) {
                Integer x = (*U)[i][k], y = (*U)[j][k];
                (*U)[i][k] = a * x + b * y;
                (*U)[j][k] = c * x + d * y;
            }
    };
    size_t r = 0;
    for (size_t col = 0; col < m && r < n; ++col) {
        size_t piv = n;
        for (size_t i = r; i < n; ++i)
            if (H[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv == n) continue;
        if (piv != r) rowop(r, piv, 0, 1, 1, 0);
        for (size_t i = r + 1; i < n; ++i) {
            if (H[i][col] == 0) continue;
            Integer a = H[r][col], b = H[i][col], g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            rowop(r, i, s, t, Integer(-b / g), Integer(a / g));
        }
        if (H[r][col] < 0) rowop(r, r, -1, 0, -1, 0);
        for (size_t i = 0; i < r; ++i) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), H[i][col].get_mpz_t(), H[r][col].get_mpz_t());
            if (q != 0) {
                for (size_t k = 0; k < m; ++k) H[i][k] -= q * H[r][k];
                if (U)
                    for (size_t k = 0; k < n; ++k) (*U)[i][k] -= q * (*U)[r][k];
            }
        }
        ++r;
    }
}

ZMat hnf_rows(ZMat M) {
    hnf_transform(M, nullptr);
    while (!M.empty() && std::all_of(M.back().begin(), M.back().end(), [](const Integer& x) { return x == 0; }))
        M.pop_back();
    return M;
}

Integer det(const ZMat& A) {
    size_t n = A.size();
    if (!n) return 1;
    ZMat M = A;
    Integer prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (M[k][k] == 0) {
            size_t s = k + 1;
            while (s < n && M[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(M[k], M[s]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
        prev = M[k][k];
    }
    return sign * M[n - 1][n - 1];
}

Rational det(const QMat& A) {
    QMat M = A;
    size_t n = M.size();
    Rational d = 1;
    for (size_t k = 0; k < n; ++k) {
        size_t p = k;
        while (p < n && M[p][k] == 0) ++p;
        if (p == n) return 0;
        if (p != k) {
            std::swap(M[p], M[k]);
            d = -d;
        }
        d *= M[k][k];
        for (size_t i = k + 1; i < n; ++i) {
            if (M[i][k] == 0) continue;
            Rational f = M[i][k] / M[k][k];
            for (size_t j = k; j < n; ++j) M[i][j] -= f * M[k][j];
        }
    }
    return d;
}

QMat inverse(const QMat& A) {
    size_t n = A.size();
    QMat M = A, R = qmat(n, n);
    for (size_t i = 0; i < n; ++i) R[i][i] = 1;
    for (size_t k = 0; k < n; ++k) {
        size_t p = k;
        while (p < n && M[p][k] == 0) ++p;
        if (p == n) throw MathError("singular matrix");
        std::swap(M[p], M[k]);
        std::swap(R[p], R[k]);
        Rational inv = 1 / M[k][k];
        for (size_t j = 0; j < n; ++j) {
            M[k][j] *= inv;
            R[k][j] *= inv;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == k || M[i][k] == 0) continue;
            Rational f = M[i][k];
            for (size_t j = 0; j < n; ++j) {
                M[i][j] -= f * M[k][j];
                R[i][j] -= f * R[k][j];
            }
        }
    }
    return R;
}

QMat to_q(const ZMat& M) {
    QMat R = qmat(M.size(), M.empty() ? 0 : M[0].size());
    for (size_t i = 0; i < M.size(); ++i)
        for (size_t j = 0; j < M[i].size(); ++j) R[i][j] = M[i][j];
    return R;
}

ZMat mul(const ZMat& A, const ZMat& B) {
    ZMat C = zmat(A.size(), B.empty() ? 0 : B[0].size());
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t k = 0; k < B.size(); ++k) {
            if (A[i][k] == 0) continue;
            for (size_t j = 0; j < B[k].size(); ++j) C[i][j] += A[i][k] * B[k][j];
        }
    return C;
}

QMat mul(const QMat& A, const QMat& B) {
    QMat C = qmat(A.size(), B.empty() ? 0 : B[0].size());
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t k = 0; k < B.size(); ++k) {
            if (A[i][k] == 0) continue;
            for (size_t j = 0; j < B[k].size(); ++j) C[i][j] += A[i][k] * B[k][j];
        }
    return C;
}

bool solve_left(const ZMat& A, const std::vector<Integer>& b, std::vector<Integer>& x0, ZMat& kernel) {
    size_t n = A.size(), m = b.size();
    ZMat H = A, U;
    hnf_transform(H, &U);
    // y H = b by forward substitution on pivot columns
    std::vector<Integer> y(n, 0), rest = b;
    size_t r = 0;
    for (size_t col = 0; col < m; ++col) {
        if (r < n && H[r][col] != 0) {
            if (rest[col] % H[r][col] != 0) return false;
            y[r] = rest[col] / H[r][col];
            for (size_t k = col; k < m; ++k) rest[k] -= y[r] * H[r][k];
            ++r;
        } else if (rest[col] != 0) {
            return false;
        }
    }
    x0.assign(n, 0);
    for (size_t i = 0; i < r; ++i)
        if (y[i] != 0)
            for (size_t k = 0; k < n; ++k) x0[k] += y[i] * U[i][k];
    kernel.assign(U.begin() + r, U.end());
    return true;
}

ZMat kernel_mod_p_lattice(const ZMat& A, long p) {
    size_t n = A.size(), m = A.empty() ? 0 : A[0].size();
    ZMat S = zmat(n + m, m);
    for (size_t i = 0; i < n; ++i) S[i] = A[i];
    for (size_t j = 0; j < m; ++j) S[n + j][j] = p;
    std::vector<Integer> x0;
    ZMat K;
    solve_left(S, std::vector<Integer>(m, 0), x0, K);
    ZMat P;
    for (auto& row : K) P.emplace_back(row.begin(), row.begin() + n);
    return hnf_rows(P);
}

// ------------------------------------------------------------ residue field

std::vector<int> rref(const ResidueField& F, FMat& M) {
    std::vector<int> piv;
    size_t n = M.size();
    if (!n) return piv;
    size_t m = M[0].size(), r = 0;
    for (size_t c = 0; c < m && r < n; ++c) {
        size_t p = r;
        while (p < n && M[p][c] == 0) ++p;
        if (p == n) continue;
        std::swap(M[p], M[r]);
        int inv = F.inv(M[r][c]);
        for (size_t j = 0; j < m; ++j) M[r][j] = F.mul(M[r][j], inv);
        for (size_t i = 0; i < n; ++i) {
            if (i == r || M[i][c] == 0) continue;
            int f = F.neg(M[i][c]);
            for (size_t j = 0; j < m; ++j)
                if (M[r][j]) M[i][j] = F.add(M[i][j], F.mul(f, M[r][j]));
        }
        piv.push_back(static_cast<int>(c));
        ++r;
    }
    return piv;
}

int rank(const ResidueField& F, FMat M) { return static_cast<int>(rref(F, M).size()); }

FMat left_kernel(const ResidueField& F, const FMat& M) {
    // x M = 0  <=>  M^T x^T = 0
    size_t n = M.size();
    if (!n) return {};
    size_t m = M[0].size();
    FMat T(m, std::vector<int>(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) T[j][i] = M[i][j];
    auto piv = rref(F, T);
    std::vector<bool> is_piv(n, false);
    for (int c : piv) is_piv[c] = true;
    FMat K;
    for (size_t f = 0; f < n; ++f) {
        if (is_piv[f]) continue;
        std::vector<int> x(n, 0);
        x[f] = 1;
        for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = F.neg(T[r][f]);
        K.push_back(x);
    }
    return K;
}

bool solve_left(const ResidueField& F, const FMat& M, const std::vector<int>& b, std::vector<int>& x) {
    // augmented transpose system M^T x^T = b^T
    size_t n = M.size(), m = b.size();
    FMat T(m, std::vector<int>(n + 1, 0));
    for (size_t j = 0; j < m; ++j) {
        for (size_t i = 0; i < n; ++i) T[j][i] = M[i][j];
        T[j][n] = b[j];
    }
    auto piv = rref(F, T);
    if (!piv.empty() && piv.back() == static_cast<int>(n)) return false;
    x.assign(n, 0);
    for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = T[r][n];
    return true;
}

FMat mul(const ResidueField& F, const FMat& A, const FMat& B) {
    size_t n = A.size(), m = B.empty() ? 0 : B[0].size();
    FMat C(n, std::vector<int>(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < B.size(); ++k) {
            int a = A[i][k];
            if (!a) continue;
            for (size_t j = 0; j < m; ++j)
                if (B[k][j]) C[i][j] = F.add(C[i][j], F.mul(a, B[k][j]));
        }
    return C;
}

FMat identity(const ResidueField&, int n) {
    FMat I(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

bool invert(const ResidueField& F, const FMat& M, FMat& inv) {
    size_t n = M.size();
    FMat A(n, std::vector<int>(2 * n, 0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) A[i][j] = M[i][j];
        A[i][n + i] = 1;
    }
    auto piv = rref(F, A);
    if (piv.size() < n || piv[n - 1] != static_cast<int>(n - 1)) return false;
    inv.assign(n, std::vector<int>(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = A[i][n + j];
    return true;
}

}  // namespace hsiegel
