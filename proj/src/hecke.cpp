#include "hsiegel/hecke.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>

namespace hsiegel {

HeckeModule::HeckeModule(const OrderArith& R, const ClassSet& cs, const std::optional<PrimeIdeal>& level,
                         FlagVariant v)
    : R_(R), cs_(cs), level_(level) {
    size_t h = cs.reps.size();
    if (!level) {
        for (size_t a = 0; a < h; ++a) {
            cls_.push_back(static_cast<int>(a));
            rep_.push_back(0);
            rep2_.push_back(0);
            size_.push_back(1);
        }
        return;
    }
    if (level->p == 2) throw MathError("level at the dyadic prime is not supported");
    const QuatAlgebra& A = R.algebra();
    LS_ = std::make_unique<LocalSplitting>(R.order(), *level);
    const ResidueField& F = LS_->field();
    flags_ = std::make_unique<FlagSpace>(F, v);
    size_t n = flags_->size();
    for (size_t a = 0; a < h; ++a) {
        const auto& rep = cs.reps[a];
        a_.push_back(transport(*LS_, rep.alpha));
        QuatMat2 inv = mat_mul(A, conj_transpose(A, rep.alpha), herm_inverse(A, rep.gamma));
        ainv_.push_back(transport(*LS_, inv));
        std::vector<FMat4> act;
        for (auto& k : cs.stabilizers[a]) {
            FMat4 g = mat_mul(F, mat_mul(F, ainv_[a], transport(*LS_, k)), a_[a]);
            if (similitude_factor(F, g) == 0) throw std::logic_error("unitary element is not a similitude");
            act.push_back(g);
        }
        std::vector<long> idx(n, -1);
        for (size_t f = 0; f < n; ++f) {
            if (idx[f] >= 0) continue;
            long k = static_cast<long>(cls_.size());
            long count = 0;
            size_t other = f;
            for (auto& g : act) {
                long j = flags_->act_index(g, f);
                if (idx[j] < 0) {
                    idx[j] = k;
                    ++count;
                    if (static_cast<size_t>(j) != f) other = static_cast<size_t>(j);
                }
            }
            cls_.push_back(static_cast<int>(a));
            rep_.push_back(f);
            rep2_.push_back(other);
            size_.push_back(count);
        }
        basis_.push_back(idx);
    }
}

std::vector<Rational> HeckeModule::eisenstein_functional() const {
    std::vector<Rational> l;
    for (size_t k = 0; k < dim(); ++k) l.push_back(make_rational(size_[k], cs_.stab_orders[cls_[k]]));
    return l;
}

ZMat HeckeModule::brandt(const HeckeOperator& T, const std::vector<Neighbor>& nb, bool check) const {
    size_t n = dim();
    ZMat B = zmat(n, n);
    if (!level_) {
        for (auto& x : nb) B[x.a][x.b] += 1;
        return B;
    }
    const ResidueField& F = LS_->field();
    bool lev = at_level(T);
    ZMat B2 = zmat(n, n);
    std::vector<std::vector<size_t>> by_class(cs_.reps.size());
    for (size_t k = 0; k < n; ++k) by_class[cls_[k]].push_back(k);
    for (auto& x : nb) {
        FMat4 g = mat_mul(F, mat_mul(F, ainv_[x.a], transport(*LS_, x.h)), a_[x.b]);
        if (!lev && similitude_factor(F, g) == 0) throw std::logic_error("neighbour is singular away from the level");
        for (size_t k : by_class[x.a]) {
            long j = flags_->act_index(g, rep_[k]);
            if (j >= 0) B[k][basis_[x.b][j]] += 1;
            if (!check) continue;
            long j2 = flags_->act_index(g, rep2_[k]);
            if (j2 >= 0) B2[k][basis_[x.b][j2]] += 1;
        }
    }
    if (check && B != B2) throw std::logic_error("Brandt matrix depends on the orbit representative");
    return B;
}

CuspSplit eisenstein_and_cusp(const HeckeModule& M, const std::vector<ZMat>& brandt,
                              const std::vector<long>& degrees) {
    CuspSplit S;
    S.functional = M.eisenstein_functional();
    size_t n = M.dim();
    const auto& l = S.functional;
    for (size_t t = 0; t < brandt.size(); ++t) {
        const ZMat& B = brandt[t];
        std::vector<Rational> lB(n, Rational(0));
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k) lB[k] += l[j] * B[j][k];
        Rational lambda = lB[0] / l[0];
        if (degrees[t] > 0 && lambda != degrees[t]) throw std::logic_error("Eisenstein eigenvalue differs from the degree");
        for (size_t k = 0; k < n; ++k)
            if (lB[k] != lambda * l[k]) throw std::logic_error("Eisenstein functional is not an eigenvector");
    }
    S.dim_m = static_cast<long>(n);
    S.dim_s = static_cast<long>(n) - 1;
    std::vector<Rational> c(n);
    for (size_t k = 0; k < n; ++k) c[k] = l[k] / l[0];
    for (auto& B : brandt) {
        QMat A = qmat(n - 1, n - 1);
        for (size_t j = 1; j < n; ++j)
            for (size_t k = 1; k < n; ++k) A[j - 1][k - 1] = Rational(B[j][k]) - c[k] * B[j][0];
        S.ops.push_back(A);
    }
    return S;
}

// ------------------------------------------------------------- eigensystems

namespace {

long squarefree_part(const Integer& x, Integer& square_root) {
    long v = x.get_si();
    long s = 1, r = v;
    for (auto [p, e] : factor_integer(std::labs(v))) {
        for (int k = 0; k + 1 < e; k += 2) {
            s *= p;
            r /= p * p;
        }
    }
    square_root = s;
    return r;
}

struct Block {
    QMat W;  // columns span the subspace (n x d)
    std::vector<QMat> ops;
};

QMat transpose_q(const QMat& M) {
    if (M.empty()) return {};
    QMat T = qmat(M[0].size(), M.size());
    for (size_t i = 0; i < M.size(); ++i)
        for (size_t j = 0; j < M[0].size(); ++j) T[j][i] = M[i][j];
    return T;
}

// Restriction of A to the span of the columns of K (A K = K X).
QMat restrict_to(const QMat& A, const QMat& K) {
    size_t n = K.size(), d = K[0].size();
    QMat AK = mul(A, K);
    // solve K X = AK with K of full column rank: use rows of a pivot minor
    QMat KT = transpose_q(K);
    QMat G = mul(KT, K);
    QMat X = mul(inverse(G), mul(KT, AK));
    (void)n;
    (void)d;
    return X;
}

std::vector<std::pair<Poly, int>> distinct_factors(const QMat& A) { return factor(charpoly(A)); }

Poly poly_pow(const Poly& g, int m) {
    Poly r = {1};
    for (int k = 0; k < m; ++k) r = poly_mul(r, g);
    return r;
}

bool split_block(const Block& b, const QMat& C, std::vector<Block>& out) {
    auto fs = distinct_factors(C);
    if (fs.size() < 2) return false;
    for (auto& [g, m] : fs) {
        QMat K = transpose_q(right_kernel(poly_eval(poly_pow(g, m), C)));
        Block nb;
        nb.W = mul(b.W, K);
        for (auto& A : b.ops) nb.ops.push_back(restrict_to(A, K));
        out.push_back(nb);
    }
    return true;
}

QMat combo(const std::vector<QMat>& ops, const std::vector<int>& c) {
    size_t n = ops[0].size();
    QMat M = qmat(n, n);
    for (size_t t = 0; t < ops.size(); ++t)
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) M[i][j] += ops[t][i][j] * c[t];
    return M;
}

}  // namespace

std::string Eigensystem::value_str(size_t k) const {
    if (values.empty()) return poly_str(charpolys.at(k));
    const auto& v = values.at(k);
    if (v[1] == 0) return to_string(v[0]);
    std::string s = v[0] == 0 ? "" : to_string(v[0]);
    std::string w = disc < 0 ? "w(" + std::to_string(disc) + ")" : "w" + std::to_string(disc);
    if (v[1] == 1)
        s += (s.empty() ? "" : "+") + w;
    else if (v[1] == -1)
        s += "-" + w;
    else
        s += (v[1] > 0 && !s.empty() ? "+" : "") + to_string(v[1]) + w;
    return s;
}

std::vector<Eigensystem> eigensystems(const CuspSplit& S, const std::vector<std::string>& labels,
                                      const std::vector<size_t>& split) {
    std::vector<Eigensystem> out;
    if (S.dim_s == 0) return out;
    size_t n = static_cast<size_t>(S.dim_s);
    Block whole;
    whole.W = qmat(n, n);
    for (size_t i = 0; i < n; ++i) whole.W[i][i] = 1;
    whole.ops = S.ops;
    std::vector<Block> blocks = {whole};
    auto refine = [&](const std::function<QMat(const Block&)>& pick) {
        std::vector<Block> next;
        for (auto& b : blocks)
            if (!split_block(b, pick(b), next)) next.push_back(b);
        blocks.swap(next);
    };
    for (size_t t : split) refine([&](const Block& b) { return b.ops[t]; });
    for (size_t t = 0; t < S.ops.size(); ++t) refine([&](const Block& b) { return b.ops[t]; });
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int round = 0; round < 4; ++round) {
        std::vector<int> c(S.ops.size());
        for (auto& x : c) x = coef(rng);
        refine([&](const Block& b) { return combo(b.ops, c); });
    }

    for (auto& b : blocks) {
        Eigensystem e;
        e.dim = static_cast<long>(b.W[0].size());
        e.labels = labels;
        std::vector<Poly> fac;
        size_t gen = 0;
        for (size_t t = 0; t < b.ops.size(); ++t) {
            auto fs = distinct_factors(b.ops[t]);
            if (fs.size() != 1) throw std::logic_error("constituent is not primary");
            fac.push_back(fs[0].first);
            if (poly_degree(fs[0].first) > poly_degree(fac[gen])) gen = t;
        }
        e.charpolys = fac;
        e.field = fac[gen];
        int deg = poly_degree(e.field);
        bool cyclic = deg == e.dim;
        if (deg == 1) {
            for (auto& g : fac) {
                Rational v = Rational(-g[0]) / Rational(g[1]);
                if (v.get_den() != 1) throw std::logic_error("non-integral rational eigenvalue");
                e.values.push_back({v.get_num(), Integer(0)});
            }
        } else if (deg == 2 && cyclic) {
            const Poly& g = e.field;
            Integer a = g[2], bb = g[1], c = g[0];
            Integer delta = bb * bb - 4 * a * c, s;
            long D0 = squarefree_part(delta, s);
            e.disc = ((D0 % 4) + 4) % 4 == 1 ? D0 : 4 * D0;
            // theta = (-b + s sqrt D0) / 2a ; omega = sqrt D0 or (1 + sqrt D0) / 2
            const QMat& G = b.ops[gen];
            for (size_t t = 0; t < b.ops.size(); ++t) {
                const QMat& A = b.ops[t];
                // A = c0 + c1 G on a two-dimensional space
                Rational c1, c0;
                if (G[0][1] != 0) {
                    c1 = A[0][1] / G[0][1];
                } else {
                    c1 = A[1][0] / G[1][0];
                }
                c0 = A[0][0] - c1 * G[0][0];
                for (size_t i = 0; i < 2; ++i)
                    for (size_t j = 0; j < 2; ++j)
                        if (A[i][j] != (i == j ? c0 : Rational(0)) + c1 * G[i][j])
                            throw std::logic_error("operator is not a polynomial in the generator");
                // value = c0 + c1 (-b / 2a) + c1 s / 2a sqrt D0
                Rational x = c0 - c1 * Rational(bb) / Rational(2 * a), y = c1 * Rational(s) / Rational(2 * a);
                if (((D0 % 4) + 4) % 4 == 1) {
                    // sqrt D0 = 2 omega - 1
                    x -= y;
                    y *= 2;
                }
                if (x.get_den() != 1 || y.get_den() != 1) throw std::logic_error("eigenvalue is not integral");
                e.values.push_back({x.get_num(), y.get_num()});
            }
        }
        out.push_back(e);
    }
    std::stable_sort(out.begin(), out.end(), [](const Eigensystem& x, const Eigensystem& y) {
        if (poly_degree(x.field) != poly_degree(y.field)) return poly_degree(x.field) < poly_degree(y.field);
        return x.dim < y.dim;
    });
    return out;
}

// ---------------------------------------------------------- Saito-Kurokawa

namespace {

Integer ipow(long N, int e) {
    Integer r = 1;
    for (int k = 0; k < e; ++k) r *= N;
    return r;
}

}  // namespace

std::pair<Integer, Integer> sk_eigenvalues(const Integer& a, long N, int k) {
    if (k > 4 || k % 2) throw std::invalid_argument("weight must be even and at most 4");
    Integer s = ipow(N, (4 - k) / 2);
    Integer n = N;
    return {a * s + n * n + n, a * s * (n + 1) + n * n - 1};
}

std::optional<std::vector<Integer>> sk_detect(const std::vector<std::pair<Integer, Integer>>& lambdas,
                                              const std::vector<long>& norms, int k) {
    std::vector<Integer> as;
    for (size_t t = 0; t < lambdas.size(); ++t) {
        Integer n = norms[t];
        Integer s = ipow(norms[t], (4 - k) / 2);
        Integer r = lambdas[t].first - n * n - n;
        if (r % s != 0) return std::nullopt;
        Integer a = r / s;
        if (sk_eigenvalues(a, norms[t], k) != lambdas[t]) return std::nullopt;
        as.push_back(a);
    }
    return as;
}

}  // namespace hsiegel
