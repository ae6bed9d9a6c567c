#include "hsiegel/poly.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace hsiegel {

Poly poly_trim(Poly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

int poly_degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

Poly poly_add(const Poly& f, const Poly& g) {
    Poly r(std::max(f.size(), g.size()), 0);
    for (size_t i = 0; i < f.size(); ++i) r[i] += f[i];
    for (size_t i = 0; i < g.size(); ++i) r[i] += g[i];
    return poly_trim(r);
}

Poly poly_sub(const Poly& f, const Poly& g) {
    Poly r(std::max(f.size(), g.size()), 0);
    for (size_t i = 0; i < f.size(); ++i) r[i] += f[i];
    for (size_t i = 0; i < g.size(); ++i) r[i] -= g[i];
    return poly_trim(r);
}

Poly poly_mul(const Poly& f, const Poly& g) {
    if (f.empty() || g.empty()) return {};
    Poly r(f.size() + g.size() - 1, 0);
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = 0; j < g.size(); ++j) r[i + j] += f[i] * g[j];
    return poly_trim(r);
}

Poly poly_derivative(const Poly& f) {
    Poly r;
    for (size_t i = 1; i < f.size(); ++i) r.push_back(f[i] * static_cast<long>(i));
    return poly_trim(r);
}

Integer poly_content(const Poly& f) {
    Integer c = 0;
    for (auto& a : f) c = gcd(c, a);
    return c;
}

Poly poly_primitive(const Poly& f) {
    Poly r = poly_trim(f);
    if (r.empty()) return r;
    Integer c = poly_content(r);
    if (r.back() < 0) c = -c;
    for (auto& a : r) a /= c;
    return r;
}

bool poly_divides(const Poly& g, const Poly& f, Poly* quotient) {
    Poly r = poly_trim(f), G = poly_trim(g);
    if (G.empty()) throw MathError("division by the zero polynomial");
    if (r.empty()) {
        if (quotient) quotient->clear();
        return true;
    }
    if (r.size() < G.size()) return false;
    Poly q(r.size() - G.size() + 1, 0);
    for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
        Integer top = r[k + G.size() - 1];
        if (top == 0) continue;
        if (top % G.back() != 0) return false;
        Integer c = top / G.back();
        q[k] = c;
        for (size_t j = 0; j < G.size(); ++j) r[k + j] -= c * G[j];
    }
    if (!poly_trim(r).empty()) return false;
    if (quotient) *quotient = poly_trim(q);
    return true;
}

namespace {

// pseudo-remainder of f by g
Poly prem(Poly f, const Poly& g) {
    int dg = poly_degree(g);
    const Integer& lc = g.back();
    while (poly_degree(f) >= dg && !f.empty()) {
        int shift = poly_degree(f) - dg;
        Integer top = f.back();
        for (auto& a : f) a *= lc;
        for (int j = 0; j <= dg; ++j) f[shift + j] -= top * g[j];
        f = poly_trim(f);
    }
    return f;
}

}  // namespace

Poly poly_gcd(const Poly& f, const Poly& g) {
    Poly a = poly_primitive(f), b = poly_primitive(g);
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        Poly r = poly_primitive(prem(a, b));
        a = b;
        b = r;
    }
    return poly_primitive(a);
}

Integer poly_eval(const Poly& f, const Integer& x) {
    Integer r = 0;
    for (size_t i = f.size(); i-- > 0;) r = r * x + f[i];
    return r;
}

std::string poly_str(const Poly& f, const std::string& var) {
    if (f.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = f.size(); i-- > 0;) {
        if (f[i] == 0) continue;
        Integer c = f[i];
        bool neg = c < 0;
        if (neg) c = -c;
        if (!first) os << (neg ? " - " : " + ");
        else if (neg) os << "-";
        first = false;
        if (i == 0 || c != 1) os << c.get_str();
        if (i >= 1) os << var;
        if (i >= 2) os << "^" << i;
    }
    return os.str();
}

Poly charpoly(const ZMat& A) {
    size_t n = A.size();
    // coefficients highest degree first during the recursion
    std::vector<Integer> C = {1};
    if (n == 0) return {1};
    C = {1, -A[0][0]};
    for (size_t r = 1; r < n; ++r) {
        std::vector<Integer> T = {1, -A[r][r]};
        std::vector<Integer> v(r);
        for (size_t i = 0; i < r; ++i) v[i] = A[i][r];
        for (size_t k = 0; k < r; ++k) {
            Integer s = 0;
            for (size_t i = 0; i < r; ++i) s += A[r][i] * v[i];
            T.push_back(-s);
            if (k + 1 < r) {
                std::vector<Integer> w(r, 0);
                for (size_t i = 0; i < r; ++i)
                    for (size_t j = 0; j < r; ++j)
                        if (v[j] != 0) w[i] += A[i][j] * v[j];
                v = std::move(w);
            }
        }
        std::vector<Integer> D(r + 2, 0);
        for (size_t i = 0; i < r + 2; ++i)
            for (size_t j = 0; j <= i && j < C.size(); ++j) D[i] += T[i - j] * C[j];
        C = std::move(D);
    }
    std::reverse(C.begin(), C.end());
    return poly_trim(C);
}

Poly charpoly(const QMat& A) {
    size_t n = A.size();
    Integer c = 1;
    for (auto& row : A)
        for (auto& a : row) c = lcm(c, Integer(a.get_den()));
    ZMat B(n, std::vector<Integer>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Rational x = A[i][j] * c;
            B[i][j] = x.get_num();
        }
    Poly f = charpoly(B);
    // chi_A(x) = c^-n chi_B(c x)
    Integer ck = 1;
    for (size_t k = n + 1; k-- > 0;) {
        // coefficient k is divided by c^(n - k)
        if (f[k] % ck != 0) throw MathError("characteristic polynomial is not integral");
        f[k] /= ck;
        ck *= c;
    }
    return f;
}

QMat poly_eval(const Poly& f, const QMat& A) {
    size_t n = A.size();
    QMat R = qmat(n, n);
    for (size_t i = f.size(); i-- > 0;) {
        R = mul(R, A);
        for (size_t k = 0; k < n; ++k) R[k][k] += f[i];
    }
    return R;
}

// ------------------------------------------------------------- mod p

namespace {

using MPoly = std::vector<int64_t>;

struct ModP {
    int64_t p;
    int64_t norm(int64_t a) const { return ((a % p) + p) % p; }
    int64_t mul(int64_t a, int64_t b) const { return static_cast<int64_t>((__int128)a * b % p); }
    int64_t inv(int64_t a) const { return pw(a, p - 2); }
    int64_t pw(int64_t a, int64_t e) const {
        int64_t r = 1;
        a = norm(a);
        for (; e; e >>= 1, a = mul(a, a))
            if (e & 1) r = mul(r, a);
        return r;
    }
    MPoly trim(MPoly f) const {
        while (!f.empty() && f.back() == 0) f.pop_back();
        return f;
    }
    MPoly reduce(const Poly& f) const {
        MPoly r(f.size());
        for (size_t i = 0; i < f.size(); ++i) {
            Integer m = f[i] % p;
            r[i] = norm(m.get_si());
        }
        return trim(r);
    }
    MPoly sub(const MPoly& f, const MPoly& g) const {
        MPoly r(std::max(f.size(), g.size()), 0);
        for (size_t i = 0; i < f.size(); ++i) r[i] = f[i];
        for (size_t i = 0; i < g.size(); ++i) r[i] = norm(r[i] - g[i]);
        return trim(r);
    }
    MPoly mulp(const MPoly& f, const MPoly& g) const {
        if (f.empty() || g.empty()) return {};
        MPoly r(f.size() + g.size() - 1, 0);
        for (size_t i = 0; i < f.size(); ++i)
            for (size_t j = 0; j < g.size(); ++j) r[i + j] = (r[i + j] + mul(f[i], g[j])) % p;
        return trim(r);
    }
    void divmod(MPoly f, const MPoly& g, MPoly& q, MPoly& r) const {
        f = trim(f);
        int dg = static_cast<int>(g.size()) - 1;
        int64_t li = inv(g.back());
        q.assign(f.size() >= g.size() ? f.size() - g.size() + 1 : 0, 0);
        for (int k = static_cast<int>(f.size()) - 1; k >= dg; --k) {
            int64_t c = mul(f[k], li);
            if (!c) continue;
            q[k - dg] = c;
            for (int j = 0; j <= dg; ++j) f[k - dg + j] = norm(f[k - dg + j] - mul(c, g[j]));
        }
        r = trim(f);
        q = trim(q);
    }
    MPoly mod(const MPoly& f, const MPoly& g) const {
        MPoly q, r;
        divmod(f, g, q, r);
        return r;
    }
    MPoly monic(MPoly f) const {
        f = trim(f);
        if (f.empty()) return f;
        int64_t li = inv(f.back());
        for (auto& a : f) a = mul(a, li);
        return f;
    }
    MPoly gcd(MPoly a, MPoly b) const {
        a = trim(a);
        b = trim(b);
        while (!b.empty()) {
            MPoly r = mod(a, b);
            a = b;
            b = r;
        }
        return monic(a);
    }
    MPoly powmod(MPoly base, Integer e, const MPoly& m) const {
        MPoly r = {1};
        base = mod(base, m);
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = mod(mulp(r, base), m);
            base = mod(mulp(base, base), m);
            e >>= 1;
        }
        return r;
    }
    MPoly derivative(const MPoly& f) const {
        MPoly r;
        for (size_t i = 1; i < f.size(); ++i) r.push_back(mul(f[i], static_cast<int64_t>(i) % p));
        return trim(r);
    }
};

// factors of a monic squarefree polynomial over F_p (p odd)
std::vector<MPoly> factor_mod_p(const ModP& M, const MPoly& f, std::mt19937_64& rng) {
    std::vector<std::pair<MPoly, int>> dd;  // distinct degree parts
    MPoly h = {0, 1}, g = f;
    for (int d = 1; 2 * d <= static_cast<int>(g.size()) - 1; ++d) {
        h = M.powmod(h, Integer(M.p), g);
        MPoly c = M.gcd(M.sub(h, {0, 1}), g);
        if (c.size() > 1) {
            dd.push_back({c, d});
            MPoly q, r;
            M.divmod(g, c, q, r);
            g = q;
            h = M.mod(h, g);
        }
    }
    if (g.size() > 1) dd.push_back({M.monic(g), static_cast<int>(g.size()) - 1});
    std::vector<MPoly> out;
    std::uniform_int_distribution<int64_t> coef(0, M.p - 1);
    for (auto& [c, d] : dd) {
        std::vector<MPoly> todo = {c}, done;
        while (!todo.empty()) {
            MPoly u = todo.back();
            todo.pop_back();
            if (static_cast<int>(u.size()) - 1 == d) {
                done.push_back(u);
                continue;
            }
            for (;;) {
                MPoly a(u.size() - 1);
                for (auto& x : a) x = coef(rng);
                a = M.trim(a);
                if (a.size() < 2) continue;
                Integer e = 1;
                for (int k = 0; k < d; ++k) e *= M.p;
                e = (e - 1) / 2;
                MPoly b = M.sub(M.powmod(a, e, u), {1});
                MPoly g1 = M.gcd(b, u);
                if (g1.size() > 1 && g1.size() < u.size()) {
                    MPoly q, r;
                    M.divmod(u, g1, q, r);
                    todo.push_back(g1);
                    todo.push_back(M.monic(q));
                    break;
                }
            }
        }
        out.insert(out.end(), done.begin(), done.end());
    }
    return out;
}

// polynomials with coefficients modulo m (big)
Poly pmod(Poly f, const Integer& m) {
    for (auto& a : f) {
        a %= m;
        if (a < 0) a += m;
    }
    return poly_trim(f);
}

Poly pmul(const Poly& f, const Poly& g, const Integer& m) { return pmod(poly_mul(f, g), m); }

// division by a monic polynomial modulo m
void pdivmod(Poly f, const Poly& g, const Integer& m, Poly& q, Poly& r) {
    f = pmod(f, m);
    int dg = poly_degree(g);
    q.assign(f.size() > g.size() - 1 ? f.size() - g.size() + 1 : 0, 0);
    for (int k = static_cast<int>(f.size()) - 1; k >= dg; --k) {
        Integer c = f[k];
        if (c == 0) continue;
        q[k - dg] = c;
        for (int j = 0; j <= dg; ++j) f[k - dg + j] = (f[k - dg + j] - c * g[j]) % m;
    }
    r = pmod(f, m);
    q = pmod(q, m);
}

Poly from_mp(const MPoly& f) {
    Poly r;
    for (auto a : f) r.push_back(Integer(static_cast<long>(a)));
    return poly_trim(r);
}

// s, t with s g + t h = 1 mod p
void bezout_mod_p(const ModP& M, const MPoly& g, const MPoly& h, MPoly& s, MPoly& t) {
    MPoly r0 = g, r1 = h, s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
    while (!r1.empty()) {
        MPoly q, r;
        M.divmod(r0, r1, q, r);
        MPoly s2 = M.sub(s0, M.mulp(q, s1)), t2 = M.sub(t0, M.mulp(q, t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    if (r0.size() != 1) throw MathError("factors are not coprime modulo p");
    int64_t c = M.inv(r0[0]);
    s = s0;
    t = t0;
    for (auto& a : s) a = M.mul(a, c);
    for (auto& a : t) a = M.mul(a, c);
}

// lift f = g h (h monic) from p to a modulus >= bound; returns the final modulus
Integer hensel_two(const Poly& f, Poly& g, Poly& h, int64_t p, const Integer& bound) {
    ModP M{p};
    MPoly sm, tm;
    bezout_mod_p(M, M.reduce(g), M.reduce(h), sm, tm);
    Poly s = from_mp(sm), t = from_mp(tm);
    Integer m = p;
    while (m < bound) {
        Integer m2 = m * m;
        Poly e = pmod(poly_sub(f, poly_mul(g, h)), m2);
        Poly q, r;
        pdivmod(poly_mul(s, e), h, m2, q, r);
        Poly g2 = pmod(poly_add(poly_add(g, poly_mul(t, e)), poly_mul(q, g)), m2);
        Poly h2 = pmod(poly_add(h, r), m2);
        Poly b = pmod(poly_sub(poly_add(poly_mul(s, g2), poly_mul(t, h2)), {1}), m2);
        Poly c, d;
        pdivmod(poly_mul(s, b), h2, m2, c, d);
        s = pmod(poly_sub(s, d), m2);
        t = pmod(poly_sub(poly_sub(t, poly_mul(t, b)), poly_mul(c, g2)), m2);
        g = g2;
        h = h2;
        m = m2;
    }
    return m;
}

// lift f = lc * prod(factors) (monic factors mod p) to monic factors mod m >= bound
void hensel_multi(const Poly& f, const std::vector<MPoly>& factors, int64_t p, const Integer& bound,
                  std::vector<Poly>& out, Integer& modulus) {
    if (factors.size() == 1) {
        // f = lc * F: F = f / lc mod m
        Integer m = p;
        while (m < bound) m *= m;
        Integer lc = f.back(), li;
        mpz_invert(li.get_mpz_t(), lc.get_mpz_t(), m.get_mpz_t());
        Poly F = pmod(f, m);
        for (auto& a : F) a = (a * li) % m;
        out.push_back(F);
        modulus = m;
        return;
    }
    ModP M{p};
    size_t half = factors.size() / 2;
    std::vector<MPoly> A(factors.begin(), factors.begin() + half), B(factors.begin() + half, factors.end());
    MPoly ga = {M.norm(Integer(f.back() % p).get_si())}, hb = {1};
    for (auto& a : A) ga = M.mulp(ga, a);
    for (auto& b : B) hb = M.mulp(hb, b);
    Poly g = from_mp(ga), h = from_mp(hb);
    Integer m = hensel_two(f, g, h, p, bound);
    // g carries the leading coefficient; h is monic
    std::vector<Poly> outA, outB;
    Integer ma, mb;
    hensel_multi(g, A, p, bound, outA, ma);
    hensel_multi(h, B, p, bound, outB, mb);
    modulus = m;
    for (auto& x : outA) out.push_back(pmod(x, m));
    for (auto& x : outB) out.push_back(pmod(x, m));
}

Poly symmetric(Poly f, const Integer& m) {
    Integer half = m / 2;
    for (auto& a : f) {
        a %= m;
        if (a < 0) a += m;
        if (a > half) a -= m;
    }
    return poly_trim(f);
}

// factors of a primitive squarefree polynomial of degree >= 2
std::vector<Poly> zassenhaus(const Poly& f) {
    int n = poly_degree(f);
    Integer lc = f.back();
    std::mt19937_64 rng(12345);
    std::vector<MPoly> best;
    int64_t bestp = 0;
    int tried = 0;
    for (int64_t p = 3; tried < 6; p += 2) {
        if (!is_prime(p) || Integer(lc % p) == 0) continue;
        ModP M{p};
        MPoly fp = M.reduce(f);
        if (static_cast<int>(fp.size()) - 1 != n) continue;
        if (M.gcd(fp, M.derivative(fp)).size() != 1) continue;
        auto fs = factor_mod_p(M, M.monic(fp), rng);
        ++tried;
        if (bestp == 0 || fs.size() < best.size()) {
            best = fs;
            bestp = p;
        }
        if (best.size() == 1) break;
    }
    if (best.size() <= 1) return {f};
    // coefficient bound for factors (Mignotte) times the leading coefficient
    Integer norm2 = 0;
    for (auto& a : f) norm2 += a * a;
    Integer bound = (isqrt(norm2) + 1) * (Integer(1) << n) * abs(lc) * 2 + 1;
    std::vector<Poly> lifted;
    Integer m;
    hensel_multi(f, best, bestp, bound, lifted, m);
    std::vector<Poly> result;
    Poly g = f;
    std::vector<Poly> rem = lifted;
    for (size_t s = 1; 2 * s <= rem.size();) {
        bool found = false;
        std::vector<int> idx(s);
        for (size_t k = 0; k < s; ++k) idx[k] = static_cast<int>(k);
        for (;;) {
            Integer glc = g.back();
            Poly cand = {glc};
            for (int k : idx) cand = pmul(cand, rem[k], m);
            cand = symmetric(cand, m);
            Poly prim = poly_primitive(cand), q;
            if (!prim.empty() && poly_divides(prim, g, &q)) {
                result.push_back(prim);
                g = poly_primitive(q);
                std::vector<Poly> keep;
                for (size_t k = 0; k < rem.size(); ++k)
                    if (std::find(idx.begin(), idx.end(), static_cast<int>(k)) == idx.end()) keep.push_back(rem[k]);
                rem = keep;
                found = true;
                break;
            }
            // next subset
            int k = static_cast<int>(s) - 1;
            while (k >= 0 && idx[k] == static_cast<int>(rem.size() - s + k)) --k;
            if (k < 0) break;
            ++idx[k];
            for (size_t j = k + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!found) ++s;
    }
    if (poly_degree(g) > 0) result.push_back(poly_primitive(g));
    return result;
}

}  // namespace

std::vector<std::pair<Poly, int>> factor(const Poly& f0) {
    Poly f = poly_primitive(f0);
    std::vector<std::pair<Poly, int>> out;
    if (poly_degree(f) < 1) return out;
    // squarefree split: cur collects the factors of multiplicity >= mult
    Poly g = poly_gcd(f, poly_derivative(f)), cur;
    poly_divides(g, f, &cur);
    cur = poly_primitive(cur);
    int mult = 1;
    while (poly_degree(cur) > 0) {
        Poly nxt = poly_gcd(cur, g);
        Poly part;
        poly_divides(nxt, cur, &part);
        part = poly_primitive(part);
        if (poly_degree(part) > 0) {
            for (auto& p : (poly_degree(part) == 1 ? std::vector<Poly>{part} : zassenhaus(part)))
                out.push_back({poly_primitive(p), mult});
        }
        Poly q;
        poly_divides(nxt, g, &q);
        g = poly_primitive(q);
        cur = nxt;
        ++mult;
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
        for (size_t i = x.first.size(); i-- > 0;)
            if (x.first[i] != y.first[i]) return x.first[i] < y.first[i];
        return x.second < y.second;
    });
    return out;
}

// ------------------------------------------------------ rational kernels

QMat row_basis(const QMat& A0) {
    QMat A = A0;
    size_t n = A.size();
    if (!n) return A;
    size_t m = A[0].size(), r = 0;
    for (size_t c = 0; c < m && r < n; ++c) {
        size_t p = r;
        while (p < n && A[p][c] == 0) ++p;
        if (p == n) continue;
        std::swap(A[p], A[r]);
        Rational inv = 1 / A[r][c];
        for (auto& x : A[r]) x *= inv;
        for (size_t i = 0; i < n; ++i) {
            if (i == r || A[i][c] == 0) continue;
            Rational f = A[i][c];
            for (size_t j = c; j < m; ++j) A[i][j] -= f * A[r][j];
        }
        ++r;
    }
    A.resize(r);
    return A;
}

QMat right_kernel(const QMat& A) {
    size_t m = A.empty() ? 0 : A[0].size();
    QMat E = row_basis(A);
    std::vector<int> piv;
    for (auto& row : E) {
        size_t c = 0;
        while (row[c] == 0) ++c;
        piv.push_back(static_cast<int>(c));
    }
    QMat K;
    for (size_t f = 0; f < m; ++f) {
        if (std::find(piv.begin(), piv.end(), static_cast<int>(f)) != piv.end()) continue;
        std::vector<Rational> v(m, 0);
        v[f] = 1;
        for (size_t i = 0; i < E.size(); ++i) v[piv[i]] = -E[i][f];
        K.push_back(v);
    }
    return K;
}

}  // namespace hsiegel
