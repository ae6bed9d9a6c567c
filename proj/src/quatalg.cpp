#include "hsiegel/quatalg.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hsiegel {

// ------------------------------------------------------------- QuatElement

QuatElement QuatElement::scalar(const FieldElement& s) {
    FieldElement z(s.d(), 0);
    return QuatElement(s, z, z, z);
}

QuatElement QuatElement::operator+(const QuatElement& o) const {
    QuatElement r;
    for (int k = 0; k < 4; ++k) r.c[k] = c[k] + o.c[k];
    return r;
}

QuatElement QuatElement::operator-(const QuatElement& o) const {
    QuatElement r;
    for (int k = 0; k < 4; ++k) r.c[k] = c[k] - o.c[k];
    return r;
}

QuatElement QuatElement::operator-() const {
    QuatElement r;
    for (int k = 0; k < 4; ++k) r.c[k] = -c[k];
    return r;
}

QuatElement QuatElement::scale(const FieldElement& s) const {
    QuatElement r;
    for (int k = 0; k < 4; ++k) r.c[k] = c[k] * s;
    return r;
}

bool QuatElement::operator==(const QuatElement& o) const {
    for (int k = 0; k < 4; ++k)
        if (c[k] != o.c[k]) return false;
    return true;
}

bool QuatElement::is_zero() const {
    for (auto& x : c)
        if (!x.is_zero()) return false;
    return true;
}

std::string QuatElement::str() const {
    std::ostringstream os;
    os << "(" << c[0].str() << ", " << c[1].str() << ", " << c[2].str() << ", " << c[3].str() << ")";
    return os.str();
}

// ------------------------------------------------------------- QuatAlgebra

QuatAlgebra::QuatAlgebra(long d, FieldElement a, FieldElement b) : d_(d), a_(std::move(a)), b_(std::move(b)) {
    if (a_.is_zero() || b_.is_zero()) throw MathError("quaternion structure constants must be nonzero");
}

QuatElement QuatAlgebra::mul(const QuatElement& x, const QuatElement& y) const {
    const auto& [w1, x1, y1, z1] = x.c;
    const auto& [w2, x2, y2, z2] = y.c;
    FieldElement ab = a_ * b_;
    return QuatElement(w1 * w2 + a_ * x1 * x2 + b_ * y1 * y2 - ab * z1 * z2,
                       w1 * x2 + x1 * w2 - b_ * y1 * z2 + b_ * z1 * y2,
                       w1 * y2 + y1 * w2 + a_ * x1 * z2 - a_ * z1 * x2,
                       w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2);
}

QuatElement QuatAlgebra::conj(const QuatElement& x) const { return QuatElement(x.c[0], -x.c[1], -x.c[2], -x.c[3]); }

FieldElement QuatAlgebra::nr(const QuatElement& x) const {
    const auto& [w, i, j, k] = x.c;
    return w * w - a_ * i * i - b_ * j * j + a_ * b_ * k * k;
}

FieldElement QuatAlgebra::trd(const QuatElement& x) const { return x.c[0] + x.c[0]; }

QuatElement QuatAlgebra::inverse(const QuatElement& x) const {
    FieldElement n = nr(x);
    if (n.is_zero()) throw MathError("quaternion is not invertible");
    return conj(x).scale(n.inverse());
}

QuatElement QuatAlgebra::one() const { return scalar(1); }
QuatElement QuatAlgebra::zero() const { return scalar(0); }
QuatElement QuatAlgebra::scalar(long n) const { return QuatElement::scalar(FieldElement(d_, n)); }

ConjNrTr conj_nr_tr(const QuatAlgebra& A, const QuatElement& u) { return {A.conj(u), A.nr(u), A.trd(u)}; }

// ------------------------------------------------------------ ramification

int hilbert_symbol(const FieldElement& a, const FieldElement& b, const PrimeIdeal& P) {
    if (P.p == 2) throw MathError("dyadic Hilbert symbol is not computed directly");
    int al = valuation(a, P), be = valuation(b, P);
    long d = a.d();
    FieldElement t(d, (al * be) % 2 ? -1 : 1);
    for (int i = 0; i < std::abs(be); ++i) t *= be > 0 ? a : a.inverse();
    for (int i = 0; i < std::abs(al); ++i) t *= al > 0 ? b.inverse() : b;
    ResidueField F(P);
    return F.is_square(F.reduce_local(t)) ? 1 : -1;
}

std::vector<Place> ramified_primes(const QuatAlgebra& A) {
    std::vector<Place> out;
    for (int k = 0; k < 2; ++k)
        if (A.a().sign(k) < 0 && A.b().sign(k) < 0) {
            Place pl;
            pl.infinite = true;
            pl.embedding = k;
            out.push_back(pl);
        }
    // odd primes dividing 2ab
    std::set<long> ps;
    for (const auto* x : {&A.a(), &A.b()}) {
        Rational n = abs(x->norm());
        for (const Integer* z : {&n.get_num(), &n.get_den()})
            if (z->fits_slong_p())
                for (auto [p, e] : factor_integer(z->get_si())) ps.insert(p);
    }
    int count = static_cast<int>(out.size());
    for (long p : ps) {
        if (p == 2) continue;
        for (auto& [P, e] : factor_rational_prime(p, A.d()))
            if (hilbert_symbol(A.a(), A.b(), P) == -1) {
                Place pl;
                pl.prime = P;
                out.push_back(pl);
                ++count;
            }
    }
    auto dy = factor_rational_prime(2, A.d());
    if (dy.size() != 1) throw MathError("several dyadic primes: ramification there is not determined");
    if (count % 2) {
        Place pl;
        pl.prime = dy[0].first;
        out.push_back(pl);
    }
    return out;
}

// --------------------------------------------------------------- QuatOrder

static std::vector<Rational> q8(const QuatElement& x) {
    std::vector<Rational> v(8);
    for (int k = 0; k < 4; ++k) {
        auto [a, b] = x.c[k].basis_coords();
        v[2 * k] = a;
        v[2 * k + 1] = b;
    }
    return v;
}

static QuatElement from_q8(long d, const std::vector<Rational>& v) {
    QuatElement x;
    for (int k = 0; k < 4; ++k) x.c[k] = FieldElement::from_basis(d, v[2 * k], v[2 * k + 1]);
    return x;
}

// Z-basis (8 elements) of the Z-span of the given elements.
static std::vector<QuatElement> zspan_basis(long d, const std::vector<QuatElement>& xs) {
    Integer den = 1;
    std::vector<std::vector<Rational>> vs;
    for (auto& x : xs) {
        vs.push_back(q8(x));
        for (auto& r : vs.back()) den = lcm(den, r.get_den());
    }
    ZMat M;
    for (auto& v : vs) {
        std::vector<Integer> row(8);
        for (int k = 0; k < 8; ++k) row[k] = v[k].get_num() * (den / v[k].get_den());
        M.push_back(row);
    }
    ZMat H = hnf_rows(M);
    std::vector<QuatElement> out;
    for (auto& row : H) {
        std::vector<Rational> v(8);
        for (int k = 0; k < 8; ++k) {
            v[k] = Rational(row[k], den);
            v[k].canonicalize();
        }
        out.push_back(from_q8(d, v));
    }
    return out;
}

QuatOrder QuatOrder::from_generators(const QuatAlgebra& A, const std::vector<QuatElement>& gens) {
    std::vector<QuatElement> S = gens;
    S.push_back(A.one());
    FieldElement w = FieldElement::from_basis(A.d(), 0, 1);
    for (auto& g : gens) S.push_back(g.scale(w));
    std::vector<QuatElement> B = zspan_basis(A.d(), S);
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<QuatElement> T = B;
        for (auto& x : B)
            for (auto& y : B) T.push_back(A.mul(x, y));
        std::vector<QuatElement> B2 = zspan_basis(A.d(), T);
        if (B2 == B) {
            if (B.size() != 8) throw MathError("generators do not span a full lattice");
            return QuatOrder(A, B);
        }
        B = B2;
    }
    throw MathError("order closure did not stabilise");
}

QuatOrder::QuatOrder(const QuatAlgebra& A, const std::vector<QuatElement>& zbasis) : A_(A), basis_(zbasis) {
    if (basis_.size() != 8) throw MathError("an order needs a Z-basis of 8 elements");
    build();
}

std::vector<Rational> QuatOrder::coords(const QuatElement& x) const {
    std::vector<Rational> v = q8(x), c(8, 0);
    for (int i = 0; i < 8; ++i) {
        if (v[i] == 0) continue;
        for (int j = 0; j < 8; ++j) c[j] += v[i] * inv_[i][j];
    }
    return c;
}

bool QuatOrder::contains(const QuatElement& x) const {
    for (auto& r : coords(x))
        if (r.get_den() != 1) return false;
    return true;
}

QuatElement QuatOrder::element(const std::vector<Integer>& c) const {
    QuatElement x = A_.zero();
    for (int i = 0; i < 8; ++i)
        if (c[i] != 0) x = x + basis_[i].scale(FieldElement(A_.d(), Rational(c[i])));
    return x;
}

QuatElement QuatOrder::element(const std::vector<long>& c) const {
    std::vector<Integer> z(c.begin(), c.end());
    return element(z);
}

static std::vector<long> int_coords(const QuatOrder& O, const QuatElement& x, const char* what) {
    std::vector<long> out;
    for (auto& r : O.coords(x)) {
        if (r.get_den() != 1 || !r.get_num().fits_slong_p()) throw MathError(std::string("not integral: ") + what);
        out.push_back(r.get_num().get_si());
    }
    return out;
}

void QuatOrder::build() {
    long d = A_.d();
    QMat B = qmat(8, 8);
    for (int i = 0; i < 8; ++i) B[i] = q8(basis_[i]);
    inv_ = inverse(B);
    mult_.assign(8, std::vector<std::vector<long>>(8));
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) mult_[i][j] = int_coords(*this, A_.mul(basis_[i], basis_[j]), "product");
    conj_.assign(8, {});
    for (int i = 0; i < 8; ++i) conj_[i] = int_coords(*this, A_.conj(basis_[i]), "conjugate");
    one_ = int_coords(*this, A_.one(), "one");
    wc_ = int_coords(*this, QuatElement::scalar(FieldElement::from_basis(d, 0, 1)), "w");

    // O_F-basis search among small combinations of the Z-basis
    FieldElement w = FieldElement::from_basis(d, 0, 1);
    std::vector<QuatElement> cands = basis_;
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) cands.push_back(basis_[i] + basis_[j]);
    auto try_basis = [&](const std::vector<QuatElement>& f) -> bool {
        ZMat P = zmat(8, 8);
        for (int k = 0; k < 4; ++k) {
            auto c1 = coords(f[k]), c2 = coords(f[k].scale(w));
            for (int j = 0; j < 8; ++j) {
                P[2 * k][j] = c1[j].get_num();
                P[2 * k + 1][j] = c2[j].get_num();
            }
        }
        Integer D = det(P);
        if (D != 1 && D != -1) return false;
        QMat Pi = inverse(to_q(P));
        z2of_.assign(8, std::vector<long>(8));
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) z2of_[i][j] = Pi[i][j].get_num().get_si();
        ofb_ = f;
        return true;
    };
    size_t n = cands.size();
    for (size_t a = 0; a < n; ++a)
        for (size_t b = a + 1; b < n; ++b)
            for (size_t c = b + 1; c < n; ++c)
                for (size_t e = c + 1; e < n; ++e)
                    if (try_basis({cands[a], cands[b], cands[c], cands[e]})) return;
    throw MathError("no O_F-basis found among small elements");
}

std::array<FieldElement, 4> QuatOrder::of_coords(const QuatElement& x) const {
    auto c = coords(x);
    std::array<FieldElement, 4> out;
    for (int k = 0; k < 4; ++k) {
        Rational u = 0, v = 0;
        for (int i = 0; i < 8; ++i) {
            u += c[i] * z2of_[i][2 * k];
            v += c[i] * z2of_[i][2 * k + 1];
        }
        out[k] = FieldElement::from_basis(A_.d(), u, v);
    }
    return out;
}

Integer QuatOrder::discriminant() const {
    ZMat T = zmat(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            Rational t = A_.trd(A_.mul(basis_[i], basis_[j])).trace();
            T[i][j] = t.get_num();
        }
    return det(T);
}

bool is_order(const QuatAlgebra& A, const std::vector<QuatElement>& zbasis) {
    try {
        QuatOrder O(A, zbasis);
        return O.contains(A.one());
    } catch (const MathError&) {
        return false;
    }
}

bool verify_maximal_order(const QuatOrder& O) {
    const QuatAlgebra& A = O.algebra();
    Integer D = QuadField(A.d()).disc();
    Integer expect = D * D * D * D;
    for (auto& pl : ramified_primes(A))
        if (!pl.infinite) expect *= pl.prime.norm() * pl.prime.norm();
    return abs(O.discriminant()) == expect;
}

// ----------------------------------------------------------- LocalSplitting

LocalSplitting::LocalSplitting(const QuatOrder& O, const PrimeIdeal& P) : O_(O), F_(P) {
    if (P.p == 2) throw MathError("local splitting needs odd residue characteristic");
    for (auto& pl : ramified_primes(O.algebra()))
        if (!pl.infinite && pl.prime.ideal == P.ideal) throw MathError("prime is ramified in D");
    const QuatAlgebra& A = O.algebra();
    const auto& f = O.of_basis();
    // structure constants of O / P O over F_P in the O_F-basis
    int st[4][4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            auto c = O.of_coords(A.mul(f[i], f[j]));
            for (int k = 0; k < 4; ++k) st[i][j][k] = F_.reduce(c[k]);
        }
    auto amul = [&](const std::vector<int>& x, const std::vector<int>& y) {
        std::vector<int> z(4, 0);
        for (int i = 0; i < 4; ++i) {
            if (!x[i]) continue;
            for (int j = 0; j < 4; ++j) {
                if (!y[j]) continue;
                int xy = F_.mul(x[i], y[j]);
                for (int k = 0; k < 4; ++k)
                    if (st[i][j][k]) z[k] = F_.add(z[k], F_.mul(xy, st[i][j][k]));
            }
        }
        return z;
    };
    auto basis_vec = [&](int i) {
        std::vector<int> v(4, 0);
        v[i] = 1;
        return v;
    };
    // zero divisor: lexicographic search for x with singular left multiplication
    int q = static_cast<int>(F_.size());
    std::vector<int> z;
    for (long idx = 1; idx < static_cast<long>(q) * q * q * q && z.empty(); ++idx) {
        std::vector<int> x(4);
        long t = idx;
        for (int k = 3; k >= 0; --k) {
            x[k] = static_cast<int>(t % q);
            t /= q;
        }
        FMat L;
        for (int i = 0; i < 4; ++i) L.push_back(amul(basis_vec(i), x));
        if (rank(F_, L) < 4) z = x;
    }
    if (z.empty()) throw MathError("no zero divisor found: algebra is not split at P");
    FMat span;
    for (int i = 0; i < 4; ++i) span.push_back(amul(basis_vec(i), z));
    auto piv = rref(F_, span);
    if (piv.size() != 2) throw MathError("minimal left ideal has unexpected dimension");
    FMat V{span[0], span[1]};
    auto rep = [&](const std::vector<int>& x) {
        Mat2 m{};
        for (int j = 0; j < 2; ++j) {
            std::vector<int> c;
            if (!solve_left(F_, V, amul(x, V[j]), c)) throw MathError("left ideal is not stable");
            m[0 * 2 + j] = c[0];
            m[1 * 2 + j] = c[1];
        }
        return m;
    };
    for (int i = 0; i < 8; ++i) {
        auto c = O.of_coords(O.basis()[i]);
        std::vector<int> x(4);
        for (int k = 0; k < 4; ++k) x[k] = F_.reduce(c[k]);
        img_.push_back(rep(x));
    }
}

LocalSplitting::Mat2 LocalSplitting::mul(const Mat2& x, const Mat2& y) const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r[2 * i + j] = F_.add(F_.mul(x[2 * i], y[j]), F_.mul(x[2 * i + 1], y[2 + j]));
    return r;
}

LocalSplitting::Mat2 LocalSplitting::image_coords(const std::vector<long>& zc) const {
    Mat2 r{0, 0, 0, 0};
    for (int i = 0; i < 8; ++i) {
        if (!zc[i]) continue;
        int c = F_.from_int(zc[i]);
        for (int k = 0; k < 4; ++k) r[k] = F_.add(r[k], F_.mul(c, img_[i][k]));
    }
    return r;
}

LocalSplitting::Mat2 LocalSplitting::image(const QuatElement& x) const {
    Mat2 r{0, 0, 0, 0};
    auto c = O_.coords(x);
    for (int i = 0; i < 8; ++i) {
        if (c[i] == 0) continue;
        if (c[i].get_den() % F_.p() == 0) throw MathError("element is not integral at the splitting prime");
        Integer num = c[i].get_num() % F_.p(), den = c[i].get_den() % F_.p();
        int ci = F_.mul(F_.from_int(num.get_si()), F_.inv(F_.from_int(den.get_si())));
        for (int k = 0; k < 4; ++k) r[k] = F_.add(r[k], F_.mul(ci, img_[i][k]));
    }
    return r;
}

QuatOrder sqrt2_maximal_order() {
    long d = 2;
    QuatAlgebra A(d, FieldElement(d, -1), FieldElement(d, -1));
    FieldElement h(d, 0, Rational(1, 2));  // 1 / sqrt 2
    FieldElement one(d, 1), zero(d, 0);
    QuatElement e1 = QuatElement(h, h, zero, zero);
    QuatElement e2 = QuatElement(h, zero, h, zero);
    return QuatOrder::from_generators(A, {e1, e2, A.mul(e1, e2), A.mul(e2, e1)});
}

}  // namespace hsiegel
