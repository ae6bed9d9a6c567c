#include "hsiegel/exactnum.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace hsiegel {

Rational make_rational(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string to_string(const Integer& x) { return x.get_str(); }
std::string to_string(const Rational& x) { return x.get_str(); }

Integer isqrt(const Integer& n) {
    if (n < 0) throw MathError("isqrt of negative integer");
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_square(const Integer& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

bool is_prime(long n) {
    if (n < 2) return false;
    for (long k = 2; k * k <= n; ++k)
        if (n % k == 0) return false;
    return true;
}

std::vector<std::pair<long, int>> factor_integer(long n) {
    std::vector<std::pair<long, int>> out;
    if (n < 0) n = -n;
    for (long p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

static long posmod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

// ---------------------------------------------------------------- QuadField

QuadField::QuadField(long d) : d_(d) {
    if (d <= 1) throw MathError("field discriminant must be > 1");
    for (auto [p, e] : factor_integer(d))
        if (e > 1) throw MathError("d must be squarefree");
}

// ------------------------------------------------------------- FieldElement

FieldElement::FieldElement(long d, Rational a, Rational b) : d_(d), a_(std::move(a)), b_(std::move(b)) {
    a_.canonicalize();
    b_.canonicalize();
}

FieldElement FieldElement::from_basis(long d, const Rational& x, const Rational& y) {
    if (d % 4 == 1) return FieldElement(d, x + y / 2, y / 2);
    return FieldElement(d, x, y);
}

std::pair<Rational, Rational> FieldElement::basis_coords() const {
    if (d_ % 4 == 1) return {a_ - b_, 2 * b_};
    return {a_, b_};
}

bool FieldElement::is_integral() const {
    auto [x, y] = basis_coords();
    return x.get_den() == 1 && y.get_den() == 1;
}

void FieldElement::check(const FieldElement& o) const {
    if (d_ != o.d_ && d_ != 0 && o.d_ != 0) throw MathError("mixing elements of different fields");
}

FieldElement FieldElement::conj() const { return FieldElement(d_, a_, -b_); }
Rational FieldElement::norm() const { return a_ * a_ - d_ * b_ * b_; }
Rational FieldElement::trace() const { return 2 * a_; }

int FieldElement::sign(int k) const {
    // sign of a + s b sqrt(d), s = +1 or -1, decided exactly
    Rational b = k == 0 ? b_ : Rational(-b_);
    int sa = sgn(a_), sb = sgn(b);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    Rational lhs = a_ * a_, rhs = b * b * d_;
    if (lhs == rhs) return 0;
    return lhs > rhs ? sa : sb;
}

bool FieldElement::is_totally_positive() const {
    if (a_ <= 0) return false;
    return norm() > 0;
}

bool is_totally_positive(const FieldElement& a) { return a.is_totally_positive(); }

FieldElement FieldElement::operator-() const { return FieldElement(d_, -a_, -b_); }

FieldElement& FieldElement::operator+=(const FieldElement& o) {
    check(o);
    if (!d_) d_ = o.d_;
    a_ += o.a_;
    b_ += o.b_;
    return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
    check(o);
    if (!d_) d_ = o.d_;
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
    check(o);
    if (!d_) d_ = o.d_;
    Rational a = a_ * o.a_ + d_ * b_ * o.b_;
    Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = a;
    b_ = b;
    return *this;
}

FieldElement FieldElement::inverse() const {
    Rational n = norm();
    if (n == 0) throw MathError("inverse of zero field element");
    return FieldElement(d_, a_ / n, -b_ / n);
}

FieldElement& FieldElement::operator/=(const FieldElement& o) {
    check(o);
    return *this *= o.inverse();
}

bool FieldElement::operator==(const FieldElement& o) const {
    if (a_ != o.a_ || b_ != o.b_) return false;
    return d_ == o.d_ || d_ == 0 || o.d_ == 0 || (b_ == 0);
}

std::string basis_str(const FieldElement& x) {
    auto [a, b] = x.basis_coords();
    std::string s;
    if (a != 0) s = to_string(a);
    if (b != 0) {
        if (b > 0 && !s.empty()) s += "+";
        if (b == -1)
            s += "-";
        else if (b != 1)
            s += to_string(b);
        s += "w";
    }
    return s.empty() ? "0" : s;
}

std::string FieldElement::str() const {
    std::ostringstream os;
    if (b_ == 0) {
        os << a_;
        return os.str();
    }
    if (a_ != 0) os << a_ << (b_ > 0 ? "+" : "-");
    else if (b_ < 0) os << "-";
    Rational ab = abs(b_);
    if (ab != 1) os << ab << "*";
    os << "sqrt(" << d_ << ")";
    return os.str();
}

// -------------------------------------------------------------------- Ideal

using ZVec = std::pair<Integer, Integer>;

static ZVec coords(const FieldElement& x) {
    auto [a, b] = x.basis_coords();
    if (a.get_den() != 1 || b.get_den() != 1) throw MathError("ideal generator not integral");
    return {a.get_num(), b.get_num()};
}

static ZVec mul_w(long d, const ZVec& v) {
    // (x + y w) w = y n + (x + y t) w
    QuadField F(d);
    return {v.second * F.w_const(), v.first + v.second * F.w_trace()};
}

Ideal Ideal::from_zvectors(long d, std::vector<ZVec> v) {
    Ideal I;
    I.d_ = d;
    // column echelon on the second coordinate
    Integer c = 0, bx = 0;
    std::vector<Integer> xs;
    for (auto& [x, y] : v) {
        if (y == 0) {
            xs.push_back(x);
            continue;
        }
        if (c == 0) {
            c = y;
            bx = x;
            continue;
        }
        // combine (bx, c) and (x, y)
        Integer g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), c.get_mpz_t(), y.get_mpz_t());
        Integer nbx = s * bx + t * x;
        // the other combination kills the y-coordinate
        Integer kx = (y / g) * bx - (c / g) * x;
        xs.push_back(kx);
        c = g;
        bx = nbx;
    }
    Integer a = 0;
    for (auto& x : xs) a = gcd(a, x);
    if (c < 0) {
        c = -c;
        bx = -bx;
    }
    if (c == 0 || a == 0) {
        if (c == 0 && a == 0) return I;  // zero ideal
        throw MathError("Z-module is not of full rank");
    }
    a = abs(a);
    Integer b = bx % a;
    if (b < 0) b += a;
    I.a_ = a;
    I.b_ = b;
    I.c_ = c;
    return I;
}

Ideal::Ideal(long d, const std::vector<FieldElement>& gens) {
    std::vector<ZVec> v;
    for (auto& g : gens) {
        ZVec z = coords(g);
        v.push_back(z);
        v.push_back(mul_w(d, z));
    }
    *this = from_zvectors(d, v);
}

Ideal Ideal::principal(const FieldElement& g) { return Ideal(g.d(), {g}); }
Ideal Ideal::unit(long d) { return Ideal(d, {FieldElement(d, 1)}); }

std::pair<FieldElement, FieldElement> Ideal::z_basis() const {
    return {FieldElement::from_basis(d_, Rational(a_), 0), FieldElement::from_basis(d_, Rational(b_), Rational(c_))};
}

bool Ideal::contains(const FieldElement& x) const {
    if (!x.is_integral()) return false;
    ZVec z = coords(x);
    if (is_zero()) return z.first == 0 && z.second == 0;
    if (z.second % c_ != 0) return false;
    Integer k = z.second / c_;
    return (z.first - k * b_) % a_ == 0;
}

bool Ideal::divides(const Ideal& other) const {
    auto [u, v] = other.z_basis();
    return contains(u) && contains(v);
}

Ideal Ideal::operator*(const Ideal& o) const {
    if (d_ != o.d_) throw MathError("ideals of different fields");
    auto [u1, u2] = z_basis();
    auto [v1, v2] = o.z_basis();
    return from_zvectors(d_, {coords(u1 * v1), coords(u1 * v2), coords(u2 * v1), coords(u2 * v2)});
}

Ideal Ideal::divide(const Ideal& o) const {
    auto [v1, v2] = o.z_basis();
    Ideal oc(d_, {v1.conj(), v2.conj()});
    Ideal prod = *this * oc;
    Integer n = o.norm();
    if (prod.a_ % n != 0 || prod.b_ % n != 0 || prod.c_ % n != 0) throw MathError("ideal division is not exact");
    Ideal q;
    q.d_ = d_;
    q.a_ = prod.a_ / n;
    q.b_ = prod.b_ / n;
    q.c_ = prod.c_ / n;
    return q;
}

FieldElement Ideal::generator() const {
    if (is_zero()) return FieldElement(d_, 0);
    Integer N = norm();
    auto [u, v] = z_basis();
    for (long bound = 0; bound <= 400; ++bound) {
        for (long m = -bound; m <= bound; ++m)
            for (long n = -bound; n <= bound; ++n) {
                if (std::max(std::labs(m), std::labs(n)) != bound) continue;
                FieldElement g = u * FieldElement(d_, m) + v * FieldElement(d_, n);
                Rational gn = abs(g.norm());
                if (gn == N) return g;
            }
    }
    throw MathError("no generator found for ideal " + str());
}

bool Ideal::tp_generator(FieldElement& out) const {
    FieldElement g = generator();
    int s0 = g.sign(0), s1 = g.sign(1);
    if (s0 > 0 && s1 > 0) {
        out = g;
        return true;
    }
    if (s0 < 0 && s1 < 0) {
        out = -g;
        return true;
    }
    FieldElement e = fundamental_unit(d_);
    if (e.norm() == -1) {
        FieldElement h = g * e;
        out = h.sign(0) > 0 ? h : -h;
        return true;
    }
    return false;
}

bool Ideal::is_square() const {
    for (auto& [P, e] : factor_ideal(*this))
        if (e % 2) return false;
    return true;
}

std::string Ideal::str() const {
    std::ostringstream os;
    os << "<" << a_ << ", " << b_ << "+" << c_ << "w>";
    return os.str();
}

static Integer content(const Ideal& I) { return gcd(gcd(I.a(), I.b()), I.c()); }

FractionalIdeal FractionalIdeal::inverse() const {
    auto [u, v] = num.z_basis();
    Ideal conj(num.d(), {u.conj(), v.conj()});
    FractionalIdeal r;
    Integer n = num.norm();
    // (I / den)^-1 = den conj(I) / N(I)
    r.num = conj * Ideal::principal(FieldElement(num.d(), Rational(den)));
    r.den = n;
    Integer g = gcd(content(r.num), r.den);
    if (g > 1) {
        r.num = Ideal(num.d(), {FieldElement::from_basis(num.d(), Rational(r.num.a() / g), 0),
                                FieldElement::from_basis(num.d(), Rational(r.num.b() / g), Rational(r.num.c() / g))});
        r.den /= g;
    }
    return r;
}

FractionalIdeal FractionalIdeal::operator*(const FractionalIdeal& o) const {
    FractionalIdeal r{num * o.num, den * o.den};
    Integer g = gcd(content(r.num), r.den);
    if (g > 1) {
        long d = num.d();
        r.num = Ideal(d, {FieldElement::from_basis(d, Rational(r.num.a() / g), 0),
                          FieldElement::from_basis(d, Rational(r.num.b() / g), Rational(r.num.c() / g))});
        r.den /= g;
    }
    return r;
}

bool FractionalIdeal::is_unit() const { return den == 1 && num.norm() == 1; }

bool FractionalIdeal::operator==(const FractionalIdeal& o) const {
    // compare I/den with J/den' via I den' = J den
    long d = num.d();
    return num * Ideal::principal(FieldElement(d, Rational(o.den))) ==
           o.num * Ideal::principal(FieldElement(d, Rational(den)));
}

// ------------------------------------------------------------------- primes

std::vector<std::pair<PrimeIdeal, int>> factor_rational_prime(long p, long d) {
    if (!is_prime(p)) throw MathError("not a prime: " + std::to_string(p));
    QuadField F(d);
    long t = F.w_trace(), n = F.w_const();
    std::vector<long> roots;
    for (long r = 0; r < p; ++r)
        if (posmod(r * r - t * r - n, p) == 0) roots.push_back(r);
    std::vector<std::pair<PrimeIdeal, int>> out;
    auto make = [&](long r) {
        FieldElement g = FieldElement::from_basis(d, Rational(-r), 1);
        return Ideal(d, {FieldElement(d, p), g});
    };
    if (F.disc() % p == 0) {
        PrimeIdeal P{make(roots.at(0)), p, 1, 2};
        out.emplace_back(P, 2);
    } else if (roots.size() == 2) {
        for (long r : roots) out.emplace_back(PrimeIdeal{make(r), p, 1, 1}, 1);
    } else {
        out.emplace_back(PrimeIdeal{Ideal::principal(FieldElement(d, p)), p, 2, 1}, 1);
    }
    return out;
}

std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const Ideal& I) {
    if (I.is_zero()) throw MathError("cannot factor the zero ideal");
    std::vector<std::pair<PrimeIdeal, int>> out;
    Integer N = I.norm();
    if (!N.fits_slong_p()) throw MathError("ideal norm too large to factor");
    Ideal J = I;
    for (auto [p, e] : factor_integer(N.get_si())) {
        for (auto& [P, m] : factor_rational_prime(p, I.d())) {
            int k = 0;
            while (P.ideal.divides(J)) {
                J = J.divide(P.ideal);
                ++k;
            }
            if (k) out.emplace_back(P, k);
        }
    }
    return out;
}

int valuation(const FieldElement& x, const PrimeIdeal& P) {
    if (x.is_zero()) throw MathError("valuation of zero");
    auto [u, v] = x.basis_coords();
    Integer m = lcm(u.get_den(), v.get_den());
    FieldElement y = x * FieldElement(x.d(), Rational(m));
    Ideal J = Ideal::principal(y);
    int k = 0;
    while (P.ideal.divides(J)) {
        J = J.divide(P.ideal);
        ++k;
    }
    int vm = 0;
    Integer mm = m;
    while (mm % P.p == 0) {
        mm /= P.p;
        ++vm;
    }
    return k - vm * P.e;
}

FieldElement fundamental_unit(long d) {
    QuadField F(d);
    Integer sd = isqrt(Integer(d));
    // continued fraction of w = (P + sqrt d) / Q
    Integer P = d % 4 == 1 ? 1 : 0, Q = d % 4 == 1 ? 2 : 1;
    Integer pm1 = 1, pm2 = 0, qm1 = 0, qm2 = 1;
    for (int k = 0; k < 100000; ++k) {
        if (Q <= 0) throw MathError("continued fraction invariant broken");
        Integer a = (P + sd) / Q;
        Integer pk = a * pm1 + pm2, qk = a * qm1 + qm2;
        FieldElement u = FieldElement(d, Rational(pk)) - FieldElement::from_basis(d, 0, Rational(qk));
        Rational nu = u.norm();
        if (nu == 1 || nu == -1) {
            // normalise to the unit > 1
            FieldElement cands[4] = {u, -u, u.inverse(), -u.inverse()};
            for (auto& c : cands)
                if ((c - FieldElement(d, 1)).sign(0) > 0) return c;
        }
        pm2 = pm1;
        pm1 = pk;
        qm2 = qm1;
        qm1 = qk;
        P = a * Q - P;
        Q = (Integer(d) - P * P) / Q;
    }
    throw MathError("fundamental unit search exceeded bound");
}

std::vector<FieldElement> tp_units_mod_squares(long d) {
    FieldElement e = fundamental_unit(d);
    if (e.norm() == -1) return {FieldElement(d, 1)};
    if (e.is_totally_positive()) return {FieldElement(d, 1), e};
    return {FieldElement(d, 1), -e};
}

static Integer sigma(long n, int k) {
    Integer s = 0;
    for (long m = 1; m <= n; ++m)
        if (n % m == 0) {
            Integer t;
            mpz_ui_pow_ui(t.get_mpz_t(), m, k);
            s += t;
        }
    return s;
}

Rational zeta_special_value(long d, int s) {
    long D = QuadField(d).disc();
    int k;
    long scale;
    if (s == -1) {
        k = 1;
        scale = 60;
    } else if (s == -3) {
        k = 3;
        scale = 120;
    } else {
        throw MathError("unsupported zeta argument");
    }
    Integer sum = 0;
    for (long b = -isqrt(Integer(D)).get_si() - 1; b * b < D || b < 0; ++b) {
        if (b * b >= D) continue;
        if (posmod(b - D, 2) != 0) continue;
        sum += sigma((D - b * b) / 4, k);
    }
    Rational r(sum, scale);
    r.canonicalize();
    return r;
}

// ------------------------------------------------------------- ResidueField

ResidueField::ResidueField(const PrimeIdeal& P) : P_(P), p_(P.p), f_(P.f), d_(P.ideal.d()) {
    if (!is_prime(p_)) throw MathError("residue field of a non-prime");
    q_ = static_cast<int>(f_ == 1 ? p_ : p_ * p_);
    QuadField F(d_);
    tr_ = posmod(F.w_trace(), p_);
    c_ = posmod(F.w_const(), p_);
    if (f_ == 1) {
        // w = b' mod P where P = <a, b + c w> with c = 1 for degree one primes
        if (P.ideal.c() != 1) throw MathError("unexpected HNF for a degree one prime");
        wimg_ = posmod(-P.ideal.b().get_si(), p_);
    }
    if (q_ > 1024) throw MathError("residue field too large");
    add_.resize(q_ * q_);
    mul_.resize(q_ * q_);
    neg_.resize(q_);
    inv_.assign(q_, 0);
    auto dec = [&](int e) { return std::pair<long, long>(e % p_, e / p_); };
    auto enc = [&](long x, long y) { return static_cast<int>(posmod(x, p_) + (f_ == 2 ? posmod(y, p_) * p_ : 0)); };
    for (int x = 0; x < q_; ++x) {
        auto [x0, x1] = dec(x);
        neg_[x] = enc(-x0, -x1);
        for (int y = 0; y < q_; ++y) {
            auto [y0, y1] = dec(y);
            add_[x * q_ + y] = enc(x0 + y0, x1 + y1);
            // (x0 + x1 t)(y0 + y1 t), t^2 = tr t + c
            long m0 = x0 * y0 + x1 * y1 % p_ * c_;
            long m1 = x0 * y1 + x1 * y0 + x1 * y1 % p_ * tr_;
            mul_[x * q_ + y] = enc(m0, m1);
            if (mul_[x * q_ + y] == 1) inv_[x] = y;
        }
    }
    for (int x = 1; x < q_; ++x)
        if (mul_[x * q_ + inv_[x]] != 1) throw MathError("residue ring is not a field");
}

int ResidueField::inv(int x) const {
    if (x == 0) throw MathError("inverse of zero in residue field");
    return inv_[x];
}

int ResidueField::from_int(long n) const { return static_cast<int>(posmod(n, p_)); }

int ResidueField::reduce_basis(const Integer& x, const Integer& y) const {
    Integer pz = p_;
    Integer xr = x % pz, yr = y % pz;
    long x0 = posmod(xr.get_si(), p_), y0 = posmod(yr.get_si(), p_);
    if (f_ == 1) return static_cast<int>(posmod(x0 + y0 * wimg_, p_));
    return static_cast<int>(x0 + y0 * p_);
}

int ResidueField::reduce(const FieldElement& e) const {
    auto [x, y] = e.basis_coords();
    // denominators must be units at p
    Integer den = lcm(x.get_den(), y.get_den());
    if (den % p_ == 0) throw MathError("element is not integral at the prime");
    Integer xn = x.get_num() * (den / x.get_den()), yn = y.get_num() * (den / y.get_den());
    int r = reduce_basis(xn, yn);
    if (den == 1) return r;
    return mul(r, inv(from_int(static_cast<long>(posmod(Integer(den % Integer(p_)).get_si(), p_)))));
}

int ResidueField::reduce_local(const FieldElement& x) const {
    if (x.is_zero()) return 0;
    auto [u, v] = x.basis_coords();
    Integer m = lcm(u.get_den(), v.get_den());
    int k = 0;
    while (m % p_ == 0) {
        m /= p_;
        ++k;
    }
    if (k == 0) return reduce(x);
    if (valuation(x, P_) < 0) throw MathError("element is not integral at the prime");
    // x = y / p^k with p^k = pi^(k e) c, c a P-unit
    FieldElement pk(d_, 1), pie(d_, 1);
    FieldElement pi = P_.ideal.generator();
    for (int i = 0; i < k; ++i) pk *= FieldElement(d_, p_);
    for (int i = 0; i < k * P_.e; ++i) pie *= pi;
    FieldElement y = x * pk;
    return mul(reduce(y / pie), inv(reduce(pk / pie)));
}

FieldElement ResidueField::lift(int e) const {
    if (f_ == 1) return FieldElement(d_, Rational(e));
    return FieldElement::from_basis(d_, Rational(e % p_), Rational(e / p_));
}

bool ResidueField::is_square(int x) const {
    if (x == 0) return true;
    // Euler criterion via repeated multiplication
    long e = (q_ - 1) / 2;
    int r = 1, b = x;
    while (e) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r == 1;
}

}  // namespace hsiegel
