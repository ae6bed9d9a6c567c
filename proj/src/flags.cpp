#include "hsiegel/flags.hpp"

#include <stdexcept>

namespace hsiegel {

const char* variant_name(FlagVariant v) {
    switch (v) {
        case FlagVariant::Siegel: return "siegel";
        case FlagVariant::Klingen: return "klingen";
        case FlagVariant::Borel: return "borel";
    }
    return "?";
}

FlagVariant parse_variant(const std::string& s) {
    if (s == "siegel") return FlagVariant::Siegel;
    if (s == "klingen") return FlagVariant::Klingen;
    if (s == "borel") return FlagVariant::Borel;
    throw std::invalid_argument("unknown parahoric '" + s + "'");
}

int symplectic_pairing(const ResidueField& F, const FVec& x, const FVec& y) {
    int a = F.add(F.mul(x[0], y[2]), F.mul(x[1], y[3]));
    int b = F.add(F.mul(x[2], y[0]), F.mul(x[3], y[1]));
    return F.sub(a, b);
}

FVec vec_mul(const ResidueField& F, const FVec& x, const FMat4& g) {
    FVec r{0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < 4; ++j) r[j] = F.add(r[j], F.mul(x[i], g[4 * i + j]));
    }
    return r;
}

FMat4 mat_mul(const ResidueField& F, const FMat4& a, const FMat4& b) {
    FMat4 r;
    for (int i = 0; i < 4; ++i) {
        FVec row = vec_mul(F, {a[4 * i], a[4 * i + 1], a[4 * i + 2], a[4 * i + 3]}, b);
        for (int j = 0; j < 4; ++j) r[4 * i + j] = row[j];
    }
    return r;
}

FMat4 identity4(const ResidueField& F) {
    FMat4 r{};
    for (int i = 0; i < 4; ++i) r[5 * i] = F.from_int(1);
    return r;
}

int similitude_factor(const ResidueField& F, const FMat4& g) {
    std::array<FVec, 4> rows;
    for (int i = 0; i < 4; ++i) rows[i] = {g[4 * i], g[4 * i + 1], g[4 * i + 2], g[4 * i + 3]};
    int lambda = symplectic_pairing(F, rows[0], rows[2]);
    if (lambda == 0) return 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            int want = 0;
            if (j == i + 2) want = lambda;
            if (i == j + 2) want = F.neg(lambda);
            if (symplectic_pairing(F, rows[i], rows[j]) != want) return 0;
        }
    return lambda;
}

long flag_count_formula(long q, FlagVariant v) {
    // q^3 (1 + 1/q)(1 + 1/q^2) and q^4 (1 + 1/q)^2 (1 + 1/q^2)
    switch (v) {
        case FlagVariant::Siegel: return (q + 1) * (q * q + 1);
        case FlagVariant::Klingen: return (q + 1) * (q * q + 1);
        case FlagVariant::Borel: return (q + 1) * (q + 1) * (q * q + 1);
    }
    return 0;
}

namespace {

// In-place row echelon of up to two rows; returns the rank.
int echelon(const ResidueField& F, std::vector<FVec>& rows) {
    int r = 0;
    for (int c = 0; c < 4 && r < static_cast<int>(rows.size()); ++c) {
        int piv = -1;
        for (int i = r; i < static_cast<int>(rows.size()); ++i)
            if (rows[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[r], rows[piv]);
        int inv = F.inv(rows[r][c]);
        for (auto& v : rows[r]) v = F.mul(v, inv);
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            int m = rows[i][c];
            for (int k = 0; k < 4; ++k) rows[i][k] = F.sub(rows[i][k], F.mul(m, rows[r][k]));
        }
        ++r;
    }
    return r;
}

bool normalize(const ResidueField& F, FVec& x) {
    for (int c = 0; c < 4; ++c)
        if (x[c] != 0) {
            int inv = F.inv(x[c]);
            for (auto& v : x) v = F.mul(v, inv);
            return true;
        }
    return false;
}

bool in_span(const ResidueField& F, const FVec& x, const std::vector<FVec>& plane) {
    std::vector<FVec> m = plane;
    m.push_back(x);
    return echelon(F, m) == 2;
}

}  // namespace

std::array<int, 6> plucker(const ResidueField& F, const std::vector<FVec>& plane) {
    if (plane.size() != 2) throw std::invalid_argument("plucker: need two rows");
    const FVec &x = plane[0], &y = plane[1];
    static const int idx[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    std::array<int, 6> a;
    for (int k = 0; k < 6; ++k) {
        int i = idx[k][0], j = idx[k][1];
        a[k] = F.sub(F.mul(x[i], y[j]), F.mul(x[j], y[i]));
    }
    for (int k = 0; k < 6; ++k)
        if (a[k] != 0) {
            int inv = F.inv(a[k]);
            for (auto& v : a) v = F.mul(v, inv);
            return a;
        }
    throw std::invalid_argument("plucker: rank < 2");
}

FlagSpace::FlagSpace(const ResidueField& F, FlagVariant v) : F_(F), v_(v) {
    long q = F.size();
    std::vector<FVec> points;
    for (long n = 0; n < q * q * q * q; ++n) {
        FVec x;
        long m = n;
        for (int k = 3; k >= 0; --k) {
            x[k] = static_cast<int>(m % q);
            m /= q;
        }
        FVec y = x;
        if (normalize(F, y) && y == x) points.push_back(x);
    }
    if (v == FlagVariant::Klingen) {
        for (auto& x : points) flags_.push_back({v, {x}});
    } else {
        // isotropic planes through their reduced echelon basis, by pivot pattern
        std::vector<std::vector<FVec>> planes;
        for (int p0 = 0; p0 < 4; ++p0)
            for (int p1 = p0 + 1; p1 < 4; ++p1) {
                std::vector<std::pair<int, int>> free;
                for (int c = p0 + 1; c < 4; ++c)
                    if (c != p1) free.push_back({0, c});
                for (int c = p1 + 1; c < 4; ++c) free.push_back({1, c});
                long total = 1;
                for (size_t k = 0; k < free.size(); ++k) total *= q;
                for (long n = 0; n < total; ++n) {
                    std::vector<FVec> P = {{0, 0, 0, 0}, {0, 0, 0, 0}};
                    P[0][p0] = P[1][p1] = F.from_int(1);
                    long m = n;
                    for (auto [r, c] : free) {
                        P[r][c] = static_cast<int>(m % q);
                        m /= q;
                    }
                    if (symplectic_pairing(F, P[0], P[1]) == 0) planes.push_back(P);
                }
            }
        for (auto& P : planes) {
            if (v == FlagVariant::Siegel) {
                flags_.push_back({v, P});
                continue;
            }
            for (long a = 0; a <= q; ++a) {
                FVec l;
                if (a == q) {
                    l = P[1];
                } else {
                    for (int k = 0; k < 4; ++k) l[k] = F.add(P[0][k], F.mul(static_cast<int>(a), P[1][k]));
                }
                normalize(F, l);
                flags_.push_back({v, {l, P[0], P[1]}});
            }
        }
    }
    if (static_cast<long>(flags_.size()) != flag_count_formula(q, v))
        throw std::logic_error("flag enumeration disagrees with the count formula");
    for (size_t i = 0; i < flags_.size(); ++i) index_.emplace(key(flags_[i]), i);
}

uint64_t FlagSpace::key(const Flag& f) const {
    uint64_t k = 0, q = static_cast<uint64_t>(F_.size());
    for (auto& r : f.rows)
        for (int c : r) k = k * q + static_cast<uint64_t>(c);
    return k;
}

long FlagSpace::index(const Flag& f) const {
    if (f.variant != v_) return -1;
    auto it = index_.find(key(f));
    return it == index_.end() ? -1 : static_cast<long>(it->second);
}

bool FlagSpace::canonical(const std::vector<FVec>& rows, Flag& out) const {
    out.variant = v_;
    out.rows.clear();
    if (v_ == FlagVariant::Klingen) {
        FVec x = rows.at(0);
        if (!normalize(F_, x)) return false;
        out.rows.push_back(x);
        return true;
    }
    std::vector<FVec> P = {rows.at(rows.size() - 2), rows.at(rows.size() - 1)};
    if (echelon(F_, P) != 2) return false;
    if (v_ == FlagVariant::Borel) {
        FVec l = rows.at(0);
        if (!normalize(F_, l) || !in_span(F_, l, P)) return false;
        out.rows.push_back(l);
    }
    out.rows.push_back(P[0]);
    out.rows.push_back(P[1]);
    return true;
}

Flag FlagSpace::act(const FMat4& g, const Flag& x) const {
    if (similitude_factor(F_, g) == 0) throw std::invalid_argument("act: not a similitude");
    std::vector<FVec> rows;
    for (auto& r : x.rows) rows.push_back(vec_mul(F_, r, g));
    Flag out;
    if (!canonical(rows, out)) throw std::logic_error("act: similitude collapsed a flag");
    return out;
}

long FlagSpace::act_index(const FMat4& g, size_t i) const {
    std::vector<FVec> rows;
    for (auto& r : flags_[i].rows) rows.push_back(vec_mul(F_, r, g));
    Flag out;
    if (!canonical(rows, out)) return -1;
    return index(out);
}

}  // namespace hsiegel
