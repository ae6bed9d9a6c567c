#include "hsiegel/verify.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>

namespace hsiegel {

namespace {

std::vector<RefValue> ints(std::initializer_list<long> xs) {
    std::vector<RefValue> v;
    for (long x : xs) v.push_back({x, 0});
    return v;
}

std::vector<RefValue> pairs(std::initializer_list<std::pair<long, long>> xs) {
    std::vector<RefValue> v;
    for (auto [x, y] : xs) v.push_back({x, y});
    return v;
}

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

ZMat Z2(long a, long b, long c, long d) { return {{Integer(a), Integer(b)}, {Integer(c), Integer(d)}}; }

}  // namespace

const std::vector<RefLevel>& reference_levels() {
    static const std::vector<RefLevel> levels = {
        {"1", 2, 1, {{1, ints({4, -3, 48, -16, 48, -16, 116, 340})}}},
        {"3+w", 6, 5, {{1, ints({10, 15, -7, 0, 60, 80, 80, -20})}, {1, ints({-4, 1, 7, 0, 32, 80, -60, 148})}}},
        {"3", 12, 11, {{1, ints({-6, 7, -22, 64, -22, 64, -9, 0})}, {1, ints({4, 5, -16, 16, -16, 16, 9, 0})}}},
        {"5+2w", 23, 22,
         {{1, ints({-2, 3, 6, 32, -36, 80, 8, 28})},
          {40, pairs({{4, -1}, {-3, -3}, {38, -4}, {-96, -32}, {58, 6}, {64, 48}, {66, 4}, {-160, 40}})}}},
        {"5+w", 32, 31,
         {{1, ints({-8, 10, -46, 119, -54, 145, -54, 153})}, {1, ints({10, 15, 72, 176, 56, 48, 124, 420})}}},
        {"5", 48, 47,
         {{1, ints({2, -9, 62, 96, 62, 96, 40, -420})},
          {12, pairs({{-4, -2}, {5, 2}, {-15, 7}, {56, -8}, {-15, 7}, {56, -8}, {44, -18}, {132, -52}})},
          {24, pairs({{8, 0}, {9, 0}, {44, -10}, {-48, -80}, {44, 10}, {-48, 80}, {76, 0}, {-60, 0}})}}},
        {"7+3w", 65, 64,
         {{1, ints({-4, 4, -60, 174, -20, -2, -60, 130})},
          {1, ints({-4, 5, 20, 16, -8, 48, 8, 28})},
          {204, pairs({{-6, 0}, {7, 0}, {44, -2}, {112, -8}, {0, -4}, {48, 0}, {-32, -2}, {108, 4}})},
          {204, pairs({{2, 0}, {-9, 0}, {72, -2}, {176, -16}, {56, -4}, {48, -32}, {76, -2}, {-60, -20}})}}},
    };
    return levels;
}

bool matches_row(const Eigensystem& e, long D, const std::vector<RefValue>& row) {
    if (e.values.size() != row.size()) return false;
    if (D == 1) {
        if (!e.rational()) return false;
        for (size_t k = 0; k < row.size(); ++k)
            if (e.values[k][0] != row[k].x || e.values[k][1] != 0) return false;
        return true;
    }
    if (!e.quadratic() || e.disc != D) return false;
    bool odd = D % 2 != 0;
    for (int conj = 0; conj < 2; ++conj) {
        bool ok = true;
        for (size_t k = 0; k < row.size() && ok; ++k) {
            Integer x = e.values[k][0], y = e.values[k][1];
            if (conj) {
                // x + y w  ->  x + y w' with w' = -w (even D) or 1 - w (odd D)
                if (odd) x += y;
                y = -y;
            }
            ok = x == row[k].x && y == row[k].y;
        }
        if (ok) return true;
    }
    return false;
}

World default_world(const Cache& cache) { return World(sqrt2_maximal_order(), FieldElement(2, 0, 1), cache); }

namespace {

struct BruteCounts {
    long lines = 0;  // nonzero vectors with leading coordinate 1
    long pairs = 0;  // ordered independent pairs (x, y) with <x, y> = 0
};

BruteCounts brute_counts(const ResidueField& F) {
    BruteCounts b;
    long q = F.size(), n = q * q * q * q;
    std::vector<FVec> vs;
    for (long k = 1; k < n; ++k) {
        FVec x;
        long m = k;
        for (int c = 0; c < 4; ++c) {
            x[c] = static_cast<int>(m % q);
            m /= q;
        }
        vs.push_back(x);
        int lead = 0;
        while (x[lead] == 0) ++lead;
        if (x[lead] == F.from_int(1)) ++b.lines;
    }
    for (auto& x : vs)
        for (auto& y : vs) {
            if (symplectic_pairing(F, x, y) != 0) continue;
            // independent unless y is a multiple of x
            bool dep = false;
            int piv = 0;
            while (x[piv] == 0) ++piv;
            int t = F.mul(y[piv], F.inv(x[piv]));
            dep = true;
            for (int c = 0; c < 4; ++c)
                if (y[c] != F.mul(t, x[c])) dep = false;
            if (!dep) ++b.pairs;
        }
    return b;
}

}  // namespace

std::vector<CheckResult> run_reference_suite(const Cache& cache, const std::function<void(const CheckResult&)>& report) {
    std::vector<CheckResult> out;
    auto emit = [&](CheckResult r) {
        out.push_back(r);
        if (report) report(r);
    };
    auto t0 = Clock::now();
    World w = default_world(cache);
    {
        CheckResult r{1, "class set: 2 classes, stabilizers {4608, 3840}, mass 11/23040", false, "", 0};
        std::vector<long> orders = w.cs.stab_orders;
        std::sort(orders.begin(), orders.end());
        Rational sum = 0;
        for (long o : w.cs.stab_orders) sum += make_rational(1, o);
        r.pass = w.cs.reps.size() == 2 && orders == std::vector<long>{3840, 4608} && w.cs.mass == make_rational(11, 23040) &&
                 sum == w.cs.mass && mass(2) == w.cs.mass;
        std::ostringstream os;
        os << w.cs.reps.size() << " classes, orders";
        for (long o : w.cs.stab_orders) os << " " << o;
        os << ", mass " << to_string(w.cs.mass);
        r.detail = os.str();
        r.seconds = since(t0);
        emit(r);
    }

    // every level; the first computation also fills the neighbour cache
    t0 = Clock::now();
    std::vector<LevelResult> levels;
    for (auto& ref : reference_levels()) levels.push_back(compute_level(w, parse_level(2, ref.generator), FlagVariant::Siegel, 9));
    double level_time = since(t0);

    {
        CheckResult r{2, "level one Brandt matrices at the primes of norm 2, 7, 7, 9", false, "", level_time};
        std::vector<ZMat> want = {Z2(9, 6, 5, 10),     Z2(12, 18, 15, 15),     Z2(208, 192, 160, 240),
                                  Z2(1264, 1536, 1280, 1520), Z2(208, 192, 160, 240), Z2(1264, 1536, 1280, 1520),
                                  Z2(436, 384, 320, 500), Z2(3540, 3840, 3200, 4180)};
        const auto& B = levels[0].brandt;
        auto swap = [](const ZMat& M) { return ZMat{{M[1][1], M[1][0]}, {M[0][1], M[0][0]}}; };
        bool same = B.size() == want.size(), swapped = same;
        for (size_t k = 0; k < want.size() && same; ++k) same = B[k] == want[k];
        for (size_t k = 0; k < want.size() && swapped; ++k) swapped = swap(B[k]) == want[k];
        r.pass = same || swapped;
        r.detail = same ? "identity class order" : swapped ? "swapped class order" : "mismatch";
        emit(r);
    }
    {
        CheckResult r{3, "degree identity: row sums equal N^(i-1)(N+1)(N^2+1) away from the level", true, "", 0};
        long checked = 0;
        for (auto& L : levels)
            for (size_t k = 0; k < L.ops.size(); ++k) {
                if (L.level && L.level->ideal == L.ops[k].P.ideal) continue;
                for (auto& row : L.brandt[k]) {
                    Integer s = 0;
                    for (auto& x : row) s += x;
                    if (s != L.ops[k].degree()) r.pass = false;
                    ++checked;
                }
            }
        r.detail = std::to_string(checked) + " rows";
        emit(r);
    }
    {
        CheckResult r{4, "dimensions of M and S at the seven levels", true, "", level_time};
        std::ostringstream os;
        for (size_t k = 0; k < levels.size(); ++k) {
            const auto& ref = reference_levels()[k];
            if (levels[k].dim_m != ref.dim_m || levels[k].dim_s != ref.dim_s) r.pass = false;
            os << (k ? " " : "") << levels[k].dim_m << "/" << levels[k].dim_s;
        }
        r.detail = os.str();
        emit(r);
    }
    {
        CheckResult r{5, "rational and quadratic eigensystems at the seven levels", true, "", 0};
        long found = 0, total = 0;
        std::string missing;
        for (size_t k = 0; k < levels.size(); ++k) {
            const auto& ref = reference_levels()[k];
            for (size_t j = 0; j < ref.rows.size(); ++j) {
                ++total;
                bool hit = false;
                for (auto& e : levels[k].systems)
                    if (matches_row(e, ref.rows[j].first, ref.rows[j].second)) hit = true;
                if (hit)
                    ++found;
                else
                    missing += " (" + ref.generator + ") f" + std::to_string(j + 1);
            }
        }
        r.pass = found == total;
        r.detail = std::to_string(found) + "/" + std::to_string(total) + " rows found" + (missing.empty() ? "" : "; missing" + missing);
        emit(r);
    }
    {
        CheckResult r{6, "Brandt matrices commute; constants are eigenvectors", true, "", 0};
        long pairs_checked = 0;
        for (auto& L : levels) {
            for (size_t x = 0; x < L.brandt.size(); ++x)
                for (size_t y = x + 1; y < L.brandt.size(); ++y) {
                    if (mul(L.brandt[x], L.brandt[y]) != mul(L.brandt[y], L.brandt[x])) r.pass = false;
                    ++pairs_checked;
                }
            for (size_t k = 0; k < L.ops.size(); ++k) {
                bool lev = L.level && L.level->ideal == L.ops[k].P.ideal;
                long q = L.ops[k].norm();
                long want = lev ? (L.ops[k].i == 1 ? q * q * q : 0) : L.ops[k].degree();
                for (auto& row : L.brandt[k]) {
                    Integer s = 0;
                    for (auto& v : row) s += v;
                    if (s != want) r.pass = false;
                }
            }
        }
        r.detail = std::to_string(pairs_checked) + " pairs";
        emit(r);
    }
    {
        CheckResult r{7, "level one cusp form is a Saito-Kurokawa lift with a = -2, -8, -8, 26", false, "", 0};
        const auto& L = levels[0];
        if (L.systems.size() == 1 && L.systems[0].rational()) {
            const auto& e = L.systems[0];
            std::vector<std::pair<Integer, Integer>> lam;
            std::vector<long> norms;
            for (size_t k = 0; k + 1 < L.ops.size(); k += 2) {
                lam.push_back({e.values[k][0], e.values[k + 1][0]});
                norms.push_back(L.ops[k].norm());
            }
            auto a = sk_detect(lam, norms, 4);
            if (a) {
                r.pass = *a == std::vector<Integer>{-2, -8, -8, 26};
                std::ostringstream os;
                os << "a =";
                for (auto& x : *a) os << " " << to_string(x);
                r.detail = os.str();
            } else {
                r.detail = "relations fail";
            }
        } else {
            r.detail = "level one cusp space is not a single rational line";
        }
        emit(r);
    }
    {
        t0 = Clock::now();
        CheckResult r{8, "flag counts: closed formulas up to norm 27, brute force up to norm 9", true, "", 0};
        long spaces = 0;
        for (auto& P : primes_up_to(2, 27)) {
            ResidueField F(P);
            long q = F.size();
            for (auto v : {FlagVariant::Siegel, FlagVariant::Klingen, FlagVariant::Borel}) {
                FlagSpace S(F, v);
                if (static_cast<long>(S.size()) != flag_count_formula(q, v)) r.pass = false;
                ++spaces;
            }
            if (q <= 9) {
                auto [lines, pairs] = brute_counts(F);
                long gl2 = (q * q - 1) * (q * q - q);
                if (pairs % gl2 || pairs / gl2 != flag_count_formula(q, FlagVariant::Siegel)) r.pass = false;
                if (lines != flag_count_formula(q, FlagVariant::Klingen)) r.pass = false;
                if (pairs % ((q - 1) * (q * q - q)) ||
                    pairs / ((q - 1) * (q * q - q)) != flag_count_formula(q, FlagVariant::Borel))
                    r.pass = false;
            }
        }
        r.detail = std::to_string(spaces) + " flag spaces";
        r.seconds = since(t0);
        emit(r);
    }
    return out;
}

}  // namespace hsiegel
