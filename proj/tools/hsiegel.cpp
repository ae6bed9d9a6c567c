// hsiegel: classes, flags, Brandt matrices and eigensystems for GU_2(D).
// Exit codes: 0 success, 1 runtime failure, 2 configuration error, 3 verification mismatch.
#include "CLI11.hpp"
#include "hsiegel/verify.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

using namespace hsiegel;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Settings {
    long d = 2;
    std::string a = "-1", b = "-1";
    std::string order = "standard";
    std::string aux;
    std::string level = "1";
    std::string parahoric = "siegel";
    long max_norm = 9;
    std::string format = "table";
    std::string cache;
};

json jint(const Integer& x) { return to_string(x); }
json jint(long x) { return std::to_string(x); }
json jfield(const FieldElement& x) { return json::array({to_string(x.a()), to_string(x.b()), std::to_string(x.d())}); }
json jquat(const QuatElement& x) {
    json j = json::array();
    for (auto& c : x.c) j.push_back(jfield(c));
    return j;
}
json jmat(const ZMat& M) {
    json j = json::array();
    for (auto& row : M) {
        json r = json::array();
        for (auto& x : row) r.push_back(jint(x));
        j.push_back(r);
    }
    return j;
}

bool squarefree(long n) {
    for (long p = 2; p * p <= n; ++p)
        if (n % (p * p) == 0) return false;
    return true;
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

QuatElement parse_quat(long d, const std::string& text) {
    std::vector<FieldElement> c;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) c.push_back(parse_field_expr(d, part));
    if (c.size() != 4) throw ConfigError("quaternion '" + text + "' needs four comma separated coordinates");
    return QuatElement(c[0], c[1], c[2], c[3]);
}

// Q(sqrt d) must have narrow class number one.
void check_field(long d) {
    if (d < 2 || !squarefree(d)) throw ConfigError("d must be a squarefree integer > 1");
    if (fundamental_unit(d).norm() != -1) throw ConfigError("Q(sqrt " + std::to_string(d) + ") has no unit of norm -1");
    long disc = d % 4 == 1 ? d : 4 * d;
    long bound = static_cast<long>(std::sqrt(static_cast<double>(disc)) / 2);
    for (long p = 2; p <= bound; ++p) {
        if (!is_prime(p)) continue;
        for (auto& [P, e] : factor_rational_prime(p, d)) {
            try {
                P.ideal.generator();
            } catch (const MathError&) {
                throw ConfigError("a prime over " + std::to_string(p) + " is not principal");
            }
        }
    }
}

QuatOrder build_order(const Settings& s) {
    check_field(s.d);
    FieldElement a = parse_field_expr(s.d, s.a), b = parse_field_expr(s.d, s.b);
    if (a.is_zero() || b.is_zero()) throw ConfigError("a and b must be nonzero");
    QuatAlgebra A(s.d, a, b);
    int infinite = 0;
    for (auto& pl : ramified_primes(A)) {
        if (!pl.infinite) throw ConfigError("D ramifies at a finite prime");
        ++infinite;
    }
    if (infinite != 2) throw ConfigError("D is not totally definite");
    if (s.order == "standard") {
        if (s.d != 2 || a != FieldElement(2, -1) || b != FieldElement(2, -1))
            throw ConfigError("order = standard needs d = 2, a = b = -1; give generators otherwise");
        return sqrt2_maximal_order();
    }
    std::vector<QuatElement> gens;
    std::stringstream ss(s.order);
    std::string part;
    while (std::getline(ss, part, ';')) gens.push_back(parse_quat(s.d, part));
    QuatOrder O = QuatOrder::from_generators(A, gens);
    if (!verify_maximal_order(O)) throw ConfigError("the order is not maximal");
    return O;
}

FieldElement aux_prime(const Settings& s) {
    FieldElement q;
    if (!s.aux.empty())
        q = parse_field_expr(s.d, s.aux);
    else if (s.d == 2)
        q = FieldElement(2, 0, 1);
    else
        q = prime_label(primes_up_to(s.d, 64).at(0));
    if (!q.is_integral() || q.is_zero()) throw ConfigError("auxiliary prime must be a nonzero integral element");
    auto fs = factor_ideal(Ideal::principal(q));
    if (fs.size() != 1 || fs[0].second != 1) throw ConfigError("auxiliary element does not generate a prime");
    return q;
}

std::optional<PrimeIdeal> level_of(const Settings& s, const FieldElement& aux) {
    std::optional<PrimeIdeal> P = parse_level(s.d, s.level);
    if (!P) return P;
    if (P->p == 2) throw ConfigError("the level must be an odd prime");
    if (P->ideal == Ideal::principal(aux)) throw ConfigError("the level must be coprime to the auxiliary prime");
    return P;
}

std::string level_str(const std::optional<PrimeIdeal>& P) { return P ? basis_str(prime_label(*P)) : "1"; }

// The old systems at a prime level carry level-one values away from the level.
std::vector<bool> old_flags(const World& w, const LevelResult& r, long max_norm) {
    std::vector<bool> old(r.systems.size(), false);
    if (!r.level) return old;
    LevelResult one = compute_level(w, std::nullopt, r.variant, max_norm);
    for (size_t k = 0; k < r.systems.size(); ++k) {
        const auto& e = r.systems[k];
        if (e.values.empty()) continue;
        for (auto& f : one.systems) {
            if (f.values.size() != e.values.size()) continue;
            bool same = true;
            for (size_t t = 0; t < r.ops.size() && same; ++t)
                if (!(r.level->ideal == r.ops[t].P.ideal))
                    same = f.values[t] == e.values[t] && (f.disc == e.disc || e.values[t][1] == 0);
            if (same) old[k] = true;
        }
    }
    return old;
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_classes(const World& w, bool as_json) {
    json out;
    out["d"] = jint(w.R.d());
    out["mass"] = to_string(w.cs.mass);
    out["classes"] = json::array();
    for (size_t k = 0; k < w.cs.reps.size(); ++k) {
        const auto& g = w.cs.reps[k].gamma;
        json c;
        c["index"] = jint(static_cast<long>(k));
        c["gamma"] = {{"s", jfield(g.s)}, {"t", jfield(g.t)}, {"r", jquat(g.r)}};
        c["stabilizer_order"] = jint(w.cs.stab_orders[k]);
        out["classes"].push_back(c);
    }
    if (as_json) {
        print_json(out);
        return 0;
    }
    std::cout << "classes of the principal genus over Q(sqrt " << w.R.d() << "): " << w.cs.reps.size() << "\n";
    for (size_t k = 0; k < w.cs.reps.size(); ++k) {
        const auto& g = w.cs.reps[k].gamma;
        std::cout << "  " << k << ": s = " << basis_str(g.s) << ", t = " << basis_str(g.t) << ", r = " << g.r.str()
                  << ", |Aut| = " << w.cs.stab_orders[k] << "\n";
    }
    std::cout << "mass " << to_string(w.cs.mass) << "\n";
    return 0;
}

int cmd_mass(const World& w, bool as_json) {
    Rational sum = 0;
    for (long o : w.cs.stab_orders) sum += Rational(1) / Rational(o);
    Rational formula = mass(w.R.d());
    bool ok = sum == formula;
    if (as_json) {
        print_json({{"formula", to_string(formula)}, {"classes", to_string(sum)}, {"match", ok}});
    } else {
        std::cout << "mass formula  " << to_string(formula) << "\n";
        std::cout << "sum 1/|Aut|   " << to_string(sum) << "\n";
        std::cout << (ok ? "match" : "MISMATCH") << "\n";
    }
    return ok ? 0 : 3;
}

int cmd_flags(const World& w, const std::optional<PrimeIdeal>& P, FlagVariant v, bool as_json) {
    if (!P) throw ConfigError("flags needs a prime level");
    ResidueField F(*P);
    FlagSpace space(F, v);
    long q = F.size(), formula = flag_count_formula(q, v);
    HeckeModule M(w.R, w.cs, P, v);
    std::vector<long> per(w.cs.reps.size(), 0);
    for (size_t k = 0; k < M.dim(); ++k) ++per[M.class_of(k)];
    bool ok = static_cast<long>(space.size()) == formula;
    if (as_json) {
        json orbits = json::array();
        for (long n : per) orbits.push_back(jint(n));
        print_json({{"level", level_str(P)},
                    {"norm", jint(q)},
                    {"parahoric", variant_name(v)},
                    {"flags", jint(static_cast<long>(space.size()))},
                    {"formula", jint(formula)},
                    {"orbits", orbits},
                    {"dim_M", jint(static_cast<long>(M.dim()))}});
    } else {
        std::cout << variant_name(v) << " flags at " << level_str(P) << " (norm " << q << "): " << space.size()
                  << ", formula " << formula << "\n";
        for (size_t a = 0; a < per.size(); ++a) std::cout << "  class " << a << ": " << per[a] << " orbits\n";
        std::cout << "dim M = " << M.dim() << "\n";
    }
    return ok ? 0 : 3;
}

int cmd_brandt(const World& w, const std::optional<PrimeIdeal>& P, FlagVariant v, long max_norm, bool as_json) {
    LevelResult r = compute_level(w, P, v, max_norm, false);
    if (as_json) {
        json ops = json::object();
        for (size_t k = 0; k < r.ops.size(); ++k) ops[r.ops[k].label()] = jmat(r.brandt[k]);
        print_json({{"level", level_str(P)},
                    {"parahoric", variant_name(v)},
                    {"dim_M", jint(r.dim_m)},
                    {"dim_S", jint(r.dim_s)},
                    {"brandt", ops}});
        return 0;
    }
    std::cout << "level " << level_str(P) << " (" << variant_name(v) << "): dim M = " << r.dim_m
              << ", dim S = " << r.dim_s << "\n";
    for (size_t k = 0; k < r.ops.size(); ++k) {
        std::cout << r.ops[k].label() << "\n";
        size_t wd = 1;
        for (auto& row : r.brandt[k])
            for (auto& x : row) wd = std::max(wd, to_string(x).size());
        for (auto& row : r.brandt[k]) {
            std::cout << " ";
            for (auto& x : row) std::cout << " " << std::setw(static_cast<int>(wd)) << to_string(x);
            std::cout << "\n";
        }
    }
    return 0;
}

int cmd_eigensystems(const World& w, const std::optional<PrimeIdeal>& P, FlagVariant v, long max_norm, bool as_json) {
    LevelResult r = compute_level(w, P, v, max_norm);
    std::vector<bool> old = old_flags(w, r, max_norm);
    if (as_json) {
        json sys = json::array();
        for (size_t k = 0; k < r.systems.size(); ++k) {
            const auto& e = r.systems[k];
            json vals = json::object();
            for (size_t t = 0; t < e.labels.size(); ++t) {
                if (!e.values.empty())
                    vals[e.labels[t]] = json::array({jint(e.values[t][0]), jint(e.values[t][1])});
                else {
                    json c = json::array();
                    for (auto& x : e.charpolys[t]) c.push_back(jint(x));
                    vals[e.labels[t]] = c;
                }
            }
            json f = json::array();
            for (auto& x : e.field) f.push_back(jint(x));
            sys.push_back({{"dim", jint(e.dim)}, {"disc", jint(e.disc)}, {"field", f}, {"values", vals}, {"old", old[k]}});
        }
        print_json({{"level", level_str(P)},
                    {"parahoric", variant_name(v)},
                    {"dim_M", jint(r.dim_m)},
                    {"dim_S", jint(r.dim_s)},
                    {"systems", sys}});
        return 0;
    }
    std::cout << "level " << level_str(P) << " (" << variant_name(v) << "): dim M = " << r.dim_m
              << ", dim S = " << r.dim_s << "\n";
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> head = {"D", "dim"};
    for (auto& T : r.ops) head.push_back(T.label());
    rows.push_back(head);
    for (size_t k = 0; k < r.systems.size(); ++k) {
        const auto& e = r.systems[k];
        std::vector<std::string> row = {e.quadratic() ? std::to_string(e.disc) : e.rational() ? "1" : "-",
                                        std::to_string(e.dim)};
        for (size_t t = 0; t < e.labels.size(); ++t) row.push_back(e.value_str(t));
        if (old[k]) row.push_back("old");
        rows.push_back(row);
    }
    std::vector<size_t> wd;
    for (auto& row : rows)
        for (size_t c = 0; c < row.size(); ++c) {
            if (wd.size() <= c) wd.push_back(0);
            wd[c] = std::max(wd[c], row[c].size());
        }
    for (auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c)
            std::cout << (c ? "  " : "") << std::setw(static_cast<int>(wd[c])) << row[c];
        std::cout << "\n";
    }
    return 0;
}

int cmd_verify(const Settings& s, const Cache& cache, bool as_json) {
    if (s.d != 2 || s.order != "standard") throw ConfigError("verify-paper runs on the standard order over Q(sqrt 2)");
    json out = json::array();
    bool ok = true;
    run_reference_suite(cache, [&](const CheckResult& r) {
        ok = ok && r.pass;
        if (as_json) {
            out.push_back({{"id", jint(r.id)}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        } else {
            std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << ". " << r.name << " (" << r.detail << ")\n";
            std::cout.flush();
        }
    });
    if (as_json) print_json(out);
    return ok ? 0 : 3;
}

std::string default_cache() {
    if (const char* e = std::getenv("HSIEGEL_CACHE")) return e;
    if (const char* x = std::getenv("XDG_CACHE_HOME")) return std::string(x) + "/hsiegel";
    if (const char* h = std::getenv("HOME")) return std::string(h) + "/.cache/hsiegel";
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Algebraic modular forms on GU_2(D) over a real quadratic field"};
    app.require_subcommand(1);
    app.fallthrough();
    Settings s;
    app.set_config("--config", "", "flat key = value file; keys are long option names");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.add_option("--d", s.d, "Q(sqrt d)")->capture_default_str();
    app.add_option("--a", s.a, "D = (a, b / F)")->capture_default_str();
    app.add_option("--b", s.b, "D = (a, b / F)")->capture_default_str();
    app.add_option("--order", s.order, "'standard' or Z-generators 'w,x,y,z; ...'")->capture_default_str();
    app.add_option("--aux-prime", s.aux, "auxiliary prime for the lattice bases");
    app.add_option("--level", s.level, "generator of a prime level, 1 for none")->capture_default_str();
    app.add_option("--parahoric", s.parahoric, "siegel, klingen or borel")
        ->check(CLI::IsMember({"siegel", "klingen", "borel"}))
        ->capture_default_str();
    app.add_option("--max-norm", s.max_norm, "Hecke operators at primes of norm <= N")
        ->check(CLI::Range(2L, 1000L))
        ->capture_default_str();
    app.add_option("--format", s.format, "table or json")->check(CLI::IsMember({"table", "json"}))->capture_default_str();
    app.add_option("--cache", s.cache, "cache directory ('' disables; default $HSIEGEL_CACHE or ~/.cache/hsiegel)");

    auto* c_classes = app.add_subcommand("classes", "genus representatives and their automorphism groups");
    auto* c_mass = app.add_subcommand("mass", "mass formula against the class set");
    auto* c_flags = app.add_subcommand("flags", "flag counts and orbits at the level");
    auto* c_brandt = app.add_subcommand("brandt", "Brandt matrices");
    auto* c_eigen = app.add_subcommand("eigensystems", "Hecke eigensystems on the cusp forms");
    auto* c_verify = app.add_subcommand("verify-paper", "the reference checks over Q(sqrt 2)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (app.count("--cache") == 0) s.cache = default_cache();
    bool as_json = s.format == "json";
    try {
        Cache cache(s.cache);
        if (*c_verify) return cmd_verify(s, cache, as_json);
        QuatOrder O = build_order(s);
        FieldElement aux = aux_prime(s);
        std::optional<PrimeIdeal> P = level_of(s, aux);
        FlagVariant v = parse_variant(s.parahoric);
        World w(O, aux, cache);
        if (*c_classes) return cmd_classes(w, as_json);
        if (*c_mass) return cmd_mass(w, as_json);
        if (*c_flags) return cmd_flags(w, P, v, as_json);
        if (*c_brandt) return cmd_brandt(w, P, v, s.max_norm, as_json);
        if (*c_eigen) return cmd_eigensystems(w, P, v, s.max_norm, as_json);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
