#include "hsiegel/pipeline.hpp"

#include <cctype>
#include <stdexcept>

namespace hsiegel {

FieldElement parse_field_expr(long d, const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty field expression");
    Rational x = 0, y = 0;
    size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            throw std::invalid_argument("expected '+' or '-' in '" + text + "'");
        }
        size_t j = i;
        while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) ++j;
        Rational c = 1;
        bool has_num = j > i;
        if (has_num) {
            std::string num = s.substr(i, j - i);
            if (num.front() == '/' || num.back() == '/') throw std::invalid_argument("bad number in '" + text + "'");
            c = Rational(num);
            c.canonicalize();
            i = j;
        }
        if (i < s.size() && s[i] == '*') {
            if (!has_num) throw std::invalid_argument("dangling '*' in '" + text + "'");
            ++i;
            if (i >= s.size() || s[i] != 'w') throw std::invalid_argument("expected 'w' after '*' in '" + text + "'");
        }
        if (i < s.size() && s[i] == 'w') {
            y += sign * c;
            ++i;
        } else {
            if (!has_num) throw std::invalid_argument("unexpected character in '" + text + "'");
            x += sign * c;
        }
    }
    return FieldElement::from_basis(d, x, y);
}

std::optional<PrimeIdeal> parse_level(long d, const std::string& s) {
    FieldElement g = parse_field_expr(d, s);
    if (!g.is_integral() || g.is_zero()) throw std::invalid_argument("level must be a nonzero integral element");
    Ideal I = Ideal::principal(g);
    if (I.norm() == 1) return std::nullopt;
    auto fs = factor_ideal(I);
    if (fs.size() != 1 || fs[0].second != 1) throw std::invalid_argument("level '" + s + "' is not a prime ideal");
    return fs[0].first;
}

World::World(const QuatOrder& O, const FieldElement& aux_prime, const Cache& c)
    : order(O), R(order), aux(aux_prime), cache(c) {
    cs = cache.classes(R, aux, [&] { return enumerate_classes(R, aux); });
}

LevelResult compute_level(const World& w, const std::optional<PrimeIdeal>& level, FlagVariant v, long max_norm,
                          bool decompose) {
    LevelResult out;
    out.level = level;
    out.variant = v;
    HeckeModule M(w.R, w.cs, level, v);
    std::vector<long> degrees;
    std::vector<std::string> labels;
    std::vector<size_t> split;
    for (auto& P : primes_up_to(w.R.d(), max_norm))
        for (int i = 1; i <= 2; ++i) {
            HeckeOperator T = hecke_operator(P, i);
            auto nb = w.cache.neighbors(w.R, w.cs, T);
            if (i == 1 && !M.at_level(T)) split.push_back(out.ops.size());
            out.brandt.push_back(M.brandt(T, nb, true));
            degrees.push_back(M.at_level(T) ? 0 : T.degree());
            labels.push_back(T.label());
            out.ops.push_back(T);
        }
    CuspSplit S = eisenstein_and_cusp(M, out.brandt, degrees);
    out.dim_m = S.dim_m;
    out.dim_s = S.dim_s;
    out.functional = S.functional;
    if (decompose) out.systems = eigensystems(S, labels, split);
    return out;
}

}  // namespace hsiegel
