#pragma once

#include "hsiegel/cache.hpp"
#include "hsiegel/flags.hpp"
#include "hsiegel/hecke.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hsiegel {

/**
 * Parses sums of terms like "3", "-2w", "5+2*w", "1/2 w" over Q(sqrt d),
 * w the standard integral generator.  Throws std::invalid_argument.
 */
FieldElement parse_field_expr(long d, const std::string& s);
/** Prime ideal generated by an expression; "1" gives nothing. */
std::optional<PrimeIdeal> parse_level(long d, const std::string& s);

struct LevelResult {
    std::optional<PrimeIdeal> level;
    FlagVariant variant = FlagVariant::Siegel;
    long dim_m = 0, dim_s = 0;
    std::vector<HeckeOperator> ops;  // T1, T2 for each prime in order
    std::vector<ZMat> brandt;
    std::vector<Rational> functional;
    std::vector<Eigensystem> systems;
};

struct World {
    QuatOrder order;
    OrderArith R;
    FieldElement aux;
    ClassSet cs;
    Cache cache;
    World(const QuatOrder& O, const FieldElement& aux_prime, const Cache& c);
};

/** Brandt matrices for every prime of norm <= max_norm and the cusp decomposition. */
LevelResult compute_level(const World& w, const std::optional<PrimeIdeal>& level, FlagVariant v, long max_norm,
                          bool decompose = true);

}  // namespace hsiegel
