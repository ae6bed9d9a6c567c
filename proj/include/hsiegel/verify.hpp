#pragma once

#include "hsiegel/pipeline.hpp"

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace hsiegel {

/** A tabulated eigenvalue x + y w_D (y = 0 for rational rows). */
struct RefValue {
    long x = 0, y = 0;
};

struct RefLevel {
    std::string generator;  // "1" for level one
    long dim_m = 0, dim_s = 0;
    std::vector<std::pair<long, std::vector<RefValue>>> rows;  // (D, eight values); D = 1 if rational
};

/** Reference data over Q(sqrt 2) with operators T1, T2 at 2+w, 3+w, 3-w, 3. */
const std::vector<RefLevel>& reference_levels();

/** Does a computed system agree with a row, up to Galois conjugation? */
bool matches_row(const Eigensystem& e, long D, const std::vector<RefValue>& row);

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

/**
 * The regression suite over Q(sqrt 2): class set, level-one matrices,
 * degree identity, dimensions, eigensystems, commutativity, the
 * Saito-Kurokawa check and flag counts.
 */
std::vector<CheckResult> run_reference_suite(const Cache& cache, const std::function<void(const CheckResult&)>& report);

/** The default order, algebra and auxiliary prime over Q(sqrt 2). */
World default_world(const Cache& cache);

}  // namespace hsiegel
