#pragma once

#include "hsiegel/hecke.hpp"
#include "hsiegel/hermlat.hpp"

#include <functional>
#include <string>
#include <vector>

namespace hsiegel {

/**
 * Directory of versioned JSON files keyed by a hash of the inputs.  Writes
 * go to a temporary file that is renamed into place.  An empty directory
 * disables the cache.
 */
class Cache {
  public:
    static constexpr int kSchema = 1;
    explicit Cache(std::string dir = "");
    bool enabled() const { return !dir_.empty(); }
    const std::string& dir() const { return dir_; }

    ClassSet classes(const OrderArith& R, const FieldElement& q, const std::function<ClassSet()>& compute) const;
    std::vector<Neighbor> neighbors(const OrderArith& R, const ClassSet& cs, const HeckeOperator& T) const;

  private:
    std::string dir_;
};

/** Stable 64-bit FNV-1a hash as 16 hex digits. */
std::string fnv_hex(const std::string& s);
/** Fingerprint of the order and the class representatives. */
std::string order_key(const OrderArith& R);
std::string class_key(const OrderArith& R, const ClassSet& cs);

}  // namespace hsiegel
