#include "gbcost/field.hpp"

#include "gbcost/errors.hpp"

namespace gbcost {

Fp Fp::inverse() const {
  if (v_ == 0) throw InvalidArgument("inverse of zero in GF(32003)");
  std::int64_t r0 = kModulus, r1 = v_;
  std::int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::int64_t tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  return Fp(t0);
}

}  // namespace gbcost
