#include "lovabs/common.hpp"

namespace lovabs {

Label Label::times(const Label& r) const {
  require_same_k(k, r.k, "label product");
  return {k, full_mask(k) & ~(bits ^ r.bits)};
}

Label AbstainReport::as_label() const {
  if (zeros != 0) throw DomainError("report abstains; not a label");
  return {k, positives};
}

AbstainReport AbstainReport::times(const Label& y) const {
  require_same_k(k, y.k, "report product");
  const Mask nonzero = full_mask(k) & ~zeros;
  // A nonzero coordinate is positive after the product iff signs agree.
  const Mask pos = nonzero & ~(positives ^ y.bits);
  return {k, pos, zeros};
}

void require_same_k(int a, int b, const char* what) {
  if (a != b) {
    throw DomainError(std::string(what) + ": dimension mismatch (" +
                      std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace lovabs
