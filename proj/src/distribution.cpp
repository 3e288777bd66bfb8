#include "lovabs/distribution.hpp"

#include <cmath>

namespace lovabs {

LabelDistribution::LabelDistribution(int k, std::vector<double> probs)
    : k_(k), probs_(std::move(probs)) {
  if (k < 1 || k > kMaxK) throw DomainError("distribution k out of range");
  if (probs_.size() != (std::size_t{1} << k)) {
    throw ValidationError("distribution needs 2^k entries");
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError("distribution entries must be finite and >= 0");
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw ValidationError("distribution does not sum to 1");
  }
}

LabelDistribution uniform(int k) {
  if (k < 1 || k > kMaxK) throw DomainError("distribution k out of range");
  const std::size_t n = std::size_t{1} << k;
  return LabelDistribution(k, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

LabelDistribution point_mass(const Label& y) {
  if (y.k < 1 || y.k > kMaxK) throw DomainError("distribution k out of range");
  std::vector<double> probs(std::size_t{1} << y.k, 0.0);
  probs[y.bits] = 1.0;
  return LabelDistribution(y.k, std::move(probs));
}

LabelDistribution mix(const LabelDistribution& p, const LabelDistribution& q, double lambda) {
  require_same_k(p.k(), q.k(), "mix");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("mix weight must lie in [0, 1]");
  std::vector<double> out(p.probs().size());
  for (std::size_t y = 0; y < out.size(); ++y) {
    out[y] = (1.0 - lambda) * p.probs()[y] + lambda * q.probs()[y];
  }
  return LabelDistribution(p.k(), std::move(out));
}

LabelDistribution flip(const LabelDistribution& p, const Label& r) {
  require_same_k(p.k(), r.k, "flip");
  const Mask full = full_mask(p.k());
  std::vector<double> out(p.probs().size());
  for (Mask y = 0; y <= full; ++y) {
    out[y] = p[full & ~(y ^ r.bits)];
  }
  return LabelDistribution(p.k(), std::move(out));
}

double marginal_positive(const LabelDistribution& p, int i) {
  double total = 0.0;
  for (Mask y = 0; y < p.probs().size(); ++y) {
    if (has(y, i)) total += p[y];
  }
  return total;
}

}  // namespace lovabs
