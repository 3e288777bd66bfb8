#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lovabs/common.hpp"

namespace lovabs {

/// Probability vector over the 2^k labels, indexed by label bitmask.
class LabelDistribution {
 public:
  /// Throws ValidationError unless entries are >= 0 and sum to 1 within 1e-12.
  LabelDistribution(int k, std::vector<double> probs);

  int k() const { return k_; }
  std::span<const double> probs() const { return probs_; }
  double operator[](Mask y) const { return probs_[y]; }

  friend bool operator==(const LabelDistribution&, const LabelDistribution&) = default;

 private:
  int k_;
  std::vector<double> probs_;
};

LabelDistribution uniform(int k);
LabelDistribution point_mass(const Label& y);
/// (1 - lambda) p + lambda q.
LabelDistribution mix(const LabelDistribution& p, const LabelDistribution& q, double lambda);
/// (p (.) r)_y = p_{y (.) r}.
LabelDistribution flip(const LabelDistribution& p, const Label& r);

/// Probability that coordinate i is +1.
double marginal_positive(const LabelDistribution& p, int i);

}  // namespace lovabs
