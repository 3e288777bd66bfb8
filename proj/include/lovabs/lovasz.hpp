#pragma once

// Lovasz extension, Lovasz hinge, subgradients and the ordered simplex
// decomposition of the unit cube.

#include <span>
#include <vector>

#include "lovabs/common.hpp"
#include "lovabs/distribution.hpp"
#include "lovabs/setfn.hpp"

namespace lovabs {

/// Indices sorting x in descending order; ties go to the smaller index.
std::vector<int> descending_order(std::span<const double> x);

/// F(x) = sum_i x_{pi_i} (f(S_{pi,i}) - f(S_{pi,i-1})) with pi sorting x
/// descending. Requires x >= 0 (DomainError otherwise).
double lovasz_extension(const SetFunction& f, std::span<const double> x);

/// sign(u) * min(|u|, 1).
std::vector<double> clip(std::span<const double> u);

/// F_y((1 - u (.) y)_+).
double hinge(const PolymatroidCollection& fc, std::span<const double> u, const Label& y);

/// One element of the subdifferential of u -> hinge(fc, u, y). Coordinates
/// whose hinge is exactly at its kink (1 - u_i y_i == 0) get 0.
std::vector<double> hinge_subgradient(const PolymatroidCollection& fc,
                                      std::span<const double> u, const Label& y);

/// (max_j b_j u_j + 1)_+ for a code word b; the binary-encoded-prediction
/// surrogate of the class encoded by b.
double bep_surrogate(std::span<const double> u, const Label& code);

/// E_{Y~p} hinge(fc, u, Y); labels with zero mass are skipped.
double expected_hinge(const PolymatroidCollection& fc, std::span<const double> u,
                      const LabelDistribution& p);

/// x = sum_{i=0..k} alpha_i 1_{pi,i} for x in [0,1]^k.
struct OrderedDecomposition {
  std::vector<int> order;      ///< pi, 0-based
  std::vector<double> alphas;  ///< alpha_0 .. alpha_k
  std::vector<Mask> vertices;  ///< 1_{pi,0} .. 1_{pi,k} as bitmasks

  std::vector<double> reconstruct() const;
};

/// Throws DomainError if x leaves [0,1]^k.
OrderedDecomposition simplex_decompose(std::span<const double> x);

/// Reports and labels as real vectors (+1 / 0 / -1).
std::vector<double> to_vector(const AbstainReport& v);
std::vector<double> to_vector(const Label& y);

}  // namespace lovabs
