#pragma once

// Links from surrogate points to reports: sign*, the per-coordinate threshold
// link, the common envelope (closed form and face-intersection oracle), the
// threshold-abstain link and the single-abstain trim.

#include <optional>
#include <span>
#include <vector>

#include "lovabs/common.hpp"

namespace lovabs {

struct LinkConfig {
  double epsilon = 0.0;
  double tau = 0.5;

  /// Validates 0 < epsilon <= 1/(2k) and tau in [0, 1]; epsilon defaults to
  /// 1/(2k). Throws ConfigError.
  static LinkConfig make(int k, double tau, std::optional<double> epsilon = std::nullopt);
};

/// Coordinatewise sign with 0 mapped to +1.
Label sign_star(std::span<const double> u);

/// |u_i| < c abstains, otherwise sign(u_i). Requires c > 0.
AbstainReport naive_threshold_link(std::span<const double> u, double c);

/// 1_{pi,i} (.) y: the first i coordinates of `order` carry the signs of y.
AbstainReport chain_vertex(std::span<const int> order, const Label& y, int i);

/// One cut of the sorted clipped magnitudes a_{pi_0} = 1+eps >= a_{pi_1} >=
/// ... >= a_{pi_k} >= a_{pi_{k+1}} = -eps.
struct Cut {
  int index = 0;       ///< i in [0, k]
  double gap = 0.0;    ///< a_{pi_i} - a_{pi_{i+1}}
  double midpoint = 0.0;
  bool admissible = false;  ///< gap >= 2 eps
};

struct CutProfile {
  std::vector<double> clipped;
  std::vector<int> order;  ///< pi, sorting |clip(u)| descending
  std::vector<Cut> cuts;   ///< k + 1 entries
};

CutProfile cut_profile(std::span<const double> u, double epsilon);

struct EnvelopeMember {
  AbstainReport report;
  std::vector<int> order;  ///< witness pi
  Label sign;              ///< witness y = sign*(u)
  int index = 0;           ///< witness i
};

/// Closed form: {1_{pi,i} (.) sign*(u) : cut i admissible}. Any epsilon > 0 is
/// accepted so the emptiness boundary can be probed; members are ordered by
/// increasing i.
std::vector<EnvelopeMember> envelope(std::span<const double> u, double epsilon);

/// Exact infinity-norm distance from x to conv{1_{pi,i} (.) y : bit i of
/// `indices` set}, for x in [-1,1]^k. `indices` is a nonempty subset of
/// {0..k}.
double face_distance(std::span<const double> x, std::span<const int> order, const Label& y,
                     std::uint32_t indices);

/// Intersection of every chain-face vertex set whose hull lies strictly
/// within epsilon of clip(u). Enumerates all faces; k <= 4 (CapacityError).
std::vector<AbstainReport> envelope_oracle(std::span<const double> u, double epsilon);

struct LinkDecision {
  AbstainReport report;
  CutProfile profile;
  int chosen = 0;  ///< i_tau
};

/// psi^tau: among admissible cuts pick the midpoint closest to tau (ties go
/// to the larger index, i.e. fewer abstentions) and report sign(clip(u)) on
/// the first i_tau sorted coordinates, 0 elsewhere.
LinkDecision threshold_abstain_decision(std::span<const double> u, const LinkConfig& cfg);
AbstainReport threshold_abstain_link(std::span<const double> u, const LinkConfig& cfg);

/// If v abstains on exactly one coordinate, replace it by sign*(u) there.
AbstainReport trim_single_abstain(const AbstainReport& v, std::span<const double> u);

}  // namespace lovabs
