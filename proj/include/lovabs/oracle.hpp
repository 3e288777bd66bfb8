#pragma once

// Brute-force verification over small ground sets: distribution grids,
// embedding / representativeness / tightness checks and the constructive
// inconsistency counterexamples.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lovabs/common.hpp"
#include "lovabs/distribution.hpp"
#include "lovabs/setfn.hpp"
#include "lovabs/targets.hpp"

namespace lovabs {

/// All compositions of m into 2^k parts, divided by m. The first entry runs
/// from m down to 0, recursively. k <= 4 (CapacityError).
std::vector<LabelDistribution> grid_distributions(int k, int m);

/// Default grid resolution: 8 for k <= 3, 4 for k = 4.
int default_grid(int k);

struct Witness {
  std::vector<double> distribution;
  std::vector<std::string> reports;
  std::vector<double> values;
  std::string detail;
};

struct VerificationReport {
  std::string check;
  bool pass = true;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::optional<Witness> witness;  ///< first failure in enumeration order
  std::vector<std::string> notes;

  void record_failure(Witness w);
};

/// Loss of every report against every label, precomputed once.
class LossMatrix {
 public:
  LossMatrix(std::vector<AbstainReport> reports, int k, const ReportLoss& loss);

  const std::vector<AbstainReport>& reports() const { return reports_; }
  double at(std::size_t report, Mask label) const { return values_[report * labels_ + label]; }
  ExpectedLosses expected(const LabelDistribution& p) const;

 private:
  std::vector<AbstainReport> reports_;
  std::size_t labels_;
  std::vector<double> values_;
};

LossMatrix hinge_matrix(const PolymatroidCollection& fc, ReportFamily family = ReportFamily::all);
LossMatrix abstain_matrix(const PolymatroidCollection& fc, ReportFamily family = ReportFamily::all);

/// Reports in the expected-abstain-loss argmin over {-1,0,1}^k at p.
std::vector<AbstainReport> abstain_argmin(const PolymatroidCollection& fc, const LabelDistribution& p);

/// (i) hinge == abstain loss on every (v, y) for k <= 4; (ii) for k <= 3 the
/// hinge and abstain argmins over reports coincide at every grid point and
/// no lattice point of step 0.25 beats the best report by more than 1e-9.
VerificationReport verify_embedding(const PolymatroidCollection& fc, int grid_m);

/// The report set meets the hinge argmin over {-1,0,1}^k at every grid point.
/// k <= 3.
VerificationReport verify_representative(const PolymatroidCollection& fc,
                                         const std::vector<AbstainReport>& reports,
                                         const std::string& family_name, int grid_m);

/// Requires f strictly submodular and strictly increasing (ValidationError
/// otherwise); k <= 4. Every report without exactly one zero is the unique
/// minimizer at its witness distribution, and every one-zero report is
/// weakly dominated by a sign completion at every grid point.
VerificationReport verify_tightness(const SetFunction& f, int grid_m);

/// Uniform over the completions of v: 2^-|abs(v)| on labels agreeing with v
/// off its abstain set.
LabelDistribution tightness_witness(const AbstainReport& v);

struct SymmetricCounterexample {
  bool consistent_case = false;  ///< f modular: no counterexample exists
  std::vector<int> kept_elements;  ///< 0-based coordinates with f({i}) > 0
  double epsilon = 0.0;
  double mean = 0.0;          ///< mean_value on the kept ground set
  double full_value = 0.0;    ///< f([k]) on the kept ground set
  Label y, y_prime;
  AbstainReport v;
  std::vector<double> p_y, p_y_prime;
  VerificationReport report;
};

/// Builds p^y = (1-eps) uniform + eps delta_y with y = +1 and eps =
/// (1 - f([k]) / (2 mean)) / 2 after discarding zero-singleton coordinates,
/// an abstaining v optimal at p^y, and the flipped p^{y'}.
SymmetricCounterexample counterexample_symmetric(const SetFunction& f);

struct AsymmetricCounterexample {
  double epsilon = 0.0;
  std::optional<double> epsilon_prime;  ///< set when the all-labels case needed a second tilt
  int scenario = 0;                     ///< 1: sign*(0) suboptimal or some label suboptimal; 2: tilted
  std::vector<double> distribution;
  Label sign_of_zero;
  std::optional<Label> violating_label;  ///< label whose shrinking multiples approach the optimum
  std::vector<std::string> label_argmin;
  VerificationReport report;
};

/// Requires the complementary-label condition (ValidationError) and 3 <= k <= 4.
AsymmetricCounterexample counterexample_asymmetric(const PolymatroidCollection& fc);

// ---------------------------------------------------------------------------
// Link-level checks

struct CalibrationSweepOptions {
  int grid_m = 8;
  int perturbations = 20;
  std::vector<double> taus{0.0, 0.5, 1.0};
  double shrink = 0.99;  ///< perturbations are drawn from (-shrink eps, shrink eps)^k
  std::optional<double> epsilon;  ///< defaults to 1/(2k)
  bool trim = false;
  std::uint64_t seed = 1;
};

/// For each grid p, each report minimizing the expected hinge and each
/// perturbation of it, the threshold-abstain link (optionally trimmed) lands in
/// the abstain-loss argmin at p. k <= 3.
VerificationReport verify_link_calibration(const PolymatroidCollection& fc,
                                           const CalibrationSweepOptions& opt);

/// Thickened envelope of the hinge for one collection, with the optimal sets
/// taken from the grid distributions only. Points must lie in [-1,1]^k.
class ThickenedEnvelope {
 public:
  ThickenedEnvelope(const PolymatroidCollection& fc, int grid_m, double epsilon);

  std::vector<AbstainReport> at(std::span<const double> u) const;
  std::size_t optimal_sets() const { return sets_.size(); }

 private:
  int k_;
  double epsilon_;
  std::vector<AbstainReport> reports_;
  std::vector<std::vector<std::size_t>> sets_;  ///< distinct argmin index sets
};

/// Closed-form envelope contained in the thickened envelope on `samples`
/// uniform points of [-1,1]^k. k <= 2 keeps the face enumeration small.
VerificationReport verify_envelope_containment(const PolymatroidCollection& fc, int grid_m,
                                               double epsilon, int samples, std::uint64_t seed);

struct ThresholdLinkViolation {
  bool found = false;
  std::vector<double> distribution;
  std::vector<double> point;
  AbstainReport linked;
  std::vector<AbstainReport> optimal;
  double distance = 0.0;  ///< infinity-norm distance from point to the optimal face
};

/// Searches grid distributions for a point within `delta` of an optimal face
/// that the per-coordinate threshold link sends outside the argmin.
ThresholdLinkViolation find_threshold_link_violation(const PolymatroidCollection& fc, double c,
                                                     int grid_m, double delta);

}  // namespace lovabs
