#pragma once

// Discrete target losses over labels and abstain reports, report enumeration
// and expected-loss argmins.

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "lovabs/common.hpp"
#include "lovabs/distribution.hpp"
#include "lovabs/setfn.hpp"

namespace lovabs {

/// Coordinates where the prediction disagrees with y; abstentions always do.
Mask mis(const AbstainReport& v, const Label& y);
Mask mis(const Label& r, const Label& y);

inline Mask abs_set(const AbstainReport& v) { return v.zeros; }

/// f_y(mis(r, y)).
double target_plain(const PolymatroidCollection& fc, const Label& r, const Label& y);

/// f_y(mis \ abs) + f_y(mis).
double target_abstain(const PolymatroidCollection& fc, const AbstainReport& v, const Label& y);

/// 0 if r == y, 1/2 if r is the abstain symbol (nullopt), 1 otherwise.
/// Classes are 1-based in [1, n].
double bep_loss(std::optional<int> r, int y, int n);

enum class ReportFamily { all, no_single_zero, labels };

ReportFamily parse_report_family(std::string_view name);

/// All reports of the family, ordered by (zeros, positives) bitmasks.
/// `all` is {-1,0,1}^k, `no_single_zero` drops reports with exactly one zero,
/// `labels` is {-1,1}^k. Throws CapacityError for k > 12.
std::vector<AbstainReport> enumerate_reports(int k, ReportFamily family);

using ReportLoss = std::function<double(const AbstainReport&, const Label&)>;

struct ExpectedLosses {
  std::vector<double> values;   ///< one per report, same order
  std::vector<std::size_t> argmin;  ///< indices within kTieTolerance of the minimum
  double best = 0.0;
};

ExpectedLosses expected_target(const ReportLoss& loss, const std::vector<AbstainReport>& reports,
                               const LabelDistribution& p);

/// Index set of values within `tol` of their minimum.
std::vector<std::size_t> argmin_set(const std::vector<double>& values, double tol = kTieTolerance);

}  // namespace lovabs
