#include "lovabs/targets.hpp"

#include <algorithm>
#include <limits>

namespace lovabs {

namespace {
constexpr int kMaxEnumerateK = 12;
}

Mask mis(const AbstainReport& v, const Label& y) {
  require_same_k(v.k, y.k, "mis");
  return (v.positives & ~y.bits) | (v.negatives() & y.bits) | v.zeros;
}

Mask mis(const Label& r, const Label& y) {
  require_same_k(r.k, y.k, "mis");
  return r.bits ^ y.bits;
}

double target_plain(const PolymatroidCollection& fc, const Label& r, const Label& y) {
  return fc.at(y).eval(mis(r, y));
}

double target_abstain(const PolymatroidCollection& fc, const AbstainReport& v, const Label& y) {
  const SetFunction& f = fc.at(y);
  const Mask m = mis(v, y);
  return f.eval(m & ~v.zeros) + f.eval(m);
}

double bep_loss(std::optional<int> r, int y, int n) {
  if (n < 1 || y < 1 || y > n) throw DomainError("bep_loss: true class out of range");
  if (!r) return 0.5;
  if (*r < 1 || *r > n) throw DomainError("bep_loss: predicted class out of range");
  return *r == y ? 0.0 : 1.0;
}

ReportFamily parse_report_family(std::string_view name) {
  if (name == "V") return ReportFamily::all;
  if (name == "V0") return ReportFamily::no_single_zero;
  if (name == "Y") return ReportFamily::labels;
  throw ConfigError("unknown report family '" + std::string(name) + "' (expected V, V0 or Y)");
}

std::vector<AbstainReport> enumerate_reports(int k, ReportFamily family) {
  if (k < 1) throw DomainError("enumerate_reports: k must be >= 1");
  if (k > kMaxEnumerateK) throw CapacityError("enumerate_reports: k > 12");
  const Mask full = full_mask(k);
  std::vector<AbstainReport> out;
  for (Mask z = 0; z <= full; ++z) {
    if (family == ReportFamily::labels && z != 0) break;
    if (family == ReportFamily::no_single_zero && popcount(z) == 1) continue;
    const Mask free = full & ~z;
    // Ascending enumeration of the submasks of `free`.
    Mask s = 0;
    while (true) {
      out.push_back(AbstainReport{k, s, z});
      if (s == free) break;
      s = (s - free) & free;
    }
  }
  return out;
}

std::vector<std::size_t> argmin_set(const std::vector<double>& values, double tol) {
  std::vector<std::size_t> idx;
  if (values.empty()) return idx;
  const double best = *std::min_element(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= best + tol) idx.push_back(i);
  }
  return idx;
}

ExpectedLosses expected_target(const ReportLoss& loss, const std::vector<AbstainReport>& reports,
                               const LabelDistribution& p) {
  ExpectedLosses out;
  out.values.assign(reports.size(), 0.0);
  const int k = p.k();
  for (Mask y = 0; y < p.probs().size(); ++y) {
    const double py = p[y];
    if (py == 0.0) continue;
    const Label lab{k, y};
    for (std::size_t r = 0; r < reports.size(); ++r) out.values[r] += py * loss(reports[r], lab);
  }
  out.argmin = argmin_set(out.values);
  out.best = out.values.empty() ? std::numeric_limits<double>::infinity()
                                : *std::min_element(out.values.begin(), out.values.end());
  return out;
}

}  // namespace lovabs
