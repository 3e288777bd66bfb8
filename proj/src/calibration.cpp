#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lovabs/links.hpp"
#include "lovabs/lovasz.hpp"
#include "lovabs/oracle.hpp"
#include "lovabs/text.hpp"

namespace lovabs {

namespace {

std::vector<double> as_vector(const LabelDistribution& p) { return {p.probs().begin(), p.probs().end()}; }

/// Bit i set when chain vertex i of (order, y) is among the selected reports.
std::uint32_t chain_indices(const std::vector<AbstainReport>& all, const std::vector<std::size_t>& set,
                            std::span<const int> order, const Label& y) {
  std::uint32_t mask = 0;
  const int k = y.k;
  for (int i = 0; i <= k; ++i) {
    const AbstainReport v = chain_vertex(order, y, i);
    for (std::size_t s : set) {
      if (all[s] == v) {
        mask |= std::uint32_t{1} << i;
        break;
      }
    }
  }
  return mask;
}

template <typename Fn>
void for_each_chain(int k, Fn&& fn) {
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  do {
    for (Mask y = 0; y <= full_mask(k); ++y) fn(std::span<const int>(order), Label{k, y});
  } while (std::next_permutation(order.begin(), order.end()));
}

}  // namespace

VerificationReport verify_link_calibration(const PolymatroidCollection& fc, const CalibrationSweepOptions& opt) {
  const int k = fc.k();
  if (k > 3) throw CapacityError("calibration sweep is limited to k <= 3");
  VerificationReport rep;
  rep.check = opt.trim ? "calibration:trimmed" : "calibration";
  const LossMatrix h = hinge_matrix(fc);
  const LossMatrix a = abstain_matrix(fc);
  const auto& all = h.reports();
  std::mt19937_64 rng(opt.seed);
  const double eps = LinkConfig::make(k, 0.0, opt.epsilon).epsilon;
  std::uniform_real_distribution<double> jitter(-opt.shrink * eps, opt.shrink * eps);
  std::vector<LinkConfig> cfgs;
  for (double tau : opt.taus) cfgs.push_back(LinkConfig::make(k, tau, eps));

  for (const auto& p : grid_distributions(k, opt.grid_m)) {
    const ExpectedLosses eh = h.expected(p);
    const ExpectedLosses ea = a.expected(p);
    for (std::size_t m : eh.argmin) {
      const std::vector<double> base = to_vector(all[m]);
      for (int t = 0; t < opt.perturbations; ++t) {
        std::vector<double> u(base);
        for (double& x : u) x += jitter(rng);
        for (const LinkConfig& cfg : cfgs) {
          ++rep.cases;
          AbstainReport v = threshold_abstain_link(u, cfg);
          if (opt.trim) v = trim_single_abstain(v, u);
          const auto it = std::find(all.begin(), all.end(), v);
          const std::size_t idx = static_cast<std::size_t>(it - all.begin());
          if (std::find(ea.argmin.begin(), ea.argmin.end(), idx) == ea.argmin.end()) {
            rep.record_failure(Witness{as_vector(p), {format_report(all[m]), format_report(v)},
                                       {cfg.tau, ea.values[idx], ea.best},
                                       "link output at " + format_vector(u) + " is not optimal"});
          }
        }
      }
    }
  }
  return rep;
}

ThickenedEnvelope::ThickenedEnvelope(const PolymatroidCollection& fc, int grid_m, double epsilon)
    : k_(fc.k()), epsilon_(epsilon) {
  if (k_ > 3) throw CapacityError("thickened envelope is limited to k <= 3");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  const LossMatrix h = hinge_matrix(fc);
  reports_ = h.reports();
  for (const auto& p : grid_distributions(k_, grid_m)) {
    auto set = h.expected(p).argmin;
    if (std::find(sets_.begin(), sets_.end(), set) == sets_.end()) sets_.push_back(std::move(set));
  }
}

std::vector<AbstainReport> ThickenedEnvelope::at(std::span<const double> u) const {
  if (u.size() != static_cast<std::size_t>(k_)) throw DomainError("thickened envelope: dimension mismatch");
  for (double x : u) {
    if (!(x >= -1.0 && x <= 1.0)) throw DomainError("thickened envelope: point must lie in [-1,1]^k");
  }
  std::vector<int> alive(reports_.size(), 1);
  for (const auto& set : sets_) {
    double d = std::numeric_limits<double>::infinity();
    for_each_chain(k_, [&](std::span<const int> order, const Label& y) {
      const std::uint32_t idx = chain_indices(reports_, set, order, y);
      if (idx != 0) d = std::min(d, face_distance(u, order, y, idx));
    });
    if (!(d < epsilon_)) continue;
    for (std::size_t r = 0; r < reports_.size(); ++r) {
      if (std::find(set.begin(), set.end(), r) == set.end()) alive[r] = 0;
    }
  }
  std::vector<AbstainReport> out;
  for (std::size_t r = 0; r < reports_.size(); ++r) {
    if (alive[r]) out.push_back(reports_[r]);
  }
  return out;
}

VerificationReport verify_envelope_containment(const PolymatroidCollection& fc, int grid_m, double epsilon,
                                               int samples, std::uint64_t seed) {
  const int k = fc.k();
  if (k > 2) throw CapacityError("envelope containment is limited to k <= 2");
  VerificationReport rep;
  rep.check = "envelope-containment";
  const ThickenedEnvelope big(fc, grid_m, epsilon);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::vector<double> u(static_cast<std::size_t>(k));
  for (int s = 0; s < samples; ++s) {
    for (double& x : u) x = coord(rng);
    ++rep.cases;
    const auto outer = big.at(u);
    for (const auto& m : envelope(u, epsilon)) {
      if (std::find(outer.begin(), outer.end(), m.report) == outer.end()) {
        std::vector<std::string> outer_names;
        for (const auto& v : outer) outer_names.push_back(format_report(v));
        rep.record_failure(Witness{{}, outer_names, u, "member " + format_report(m.report) + " missing"});
        break;
      }
    }
  }
  rep.notes.push_back(std::to_string(big.optimal_sets()) + " distinct optimal sets on the grid");
  return rep;
}

ThresholdLinkViolation find_threshold_link_violation(const PolymatroidCollection& fc, double c, int grid_m,
                                                     double delta) {
  const int k = fc.k();
  if (k > 3) throw CapacityError("threshold-link search is limited to k <= 3");
  const LossMatrix a = abstain_matrix(fc);
  const auto& all = a.reports();
  ThresholdLinkViolation out;
  std::size_t patterns = 1;
  for (int i = 0; i < k; ++i) patterns *= 3;

  for (const auto& p : grid_distributions(k, grid_m)) {
    const ExpectedLosses e = a.expected(p);
    bool done = false;
    for_each_chain(k, [&](std::span<const int> order, const Label& y) {
      if (done) return;
      const std::uint32_t idx = chain_indices(all, e.argmin, order, y);
      if (std::popcount(idx) < 2) return;
      std::vector<double> centre(static_cast<std::size_t>(k), 0.0);
      for (int i = 0; i <= k; ++i) {
        if (!((idx >> i) & 1u)) continue;
        const auto v = to_vector(chain_vertex(order, y, i));
        for (int j = 0; j < k; ++j) centre[static_cast<std::size_t>(j)] += v[static_cast<std::size_t>(j)];
      }
      for (double& x : centre) x /= std::popcount(idx);
      for (std::size_t pat = 0; pat < patterns && !done; ++pat) {
        std::vector<double> u(centre);
        std::size_t rest = pat;
        for (double& x : u) {
          x += delta * (static_cast<double>(rest % 3) - 1.0);
          rest /= 3;
        }
        const AbstainReport linked = naive_threshold_link(u, c);
        const std::size_t li = static_cast<std::size_t>(std::find(all.begin(), all.end(), linked) - all.begin());
        if (std::find(e.argmin.begin(), e.argmin.end(), li) != e.argmin.end()) continue;
        out.found = true;
        out.distribution = as_vector(p);
        out.point = u;
        out.linked = linked;
        for (std::size_t i : e.argmin) out.optimal.push_back(all[i]);
        out.distance = face_distance(u, order, y, idx);
        done = true;
      }
    });
    if (done) break;
  }
  return out;
}

}  // namespace lovabs
