#include "lovabs/links.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>

#include "lovabs/lovasz.hpp"

namespace lovabs {

namespace {
constexpr int kMaxOracleK = 4;
}

LinkConfig LinkConfig::make(int k, double tau, std::optional<double> epsilon) {
  if (k < 1) throw ConfigError("link: k must be >= 1");
  const double bound = 1.0 / (2.0 * k);
  LinkConfig cfg;
  cfg.epsilon = epsilon.value_or(bound);
  cfg.tau = tau;
  if (!(cfg.epsilon > 0.0) || cfg.epsilon > bound) {
    throw ConfigError("link: epsilon must lie in (0, 1/(2k)] = (0, " + std::to_string(bound) + "]");
  }
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("link: tau must lie in [0, 1]");
  return cfg;
}

Label sign_star(std::span<const double> u) {
  if (u.size() > static_cast<std::size_t>(kMaxK)) throw CapacityError("sign_star: k too large");
  Label y{static_cast<int>(u.size()), 0};
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] >= 0.0) y.bits |= Mask{1} << i;
  }
  return y;
}

AbstainReport naive_threshold_link(std::span<const double> u, double c) {
  if (!(c > 0.0)) throw ConfigError("threshold link needs c > 0");
  if (u.size() > static_cast<std::size_t>(kMaxK)) throw CapacityError("threshold link: k too large");
  AbstainReport v{static_cast<int>(u.size()), 0, 0};
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (std::fabs(u[i]) < c) {
      v.zeros |= Mask{1} << i;
    } else if (u[i] > 0.0) {
      v.positives |= Mask{1} << i;
    }
  }
  return v;
}

AbstainReport chain_vertex(std::span<const int> order, const Label& y, int i) {
  AbstainReport v{y.k, 0, full_mask(y.k)};
  for (int j = 0; j < i; ++j) {
    const Mask bit = Mask{1} << order[static_cast<std::size_t>(j)];
    v.zeros &= ~bit;
    if (y.bits & bit) v.positives |= bit;
  }
  return v;
}

CutProfile cut_profile(std::span<const double> u, double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  const int k = static_cast<int>(u.size());
  if (k < 1) throw DomainError("empty surrogate point");
  CutProfile p;
  p.clipped = clip(u);
  std::vector<double> a(p.clipped.size());
  std::transform(p.clipped.begin(), p.clipped.end(), a.begin(), [](double x) { return std::fabs(x); });
  p.order = descending_order(a);
  auto sorted = [&](int i) {
    if (i == 0) return 1.0 + epsilon;
    if (i == k + 1) return -epsilon;
    return a[static_cast<std::size_t>(p.order[static_cast<std::size_t>(i - 1)])];
  };
  p.cuts.resize(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) {
    Cut& c = p.cuts[static_cast<std::size_t>(i)];
    c.index = i;
    c.gap = sorted(i) - sorted(i + 1);
    c.midpoint = 0.5 * (sorted(i) + sorted(i + 1));
    if (i == 0) {
      c.admissible = 1.0 - sorted(1) >= epsilon;
    } else if (i == k) {
      c.admissible = sorted(k) >= epsilon;
    } else {
      c.admissible = sorted(i) - sorted(i + 1) >= 2.0 * epsilon;
    }
    if (k == 0) c.admissible = false;
  }
  return p;
}

std::vector<EnvelopeMember> envelope(std::span<const double> u, double epsilon) {
  const CutProfile p = cut_profile(u, epsilon);
  const Label s = sign_star(p.clipped);
  std::vector<EnvelopeMember> out;
  for (const Cut& c : p.cuts) {
    if (!c.admissible) continue;
    out.push_back(EnvelopeMember{chain_vertex(p.order, s, c.index), p.order, s, c.index});
  }
  return out;
}

double face_distance(std::span<const double> x, std::span<const int> order, const Label& y,
                     std::uint32_t indices) {
  const int k = static_cast<int>(x.size());
  if (order.size() != x.size() || y.k != k) throw DomainError("face_distance: dimension mismatch");
  if (indices == 0 || indices >= (std::uint32_t{1} << (k + 1))) {
    throw DomainError("face_distance: index set must be a nonempty subset of {0..k}");
  }
  const int first = std::countr_zero(indices);
  const int last = 31 - std::countl_zero(indices);

  std::array<double, kMaxK + 1> z{};
  std::array<int, kMaxK + 1> block{};
  for (int j = 1; j <= k; ++j) {
    const int c = order[static_cast<std::size_t>(j - 1)];
    z[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(c)] * y.sign(c);
    block[static_cast<std::size_t>(j)] = std::popcount(indices & ((std::uint32_t{1} << j) - 1));
  }

  double d = 0.0;
  for (int j = 1; j <= k; ++j) {
    const double zj = z[static_cast<std::size_t>(j)];
    if (j <= first) {
      d = std::max(d, std::fabs(1.0 - zj));
    } else if (j > last) {
      d = std::max(d, std::fabs(zj));
    } else {
      d = std::max({d, -zj, zj - 1.0});
      for (int b = first + 1; b <= last; ++b) {
        if (b != j && block[static_cast<std::size_t>(j)] >= block[static_cast<std::size_t>(b)]) {
          d = std::max(d, 0.5 * (zj - z[static_cast<std::size_t>(b)]));
        }
      }
    }
  }
  return d;
}

std::vector<AbstainReport> envelope_oracle(std::span<const double> u, double epsilon) {
  const int k = static_cast<int>(u.size());
  if (k < 1) throw DomainError("empty surrogate point");
  if (k > kMaxOracleK) throw CapacityError("envelope_oracle enumerates faces only for k <= 4");
  const std::vector<double> x = clip(u);
  const std::size_t keys = std::size_t{1} << (2 * k);
  std::vector<int> hits(keys, 0);
  int qualifying = 0;

  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> vertex_key(static_cast<std::size_t>(k) + 1);
  const std::uint32_t subsets = std::uint32_t{1} << (k + 1);
  do {
    for (Mask yb = 0; yb <= full_mask(k); ++yb) {
      const Label y{k, yb};
      for (int i = 0; i <= k; ++i) vertex_key[static_cast<std::size_t>(i)] = report_key(chain_vertex(order, y, i));
      for (std::uint32_t s = 1; s < subsets; ++s) {
        if (!(face_distance(x, order, y, s) < epsilon)) continue;
        ++qualifying;
        for (int i = 0; i <= k; ++i) {
          if ((s >> i) & 1u) ++hits[vertex_key[static_cast<std::size_t>(i)]];
        }
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));

  std::vector<AbstainReport> out;
  if (qualifying == 0) return out;
  for (std::size_t key = 0; key < keys; ++key) {
    if (hits[key] != qualifying) continue;
    const Mask pos = static_cast<Mask>(key) & full_mask(k);
    const Mask zer = static_cast<Mask>(key >> k);
    out.push_back(AbstainReport{k, pos, zer});
  }
  std::sort(out.begin(), out.end());
  return out;
}

LinkDecision threshold_abstain_decision(std::span<const double> u, const LinkConfig& cfg) {
  LinkDecision d;
  d.profile = cut_profile(u, cfg.epsilon);
  const int k = static_cast<int>(u.size());
  double best = 0.0;
  int chosen = -1;
  for (const Cut& c : d.profile.cuts) {
    if (!c.admissible) continue;
    const double dist = std::fabs(cfg.tau - c.midpoint);
    if (chosen < 0 || dist <= best) {
      best = dist;
      chosen = c.index;
    }
  }
  if (chosen < 0) throw ConfigError("no admissible cut; epsilon exceeds 1/(2k)");
  d.chosen = chosen;
  d.report = AbstainReport{k, 0, full_mask(k)};
  for (int j = 0; j < chosen; ++j) {
    const int c = d.profile.order[static_cast<std::size_t>(j)];
    const double x = d.profile.clipped[static_cast<std::size_t>(c)];
    if (x == 0.0) continue;
    const Mask bit = Mask{1} << c;
    d.report.zeros &= ~bit;
    if (x > 0.0) d.report.positives |= bit;
  }
  return d;
}

AbstainReport threshold_abstain_link(std::span<const double> u, const LinkConfig& cfg) {
  return threshold_abstain_decision(u, cfg).report;
}

AbstainReport trim_single_abstain(const AbstainReport& v, std::span<const double> u) {
  if (u.size() != static_cast<std::size_t>(v.k)) throw DomainError("trim: dimension mismatch");
  if (popcount(v.zeros) != 1) return v;
  const int i = std::countr_zero(v.zeros);
  AbstainReport out = v;
  out.zeros = 0;
  if (u[static_cast<std::size_t>(i)] >= 0.0) out.positives |= Mask{1} << i;
  return out;
}

}  // namespace lovabs
