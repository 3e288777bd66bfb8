#include "lovabs/setfn.hpp"

#include <cmath>
#include <sstream>

namespace lovabs {

namespace {

constexpr int kMaxValidateK = 14;
constexpr std::size_t kMaxViolationMessages = 16;

void check_k(int k) {
  if (k < 1) throw DomainError("k must be >= 1");
  if (k > kMaxK) {
    throw CapacityError("k = " + std::to_string(k) + " exceeds dense table limit " +
                        std::to_string(kMaxK));
  }
}

std::string set_string(Mask s, int k) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int i = 0; i < k; ++i) {
    if (!has(s, i)) continue;
    if (!first) os << ',';
    os << (i + 1);
    first = false;
  }
  os << '}';
  return os.str();
}

void note(PolymatroidReport& r, std::string msg) {
  if (r.violations.size() < kMaxViolationMessages) r.violations.push_back(std::move(msg));
}

}  // namespace

// ---------------------------------------------------------------------------
// SetFunction

SetFunction SetFunction::from_table(int k, std::vector<double> values) {
  check_k(k);
  const std::size_t n = std::size_t{1} << k;
  if (values.size() != n) {
    throw ValidationError("set function table for k=" + std::to_string(k) +
                          " needs " + std::to_string(n) + " values, got " +
                          std::to_string(values.size()));
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (!std::isfinite(values[s])) throw ValidationError("set function value is not finite");
    if (values[s] < 0.0) {
      throw ValidationError("set function value at " + set_string(static_cast<Mask>(s), k) +
                            " is negative");
    }
  }
  if (values[0] != 0.0) throw ValidationError("set function is not normalized: f(empty) != 0");
  return SetFunction(k, std::move(values));
}

double SetFunction::eval(Mask s) const {
  if (s > full()) {
    throw DomainError("subset bitmask " + std::to_string(s) + " out of range for k=" +
                      std::to_string(k_));
  }
  return values_[s];
}

// ---------------------------------------------------------------------------
// PolymatroidCollection

PolymatroidCollection PolymatroidCollection::symmetric(SetFunction f) {
  PolymatroidCollection c;
  c.k_ = f.k();
  c.symmetric_ = true;
  c.per_label_.assign(1, std::make_shared<const SetFunction>(std::move(f)));
  return c;
}

PolymatroidCollection PolymatroidCollection::from_members(int k,
                                                          std::vector<Member> per_label) {
  check_k(k);
  if (per_label.size() != (std::size_t{1} << k)) {
    throw ValidationError("collection needs one entry per label (2^k)");
  }
  for (const auto& m : per_label) {
    if (m && m->k() != k) throw ValidationError("collection member has mismatched k");
  }
  PolymatroidCollection c;
  c.k_ = k;
  c.symmetric_ = false;
  c.per_label_ = std::move(per_label);
  return c;
}

bool PolymatroidCollection::has(Mask label) const {
  if (label > full_mask(k_)) return false;
  return symmetric_ || per_label_[label] != nullptr;
}

bool PolymatroidCollection::is_complete() const {
  if (symmetric_) return true;
  for (const auto& m : per_label_) {
    if (!m) return false;
  }
  return true;
}

const SetFunction& PolymatroidCollection::at(const Label& y) const {
  require_same_k(k_, y.k, "collection lookup");
  return at(y.bits);
}

const SetFunction& PolymatroidCollection::at(Mask label) const {
  if (label > full_mask(k_)) throw DomainError("label bitmask out of range");
  if (symmetric_) return *per_label_.front();
  const auto& m = per_label_[label];
  if (!m) throw DomainError("collection has no member for label " + std::to_string(label));
  return *m;
}

const SetFunction& PolymatroidCollection::shared() const {
  if (!symmetric_) throw DomainError("collection is not symmetric");
  return *per_label_.front();
}

// ---------------------------------------------------------------------------
// Built-ins

SetFunction make_modular(std::span<const double> w) {
  const int k = static_cast<int>(w.size());
  check_k(k);
  for (double wi : w) {
    if (!(wi >= 0.0) || !std::isfinite(wi)) throw ValidationError("modular weights must be finite and >= 0");
  }
  std::vector<double> values(std::size_t{1} << k, 0.0);
  for (Mask s = 1; s <= full_mask(k); ++s) {
    const int low = std::countr_zero(s);
    values[s] = values[s & (s - 1)] + w[static_cast<std::size_t>(low)];
  }
  return SetFunction::from_table(k, std::move(values));
}

SetFunction make_zero_one(int k) {
  check_k(k);
  std::vector<double> values(std::size_t{1} << k, 1.0);
  values[0] = 0.0;
  return SetFunction::from_table(k, std::move(values));
}

SetFunction make_concave_card(int k, const std::function<double(int)>& g) {
  check_k(k);
  std::vector<double> by_size(static_cast<std::size_t>(k) + 1);
  for (int n = 0; n <= k; ++n) by_size[static_cast<std::size_t>(n)] = g(n);
  if (std::fabs(by_size[0]) > 1e-12) throw ValidationError("concave cardinality map needs g(0) = 0");
  by_size[0] = 0.0;
  for (int n = 1; n <= k; ++n) {
    const double step = by_size[n] - by_size[n - 1];
    if (!std::isfinite(by_size[n]) || step < -kTieTolerance) {
      throw ValidationError("concave cardinality map is not nondecreasing at n=" + std::to_string(n));
    }
    if (n >= 2 && step > by_size[n - 1] - by_size[n - 2] + kTieTolerance) {
      throw ValidationError("concave cardinality map is not concave at n=" + std::to_string(n));
    }
  }
  std::vector<double> values(std::size_t{1} << k);
  for (Mask s = 0; s <= full_mask(k); ++s) values[s] = by_size[static_cast<std::size_t>(popcount(s))];
  return SetFunction::from_table(k, std::move(values));
}

SetFunction make_power_card(int k, double exponent) {
  if (!(exponent > 0.0 && exponent <= 1.0)) {
    throw ValidationError("cardinality exponent must lie in (0, 1]");
  }
  return make_concave_card(k, [exponent](int n) {
    return n == 0 ? 0.0 : std::pow(static_cast<double>(n), exponent);
  });
}

PolymatroidCollection make_jaccard(int k) {
  check_k(k);
  const std::size_t n = std::size_t{1} << k;
  std::vector<PolymatroidCollection::Member> members(n);
  for (Mask y = 0; y < n; ++y) {
    std::vector<double> values(n, 0.0);
    for (Mask s = 1; s < n; ++s) {
      values[s] = static_cast<double>(popcount(s)) / static_cast<double>(popcount(s | y));
    }
    members[y] = std::make_shared<const SetFunction>(SetFunction::from_table(k, std::move(values)));
  }
  return PolymatroidCollection::from_members(k, std::move(members));
}

PolymatroidCollection make_foreground_miss(int k) {
  check_k(k);
  const std::size_t n = std::size_t{1} << k;
  std::vector<PolymatroidCollection::Member> members(n);
  for (Mask y = 0; y < n; ++y) {
    std::vector<double> values(n, 0.0);
    for (Mask s = 1; s < n; ++s) values[s] = (s & y) != 0 ? 1.0 : 0.0;
    members[y] = std::make_shared<const SetFunction>(SetFunction::from_table(k, std::move(values)));
  }
  return PolymatroidCollection::from_members(k, std::move(members));
}

SetFunction restrict_to(const SetFunction& f, std::span<const int> elements) {
  const int m = static_cast<int>(elements.size());
  check_k(m);
  std::vector<double> values(std::size_t{1} << m);
  for (Mask s = 0; s <= full_mask(m); ++s) {
    Mask orig = 0;
    for (int j = 0; j < m; ++j) {
      if (has(s, j)) orig |= Mask{1} << elements[static_cast<std::size_t>(j)];
    }
    values[s] = f.eval(orig);
  }
  return SetFunction::from_table(m, std::move(values));
}

// ---------------------------------------------------------------------------
// Validation

PolymatroidReport validate_polymatroid(const SetFunction& f, bool strict) {
  const int k = f.k();
  if (k > kMaxValidateK) {
    throw CapacityError("pairwise validation is limited to k <= " + std::to_string(kMaxValidateK));
  }
  PolymatroidReport r;
  const Mask full = f.full();

  if (f(0) != 0.0) {
    r.normalized = false;
    note(r, "f(empty) != 0");
  }
  for (Mask s = 0; s <= full; ++s) {
    if (f(s) < 0.0) {
      r.nonnegative = false;
      note(r, "negative value at " + set_string(s, k));
    }
  }
  for (int i = 0; i < k; ++i) {
    if (f(Mask{1} << i) <= kTieTolerance) r.zero_singletons.push_back(i);
  }

  for (Mask s = 0; s <= full; ++s) {
    for (int i = 0; i < k; ++i) {
      if (has(s, i)) continue;
      const double gain = f(s | (Mask{1} << i)) - f(s);
      if (gain < -kTieTolerance) {
        if (r.increasing) note(r, "not increasing: f(" + set_string(s | (Mask{1} << i), k) + ") < f(" + set_string(s, k) + ")");
        r.increasing = false;
      }
      if (gain <= kTieTolerance) r.strictly_increasing = false;
    }
  }

  for (Mask s = 0; s <= full; ++s) {
    for (Mask t = s + 1; t <= full; ++t) {
      const double slack = f(s) + f(t) - f(s | t) - f(s & t);
      if (slack < -kTieTolerance) {
        if (r.submodular) note(r, "not submodular at S=" + set_string(s, k) + ", T=" + set_string(t, k));
        r.submodular = false;
      }
      if (std::fabs(slack) > kTieTolerance) r.modular = false;
      const bool incomparable = (s & ~t) != 0 && (t & ~s) != 0;
      if (incomparable && slack <= kTieTolerance) r.strictly_submodular = false;
    }
  }

  if (strict) {
    if (!r.strictly_submodular) note(r, "not strictly submodular");
    if (!r.strictly_increasing) note(r, "not strictly increasing");
  }
  return r;
}

Condition1Report check_condition1(const PolymatroidCollection& fc) {
  const int k = fc.k();
  if (!fc.is_complete()) throw ValidationError("the complementary-label condition needs every label defined");
  const Mask full = full_mask(k);
  Condition1Report r;
  auto fail = [&](Mask y, std::optional<Mask> s, std::string why) {
    r.pass = false;
    r.label = Label{k, y};
    r.set = s;
    r.reason = std::move(why);
  };

  for (Mask y = 0; y <= full && r.pass; ++y) {
    const SetFunction& f = fc.at(y);
    ++r.cases;
    if (!(f(full) > f(0) + kTieTolerance)) {
      fail(y, std::nullopt, "f_y([k]) > f_y(empty) fails");
      break;
    }
    const SetFunction& g = fc.at(full & ~y);
    for (Mask s = 0; s <= full; ++s) {
      ++r.cases;
      const double slack = f(s) + g(full & ~s) - f(full);
      if (slack < -kTieTolerance) {
        fail(y, s, "f_y(S) + f_{-y}(S^c) < f_y([k])");
        break;
      }
      const bool strict_needed = s != 0 && s != full && y != 0 && y != full && y != (full & ~s);
      if (strict_needed && slack <= kTieTolerance) {
        fail(y, s, "inequality not strict where required");
        break;
      }
    }
  }
  return r;
}

double mean_value(const SetFunction& f) {
  double total = 0.0;
  for (double v : f.values()) total += v;
  return total / static_cast<double>(f.values().size());
}

}  // namespace lovabs
