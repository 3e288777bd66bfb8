#pragma once

// Set functions on 2^[k] stored as dense tables, label-indexed collections of
// them, the built-in loss families, and polymatroid and complementary-label validators.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lovabs/common.hpp"

namespace lovabs {

/// Normalized nonnegative set function f : 2^[k] -> R_+, indexed by bitmask.
class SetFunction {
 public:
  /// Validates length 2^k, f(empty) = 0 and nonnegativity.
  static SetFunction from_table(int k, std::vector<double> values);

  int k() const { return k_; }
  Mask full() const { return full_mask(k_); }
  std::span<const double> values() const { return values_; }

  /// Checked lookup; throws DomainError for S >= 2^k.
  double eval(Mask s) const;
  /// Unchecked lookup for inner loops.
  double operator()(Mask s) const { return values_[s]; }

 private:
  SetFunction(int k, std::vector<double> values)
      : k_(k), values_(std::move(values)) {}

  int k_;
  std::vector<double> values_;
};

/// Label-indexed family {f_y}. Either one shared table (symmetric) or one
/// table per label bitmask; a per-label family may leave labels undefined.
class PolymatroidCollection {
 public:
  using Member = std::shared_ptr<const SetFunction>;

  static PolymatroidCollection symmetric(SetFunction f);
  /// `per_label` must have 2^k entries; null entries are undefined labels.
  static PolymatroidCollection from_members(int k, std::vector<Member> per_label);

  int k() const { return k_; }
  bool is_symmetric() const { return symmetric_; }
  bool has(Mask label) const;
  bool is_complete() const;

  /// f_y; throws DomainError if y has the wrong k or is undefined.
  const SetFunction& at(const Label& y) const;
  const SetFunction& at(Mask label) const;
  /// The shared table of a symmetric collection.
  const SetFunction& shared() const;

 private:
  PolymatroidCollection() = default;

  int k_ = 0;
  bool symmetric_ = false;
  std::vector<Member> per_label_;
};

// ---------------------------------------------------------------------------
// Built-in families

/// f^w(S) = sum of w_i over S (weighted Hamming). Throws on negative weights.
SetFunction make_modular(std::span<const double> w);

/// f(S) = 1 for every nonempty S.
SetFunction make_zero_one(int k);

/// f(S) = g(|S|) for a concave nondecreasing g with g(0) = 0.
SetFunction make_concave_card(int k, const std::function<double(int)>& g);

/// g(n) = n^exponent for 0 < exponent <= 1 (exponent 0.5 gives sqrt(|S|)).
SetFunction make_power_card(int k, double exponent);

/// Jaccard collection J_y(S) = |S| / |S u P_y| with P_y the positives of y,
/// and 0/0 = 0.
PolymatroidCollection make_jaccard(int k);

/// f_y(S) = 1 if S misses any positive coordinate of y, else 0. The
/// all-negative label gets the zero function, so every y admits the
/// always-positive prediction at zero loss (a degenerate family).
PolymatroidCollection make_foreground_miss(int k);

/// Restrict f to the listed elements (0-based, ascending); the result lives on
/// [elements.size()].
SetFunction restrict_to(const SetFunction& f, std::span<const int> elements);

// ---------------------------------------------------------------------------
// Validation

struct PolymatroidReport {
  bool normalized = true;
  bool nonnegative = true;
  bool increasing = true;
  bool submodular = true;
  bool modular = true;
  bool strictly_submodular = true;
  bool strictly_increasing = true;
  /// 0-based elements i with f({i}) == 0.
  std::vector<int> zero_singletons;
  /// Human-readable violations of the polymatroid axioms (and, when strict
  /// checking was requested, of strictness).
  std::vector<std::string> violations;

  bool valid() const { return normalized && nonnegative && increasing && submodular; }
  bool strict() const { return strictly_submodular && strictly_increasing; }
};

/// Exhaustive check over all pairs (S, T); O(4^k). Strictness flags are
/// always computed; `strict` only controls whether they count as violations.
PolymatroidReport validate_polymatroid(const SetFunction& f, bool strict = false);

struct Condition1Report {
  bool pass = true;
  std::size_t cases = 0;
  /// First violating (y, S), if any.
  std::optional<Label> label;
  std::optional<Mask> set;
  std::string reason;
};

/// f_y([k]) > f_y(empty) and f_y(S) + f_{-y}(S^c) >= f_y([k]), strict when
/// S is not empty or [k] and y is not -1, -chi_S or 1.
Condition1Report check_condition1(const PolymatroidCollection& fc);

/// Average of f over all 2^k subsets.
double mean_value(const SetFunction& f);

}  // namespace lovabs
