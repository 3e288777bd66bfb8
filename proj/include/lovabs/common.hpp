#pragma once

// Shared vocabulary: subset bitmasks, binary labels, abstain reports and the
// error hierarchy used across the library.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lovabs {

/// Subset of the ground set [k]; bit (i-1) set <=> element i is in the set.
using Mask = std::uint32_t;

/// Largest ground set a dense set-function table is allowed to cover.
inline constexpr int kMaxK = 20;

/// Absolute tolerance used for ties, validators and argmin sets.
inline constexpr double kTieTolerance = 1e-9;

inline constexpr Mask full_mask(int k) {
  return k >= 32 ? ~Mask{0} : ((Mask{1} << k) - 1u);
}
inline constexpr int popcount(Mask m) { return std::popcount(m); }
inline constexpr bool has(Mask m, int i) { return ((m >> i) & 1u) != 0; }

// ---------------------------------------------------------------------------
// Errors

/// Input outside the domain of an operation (bad bitmask, negative vector...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed object: invalid weights, distributions, polymatroid preconditions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested enumeration or table does not fit the supported size.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Unsupported configuration (e.g. class count that is not a power of two).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Optimisation failed (non-finite loss).
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Labels and reports

/// y in {-1,1}^k stored as the bitmask of +1 coordinates; -1 is bitmask 0.
struct Label {
  int k = 0;
  Mask bits = 0;

  static Label all_positive(int k) { return {k, full_mask(k)}; }
  static Label all_negative(int k) { return {k, 0}; }

  int sign(int i) const { return has(bits, i) ? 1 : -1; }
  Label negated() const { return {k, full_mask(k) & ~bits}; }
  /// Coordinatewise product y (.) r.
  Label times(const Label& r) const;

  friend bool operator==(const Label&, const Label&) = default;
};

/// v in {-1,0,1}^k as two disjoint bitmasks.
struct AbstainReport {
  int k = 0;
  Mask positives = 0;
  Mask zeros = 0;

  static AbstainReport from_label(const Label& y) { return {y.k, y.bits, 0}; }
  static AbstainReport all_abstain(int k) { return {k, 0, full_mask(k)}; }

  Mask negatives() const { return full_mask(k) & ~(positives | zeros); }
  int value(int i) const {
    return has(zeros, i) ? 0 : (has(positives, i) ? 1 : -1);
  }
  bool is_label() const { return zeros == 0; }
  Label as_label() const;
  /// Coordinatewise product v (.) y.
  AbstainReport times(const Label& y) const;

  friend bool operator==(const AbstainReport&, const AbstainReport&) = default;
  friend auto operator<=>(const AbstainReport& a, const AbstainReport& b) {
    if (auto c = a.k <=> b.k; c != 0) return c;
    if (auto c = a.zeros <=> b.zeros; c != 0) return c;
    return a.positives <=> b.positives;
  }
};

/// Throws DomainError unless both objects share the same k.
void require_same_k(int a, int b, const char* what);

/// Dense index of a report in [0, 4^k): positives | zeros << k.
inline std::size_t report_key(const AbstainReport& v) {
  return static_cast<std::size_t>(v.positives) |
         (static_cast<std::size_t>(v.zeros) << v.k);
}

}  // namespace lovabs
