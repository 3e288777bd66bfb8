#pragma once

// Multiclass structured abstention: the binary block code with its lifted
// polymatroids and trimmed link, and the one-hot one-vs-all lift.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lovabs/common.hpp"
#include "lovabs/links.hpp"
#include "lovabs/oracle.hpp"
#include "lovabs/setfn.hpp"

namespace lovabs {

/// Classes are 1-based; in a report 0 is the abstain symbol.
using ClassVector = std::vector<int>;

/// phi : [C] -> {-1,1}^d, the d-bit binary form of (c mod C) with the most
/// significant bit first, 0 -> -1 and 1 -> +1. C must be a power of two >= 2.
class BlockCodec {
 public:
  explicit BlockCodec(int classes);

  int classes() const { return classes_; }
  int bits() const { return bits_; }

  /// Code of one class as a d-bit mask (bit t = position t of the block).
  Mask code(int c) const;
  int decode(Mask block) const;

  /// Concatenated codes; block i occupies bits d*i .. d*i + d - 1.
  Label encode(const ClassVector& y) const;
  ClassVector decode(const Label& y) const;

  /// Blocks (0-based) that S touches.
  Mask touched_blocks(Mask s, int k) const;

 private:
  int classes_;
  int bits_;
};

/// g_y over [k] for class labels y: either one shared polymatroid or the
/// class-weighted counting family g_y(S) = sum_{i in S} w(y_i).
class ClassCollection {
 public:
  static ClassCollection shared(SetFunction g, int classes);
  static ClassCollection class_weighted(int k, std::vector<double> weights_by_class);

  int k() const { return k_; }
  int classes() const { return classes_; }
  bool is_shared() const { return shared_.has_value(); }
  const std::vector<double>& weights() const { return weights_; }

  double eval(const ClassVector& y, Mask s) const;

 private:
  ClassCollection() = default;

  int k_ = 0;
  int classes_ = 0;
  std::optional<SetFunction> shared_;
  std::vector<double> weights_;
};

void check_class_vector(const ClassVector& y, int classes, bool allow_abstain);

/// f_{phi(y)}(S_b) = g_y(blocks touched by S_b). Shared g lifts to a symmetric
/// collection (dk <= 12); class-weighted g needs dk <= 10.
PolymatroidCollection lift_polymatroid(const ClassCollection& g, const BlockCodec& codec);

/// g_y(mis \ abs) + g_y(mis) with mis = {i : v_i != y_i} and abs = {i : v_i = 0}.
double multiclass_target(const ClassCollection& g, const ClassVector& v, const ClassVector& y);

/// Hinge of the lifted collection at the encoded label.
double multiclass_surrogate(const PolymatroidCollection& lifted, const BlockCodec& codec,
                            std::span<const double> u, const ClassVector& y);

/// Threshold-abstain link on R^{dk}, then per block: abstain if any bit was
/// abstained, otherwise decode.
ClassVector trimmed_link(std::span<const double> u, const LinkConfig& cfg, const BlockCodec& codec);

/// All reports in ([C] u {0})^k, lexicographic with 0 first.
std::vector<ClassVector> enumerate_class_reports(int k, int classes);
/// All labels in [C]^k, lexicographic.
std::vector<ClassVector> enumerate_class_labels(int k, int classes);

std::string format_classes(const ClassVector& v);
/// "5,_,3" with '_' (or '0') for the abstain symbol when allowed.
ClassVector parse_classes(std::string_view s, bool allow_abstain);

/// Partial abstention inside a block is weakly dominated by abstaining on the
/// whole block, for every report over {-1,0,1}^{dk} and every encoded label.
/// dk <= 9.
VerificationReport verify_block_domination(const ClassCollection& g, const BlockCodec& codec);

/// For grid distributions over [C]^k, each hinge-optimal report of the
/// lifted collection and perturbations within 0.99 eps, the trimmed link lands
/// in the multiclass argmin. dk <= 3.
VerificationReport verify_trimmed_link_calibration(const ClassCollection& g, const BlockCodec& codec,
                                                   const CalibrationSweepOptions& opt);

// ---------------------------------------------------------------------------
// One-hot one-vs-all

/// g_{c,y}(S) for class c, class label y and S over [k].
using ClassSetFunction = std::function<double(int c, const ClassVector& y, Mask s)>;

/// g_{c,y}(S) = |S| / |S u {i : y_i = c}| with 0/0 = 0.
ClassSetFunction onehot_jaccard();

/// {i : exactly one of v_i, y_i equals c}.
Mask mis_class(const ClassVector& v, const ClassVector& y, int c);

/// (1/C) sum_c g_{c,y}(mis_c(v, y)).
double ova_target(const ClassSetFunction& g, int classes, const ClassVector& v, const ClassVector& y);

/// One-hot code chi_c per block: bit C*i + (c-1) is +1.
Label onehot_encode(const ClassVector& y, int classes);

/// f^C over [Ck] defined on one-hot labels only (other labels undefined).
/// Ck <= 12.
PolymatroidCollection onehot_lift(const ClassSetFunction& g, int classes, int k);

/// Loss identity f^C_{y_o}(mis(phi(v), phi(y))) == ova_target(v, y) over all
/// class label pairs.
VerificationReport verify_onehot_identity(const ClassSetFunction& g, int classes, int k);

/// The eight-class, single-prediction code conflict: two predictions whose
/// bit-level misprediction sets are nested while their class-level
/// one-vs-all mispredictions shrink.
struct CodeConflict {
  int truth = 7, first = 5, second = 4, focus = 5;
  Mask class_mis_first = 0, class_mis_second = 0;  ///< over [k] = {1}
  Mask bit_mis_first = 0, bit_mis_second = 0;      ///< over [3]
  bool nested = false;          ///< bit_mis_first strictly inside bit_mis_second
  double g_first = 0.0, g_second = 0.0;  ///< one-vs-all Jaccard for the focus class
  bool forces_decrease = false; ///< required f(second) = g(empty) < g({1}) = f(first)
  std::string verdict;
};

CodeConflict bep_ova_conflict();

}  // namespace lovabs
