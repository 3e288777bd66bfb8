#pragma once

// Desk-scale training and evaluation: abstention-aware metrics, synthetic
// structured data, a linear scorer trained on the Lovasz hinge, and tau
// sweeps through the threshold-abstain link.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lovabs/common.hpp"
#include "lovabs/links.hpp"
#include "lovabs/setfn.hpp"

namespace lovabs {

struct Counts {
  Mask tp = 0, tn = 0, fp = 0, fn = 0;
};

/// Outcome sets over the coordinates where v does not abstain.
Counts counts(const AbstainReport& v, const Label& y);

class PredictionSet {
 public:
  explicit PredictionSet(int k);

  void add(const AbstainReport& v, const Label& y);
  int k() const { return k_; }
  std::size_t size() const { return preds_.size(); }
  const std::vector<AbstainReport>& predictions() const { return preds_; }
  const std::vector<Label>& truth() const { return truth_; }

 private:
  int k_;
  std::vector<AbstainReport> preds_;
  std::vector<Label> truth_;
};

/// Pooled over every coordinate of every sample. A metric whose denominator
/// is zero is reported as 0 and its name is listed in undefined_flags.
struct Metrics {
  double accuracy = 0.0;
  double recall = 0.0;
  double precision = 0.0;
  double iou = 0.0;
  double rejection_rate = 0.0;  ///< abstained coordinates / (N k)
  double rejection_rate_pos = 0.0;
  double rejection_rate_neg = 0.0;
  std::vector<std::string> undefined_flags;
};

/// Throws DomainError on an empty set.
Metrics metrics(const PredictionSet& s);

// ---------------------------------------------------------------------------
// Data

/// Feature j < k carries coordinate j: x_j = separation * y_j + noise_j * z.
/// The remaining features are standard normal distractors except the last,
/// which is a constant 1. With correlation rho each y_j copies y_0 with
/// probability rho and is a fair coin otherwise.
struct SynthConfig {
  int k = 4;
  int features = 8;
  int samples = 500;
  double separation = 1.0;
  std::vector<double> noise;  ///< per coordinate; empty means all zero
  double correlation = 0.0;
  std::uint64_t seed = 1;
};

struct Dataset {
  int k = 0;
  int dim = 0;
  std::vector<double> x;  ///< row-major samples x dim
  std::vector<Label> y;

  std::size_t size() const { return y.size(); }
  std::span<const double> row(std::size_t i) const {
    return {x.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  Dataset subset(std::span<const std::size_t> rows) const;
};

Dataset synth_data(const SynthConfig& cfg);

struct Splits {
  Dataset train, validation, test;
};

/// Seeded shuffle, then 80/10/10.
Splits split(const Dataset& d, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Training

struct TrainConfig {
  SynthConfig data;
  double learning_rate = 0.1;
  double decay_rate = 0.96;
  int decay_steps = 10000;
  double gradient_clip = 1.0;
  int epochs = 20;
  int batch_size = 32;  ///< 0 means full batch
  std::uint64_t seed = 1;
  std::optional<double> epsilon;
  std::vector<double> taus{0.0, 0.25, 0.5, 0.75, 1.0};
};

/// Throws ConfigError on nonpositive sizes or rates.
void check_config(const TrainConfig& cfg);

struct LinearModel {
  int k = 0;
  int dim = 0;
  std::vector<double> weights;  ///< row-major k x dim

  std::vector<double> scores(std::span<const double> x) const;
};

double mean_hinge(const PolymatroidCollection& fc, const LinearModel& m, const Dataset& d);

struct EpochStats {
  int epoch = 0;  ///< 0 is the initial model
  double train_loss = 0.0;
  double validation_loss = 0.0;
};

struct TrainResult {
  LinearModel model;  ///< weights with the lowest validation loss
  int best_epoch = 0;
  std::vector<EpochStats> trace;
};

/// Minibatch subgradient descent on the mean hinge from zero weights; the
/// step is lr * decay^(step / decay_steps) and the averaged gradient is
/// clamped to +-clip elementwise. Throws TrainingError on a non-finite loss.
TrainResult train(const TrainConfig& cfg, const PolymatroidCollection& fc, const Dataset& train,
                  const Dataset& validation);

struct SweepRow {
  double tau = 0.0;
  Metrics metrics;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t monotonicity_checks = 0;
  std::size_t monotonicity_violations = 0;  ///< a larger tau abstained on fewer coordinates
  bool metrics_monotone = true;             ///< rejection rate nondecreasing in tau (reported only)
};

/// Taus are processed in ascending order.
SweepResult tau_sweep(const LinearModel& m, const Dataset& d, std::vector<double> taus,
                      std::optional<double> epsilon, bool trim);

}  // namespace lovabs
