#include "lovabs/bench.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lovabs/kernels.hpp"
#include "lovabs/lovasz.hpp"

namespace lovabs {

Counts counts(const AbstainReport& v, const Label& y) {
  require_same_k(v.k, y.k, "counts");
  const Mask full = full_mask(v.k);
  const Mask neg = v.negatives();
  const Mask yneg = full & ~y.bits;
  return Counts{v.positives & y.bits, neg & yneg, v.positives & yneg, neg & y.bits};
}

PredictionSet::PredictionSet(int k) : k_(k) {
  if (k < 1 || k > kMaxK) throw DomainError("prediction set k out of range");
}

void PredictionSet::add(const AbstainReport& v, const Label& y) {
  require_same_k(k_, v.k, "prediction set");
  require_same_k(k_, y.k, "prediction set");
  preds_.push_back(v);
  truth_.push_back(y);
}

Metrics metrics(const PredictionSet& s) {
  if (s.size() == 0) throw DomainError("metrics need at least one prediction");
  long tp = 0, tn = 0, fp = 0, fn = 0, rej = 0, rej_pos = 0, rej_neg = 0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const auto& v = s.predictions()[j];
    const auto& y = s.truth()[j];
    const Counts c = counts(v, y);
    tp += popcount(c.tp);
    tn += popcount(c.tn);
    fp += popcount(c.fp);
    fn += popcount(c.fn);
    rej += popcount(v.zeros);
    rej_pos += popcount(v.zeros & y.bits);
    rej_neg += popcount(v.zeros & ~y.bits);
  }
  Metrics m;
  auto ratio = [&](long num, long den, const char* name) {
    if (den == 0) {
      m.undefined_flags.emplace_back(name);
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  m.accuracy = ratio(tp + tn, tp + tn + fp + fn, "accuracy");
  m.recall = ratio(tp, tp + fn, "recall");
  m.precision = ratio(tp, tp + fp, "precision");
  m.iou = ratio(tp, tp + fp + fn, "iou");
  m.rejection_rate = ratio(rej, static_cast<long>(s.size()) * s.k(), "rejection_rate");
  m.rejection_rate_pos = ratio(rej_pos, rej, "rejection_rate_pos");
  m.rejection_rate_neg = ratio(rej_neg, rej, "rejection_rate_neg");
  return m;
}

// ---------------------------------------------------------------------------

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.k = k;
  out.dim = dim;
  out.x.reserve(rows.size() * static_cast<std::size_t>(dim));
  for (std::size_t r : rows) {
    const auto src = row(r);
    out.x.insert(out.x.end(), src.begin(), src.end());
    out.y.push_back(y[r]);
  }
  return out;
}

Dataset synth_data(const SynthConfig& cfg) {
  if (cfg.k < 1 || cfg.k > kMaxK) throw ConfigError("synthetic k out of range");
  if (cfg.features < cfg.k + 1) throw ConfigError("need at least k + 1 features");
  if (cfg.samples < 1) throw ConfigError("need at least one sample");
  if (!cfg.noise.empty() && cfg.noise.size() != static_cast<std::size_t>(cfg.k)) {
    throw ConfigError("noise needs one entry per coordinate");
  }
  if (!(cfg.correlation >= 0.0 && cfg.correlation <= 1.0)) throw ConfigError("correlation must lie in [0, 1]");
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution copy(cfg.correlation);

  Dataset d;
  d.k = cfg.k;
  d.dim = cfg.features;
  d.x.reserve(static_cast<std::size_t>(cfg.samples) * static_cast<std::size_t>(cfg.features));
  for (int n = 0; n < cfg.samples; ++n) {
    Mask bits = coin(rng) ? 1u : 0u;
    for (int j = 1; j < cfg.k; ++j) {
      const bool pos = copy(rng) ? (bits & 1u) != 0 : coin(rng);
      if (pos) bits |= Mask{1} << j;
    }
    const Label y{cfg.k, bits};
    for (int j = 0; j < cfg.features - 1; ++j) {
      const double z = normal(rng);
      if (j < cfg.k) {
        const double sigma = cfg.noise.empty() ? 0.0 : cfg.noise[static_cast<std::size_t>(j)];
        d.x.push_back(cfg.separation * y.sign(j) + sigma * z);
      } else {
        d.x.push_back(z);
      }
    }
    d.x.push_back(1.0);
    d.y.push_back(y);
  }
  return d;
}

Splits split(const Dataset& d, std::uint64_t seed) {
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  const std::size_t n_train = d.size() * 8 / 10;
  const std::size_t n_val = d.size() / 10;
  const std::span<const std::size_t> all(idx);
  return Splits{d.subset(all.subspan(0, n_train)), d.subset(all.subspan(n_train, n_val)),
                d.subset(all.subspan(n_train + n_val))};
}

// ---------------------------------------------------------------------------

void check_config(const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  if (!(cfg.decay_rate > 0.0 && cfg.decay_rate <= 1.0)) throw ConfigError("decay rate must lie in (0, 1]");
  if (cfg.decay_steps < 1) throw ConfigError("decay steps must be >= 1");
  if (!(cfg.gradient_clip > 0.0)) throw ConfigError("gradient clip must be > 0");
  if (cfg.epochs < 0) throw ConfigError("epochs must be >= 0");
  if (cfg.batch_size < 0) throw ConfigError("batch size must be >= 0");
  for (double t : cfg.taus) {
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("tau must lie in [0, 1]");
  }
}

std::vector<double> LinearModel::scores(std::span<const double> x) const {
  std::vector<double> u(static_cast<std::size_t>(k));
  simd::gemv(weights, static_cast<std::size_t>(k), static_cast<std::size_t>(dim), x, u);
  return u;
}

double mean_hinge(const PolymatroidCollection& fc, const LinearModel& m, const Dataset& d) {
  if (d.size() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) total += hinge(fc, m.scores(d.row(i)), d.y[i]);
  return total / static_cast<double>(d.size());
}

TrainResult train(const TrainConfig& cfg, const PolymatroidCollection& fc, const Dataset& train_set,
                  const Dataset& validation) {
  check_config(cfg);
  if (train_set.size() == 0) throw ConfigError("empty training set");
  require_same_k(fc.k(), train_set.k, "train");
  const auto rows = static_cast<std::size_t>(train_set.k);
  const auto cols = static_cast<std::size_t>(train_set.dim);

  LinearModel model{train_set.k, train_set.dim, std::vector<double>(rows * cols, 0.0)};
  const Dataset& select = validation.size() > 0 ? validation : train_set;
  auto stats = [&](int epoch) {
    EpochStats s{epoch, mean_hinge(fc, model, train_set), mean_hinge(fc, model, select)};
    if (!std::isfinite(s.train_loss) || !std::isfinite(s.validation_loss)) {
      throw TrainingError("loss diverged at epoch " + std::to_string(epoch));
    }
    return s;
  };

  TrainResult res;
  res.trace.push_back(stats(0));
  res.model = model;
  double best = res.trace.back().validation_loss;

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t batch = cfg.batch_size == 0 ? order.size() : static_cast<std::size_t>(cfg.batch_size);
  std::vector<double> grad(rows * cols);
  const std::vector<double> one{1.0};
  long step = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (cfg.batch_size != 0) std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      std::fill(grad.begin(), grad.end(), 0.0);
      const double scale = 1.0 / static_cast<double>(end - start);
      for (std::size_t b = start; b < end; ++b) {
        const auto x = train_set.row(order[b]);
        const auto g = hinge_subgradient(fc, model.scores(x), train_set.y[order[b]]);
        simd::rank1_update(grad, rows, cols, g, x, scale);
      }
      simd::clamp(grad, cfg.gradient_clip, grad);
      const double lr = cfg.learning_rate *
                        std::pow(cfg.decay_rate, static_cast<double>(step) / static_cast<double>(cfg.decay_steps));
      simd::rank1_update(model.weights, 1, rows * cols, one, grad, -lr);
      ++step;
    }
    res.trace.push_back(stats(epoch));
    if (res.trace.back().validation_loss < best) {
      best = res.trace.back().validation_loss;
      res.model = model;
      res.best_epoch = epoch;
    }
  }
  return res;
}

SweepResult tau_sweep(const LinearModel& m, const Dataset& d, std::vector<double> taus,
                      std::optional<double> epsilon, bool trim) {
  if (taus.empty()) throw ConfigError("tau list is empty");
  std::sort(taus.begin(), taus.end());
  std::vector<LinkConfig> cfgs;
  for (double t : taus) cfgs.push_back(LinkConfig::make(m.k, t, epsilon));
  std::vector<PredictionSet> sets(taus.size(), PredictionSet(m.k));
  SweepResult res;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto u = m.scores(d.row(i));
    int prev = -1;
    for (std::size_t t = 0; t < cfgs.size(); ++t) {
      AbstainReport v = threshold_abstain_link(u, cfgs[t]);
      if (trim) v = trim_single_abstain(v, u);
      sets[t].add(v, d.y[i]);
      const int zeros = popcount(v.zeros);
      if (t > 0) {
        ++res.monotonicity_checks;
        if (zeros < prev) ++res.monotonicity_violations;
      }
      prev = zeros;
    }
  }
  for (std::size_t t = 0; t < taus.size(); ++t) {
    res.rows.push_back(SweepRow{taus[t], d.size() > 0 ? metrics(sets[t]) : Metrics{}});
    if (t > 0 && res.rows[t].metrics.rejection_rate < res.rows[t - 1].metrics.rejection_rate) {
      res.metrics_monotone = false;
    }
  }
  return res;
}

}  // namespace lovabs
