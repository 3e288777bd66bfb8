#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lovabs/bench.hpp"
#include "lovabs/text.hpp"

using namespace lovabs;

namespace {

struct Tally {
  double tp = 0, tn = 0, fp = 0, fn = 0, abs = 0, abs_pos = 0, abs_neg = 0;
};

Tally tally(const std::vector<std::string>& preds, const std::vector<std::string>& truth) {
  Tally t;
  for (std::size_t n = 0; n < preds.size(); ++n) {
    for (std::size_t i = 0; i < preds[n].size(); ++i) {
      const char v = preds[n][i], y = truth[n][i];
      if (v == '0') {
        ++t.abs;
        (y == '+' ? t.abs_pos : t.abs_neg) += 1;
      } else if (v == '+') {
        (y == '+' ? t.tp : t.fp) += 1;
      } else {
        (y == '-' ? t.tn : t.fn) += 1;
      }
    }
  }
  return t;
}

PredictionSet make_set(const std::vector<std::string>& preds, const std::vector<std::string>& truth) {
  PredictionSet s(static_cast<int>(preds.front().size()));
  for (std::size_t n = 0; n < preds.size(); ++n) s.add(parse_report(preds[n]), parse_label(truth[n]));
  return s;
}

std::string random_word(std::mt19937_64& rng, int k, const char* alphabet, int n) {
  std::string s;
  for (int i = 0; i < k; ++i) s += alphabet[rng() % static_cast<unsigned>(n)];
  return s;
}

}  // namespace

TEST_CASE("metrics on a single worked pair") {
  PredictionSet s(3);
  s.add(parse_report("+-0"), parse_label("+++"));
  const Metrics m = metrics(s);
  CHECK(m.accuracy == 0.5);
  CHECK(m.recall == 0.5);
  CHECK(m.precision == 1.0);
  CHECK(m.iou == 0.5);
  CHECK(m.rejection_rate == doctest::Approx(1.0 / 3));
  CHECK(m.rejection_rate_pos == 1.0);
  CHECK(m.rejection_rate_neg == 0.0);
  CHECK(m.undefined_flags.empty());
}

TEST_CASE("counts per outcome") {
  const Counts c = counts(parse_report("+-0+-"), parse_label("++---"));
  CHECK(c.tp == 0b00001);
  CHECK(c.fn == 0b00010);
  CHECK(c.fp == 0b01000);
  CHECK(c.tn == 0b10000);
}

TEST_CASE("undefined metrics are flagged") {
  PredictionSet s(2);
  s.add(parse_report("00"), parse_label("--"));
  const Metrics m = metrics(s);
  CHECK(m.accuracy == 0.0);
  CHECK(m.rejection_rate == 1.0);
  CHECK(m.rejection_rate_neg == 1.0);
  for (const char* name : {"accuracy", "recall", "precision", "iou"}) {
    CHECK(std::find(m.undefined_flags.begin(), m.undefined_flags.end(), name) != m.undefined_flags.end());
  }
  CHECK_THROWS_AS(metrics(PredictionSet(2)), DomainError);
  CHECK_THROWS(s.add(parse_report("0"), parse_label("--")));
}

TEST_CASE("pooled metrics agree with direct tallies") {
  std::mt19937_64 rng(131);
  for (int t = 0; t < 1000; ++t) {
    const int k = 1 + static_cast<int>(rng() % 5);
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<std::string> preds, truth;
    for (int i = 0; i < n; ++i) {
      preds.push_back(random_word(rng, k, "+-0", 3));
      truth.push_back(random_word(rng, k, "+-", 2));
    }
    preds.front()[0] = '0';
    const Tally x = tally(preds, truth);
    const Metrics m = metrics(make_set(preds, truth));
    const double kept = x.tp + x.tn + x.fp + x.fn;
    CHECK(m.accuracy == doctest::Approx(kept > 0 ? (x.tp + x.tn) / kept : 0.0));
    CHECK(m.recall == doctest::Approx(x.tp + x.fn > 0 ? x.tp / (x.tp + x.fn) : 0.0));
    CHECK(m.precision == doctest::Approx(x.tp + x.fp > 0 ? x.tp / (x.tp + x.fp) : 0.0));
    CHECK(m.iou == doctest::Approx(x.tp + x.fp + x.fn > 0 ? x.tp / (x.tp + x.fp + x.fn) : 0.0));
    CHECK(m.rejection_rate == doctest::Approx(x.abs / (n * k)));
    CHECK(m.rejection_rate_pos + m.rejection_rate_neg == doctest::Approx(1.0));
  }
}

TEST_CASE("synthetic data layout") {
  SynthConfig cfg;
  cfg.samples = 50;
  const Dataset d = synth_data(cfg);
  CHECK(d.size() == 50);
  CHECK(d.dim == 8);
  for (std::size_t n = 0; n < d.size(); ++n) {
    const auto x = d.row(n);
    CHECK(x[7] == 1.0);
    for (int j = 0; j < 4; ++j) CHECK(x[static_cast<std::size_t>(j)] == d.y[n].sign(j) * 1.0);
  }
  const Dataset again = synth_data(cfg);
  CHECK(again.x == d.x);
  CHECK(again.y == d.y);

  SynthConfig bad = cfg;
  bad.features = 4;
  CHECK_THROWS_AS(synth_data(bad), ConfigError);
  bad = cfg;
  bad.noise = {0.1};
  CHECK_THROWS_AS(synth_data(bad), ConfigError);
}

TEST_CASE("correlated labels agree more often") {
  SynthConfig cfg;
  cfg.samples = 4000;
  cfg.correlation = 0.9;
  const Dataset d = synth_data(cfg);
  int agree = 0;
  for (const auto& y : d.y) agree += (y.sign(0) == y.sign(1));
  CHECK(agree > 3400);
}

TEST_CASE("split sizes and disjointness") {
  SynthConfig cfg;
  cfg.samples = 100;
  const Dataset d = synth_data(cfg);
  const Splits s = split(d, 7);
  CHECK(s.train.size() == 80);
  CHECK(s.validation.size() == 10);
  CHECK(s.test.size() == 10);
  CHECK(split(d, 7).test.x == s.test.x);
}

TEST_CASE("config validation") {
  TrainConfig cfg;
  CHECK_NOTHROW(check_config(cfg));
  cfg.learning_rate = 0;
  CHECK_THROWS_AS(check_config(cfg), ConfigError);
  cfg = TrainConfig{};
  cfg.epochs = -1;
  CHECK_THROWS_AS(check_config(cfg), ConfigError);
  cfg = TrainConfig{};
  cfg.taus = {1.5};
  CHECK_THROWS_AS(check_config(cfg), ConfigError);
}

TEST_CASE("training drives separable data to zero hinge") {
  TrainConfig cfg;
  cfg.epochs = 200;
  const Dataset d = synth_data(cfg.data);
  const Splits s = split(d, cfg.seed);
  for (const auto& fc : {PolymatroidCollection::symmetric(make_power_card(4, 0.5)), make_jaccard(4)}) {
    const TrainResult r = train(cfg, fc, s.train, s.validation);
    CHECK(r.trace.size() == 201);
    CHECK(r.trace.front().train_loss == doctest::Approx(mean_hinge(fc, LinearModel{4, 8, std::vector<double>(32, 0.0)}, s.train)));
    CHECK(mean_hinge(fc, r.model, s.train) < 1e-2);
    const TrainResult again = train(cfg, fc, s.train, s.validation);
    CHECK(again.model.weights == r.model.weights);
  }
}

TEST_CASE("full-batch small steps never increase the training loss") {
  TrainConfig cfg;
  cfg.epochs = 40;
  cfg.batch_size = 0;
  cfg.learning_rate = 1e-3;
  cfg.data.samples = 200;
  const Dataset d = synth_data(cfg.data);
  const auto fc = PolymatroidCollection::symmetric(make_power_card(4, 0.5));
  const TrainResult r = train(cfg, fc, d, Dataset{});
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].train_loss <= r.trace[i - 1].train_loss + 1e-12);
}

TEST_CASE("tau sweep abstains more as tau grows") {
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.data.noise = {0.0, 0.5, 1.0, 2.0};
  const Dataset d = synth_data(cfg.data);
  const Splits s = split(d, cfg.seed);
  const auto fc = PolymatroidCollection::symmetric(make_power_card(4, 0.5));
  const TrainResult r = train(cfg, fc, s.train, s.validation);
  const SweepResult sw = tau_sweep(r.model, s.test, {1.0, 0.0, 0.5}, std::nullopt, false);
  REQUIRE(sw.rows.size() == 3);
  CHECK(sw.rows[0].tau == 0.0);
  CHECK(sw.rows[2].tau == 1.0);
  CHECK(sw.monotonicity_checks == 2 * s.test.size());
  CHECK(sw.monotonicity_violations == 0);
  CHECK(sw.rows[0].metrics.rejection_rate <= sw.rows[2].metrics.rejection_rate);
  const SweepResult again = tau_sweep(r.model, s.test, {0.0, 0.5, 1.0}, std::nullopt, false);
  for (std::size_t i = 0; i < 3; ++i) CHECK(again.rows[i].metrics.iou == sw.rows[i].metrics.iou);
}
