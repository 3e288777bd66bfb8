#include "lovabs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lovabs/links.hpp"
#include "lovabs/lovasz.hpp"
#include "lovabs/text.hpp"

namespace lovabs {

namespace {

constexpr int kMaxGridK = 4;
constexpr int kMaxMatrixK = 8;
constexpr double kEmbeddingTolerance = 1e-12;

void compose(int remaining, std::size_t slot, std::vector<int>& parts, int m,
             std::vector<LabelDistribution>& out, int k) {
  if (slot + 1 == parts.size()) {
    parts[slot] = remaining;
    std::vector<double> probs(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) probs[i] = static_cast<double>(parts[i]) / m;
    out.emplace_back(k, std::move(probs));
    return;
  }
  for (int c = remaining; c >= 0; --c) {
    parts[slot] = c;
    compose(remaining - c, slot + 1, parts, m, out, k);
  }
}

std::vector<std::string> report_strings(const std::vector<AbstainReport>& all,
                                        const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(format_report(all[i]));
  return out;
}

std::vector<double> as_vector(const LabelDistribution& p) {
  return {p.probs().begin(), p.probs().end()};
}

/// Best and runner-up values; runner-up is +inf for a single report.
std::pair<double, double> two_smallest(const std::vector<double>& values) {
  double a = std::numeric_limits<double>::infinity();
  double b = a;
  for (double x : values) {
    if (x < a) {
      b = a;
      a = x;
    } else if (x < b) {
      b = x;
    }
  }
  return {a, b};
}

std::size_t index_of(const std::vector<AbstainReport>& reports, const AbstainReport& v) {
  const auto it = std::find(reports.begin(), reports.end(), v);
  if (it == reports.end()) throw DomainError("report not in enumeration");
  return static_cast<std::size_t>(it - reports.begin());
}

bool contains(const std::vector<std::size_t>& idx, std::size_t i) {
  return std::find(idx.begin(), idx.end(), i) != idx.end();
}

void check_matrix_k(int k) {
  if (k > kMaxMatrixK) throw CapacityError("loss matrices are limited to k <= 8");
}

LossMatrix plain_matrix(const PolymatroidCollection& fc) {
  return LossMatrix(enumerate_reports(fc.k(), ReportFamily::labels), fc.k(),
                    [&fc](const AbstainReport& v, const Label& y) {
                      return target_plain(fc, v.as_label(), y);
                    });
}

/// V-argmin at p is exactly {target} with a margin above kTieTolerance.
bool unique_minimizer(const LossMatrix& m, const LabelDistribution& p, std::size_t target) {
  const ExpectedLosses e = m.expected(p);
  if (e.argmin.size() != 1 || e.argmin.front() != target) return false;
  const auto [best, second] = two_smallest(e.values);
  return second - best > kTieTolerance;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<LabelDistribution> grid_distributions(int k, int m) {
  if (k < 1) throw DomainError("grid: k must be >= 1");
  if (k > kMaxGridK) throw CapacityError("grid distributions are limited to k <= 4");
  if (m < 1) throw DomainError("grid: m must be >= 1");
  std::vector<int> parts(std::size_t{1} << k, 0);
  std::vector<LabelDistribution> out;
  compose(m, 0, parts, m, out, k);
  return out;
}

int default_grid(int k) { return k <= 3 ? 8 : 4; }

void VerificationReport::record_failure(Witness w) {
  pass = false;
  ++failures;
  if (!witness) witness = std::move(w);
}

LossMatrix::LossMatrix(std::vector<AbstainReport> reports, int k, const ReportLoss& loss)
    : reports_(std::move(reports)), labels_(std::size_t{1} << k) {
  check_matrix_k(k);
  values_.resize(reports_.size() * labels_);
  for (std::size_t r = 0; r < reports_.size(); ++r) {
    for (Mask y = 0; y < labels_; ++y) values_[r * labels_ + y] = loss(reports_[r], Label{k, y});
  }
}

ExpectedLosses LossMatrix::expected(const LabelDistribution& p) const {
  if (p.probs().size() != labels_) throw DomainError("distribution size does not match loss matrix");
  ExpectedLosses out;
  out.values.assign(reports_.size(), 0.0);
  for (std::size_t r = 0; r < reports_.size(); ++r) {
    double total = 0.0;
    for (Mask y = 0; y < labels_; ++y) {
      if (p[y] != 0.0) total += p[y] * values_[r * labels_ + y];
    }
    out.values[r] = total;
  }
  out.argmin = argmin_set(out.values);
  out.best = two_smallest(out.values).first;
  return out;
}

LossMatrix hinge_matrix(const PolymatroidCollection& fc, ReportFamily family) {
  return LossMatrix(enumerate_reports(fc.k(), family), fc.k(),
                    [&fc](const AbstainReport& v, const Label& y) { return hinge(fc, to_vector(v), y); });
}

LossMatrix abstain_matrix(const PolymatroidCollection& fc, ReportFamily family) {
  return LossMatrix(enumerate_reports(fc.k(), family), fc.k(),
                    [&fc](const AbstainReport& v, const Label& y) { return target_abstain(fc, v, y); });
}

std::vector<AbstainReport> abstain_argmin(const PolymatroidCollection& fc, const LabelDistribution& p) {
  const LossMatrix m = abstain_matrix(fc);
  const ExpectedLosses e = m.expected(p);
  std::vector<AbstainReport> out;
  for (std::size_t i : e.argmin) out.push_back(m.reports()[i]);
  return out;
}

// ---------------------------------------------------------------------------

VerificationReport verify_embedding(const PolymatroidCollection& fc, int grid_m) {
  const int k = fc.k();
  if (k > 4) throw CapacityError("verify_embedding is limited to k <= 4");
  VerificationReport rep;
  rep.check = "embedding";

  const LossMatrix h = hinge_matrix(fc);
  const LossMatrix a = abstain_matrix(fc);
  const auto& reports = h.reports();
  for (std::size_t r = 0; r < reports.size(); ++r) {
    for (Mask y = 0; y <= full_mask(k); ++y) {
      ++rep.cases;
      const double hv = h.at(r, y);
      const double av = a.at(r, y);
      if (std::fabs(hv - av) > kEmbeddingTolerance) {
        rep.record_failure(Witness{{}, {format_report(reports[r]), format_label(Label{k, y})}, {hv, av},
                                   "hinge differs from abstain loss"});
      }
    }
  }
  if (k > 3) {
    rep.notes.push_back("distribution-level checks skipped for k > 3");
    return rep;
  }

  // Lattice of step 0.25 over [-1, 1]^k.
  const int side = 9;
  std::size_t lattice_size = 1;
  for (int i = 0; i < k; ++i) lattice_size *= side;
  const std::size_t labels = std::size_t{1} << k;
  std::vector<double> lattice_loss(lattice_size * labels);
  std::vector<double> u(static_cast<std::size_t>(k));
  for (std::size_t idx = 0; idx < lattice_size; ++idx) {
    std::size_t rest = idx;
    for (int i = 0; i < k; ++i) {
      u[static_cast<std::size_t>(i)] = -1.0 + 0.25 * static_cast<double>(rest % side);
      rest /= side;
    }
    for (Mask y = 0; y < labels; ++y) lattice_loss[idx * labels + y] = hinge(fc, u, Label{k, y});
  }

  std::size_t label_representative = 0;
  const auto grid = grid_distributions(k, grid_m);
  for (const auto& p : grid) {
    ++rep.cases;
    const ExpectedLosses eh = h.expected(p);
    const ExpectedLosses ea = a.expected(p);
    if (eh.argmin != ea.argmin) {
      rep.record_failure(Witness{as_vector(p), report_strings(reports, eh.argmin), {eh.best, ea.best},
                                 "hinge and abstain argmins differ"});
    }
    bool has_label = false;
    for (std::size_t i : eh.argmin) has_label = has_label || reports[i].is_label();
    if (has_label) ++label_representative;

    double lattice_best = std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < lattice_size; ++idx) {
      double total = 0.0;
      for (Mask y = 0; y < labels; ++y) total += p[y] * lattice_loss[idx * labels + y];
      lattice_best = std::min(lattice_best, total);
    }
    if (lattice_best < eh.best - kTieTolerance) {
      rep.record_failure(Witness{as_vector(p), report_strings(reports, eh.argmin), {eh.best, lattice_best},
                                 "a lattice point beats every report"});
    }
  }
  rep.notes.push_back("labels alone attain the optimum at " + std::to_string(label_representative) + " of " +
                      std::to_string(grid.size()) + " grid distributions");
  if (label_representative == grid.size()) rep.notes.push_back("labels alone are representative on this grid");
  return rep;
}

VerificationReport verify_representative(const PolymatroidCollection& fc,
                                         const std::vector<AbstainReport>& reports,
                                         const std::string& family_name, int grid_m) {
  const int k = fc.k();
  if (k > 3) throw CapacityError("verify_representative is limited to k <= 3");
  VerificationReport rep;
  rep.check = "representative:" + family_name;
  const LossMatrix h = hinge_matrix(fc);
  const auto& all = h.reports();
  std::vector<std::size_t> members;
  for (const auto& v : reports) members.push_back(index_of(all, v));

  for (const auto& p : grid_distributions(k, grid_m)) {
    ++rep.cases;
    const ExpectedLosses e = h.expected(p);
    const bool hit = std::any_of(members.begin(), members.end(), [&](std::size_t i) { return contains(e.argmin, i); });
    if (!hit) {
      double best_member = std::numeric_limits<double>::infinity();
      for (std::size_t i : members) best_member = std::min(best_member, e.values[i]);
      rep.record_failure(Witness{as_vector(p), report_strings(all, e.argmin), {e.best, best_member},
                                 "no member of the set is optimal"});
    }
  }
  return rep;
}

LabelDistribution tightness_witness(const AbstainReport& v) {
  const int k = v.k;
  const double mass = std::ldexp(1.0, -popcount(v.zeros));
  std::vector<double> probs(std::size_t{1} << k, 0.0);
  const Mask fixed = full_mask(k) & ~v.zeros;
  for (Mask y = 0; y <= full_mask(k); ++y) {
    if ((y & fixed) == (v.positives & fixed)) probs[y] = mass;
  }
  return LabelDistribution(k, std::move(probs));
}

VerificationReport verify_tightness(const SetFunction& f, int grid_m) {
  const int k = f.k();
  if (k > 4) throw CapacityError("verify_tightness is limited to k <= 4");
  const PolymatroidReport pr = validate_polymatroid(f, true);
  if (!pr.valid() || !pr.strict()) {
    throw ValidationError("tightness needs a strictly submodular, strictly increasing polymatroid");
  }
  VerificationReport rep;
  rep.check = "tightness";
  const PolymatroidCollection fc = PolymatroidCollection::symmetric(f);
  const LossMatrix a = abstain_matrix(fc);
  const auto& all = a.reports();

  for (std::size_t r = 0; r < all.size(); ++r) {
    if (popcount(all[r].zeros) == 1) continue;
    ++rep.cases;
    const LabelDistribution p = tightness_witness(all[r]);
    if (!unique_minimizer(a, p, r)) {
      const ExpectedLosses e = a.expected(p);
      rep.record_failure(Witness{as_vector(p), report_strings(all, e.argmin), {e.values[r], e.best},
                                 "report " + format_report(all[r]) + " is not the unique minimizer at its witness"});
    }
  }

  for (const auto& p : grid_distributions(k, grid_m)) {
    const ExpectedLosses e = a.expected(p);
    for (std::size_t r = 0; r < all.size(); ++r) {
      const AbstainReport& v = all[r];
      if (popcount(v.zeros) != 1) continue;
      ++rep.cases;
      const std::size_t plus = index_of(all, AbstainReport{k, v.positives | v.zeros, 0});
      const std::size_t minus = index_of(all, AbstainReport{k, v.positives, 0});
      const double lv = e.values[r];
      const double lp = e.values[plus];
      const double lm = e.values[minus];
      const bool dominated = std::min(lp, lm) <= lv + kTieTolerance;
      const bool averaged = std::fabs(lv - 0.5 * (lp + lm)) <= kTieTolerance;
      const bool closed = !contains(e.argmin, r) || (contains(e.argmin, plus) && contains(e.argmin, minus));
      if (!dominated || !averaged || !closed) {
        rep.record_failure(Witness{as_vector(p), {format_report(v), format_report(all[plus]), format_report(all[minus])},
                                   {lv, lp, lm}, "single-abstain report not dominated by its completions"});
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

SymmetricCounterexample counterexample_symmetric(const SetFunction& f) {
  const PolymatroidReport pr = validate_polymatroid(f);
  if (!pr.valid()) throw ValidationError("counterexample_symmetric needs a polymatroid");
  SymmetricCounterexample out;
  out.report.check = "counterexample_symmetric";
  for (int i = 0; i < f.k(); ++i) {
    if (f(Mask{1} << i) > kTieTolerance) out.kept_elements.push_back(i);
  }
  if (out.kept_elements.empty()) {
    out.consistent_case = true;
    out.report.pass = false;
    out.report.notes.push_back("f vanishes identically; modular, so the sign link is consistent");
    return out;
  }
  const SetFunction g = restrict_to(f, out.kept_elements);
  const int k = g.k();
  check_matrix_k(k);
  if (validate_polymatroid(g).modular) {
    out.consistent_case = true;
    out.report.pass = false;
    out.report.notes.push_back("f is modular; the sign link is consistent and no counterexample exists");
    return out;
  }
  if (static_cast<int>(out.kept_elements.size()) < f.k()) {
    out.report.notes.push_back("discarded " + std::to_string(f.k() - k) + " zero-singleton coordinate(s)");
  }

  out.mean = mean_value(g);
  out.full_value = g(g.full());
  out.epsilon = 0.5 * (1.0 - out.full_value / (2.0 * out.mean));
  out.y = Label::all_positive(k);
  const LabelDistribution py = mix(uniform(k), point_mass(out.y), out.epsilon);
  out.p_y = as_vector(py);

  const PolymatroidCollection fc = PolymatroidCollection::symmetric(g);
  const LossMatrix a = abstain_matrix(fc);
  const LossMatrix h = hinge_matrix(fc);
  const LossMatrix plain = plain_matrix(fc);
  const auto& all = a.reports();

  const ExpectedLosses ea = a.expected(py);
  std::optional<std::size_t> pick;
  for (std::size_t i : ea.argmin) {
    if (all[i].is_label()) {
      out.report.record_failure(Witness{out.p_y, {format_report(all[i])}, {ea.values[i]},
                                        "a label is abstain-optimal at p^y"});
    } else if (!pick) {
      pick = i;
    }
  }
  ++out.report.cases;
  if (!pick) {
    out.report.record_failure(Witness{out.p_y, report_strings(all, ea.argmin), {ea.best}, "no abstaining optimum"});
    return out;
  }
  out.v = all[*pick];

  out.y_prime = out.y;
  for (int i = 0; i < k; ++i) {
    if (has(out.v.zeros, i)) out.y_prime.bits ^= Mask{1} << i;
  }
  const LabelDistribution pyp = flip(py, out.y.times(out.y_prime));
  out.p_y_prime = as_vector(pyp);

  const std::size_t zero_idx = index_of(all, AbstainReport::all_abstain(k));
  const double label_value = (1.0 - out.epsilon) * 2.0 * out.mean;
  ++out.report.cases;
  if (!(ea.values[zero_idx] < label_value - kTieTolerance)) {
    out.report.record_failure(Witness{out.p_y, {"all-abstain"}, {ea.values[zero_idx], label_value},
                                      "abstaining everywhere does not beat the labels"});
  }

  const auto& labels = plain.reports();
  for (const auto& [p, target] : {std::pair{py, out.y}, std::pair{pyp, out.y_prime}}) {
    ++out.report.cases;
    const std::size_t t = index_of(labels, AbstainReport::from_label(target));
    if (!unique_minimizer(plain, p, t)) {
      const ExpectedLosses e = plain.expected(p);
      out.report.record_failure(Witness{as_vector(p), report_strings(labels, e.argmin), e.values,
                                        "label " + format_label(target) + " is not the unique set-loss minimizer"});
    }
    ++out.report.cases;
    const ExpectedLosses eh = h.expected(p);
    if (!contains(eh.argmin, *pick)) {
      out.report.record_failure(Witness{as_vector(p), report_strings(all, eh.argmin), {eh.values[*pick], eh.best},
                                        "v is not hinge-optimal"});
    }
  }
  if (out.report.pass) {
    out.report.witness = Witness{out.p_y,
                                 {format_report(out.v), format_label(out.y), format_label(out.y_prime)},
                                 {out.epsilon, ea.values[*pick], label_value},
                                 "v is hinge-optimal at p^y and p^y' while y and y' are the unique set-loss "
                                 "minimizers there"};
  }
  return out;
}

AsymmetricCounterexample counterexample_asymmetric(const PolymatroidCollection& fc) {
  const int k = fc.k();
  if (k < 3 || k > 4) throw CapacityError("counterexample_asymmetric needs 3 <= k <= 4");
  const Condition1Report c1 = check_condition1(fc);
  if (!c1.pass) throw ValidationError("collection violates the complementary-label condition: " + c1.reason);

  AsymmetricCounterexample out;
  out.report.check = "counterexample_asymmetric";
  const LossMatrix a = abstain_matrix(fc);
  const LossMatrix h = hinge_matrix(fc);
  const LossMatrix plain = plain_matrix(fc);
  const auto& all = a.reports();
  const auto& labels = plain.reports();
  const std::size_t zero_idx = index_of(all, AbstainReport::all_abstain(k));
  const std::size_t ones_idx = index_of(all, AbstainReport{k, full_mask(k), 0});

  {
    ++out.report.cases;
    const ExpectedLosses e = a.expected(uniform(k));
    const bool has_zero = contains(e.argmin, zero_idx);
    const bool within = std::all_of(e.argmin.begin(), e.argmin.end(),
                                    [&](std::size_t i) { return i == zero_idx || i == ones_idx; });
    if (!has_zero || !within) {
      out.report.record_failure(Witness{as_vector(uniform(k)), report_strings(all, e.argmin), {e.best},
                                        "uniform-distribution argmin is not within {0, 1}"});
    }
    out.report.notes.push_back("uniform argmin: " + [&] {
      std::string s;
      for (const auto& r : report_strings(all, e.argmin)) s += (s.empty() ? "" : " ") + r;
      return s;
    }());
  }

  const LabelDistribution tilt = point_mass(Label::all_negative(k));
  std::optional<LabelDistribution> p;
  for (int e = 3; e <= 12 && !p; ++e) {
    const double eps = std::ldexp(1.0, -e);
    LabelDistribution cand = mix(uniform(k), tilt, eps);
    ++out.report.cases;
    if (unique_minimizer(a, cand, zero_idx)) {
      out.epsilon = eps;
      p = std::move(cand);
    }
  }
  if (!p) {
    out.report.record_failure(Witness{{}, {}, {}, "no epsilon in 2^-3..2^-12 isolates the all-abstain report"});
    return out;
  }

  out.sign_of_zero = sign_star(std::vector<double>(static_cast<std::size_t>(k), 0.0));
  const std::size_t hat = index_of(labels, AbstainReport::from_label(out.sign_of_zero));
  ExpectedLosses g = plain.expected(*p);

  if (!contains(g.argmin, hat)) {
    out.scenario = 1;
    out.violating_label = out.sign_of_zero;
  } else if (g.argmin.size() < labels.size()) {
    out.scenario = 1;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!contains(g.argmin, i)) {
        out.violating_label = labels[i].as_label();
        break;
      }
    }
  } else {
    out.scenario = 2;
    const LabelDistribution opposite = point_mass(out.sign_of_zero.negated());
    std::optional<LabelDistribution> p2;
    for (int e = 3; e <= 12 && !p2; ++e) {
      const double eps = std::ldexp(1.0, -e);
      LabelDistribution cand = mix(*p, opposite, eps);
      ++out.report.cases;
      if (unique_minimizer(a, cand, zero_idx) && !contains(plain.expected(cand).argmin, hat)) {
        out.epsilon_prime = eps;
        p2 = std::move(cand);
      }
    }
    if (!p2) {
      out.report.record_failure(Witness{as_vector(*p), {}, {}, "no second tilt separates sign*(0) from the optimum"});
      return out;
    }
    p = std::move(p2);
    g = plain.expected(*p);
    out.violating_label = out.sign_of_zero;
  }

  out.distribution = as_vector(*p);
  out.label_argmin = report_strings(labels, g.argmin);

  // Hinge at shrinking multiples of the violating label approaches the optimum.
  const ExpectedLosses eh = h.expected(*p);
  ++out.report.cases;
  if (eh.argmin.size() != 1 || eh.argmin.front() != zero_idx) {
    out.report.record_failure(Witness{out.distribution, report_strings(all, eh.argmin), {eh.best},
                                      "all-abstain is not the unique hinge minimizer over reports"});
  }
  const std::vector<double> yv = to_vector(*out.violating_label);
  std::vector<double> gaps;
  for (double scale : {1e-2, 1e-4, 1e-6}) {
    std::vector<double> u(yv);
    for (double& x : u) x *= scale;
    gaps.push_back(expected_hinge(fc, u, *p) - eh.best);
  }
  ++out.report.cases;
  if (!(gaps.back() < 1e-5 && gaps.back() <= gaps.front())) {
    out.report.record_failure(Witness{out.distribution, {format_label(*out.violating_label)}, gaps,
                                      "shrinking multiples do not approach the optimum"});
  }
  if (out.report.pass) {
    std::vector<double> values{out.epsilon, eh.best};
    values.insert(values.end(), gaps.begin(), gaps.end());
    out.report.witness = Witness{out.distribution,
                                 {format_report(all[zero_idx]), format_label(*out.violating_label)},
                                 values,
                                 "all-abstain is the unique hinge optimum; points with sign " +
                                     format_label(*out.violating_label) +
                                     " approach it yet that label is not set-loss optimal"};
  }
  return out;
}

}  // namespace lovabs
