#include "lovabs/multiclass.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include "lovabs/lovasz.hpp"
#include "lovabs/targets.hpp"
#include "lovabs/text.hpp"

namespace lovabs {

namespace {

constexpr int kMaxSymmetricLift = 12;
constexpr int kMaxLabelLift = 10;

int checked_bits(int classes) {
  if (classes < 2 || !std::has_single_bit(static_cast<unsigned>(classes))) {
    throw ConfigError("class count must be a power of two >= 2, got " + std::to_string(classes));
  }
  return std::countr_zero(static_cast<unsigned>(classes));
}

std::string set_string(Mask s, int n) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int i = 0; i < n; ++i) {
    if (!has(s, i)) continue;
    os << (first ? "" : ",") << (i + 1);
    first = false;
  }
  os << '}';
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// BlockCodec

BlockCodec::BlockCodec(int classes) : classes_(classes), bits_(checked_bits(classes)) {}

Mask BlockCodec::code(int c) const {
  if (c < 1 || c > classes_) throw DomainError("class " + std::to_string(c) + " outside [1, C]");
  const unsigned value = static_cast<unsigned>(c % classes_);
  Mask out = 0;
  for (int t = 0; t < bits_; ++t) {
    if ((value >> (bits_ - 1 - t)) & 1u) out |= Mask{1} << t;
  }
  return out;
}

int BlockCodec::decode(Mask block) const {
  if (block >= (Mask{1} << bits_)) throw DomainError("block code out of range");
  unsigned value = 0;
  for (int t = 0; t < bits_; ++t) {
    if (has(block, t)) value |= 1u << (bits_ - 1 - t);
  }
  return value == 0 ? classes_ : static_cast<int>(value);
}

Label BlockCodec::encode(const ClassVector& y) const {
  check_class_vector(y, classes_, false);
  const int k = static_cast<int>(y.size());
  if (k * bits_ > kMaxK) throw CapacityError("encoded label exceeds " + std::to_string(kMaxK) + " bits");
  Mask bits = 0;
  for (int i = 0; i < k; ++i) bits |= code(y[static_cast<std::size_t>(i)]) << (bits_ * i);
  return Label{k * bits_, bits};
}

ClassVector BlockCodec::decode(const Label& y) const {
  if (y.k % bits_ != 0) throw DomainError("label length is not a multiple of the block size");
  const Mask block = full_mask(bits_);
  ClassVector out(static_cast<std::size_t>(y.k / bits_));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = decode((y.bits >> (bits_ * static_cast<int>(i))) & block);
  }
  return out;
}

Mask BlockCodec::touched_blocks(Mask s, int k) const {
  const Mask block = full_mask(bits_);
  Mask out = 0;
  for (int i = 0; i < k; ++i) {
    if ((s >> (bits_ * i)) & block) out |= Mask{1} << i;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Class-level set functions

ClassCollection ClassCollection::shared(SetFunction g, int classes) {
  checked_bits(classes);
  ClassCollection c;
  c.k_ = g.k();
  c.classes_ = classes;
  c.shared_ = std::move(g);
  return c;
}

ClassCollection ClassCollection::class_weighted(int k, std::vector<double> weights_by_class) {
  if (k < 1 || k > kMaxK) throw DomainError("k out of range");
  checked_bits(static_cast<int>(weights_by_class.size()));
  for (double w : weights_by_class) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("class weights must be finite and >= 0");
  }
  ClassCollection c;
  c.k_ = k;
  c.classes_ = static_cast<int>(weights_by_class.size());
  c.weights_ = std::move(weights_by_class);
  return c;
}

double ClassCollection::eval(const ClassVector& y, Mask s) const {
  if (static_cast<int>(y.size()) != k_) throw DomainError("class label length does not match k");
  if (s > full_mask(k_)) throw DomainError("subset out of range");
  if (shared_) return shared_->eval(s);
  double total = 0.0;
  for (int i = 0; i < k_; ++i) {
    if (has(s, i)) total += weights_[static_cast<std::size_t>(y[static_cast<std::size_t>(i)] - 1)];
  }
  return total;
}

void check_class_vector(const ClassVector& y, int classes, bool allow_abstain) {
  if (y.empty()) throw DomainError("empty class vector");
  if (y.size() > static_cast<std::size_t>(kMaxK)) throw CapacityError("class vector too long");
  const int lo = allow_abstain ? 0 : 1;
  for (int c : y) {
    if (c < lo || c > classes) throw DomainError("class entry " + std::to_string(c) + " out of range");
  }
}

PolymatroidCollection lift_polymatroid(const ClassCollection& g, const BlockCodec& codec) {
  const int k = g.k();
  const int n = k * codec.bits();
  if (g.classes() != codec.classes()) throw ConfigError("collection and codec disagree on C");
  if (n > (g.is_shared() ? kMaxSymmetricLift : kMaxLabelLift)) {
    throw CapacityError("lifted ground set of size " + std::to_string(n) + " is too large");
  }
  const std::size_t size = std::size_t{1} << n;
  auto table_for = [&](const ClassVector& y) {
    std::vector<double> values(size);
    for (Mask s = 0; s < size; ++s) values[s] = g.eval(y, codec.touched_blocks(s, k));
    return SetFunction::from_table(n, std::move(values));
  };
  if (g.is_shared()) return PolymatroidCollection::symmetric(table_for(ClassVector(static_cast<std::size_t>(k), 1)));
  std::vector<PolymatroidCollection::Member> members(size);
  for (Mask y = 0; y < size; ++y) {
    members[y] = std::make_shared<const SetFunction>(table_for(codec.decode(Label{n, y})));
  }
  return PolymatroidCollection::from_members(n, std::move(members));
}

double multiclass_target(const ClassCollection& g, const ClassVector& v, const ClassVector& y) {
  check_class_vector(v, g.classes(), true);
  check_class_vector(y, g.classes(), false);
  if (v.size() != y.size()) throw DomainError("report and label lengths differ");
  Mask miss = 0;
  Mask abst = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != y[i]) miss |= Mask{1} << i;
    if (v[i] == 0) abst |= Mask{1} << i;
  }
  return g.eval(y, miss & ~abst) + g.eval(y, miss);
}

double multiclass_surrogate(const PolymatroidCollection& lifted, const BlockCodec& codec,
                            std::span<const double> u, const ClassVector& y) {
  return hinge(lifted, u, codec.encode(y));
}

ClassVector trimmed_link(std::span<const double> u, const LinkConfig& cfg, const BlockCodec& codec) {
  const int d = codec.bits();
  if (u.empty() || u.size() % static_cast<std::size_t>(d) != 0) {
    throw DomainError("score length is not a positive multiple of the block size");
  }
  const AbstainReport v = threshold_abstain_link(u, cfg);
  const int k = v.k / d;
  const Mask block = full_mask(d);
  ClassVector out(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    if ((v.zeros >> (d * i)) & block) continue;
    out[static_cast<std::size_t>(i)] = codec.decode((v.positives >> (d * i)) & block);
  }
  return out;
}

namespace {

std::vector<ClassVector> enumerate_vectors(int k, int lo, int hi) {
  if (k < 1) throw DomainError("k must be >= 1");
  const double count = std::pow(static_cast<double>(hi - lo + 1), k);
  if (count > 1e6) throw CapacityError("too many class vectors to enumerate");
  std::vector<ClassVector> out;
  ClassVector cur(static_cast<std::size_t>(k), lo);
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == hi) cur[static_cast<std::size_t>(i--)] = lo;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace

std::vector<ClassVector> enumerate_class_reports(int k, int classes) { return enumerate_vectors(k, 0, classes); }
std::vector<ClassVector> enumerate_class_labels(int k, int classes) { return enumerate_vectors(k, 1, classes); }

std::string format_classes(const ClassVector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += v[i] == 0 ? std::string("_") : std::to_string(v[i]);
  }
  return out;
}

ClassVector parse_classes(std::string_view s, bool allow_abstain) {
  ClassVector out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t end = std::min(s.find(',', pos), s.size());
    std::string_view tok = s.substr(pos, end - pos);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
    if (tok == "_") {
      out.push_back(0);
    } else {
      int value = 0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw DomainError("cannot parse class entry '" + std::string(tok) + "'");
      }
      out.push_back(value);
    }
    if (out.back() == 0 && !allow_abstain) throw DomainError("abstain entry not allowed here");
    if (out.back() < 0) throw DomainError("class entries must be >= 0");
    if (end == s.size()) break;
    pos = end + 1;
  }
  if (out.size() > static_cast<std::size_t>(kMaxK)) throw CapacityError("class vector too long");
  return out;
}

// ---------------------------------------------------------------------------
// Block domination and the multiclass calibration sweep

VerificationReport verify_block_domination(const ClassCollection& g, const BlockCodec& codec) {
  const int k = g.k();
  const int d = codec.bits();
  const int n = d * k;
  if (n > 9) throw CapacityError("block domination check is limited to dk <= 9");
  VerificationReport rep;
  rep.check = "block-domination";
  const PolymatroidCollection f = lift_polymatroid(g, codec);
  const Mask block = full_mask(d);
  for (const AbstainReport& v : enumerate_reports(n, ReportFamily::all)) {
    for (int i = 0; i < k; ++i) {
      const Mask z = (v.zeros >> (d * i)) & block;
      if (z == 0 || z == block) continue;
      const Mask whole = block << (d * i);
      const AbstainReport w{n, v.positives & ~whole, v.zeros | whole};
      for (Mask y = 0; y <= full_mask(n); ++y) {
        ++rep.cases;
        const Label lab{n, y};
        const double partial = target_abstain(f, v, lab);
        const double full = target_abstain(f, w, lab);
        if (full > partial + kTieTolerance) {
          rep.record_failure(Witness{{}, {format_report(v), format_report(w), format_label(lab)}, {partial, full},
                                     "abstaining on block " + std::to_string(i + 1) + " costs more"});
        }
      }
    }
  }
  return rep;
}

VerificationReport verify_trimmed_link_calibration(const ClassCollection& g, const BlockCodec& codec,
                                                   const CalibrationSweepOptions& opt) {
  const int k = g.k();
  const int n = codec.bits() * k;
  if (n > 3) throw CapacityError("multiclass calibration sweep is limited to dk <= 3");
  VerificationReport rep;
  rep.check = "multiclass-calibration";
  const PolymatroidCollection f = lift_polymatroid(g, codec);
  const LossMatrix h = hinge_matrix(f);
  const auto& binary = h.reports();

  const auto reports = enumerate_class_reports(k, codec.classes());
  std::vector<ClassVector> labels(std::size_t{1} << n);
  for (Mask y = 0; y < labels.size(); ++y) labels[y] = codec.decode(Label{n, y});
  std::vector<double> target(reports.size() * labels.size());
  for (std::size_t r = 0; r < reports.size(); ++r) {
    for (std::size_t y = 0; y < labels.size(); ++y) {
      target[r * labels.size() + y] = multiclass_target(g, reports[r], labels[y]);
    }
  }

  std::mt19937_64 rng(opt.seed);
  const double eps = LinkConfig::make(n, 0.0, opt.epsilon).epsilon;
  std::uniform_real_distribution<double> jitter(-opt.shrink * eps, opt.shrink * eps);
  std::vector<LinkConfig> cfgs;
  for (double tau : opt.taus) cfgs.push_back(LinkConfig::make(n, tau, eps));

  for (const auto& p : grid_distributions(n, opt.grid_m)) {
    std::vector<double> expected(reports.size(), 0.0);
    for (std::size_t r = 0; r < reports.size(); ++r) {
      for (std::size_t y = 0; y < labels.size(); ++y) expected[r] += p[static_cast<Mask>(y)] * target[r * labels.size() + y];
    }
    const auto best = argmin_set(expected);
    for (std::size_t m : h.expected(p).argmin) {
      const std::vector<double> base = to_vector(binary[m]);
      for (int t = 0; t < opt.perturbations; ++t) {
        std::vector<double> u(base);
        for (double& x : u) x += jitter(rng);
        for (const LinkConfig& cfg : cfgs) {
          ++rep.cases;
          const ClassVector v = trimmed_link(u, cfg, codec);
          const auto idx = static_cast<std::size_t>(std::find(reports.begin(), reports.end(), v) - reports.begin());
          if (std::find(best.begin(), best.end(), idx) == best.end()) {
            const double opt_value = expected[best.front()];
            rep.record_failure(Witness{{p.probs().begin(), p.probs().end()},
                                       {format_report(binary[m]), format_classes(v)},
                                       {cfg.tau, expected[idx], opt_value},
                                       "trimmed link at " + format_vector(u) + " is not optimal"});
          }
        }
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// One-hot one-vs-all

ClassSetFunction onehot_jaccard() {
  return [](int c, const ClassVector& y, Mask s) {
    Mask fg = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == c) fg |= Mask{1} << i;
    }
    const int denom = popcount(s | fg);
    return denom == 0 ? 0.0 : static_cast<double>(popcount(s)) / denom;
  };
}

Mask mis_class(const ClassVector& v, const ClassVector& y, int c) {
  if (v.size() != y.size()) throw DomainError("class vector lengths differ");
  Mask out = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if ((v[i] == c) != (y[i] == c)) out |= Mask{1} << i;
  }
  return out;
}

double ova_target(const ClassSetFunction& g, int classes, const ClassVector& v, const ClassVector& y) {
  check_class_vector(v, classes, false);
  check_class_vector(y, classes, false);
  double total = 0.0;
  for (int c = 1; c <= classes; ++c) total += g(c, y, mis_class(v, y, c));
  return total / classes;
}

Label onehot_encode(const ClassVector& y, int classes) {
  check_class_vector(y, classes, false);
  const int n = classes * static_cast<int>(y.size());
  if (n > kMaxK) throw CapacityError("one-hot label exceeds " + std::to_string(kMaxK) + " bits");
  Mask bits = 0;
  for (std::size_t i = 0; i < y.size(); ++i) bits |= Mask{1} << (classes * static_cast<int>(i) + y[i] - 1);
  return Label{n, bits};
}

PolymatroidCollection onehot_lift(const ClassSetFunction& g, int classes, int k) {
  if (classes < 2) throw ConfigError("need at least two classes");
  const int n = classes * k;
  if (n > kMaxSymmetricLift) throw CapacityError("one-hot ground set of size " + std::to_string(n) + " is too large");
  const std::size_t size = std::size_t{1} << n;
  std::vector<PolymatroidCollection::Member> members(size);
  for (const ClassVector& y : enumerate_class_labels(k, classes)) {
    std::vector<double> values(size);
    for (Mask s = 0; s < size; ++s) {
      double total = 0.0;
      for (int c = 1; c <= classes; ++c) {
        Mask proj = 0;
        for (int i = 0; i < k; ++i) {
          if (has(s, classes * i + c - 1)) proj |= Mask{1} << i;
        }
        total += g(c, y, proj);
      }
      values[s] = total / classes;
    }
    members[onehot_encode(y, classes).bits] = std::make_shared<const SetFunction>(SetFunction::from_table(n, std::move(values)));
  }
  return PolymatroidCollection::from_members(n, std::move(members));
}

VerificationReport verify_onehot_identity(const ClassSetFunction& g, int classes, int k) {
  VerificationReport rep;
  rep.check = "onehot-identity";
  const PolymatroidCollection f = onehot_lift(g, classes, k);
  const auto labels = enumerate_class_labels(k, classes);
  for (const auto& y : labels) {
    const Label yb = onehot_encode(y, classes);
    for (const auto& v : labels) {
      ++rep.cases;
      const double lifted = f.at(yb)(mis(onehot_encode(v, classes), yb));
      const double direct = ova_target(g, classes, v, y);
      if (std::fabs(lifted - direct) > 1e-12) {
        rep.record_failure(Witness{{}, {format_classes(v), format_classes(y)}, {lifted, direct}, "lift mismatch"});
      }
    }
  }
  return rep;
}

CodeConflict bep_ova_conflict() {
  CodeConflict r;
  const BlockCodec codec(8);
  const ClassVector y{r.truth}, v1{r.first}, v2{r.second};
  r.class_mis_first = mis_class(v1, y, r.focus);
  r.class_mis_second = mis_class(v2, y, r.focus);
  const Label yb = codec.encode(y);
  r.bit_mis_first = mis(codec.encode(v1), yb);
  r.bit_mis_second = mis(codec.encode(v2), yb);
  r.nested = (r.bit_mis_first & ~r.bit_mis_second) == 0 && r.bit_mis_first != r.bit_mis_second;
  const auto g = onehot_jaccard();
  r.g_first = g(r.focus, y, r.class_mis_first);
  r.g_second = g(r.focus, y, r.class_mis_second);
  r.forces_decrease = r.nested && r.g_second < r.g_first;
  std::ostringstream os;
  os << "f(" << set_string(r.bit_mis_second, 3) << ") = g(" << set_string(r.class_mis_second, 1) << ") = " << r.g_second
     << " < " << r.g_first << " = g(" << set_string(r.class_mis_first, 1) << ") = f(" << set_string(r.bit_mis_first, 3)
     << "): ";
  os << (r.forces_decrease ? "no increasing submodular f on bits matches this one-vs-all target"
                           : "no contradiction");
  r.verdict = os.str();
  return r;
}

}  // namespace lovabs
