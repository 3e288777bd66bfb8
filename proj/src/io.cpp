#include "lovabs/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "lovabs/text.hpp"

namespace lovabs::io {

namespace {

int get_k(const json& j, std::optional<int> fallback) {
  if (j.contains("k")) {
    const int k = j.at("k").get<int>();
    if (fallback && *fallback != k) {
      throw ConfigError("k=" + std::to_string(k) + " in file disagrees with requested k=" + std::to_string(*fallback));
    }
    return k;
  }
  if (fallback) return *fallback;
  throw ConfigError("set function needs \"k\"");
}

std::vector<double> numbers(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw ConfigError(std::string("missing array \"") + key + "\"");
  return j.at(key).get<std::vector<double>>();
}

Mask label_key(const std::string& key, int k) {
  if (!key.empty() && (key[0] == '+' || key[0] == '-')) {
    const Label y = parse_label(key);
    if (y.k != k) throw ConfigError("per_label key '" + key + "' does not have k=" + std::to_string(k) + " signs");
    return y.bits;
  }
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != key.size() || key.empty()) throw ConfigError("bad per_label key '" + key + "'");
  if (v > full_mask(k)) throw ConfigError("per_label key '" + key + "' out of range");
  return static_cast<Mask>(v);
}

}  // namespace

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

SetFunction setfn_from_json(const json& j, std::optional<int> default_k) {
  try {
    const std::string kind = j.value("kind", "table");
    if (kind == "modular") {
      const auto w = numbers(j, "weights");
      if (j.contains("k") && j.at("k").get<int>() != static_cast<int>(w.size())) {
        throw ConfigError("modular weights do not match k");
      }
      if (default_k && *default_k != static_cast<int>(w.size())) throw ConfigError("modular weights do not match k");
      return make_modular(w);
    }
    const int k = get_k(j, default_k);
    if (kind == "table") return SetFunction::from_table(k, numbers(j, "values"));
    if (kind == "zero_one") return make_zero_one(k);
    if (kind == "concave_card") return make_power_card(k, j.value("exponent", 0.5));
    throw ConfigError("unknown set function kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed set function: ") + e.what());
  }
}

PolymatroidCollection collection_from_json(const json& j, std::optional<int> default_k) {
  try {
    if (j.contains("per_label") || j.contains("setfn") || j.contains("symmetric")) {
      const int k = get_k(j, default_k);
      if (j.value("symmetric", false)) {
        if (!j.contains("setfn")) throw ConfigError("symmetric collection needs \"setfn\"");
        return PolymatroidCollection::symmetric(setfn_from_json(j.at("setfn"), k));
      }
      std::vector<PolymatroidCollection::Member> members(std::size_t{1} << k);
      for (const auto& [key, spec] : j.at("per_label").items()) {
        members[label_key(key, k)] = std::make_shared<const SetFunction>(setfn_from_json(spec, k));
      }
      return PolymatroidCollection::from_members(k, std::move(members));
    }
    const std::string kind = j.value("kind", "table");
    if (kind == "jaccard") return make_jaccard(get_k(j, default_k));
    if (kind == "foreground_miss") return make_foreground_miss(get_k(j, default_k));
    return PolymatroidCollection::symmetric(setfn_from_json(j, default_k));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed collection: ") + e.what());
  }
}

ClassCollection class_collection_from_json(const json& j, int k) {
  try {
    if (j.contains("weights_by_class")) {
      return ClassCollection::class_weighted(k, j.at("weights_by_class").get<std::vector<double>>());
    }
    if (!j.contains("classes")) throw ConfigError("class collection needs \"weights_by_class\" or \"classes\"");
    return ClassCollection::shared(setfn_from_json(j, k), j.at("classes").get<int>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed class collection: ") + e.what());
  }
}

json to_json(const VerificationReport& r) {
  json j{{"check", r.check}, {"pass", r.pass}, {"cases", r.cases}, {"failures", r.failures}, {"notes", r.notes}};
  if (r.witness) {
    j["witness"] = {{"distribution", r.witness->distribution},
                    {"reports", r.witness->reports},
                    {"values", r.witness->values},
                    {"detail", r.witness->detail}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

json to_json(const Metrics& m) {
  return {{"accuracy", m.accuracy},
          {"recall", m.recall},
          {"precision", m.precision},
          {"iou", m.iou},
          {"rejection_rate", m.rejection_rate},
          {"rejection_rate_pos", m.rejection_rate_pos},
          {"rejection_rate_neg", m.rejection_rate_neg},
          {"undefined_flags", m.undefined_flags}};
}

json to_json(const SweepResult& s) {
  json rows = json::array();
  for (const auto& r : s.rows) {
    json row = to_json(r.metrics);
    row["tau"] = r.tau;
    rows.push_back(std::move(row));
  }
  return {{"rows", rows},
          {"monotonicity_checks", s.monotonicity_checks},
          {"monotonicity_violations", s.monotonicity_violations},
          {"rejection_rate_monotone", s.metrics_monotone}};
}

json to_json(const TrainConfig& cfg) {
  json j{{"data",
          {{"k", cfg.data.k},
           {"features", cfg.data.features},
           {"samples", cfg.data.samples},
           {"separation", cfg.data.separation},
           {"noise", cfg.data.noise},
           {"correlation", cfg.data.correlation},
           {"seed", cfg.data.seed}}},
         {"learning_rate", cfg.learning_rate},
         {"decay_rate", cfg.decay_rate},
         {"decay_steps", cfg.decay_steps},
         {"gradient_clip", cfg.gradient_clip},
         {"epochs", cfg.epochs},
         {"batch_size", cfg.batch_size},
         {"seed", cfg.seed},
         {"taus", cfg.taus}};
  j["epsilon"] = cfg.epsilon ? json(*cfg.epsilon) : json(nullptr);
  return j;
}

TrainConfig train_config_from_json(const json& j) {
  static const std::set<std::string> top{"data", "learning_rate", "decay_rate", "decay_steps", "gradient_clip",
                                         "epochs", "batch_size", "seed", "epsilon", "taus", "collection"};
  static const std::set<std::string> data{"k", "features", "samples", "separation", "noise", "correlation", "seed"};
  if (!j.is_object()) throw ConfigError("training config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!top.count(key)) throw ConfigError("unknown training config key '" + key + "'");
  }
  TrainConfig cfg;
  try {
    if (j.contains("data")) {
      const json& d = j.at("data");
      for (const auto& [key, _] : d.items()) {
        if (!data.count(key)) throw ConfigError("unknown data config key '" + key + "'");
      }
      cfg.data.k = d.value("k", cfg.data.k);
      cfg.data.features = d.value("features", cfg.data.features);
      cfg.data.samples = d.value("samples", cfg.data.samples);
      cfg.data.separation = d.value("separation", cfg.data.separation);
      cfg.data.noise = d.value("noise", cfg.data.noise);
      cfg.data.correlation = d.value("correlation", cfg.data.correlation);
      cfg.data.seed = d.value("seed", cfg.data.seed);
    }
    cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
    cfg.decay_rate = j.value("decay_rate", cfg.decay_rate);
    cfg.decay_steps = j.value("decay_steps", cfg.decay_steps);
    cfg.gradient_clip = j.value("gradient_clip", cfg.gradient_clip);
    cfg.epochs = j.value("epochs", cfg.epochs);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.taus = j.value("taus", cfg.taus);
    if (j.contains("epsilon") && !j.at("epsilon").is_null()) cfg.epsilon = j.at("epsilon").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed training config: ") + e.what());
  }
  check_config(cfg);
  return cfg;
}

json to_json(const LinearModel& m) { return {{"k", m.k}, {"dim", m.dim}, {"weights", m.weights}}; }

LinearModel model_from_json(const json& j) {
  try {
    LinearModel m{j.at("k").get<int>(), j.at("dim").get<int>(), j.at("weights").get<std::vector<double>>()};
    if (m.k < 1 || m.dim < 1 || m.weights.size() != static_cast<std::size_t>(m.k) * static_cast<std::size_t>(m.dim)) {
      throw ConfigError("model weights do not match k x dim");
    }
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model: ") + e.what());
  }
}

namespace {

std::vector<std::string> read_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  std::vector<std::string> rows;
  bool header = true;
  int k = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (header) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] != "c" + std::to_string(i + 1)) throw DomainError(path.string() + ": header must be c1..ck");
      }
      k = static_cast<int>(cells.size());
      header = false;
      continue;
    }
    if (static_cast<int>(cells.size()) != k) throw DomainError(path.string() + ": row has the wrong number of columns");
    std::string joined;
    for (const auto& c : cells) {
      if (c.size() != 1) throw DomainError(path.string() + ": cells must be a single symbol");
      joined += c;
    }
    rows.push_back(std::move(joined));
  }
  if (header) throw DomainError(path.string() + ": missing header");
  return rows;
}

void write_rows(const std::filesystem::path& path, int k, const std::vector<std::string>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  for (int i = 0; i < k; ++i) out << (i ? "," : "") << 'c' << (i + 1);
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << '\n';
  }
}

}  // namespace

std::vector<AbstainReport> read_predictions(const std::filesystem::path& path) {
  std::vector<AbstainReport> out;
  for (const auto& r : read_rows(path)) out.push_back(parse_report(r));
  return out;
}

std::vector<Label> read_truth(const std::filesystem::path& path) {
  std::vector<Label> out;
  for (const auto& r : read_rows(path)) out.push_back(parse_label(r));
  return out;
}

void write_predictions(const std::filesystem::path& path, const std::vector<AbstainReport>& v) {
  std::vector<std::string> rows;
  for (const auto& r : v) rows.push_back(format_report(r));
  write_rows(path, v.empty() ? 0 : v.front().k, rows);
}

void write_truth(const std::filesystem::path& path, const std::vector<Label>& y) {
  std::vector<std::string> rows;
  for (const auto& r : y) rows.push_back(format_label(r));
  write_rows(path, y.empty() ? 0 : y.front().k, rows);
}

}  // namespace lovabs::io
