#pragma once

// JSON and CSV formats used by the command-line tool.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lovabs/bench.hpp"
#include "lovabs/common.hpp"
#include "lovabs/multiclass.hpp"
#include "lovabs/oracle.hpp"
#include "lovabs/setfn.hpp"

namespace lovabs::io {

using nlohmann::json;

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

/// {"k", "kind": table|modular|zero_one|concave_card, "values" | "weights" |
/// "exponent"}. A missing "k" falls back to default_k.
SetFunction setfn_from_json(const json& j, std::optional<int> default_k = std::nullopt);

/// Either a single set function (symmetric), a label-dependent kind
/// ("jaccard", "foreground_miss"), or {"k", "symmetric": false,
/// "per_label": {"<bitmask or +- string>": setfn}}; symmetric collections may
/// also be written {"k", "symmetric": true, "setfn": setfn}.
PolymatroidCollection collection_from_json(const json& j, std::optional<int> default_k = std::nullopt);

/// {"weights_by_class": [...]} or a set function with a "classes" entry.
ClassCollection class_collection_from_json(const json& j, int k);

json to_json(const VerificationReport& r);
json to_json(const Metrics& m);
json to_json(const SweepResult& s);

json to_json(const TrainConfig& cfg);
/// Unknown keys are rejected (ConfigError); "collection" is left to the caller.
TrainConfig train_config_from_json(const json& j);

json to_json(const LinearModel& m);
LinearModel model_from_json(const json& j);

/// Header c1..ck, then one row per sample over {+,-,0}.
std::vector<AbstainReport> read_predictions(const std::filesystem::path& path);
std::vector<Label> read_truth(const std::filesystem::path& path);
void write_predictions(const std::filesystem::path& path, const std::vector<AbstainReport>& v);
void write_truth(const std::filesystem::path& path, const std::vector<Label>& y);

}  // namespace lovabs::io
