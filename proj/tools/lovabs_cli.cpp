#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lovabs/bench.hpp"
#include "lovabs/io.hpp"
#include "lovabs/links.hpp"
#include "lovabs/lovasz.hpp"
#include "lovabs/multiclass.hpp"
#include "lovabs/oracle.hpp"
#include "lovabs/setfn.hpp"
#include "lovabs/targets.hpp"
#include "lovabs/text.hpp"

namespace fs = std::filesystem;
using namespace lovabs;
using io::json;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitTraining = 3;

std::optional<double> parse_eps(const std::string& s) {
  if (s.empty() || s == "auto") return std::nullopt;
  const auto v = parse_vector(s);
  if (v.size() != 1) throw ConfigError("--eps takes one number or 'auto'");
  return v.front();
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

void print_value(double v) {
  std::cout << format_vector({v}) << '\n';
}

json polymatroid_json(const PolymatroidReport& r) {
  return {{"valid", r.valid()},
          {"strict", r.strict()},
          {"normalized", r.normalized},
          {"nonnegative", r.nonnegative},
          {"increasing", r.increasing},
          {"submodular", r.submodular},
          {"modular", r.modular},
          {"strictly_submodular", r.strictly_submodular},
          {"strictly_increasing", r.strictly_increasing},
          {"zero_singletons", r.zero_singletons},
          {"violations", r.violations}};
}

json members_json(const std::vector<EnvelopeMember>& ms) {
  json out = json::array();
  for (const auto& m : ms) {
    out.push_back({{"report", format_report(m.report)},
                   {"order", m.order},
                   {"sign", format_label(m.sign)},
                   {"index", m.index}});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lovasz hinge structured abstention toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ---- set functions
  std::string setfn_path, collection_path;
  bool strict = false;
  auto* validate = app.add_subcommand("validate", "Check the polymatroid axioms of a set function");
  validate->add_option("--setfn", setfn_path, "Set function JSON")->required();
  validate->add_flag("--strict", strict, "Also require strict submodularity and monotonicity");
  validate->callback([&] {
    const auto r = validate_polymatroid(io::setfn_from_json(io::read_json(setfn_path)), strict);
    print(polymatroid_json(r));
    if (!r.valid() || (strict && !r.strict())) exit_code = kExitCheckFailed;
  });

  auto* cond1 = app.add_subcommand("condition1", "Check the complementary-label condition of a collection");
  cond1->add_option("--collection", collection_path, "Collection JSON")->required();
  cond1->callback([&] {
    const auto r = check_condition1(io::collection_from_json(io::read_json(collection_path)));
    json j{{"pass", r.pass}, {"cases", r.cases}, {"reason", r.reason}};
    j["label"] = r.label ? json(format_label(*r.label)) : json(nullptr);
    j["set"] = r.set ? json(*r.set) : json(nullptr);
    print(j);
    if (!r.pass) exit_code = kExitCheckFailed;
  });

  // ---- evaluation
  std::string x_str, u_str, y_str, v_str;
  auto* ext = app.add_subcommand("eval-extension", "Evaluate the Lovasz extension");
  ext->add_option("--setfn", setfn_path)->required();
  ext->add_option("--x", x_str, "Nonnegative comma-separated vector")->required();
  ext->callback([&] {
    print_value(lovasz_extension(io::setfn_from_json(io::read_json(setfn_path)), parse_vector(x_str)));
  });

  auto* eh = app.add_subcommand("eval-hinge", "Evaluate the Lovasz hinge");
  eh->add_option("--collection", collection_path)->required();
  eh->add_option("--u", u_str)->required();
  eh->add_option("--y", y_str, "Label over {+,-}")->required();
  eh->callback([&] {
    const Label y = parse_label(y_str);
    print_value(hinge(io::collection_from_json(io::read_json(collection_path), y.k), parse_vector(u_str), y));
  });

  bool plain = false;
  auto* et = app.add_subcommand("eval-target", "Evaluate the abstain loss (or the plain loss)");
  et->add_option("--collection", collection_path)->required();
  et->add_option("--v", v_str, "Report over {+,0,-}")->required();
  et->add_option("--y", y_str)->required();
  et->add_flag("--plain", plain, "Plain structured loss; the report must not abstain");
  et->callback([&] {
    const Label y = parse_label(y_str);
    const auto fc = io::collection_from_json(io::read_json(collection_path), y.k);
    const AbstainReport v = parse_report(v_str);
    if (plain) {
      if (!v.is_label()) throw DomainError("--plain needs a report without zeros");
      print_value(target_plain(fc, v.as_label(), y));
    } else {
      print_value(target_abstain(fc, v, y));
    }
  });

  // ---- links
  double tau = 0.5;
  std::string eps_str = "auto";
  bool trim = false, oracle = false;
  auto* link = app.add_subcommand("link", "Apply the threshold-abstain link");
  link->add_option("--u", u_str)->required();
  link->add_option("--tau", tau)->check(CLI::Range(0.0, 1.0));
  link->add_option("--eps", eps_str, "Number or 'auto' for 1/(2k)");
  link->add_flag("--trim", trim, "Replace a single abstention by the sign");
  link->callback([&] {
    const auto u = parse_vector(u_str);
    const auto cfg = LinkConfig::make(static_cast<int>(u.size()), tau, parse_eps(eps_str));
    AbstainReport v = threshold_abstain_link(u, cfg);
    if (trim) v = trim_single_abstain(v, u);
    std::cout << format_report(v) << '\n';
  });

  auto* env = app.add_subcommand("envelope", "List the link envelope at a point");
  env->add_option("--u", u_str)->required();
  env->add_option("--eps", eps_str);
  env->add_flag("--oracle", oracle, "Use the face-intersection oracle (k <= 4)");
  env->callback([&] {
    const auto u = parse_vector(u_str);
    const auto given = parse_eps(eps_str);
    const double eps = given ? *given : 1.0 / (2.0 * static_cast<double>(u.size()));
    if (!(eps > 0.0)) throw ConfigError("epsilon must be > 0");
    json j{{"epsilon", eps}, {"method", oracle ? "oracle" : "closed_form"}};
    if (oracle) {
      json ms = json::array();
      for (const auto& v : envelope_oracle(u, eps)) ms.push_back({{"report", format_report(v)}});
      j["members"] = ms;
    } else {
      j["members"] = members_json(envelope(u, eps));
    }
    print(j);
  });

  // ---- verification
  std::string check_name, family = "V0";
  std::optional<int> k_opt;
  int grid = 0;
  auto* verify = app.add_subcommand("verify", "Exhaustive embedding, representativeness or tightness check");
  verify->add_option("check", check_name)->required()->check(CLI::IsMember({"embedding", "representative", "tightness"}));
  verify->add_option("--collection", collection_path)->required();
  verify->add_option("--k", k_opt, "Ground set size for kinds that need one");
  verify->add_option("--grid", grid, "Grid resolution m (default 8 for k <= 3, else 4)");
  verify->add_option("--family", family, "Report family for 'representative': V, V0 or Y");
  verify->callback([&] {
    const auto fc = io::collection_from_json(io::read_json(collection_path), k_opt);
    const int m = grid > 0 ? grid : default_grid(fc.k());
    VerificationReport r;
    if (check_name == "embedding") {
      r = verify_embedding(fc, m);
    } else if (check_name == "representative") {
      r = verify_representative(fc, enumerate_reports(fc.k(), parse_report_family(family)), family, m);
    } else {
      r = verify_tightness(fc.shared(), m);
    }
    print(io::to_json(r));
    if (!r.pass) exit_code = kExitCheckFailed;
  });

  bool symmetric = false;
  auto* cex = app.add_subcommand("counterexample", "Construct an inconsistency witness for sign-based links");
  cex->add_option("--collection", collection_path)->required();
  cex->add_option("--k", k_opt);
  cex->add_flag("--symmetric", symmetric, "Use the shared-polymatroid construction");
  cex->callback([&] {
    const auto fc = io::collection_from_json(io::read_json(collection_path), k_opt);
    json j;
    VerificationReport r;
    if (symmetric) {
      const auto c = counterexample_symmetric(fc.shared());
      r = c.report;
      j = {{"construction", "symmetric"},
           {"consistent_case", c.consistent_case},
           {"kept_elements", c.kept_elements},
           {"epsilon", c.epsilon},
           {"mean", c.mean},
           {"full_value", c.full_value}};
      if (!c.consistent_case) {
        j["y"] = format_label(c.y);
        j["y_prime"] = format_label(c.y_prime);
        j["v"] = format_report(c.v);
        j["p_y"] = c.p_y;
        j["p_y_prime"] = c.p_y_prime;
      }
    } else {
      const auto c = counterexample_asymmetric(fc);
      r = c.report;
      j = {{"construction", "asymmetric"},
           {"epsilon", c.epsilon},
           {"scenario", c.scenario},
           {"distribution", c.distribution},
           {"sign_of_zero", format_label(c.sign_of_zero)},
           {"label_argmin", c.label_argmin}};
      j["epsilon_prime"] = c.epsilon_prime ? json(*c.epsilon_prime) : json(nullptr);
      j["violating_label"] = c.violating_label ? json(format_label(*c.violating_label)) : json(nullptr);
    }
    j["report"] = io::to_json(r);
    print(j);
    if (!r.pass) exit_code = kExitCheckFailed;
  });

  // ---- multiclass
  int classes = 8;
  std::string g_path;
  auto* mce = app.add_subcommand("mc-encode", "Binary block code of a class vector");
  mce->add_option("--C", classes, "Number of classes (power of two)")->required();
  mce->add_option("--y", y_str, "Comma-separated classes, 1-based")->required();
  mce->callback([&] {
    std::cout << format_label(BlockCodec(classes).encode(parse_classes(y_str, false))) << '\n';
  });

  auto* mcv = app.add_subcommand("mc-eval", "Multiclass abstain loss");
  mcv->add_option("--g", g_path, "Class collection JSON")->required();
  mcv->add_option("--v", v_str, "Report; '_' abstains")->required();
  mcv->add_option("--y", y_str)->required();
  mcv->callback([&] {
    const ClassVector y = parse_classes(y_str, false);
    const auto g = io::class_collection_from_json(io::read_json(g_path), static_cast<int>(y.size()));
    print_value(multiclass_target(g, parse_classes(v_str, true), y));
  });

  auto* mcl = app.add_subcommand("mc-link", "Trimmed threshold-abstain link on block scores");
  mcl->add_option("--u", u_str)->required();
  mcl->add_option("--C", classes)->required();
  mcl->add_option("--tau", tau)->check(CLI::Range(0.0, 1.0));
  mcl->add_option("--eps", eps_str);
  mcl->callback([&] {
    const auto u = parse_vector(u_str);
    const BlockCodec codec(classes);
    const auto cfg = LinkConfig::make(static_cast<int>(u.size()), tau, parse_eps(eps_str));
    std::cout << format_classes(trimmed_link(u, cfg, codec)) << '\n';
  });

  // ---- bench
  std::string config_path, out_path, pred_path, truth_path, model_dir, taus_str;
  auto* tr = app.add_subcommand("train", "Train a linear scorer on synthetic data");
  tr->add_option("--config", config_path)->required();
  tr->add_option("--out", out_path, "Run directory")->required();
  tr->callback([&] {
    const json raw = io::read_json(config_path);
    const TrainConfig cfg = io::train_config_from_json(raw);
    if (!raw.contains("collection")) throw ConfigError("training config needs \"collection\"");
    const auto fc = io::collection_from_json(raw.at("collection"), cfg.data.k);
    const auto splits = split(synth_data(cfg.data), cfg.seed);
    const auto res = train(cfg, fc, splits.train, splits.validation);
    json trace = json::array();
    for (const auto& e : res.trace) {
      trace.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"validation_loss", e.validation_loss}});
    }
    json config = io::to_json(cfg);
    config["collection"] = raw.at("collection");
    const json model{{"config", config}, {"model", io::to_json(res.model)}, {"best_epoch", res.best_epoch},
                     {"trace", trace}};
    fs::create_directories(out_path);
    io::write_json(fs::path(out_path) / "model.json", model);
    print({{"best_epoch", res.best_epoch},
           {"train_loss", mean_hinge(fc, res.model, splits.train)},
           {"validation_loss", mean_hinge(fc, res.model, splits.validation)},
           {"model", (fs::path(out_path) / "model.json").string()}});
  });

  auto* met = app.add_subcommand("metrics", "Abstention-aware metrics from prediction and truth CSVs");
  met->add_option("--pred", pred_path)->required();
  met->add_option("--truth", truth_path)->required();
  met->add_option("--out", out_path, "Write the metrics JSON here too");
  met->callback([&] {
    const auto preds = io::read_predictions(pred_path);
    const auto truth = io::read_truth(truth_path);
    if (preds.size() != truth.size()) throw DomainError("prediction and truth row counts differ");
    if (preds.empty()) throw DomainError("no predictions");
    PredictionSet s(preds.front().k);
    for (std::size_t i = 0; i < preds.size(); ++i) s.add(preds[i], truth[i]);
    const json j = io::to_json(metrics(s));
    if (!out_path.empty()) io::write_json(out_path, j);
    print(j);
  });

  taus_str = "0,0.25,0.5,0.75,1";
  auto* sw = app.add_subcommand("sweep", "Metrics of a trained model on its test split across tau");
  sw->add_option("--model", model_dir, "Run directory from 'train'")->required();
  sw->add_option("--taus", taus_str);
  sw->add_flag("--trim", trim);
  sw->callback([&] {
    const json saved = io::read_json(fs::path(model_dir) / "model.json");
    const TrainConfig cfg = io::train_config_from_json(saved.at("config"));
    const LinearModel m = io::model_from_json(saved.at("model"));
    const auto splits = split(synth_data(cfg.data), cfg.seed);
    const auto res = tau_sweep(m, splits.test, parse_vector(taus_str), cfg.epsilon, trim);
    print(io::to_json(res));
    if (res.monotonicity_violations > 0) exit_code = kExitCheckFailed;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const TrainingError& e) {
    std::cerr << "training error: " << e.what() << '\n';
    return kExitTraining;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  return exit_code;
}
