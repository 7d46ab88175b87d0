#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lasem/dependency.hpp"
#include "lasem/fixtures.hpp"
#include "lasem/model.hpp"
#include "lasem/semantics.hpp"
#include "lasem/serialize.hpp"
#include "lasem/update.hpp"

namespace {

using nlohmann::json;
using namespace lasem;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitBudget = 3;

void emit_report(const json& report) {
  std::cout << report.dump(2) << "\n";
}

json valuation_to_json(const Valuation& valuation) {
  json object = json::object();
  for (const auto& [port, service] : valuation.bindings) {
    object[port] = service;
  }
  return object;
}

json pairs_to_json(const std::set<std::pair<LayerName, LayerName>>& pairs) {
  json array = json::array();
  for (const auto& [from, to] : pairs) {
    array.push_back(json::array({from, to}));
  }
  return array;
}

std::string read_file(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) {
    throw Error("cannot read '" + path + "'");
  }
  std::ostringstream content;
  content << stream.rdbuf();
  return content.str();
}

/// Loads and validates; on violations, reports them and exits with status 2
/// so no analysis ever runs on an ill-formed configuration.
Model load_validated(const std::string& path, const std::string& command) {
  Model model = parse_config(read_file(path));
  const auto report = validate_configuration(model.config, model.universe);
  if (!report.ok()) {
    json output;
    output["command"] = command;
    output["file"] = path;
    output["error"] = "invalid configuration";
    output["violations"] = report.violations;
    emit_report(output);
    std::cerr << "invalid configuration (" << report.violations.size()
              << " violations)\n";
    std::exit(kExitInvalidInput);
  }
  return model;
}

Valuation parse_input_valuation(const std::string& text,
                                const Universe& universe) {
  std::vector<std::pair<PortId, ServiceId>> pairs;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw Error("malformed --input entry '" + item +
                  "', expected port=service");
    }
    pairs.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return make_valuation(pairs, universe);
}

std::uint64_t default_table_budget() {
  if (const char* env = std::getenv("LASEM_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(std::string("LASEM_BUDGET is not a number: ") + env);
    }
  }
  return Budgets{}.tables;
}

int run_validate(const std::string& path) {
  const Model model = parse_config(read_file(path));
  const auto report = validate_configuration(model.config, model.universe);
  json output;
  output["command"] = "validate";
  output["file"] = path;
  output["ok"] = report.ok();
  output["violations"] = report.violations;
  emit_report(output);
  if (report.ok()) {
    std::cerr << "ok: " << model.config.layers.size() << " layers, "
              << ports_all(model.config).size() << " ports\n";
    return kExitOk;
  }
  std::cerr << "invalid configuration (" << report.violations.size()
            << " violations)\n";
  for (const auto& violation : report.violations) {
    std::cerr << "  - " << violation << "\n";
  }
  return kExitInvalidInput;
}

int run_closure(const std::string& path, const std::string& layer) {
  const Model model = load_validated(path, "closure");
  const auto closure = attachment_closure(model.config, layer);
  json output;
  output["command"] = "closure";
  output["file"] = path;
  output["layer"] = layer;
  output["iterations"] = closure.iterations;
  output["ports"] = json::array();
  for (const auto& port : closure.ports) {
    output["ports"].push_back(port);
  }
  emit_report(output);
  std::cerr << "closure of " << layer << ": " << closure.ports.size()
            << " ports in " << closure.iterations << " rounds\n";
  return kExitOk;
}

int run_eval(const std::string& path, const std::string& layer,
             const std::string& input) {
  const Model model = load_validated(path, "eval");
  const Valuation mu = parse_input_valuation(input, model.universe);
  const auto outputs =
      config_semantics(model.universe, model.config, layer, mu);
  json output;
  output["command"] = "eval";
  output["file"] = path;
  output["layer"] = layer;
  output["input"] = valuation_to_json(mu);
  output["outputs"] = json::array();
  for (const auto& valuation : outputs) {
    output["outputs"].push_back(valuation_to_json(valuation));
  }
  emit_report(output);
  std::cerr << outputs.size() << " output valuation(s) for " << layer << "\n";
  return kExitOk;
}

int run_syndep(const std::string& path, const std::string& closure_kind) {
  const Model model = load_validated(path, "syndep");
  DependencyRelation relation = syntactic_dependency(model.config);
  if (closure_kind == "trans") {
    relation = transitive_closure(relation);
  } else if (closure_kind == "refl-trans") {
    relation = reflexive_transitive_closure(relation);
  }
  json output;
  output["command"] = "syndep";
  output["file"] = path;
  output["kind"] = to_string(relation.kind);
  output["pairs"] = pairs_to_json(relation.pairs);
  emit_report(output);
  std::cerr << relation.pairs.size() << " pair(s)\n";
  return kExitOk;
}

int run_semdep(const std::string& path, const Budgets& budgets) {
  const Model model = load_validated(path, "semdep");
  std::set<std::pair<LayerName, LayerName>> pairs;
  json skipped = json::array();
  for (const auto& [from, from_layer] : model.config.layers) {
    for (const auto& [to, to_layer] : model.config.layers) {
      try {
        if (semantic_dependency(model.universe, model.config, from, to,
                                budgets)) {
          pairs.emplace(from, to);
        }
      } catch (const BudgetError& error) {
        json entry;
        entry["from"] = from;
        entry["to"] = to;
        entry["tables"] = error.required;
        skipped.push_back(std::move(entry));
      }
    }
  }
  json output;
  output["command"] = "semdep";
  output["file"] = path;
  output["kind"] = to_string(RelationKind::semantic);
  output["pairs"] = pairs_to_json(pairs);
  output["skipped"] = skipped;
  emit_report(output);
  std::cerr << pairs.size() << " pair(s), " << skipped.size() << " skipped\n";
  return skipped.empty() ? kExitOk : kExitBudget;
}

int run_usable(const std::string& path, const Budgets& budgets) {
  const Model model = load_validated(path, "usable");
  const auto result = is_usable(model.universe, model.config, budgets.states);
  json output;
  output["command"] = "usable";
  output["file"] = path;
  output["usable"] = result.usable;
  output["witness"] =
      result.witness ? valuation_to_json(*result.witness) : json(nullptr);
  emit_report(output);
  std::cerr << (result.usable ? "usable" : "not usable") << "\n";
  return kExitOk;
}

json theorem_report_to_json(const TheoremReport& report) {
  json output;
  output["config"] = report.config_id;
  output["usable"] = report.usable;
  output["usable_witness"] = report.usable_witness
                                 ? valuation_to_json(*report.usable_witness)
                                 : json(nullptr);
  json checks;
  checks["usability_search"] = to_string(report.usable_status);
  checks["theorem1"] = to_string(report.theorem1);
  checks["theorem2"] = to_string(report.theorem2);
  checks["corollary"] = to_string(report.corollary);
  checks["lemma1"] = to_string(report.lemma1);
  checks["proposition1"] = to_string(report.prop1);
  output["checks"] = std::move(checks);
  output["theorem1_counterexample"] =
      report.theorem1_counterexample
          ? json::array({report.theorem1_counterexample->first,
                         report.theorem1_counterexample->second})
          : json(nullptr);
  output["theorem2_counterexample"] =
      report.theorem2_counterexample
          ? json::array({report.theorem2_counterexample->first,
                         report.theorem2_counterexample->second})
          : json(nullptr);
  output["lemma1_offender"] =
      report.lemma1_offender ? json::array({report.lemma1_offender->first,
                                            report.lemma1_offender->second})
                             : json(nullptr);
  output["rt_closure_in_semantic"] =
      report.rt_closure_in_semantic ? json(*report.rt_closure_in_semantic)
                                    : json(nullptr);
  json skipped = json::array();
  for (const auto& pair : report.skipped) {
    json entry;
    entry["from"] = pair.from;
    entry["to"] = pair.to;
    entry["tables"] = pair.tables;
    skipped.push_back(std::move(entry));
  }
  output["skipped"] = std::move(skipped);
  return output;
}

int report_exit(const TheoremReport& report) {
  if (report.theorem2 == CheckStatus::failed) {
    std::cerr << "THEOREM 2 FAILED: semantic dependency escaped the "
                 "reflexive-transitive syntactic closure; this indicates an "
                 "implementation bug\n";
  }
  if (report.any_failed()) {
    return kExitCheckFailed;
  }
  if (report.any_skipped()) {
    return kExitBudget;
  }
  return kExitOk;
}

int run_check(const std::string& path, const Budgets& budgets) {
  const Model model = load_validated(path, "check");
  const auto report =
      check_theorems(model.universe, model.config, budgets, path);
  json output = theorem_report_to_json(report);
  output["command"] = "check";
  emit_report(output);
  for (const auto& [name, status] : output["checks"].items()) {
    std::cerr << name << ": " << status.get<std::string>() << "\n";
  }
  return report_exit(report);
}

int run_dot(const std::string& path, const std::string& relation,
            const Budgets& budgets) {
  const Model model = load_validated(path, "dot");
  DotRelation kind = DotRelation::attachment;
  if (relation == "syn") {
    kind = DotRelation::syntactic;
  } else if (relation == "sem") {
    kind = DotRelation::semantic;
  }
  std::cout << export_dot(model, kind, budgets);
  return kExitOk;
}

std::string sanitize_id(const std::string& id) {
  std::string name;
  for (char c : id) {
    if (c == '(') {
      name.push_back('_');
    } else if (c != ')') {
      name.push_back(c);
    }
  }
  return name;
}

int run_fixtures(const std::string& emit_dir) {
  json output;
  output["command"] = "fixtures";
  output["ids"] = fixture_ids();
  json emitted = json::array();
  if (!emit_dir.empty()) {
    std::filesystem::create_directories(emit_dir);
    for (const auto& id : fixture_ids()) {
      const Fixture fix = fixture(id);
      const auto path =
          std::filesystem::path(emit_dir) / (sanitize_id(id) + ".json");
      std::ofstream stream(path, std::ios::binary);
      if (!stream) {
        throw Error("cannot write '" + path.string() + "'");
      }
      stream << serialize_config({fix.universe, fix.config});
      emitted.push_back(path.string());
    }
  }
  output["emitted"] = std::move(emitted);
  emit_report(output);
  std::cerr << output["ids"].size() << " fixtures\n";
  return kExitOk;
}

int run_fuzz(int seeds, int start, const std::string& bounds_text,
             const Budgets& budgets) {
  GeneratorBounds bounds;
  if (!bounds_text.empty()) {
    int values[4];
    std::stringstream stream(bounds_text);
    std::string item;
    int parsed = 0;
    while (std::getline(stream, item, ',') && parsed < 4) {
      values[parsed++] = std::stoi(item);
    }
    if (parsed != 4) {
      throw Error("--bounds expects layers,ports,types,attachments");
    }
    bounds.max_layers = values[0];
    bounds.max_ports_per_side = values[1];
    bounds.max_type_size = values[2];
    bounds.max_attachments = values[3];
  }

  json violations = json::array();
  std::uint64_t skipped_pairs = 0;
  for (int seed = start; seed < start + seeds; ++seed) {
    const Model model = random_configuration(std::uint64_t(seed), bounds);
    if (!validate_configuration(model.config, model.universe).ok()) {
      json entry;
      entry["seed"] = seed;
      entry["check"] = "generator validity";
      violations.push_back(std::move(entry));
      continue;
    }
    const auto report = check_theorems(model.universe, model.config, budgets,
                                       "seed-" + std::to_string(seed));
    skipped_pairs += report.skipped.size();
    const auto record = [&violations, seed](const char* name,
                                            CheckStatus status) {
      if (status == CheckStatus::failed) {
        json entry;
        entry["seed"] = seed;
        entry["check"] = name;
        violations.push_back(std::move(entry));
      }
    };
    record("theorem1", report.theorem1);
    record("theorem2", report.theorem2);
    record("corollary", report.corollary);
    record("lemma1", report.lemma1);
    record("proposition1", report.prop1);
  }

  json output;
  output["command"] = "fuzz";
  output["seeds"] = seeds;
  output["start"] = start;
  json bounds_json;
  bounds_json["layers"] = bounds.max_layers;
  bounds_json["ports"] = bounds.max_ports_per_side;
  bounds_json["types"] = bounds.max_type_size;
  bounds_json["attachments"] = bounds.max_attachments;
  output["bounds"] = std::move(bounds_json);
  output["violations"] = violations;
  output["skipped_pairs"] = skipped_pairs;
  emit_report(output);
  std::cerr << "checked " << seeds << " seed(s): " << violations.size()
            << " violation(s), " << skipped_pairs << " skipped pair(s)\n";
  return violations.empty() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analyzer for layered architecture configurations"};
  app.require_subcommand(1);

  std::string file;
  std::string layer;
  std::string input;
  std::string closure_kind;
  std::string relation = "attachment";
  std::string emit_dir;
  std::string bounds_text;
  std::uint64_t budget_flag = 0;
  int seeds = 0;
  int start = 1;

  auto* validate_cmd =
      app.add_subcommand("validate", "check a configuration document");
  validate_cmd->add_option("file", file)->required();

  auto* closure_cmd =
      app.add_subcommand("closure", "attachment closure of a layer");
  closure_cmd->add_option("file", file)->required();
  closure_cmd->add_option("--layer", layer)->required();

  auto* eval_cmd =
      app.add_subcommand("eval", "configuration semantics of a layer");
  eval_cmd->add_option("file", file)->required();
  eval_cmd->add_option("--layer", layer)->required();
  eval_cmd->add_option("--input", input,
                       "open-input valuation, e.g. i0=B,i1=D");

  auto* syndep_cmd =
      app.add_subcommand("syndep", "syntactic dependency relation");
  syndep_cmd->add_option("file", file)->required();
  syndep_cmd->add_option("--closure", closure_kind)
      ->check(CLI::IsMember({"trans", "refl-trans"}));

  auto* semdep_cmd =
      app.add_subcommand("semdep", "semantic dependency relation");
  semdep_cmd->add_option("file", file)->required();
  semdep_cmd->add_option("--budget", budget_flag,
                         "max update tables per layer pair");

  auto* usable_cmd = app.add_subcommand("usable", "usability check");
  usable_cmd->add_option("file", file)->required();

  auto* check_cmd =
      app.add_subcommand("check", "verify the dependency theorems");
  check_cmd->add_option("file", file)->required();
  check_cmd->add_option("--budget", budget_flag,
                        "max update tables per layer pair");

  auto* dot_cmd = app.add_subcommand("dot", "graph export");
  dot_cmd->add_option("file", file)->required();
  dot_cmd->add_option("--relation", relation)
      ->check(CLI::IsMember({"attachment", "syn", "sem"}));

  auto* fixtures_cmd =
      app.add_subcommand("fixtures", "list or emit the bundled fixtures");
  fixtures_cmd->add_option("--emit", emit_dir, "write fixture documents here");

  auto* fuzz_cmd =
      app.add_subcommand("fuzz", "theorem checks over random configurations");
  fuzz_cmd->add_option("--seeds", seeds)->required();
  fuzz_cmd->add_option("--start", start);
  fuzz_cmd->add_option("--bounds", bounds_text,
                       "layers,ports,types,attachments");
  fuzz_cmd->add_option("--budget", budget_flag,
                       "max update tables per layer pair");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    Budgets budgets;
    budgets.tables = budget_flag != 0 ? budget_flag : default_table_budget();
    if (validate_cmd->parsed()) {
      return run_validate(file);
    }
    if (closure_cmd->parsed()) {
      return run_closure(file, layer);
    }
    if (eval_cmd->parsed()) {
      return run_eval(file, layer, input);
    }
    if (syndep_cmd->parsed()) {
      return run_syndep(file, closure_kind);
    }
    if (semdep_cmd->parsed()) {
      return run_semdep(file, budgets);
    }
    if (usable_cmd->parsed()) {
      return run_usable(file, budgets);
    }
    if (check_cmd->parsed()) {
      return run_check(file, budgets);
    }
    if (dot_cmd->parsed()) {
      return run_dot(file, relation, budgets);
    }
    if (fixtures_cmd->parsed()) {
      return run_fixtures(emit_dir);
    }
    if (fuzz_cmd->parsed()) {
      return run_fuzz(seeds, start, bounds_text, budgets);
    }
  } catch (const BudgetError& error) {
    std::cerr << "budget exceeded: " << error.what() << "\n";
    return kExitBudget;
  } catch (const Error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitOk;
}
