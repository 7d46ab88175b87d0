#include "lasem/dependency.hpp"

#include <algorithm>
#include <random>

#include "lasem/update.hpp"

namespace lasem {

std::string to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::syntactic:
      return "syntactic";
    case RelationKind::syntactic_transitive:
      return "syntactic+";
    case RelationKind::syntactic_reflexive_transitive:
      return "syntactic*";
    case RelationKind::semantic:
      return "semantic";
  }
  return "unknown";
}

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::passed:
      return "passed";
    case CheckStatus::failed:
      return "failed";
    case CheckStatus::not_applicable:
      return "not applicable";
    case CheckStatus::skipped_budget:
      return "skipped: budget";
  }
  return "unknown";
}

DependencyRelation syntactic_dependency(const Configuration& config) {
  DependencyRelation relation;
  relation.kind = RelationKind::syntactic;
  for (const auto& [name, layer] : config.layers) {
    relation.universe.insert(name);
  }
  for (const auto& [in_port, out_port] : config.attachment) {
    relation.pairs.emplace(project(out_port, config).name,
                           project(in_port, config).name);
  }
  return relation;
}

namespace {

DependencyRelation close(const DependencyRelation& relation, bool reflexive) {
  DependencyRelation result = relation;
  result.kind = reflexive ? RelationKind::syntactic_reflexive_transitive
                          : RelationKind::syntactic_transitive;
  if (reflexive) {
    for (const auto& layer : result.universe) {
      result.pairs.emplace(layer, layer);
    }
  }
  // Warshall over the (small) layer-name universe.
  for (const auto& mid : result.universe) {
    for (const auto& from : result.universe) {
      if (!result.contains(from, mid)) {
        continue;
      }
      for (const auto& to : result.universe) {
        if (result.contains(mid, to)) {
          result.pairs.emplace(from, to);
        }
      }
    }
  }
  return result;
}

}  // namespace

DependencyRelation transitive_closure(const DependencyRelation& relation) {
  return close(relation, false);
}

DependencyRelation reflexive_transitive_closure(
    const DependencyRelation& relation) {
  return close(relation, true);
}

std::set<LayerName> dependents_of(const Configuration& config,
                                  const LayerName& target,
                                  RelationKind kind) {
  if (!config.has_layer(target)) {
    throw Error("unknown layer '" + target + "'");
  }
  DependencyRelation relation = syntactic_dependency(config);
  switch (kind) {
    case RelationKind::syntactic:
      break;
    case RelationKind::syntactic_transitive:
      relation = transitive_closure(relation);
      break;
    case RelationKind::syntactic_reflexive_transitive:
      relation = reflexive_transitive_closure(relation);
      break;
    case RelationKind::semantic:
      throw Error("dependents_of supports the syntactic flavors only");
  }
  std::set<LayerName> result;
  for (const auto& [from, to] : relation.pairs) {
    if (to == target) {
      result.insert(from);
    }
  }
  return result;
}

UsabilityResult is_usable(const Universe& universe,
                          const Configuration& config,
                          std::uint64_t state_budget) {
  const auto open = open_inputs(config);
  const std::uint64_t open_size = valuation_space_size(open, universe);
  if (open_size > state_budget) {
    throw BudgetError("open input space has " + std::to_string(open_size) +
                          " valuations, exceeding the state budget of " +
                          std::to_string(state_budget),
                      open_size, state_budget);
  }

  std::vector<SemanticsEvaluator> evaluators;
  evaluators.reserve(config.layers.size());
  for (const auto& [name, layer] : config.layers) {
    evaluators.emplace_back(universe, config, name, state_budget);
  }

  for (const auto& input : valuation_space(open, universe)) {
    const bool all_nonempty =
        std::all_of(evaluators.begin(), evaluators.end(),
                    [&](const SemanticsEvaluator& evaluator) {
                      return !evaluator.evaluate(config, input).empty();
                    });
    if (all_nonempty) {
      return {true, input};
    }
  }
  return {false, std::nullopt};
}

std::uint64_t update_table_count(const Universe& universe,
                                 const Layer& layer) {
  const std::uint64_t in_size = valuation_space_size(layer.inputs, universe);
  const std::uint64_t out_size = valuation_space_size(layer.outputs, universe);
  if (in_size == 0 || out_size == 0) {
    // Only one table exists: every definable row maps to the empty set.
    return 1;
  }
  if (out_size >= 64 || in_size > 63 / out_size) {
    return UINT64_MAX;
  }
  const std::uint64_t bits = out_size * in_size;
  return std::uint64_t{1} << bits;
}

namespace {

/// Enumerates all total behavior tables for a layer in canonical order:
/// table index k assigns to the j-th input valuation the row whose
/// characteristic bitmask over the output valuation space is digit j of k
/// in base 2^|out-valuations|. Index 0 is the constant-empty-set table.
class TableEnumerator {
 public:
  TableEnumerator(const Universe& universe, const Layer& layer)
      : inputs_(valuation_space(layer.inputs, universe)),
        outputs_(valuation_space(layer.outputs, universe)) {
    skeleton_.input_ports = layer.inputs;
    skeleton_.output_ports = layer.outputs;
  }

  BehaviorTable table_at(std::uint64_t index) const {
    BehaviorTable table = skeleton_;
    const std::uint64_t mask =
        outputs_.empty() ? 0 : ((std::uint64_t{1} << outputs_.size()) - 1);
    std::uint64_t rest = index;
    for (const auto& input : inputs_) {
      std::set<Valuation> row;
      const std::uint64_t bits = rest & mask;
      for (std::size_t b = 0; b < outputs_.size(); ++b) {
        if (bits & (std::uint64_t{1} << b)) {
          row.insert(outputs_[b]);
        }
      }
      table.rows.emplace(input, std::move(row));
      rest = outputs_.empty() ? 0 : (rest >> outputs_.size());
    }
    return table;
  }

  /// Uniformly random table, used for sampling when exhaustive enumeration
  /// is over budget.
  BehaviorTable sample(std::mt19937_64& rng) const {
    BehaviorTable table = skeleton_;
    for (const auto& input : inputs_) {
      std::set<Valuation> row;
      for (const auto& output : outputs_) {
        if (rng() % 2 == 0) {
          row.insert(output);
        }
      }
      table.rows.emplace(input, std::move(row));
    }
    return table;
  }

 private:
  std::vector<Valuation> inputs_;
  std::vector<Valuation> outputs_;
  BehaviorTable skeleton_;
};

std::uint64_t checked_table_count(const Universe& universe, const Layer& layer,
                                  const LayerName& to, const Budgets& budgets) {
  const std::uint64_t count = update_table_count(universe, layer);
  // Saturated counts are over any budget; the enumerator's bitmask encoding
  // also requires the exponent to fit.
  if (count == UINT64_MAX || count > budgets.tables) {
    const std::string shown =
        count == UINT64_MAX ? "more than 2^63" : std::to_string(count);
    throw BudgetError("deciding semantic dependency (" + layer.name + ", " +
                          to + ") requires " + shown +
                          " update tables, exceeding the budget of " +
                          std::to_string(budgets.tables),
                      count, budgets.tables);
  }
  return count;
}

}  // namespace

bool semantic_dependency(const Universe& universe, const Configuration& config,
                         const LayerName& from, const LayerName& to,
                         const Budgets& budgets) {
  const Layer& source = config.layer(from);
  config.layer(to);
  const std::uint64_t count =
      checked_table_count(universe, source, to, budgets);

  const auto open = open_inputs(config);
  const std::uint64_t open_size = valuation_space_size(open, universe);
  if (open_size > budgets.states) {
    throw BudgetError("open input space has " + std::to_string(open_size) +
                          " valuations, exceeding the state budget of " +
                          std::to_string(budgets.states),
                      open_size, budgets.states);
  }
  const auto domain = valuation_space(open, universe);

  // The closure and its candidate valuations depend only on ports and
  // attachment, so one evaluator serves all behavior updates.
  SemanticsEvaluator evaluator(universe, config, to, budgets.states);
  std::map<Valuation, std::set<Valuation>> baseline;
  for (const auto& input : domain) {
    baseline.emplace(input, evaluator.evaluate(config, input));
  }

  TableEnumerator tables(universe, source);
  Configuration updated = config;
  Layer& target = updated.layers.at(from);
  for (std::uint64_t index = 0; index < count; ++index) {
    target.behavior = tables.table_at(index);
    for (const auto& input : domain) {
      if (evaluator.evaluate(updated, input) != baseline.at(input)) {
        return true;
      }
    }
  }
  return false;
}

DependencyRelation semantic_dependency_relation(const Universe& universe,
                                                const Configuration& config,
                                                const Budgets& budgets) {
  DependencyRelation relation;
  relation.kind = RelationKind::semantic;
  for (const auto& [name, layer] : config.layers) {
    relation.universe.insert(name);
  }
  for (const auto& from : relation.universe) {
    for (const auto& to : relation.universe) {
      if (semantic_dependency(universe, config, from, to, budgets)) {
        relation.pairs.emplace(from, to);
      }
    }
  }
  return relation;
}

bool TheoremReport::all_passed() const {
  for (CheckStatus status : {theorem1, theorem2, corollary, lemma1, prop1}) {
    if (status == CheckStatus::failed ||
        status == CheckStatus::skipped_budget) {
      return false;
    }
  }
  return usable_status != CheckStatus::skipped_budget;
}

bool TheoremReport::any_failed() const {
  for (CheckStatus status : {theorem1, theorem2, corollary, lemma1, prop1}) {
    if (status == CheckStatus::failed) {
      return true;
    }
  }
  return false;
}

bool TheoremReport::any_skipped() const {
  for (CheckStatus status :
       {usable_status, theorem1, theorem2, corollary, lemma1, prop1}) {
    if (status == CheckStatus::skipped_budget) {
      return true;
    }
  }
  return false;
}

TheoremReport check_theorems(const Universe& universe,
                             const Configuration& config,
                             const Budgets& budgets,
                             const std::string& config_id) {
  TheoremReport report;
  report.config_id = config_id;

  const DependencyRelation syn = syntactic_dependency(config);
  const DependencyRelation rt = reflexive_transitive_closure(syn);

  // Tri-state semantic dependency per pair; pairs over the table budget are
  // recorded and the checks needing them degrade to "skipped".
  std::map<std::pair<LayerName, LayerName>, bool> semdep;
  for (const auto& from : rt.universe) {
    for (const auto& to : rt.universe) {
      try {
        semdep.emplace(std::make_pair(from, to),
                       semantic_dependency(universe, config, from, to,
                                           budgets));
      } catch (const BudgetError& error) {
        report.skipped.push_back({from, to, error.required});
      }
    }
  }
  const auto decided = [&semdep](const LayerName& from, const LayerName& to) {
    return semdep.find({from, to}) != semdep.end();
  };

  try {
    auto usability = is_usable(universe, config, budgets.states);
    report.usable = usability.usable;
    report.usable_witness = usability.witness;
    report.usable_status = CheckStatus::passed;
  } catch (const BudgetError&) {
    report.usable_status = CheckStatus::skipped_budget;
  }

  // Theorem 2: semantic dependency within the reflexive-transitive closure.
  report.theorem2 = CheckStatus::passed;
  for (const auto& [pair, holds] : semdep) {
    if (holds && !rt.contains(pair.first, pair.second)) {
      report.theorem2 = CheckStatus::failed;
      report.theorem2_counterexample = pair;
      break;
    }
  }
  if (report.theorem2 == CheckStatus::passed) {
    for (const auto& from : rt.universe) {
      for (const auto& to : rt.universe) {
        if (!rt.contains(from, to) && !decided(from, to)) {
          report.theorem2 = CheckStatus::skipped_budget;
        }
      }
    }
  }

  // Containment of the closure in the semantic relation; meaningful on its
  // own for non-usable configurations.
  bool containment_known = true;
  bool containment_holds = true;
  for (const auto& [from, to] : rt.pairs) {
    auto it = semdep.find({from, to});
    if (it == semdep.end()) {
      containment_known = false;
    } else if (!it->second) {
      containment_holds = false;
      if (report.theorem1 == CheckStatus::not_applicable) {
        report.theorem1_counterexample = std::make_pair(from, to);
      }
    }
  }
  if (containment_known || !containment_holds) {
    report.rt_closure_in_semantic = containment_holds;
  }

  // Theorem 1 and the corollary apply to usable configurations only.
  if (report.usable_status == CheckStatus::skipped_budget) {
    report.theorem1 = CheckStatus::skipped_budget;
    report.corollary = CheckStatus::skipped_budget;
    report.theorem1_counterexample.reset();
  } else if (!report.usable) {
    report.theorem1 = CheckStatus::not_applicable;
    report.corollary = CheckStatus::not_applicable;
    report.theorem1_counterexample.reset();
  } else {
    if (!containment_holds) {
      report.theorem1 = CheckStatus::failed;
    } else if (!containment_known) {
      report.theorem1 = CheckStatus::skipped_budget;
      report.theorem1_counterexample.reset();
    } else {
      report.theorem1 = CheckStatus::passed;
      report.theorem1_counterexample.reset();
    }
    if (report.theorem1 == CheckStatus::passed &&
        report.theorem2 == CheckStatus::passed) {
      report.corollary = CheckStatus::passed;
    } else if (report.theorem1 == CheckStatus::failed ||
               report.theorem2 == CheckStatus::failed) {
      report.corollary = CheckStatus::failed;
    } else {
      report.corollary = CheckStatus::skipped_budget;
    }
  }

  // Lemma 1: ports in a layer's closure belong to layers it reflexively-
  // transitively syntactically depends on.
  report.lemma1 = CheckStatus::passed;
  for (const auto& [name, layer] : config.layers) {
    const auto closure = attachment_closure(config, name);
    for (const auto& port : closure.ports) {
      const LayerName owner = project(port, config).name;
      if (!rt.contains(owner, name)) {
        report.lemma1 = CheckStatus::failed;
        report.lemma1_offender = std::make_pair(port, name);
        break;
      }
    }
    if (report.lemma1 == CheckStatus::failed) {
      break;
    }
  }

  // Proposition 1: behavior updates preserve validity. Exhaustive per layer
  // when within budget, otherwise a seeded sample.
  report.prop1 = CheckStatus::passed;
  for (const auto& [name, layer] : config.layers) {
    TableEnumerator tables(universe, layer);
    std::vector<BehaviorTable> updates;
    const std::uint64_t count = update_table_count(universe, layer);
    if (count != UINT64_MAX && count <= budgets.tables) {
      for (std::uint64_t index = 0; index < count; ++index) {
        updates.push_back(tables.table_at(index));
      }
    } else {
      std::mt19937_64 rng(0x1a5e0000u ^ config.layers.size());
      for (int i = 0; i < 64; ++i) {
        updates.push_back(tables.sample(rng));
      }
    }
    for (auto& table : updates) {
      Configuration updated;
      try {
        updated = update_configuration(config, {name, std::move(table)},
                                       universe);
      } catch (const Error&) {
        report.prop1 = CheckStatus::failed;
        break;
      }
      if (!validate_configuration(updated, universe).ok()) {
        report.prop1 = CheckStatus::failed;
        break;
      }
    }
    if (report.prop1 == CheckStatus::failed) {
      break;
    }
  }

  return report;
}

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
  bool chance(int percent) { return below(100) < std::uint64_t(percent); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

std::set<ServiceId> random_type(Rng& rng,
                                const std::vector<ServiceId>& pool,
                                int max_size) {
  std::set<ServiceId> type;
  if (rng.chance(20)) {
    return type;  // empty type; the degenerate corner the analysis cares
                  // about
  }
  const std::uint64_t size = 1 + rng.below(max_size);
  while (type.size() < size) {
    type.insert(pool[rng.below(pool.size())]);
  }
  return type;
}

}  // namespace

Model random_configuration(std::uint64_t seed, const GeneratorBounds& bounds) {
  if (bounds.max_layers < 1 || bounds.max_ports_per_side < 1 ||
      bounds.max_type_size < 1 || bounds.max_attachments < 0) {
    throw Error("random_configuration bounds must be positive");
  }

  Rng rng(seed);
  constexpr int kAttempts = 100;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Model model;
    std::vector<ServiceId> pool;
    for (int i = 0; i < bounds.max_type_size + 2; ++i) {
      pool.push_back("s" + std::to_string(i));
      model.universe.add_service(pool.back());
    }

    struct PortPlan {
      PortId id;
      LayerName owner;
    };
    std::vector<PortPlan> inputs;
    std::vector<PortPlan> outputs;
    const std::uint64_t layer_count = 1 + rng.below(bounds.max_layers);
    for (std::uint64_t j = 0; j < layer_count; ++j) {
      const LayerName name = "L" + std::to_string(j);
      const std::uint64_t in_count = rng.below(bounds.max_ports_per_side + 1);
      // At least one output port: a layer without outputs has constant
      // semantics that no behavior update can influence.
      const std::uint64_t out_count = 1 + rng.below(bounds.max_ports_per_side);
      for (std::uint64_t k = 0; k < in_count; ++k) {
        inputs.push_back({name + "_i" + std::to_string(k), name});
      }
      for (std::uint64_t k = 0; k < out_count; ++k) {
        outputs.push_back({name + "_o" + std::to_string(k), name});
      }
    }

    std::map<PortId, PortId> attachment;
    for (const auto& input : inputs) {
      if (int(attachment.size()) >= bounds.max_attachments) {
        break;
      }
      if (!outputs.empty() && rng.chance(50)) {
        attachment.emplace(input.id, outputs[rng.below(outputs.size())].id);
      }
    }

    std::map<PortId, std::set<ServiceId>> types;
    for (const auto& output : outputs) {
      types[output.id] = random_type(rng, pool, bounds.max_type_size);
    }
    for (const auto& input : inputs) {
      auto attached = attachment.find(input.id);
      if (attached == attachment.end()) {
        types[input.id] = random_type(rng, pool, bounds.max_type_size);
        continue;
      }
      // Type compatibility by construction: the input admits at least
      // everything its feeding output can carry.
      std::set<ServiceId> type = types.at(attached->second);
      while (int(type.size()) < bounds.max_type_size && rng.chance(30)) {
        type.insert(pool[rng.below(pool.size())]);
      }
      types[input.id] = std::move(type);
    }

    for (const auto& input : inputs) {
      model.universe.add_port(input.id, PortDirection::input,
                              types.at(input.id));
    }
    for (const auto& output : outputs) {
      model.universe.add_port(output.id, PortDirection::output,
                              types.at(output.id));
    }

    bool oversized = false;
    std::map<LayerName, BehaviorTable> behaviors;
    for (const auto& input : inputs) {
      behaviors[input.owner].input_ports.insert(input.id);
    }
    for (const auto& output : outputs) {
      behaviors[output.owner].output_ports.insert(output.id);
    }
    for (auto& [name, table] : behaviors) {
      if (valuation_space_size(table.input_ports, model.universe) > 4096 ||
          valuation_space_size(table.output_ports, model.universe) > 4096) {
        oversized = true;
        break;
      }
      const auto domain = valuation_space(table.input_ports, model.universe);
      const auto range = valuation_space(table.output_ports, model.universe);
      for (const auto& input_val : domain) {
        std::set<Valuation> row;
        if (!range.empty() && !rng.chance(20)) {
          while (row.empty()) {
            for (const auto& output_val : range) {
              if (rng.chance(50)) {
                row.insert(output_val);
              }
            }
          }
        }
        table.rows.emplace(input_val, std::move(row));
      }
    }
    if (oversized) {
      continue;
    }

    for (auto& [name, table] : behaviors) {
      model.config.add_layer(make_layer(name, std::move(table)));
    }
    model.config.attachment = std::move(attachment);

    if (validate_configuration(model.config, model.universe).ok()) {
      return model;
    }
  }
  throw Error("random_configuration found no valid configuration for seed " +
              std::to_string(seed));
}

}  // namespace lasem
