#include "lasem/semantics.hpp"

#include <algorithm>
#include <string>

namespace lasem {

namespace {

std::string budget_message(const char* what, const std::set<PortId>& ports,
                           std::uint64_t size, std::uint64_t budget) {
  std::string message = std::string(what) + " over " +
                        std::to_string(ports.size()) + " ports has ";
  if (size == UINT64_MAX) {
    message += "more than 2^64";
  } else {
    message += std::to_string(size);
  }
  message += " valuations, exceeding the state budget of " +
             std::to_string(budget);
  return message;
}

std::vector<Valuation> enumerate_within_budget(const std::set<PortId>& ports,
                                               const Universe& universe,
                                               std::uint64_t budget,
                                               const char* what) {
  const std::uint64_t size = valuation_space_size(ports, universe);
  if (size > budget) {
    throw BudgetError(budget_message(what, ports, size, budget), size, budget);
  }
  return valuation_space(ports, universe);
}

}  // namespace

ClosureResult attachment_closure(const Configuration& config,
                                 const LayerName& layer) {
  const Layer& base = config.layer(layer);

  ClosureResult result;
  result.layer = layer;

  std::set<PortId> current;
  while (true) {
    ++result.iterations;
    std::set<PortId> next = base.outputs;
    for (const auto& [in_port, out_port] : config.attachment) {
      if (current.count(in_port) != 0) {
        next.insert(out_port);
      }
    }
    for (const auto& [name, owner] : config.layers) {
      const bool touches = std::any_of(
          owner.outputs.begin(), owner.outputs.end(),
          [&current](const PortId& port) { return current.count(port) != 0; });
      if (touches) {
        next.insert(owner.inputs.begin(), owner.inputs.end());
      }
    }
    if (next == current) {
      break;
    }
    current = std::move(next);
  }
  result.ports = std::move(current);
  return result;
}

SemanticsEvaluator::SemanticsEvaluator(const Universe& universe,
                                       const Configuration& config,
                                       const LayerName& layer,
                                       std::uint64_t state_budget)
    : layer_(layer), closure_(attachment_closure(config, layer)) {
  open_ports_ = open_inputs(config);
  const Layer& base = config.layer(layer);

  // Layers owning an output port inside the closure; their inputs are all
  // inside the closure as well, so each candidate determines a full input
  // valuation for them.
  std::vector<const Layer*> involved;
  for (const auto& [name, owner] : config.layers) {
    const bool touches = std::any_of(
        owner.outputs.begin(), owner.outputs.end(), [this](const PortId& p) {
          return closure_.ports.count(p) != 0;
        });
    if (touches) {
      involved.push_back(&owner);
    }
  }

  auto space = enumerate_within_budget(closure_.ports, universe, state_budget,
                                       "attachment closure");
  candidates_.reserve(space.size());
  for (auto& full : space) {
    Candidate candidate;
    candidate.layer_outputs = full.restricted_to(base.outputs);
    candidate.open_part = full.restricted_to(open_ports_);
    candidate.attachment_consistent = true;
    for (const auto& [in_port, out_port] : config.attachment) {
      if (full.defines(in_port) && full.at(in_port) != full.at(out_port)) {
        candidate.attachment_consistent = false;
        break;
      }
    }
    if (candidate.attachment_consistent) {
      for (const Layer* owner : involved) {
        BehaviorQuery query;
        query.owner = owner->name;
        query.input = full.restricted_to(owner->inputs);
        std::set<PortId> covered;
        for (const auto& port : owner->outputs) {
          if (closure_.ports.count(port) != 0) {
            covered.insert(port);
          }
        }
        query.required_outputs = full.restricted_to(covered);
        candidate.queries.push_back(std::move(query));
      }
    }
    candidate.full = std::move(full);
    candidates_.push_back(std::move(candidate));
  }
}

bool SemanticsEvaluator::satisfied(const BehaviorQuery& query,
                                   const Configuration& config) const {
  const Layer& owner = config.layer(query.owner);
  auto row = owner.behavior.rows.find(query.input);
  if (row == owner.behavior.rows.end()) {
    throw Error("layer '" + query.owner + "' has no behavior row for " +
                query.input.to_string());
  }
  return std::any_of(row->second.begin(), row->second.end(),
                     [&query](const Valuation& entry) {
                       return entry.extends(query.required_outputs);
                     });
}

std::vector<Valuation> SemanticsEvaluator::consistent(
    const Configuration& config, const Valuation& open_input) const {
  if (open_input.ports() != open_ports_) {
    throw Error("input valuation " + open_input.to_string() +
                " does not cover exactly the open input ports");
  }
  const Valuation expected = open_input.restricted_to(closure_.ports);

  std::vector<Valuation> result;
  for (const auto& candidate : candidates_) {
    if (!candidate.attachment_consistent || candidate.open_part != expected) {
      continue;
    }
    const bool all_rows = std::all_of(
        candidate.queries.begin(), candidate.queries.end(),
        [&](const BehaviorQuery& query) { return satisfied(query, config); });
    if (all_rows) {
      result.push_back(candidate.full);
    }
  }
  return result;
}

std::set<Valuation> SemanticsEvaluator::evaluate(
    const Configuration& config, const Valuation& open_input) const {
  if (open_input.ports() != open_ports_) {
    throw Error("input valuation " + open_input.to_string() +
                " does not cover exactly the open input ports");
  }
  const Valuation expected = open_input.restricted_to(closure_.ports);

  std::set<Valuation> result;
  for (const auto& candidate : candidates_) {
    if (!candidate.attachment_consistent || candidate.open_part != expected) {
      continue;
    }
    const bool all_rows = std::all_of(
        candidate.queries.begin(), candidate.queries.end(),
        [&](const BehaviorQuery& query) { return satisfied(query, config); });
    if (all_rows) {
      result.insert(candidate.layer_outputs);
    }
  }
  return result;
}

std::vector<Valuation> consistent_valuations(const Universe& universe,
                                             const Configuration& config,
                                             const LayerName& layer,
                                             const Valuation& open_input,
                                             std::uint64_t state_budget) {
  SemanticsEvaluator evaluator(universe, config, layer, state_budget);
  return evaluator.consistent(config, open_input);
}

std::set<Valuation> config_semantics(const Universe& universe,
                                     const Configuration& config,
                                     const LayerName& layer,
                                     const Valuation& open_input,
                                     std::uint64_t state_budget) {
  SemanticsEvaluator evaluator(universe, config, layer, state_budget);
  return evaluator.evaluate(config, open_input);
}

SemanticsTable semantics_table(const Universe& universe,
                               const Configuration& config,
                               const LayerName& layer,
                               std::uint64_t state_budget) {
  const auto open = open_inputs(config);
  auto domain = enumerate_within_budget(open, universe, state_budget,
                                        "open input space");
  SemanticsEvaluator evaluator(universe, config, layer, state_budget);

  SemanticsTable table;
  table.layer = layer;
  for (const auto& input : domain) {
    table.entries.emplace(input, evaluator.evaluate(config, input));
  }
  return table;
}

}  // namespace lasem
