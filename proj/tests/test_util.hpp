#pragma once

#include <algorithm>
#include <initializer_list>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lasem/dependency.hpp"
#include "lasem/model.hpp"

namespace lasem::testing {

inline Valuation val(
    std::initializer_list<std::pair<PortId, ServiceId>> bindings) {
  Valuation result;
  for (const auto& [port, service] : bindings) {
    result.bindings.emplace(port, service);
  }
  return result;
}

/// Independent semantics oracle: enumerates valuations of the FULL port set
/// of the configuration and keeps those that pin open inputs to `mu`, carry
/// attached values across, and realize every layer's behavior exactly on
/// all of its outputs. Restrictions of survivors to the layer's outputs.
///
/// Unlike the closure-based algorithm this demands a globally consistent
/// valuation, so it can be strictly smaller on configurations whose ports
/// outside the closure admit no consistent assignment.
inline std::set<Valuation> full_enumeration_semantics(const Model& model,
                                                      const LayerName& layer,
                                                      const Valuation& mu) {
  const auto all = ports_all(model.config);
  const auto open = open_inputs(model.config);
  const Layer& target = model.config.layer(layer);

  std::set<Valuation> result;
  for (const auto& nu : valuation_space(all, model.universe)) {
    bool ok = true;
    for (const auto& port : open) {
      if (nu.at(port) != mu.at(port)) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      continue;
    }
    for (const auto& [in_port, out_port] : model.config.attachment) {
      if (nu.at(in_port) != nu.at(out_port)) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      continue;
    }
    for (const auto& [name, member] : model.config.layers) {
      const Valuation input = nu.restricted_to(member.inputs);
      const Valuation output = nu.restricted_to(member.outputs);
      const auto row = member.behavior.rows.find(input);
      if (row == member.behavior.rows.end() ||
          row->second.count(output) == 0) {
        ok = false;
        break;
      }
    }
    if (ok) {
      result.insert(nu.restricted_to(target.outputs));
    }
  }
  return result;
}

/// Independent closure oracle: intersection of every subset of the
/// configuration's ports that contains the layer's outputs, follows
/// attachments out of contained inputs, and contains the inputs of every
/// layer owning a contained output. Exponential; callers keep the port
/// count small.
inline std::set<PortId> closure_subset_oracle(const Configuration& config,
                                              const LayerName& layer) {
  const auto all_set = ports_all(config);
  const std::vector<PortId> all(all_set.begin(), all_set.end());
  const Layer& base = config.layer(layer);

  std::set<PortId> intersection = all_set;
  const std::uint64_t subset_count = std::uint64_t{1} << all.size();
  for (std::uint64_t bits = 0; bits < subset_count; ++bits) {
    std::set<PortId> subset;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (bits & (std::uint64_t{1} << i)) {
        subset.insert(all[i]);
      }
    }
    const bool has_outputs = std::includes(subset.begin(), subset.end(),
                                           base.outputs.begin(),
                                           base.outputs.end());
    if (!has_outputs) {
      continue;
    }
    bool closed = true;
    for (const auto& [in_port, out_port] : config.attachment) {
      if (subset.count(in_port) != 0 && subset.count(out_port) == 0) {
        closed = false;
        break;
      }
    }
    if (closed) {
      for (const auto& [name, member] : config.layers) {
        const bool touches =
            std::any_of(member.outputs.begin(), member.outputs.end(),
                        [&subset](const PortId& port) {
                          return subset.count(port) != 0;
                        });
        if (touches &&
            !std::includes(subset.begin(), subset.end(),
                           member.inputs.begin(), member.inputs.end())) {
          closed = false;
          break;
        }
      }
    }
    if (closed) {
      std::set<PortId> narrowed;
      std::set_intersection(intersection.begin(), intersection.end(),
                            subset.begin(), subset.end(),
                            std::inserter(narrowed, narrowed.begin()));
      intersection = std::move(narrowed);
    }
  }
  return intersection;
}

/// No layer transitively depends on itself.
inline bool is_acyclic(const Configuration& config) {
  const auto closure = transitive_closure(syntactic_dependency(config));
  return std::none_of(closure.universe.begin(), closure.universe.end(),
                      [&closure](const LayerName& layer) {
                        return closure.contains(layer, layer);
                      });
}

/// Every port type of the configuration is nonempty and every behavior row
/// has at least one output valuation.
inline bool is_total(const Model& model) {
  for (const auto& port : ports_all(model.config)) {
    if (model.universe.type_of(port).empty()) {
      return false;
    }
  }
  for (const auto& [name, layer] : model.config.layers) {
    for (const auto& [input, outputs] : layer.behavior.rows) {
      if (outputs.empty()) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace lasem::testing
