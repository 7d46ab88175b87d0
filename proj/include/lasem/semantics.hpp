#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lasem/model.hpp"

namespace lasem {

/// Resource limits for the enumerative algorithms. `states` bounds the
/// number of candidate valuations materialized per closure; `tables` bounds
/// the number of behavior tables enumerated per dependency query.
struct Budgets {
  std::uint64_t states = 1'000'000;
  std::uint64_t tables = 4'096;
};

/// The least port set that contains a layer's output ports, follows the
/// attachment out of every contained input port, and contains all input
/// ports of any layer owning a contained output port.
struct ClosureResult {
  LayerName layer;
  std::set<PortId> ports;
  int iterations = 0;  // rounds of the fixpoint iteration, incl. the
                       // stabilizing one

  auto operator<=>(const ClosureResult&) const = default;
};

/// The configuration semantics of one layer, tabulated over every valuation
/// of the configuration's open input ports. Equality of these tables is the
/// notion of "same semantics" used by the dependency analysis.
struct SemanticsTable {
  LayerName layer;
  std::map<Valuation, std::set<Valuation>> entries;

  auto operator<=>(const SemanticsTable&) const = default;
};

/// Computed bottom-up from the empty set; stabilizes after at most
/// |ports_all(config)| + 1 rounds. Throws Error on an unknown layer.
ClosureResult attachment_closure(const Configuration& config,
                                 const LayerName& layer);

/// Evaluates the configuration semantics of one layer by filtering the
/// valuation space of the layer's attachment closure. The port-level
/// structure (closure, candidate valuations, attachment equalities and the
/// per-candidate behavior queries) does not depend on any behavior table,
/// so one evaluator can be reused across behavior updates of the same
/// configuration; only row lookups are re-done per call.
///
/// A candidate valuation of the closure survives iff
///   - it agrees with the open-input valuation on every open input port
///     inside the closure,
///   - every attached input port inside the closure carries the same
///     service as the output port feeding it, and
///   - for every layer owning an output port inside the closure, some row
///     entry of that layer's behavior (at the candidate's input valuation)
///     agrees with the candidate on the layer's outputs inside the closure.
/// Output ports of a participating layer that lie outside the closure are
/// left unconstrained.
class SemanticsEvaluator {
 public:
  /// Enumerates the closure's valuation space; throws BudgetError naming
  /// the product size when it exceeds `state_budget`, Error on an unknown
  /// layer.
  SemanticsEvaluator(const Universe& universe, const Configuration& config,
                     const LayerName& layer,
                     std::uint64_t state_budget = Budgets{}.states);

  /// Set of restrictions to out(layer) of all surviving candidates.
  /// `config` must agree with the constructing configuration on ports and
  /// attachment (behavior updates only). Throws Error when `open_input` is
  /// not a valuation of exactly the configuration's open input ports.
  std::set<Valuation> evaluate(const Configuration& config,
                               const Valuation& open_input) const;

  /// Surviving candidates in full (not restricted to the layer outputs).
  std::vector<Valuation> consistent(const Configuration& config,
                                    const Valuation& open_input) const;

  const ClosureResult& closure() const { return closure_; }

 private:
  struct BehaviorQuery {
    LayerName owner;
    Valuation input;             // full valuation of the owner's inputs
    Valuation required_outputs;  // candidate on owner outputs inside closure
  };
  struct Candidate {
    Valuation full;
    Valuation layer_outputs;        // restriction to out(layer)
    Valuation open_part;            // restriction to open inputs in closure
    std::vector<BehaviorQuery> queries;
    bool attachment_consistent = false;
  };

  bool satisfied(const BehaviorQuery& query, const Configuration& config) const;

  LayerName layer_;
  ClosureResult closure_;
  std::set<PortId> open_ports_;  // all open inputs of the configuration
  std::vector<Candidate> candidates_;
};

/// All valuations of the attachment closure of `layer` that are consistent
/// with `open_input` in the sense documented on SemanticsEvaluator.
std::vector<Valuation> consistent_valuations(
    const Universe& universe, const Configuration& config,
    const LayerName& layer, const Valuation& open_input,
    std::uint64_t state_budget = Budgets{}.states);

/// The set of restrictions to out(layer) of all consistent valuations.
std::set<Valuation> config_semantics(const Universe& universe,
                                     const Configuration& config,
                                     const LayerName& layer,
                                     const Valuation& open_input,
                                     std::uint64_t state_budget =
                                         Budgets{}.states);

/// Tabulates config_semantics over every open-input valuation in canonical
/// order. Throws BudgetError when either the open-input space or the
/// closure space exceeds `state_budget`.
SemanticsTable semantics_table(const Universe& universe,
                               const Configuration& config,
                               const LayerName& layer,
                               std::uint64_t state_budget = Budgets{}.states);

}  // namespace lasem
