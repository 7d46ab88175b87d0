#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lasem/model.hpp"
#include "lasem/semantics.hpp"

namespace lasem {

enum class RelationKind {
  syntactic,
  syntactic_transitive,
  syntactic_reflexive_transitive,
  semantic,
};

std::string to_string(RelationKind kind);

/// A binary relation over the layer names of one configuration. A pair
/// (l, m) reads "m depends on l": some input of m is fed by an output of l
/// (syntactic), or some behavior update of l changes the configuration
/// semantics of m (semantic).
struct DependencyRelation {
  RelationKind kind = RelationKind::syntactic;
  std::set<LayerName> universe;
  std::set<std::pair<LayerName, LayerName>> pairs;

  bool contains(const LayerName& from, const LayerName& to) const {
    return pairs.count({from, to}) != 0;
  }

  auto operator<=>(const DependencyRelation&) const = default;
};

DependencyRelation syntactic_dependency(const Configuration& config);

DependencyRelation transitive_closure(const DependencyRelation& relation);
DependencyRelation reflexive_transitive_closure(
    const DependencyRelation& relation);

/// Layers that `target` depends on under the chosen flavor of syntactic
/// dependency: {l | (l, target) in relation}. Throws Error on an unknown
/// layer or RelationKind::semantic.
std::set<LayerName> dependents_of(const Configuration& config,
                                  const LayerName& target,
                                  RelationKind kind = RelationKind::syntactic);

struct UsabilityResult {
  bool usable = false;
  std::optional<Valuation> witness;  // first one in canonical order
};

/// A configuration is usable iff some open-input valuation gives every
/// layer a nonempty configuration semantics. The search is exhaustive in
/// canonical order.
UsabilityResult is_usable(const Universe& universe,
                          const Configuration& config,
                          std::uint64_t state_budget = Budgets{}.states);

/// Number of total behavior tables for the layer: (2^|out-valuations|) to
/// the power |in-valuations|, saturated to UINT64_MAX.
std::uint64_t update_table_count(const Universe& universe, const Layer& layer);

/// Decides whether `to` semantically depends on `from` by enumerating every
/// behavior table for `from` and comparing the semantics table of `to`
/// before and after the update (for from == to, against the updated layer).
/// The table enumeration is exhaustive in canonical order, never an appeal
/// to the dependency theorems. Throws BudgetError reporting the table count
/// when it exceeds budgets.tables.
bool semantic_dependency(const Universe& universe, const Configuration& config,
                         const LayerName& from, const LayerName& to,
                         const Budgets& budgets = {});

/// All-pairs semantic dependency. A BudgetError for any pair propagates,
/// annotated with the pair.
DependencyRelation semantic_dependency_relation(const Universe& universe,
                                                const Configuration& config,
                                                const Budgets& budgets = {});

enum class CheckStatus {
  passed,
  failed,
  not_applicable,
  skipped_budget,
};

std::string to_string(CheckStatus status);

/// A pair of layers whose semantic-dependency decision was skipped because
/// the table enumeration would exceed the budget.
struct SkippedPair {
  LayerName from;
  LayerName to;
  std::uint64_t tables = 0;  // saturated table count

  auto operator<=>(const SkippedPair&) const = default;
};

/// Results of checking the dependency statements on one configuration by
/// direct computation of both sides:
///   theorem2   - semantic dependency is contained in the reflexive-
///                transitive closure of syntactic dependency; must pass on
///                every valid configuration, a failure indicates an
///                implementation bug.
///   theorem1   - the reverse containment; checked only on usable
///                configurations.
///   corollary  - equality of the two relations on usable configurations.
///   lemma1     - every port in a layer's attachment closure belongs to a
///                layer the closure's layer reflexively-transitively
///                syntactically depends on.
///   prop1      - behavior updates preserve configuration validity
///                (exhaustive over update tables when within budget, else a
///                seeded sample).
struct TheoremReport {
  std::string config_id;

  bool usable = false;
  std::optional<Valuation> usable_witness;
  CheckStatus usable_status = CheckStatus::passed;  // skipped_budget if the
                                                    // search hit the budget

  CheckStatus theorem1 = CheckStatus::not_applicable;
  std::optional<std::pair<LayerName, LayerName>> theorem1_counterexample;

  CheckStatus theorem2 = CheckStatus::passed;
  std::optional<std::pair<LayerName, LayerName>> theorem2_counterexample;

  CheckStatus corollary = CheckStatus::not_applicable;

  CheckStatus lemma1 = CheckStatus::passed;
  std::optional<std::pair<PortId, LayerName>> lemma1_offender;

  CheckStatus prop1 = CheckStatus::passed;

  /// Whether the reflexive-transitive syntactic closure is contained in the
  /// semantic relation, when decidable within budget; informative also on
  /// non-usable configurations (where the containment may genuinely fail).
  std::optional<bool> rt_closure_in_semantic;

  std::vector<SkippedPair> skipped;

  bool all_passed() const;
  bool any_failed() const;
  bool any_skipped() const;
};

TheoremReport check_theorems(const Universe& universe,
                             const Configuration& config,
                             const Budgets& budgets = {},
                             const std::string& config_id = "");

/// Size bounds for the random generator. All bounds are inclusive maxima;
/// every generated layer has at least one output port (a layer without
/// outputs has constant semantics that no behavior update can influence).
struct GeneratorBounds {
  int max_layers = 3;
  int max_ports_per_side = 2;
  int max_type_size = 2;
  int max_attachments = 4;
};

/// Deterministic-per-seed valid configuration within the bounds. Empty port
/// types and empty behavior rows occur with positive probability. Throws
/// Error on non-positive bounds or if no valid configuration is found
/// within a fixed retry count.
Model random_configuration(std::uint64_t seed, const GeneratorBounds& bounds);

}  // namespace lasem
