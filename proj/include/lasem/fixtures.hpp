#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lasem/model.hpp"

namespace lasem {

/// Machine-checkable expectations bundled with a fixture; the regression
/// suite re-derives each fact with the analysis operations.
struct SemanticsFact {
  LayerName layer;
  Valuation input;
  std::set<Valuation> expected;
};

struct FixtureNotes {
  std::optional<bool> usable;
  std::optional<std::set<std::pair<LayerName, LayerName>>> syntactic;
  std::optional<std::set<std::pair<LayerName, LayerName>>> semantic;
  std::vector<SemanticsFact> semantics;
};

struct Fixture {
  std::string id;
  Universe universe;
  Configuration config;
  FixtureNotes notes;
};

/// Known ids: fg_loop, fg_loop_updated, simple_two_layer, three_chain,
/// empty_type_self_loop, lonely_output, chain(N) for N in [0, 32]. Throws
/// Error listing the known ids on an unknown id.
Fixture fixture(const std::string& id);

/// The concrete ids emitted by tooling (chain instances 0..3 included).
std::vector<std::string> fixture_ids();

/// A partial or total map bint x bint -> bint, where
/// bint = [-2^M, 2^M - 1] is the set of representatives modulo 2^(M+1).
/// Services of the modular-multiplication universe are names for such
/// tables.
struct FnTable {
  std::map<std::pair<int, int>, int> entries;

  std::optional<int> apply(int x, int y) const;
  bool total(int m) const;

  auto operator<=>(const FnTable&) const = default;
};

/// Representative of `value` modulo 2^(m+1) within [-2^m, 2^m - 1].
int wrap_to_bint(long long value, int m);

/// Total and equal to modular addition everywhere.
bool is_addition_service(const FnTable& table, int m);

/// Equals modular subtraction whenever the first argument is positive and
/// the second is 1 (and is defined there); partial elsewhere is fine.
bool is_subtraction_service(const FnTable& table, int m);

/// Total and equal to modular multiplication whenever the second argument
/// is nonnegative; arbitrary (but defined) for negative second arguments.
bool is_multiplication_service(const FnTable& table, int m);

/// Simulates the repeated-addition multiplication loop
///   z := 0; while (y > 0) { z := add(x, z); y := sub(y, 1); }
/// pointwise over bint x bint using the given addition and subtraction
/// tables. Throws Error if a needed table entry is undefined.
FnTable repeated_addition_mult(const FnTable& add, const FnTable& sub, int m);

/// A universe of explicit function-table services for the multiplication
/// layer: the addition input port is typed by the singleton addition table,
/// the subtraction input port by a curated set of tables satisfying
/// is_subtraction_service, and the output port by a curated set satisfying
/// is_multiplication_service. Each curated table is verified pointwise
/// against its predicate during construction.
struct ModularMultModel {
  int m = 1;
  Universe universe;
  Layer mult_layer;
  std::map<ServiceId, FnTable> tables;

  static constexpr const char* kAddPort = "i_add";
  static constexpr const char* kSubPort = "i_sub";
  static constexpr const char* kMultPort = "o_mult";
};

/// Requires 1 <= m <= 3 (table domains stay small enough to enumerate).
ModularMultModel modular_mult_universe(int m);

}  // namespace lasem
