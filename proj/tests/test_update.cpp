#include "doctest.h"
#include "lasem/dependency.hpp"
#include "lasem/fixtures.hpp"
#include "lasem/semantics.hpp"
#include "lasem/update.hpp"
#include "test_util.hpp"

using namespace lasem;
using lasem::testing::val;

namespace {

/// The behavior that turns the worked-example loop into its updated
/// variant: the Y-branch now propagates Y instead of collapsing to X.
BehaviorTable f_prime() {
  BehaviorTable table;
  table.input_ports = {"i0", "i0p"};
  table.output_ports = {"o0", "o0p"};
  table.rows.emplace(val({{"i0", "B"}, {"i0p", "X"}}),
                     std::set<Valuation>{val({{"o0", "C"}, {"o0p", "X"}})});
  table.rows.emplace(val({{"i0", "B"}, {"i0p", "Y"}}),
                     std::set<Valuation>{val({{"o0", "F"}, {"o0p", "Y"}})});
  return table;
}

BehaviorTable constant_empty(const Layer& layer, const Universe& universe) {
  BehaviorTable table;
  table.input_ports = layer.inputs;
  table.output_ports = layer.outputs;
  for (const auto& input : valuation_space(layer.inputs, universe)) {
    table.rows.emplace(input, std::set<Valuation>{});
  }
  return table;
}

}  // namespace

TEST_CASE("update_layer swaps the behavior and keeps the ports") {
  const Fixture fg = fixture("fg_loop");
  const Layer updated =
      update_layer(fg.config.layer("l_f"), f_prime(), fg.universe);
  CHECK(updated.name == "l_f");
  CHECK(updated.inputs == fg.config.layer("l_f").inputs);
  CHECK(updated.outputs == fg.config.layer("l_f").outputs);
  CHECK(updated == fixture("fg_loop_updated").config.layer("l_f"));
  CHECK(validate_layer(updated, fg.universe).ok());
}

TEST_CASE("identity update returns an equal layer") {
  const Fixture fg = fixture("fg_loop");
  const Layer& original = fg.config.layer("l_g");
  CHECK(update_layer(original, original.behavior, fg.universe) == original);
}

TEST_CASE("the constant-empty update is a valid layer") {
  const Fixture fg = fixture("fg_loop");
  const Layer& original = fg.config.layer("l_f");
  const Layer updated = update_layer(
      original, constant_empty(original, fg.universe), fg.universe);
  for (const auto& [input, outputs] : updated.behavior.rows) {
    CHECK(outputs.empty());
  }
  CHECK(validate_layer(updated, fg.universe).ok());
}

TEST_CASE("update_layer rejects mismatched ports and partial tables") {
  const Fixture fg = fixture("fg_loop");
  const Layer& original = fg.config.layer("l_f");

  BehaviorTable wrong_ports = f_prime();
  wrong_ports.input_ports.erase("i0p");
  wrong_ports.rows.clear();
  CHECK_THROWS_WITH_AS(update_layer(original, wrong_ports, fg.universe),
                       doctest::Contains("different port sets"), Error);

  BehaviorTable partial = f_prime();
  partial.rows.erase(partial.rows.begin());
  CHECK_THROWS_WITH_AS(update_layer(original, partial, fg.universe),
                       doctest::Contains("not total"), Error);
}

TEST_CASE("updating the loop reproduces the updated fixture's semantics") {
  const Fixture fg = fixture("fg_loop");
  const Configuration updated =
      update_configuration(fg.config, {"l_f", f_prime()}, fg.universe);
  CHECK(updated == fixture("fg_loop_updated").config);

  const Valuation mu = val({{"i0", "B"}, {"i1", "D"}});
  CHECK(config_semantics(fg.universe, updated, "l_g", mu) ==
        std::set<Valuation>{val({{"o1", "C"}, {"o1p", "X"}}),
                            val({{"o1", "F"}, {"o1p", "Y"}})});
  // The original configuration is untouched.
  CHECK(config_semantics(fg.universe, fg.config, "l_g", mu) ==
        std::set<Valuation>{val({{"o1", "C"}, {"o1p", "X"}})});
}

TEST_CASE("identity update preserves every semantics table") {
  const Fixture fg = fixture("fg_loop");
  const Configuration updated = update_configuration(
      fg.config, {"l_g", fg.config.layer("l_g").behavior}, fg.universe);
  for (const auto& [name, layer] : fg.config.layers) {
    CHECK(semantics_table(fg.universe, updated, name) ==
          semantics_table(fg.universe, fg.config, name));
  }
}

TEST_CASE("replacing the lower layer steers the upper layer's outputs") {
  const Fixture simple = fixture("simple_two_layer");
  BehaviorTable g;
  g.input_ports = {"i0"};
  g.output_ports = {"o0", "o1", "o2"};
  g.rows.emplace(
      val({{"i0", "A"}}),
      std::set<Valuation>{val({{"o0", "B"}, {"o1", "X"}, {"o2", "Z"}})});
  const Configuration updated =
      update_configuration(simple.config, {"l", std::move(g)},
                           simple.universe);
  CHECK(config_semantics(simple.universe, updated, "lp",
                         val({{"i0", "A"}, {"i0p", "C"}})) ==
        std::set<Valuation>{
            val({{"o0p", "D"}, {"o1p", "E"}, {"o2p", "G"}})});
}

TEST_CASE("update_configuration rejects unknown targets") {
  const Fixture fg = fixture("fg_loop");
  CHECK_THROWS_WITH_AS(
      update_configuration(fg.config, {"nope", f_prime()}, fg.universe),
      doctest::Contains("unknown layer"), Error);
}

TEST_CASE("updates preserve validity on fixtures and random models") {
  // Proposition check: replacing a behavior can never invalidate a valid
  // configuration.
  for (const auto& id : fixture_ids()) {
    const Fixture fix = fixture(id);
    for (const auto& [name, layer] : fix.config.layers) {
      const Layer& member = layer;
      const Configuration updated = update_configuration(
          fix.config, {name, constant_empty(member, fix.universe)},
          fix.universe);
      CHECK(validate_configuration(updated, fix.universe).ok());
    }
  }
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Model model = random_configuration(seed, {});
    for (const auto& [name, layer] : model.config.layers) {
      const Configuration updated = update_configuration(
          model.config, {name, constant_empty(layer, model.universe)},
          model.universe);
      CHECK(validate_configuration(updated, model.universe).ok());
    }
  }
}

TEST_CASE("updates are idempotent and commute on distinct targets") {
  const Fixture fg = fixture("fg_loop");
  const UpdateSpec spec{"l_f", f_prime()};
  const Configuration once =
      update_configuration(fg.config, spec, fg.universe);
  CHECK(update_configuration(once, spec, fg.universe) == once);

  const UpdateSpec other{
      "l_g", constant_empty(fg.config.layer("l_g"), fg.universe)};
  const Configuration fg_then_other = update_configuration(
      update_configuration(fg.config, spec, fg.universe), other, fg.universe);
  const Configuration other_then_fg = update_configuration(
      update_configuration(fg.config, other, fg.universe), spec, fg.universe);
  CHECK(fg_then_other == other_then_fg);
}

TEST_CASE("updates leave ports and attachment untouched") {
  const Fixture fg = fixture("fg_loop");
  const Configuration updated = update_configuration(
      fg.config, {"l_f", constant_empty(fg.config.layer("l_f"), fg.universe)},
      fg.universe);
  CHECK(ports_all(updated) == ports_all(fg.config));
  CHECK(open_inputs(updated) == open_inputs(fg.config));
  CHECK(updated.attachment == fg.config.attachment);
}
