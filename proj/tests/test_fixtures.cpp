#include "doctest.h"
#include "lasem/dependency.hpp"
#include "lasem/fixtures.hpp"
#include "lasem/semantics.hpp"
#include "test_util.hpp"

using namespace lasem;
using lasem::testing::val;

TEST_CASE("every fixture validates and reproduces its recorded facts") {
  for (const auto& id : fixture_ids()) {
    const Fixture fix = fixture(id);
    INFO("fixture ", id);
    CHECK(fix.id == id);
    CHECK(validate_configuration(fix.config, fix.universe).ok());
    if (fix.notes.usable) {
      CHECK(is_usable(fix.universe, fix.config).usable == *fix.notes.usable);
    }
    for (const auto& fact : fix.notes.semantics) {
      CHECK(config_semantics(fix.universe, fix.config, fact.layer,
                             fact.input) == fact.expected);
    }
  }
}

TEST_CASE("the loop fixture matches its published typing") {
  const Fixture fg = fixture("fg_loop");
  CHECK(fg.universe.type_of("o0") == std::set<ServiceId>{"C", "F"});
  CHECK(fg.universe.type_of("o1") == std::set<ServiceId>{"C", "F"});
  CHECK(fg.config.attachment ==
        std::map<PortId, PortId>{{"i0p", "o1p"}, {"i1p", "o0p"}});
}

TEST_CASE("the self-loop fixture is a single layer with empty types") {
  const Fixture fix = fixture("empty_type_self_loop");
  REQUIRE(fix.config.layers.size() == 1);
  const Layer& layer = fix.config.layer("l");
  REQUIRE(layer.inputs.size() == 1);
  REQUIRE(layer.outputs.size() == 1);
  CHECK(fix.universe.type_of(*layer.inputs.begin()).empty());
  CHECK(fix.universe.type_of(*layer.outputs.begin()).empty());
  CHECK(fix.config.attachment.size() == 1);
  CHECK(layer.behavior.rows.empty());
}

TEST_CASE("the degenerate chain is a single unattached layer") {
  const Fixture chain = fixture("chain(0)");
  CHECK(chain.config.layers.size() == 1);
  CHECK(chain.config.attachment.empty());
  CHECK(validate_configuration(chain.config, chain.universe).ok());
  CHECK(chain.config.layer("l0").inputs.size() == 1);
  CHECK(chain.config.layer("l0").outputs.size() == 1);
}

TEST_CASE("chains of every size are usable and within reach of the theorems") {
  for (int n : {0, 1, 4}) {
    const Fixture chain = fixture("chain(" + std::to_string(n) + ")");
    CHECK(int(chain.config.layers.size()) == n + 1);
    const auto report = check_theorems(chain.universe, chain.config);
    CHECK(report.usable);
    CHECK(report.all_passed());
  }
}

TEST_CASE("unknown fixture ids are rejected with the known list") {
  CHECK_THROWS_WITH_AS(fixture("nope"), doctest::Contains("fg_loop"), Error);
  CHECK_THROWS_AS(fixture("chain(33)"), Error);
  CHECK_THROWS_AS(fixture("chain(x)"), Error);
}

TEST_CASE("bint wrapping is the modular representative") {
  CHECK(wrap_to_bint(0, 1) == 0);
  CHECK(wrap_to_bint(2, 1) == -2);   // 2 = -2 (mod 4) in [-2, 1]
  CHECK(wrap_to_bint(-3, 1) == 1);   // -3 = 1 (mod 4)
  CHECK(wrap_to_bint(5, 1) == 1);
  CHECK(wrap_to_bint(7, 2) == -1);   // 7 = -1 (mod 8) in [-4, 3]
}

TEST_CASE("the addition table satisfies its predicate on all 16 pairs") {
  const auto model = modular_mult_universe(1);
  const FnTable& add = model.tables.at("add");
  CHECK(add.total(1));
  CHECK(add.entries.size() == 16);
  CHECK(is_addition_service(add, 1));
  for (int x = -2; x <= 1; ++x) {
    for (int y = -2; y <= 1; ++y) {
      CHECK(add.apply(x, y) == wrap_to_bint((long long)x + y, 1));
    }
  }
}

TEST_CASE("a single wrong decrement entry is rejected from the subtraction type") {
  const auto model = modular_mult_universe(1);
  FnTable broken = model.tables.at("sub_exact");
  CHECK(is_subtraction_service(broken, 1));
  broken.entries[{1, 1}] = 1;  // should be 0
  CHECK(!is_subtraction_service(broken, 1));
}

TEST_CASE("the repeated-addition table is modular multiplication for y >= 0") {
  const auto model = modular_mult_universe(1);
  const FnTable& mult = model.tables.at("mult_loop");
  CHECK(mult.entries.size() == 16);
  for (const auto& [args, result] : mult.entries) {
    const auto [x, y] = args;
    if (y >= 0) {
      CHECK(result == wrap_to_bint((long long)x * y, 1));
    } else {
      // The loop body never runs for negative y.
      CHECK(result == 0);
    }
  }
  CHECK(is_multiplication_service(mult, 1));
}

TEST_CASE("the curated multiplication tables differ only on negative y") {
  const auto model = modular_mult_universe(1);
  const FnTable& loop = model.tables.at("mult_loop");
  const FnTable& wrap = model.tables.at("mult_wrap");
  CHECK(loop != wrap);
  for (const auto& [args, result] : wrap.entries) {
    if (args.second >= 0) {
      CHECK(loop.apply(args.first, args.second) == result);
    }
  }
  CHECK(is_multiplication_service(wrap, 1));
}

TEST_CASE("a mult table wrong on nonnegative y fails the predicate") {
  const auto model = modular_mult_universe(1);
  FnTable broken = model.tables.at("mult_wrap");
  broken.entries[{1, 1}] = 0;  // should be 1
  CHECK(!is_multiplication_service(broken, 1));
}

TEST_CASE("the partial subtraction table is honored by the loop") {
  const auto model = modular_mult_universe(1);
  const FnTable& minimal = model.tables.at("sub_min");
  CHECK(!minimal.total(1));
  CHECK(is_subtraction_service(minimal, 1));
  const FnTable via_minimal =
      repeated_addition_mult(model.tables.at("add"), minimal, 1);
  CHECK(via_minimal == model.tables.at("mult_loop"));
}

TEST_CASE("the mult layer is well-formed and deterministic per input") {
  const auto model = modular_mult_universe(1);
  CHECK(validate_layer(model.mult_layer, model.universe).ok());
  CHECK(model.mult_layer.behavior.rows.size() == 3);  // one per sub table
  for (const auto& [input, outputs] : model.mult_layer.behavior.rows) {
    REQUIRE(outputs.size() == 1);
    CHECK(outputs.begin()->at(ModularMultModel::kMultPort) == "mult_loop");
  }
}

TEST_CASE("the mult universe scales up to m = 3 and no further") {
  for (int m : {2, 3}) {
    const auto model = modular_mult_universe(m);
    const int side = 1 << (m + 1);
    CHECK(int(model.tables.at("add").entries.size()) == side * side);
    CHECK(validate_layer(model.mult_layer, model.universe).ok());
  }
  CHECK_THROWS_AS(modular_mult_universe(0), Error);
  CHECK_THROWS_AS(modular_mult_universe(4), Error);
}
