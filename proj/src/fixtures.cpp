#include "lasem/fixtures.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace lasem {

namespace {

using Pairs = std::set<std::pair<LayerName, LayerName>>;

Valuation val(std::initializer_list<std::pair<PortId, ServiceId>> bindings) {
  Valuation result;
  for (const auto& [port, service] : bindings) {
    result.bindings.emplace(port, service);
  }
  return result;
}

/// Two layers feeding each other through their primed ports; the worked
/// example used throughout the analysis tests. `updated` selects the
/// variant whose lower layer propagates the Y-branch instead of collapsing
/// it.
Fixture fg_loop_fixture(bool updated) {
  Fixture fixture;
  fixture.id = updated ? "fg_loop_updated" : "fg_loop";

  Universe& u = fixture.universe;
  for (const char* service : {"B", "C", "D", "F", "X", "Y"}) {
    u.add_service(service);
  }
  u.add_port("i0", PortDirection::input, {"B"});
  u.add_port("i0p", PortDirection::input, {"X", "Y"});
  u.add_port("i1", PortDirection::input, {"D"});
  u.add_port("i1p", PortDirection::input, {"X", "Y"});
  u.add_port("o0", PortDirection::output, {"C", "F"});
  u.add_port("o0p", PortDirection::output, {"X", "Y"});
  u.add_port("o1", PortDirection::output, {"C", "F"});
  u.add_port("o1p", PortDirection::output, {"X", "Y"});

  BehaviorTable f;
  f.input_ports = {"i0", "i0p"};
  f.output_ports = {"o0", "o0p"};
  f.rows.emplace(val({{"i0", "B"}, {"i0p", "X"}}),
                 std::set<Valuation>{val({{"o0", "C"}, {"o0p", "X"}})});
  f.rows.emplace(val({{"i0", "B"}, {"i0p", "Y"}}),
                 std::set<Valuation>{updated
                                         ? val({{"o0", "F"}, {"o0p", "Y"}})
                                         : val({{"o0", "F"}, {"o0p", "X"}})});

  BehaviorTable g;
  g.input_ports = {"i1", "i1p"};
  g.output_ports = {"o1", "o1p"};
  g.rows.emplace(val({{"i1", "D"}, {"i1p", "X"}}),
                 std::set<Valuation>{val({{"o1", "C"}, {"o1p", "X"}})});
  g.rows.emplace(val({{"i1", "D"}, {"i1p", "Y"}}),
                 std::set<Valuation>{val({{"o1", "F"}, {"o1p", "Y"}})});

  fixture.config.add_layer(make_layer("l_f", std::move(f)));
  fixture.config.add_layer(make_layer("l_g", std::move(g)));
  fixture.config.attachment = {{"i0p", "o1p"}, {"i1p", "o0p"}};

  fixture.notes.usable = true;
  fixture.notes.syntactic = Pairs{{"l_f", "l_g"}, {"l_g", "l_f"}};
  fixture.notes.semantic = Pairs{
      {"l_f", "l_f"}, {"l_f", "l_g"}, {"l_g", "l_f"}, {"l_g", "l_g"}};
  const Valuation mu = val({{"i0", "B"}, {"i1", "D"}});
  if (!updated) {
    fixture.notes.semantics.push_back(
        {"l_f", mu, {val({{"o0", "C"}, {"o0p", "X"}})}});
    fixture.notes.semantics.push_back(
        {"l_g", mu, {val({{"o1", "C"}, {"o1p", "X"}})}});
  } else {
    fixture.notes.semantics.push_back(
        {"l_f",
         mu,
         {val({{"o0", "C"}, {"o0p", "X"}}), val({{"o0", "F"}, {"o0p", "Y"}})}});
    fixture.notes.semantics.push_back(
        {"l_g",
         mu,
         {val({{"o1", "C"}, {"o1p", "X"}}), val({{"o1", "F"}, {"o1p", "Y"}})}});
  }
  return fixture;
}

/// A lower layer feeding two internal ports of an upper layer; the upper
/// layer's outputs reflect which service arrives on the second internal
/// port.
Fixture simple_two_layer_fixture() {
  Fixture fixture;
  fixture.id = "simple_two_layer";

  Universe& u = fixture.universe;
  for (const char* service :
       {"A", "B", "C", "D", "E", "F", "G", "X", "Y", "Z"}) {
    u.add_service(service);
  }
  u.add_port("i0", PortDirection::input, {"A"});
  u.add_port("o0", PortDirection::output, {"B"});
  u.add_port("o1", PortDirection::output, {"X"});
  u.add_port("o2", PortDirection::output, {"Y", "Z"});
  u.add_port("i0p", PortDirection::input, {"C"});
  u.add_port("i1p", PortDirection::input, {"X"});
  u.add_port("i2p", PortDirection::input, {"Y", "Z"});
  u.add_port("o0p", PortDirection::output, {"D"});
  u.add_port("o1p", PortDirection::output, {"E"});
  u.add_port("o2p", PortDirection::output, {"F", "G"});

  BehaviorTable f;
  f.input_ports = {"i0"};
  f.output_ports = {"o0", "o1", "o2"};
  f.rows.emplace(
      val({{"i0", "A"}}),
      std::set<Valuation>{val({{"o0", "B"}, {"o1", "X"}, {"o2", "Y"}})});

  BehaviorTable fp;
  fp.input_ports = {"i0p", "i1p", "i2p"};
  fp.output_ports = {"o0p", "o1p", "o2p"};
  fp.rows.emplace(
      val({{"i0p", "C"}, {"i1p", "X"}, {"i2p", "Y"}}),
      std::set<Valuation>{val({{"o0p", "D"}, {"o1p", "E"}, {"o2p", "F"}})});
  fp.rows.emplace(
      val({{"i0p", "C"}, {"i1p", "X"}, {"i2p", "Z"}}),
      std::set<Valuation>{val({{"o0p", "D"}, {"o1p", "E"}, {"o2p", "G"}})});

  fixture.config.add_layer(make_layer("l", std::move(f)));
  fixture.config.add_layer(make_layer("lp", std::move(fp)));
  fixture.config.attachment = {{"i1p", "o1"}, {"i2p", "o2"}};

  fixture.notes.usable = true;
  fixture.notes.syntactic = Pairs{{"l", "lp"}};
  fixture.notes.semantic = Pairs{{"l", "l"}, {"l", "lp"}, {"lp", "lp"}};
  const Valuation mu = val({{"i0", "A"}, {"i0p", "C"}});
  fixture.notes.semantics.push_back(
      {"l", mu, {val({{"o0", "B"}, {"o1", "X"}, {"o2", "Y"}})}});
  fixture.notes.semantics.push_back(
      {"lp", mu, {val({{"o0p", "D"}, {"o1p", "E"}, {"o2p", "F"}})}});
  return fixture;
}

/// Three identity-forwarding layers in a row: the bottom layer emits a
/// constant, the others copy their input to their output.
Fixture three_chain_fixture() {
  Fixture fixture;
  fixture.id = "three_chain";

  Universe& u = fixture.universe;
  u.add_service("A");
  u.add_service("B");
  const std::set<ServiceId> both = {"A", "B"};
  u.add_port("o", PortDirection::output, both);
  u.add_port("ip", PortDirection::input, both);
  u.add_port("op", PortDirection::output, both);
  u.add_port("ipp", PortDirection::input, both);
  u.add_port("opp", PortDirection::output, both);

  BehaviorTable f;
  f.output_ports = {"o"};
  f.rows.emplace(Valuation{}, std::set<Valuation>{val({{"o", "A"}})});

  BehaviorTable fp;
  fp.input_ports = {"ip"};
  fp.output_ports = {"op"};
  for (const char* service : {"A", "B"}) {
    fp.rows.emplace(val({{"ip", service}}),
                    std::set<Valuation>{val({{"op", service}})});
  }

  BehaviorTable fpp;
  fpp.input_ports = {"ipp"};
  fpp.output_ports = {"opp"};
  for (const char* service : {"A", "B"}) {
    fpp.rows.emplace(val({{"ipp", service}}),
                     std::set<Valuation>{val({{"opp", service}})});
  }

  fixture.config.add_layer(make_layer("l", std::move(f)));
  fixture.config.add_layer(make_layer("lp", std::move(fp)));
  fixture.config.add_layer(make_layer("lpp", std::move(fpp)));
  fixture.config.attachment = {{"ip", "o"}, {"ipp", "op"}};

  fixture.notes.usable = true;
  fixture.notes.syntactic = Pairs{{"l", "lp"}, {"lp", "lpp"}};
  fixture.notes.semantic =
      Pairs{{"l", "l"},   {"l", "lp"},   {"l", "lpp"},
            {"lp", "lp"}, {"lp", "lpp"}, {"lpp", "lpp"}};
  fixture.notes.semantics.push_back({"lpp", Valuation{}, {val({{"opp", "A"}})}});
  return fixture;
}

/// One layer whose only input and only output are typed by no service at
/// all and attached to each other: syntactically self-dependent, yet its
/// behavior admits exactly one table.
Fixture empty_type_self_loop_fixture() {
  Fixture fixture;
  fixture.id = "empty_type_self_loop";

  fixture.universe.add_port("i", PortDirection::input, {});
  fixture.universe.add_port("o", PortDirection::output, {});

  BehaviorTable f;
  f.input_ports = {"i"};
  f.output_ports = {"o"};
  // The input valuation space is empty, so the row map is empty.

  fixture.config.add_layer(make_layer("l", std::move(f)));
  fixture.config.attachment = {{"i", "o"}};

  fixture.notes.usable = false;
  fixture.notes.syntactic = Pairs{{"l", "l"}};
  fixture.notes.semantic = Pairs{};
  return fixture;
}

/// One layer with a single two-typed output and no inputs: no syntactic
/// dependency anywhere, but replacing its behavior changes its semantics.
Fixture lonely_output_fixture() {
  Fixture fixture;
  fixture.id = "lonely_output";

  fixture.universe.add_service("A");
  fixture.universe.add_service("B");
  fixture.universe.add_port("o", PortDirection::output, {"A", "B"});

  BehaviorTable f;
  f.output_ports = {"o"};
  f.rows.emplace(Valuation{}, std::set<Valuation>{val({{"o", "A"}})});

  fixture.config.add_layer(make_layer("l", std::move(f)));

  fixture.notes.usable = true;
  fixture.notes.syntactic = Pairs{};
  fixture.notes.semantic = Pairs{{"l", "l"}};
  fixture.notes.semantics.push_back({"l", Valuation{}, {val({{"o", "A"}})}});
  return fixture;
}

/// A stack of n+1 layers. Every level forwards a fresh symbol upward on two
/// internal channels; the bottom layer has one open input, the top layer
/// one externally visible output. All port types are singletons, which
/// keeps the chain usable and every behavior forced.
Fixture chain_fixture(int n) {
  Fixture fixture;
  fixture.id = "chain(" + std::to_string(n) + ")";

  Universe& u = fixture.universe;
  u.add_service("ext");
  for (int k = 0; k < n; ++k) {
    u.add_service("sym" + std::to_string(k));
  }

  auto level = [](const char* stem, int j, int k) {
    return std::string(stem) + std::to_string(j) + "_" + std::to_string(k);
  };

  for (int k = 0; k <= n; ++k) {
    const std::set<ServiceId> fresh =
        k > 0 ? std::set<ServiceId>{"sym" + std::to_string(k - 1)}
              : std::set<ServiceId>{};
    const std::set<ServiceId> up =
        k < n ? std::set<ServiceId>{"sym" + std::to_string(k)}
              : std::set<ServiceId>{};

    u.add_port(level("i", 0, k), PortDirection::input, {"ext"});
    u.add_port(level("o", 0, k), PortDirection::output, {"ext"});
    if (k > 0) {
      u.add_port(level("i", 1, k), PortDirection::input, fresh);
      u.add_port(level("i", 2, k), PortDirection::input, fresh);
    }
    if (k < n) {
      u.add_port(level("o", 1, k), PortDirection::output, up);
      u.add_port(level("o", 2, k), PortDirection::output, up);
    }
  }

  for (int k = 0; k <= n; ++k) {
    BehaviorTable f;
    f.input_ports.insert(level("i", 0, k));
    f.output_ports.insert(level("o", 0, k));
    if (k > 0) {
      f.input_ports.insert(level("i", 1, k));
      f.input_ports.insert(level("i", 2, k));
    }
    if (k < n) {
      f.output_ports.insert(level("o", 1, k));
      f.output_ports.insert(level("o", 2, k));
    }
    // All types are singletons: exactly one input valuation, mapped to the
    // unique output valuation.
    for (const auto& input : valuation_space(f.input_ports, u)) {
      const auto range = valuation_space(f.output_ports, u);
      f.rows.emplace(input, std::set<Valuation>(range.begin(), range.end()));
    }
    fixture.config.add_layer(make_layer("l" + std::to_string(k), std::move(f)));
  }
  for (int k = 1; k <= n; ++k) {
    fixture.config.attachment.emplace(level("i", 1, k), level("o", 1, k - 1));
    fixture.config.attachment.emplace(level("i", 2, k), level("o", 2, k - 1));
  }

  fixture.notes.usable = true;
  Pairs syn;
  for (int k = 0; k < n; ++k) {
    syn.emplace("l" + std::to_string(k), "l" + std::to_string(k + 1));
  }
  fixture.notes.syntactic = std::move(syn);
  return fixture;
}

}  // namespace

std::vector<std::string> fixture_ids() {
  return {"chain(0)",
          "chain(1)",
          "chain(2)",
          "chain(3)",
          "empty_type_self_loop",
          "fg_loop",
          "fg_loop_updated",
          "lonely_output",
          "simple_two_layer",
          "three_chain"};
}

Fixture fixture(const std::string& id) {
  if (id == "fg_loop") {
    return fg_loop_fixture(false);
  }
  if (id == "fg_loop_updated") {
    return fg_loop_fixture(true);
  }
  if (id == "simple_two_layer") {
    return simple_two_layer_fixture();
  }
  if (id == "three_chain") {
    return three_chain_fixture();
  }
  if (id == "empty_type_self_loop") {
    return empty_type_self_loop_fixture();
  }
  if (id == "lonely_output") {
    return lonely_output_fixture();
  }
  if (id.rfind("chain(", 0) == 0 && id.back() == ')') {
    const std::string number = id.substr(6, id.size() - 7);
    if (!number.empty() &&
        std::all_of(number.begin(), number.end(),
                    [](unsigned char c) { return std::isdigit(c); })) {
      const int n = std::stoi(number);
      if (n <= 32) {
        return chain_fixture(n);
      }
      throw Error("chain fixture size " + number + " exceeds 32");
    }
  }
  std::ostringstream known;
  known << "unknown fixture '" << id << "'; known ids:";
  for (const auto& name : fixture_ids()) {
    known << " " << name;
  }
  known << " (chain(N) up to N=32)";
  throw Error(known.str());
}

std::optional<int> FnTable::apply(int x, int y) const {
  auto it = entries.find({x, y});
  if (it == entries.end()) {
    return std::nullopt;
  }
  return it->second;
}

bool FnTable::total(int m) const {
  const int lo = -(1 << m);
  const int hi = (1 << m) - 1;
  for (int x = lo; x <= hi; ++x) {
    for (int y = lo; y <= hi; ++y) {
      if (entries.count({x, y}) == 0) {
        return false;
      }
    }
  }
  return true;
}

int wrap_to_bint(long long value, int m) {
  const long long modulus = 1LL << (m + 1);
  long long r = value % modulus;
  if (r < -(1LL << m)) {
    r += modulus;
  } else if (r > (1LL << m) - 1) {
    r -= modulus;
  }
  return int(r);
}

namespace {

void for_each_bint_pair(int m, const auto& body) {
  const int lo = -(1 << m);
  const int hi = (1 << m) - 1;
  for (int x = lo; x <= hi; ++x) {
    for (int y = lo; y <= hi; ++y) {
      body(x, y);
    }
  }
}

}  // namespace

bool is_addition_service(const FnTable& table, int m) {
  if (!table.total(m)) {
    return false;
  }
  bool ok = true;
  for_each_bint_pair(m, [&](int x, int y) {
    if (table.apply(x, y) != wrap_to_bint((long long)x + y, m)) {
      ok = false;
    }
  });
  return ok;
}

bool is_subtraction_service(const FnTable& table, int m) {
  const int hi = (1 << m) - 1;
  for (int x = 1; x <= hi; ++x) {
    if (table.apply(x, 1) != wrap_to_bint((long long)x - 1, m)) {
      return false;
    }
  }
  // Entries outside the constrained region are free, but must stay inside
  // bint.
  const int lo = -(1 << m);
  for (const auto& [args, result] : table.entries) {
    if (args.first < lo || args.first > hi || args.second < lo ||
        args.second > hi || result < lo || result > hi) {
      return false;
    }
  }
  return true;
}

bool is_multiplication_service(const FnTable& table, int m) {
  if (!table.total(m)) {
    return false;
  }
  bool ok = true;
  for_each_bint_pair(m, [&](int x, int y) {
    if (y >= 0 && table.apply(x, y) != wrap_to_bint((long long)x * y, m)) {
      ok = false;
    }
  });
  return ok;
}

FnTable repeated_addition_mult(const FnTable& add, const FnTable& sub, int m) {
  FnTable result;
  for_each_bint_pair(m, [&](int x, int y) {
    int z = 0;
    int counter = y;
    while (counter > 0) {
      auto added = add.apply(x, z);
      auto decremented = sub.apply(counter, 1);
      if (!added || !decremented) {
        throw Error("repeated-addition loop hit an undefined table entry");
      }
      z = *added;
      counter = *decremented;
    }
    result.entries.emplace(std::make_pair(x, y), z);
  });
  return result;
}

ModularMultModel modular_mult_universe(int m) {
  if (m < 1 || m > 3) {
    throw Error("modular_mult_universe requires 1 <= m <= 3, got " +
                std::to_string(m));
  }

  ModularMultModel model;
  model.m = m;

  FnTable add;
  FnTable sub_exact;
  FnTable sub_min;       // defined only where the type predicate constrains it
  FnTable sub_scrambled; // total, exact only where constrained
  FnTable mult_wrap;     // true modular multiplication everywhere
  for_each_bint_pair(m, [&](int x, int y) {
    add.entries[{x, y}] = wrap_to_bint((long long)x + y, m);
    sub_exact.entries[{x, y}] = wrap_to_bint((long long)x - y, m);
    if (x > 0 && y == 1) {
      sub_min.entries[{x, y}] = wrap_to_bint((long long)x - 1, m);
      sub_scrambled.entries[{x, y}] = wrap_to_bint((long long)x - 1, m);
    } else {
      sub_scrambled.entries[{x, y}] = wrap_to_bint((long long)x + y, m);
    }
    mult_wrap.entries[{x, y}] = wrap_to_bint((long long)x * y, m);
  });
  const FnTable mult_loop = repeated_addition_mult(add, sub_exact, m);

  model.tables = {{"add", add},
                  {"sub_exact", sub_exact},
                  {"sub_min", sub_min},
                  {"sub_scrambled", sub_scrambled},
                  {"mult_loop", mult_loop},
                  {"mult_wrap", mult_wrap}};

  if (!is_addition_service(model.tables.at("add"), m)) {
    throw Error("curated addition table fails its membership predicate");
  }
  for (const char* name : {"sub_exact", "sub_min", "sub_scrambled"}) {
    if (!is_subtraction_service(model.tables.at(name), m)) {
      throw Error(std::string("curated table '") + name +
                  "' fails the subtraction membership predicate");
    }
  }
  for (const char* name : {"mult_loop", "mult_wrap"}) {
    if (!is_multiplication_service(model.tables.at(name), m)) {
      throw Error(std::string("curated table '") + name +
                  "' fails the multiplication membership predicate");
    }
  }

  Universe& u = model.universe;
  for (const auto& [name, table] : model.tables) {
    u.add_service(name);
  }
  u.add_port(ModularMultModel::kAddPort, PortDirection::input, {"add"});
  u.add_port(ModularMultModel::kSubPort, PortDirection::input,
             {"sub_exact", "sub_min", "sub_scrambled"});
  u.add_port(ModularMultModel::kMultPort, PortDirection::output,
             {"mult_loop", "mult_wrap"});

  BehaviorTable behavior;
  behavior.input_ports = {ModularMultModel::kAddPort,
                          ModularMultModel::kSubPort};
  behavior.output_ports = {ModularMultModel::kMultPort};
  for (const auto& input : valuation_space(behavior.input_ports, u)) {
    const FnTable simulated = repeated_addition_mult(
        model.tables.at(input.at(ModularMultModel::kAddPort)),
        model.tables.at(input.at(ModularMultModel::kSubPort)), m);
    std::set<Valuation> row;
    for (const auto& candidate : u.type_of(ModularMultModel::kMultPort)) {
      if (model.tables.at(candidate) == simulated) {
        Valuation out;
        out.bindings.emplace(ModularMultModel::kMultPort, candidate);
        row.insert(std::move(out));
      }
    }
    if (row.empty()) {
      throw Error("repeated-addition result is not among the curated "
                  "multiplication tables");
    }
    behavior.rows.emplace(input, std::move(row));
  }
  model.mult_layer = make_layer("mult", std::move(behavior));
  return model;
}

}  // namespace lasem
