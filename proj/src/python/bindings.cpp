#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lasem/dependency.hpp"
#include "lasem/fixtures.hpp"
#include "lasem/model.hpp"
#include "lasem/semantics.hpp"
#include "lasem/serialize.hpp"
#include "lasem/update.hpp"

namespace py = pybind11;
using namespace lasem;

namespace {

using Bindings = std::map<std::string, std::string>;
using Row = std::pair<Bindings, std::vector<Bindings>>;

Valuation typed_valuation(const Bindings& bindings, const Universe& universe) {
  std::vector<std::pair<PortId, ServiceId>> pairs(bindings.begin(),
                                                  bindings.end());
  return make_valuation(pairs, universe);
}

std::vector<Bindings> to_dicts(const std::set<Valuation>& valuations) {
  std::vector<Bindings> result;
  result.reserve(valuations.size());
  for (const auto& valuation : valuations) {
    result.push_back(valuation.bindings);
  }
  return result;
}

std::vector<std::pair<std::string, std::string>> to_pairs(
    const DependencyRelation& relation) {
  return {relation.pairs.begin(), relation.pairs.end()};
}

Budgets make_budgets(std::uint64_t tables, std::uint64_t states) {
  Budgets budgets;
  budgets.tables = tables;
  budgets.states = states;
  return budgets;
}

BehaviorTable rows_to_table(const Layer& layer, const Universe& universe,
                            const std::vector<Row>& rows) {
  BehaviorTable table;
  table.input_ports = layer.inputs;
  table.output_ports = layer.outputs;
  for (const auto& [input, outputs] : rows) {
    std::set<Valuation> row;
    for (const auto& output : outputs) {
      row.insert(typed_valuation(output, universe));
    }
    table.rows.emplace(typed_valuation(input, universe), std::move(row));
  }
  return table;
}

std::string status_string(CheckStatus status) { return to_string(status); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "layered architecture configurations: semantics, updates and "
            "dependency analysis";

  py::register_exception<Error>(m, "ModelError", PyExc_ValueError);
  py::register_exception<BudgetError>(m, "BudgetExceeded", PyExc_RuntimeError);

  py::class_<Model>(m, "Model")
      .def("__eq__", [](const Model& a, const Model& b) { return a == b; })
      .def("__repr__", [](const Model& model) {
        return "<Model: " + std::to_string(model.config.layers.size()) +
               " layers, " + std::to_string(ports_all(model.config).size()) +
               " ports>";
      });

  py::class_<ClosureResult>(m, "ClosureResult")
      .def_readonly("layer", &ClosureResult::layer)
      .def_readonly("iterations", &ClosureResult::iterations)
      .def_property_readonly("ports",
                             [](const ClosureResult& result) {
                               return std::vector<PortId>(
                                   result.ports.begin(), result.ports.end());
                             })
      .def("__repr__", [](const ClosureResult& result) {
        return "<ClosureResult: " + result.layer + ", " +
               std::to_string(result.ports.size()) + " ports>";
      });

  py::class_<TheoremReport>(m, "TheoremReport")
      .def_readonly("config_id", &TheoremReport::config_id)
      .def_readonly("usable", &TheoremReport::usable)
      .def_property_readonly(
          "usable_witness",
          [](const TheoremReport& report) -> std::optional<Bindings> {
            if (!report.usable_witness) {
              return std::nullopt;
            }
            return report.usable_witness->bindings;
          })
      .def_property_readonly(
          "theorem1",
          [](const TheoremReport& r) { return status_string(r.theorem1); })
      .def_property_readonly(
          "theorem2",
          [](const TheoremReport& r) { return status_string(r.theorem2); })
      .def_property_readonly(
          "corollary",
          [](const TheoremReport& r) { return status_string(r.corollary); })
      .def_property_readonly(
          "lemma1",
          [](const TheoremReport& r) { return status_string(r.lemma1); })
      .def_property_readonly(
          "proposition1",
          [](const TheoremReport& r) { return status_string(r.prop1); })
      .def_readonly("rt_closure_in_semantic",
                    &TheoremReport::rt_closure_in_semantic)
      .def_property_readonly(
          "skipped",
          [](const TheoremReport& report) {
            std::vector<std::tuple<std::string, std::string, std::uint64_t>>
                out;
            for (const auto& pair : report.skipped) {
              out.emplace_back(pair.from, pair.to, pair.tables);
            }
            return out;
          })
      .def("all_passed", &TheoremReport::all_passed)
      .def("any_failed", &TheoremReport::any_failed);

  m.def("fixture_ids", &fixture_ids);
  m.def(
      "fixture",
      [](const std::string& id) {
        Fixture fix = fixture(id);
        return Model{std::move(fix.universe), std::move(fix.config)};
      },
      py::arg("id"));

  m.def(
      "parse_config",
      [](const std::string& text) { return parse_config(text); },
      py::arg("text"));
  m.def("serialize_config", &serialize_config, py::arg("model"));

  m.def(
      "validate",
      [](const Model& model) {
        return validate_configuration(model.config, model.universe).violations;
      },
      py::arg("model"), "empty list means the configuration is well-formed");

  m.def("layers", [](const Model& model) {
    std::vector<LayerName> names;
    for (const auto& [name, layer] : model.config.layers) {
      names.push_back(name);
    }
    return names;
  });
  m.def("ports_in", [](const Model& model) {
    const auto ports = ports_in(model.config);
    return std::vector<PortId>(ports.begin(), ports.end());
  });
  m.def("ports_out", [](const Model& model) {
    const auto ports = ports_out(model.config);
    return std::vector<PortId>(ports.begin(), ports.end());
  });
  m.def("ports_all", [](const Model& model) {
    const auto ports = ports_all(model.config);
    return std::vector<PortId>(ports.begin(), ports.end());
  });
  m.def("open_inputs", [](const Model& model) {
    const auto ports = open_inputs(model.config);
    return std::vector<PortId>(ports.begin(), ports.end());
  });
  m.def(
      "project",
      [](const Model& model, const PortId& port) {
        return project(port, model.config).name;
      },
      py::arg("model"), py::arg("port"));

  m.def(
      "valuation_space",
      [](const Model& model, const std::vector<PortId>& ports) {
        std::vector<Bindings> result;
        for (const auto& valuation : valuation_space(
                 std::set<PortId>(ports.begin(), ports.end()),
                 model.universe)) {
          result.push_back(valuation.bindings);
        }
        return result;
      },
      py::arg("model"), py::arg("ports"));

  m.def(
      "attachment_closure",
      [](const Model& model, const LayerName& layer) {
        return attachment_closure(model.config, layer);
      },
      py::arg("model"), py::arg("layer"));

  m.def(
      "config_semantics",
      [](const Model& model, const LayerName& layer, const Bindings& input,
         std::uint64_t state_budget) {
        return to_dicts(config_semantics(
            model.universe, model.config, layer,
            typed_valuation(input, model.universe), state_budget));
      },
      py::arg("model"), py::arg("layer"), py::arg("input"),
      py::arg("state_budget") = Budgets{}.states);

  m.def(
      "semantics_table",
      [](const Model& model, const LayerName& layer,
         std::uint64_t state_budget) {
        const auto table =
            semantics_table(model.universe, model.config, layer, state_budget);
        std::vector<Row> rows;
        for (const auto& [input, outputs] : table.entries) {
          std::vector<Bindings> rendered;
          for (const auto& output : outputs) {
            rendered.push_back(output.bindings);
          }
          rows.emplace_back(input.bindings, std::move(rendered));
        }
        return rows;
      },
      py::arg("model"), py::arg("layer"),
      py::arg("state_budget") = Budgets{}.states);

  m.def(
      "update_configuration",
      [](const Model& model, const LayerName& layer,
         const std::vector<Row>& rows) {
        const Layer& target = model.config.layer(layer);
        UpdateSpec spec{layer, rows_to_table(target, model.universe, rows)};
        return Model{
            model.universe,
            update_configuration(model.config, spec, model.universe)};
      },
      py::arg("model"), py::arg("layer"), py::arg("rows"),
      "rows: list of (input bindings, list of output bindings)");

  m.def(
      "syntactic_dependency",
      [](const Model& model, const std::string& closure) {
        DependencyRelation relation = syntactic_dependency(model.config);
        if (closure == "trans") {
          relation = transitive_closure(relation);
        } else if (closure == "refl-trans") {
          relation = reflexive_transitive_closure(relation);
        } else if (!closure.empty()) {
          throw Error("closure must be '', 'trans' or 'refl-trans'");
        }
        return to_pairs(relation);
      },
      py::arg("model"), py::arg("closure") = "");

  m.def(
      "dependents_of",
      [](const Model& model, const LayerName& layer,
         const std::string& closure) {
        RelationKind kind = RelationKind::syntactic;
        if (closure == "trans") {
          kind = RelationKind::syntactic_transitive;
        } else if (closure == "refl-trans") {
          kind = RelationKind::syntactic_reflexive_transitive;
        } else if (!closure.empty()) {
          throw Error("closure must be '', 'trans' or 'refl-trans'");
        }
        const auto result = dependents_of(model.config, layer, kind);
        return std::vector<LayerName>(result.begin(), result.end());
      },
      py::arg("model"), py::arg("layer"), py::arg("closure") = "");

  m.def(
      "is_usable",
      [](const Model& model, std::uint64_t state_budget)
          -> std::pair<bool, std::optional<Bindings>> {
        const auto result =
            is_usable(model.universe, model.config, state_budget);
        if (!result.witness) {
          return {result.usable, std::nullopt};
        }
        return {result.usable, result.witness->bindings};
      },
      py::arg("model"), py::arg("state_budget") = Budgets{}.states);

  m.def(
      "semantic_dependency",
      [](const Model& model, const LayerName& from, const LayerName& to,
         std::uint64_t tables, std::uint64_t states) {
        return semantic_dependency(model.universe, model.config, from, to,
                                   make_budgets(tables, states));
      },
      py::arg("model"), py::arg("from_layer"), py::arg("to_layer"),
      py::arg("tables_budget") = Budgets{}.tables,
      py::arg("state_budget") = Budgets{}.states);

  m.def(
      "semantic_dependency_relation",
      [](const Model& model, std::uint64_t tables, std::uint64_t states) {
        return to_pairs(semantic_dependency_relation(
            model.universe, model.config, make_budgets(tables, states)));
      },
      py::arg("model"), py::arg("tables_budget") = Budgets{}.tables,
      py::arg("state_budget") = Budgets{}.states);

  m.def(
      "check_theorems",
      [](const Model& model, std::uint64_t tables, std::uint64_t states,
         const std::string& config_id) {
        return check_theorems(model.universe, model.config,
                              make_budgets(tables, states), config_id);
      },
      py::arg("model"), py::arg("tables_budget") = Budgets{}.tables,
      py::arg("state_budget") = Budgets{}.states, py::arg("config_id") = "");

  m.def(
      "random_configuration",
      [](std::uint64_t seed, int layers, int ports, int types,
         int attachments) {
        GeneratorBounds bounds;
        bounds.max_layers = layers;
        bounds.max_ports_per_side = ports;
        bounds.max_type_size = types;
        bounds.max_attachments = attachments;
        return random_configuration(seed, bounds);
      },
      py::arg("seed"), py::arg("max_layers") = 3,
      py::arg("max_ports_per_side") = 2, py::arg("max_type_size") = 2,
      py::arg("max_attachments") = 4);

  m.def(
      "modular_mult_universe",
      [](int m_exp) {
        ModularMultModel generated = modular_mult_universe(m_exp);
        Model model;
        model.universe = std::move(generated.universe);
        model.config.add_layer(std::move(generated.mult_layer));
        return model;
      },
      py::arg("m"),
      "single-layer configuration whose services are explicit function "
      "tables over the integers modulo 2^(m+1)");

  m.def(
      "modular_mult_tables",
      [](int m_exp) {
        const ModularMultModel generated = modular_mult_universe(m_exp);
        std::map<std::string, std::map<std::pair<int, int>, int>> tables;
        for (const auto& [name, table] : generated.tables) {
          tables.emplace(name, table.entries);
        }
        return tables;
      },
      py::arg("m"), "the function table behind each service name");

  m.def(
      "export_dot",
      [](const Model& model, const std::string& relation,
         std::uint64_t tables, std::uint64_t states) {
        DotRelation kind = DotRelation::attachment;
        if (relation == "syn") {
          kind = DotRelation::syntactic;
        } else if (relation == "sem") {
          kind = DotRelation::semantic;
        } else if (relation != "attachment") {
          throw Error("relation must be attachment, syn or sem");
        }
        return export_dot(model, kind, make_budgets(tables, states));
      },
      py::arg("model"), py::arg("relation") = "attachment",
      py::arg("tables_budget") = Budgets{}.tables,
      py::arg("state_budget") = Budgets{}.states);
}
