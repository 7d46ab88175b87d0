#include "lasem/serialize.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace lasem {

namespace {

using nlohmann::json;

void require_keys(const json& object, const char* where,
                  std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : object.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&key](const char* k) {
          return key == k;
        }) == allowed.end()) {
      throw DocumentError(std::string("unknown key '") + key + "' in " +
                          where);
    }
  }
  for (const char* key : allowed) {
    if (!object.contains(key)) {
      throw DocumentError(std::string("missing key '") + key + "' in " +
                          where);
    }
  }
}

std::string as_string(const json& value, const char* where) {
  if (!value.is_string()) {
    throw DocumentError(std::string(where) + " must be a string");
  }
  return value.get<std::string>();
}

const json& as_array(const json& value, const char* where) {
  if (!value.is_array()) {
    throw DocumentError(std::string(where) + " must be an array");
  }
  return value;
}

Valuation read_valuation(const json& object, const Universe& universe,
                         const char* where) {
  if (!object.is_object()) {
    throw DocumentError(std::string(where) + " must be an object");
  }
  Valuation valuation;
  for (const auto& [port, service] : object.items()) {
    if (!universe.has_port(port)) {
      throw DocumentError(std::string(where) + " mentions undeclared port '" +
                          port + "'");
    }
    const std::string name = as_string(service, where);
    if (!universe.has_service(name)) {
      throw DocumentError(std::string(where) +
                          " mentions undeclared service '" + name + "'");
    }
    valuation.bindings.emplace(port, name);
  }
  return valuation;
}

std::set<PortId> read_port_list(const json& array, const Universe& universe,
                                const std::string& where) {
  std::set<PortId> ports;
  for (const auto& entry : as_array(array, where.c_str())) {
    const std::string id = as_string(entry, where.c_str());
    if (!universe.has_port(id)) {
      throw DocumentError(where + " mentions undeclared port '" + id + "'");
    }
    if (!ports.insert(id).second) {
      throw DocumentError(where + " lists port '" + id + "' twice");
    }
  }
  return ports;
}

}  // namespace

Model parse_config(const std::string& text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& error) {
    // nlohmann reports a byte offset; convert to line/column.
    int line = 1;
    int column = 1;
    const std::size_t limit =
        std::min<std::size_t>(error.byte, text.size());
    for (std::size_t i = 0; i + 1 <= limit && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("syntax error at line " + std::to_string(line) +
                         ", column " + std::to_string(column) + ": " +
                         error.what(),
                     line, column);
  }
  if (!document.is_object()) {
    throw DocumentError("configuration document must be a JSON object");
  }
  require_keys(document, "configuration document",
               {"services", "ports", "layers", "attachment"});

  Model model;
  for (const auto& entry : as_array(document["services"], "services")) {
    const std::string service = as_string(entry, "service id");
    if (model.universe.has_service(service)) {
      throw DocumentError("duplicate service id '" + service + "'");
    }
    model.universe.add_service(service);
  }

  for (const auto& entry : as_array(document["ports"], "ports")) {
    if (!entry.is_object()) {
      throw DocumentError("port entries must be objects");
    }
    require_keys(entry, "port entry", {"id", "direction", "type"});
    const std::string id = as_string(entry["id"], "port id");
    const std::string direction = as_string(entry["direction"], "direction");
    if (direction != "in" && direction != "out") {
      throw DocumentError("port '" + id + "': direction must be \"in\" or " +
                          "\"out\"");
    }
    std::set<ServiceId> type;
    for (const auto& service : as_array(entry["type"], "port type")) {
      const std::string name = as_string(service, "port type entry");
      if (!model.universe.has_service(name)) {
        throw DocumentError("port '" + id + "' typed by undeclared service '" +
                            name + "'");
      }
      if (!type.insert(name).second) {
        throw DocumentError("port '" + id + "' lists service '" + name +
                            "' twice");
      }
    }
    if (model.universe.has_port(id)) {
      throw DocumentError("duplicate port id '" + id + "'");
    }
    model.universe.add_port(id,
                            direction == "in" ? PortDirection::input
                                              : PortDirection::output,
                            std::move(type));
  }

  for (const auto& entry : as_array(document["layers"], "layers")) {
    if (!entry.is_object()) {
      throw DocumentError("layer entries must be objects");
    }
    require_keys(entry, "layer entry",
                 {"name", "inputs", "outputs", "behavior"});
    Layer layer;
    layer.name = as_string(entry["name"], "layer name");
    if (model.config.has_layer(layer.name)) {
      throw DocumentError("duplicate layer name '" + layer.name + "'");
    }
    layer.inputs = read_port_list(entry["inputs"], model.universe,
                                  "layer '" + layer.name + "' inputs");
    layer.outputs = read_port_list(entry["outputs"], model.universe,
                                   "layer '" + layer.name + "' outputs");
    layer.behavior.input_ports = layer.inputs;
    layer.behavior.output_ports = layer.outputs;
    for (const auto& row :
         as_array(entry["behavior"], "layer behavior")) {
      if (!row.is_object()) {
        throw DocumentError("behavior rows must be objects");
      }
      require_keys(row, "behavior row", {"input", "outputs"});
      Valuation input =
          read_valuation(row["input"], model.universe, "behavior row input");
      std::set<Valuation> outputs;
      for (const auto& output :
           as_array(row["outputs"], "behavior row outputs")) {
        outputs.insert(read_valuation(output, model.universe,
                                      "behavior row output"));
      }
      if (!layer.behavior.rows.emplace(std::move(input), std::move(outputs))
               .second) {
        throw DocumentError("layer '" + layer.name +
                            "' repeats a behavior row input");
      }
    }
    model.config.add_layer(std::move(layer));
  }

  for (const auto& entry : as_array(document["attachment"], "attachment")) {
    if (!entry.is_object()) {
      throw DocumentError("attachment entries must be objects");
    }
    require_keys(entry, "attachment entry", {"input", "output"});
    const std::string in_port = as_string(entry["input"], "attachment input");
    const std::string out_port =
        as_string(entry["output"], "attachment output");
    for (const auto& port : {in_port, out_port}) {
      if (!model.universe.has_port(port)) {
        throw DocumentError("attachment mentions undeclared port '" + port +
                            "'");
      }
    }
    if (!model.config.attachment.emplace(in_port, out_port).second) {
      throw DocumentError("input port '" + in_port + "' attached twice");
    }
  }
  return model;
}

std::string serialize_config(const Model& model) {
  json document;

  document["services"] = json::array();
  for (const auto& service : model.universe.services()) {
    document["services"].push_back(service);
  }

  document["ports"] = json::array();
  for (const auto& [id, decl] : model.universe.ports()) {
    json port;
    port["id"] = id;
    port["direction"] =
        decl.direction == PortDirection::input ? "in" : "out";
    port["type"] = json::array();
    for (const auto& service : decl.type) {
      port["type"].push_back(service);
    }
    document["ports"].push_back(std::move(port));
  }

  document["layers"] = json::array();
  for (const auto& [name, layer] : model.config.layers) {
    json entry;
    entry["name"] = name;
    entry["inputs"] = json::array();
    for (const auto& port : layer.inputs) {
      entry["inputs"].push_back(port);
    }
    entry["outputs"] = json::array();
    for (const auto& port : layer.outputs) {
      entry["outputs"].push_back(port);
    }
    entry["behavior"] = json::array();
    for (const auto& [input, outputs] : layer.behavior.rows) {
      json row;
      row["input"] = json::object();
      for (const auto& [port, service] : input.bindings) {
        row["input"][port] = service;
      }
      row["outputs"] = json::array();
      for (const auto& output : outputs) {
        json rendered = json::object();
        for (const auto& [port, service] : output.bindings) {
          rendered[port] = service;
        }
        row["outputs"].push_back(std::move(rendered));
      }
      entry["behavior"].push_back(std::move(row));
    }
    document["layers"].push_back(std::move(entry));
  }

  document["attachment"] = json::array();
  for (const auto& [in_port, out_port] : model.config.attachment) {
    json entry;
    entry["input"] = in_port;
    entry["output"] = out_port;
    document["attachment"].push_back(std::move(entry));
  }

  return document.dump(2) + "\n";
}

std::string export_dot(const Model& model, DotRelation relation,
                       const Budgets& budgets) {
  std::ostringstream out;
  out << "digraph layered {\n";
  out << "  rankdir=BT;\n";
  for (const auto& [name, layer] : model.config.layers) {
    out << "  \"" << name << "\";\n";
  }
  if (relation == DotRelation::attachment) {
    // Attachment keys are input ports; render arrows source-to-sink as the
    // configuration diagrams do.
    for (const auto& [in_port, out_port] : model.config.attachment) {
      out << "  \"" << project(out_port, model.config).name << "\" -> \""
          << project(in_port, model.config).name << "\" [label=\"" << out_port
          << " -> " << in_port << "\"];\n";
    }
  } else {
    DependencyRelation dependency =
        relation == DotRelation::syntactic
            ? syntactic_dependency(model.config)
            : semantic_dependency_relation(model.universe, model.config,
                                           budgets);
    for (const auto& [from, to] : dependency.pairs) {
      if (from != to) {
        out << "  \"" << from << "\" -> \"" << to << "\";\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace lasem
