#include "lasem/model.hpp"

#include <algorithm>
#include <sstream>

namespace lasem {

void Universe::add_port(const PortId& port, PortDirection direction,
                        std::set<ServiceId> type) {
  if (ports_.count(port) != 0) {
    throw Error("duplicate port id '" + port + "'");
  }
  for (const auto& service : type) {
    if (!has_service(service)) {
      throw Error("port '" + port + "' typed by unknown service '" + service +
                  "'");
    }
  }
  ports_.emplace(port, PortDecl{direction, std::move(type)});
}

const PortDecl& Universe::port(const PortId& port) const {
  auto it = ports_.find(port);
  if (it == ports_.end()) {
    throw Error("unknown port '" + port + "'");
  }
  return it->second;
}

const ServiceId& Valuation::at(const PortId& port) const {
  auto it = bindings.find(port);
  if (it == bindings.end()) {
    throw Error("valuation does not bind port '" + port + "'");
  }
  return it->second;
}

std::set<PortId> Valuation::ports() const {
  std::set<PortId> result;
  for (const auto& [port, service] : bindings) {
    result.insert(port);
  }
  return result;
}

Valuation Valuation::restricted_to(const std::set<PortId>& ports) const {
  Valuation result;
  for (const auto& [port, service] : bindings) {
    if (ports.count(port) != 0) {
      result.bindings.emplace(port, service);
    }
  }
  return result;
}

bool Valuation::extends(const Valuation& partial) const {
  for (const auto& [port, service] : partial.bindings) {
    auto it = bindings.find(port);
    if (it == bindings.end() || it->second != service) {
      return false;
    }
  }
  return true;
}

std::string Valuation::to_string() const {
  std::ostringstream ports;
  std::ostringstream services;
  bool first = true;
  for (const auto& [port, service] : bindings) {
    if (!first) {
      ports << ",";
      services << ",";
    }
    first = false;
    ports << port;
    services << service;
  }
  if (bindings.empty()) {
    return "[]";
  }
  return "[" + ports.str() + " -> " + services.str() + "]";
}

Layer make_layer(LayerName name, BehaviorTable behavior) {
  Layer layer;
  layer.name = std::move(name);
  layer.inputs = behavior.input_ports;
  layer.outputs = behavior.output_ports;
  layer.behavior = std::move(behavior);
  return layer;
}

const Layer& Configuration::layer(const LayerName& name) const {
  auto it = layers.find(name);
  if (it == layers.end()) {
    throw Error("unknown layer '" + name + "'");
  }
  return it->second;
}

void Configuration::add_layer(Layer layer) {
  if (layers.count(layer.name) != 0) {
    throw Error("duplicate layer name '" + layer.name + "'");
  }
  LayerName name = layer.name;
  layers.emplace(std::move(name), std::move(layer));
}

std::vector<Valuation> valuation_space(const std::set<PortId>& ports,
                                       const Universe& universe) {
  std::vector<PortId> sorted_ports(ports.begin(), ports.end());
  std::vector<std::vector<ServiceId>> choices;
  choices.reserve(sorted_ports.size());
  for (const auto& port : sorted_ports) {
    const auto& type = universe.type_of(port);
    if (type.empty()) {
      return {};
    }
    choices.emplace_back(type.begin(), type.end());
  }

  std::vector<Valuation> result;
  std::vector<std::size_t> index(sorted_ports.size(), 0);
  while (true) {
    Valuation valuation;
    for (std::size_t i = 0; i < sorted_ports.size(); ++i) {
      valuation.bindings.emplace(sorted_ports[i], choices[i][index[i]]);
    }
    result.push_back(std::move(valuation));
    // Odometer with the last port varying fastest, so the sequence is
    // ascending in Valuation order.
    std::size_t i = sorted_ports.size();
    while (i > 0) {
      --i;
      if (++index[i] < choices[i].size()) {
        break;
      }
      index[i] = 0;
      if (i == 0) {
        return result;
      }
    }
    if (sorted_ports.empty()) {
      return result;
    }
  }
}

std::uint64_t valuation_space_size(const std::set<PortId>& ports,
                                   const Universe& universe) {
  std::uint64_t size = 1;
  for (const auto& port : ports) {
    const std::uint64_t arity = universe.type_of(port).size();
    if (arity == 0) {
      return 0;
    }
    if (size > UINT64_MAX / arity) {
      return UINT64_MAX;
    }
    size *= arity;
  }
  return size;
}

Valuation make_valuation(
    const std::vector<std::pair<PortId, ServiceId>>& pairs,
    const Universe& universe) {
  Valuation valuation;
  for (const auto& [port, service] : pairs) {
    const auto& type = universe.type_of(port);
    if (type.count(service) == 0) {
      throw Error("service '" + service + "' is not in the type of port '" +
                  port + "'");
    }
    if (!valuation.bindings.emplace(port, service).second) {
      throw Error("duplicate port '" + port + "' in valuation");
    }
  }
  return valuation;
}

namespace {

void check_layer_ports(const Layer& layer, const Universe& universe,
                       const std::set<PortId>& ports, PortDirection expected,
                       const char* role, std::vector<std::string>& out) {
  for (const auto& port : ports) {
    if (!universe.has_port(port)) {
      out.push_back("layer '" + layer.name + "': unknown " +
                    std::string(role) + " port '" + port + "'");
    } else if (universe.direction_of(port) != expected) {
      out.push_back("layer '" + layer.name + "': port '" + port +
                    "' is not an " + std::string(role) + " port");
    }
  }
}

bool valuation_in_space(const Valuation& valuation,
                        const std::set<PortId>& ports,
                        const Universe& universe) {
  if (valuation.ports() != ports) {
    return false;
  }
  for (const auto& [port, service] : valuation.bindings) {
    if (!universe.has_port(port) ||
        universe.type_of(port).count(service) == 0) {
      return false;
    }
  }
  return true;
}

}  // namespace

ValidationReport validate_layer(const Layer& layer, const Universe& universe) {
  ValidationReport report;
  auto& out = report.violations;

  check_layer_ports(layer, universe, layer.inputs, PortDirection::input,
                    "input", out);
  check_layer_ports(layer, universe, layer.outputs, PortDirection::output,
                    "output", out);
  if (layer.behavior.input_ports != layer.inputs) {
    out.push_back("layer '" + layer.name +
                  "': behavior input ports differ from layer inputs");
  }
  if (layer.behavior.output_ports != layer.outputs) {
    out.push_back("layer '" + layer.name +
                  "': behavior output ports differ from layer outputs");
  }
  if (!out.empty()) {
    // Port-level problems make the row checks below meaningless.
    return report;
  }

  const auto domain = valuation_space(layer.inputs, universe);
  for (const auto& input : domain) {
    if (layer.behavior.rows.count(input) == 0) {
      out.push_back("layer '" + layer.name +
                    "': behavior not total, missing row for " +
                    input.to_string());
    }
  }
  std::set<Valuation> domain_set(domain.begin(), domain.end());
  for (const auto& [input, outputs] : layer.behavior.rows) {
    if (domain_set.count(input) == 0) {
      out.push_back("layer '" + layer.name + "': behavior row for " +
                    input.to_string() +
                    " is outside the input valuation space");
      continue;
    }
    for (const auto& output : outputs) {
      if (!valuation_in_space(output, layer.outputs, universe)) {
        out.push_back("layer '" + layer.name + "': behavior row for " +
                      input.to_string() + " contains ill-typed output " +
                      output.to_string());
      }
    }
  }
  return report;
}

ValidationReport validate_configuration(const Configuration& config,
                                        const Universe& universe) {
  ValidationReport report;
  auto& out = report.violations;

  for (const auto& [name, layer] : config.layers) {
    if (layer.name != name) {
      out.push_back("layer keyed as '" + name + "' is named '" + layer.name +
                    "'");
    }
    auto layer_report = validate_layer(layer, universe);
    out.insert(out.end(), layer_report.violations.begin(),
               layer_report.violations.end());
  }

  // Port disjointness between distinct layers.
  std::map<PortId, LayerName> owner;
  for (const auto& [name, layer] : config.layers) {
    for (const auto& port_set : {layer.inputs, layer.outputs}) {
      for (const auto& port : port_set) {
        auto [it, inserted] = owner.emplace(port, name);
        if (!inserted && it->second != name) {
          out.push_back("port '" + port + "' shared by layers '" +
                        it->second + "' and '" + name + "'");
        }
      }
    }
  }

  const auto inputs = ports_in(config);
  const auto outputs = ports_out(config);
  for (const auto& [in_port, out_port] : config.attachment) {
    if (inputs.count(in_port) == 0) {
      out.push_back("attachment source '" + in_port +
                    "' is not an input port of any layer");
      continue;
    }
    if (outputs.count(out_port) == 0) {
      out.push_back("attachment target '" + out_port +
                    "' is not an output port of any layer");
      continue;
    }
    const auto& out_type = universe.type_of(out_port);
    const auto& in_type = universe.type_of(in_port);
    if (!std::includes(in_type.begin(), in_type.end(), out_type.begin(),
                       out_type.end())) {
      out.push_back("incompatible attachment (" + in_port + ", " + out_port +
                    "): output type is not contained in input type");
    }
  }
  return report;
}

std::set<PortId> ports_in(const Configuration& config) {
  std::set<PortId> result;
  for (const auto& [name, layer] : config.layers) {
    result.insert(layer.inputs.begin(), layer.inputs.end());
  }
  return result;
}

std::set<PortId> ports_out(const Configuration& config) {
  std::set<PortId> result;
  for (const auto& [name, layer] : config.layers) {
    result.insert(layer.outputs.begin(), layer.outputs.end());
  }
  return result;
}

std::set<PortId> ports_all(const Configuration& config) {
  auto result = ports_in(config);
  auto outputs = ports_out(config);
  result.insert(outputs.begin(), outputs.end());
  return result;
}

std::set<PortId> open_inputs(const Configuration& config) {
  auto result = ports_in(config);
  for (const auto& [in_port, out_port] : config.attachment) {
    result.erase(in_port);
  }
  return result;
}

const Layer& project(const PortId& port, const Configuration& config) {
  for (const auto& [name, layer] : config.layers) {
    if (layer.inputs.count(port) != 0 || layer.outputs.count(port) != 0) {
      return layer;
    }
  }
  throw Error("port '" + port + "' is not owned by any layer");
}

}  // namespace lasem
