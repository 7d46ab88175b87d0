#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lasem {

using PortId = std::string;
using ServiceId = std::string;
using LayerName = std::string;

/// Base class for errors raised by the library. Well-formedness problems in
/// user data are reported as ValidationReport values, not exceptions; Error
/// is reserved for misuse of an operation (unknown port, wrong valuation
/// domain, ...).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An enumeration would exceed a configured resource budget. `required` is
/// saturated to UINT64_MAX when the true count does not fit 64 bits.
struct BudgetError : Error {
  BudgetError(const std::string& what, std::uint64_t required_count,
              std::uint64_t allowed_count)
      : Error(what), required(required_count), allowed(allowed_count) {}

  std::uint64_t required;
  std::uint64_t allowed;
};

enum class PortDirection { input, output };

struct PortDecl {
  PortDirection direction = PortDirection::input;
  std::set<ServiceId> type;  // admissible services; may be empty

  auto operator<=>(const PortDecl&) const = default;
};

/// The ambient finite sets of services and ports, the input/output
/// classification of each port, and the port typing. Everything downstream
/// (valuations, layers, configurations) is interpreted relative to one
/// Universe.
class Universe {
 public:
  /// Idempotent; service identifiers are opaque atoms.
  void add_service(const ServiceId& service) { services_.insert(service); }

  /// Declares a port. Throws Error on a duplicate port id or if the type
  /// mentions an unknown service.
  void add_port(const PortId& port, PortDirection direction,
                std::set<ServiceId> type);

  bool has_service(const ServiceId& service) const {
    return services_.count(service) != 0;
  }
  bool has_port(const PortId& port) const { return ports_.count(port) != 0; }

  /// Throws Error on an unknown port.
  const PortDecl& port(const PortId& port) const;

  const std::set<ServiceId>& type_of(const PortId& port) const {
    return this->port(port).type;
  }
  PortDirection direction_of(const PortId& port) const {
    return this->port(port).direction;
  }
  bool is_input(const PortId& port) const {
    return direction_of(port) == PortDirection::input;
  }
  bool is_output(const PortId& port) const {
    return direction_of(port) == PortDirection::output;
  }

  const std::set<ServiceId>& services() const { return services_; }
  const std::map<PortId, PortDecl>& ports() const { return ports_; }

  bool operator==(const Universe&) const = default;

 private:
  std::set<ServiceId> services_;
  std::map<PortId, PortDecl> ports_;
};

/// A total, type-respecting assignment of one service to each port of some
/// port set. The port set is implicit: it is exactly the binding domain.
struct Valuation {
  std::map<PortId, ServiceId> bindings;

  bool defines(const PortId& port) const { return bindings.count(port) != 0; }

  /// Throws Error if the port is not bound.
  const ServiceId& at(const PortId& port) const;

  std::set<PortId> ports() const;

  /// Restriction to the intersection of the binding domain with `ports`.
  Valuation restricted_to(const std::set<PortId>& ports) const;

  /// True iff every binding of `partial` is also a binding of this
  /// valuation.
  bool extends(const Valuation& partial) const;

  bool empty() const { return bindings.empty(); }
  std::size_t size() const { return bindings.size(); }

  /// Renders "[p0,p1 -> S0,S1]"; the empty valuation renders "[]".
  std::string to_string() const;

  auto operator<=>(const Valuation&) const = default;
};

/// Explicit, total tabulation of a layer behavior: every valuation of the
/// input ports maps to a finite (possibly empty) set of output-port
/// valuations. Set-valued rows encode both nondeterminism and absence of
/// output.
struct BehaviorTable {
  std::set<PortId> input_ports;
  std::set<PortId> output_ports;
  std::map<Valuation, std::set<Valuation>> rows;

  auto operator<=>(const BehaviorTable&) const = default;
};

struct Layer {
  LayerName name;
  std::set<PortId> inputs;
  std::set<PortId> outputs;
  BehaviorTable behavior;

  auto operator<=>(const Layer&) const = default;
};

/// Builds a layer whose declared port sets are taken from the behavior
/// table.
Layer make_layer(LayerName name, BehaviorTable behavior);

/// A set of port-disjoint layers plus a partial attachment map sending
/// attached input ports to the output port that feeds them. Layer identity
/// is the name; it is stable across behavior updates.
struct Configuration {
  std::map<LayerName, Layer> layers;     // key equals layer.name
  std::map<PortId, PortId> attachment;   // input port -> output port

  bool has_layer(const LayerName& name) const {
    return layers.count(name) != 0;
  }

  /// Throws Error on an unknown layer name.
  const Layer& layer(const LayerName& name) const;

  /// Keys the layer by its name; throws Error on a duplicate name.
  void add_layer(Layer layer);

  auto operator<=>(const Configuration&) const = default;
};

/// A universe together with a configuration over it. Most whole-model
/// operations (serialization, fixtures, random generation) traffic in this
/// pair.
struct Model {
  Universe universe;
  Configuration config;

  bool operator==(const Model&) const = default;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// All valuations of `ports`, i.e. the Cartesian product of the port types,
/// in canonical order: ports sorted lexicographically, the first port
/// varying slowest, services in sorted order. The result is empty iff some
/// port has an empty type; for the empty port set it is the singleton
/// containing the empty valuation.
///
/// Throws Error on an unknown port.
std::vector<Valuation> valuation_space(const std::set<PortId>& ports,
                                       const Universe& universe);

/// |valuation_space(ports)| without enumerating, saturated to UINT64_MAX.
std::uint64_t valuation_space_size(const std::set<PortId>& ports,
                                   const Universe& universe);

/// Builds a valuation from explicit (port, service) pairs. Throws Error on
/// a duplicate port, an unknown port, or a service outside the port's type.
Valuation make_valuation(
    const std::vector<std::pair<PortId, ServiceId>>& pairs,
    const Universe& universe);

/// Reports every violated layer invariant: ports outside the universe or
/// with the wrong direction, behavior port sets differing from the layer's,
/// non-total or over-full row maps, and ill-typed row valuations.
ValidationReport validate_layer(const Layer& layer, const Universe& universe);

/// Reports every violated configuration invariant (port sharing between
/// layers, attachment domain/range/type-compatibility problems) plus all
/// member-layer violations.
ValidationReport validate_configuration(const Configuration& config,
                                        const Universe& universe);

std::set<PortId> ports_in(const Configuration& config);
std::set<PortId> ports_out(const Configuration& config);
std::set<PortId> ports_all(const Configuration& config);

/// Input ports of the configuration that are not attached.
std::set<PortId> open_inputs(const Configuration& config);

/// The unique layer owning `port`. Throws Error if no layer owns it.
const Layer& project(const PortId& port, const Configuration& config);

}  // namespace lasem
