#include "lasem/update.hpp"

namespace lasem {

Layer update_layer(const Layer& layer, BehaviorTable new_behavior,
                   const Universe& universe) {
  if (new_behavior.input_ports != layer.inputs ||
      new_behavior.output_ports != layer.outputs) {
    throw Error("update for layer '" + layer.name +
                "' declares different port sets");
  }
  Layer updated = layer;
  updated.behavior = std::move(new_behavior);
  auto report = validate_layer(updated, universe);
  if (!report.ok()) {
    throw Error("update for layer '" + layer.name +
                "' is ill-formed: " + report.violations.front());
  }
  return updated;
}

Configuration update_configuration(const Configuration& config,
                                    const UpdateSpec& spec,
                                    const Universe& universe) {
  const Layer& target = config.layer(spec.target);
  Configuration updated = config;
  updated.layers.at(spec.target) =
      update_layer(target, spec.new_behavior, universe);
  auto report = validate_configuration(updated, universe);
  if (!report.ok()) {
    throw Error("updated configuration is invalid: " +
                report.violations.front());
  }
  return updated;
}

}  // namespace lasem
