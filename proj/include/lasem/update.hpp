#pragma once

#include "lasem/model.hpp"

namespace lasem {

/// A behavioral update of one layer: same name, same ports, new behavior
/// table.
struct UpdateSpec {
  LayerName target;
  BehaviorTable new_behavior;
};

/// Returns the layer with the new behavior. Throws Error when the table's
/// port sets differ from the layer's or the table is not a total, well-typed
/// tabulation.
Layer update_layer(const Layer& layer, BehaviorTable new_behavior,
                   const Universe& universe);

/// Replaces exactly the target layer; the attachment and every other layer
/// are unchanged, and the original configuration is not modified. The result
/// is re-validated; a configuration that was valid stays valid. Throws Error
/// on an unknown target or an ill-formed table.
Configuration update_configuration(const Configuration& config,
                                    const UpdateSpec& spec,
                                    const Universe& universe);

}  // namespace lasem
