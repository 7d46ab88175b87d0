#pragma once

#include <string>

#include "lasem/dependency.hpp"
#include "lasem/model.hpp"

namespace lasem {

/// The document is not syntactically well-formed JSON; carries the 1-based
/// position of the first offending character when known.
struct ParseError : Error {
  ParseError(const std::string& what, int line_, int column_)
      : Error(what), line(line_), column(column_) {}

  int line = 0;
  int column = 0;
};

/// The document is well-formed JSON but not a valid configuration document:
/// unknown or missing keys, duplicate identifiers, or references to
/// undeclared ports/services/layers.
struct DocumentError : Error {
  using Error::Error;
};

/// Reads a configuration document:
///   {
///     "services": ["A", ...],
///     "ports": [{"id": ..., "direction": "in"|"out", "type": [...]}, ...],
///     "layers": [{"name": ..., "inputs": [...], "outputs": [...],
///                 "behavior": [{"input": {port: service, ...},
///                               "outputs": [{port: service, ...}, ...]},
///                              ...]}, ...],
///     "attachment": [{"input": port, "output": port}, ...]
///   }
/// Unknown keys are rejected. References must be declared; constraint
/// violations among declared entities are left to validate_configuration.
Model parse_config(const std::string& text);

/// Canonical serialization: object keys and all arrays sorted, two-space
/// indentation, trailing newline. parse_config followed by serialize_config
/// is the identity on canonical documents.
std::string serialize_config(const Model& model);

enum class DotRelation { attachment, syntactic, semantic };

/// Deterministic DOT digraph with one node per layer. Attachment edges run
/// from the layer owning the output port to the layer owning the attached
/// input port, labelled "output -> input"; dependency edges run from the
/// depended-on layer to the dependent one. Self-dependencies are not drawn.
std::string export_dot(const Model& model, DotRelation relation,
                       const Budgets& budgets = {});

}  // namespace lasem
