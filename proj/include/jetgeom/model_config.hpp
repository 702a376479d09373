#pragma once

// Model documents: JSON objects of the form
//
//   {
//     "name": "kaldor",
//     "variables": ["Y", "K"],
//     "parameters": {"s": 2, "q": 0.1},
//     "definitions": {"I": "atan(Y)-0.2*K", "S": "0.3*Y"},
//     "equations": ["s*(I-S)", "I-q*K"],
//     "metric": [["1", "0"], ["0", "1"]]          (optional)
//   }
//
// Definitions are macros: each name is replaced by its (expanded) expression
// wherever it appears in later definitions, equations or metric entries.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jetgeom/models.hpp"
#include "jetgeom/riemann.hpp"
#include "jetgeom/vector_field.hpp"

namespace jetgeom {

/// Schema violation in a model document; the message names the field.
class SchemaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct ModelConfig {
  std::string name;
  std::vector<std::string> variables;
  Env parameters;
  std::vector<std::pair<std::string, std::string>> definitions;
  std::vector<std::string> equations;
  std::optional<std::vector<std::vector<std::string>>> metric;
};

ModelConfig parse_model_config(std::string_view json_text);
ModelConfig read_model_config(const std::string& path);

/// Expanded definitions, in declaration order. Throws SchemaError on cycles.
std::vector<std::pair<std::string, Expr>> expand_definitions(const ModelConfig& config);

/// Throws SchemaError if the document has no equations.
VectorField build_field(const ModelConfig& config);
/// Throws SchemaError if the document has no metric.
MetricField build_metric(const ModelConfig& config);

/// A field together with the oracle data of a built-in fixture.
struct LoadedModel {
  std::string name;
  VectorField field;
  std::optional<models::KaldorParams> kaldor;
  std::optional<models::TbmParams> tbm;
};

bool is_builtin_model(std::string_view name);

/// `source` is "kaldor", "tbm" or a path to a model document. Overrides
/// replace parameter values and must name existing parameters.
LoadedModel load_model(const std::string& source, const Env& overrides = {});

}  // namespace jetgeom
