#include "jetgeom/model_config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace jetgeom {

namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string> string_array(const Json& value, const std::string& field) {
  if (!value.is_array()) throw SchemaError("'" + field + "' must be an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_string()) {
      throw SchemaError("'" + field + "[" + std::to_string(i) + "]' must be a string");
    }
    out.push_back(value[i].get<std::string>());
  }
  return out;
}

Expr parse_field(const std::string& text, const std::string& where) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw SchemaError(where + " '" + text + "': " + e.what());
  }
}

class Expander {
 public:
  explicit Expander(const ModelConfig& config) {
    std::set<std::string> reserved(config.variables.begin(), config.variables.end());
    for (const auto& [name, value] : config.parameters) reserved.insert(name);
    for (const auto& [name, text] : config.definitions) {
      if (!is_identifier(name)) throw SchemaError("definitions: invalid name '" + name + "'");
      if (reserved.contains(name)) {
        throw SchemaError("definitions: '" + name + "' clashes with a variable or parameter");
      }
      if (raw_.contains(name)) throw SchemaError("definitions: duplicate name '" + name + "'");
      raw_.emplace(name, parse_field(text, "definitions." + name));
      order_.push_back(name);
    }
  }

  const std::vector<std::string>& order() const { return order_; }

  const Expr& expanded(const std::string& name) {
    if (auto it = done_.find(name); it != done_.end()) return it->second;
    if (std::find(stack_.begin(), stack_.end(), name) != stack_.end()) {
      std::string cycle;
      auto start = std::find(stack_.begin(), stack_.end(), name);
      for (auto it = start; it != stack_.end(); ++it) cycle += *it + " -> ";
      throw SchemaError("definitions: cyclic definitions " + cycle + name);
    }
    stack_.push_back(name);
    Expr e = raw_.at(name);
    for (const auto& ref : free_variables(e)) {
      if (raw_.contains(ref)) e = substitute(e, ref, expanded(ref));
    }
    stack_.pop_back();
    return done_.emplace(name, std::move(e)).first->second;
  }

  Expr apply(const Expr& e) {
    Expr out = e;
    for (const auto& ref : free_variables(e)) {
      if (raw_.contains(ref)) out = substitute(out, ref, expanded(ref));
    }
    return out;
  }

 private:
  std::map<std::string, Expr> raw_;
  std::map<std::string, Expr> done_;
  std::vector<std::string> order_;
  std::vector<std::string> stack_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ModelConfig parse_model_config(std::string_view json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("model document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("model document must be a JSON object");

  static const std::set<std::string> known{"name", "variables", "parameters", "definitions", "equations", "metric"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw SchemaError("unknown field '" + key + "'");
  }

  ModelConfig config;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw SchemaError("'name' must be a string");
    config.name = doc["name"].get<std::string>();
  }
  if (!doc.contains("variables")) throw SchemaError("missing required field 'variables'");
  config.variables = string_array(doc["variables"], "variables");
  if (config.variables.empty()) throw SchemaError("'variables' must not be empty");
  for (const auto& v : config.variables) {
    if (!is_identifier(v)) throw SchemaError("variables: invalid identifier '" + v + "'");
  }

  if (doc.contains("parameters")) {
    const Json& params = doc["parameters"];
    if (!params.is_object()) throw SchemaError("'parameters' must be an object of numbers");
    for (const auto& [key, value] : params.items()) {
      if (!value.is_number()) throw SchemaError("parameters." + key + " must be a number");
      if (!is_identifier(key)) throw SchemaError("parameters: invalid identifier '" + key + "'");
      config.parameters[key] = value.get<double>();
    }
  }

  if (doc.contains("definitions")) {
    const Json& defs = doc["definitions"];
    if (!defs.is_object()) throw SchemaError("'definitions' must be an object of strings");
    for (const auto& [key, value] : defs.items()) {
      if (!value.is_string()) throw SchemaError("definitions." + key + " must be a string");
      config.definitions.emplace_back(key, value.get<std::string>());
    }
  }

  if (doc.contains("equations")) {
    config.equations = string_array(doc["equations"], "equations");
    if (config.equations.size() != config.variables.size()) {
      throw SchemaError("'equations' has " + std::to_string(config.equations.size()) + " entries but 'variables' has " +
                        std::to_string(config.variables.size()));
    }
  }

  if (doc.contains("metric")) {
    const Json& metric = doc["metric"];
    const std::size_t n = config.variables.size();
    if (!metric.is_array() || metric.size() != n) throw SchemaError("'metric' must be an n×n array of strings");
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      auto row = string_array(metric[i], "metric[" + std::to_string(i) + "]");
      if (row.size() != n) throw SchemaError("'metric' must be an n×n array of strings");
      rows.push_back(std::move(row));
    }
    config.metric = std::move(rows);
  }

  if (config.equations.empty() && !config.metric) {
    throw SchemaError("model document needs 'equations' or 'metric'");
  }
  return config;
}

ModelConfig read_model_config(const std::string& path) { return parse_model_config(read_file(path)); }

std::vector<std::pair<std::string, Expr>> expand_definitions(const ModelConfig& config) {
  Expander ex(config);
  std::vector<std::pair<std::string, Expr>> out;
  for (const auto& name : ex.order()) out.emplace_back(name, ex.expanded(name));
  return out;
}

VectorField build_field(const ModelConfig& config) {
  if (config.equations.empty()) throw SchemaError("model document has no 'equations'");
  Expander ex(config);
  for (const auto& name : ex.order()) ex.expanded(name);
  std::vector<Expr> components;
  for (std::size_t i = 0; i < config.equations.size(); ++i) {
    components.push_back(
        ex.apply(parse_field(config.equations[i], "equations[" + std::to_string(i) + "]")));
  }
  try {
    return VectorField(config.variables, std::move(components), config.parameters);
  } catch (const SchemaError&) {
    throw;
  } catch (const ValidationError& e) {
    throw SchemaError(e.what());
  }
}

MetricField build_metric(const ModelConfig& config) {
  if (!config.metric) throw SchemaError("document has no 'metric'");
  Expander ex(config);
  for (const auto& name : ex.order()) ex.expanded(name);
  std::vector<Expr> entries;
  const auto& rows = *config.metric;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      entries.push_back(ex.apply(
          parse_field(rows[i][j], "metric[" + std::to_string(i) + "][" + std::to_string(j) + "]")));
    }
  }
  try {
    return MetricField(config.variables, std::move(entries), config.parameters);
  } catch (const ValidationError& e) {
    throw SchemaError(e.what());
  }
}

bool is_builtin_model(std::string_view name) { return name == "kaldor" || name == "tbm"; }

LoadedModel load_model(const std::string& source, const Env& overrides) {
  auto take = [&overrides](std::initializer_list<std::pair<const char*, double*>> slots) {
    for (const auto& [name, value] : overrides) {
      bool matched = false;
      for (const auto& [slot_name, slot] : slots) {
        if (name == slot_name) {
          *slot = value;
          matched = true;
        }
      }
      if (!matched) throw SchemaError("unknown parameter '" + name + "'");
    }
  };

  if (source == "kaldor") {
    models::KaldorParams p;
    take({{"s", &p.s}, {"q", &p.q}});
    try {
      return LoadedModel{"kaldor", models::kaldor_field(p), p, std::nullopt};
    } catch (const ValidationError& e) {
      throw SchemaError(e.what());
    }
  }
  if (source == "tbm") {
    models::TbmParams p;
    take({{"s", &p.s}, {"theta", &p.theta}, {"n", &p.n}, {"mu", &p.mu}, {"epsilon", &p.epsilon}});
    try {
      return LoadedModel{"tbm", models::tbm_field(p), std::nullopt, p};
    } catch (const ValidationError& e) {
      throw SchemaError(e.what());
    }
  }

  ModelConfig config = read_model_config(source);
  for (const auto& [name, value] : overrides) {
    if (!config.parameters.contains(name)) throw SchemaError("unknown parameter '" + name + "'");
    config.parameters[name] = value;
  }
  std::string name = config.name.empty() ? source : config.name;
  return LoadedModel{std::move(name), build_field(config), std::nullopt, std::nullopt};
}

}  // namespace jetgeom
