#include <doctest.h>

#include <fstream>

#include "jetgeom/geometry.hpp"
#include "jetgeom/model_config.hpp"
#include "support.hpp"

using namespace jetgeom;

namespace {

constexpr const char* kKaldorDoc = R"j({
  "name": "kaldor-doc",
  "variables": ["Y", "K"],
  "parameters": {"s": 2, "q": 0.1},
  "definitions": {"I": "atan(Y)-0.2*K", "S": "0.3*Y"},
  "equations": ["s*(I-S)", "I-q*K"]
})j";

std::string error_of(const std::string& doc) {
  try {
    build_field(parse_model_config(doc));
  } catch (const SchemaError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("document equivalent to the builtin kaldor") {
  const VectorField doc = build_field(parse_model_config(kKaldorDoc));
  const LoadedModel builtin = load_model("kaldor");
  REQUIRE(builtin.kaldor.has_value());
  testing::Rng rng(1);
  for (int s = 0; s < 50; ++s) {
    const Vector p = testing::random_point(rng, 2, -3, 3);
    CHECK((doc.value(as_span(p)) - builtin.field.value(as_span(p))).cwiseAbs().maxCoeff() == 0.0);
    CHECK((doc.torsion(as_span(p)).slice(1) - builtin.field.torsion(as_span(p)).slice(1)).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("definitions expand in declaration order and may chain") {
  const ModelConfig c = parse_model_config(R"j({
    "variables": ["x"],
    "definitions": {"a": "2*x", "b": "a+1", "c": "b*a"},
    "equations": ["c"]
  })j");
  const auto defs = expand_definitions(c);
  REQUIRE(defs.size() == 3);
  CHECK(defs[0].first == "a");
  CHECK(defs[2].first == "c");
  CHECK(free_variables(defs[2].second) == std::set<std::string>{"x"});
  const double x[1] = {1.5};
  CHECK(build_field(c).value(x)(0) == doctest::Approx(12.0));
}

TEST_CASE("schema errors name the field") {
  CHECK(error_of(R"j({"variables": ["x","y"], "equations": ["x"]})j").find("equations") != std::string::npos);
  CHECK(error_of(R"j({"equations": ["x"]})j").find("variables") != std::string::npos);
  CHECK(error_of(R"j({"variables": ["x"], "equations": ["x"], "extra": 1})j").find("extra") != std::string::npos);
  CHECK(error_of(R"j({"variables": ["x"], "parameters": {"k": "one"}, "equations": ["x"]})j").find("parameters.k") !=
        std::string::npos);
  CHECK(error_of(R"j({"variables": ["1x"], "equations": ["x"]})j").find("variables") != std::string::npos);
  CHECK(error_of(R"j({"variables": ["x"], "equations": ["x+"]})j").find("offset 2") != std::string::npos);
  CHECK(error_of(R"j({"variables": ["x"], "equations": ["x+"]})j").find("'x+'") != std::string::npos);
  CHECK(error_of(R"j({"variables": ["x"], "equations": ["x+k"]})j").find("k") != std::string::npos);
  CHECK(error_of("[1,2]").find("object") != std::string::npos);
  CHECK(error_of("{\"variables\": [").find("JSON") != std::string::npos);
}

TEST_CASE("cyclic and clashing definitions") {
  CHECK(error_of(R"j({"variables": ["x"], "definitions": {"a": "b", "b": "a+x"}, "equations": ["a"]})j").find("cyclic") !=
        std::string::npos);
  CHECK(error_of(R"j({"variables": ["x"], "definitions": {"a": "a"}, "equations": ["a"]})j").find("cyclic") !=
        std::string::npos);
  CHECK(error_of(R"j({"variables": ["x"], "definitions": {"x": "2"}, "equations": ["x"]})j").find("clashes") !=
        std::string::npos);
}

TEST_CASE("builtins take parameter overrides") {
  const LoadedModel m = load_model("kaldor", {{"s", 3.0}});
  REQUIRE(m.kaldor.has_value());
  CHECK(m.kaldor->s == 3.0);
  CHECK(m.field.parameters().at("s") == 3.0);
  CHECK_THROWS_AS(load_model("kaldor", {{"zeta", 1.0}}), SchemaError);
  CHECK_THROWS_AS(load_model("kaldor", {{"q", 2.0}}), SchemaError);
  const LoadedModel t = load_model("tbm", {{"mu", 0.7}});
  REQUIRE(t.tbm.has_value());
  CHECK(t.tbm->mu == 0.7);
  CHECK(t.field.dimension() == 3);
  CHECK_THROWS_AS(load_model("no-such-model.json"), SchemaError);
}

TEST_CASE("metric documents") {
  const ModelConfig c = parse_model_config(R"j({
    "variables": ["x", "y"],
    "parameters": {"a": 2},
    "definitions": {"r": "x^2+y^2"},
    "metric": [["1+r", "0"], ["0", "a"]]
  })j");
  const MetricField g = build_metric(c);
  const double p[2] = {1.0, 1.0};
  CHECK(g.metric(p)(0, 0) == 3.0);
  CHECK(g.metric(p)(1, 1) == 2.0);
  CHECK_THROWS_AS(build_field(c), SchemaError);
  CHECK_THROWS_AS(parse_model_config(R"j({"variables": ["x","y"], "metric": [["1","0"]]})j"), SchemaError);
  CHECK_THROWS_AS(build_metric(parse_model_config(R"j({"variables": ["x","y"], "metric": [["1","x"],["y","1"]]})j")),
                  SchemaError);
}

TEST_CASE("model files with overrides") {
  const std::string path = "test_model_config_tmp.json";
  {
    std::ofstream out(path);
    out << kKaldorDoc;
  }
  const LoadedModel m = load_model(path, {{"q", 0.5}});
  CHECK(m.name == "kaldor-doc");
  CHECK(m.field.parameters().at("q") == 0.5);
  CHECK_THROWS_AS(load_model(path, {{"w", 0.5}}), SchemaError);
  std::remove(path.c_str());
}
