#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jetgeom/dynamics.hpp"
#include "jetgeom/geometry.hpp"
#include "jetgeom/levelset.hpp"
#include "jetgeom/model_config.hpp"
#include "jetgeom/models.hpp"
#include "jetgeom/riemann.hpp"

namespace py = pybind11;
using namespace jetgeom;

namespace {

using Point = std::vector<double>;

Env to_env(const std::map<std::string, double>& m) { return Env(m.begin(), m.end()); }

py::array_t<double> tensor3_array(const Tensor3& t) {
  const auto n = static_cast<py::ssize_t>(t.dimension());
  py::array_t<double> out({n, n, n});
  std::copy(t.data().begin(), t.data().end(), out.mutable_data());
  return out;
}

py::array_t<double> rows(const std::vector<double>& flat, std::size_t count, std::size_t width) {
  py::array_t<double> out({static_cast<py::ssize_t>(count), static_cast<py::ssize_t>(width)});
  std::copy(flat.begin(), flat.end(), out.mutable_data());
  return out;
}

py::dict trajectory_dict(const Trajectory& traj) {
  const std::size_t n = traj.dimension(), m = traj.size();
  std::vector<double> x, v, a;
  for (std::size_t j = 0; j < m; ++j) {
    x.insert(x.end(), traj.state(j).begin(), traj.state(j).end());
    v.insert(v.end(), traj.velocity(j).begin(), traj.velocity(j).end());
    if (traj.has_accelerations()) a.insert(a.end(), traj.acceleration(j).begin(), traj.acceleration(j).end());
  }
  py::dict d;
  d["t"] = py::array_t<double>(static_cast<py::ssize_t>(m), traj.times().data());
  d["x"] = rows(x, m, n);
  d["v"] = rows(v, m, n);
  if (traj.has_accelerations()) d["a"] = rows(a, m, n);
  return d;
}

std::vector<AxisRange> to_bounds(const std::vector<std::pair<double, double>>& b) {
  std::vector<AxisRange> out;
  for (const auto& [lo, hi] : b) out.push_back({lo, hi});
  return out;
}

py::dict levelset_dict(const LevelSet& ls) {
  py::dict d;
  d["level"] = ls.level;
  if (ls.dims == 2) {
    py::array_t<double> seg({static_cast<py::ssize_t>(ls.segments.size()), py::ssize_t{2}, py::ssize_t{2}});
    double* p = seg.mutable_data();
    for (const auto& s : ls.segments)
      for (const auto& q : s) {
        *p++ = q[0];
        *p++ = q[1];
      }
    d["segments"] = seg;
  } else {
    py::array_t<double> verts({static_cast<py::ssize_t>(ls.vertices.size()), py::ssize_t{3}});
    double* p = verts.mutable_data();
    for (const auto& v : ls.vertices) p = std::copy(v.begin(), v.end(), p);
    py::array_t<std::int64_t> tris({static_cast<py::ssize_t>(ls.triangles.size()), py::ssize_t{3}});
    std::int64_t* t = tris.mutable_data();
    for (const auto& tri : ls.triangles)
      for (std::size_t i : tri) *t++ = static_cast<std::int64_t>(i);
    d["vertices"] = verts;
    d["triangles"] = tris;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_jetgeom, m) {
  m.doc() = "Jet-space geometry of autonomous ODE systems";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<EvalError>(m, "EvalError", PyExc_ArithmeticError);
  py::register_exception<MetricDomainError>(m, "MetricDomainError", PyExc_ArithmeticError);
  py::register_exception<BlowUpError>(m, "BlowUpError", PyExc_ArithmeticError);

  py::class_<Expr>(m, "Expr")
      .def("__str__", [](const Expr& e) { return to_string(e); })
      .def("__repr__", [](const Expr& e) { return "Expr('" + to_string(e) + "')"; })
      .def("__eq__", [](const Expr& a, const Expr& b) { return a == b; })
      .def("evaluate", [](const Expr& e, const std::map<std::string, double>& env) { return evaluate(e, to_env(env)); },
           py::arg("env") = std::map<std::string, double>{})
      .def("differentiate", [](const Expr& e, const std::string& var) { return differentiate(e, var); })
      .def("simplify", [](const Expr& e) { return simplify(e); })
      .def("free_variables", [](const Expr& e) { return free_variables(e); });
  m.def("parse", [](const std::string& text) { return parse(text); });

  py::class_<VectorField>(m, "VectorField")
      .def(py::init([](std::vector<std::string> vars, const std::vector<std::string>& equations,
                       const std::map<std::string, double>& params) {
             std::vector<Expr> comps;
             for (const auto& e : equations) comps.push_back(parse(e));
             return VectorField(std::move(vars), std::move(comps), to_env(params));
           }),
           py::arg("variables"), py::arg("equations"), py::arg("parameters") = std::map<std::string, double>{})
      .def_property_readonly("dimension", &VectorField::dimension)
      .def_property_readonly("variables", &VectorField::variables)
      .def_property_readonly("parameters",
                             [](const VectorField& f) { return std::map<std::string, double>(f.parameters().begin(), f.parameters().end()); })
      .def("value", [](const VectorField& f, const Point& x) { return f.value(x); })
      .def("jacobian", [](const VectorField& f, const Point& x) { return f.jacobian(x); });

  m.def("jacobian", [](const VectorField& f, const Point& x) { return jacobian(f, x); });
  m.def("nonlinear_connection", [](const VectorField& f, const Point& x) { return nonlinear_connection(f, x); });
  m.def("em_form", [](const VectorField& f, const Point& x) { return em_form(f, x); });
  m.def("torsion", [](const VectorField& f, const Point& x) { return tensor3_array(torsion(f, x)); });
  m.def("maxwell_residual", [](const VectorField& f, const Point& x) { return tensor3_array(maxwell_residual(f, x)); });
  m.def("yang_mills_energy", [](const VectorField& f, const Point& x) { return yang_mills_energy(f, x); });
  m.def("cartan_connection", [](const VectorField& f) {
    const VanishingTensor t = cartan_connection(f);
    return py::array_t<double>(std::vector<py::ssize_t>(t.rank, static_cast<py::ssize_t>(t.dimension)), t.dense().data());
  });
  m.def("curvature", [](const VectorField& f) {
    const VanishingTensor t = curvature(f);
    return py::array_t<double>(std::vector<py::ssize_t>(t.rank, static_cast<py::ssize_t>(t.dimension)), t.dense().data());
  });
  m.def("el_residual",
        [](const VectorField& f, const Point& x, const Point& v, const Point& a) { return el_residual(f, x, v, a); });
  m.def("prolonged_acceleration",
        [](const VectorField& f, const Point& x, const Point& v) { return prolonged_acceleration(f, x, v); });
  m.def("report", [](const VectorField& f, const Point& x) {
    const GeometryReport r = report(f, x);
    py::dict d;
    d["point"] = r.point;
    d["jacobian"] = r.jacobian;
    d["connection"] = r.connection;
    d["em_form"] = r.em_form;
    d["torsion"] = tensor3_array(r.torsion);
    d["yang_mills"] = r.yang_mills;
    d["maxwell_residual_max"] = r.maxwell_residual_max;
    return d;
  });

  py::class_<MetricField>(m, "MetricField")
      .def(py::init([](std::vector<std::string> vars, const std::vector<std::vector<std::string>>& entries,
                       const std::map<std::string, double>& params) {
             std::vector<Expr> flat;
             for (const auto& row : entries)
               for (const auto& e : row) flat.push_back(parse(e));
             return MetricField(std::move(vars), std::move(flat), to_env(params));
           }),
           py::arg("variables"), py::arg("entries"), py::arg("parameters") = std::map<std::string, double>{})
      .def_static("euclidean", &MetricField::euclidean)
      .def_property_readonly("dimension", &MetricField::dimension)
      .def("metric", [](const MetricField& g, const Point& x) { return g.metric(x); });
  m.def("christoffel", [](const MetricField& g, const Point& x) { return tensor3_array(christoffel(g, x).values); });
  m.def("deformation_tensor",
        [](const MetricField& g, const VectorField& f, const Point& x) { return deformation_tensor(g, f, x); });
  m.def("geometric_dynamics_acceleration", [](const MetricField& g, const VectorField& f, const Point& x, const Point& v) {
    return geometric_dynamics_acceleration(g, f, x, v);
  });

  m.def(
      "kaldor_field",
      [](double s, double q, const std::string& investment, const std::string& saving) {
        return models::kaldor_field({s, q, parse(investment), parse(saving)});
      },
      py::arg("s") = 2.0, py::arg("q") = 0.1, py::arg("investment") = "atan(Y)-0.2*K", py::arg("saving") = "0.3*Y");
  m.def(
      "kaldor_energy_oracle",
      [](double Y, double K, double s, double q) {
        models::KaldorParams p;
        p.s = s;
        p.q = q;
        return models::kaldor_energy_oracle(p, Y, K);
      },
      py::arg("Y"), py::arg("K"), py::arg("s") = 2.0, py::arg("q") = 0.1);
  m.def(
      "tbm_field",
      [](double s, double theta, double n, double mu, double epsilon) {
        models::TbmParams p;
        p.s = s;
        p.theta = theta;
        p.n = n;
        p.mu = mu;
        p.epsilon = epsilon;
        return models::tbm_field(p);
      },
      py::arg("s") = 0.3, py::arg("theta") = 0.1, py::arg("n") = 0.02, py::arg("mu") = 0.5, py::arg("epsilon") = 0.4);
  m.def("tbm_energy_oracle", [](double k, double mm, double q) { return models::tbm_energy_oracle({}, k, mm, q); });
  m.def(
      "load_model",
      [](const std::string& source, const std::map<std::string, double>& overrides) {
        return load_model(source, to_env(overrides)).field;
      },
      py::arg("source"), py::arg("overrides") = std::map<std::string, double>{});

  m.def(
      "integrate",
      [](const VectorField& f, const Point& x0, double t0, double t1, double step) {
        return trajectory_dict(integrate_first_order(f, x0, {t0, t1, step}));
      },
      py::arg("field"), py::arg("x0"), py::arg("t0") = 0.0, py::arg("t1") = 1.0, py::arg("step") = 1e-2);
  m.def(
      "integrate_prolongation",
      [](const VectorField& f, const Point& x0, const Point& v0, double t0, double t1, double step) {
        const AccelerationFn accel = [&f](std::span<const double> x, std::span<const double> v) {
          return prolonged_acceleration(f, x, v);
        };
        return trajectory_dict(integrate_second_order(accel, x0, v0, {t0, t1, step}));
      },
      py::arg("field"), py::arg("x0"), py::arg("v0"), py::arg("t0") = 0.0, py::arg("t1") = 1.0, py::arg("step") = 1e-2);
  m.def("verify_prolongation", [](const VectorField& f, const Point& x0, double t0, double t1, double step) {
    return verify_prolongation(f, integrate_first_order(f, x0, {t0, t1, step}));
  });

  m.def(
      "levelset",
      [](const VectorField& f, const std::vector<std::pair<double, double>>& bounds, std::size_t res, double level) {
        const ScalarGrid g = sample_energy(f, to_bounds(bounds), std::vector<std::size_t>(bounds.size(), res));
        return levelset_dict(g.dims() == 2 ? extract_contour_2d(g, level) : extract_isosurface_3d(g, level));
      },
      py::arg("field"), py::arg("bounds"), py::arg("res"), py::arg("level"));
}
