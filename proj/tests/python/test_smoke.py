import math

import numpy as np
import pytest

import jetgeom as jg


def test_parse_differentiate_evaluate():
    e = jg.parse("x^2*sin(y)")
    d = e.differentiate("x")
    assert d.evaluate({"x": 1.5, "y": 0.3}) == pytest.approx(3.0 * math.sin(0.3), rel=1e-14)
    assert jg.parse(str(d)) == d
    assert e.free_variables() == {"x", "y"}
    with pytest.raises(jg.ParseError):
        jg.parse("x+")
    with pytest.raises(jg.EvalError):
        jg.parse("ln(x)").evaluate({"x": -1.0})


def test_rotation_geometry():
    f = jg.VectorField(["x", "y"], ["-a*y", "a*x"], {"a": 1.5})
    n = jg.nonlinear_connection(f, [0.2, -0.4])
    assert n[0, 1] == pytest.approx(1.5)
    assert np.array_equal(n, -n.T)
    assert np.array_equal(jg.em_form(f, [0.2, -0.4]), -n)
    assert jg.yang_mills_energy(f, [0.2, -0.4]) == pytest.approx(2.25)
    assert not jg.torsion(f, [0.2, -0.4]).any()
    assert jg.cartan_connection(f).shape == (2, 2, 2)
    assert jg.curvature(f).shape == (2, 2, 2, 2)
    assert not jg.curvature(f).any()


def test_kaldor_energy_matches_oracle():
    f = jg.kaldor_field()
    rng = np.random.default_rng(3)
    for Y, K in rng.uniform(-3, 3, size=(20, 2)):
        assert jg.yang_mills_energy(f, [Y, K]) == pytest.approx(jg.kaldor_energy_oracle(Y, K), rel=1e-12)
    assert jg.yang_mills_energy(f, [0.0, 0.0]) == pytest.approx(0.49, rel=1e-14)


def test_tbm_report_and_maxwell():
    f = jg.tbm_field()
    r = jg.report(f, [1.5, 0.8, 0.1])
    assert r["torsion"].shape == (3, 3, 3)
    assert r["yang_mills"] == pytest.approx(jg.tbm_energy_oracle(1.5, 0.8, 0.1), rel=1e-12)
    assert np.abs(jg.maxwell_residual(f, [1.5, 0.8, 0.1])).max() < 1e-12


def test_field_lines_satisfy_the_prolongation():
    f = jg.kaldor_field()
    traj = jg.integrate(f, [0.5, -0.5], 0.0, 5.0, 0.01)
    assert traj["t"][-1] == 5.0
    assert traj["x"].shape == (501, 2)
    assert jg.verify_prolongation(f, [0.5, -0.5], 0.0, 5.0, 0.01) < 1e-10
    second = jg.integrate_prolongation(f, [0.5, -0.5], list(f.value([0.5, -0.5])), 0.0, 5.0, 0.01)
    assert np.abs(second["x"] - traj["x"]).max() < 1e-6
    with pytest.raises(jg.BlowUpError):
        jg.integrate(jg.VectorField(["x"], ["x^2"]), [1.0], 0.0, 5.0, 0.01)


def test_euclidean_metric_reduces_to_the_prolongation():
    f = jg.kaldor_field()
    g = jg.MetricField.euclidean(["Y", "K"])
    assert not jg.christoffel(g, [0.3, 0.1]).any()
    a = jg.geometric_dynamics_acceleration(g, f, [0.3, 0.1], [1.0, -2.0])
    assert np.array_equal(a, jg.prolonged_acceleration(f, [0.3, 0.1], [1.0, -2.0]))
    shrinking = jg.MetricField(["Y", "K"], [["1-Y", "0"], ["0", "1"]])
    with pytest.raises(jg.MetricDomainError):
        shrinking.metric([2.0, 0.0])


def test_levelsets():
    circle = jg.VectorField(["x", "y"], ["-y", "x"])  # EYM is identically 1
    assert jg.levelset(circle, [(-1, 1), (-1, 1)], 16, 2.0)["segments"].shape == (0, 2, 2)
    seg = jg.levelset(jg.kaldor_field(), [(-3, 3), (-3, 3)], 64, 0.3)["segments"]
    assert seg.shape[0] > 0
    mesh = jg.levelset(jg.tbm_field(), [(0.5, 4), (0.2, 2), (-0.5, 0.5)], 24, 0.5)
    assert mesh["triangles"].shape[1] == 3
    assert mesh["vertices"].shape[0] > 0


def test_load_model_overrides():
    f = jg.load_model("kaldor", {"s": 3.0})
    assert f.parameters["s"] == 3.0
    with pytest.raises(jg.ValidationError):
        jg.load_model("kaldor", {"nope": 1.0})
