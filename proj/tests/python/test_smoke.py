"""Smoke tests for the Python bindings. Runs under pytest or as a script."""

import json
import math

import repct


def test_closed_forms():
    assert math.isclose(repct.g_zero_background(1.0, 4.0, 1.0), 0.78339366788359311, rel_tol=1e-13)
    assert math.isclose(repct.g1_nonzero_background(4.0, 1.0, 1.0, 1.0), 2.8088452440718866, rel_tol=1e-13)
    cp = repct.critical_points(0.25, 1.0, 1.0)
    assert cp["kind"] == "two_points"
    assert math.isclose(cp["rho2_star"], 6.8284271247461901, rel_tol=1e-15)


def test_classify():
    assert repct.classify(1.0, -5.0, -4.0)["region"] == "S1"
    v = repct.classify(1.0, 0.5, 4.0)
    assert v["region"] == "Supercritical"
    assert math.isclose(v["surface_value"], 0.7834, rel_tol=1e-4)


def test_errors_map_to_python_exceptions():
    for call in (
        lambda: repct.classify(1.0, 0.0, 0.0, k=-1.0),
        lambda: repct.g2_nonzero_background(1.0, 1.0, 1.0),
        lambda: repct.sweep("nope"),
    ):
        try:
            call()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")


def test_integration():
    vac = repct.integrate_reduced(0.0, -1.0, 0.0, t_end=10.0)
    assert vac["kind"] == "breakdown"
    assert abs(vac["t_star"] - 2.0) < 1e-6
    smooth = repct.integrate_reduced(1.0, 0.0, -4.0, t_end=100.0)
    assert smooth["kind"] == "global" and smooth["invariant_drift"] < 1e-6
    full = repct.integrate_full([0.2, -0.5, 0.6, 0.1], 1.2, t_end=2.0, sample_dt=0.5)
    assert len(full["t"]) == 5 and full["shear_ratio_drift"] < 1e-8


def test_threshold_recovery():
    r = repct.empirical_threshold(1.0, 4.0)
    assert r["discrepancy"] < 1e-2


def test_portrait_and_cli():
    data = json.loads(repct.render_portrait("fig32"))
    assert set(data) == {"params", "nullcline", "separatrix", "critical_points", "trajectories"}
    code, out, _ = repct.run_cli(["classify", "--rho0", "1", "--d0", "0.5", "--gamma0", "4", "--k", "1"])
    assert code == 0 and json.loads(out)["region"] == "Supercritical"
    code, _, err = repct.run_cli(["classify", "--rho0", "1"])
    assert code == 2 and err.startswith("error:")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print("ok", name)
