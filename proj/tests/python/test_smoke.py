import math

import pytest

spindd = pytest.importorskip("spindd")


def test_phi_and_mobility():
    assert spindd.phi(0.0) == pytest.approx(1 / 3, abs=1e-15)
    b = spindd.spin_mobility([0.0, 0.0, 0.5], 1.0)
    assert b[0] == 0.0 and b[1] == 0.0
    assert 0.0 < b[2] < 1.0


def test_sandwich_identity():
    a0, a = spindd.polarization_sandwich(1.0, [0.0, 0.0, 0.0], 0.0, [0.0, 0.0, 1.0])
    assert a0 == pytest.approx(1.0)
    assert max(abs(c) for c in a) < 1e-15


def test_presets_and_config_errors():
    assert "baseline_diode" in spindd.preset_names()
    text = spindd.format_config("spin_decay")
    assert "model = qsde1" in text
    with pytest.raises(ValueError, match="zeta"):
        spindd.format_config(overrides={"params.zeta": 1.2})


def test_short_run():
    out = spindd.run("spin_decay", overrides={"stepper.t_end": 1e-3, "samples": "0, 1e-3", "grid.N": 40})
    series = out["series"]
    assert series["t"][0] == 0.0
    assert series["t"][-1] == pytest.approx(1e-3)
    assert all(0.0 <= r < 1.0 for r in series["ratio_max"])
    assert series["l2_spin"][-1] < series["l2_spin"][0]
    assert out["max_principle_violations"] == 0
    assert len(out["snapshots"]) == 2
    assert len(out["snapshots"][-1]["n0"]) == len(out["x"]) == 41


def test_equilibrium_and_sweep():
    eq = spindd.equilibrium(overrides={"doping.C_min": 1.0})
    assert max(abs(v) for v in eq["V_eq"]) < 1e-12
    rows = spindd.sweep([0.0, 4.0], models=["dd"], overrides={"grid.N": 40}, threads=2)
    assert [r["V_A"] for r in rows] == [0.0, 4.0]
    assert all(r["error"] == "" for r in rows)
    assert abs(rows[0]["current"]) < 1e-6
    assert rows[1]["current"] > 0.0 and math.isfinite(rows[1]["current"])
