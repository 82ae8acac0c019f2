import math

import numpy as np
import pytest

import ruinlab as rl


def test_classical_closed_form():
    s = rl.solve(rl.ModelParams(0.0, 0.0, 0.1, 0.09, 1.0))
    assert s.regime == rl.Regime.ClassicalCL
    assert s.C0 == pytest.approx(0.1, abs=1e-12)
    u = s.u
    assert isinstance(u, np.ndarray)
    np.testing.assert_allclose(s.phi, 1 - 0.9 * np.exp(-0.1 * u), atol=1e-12)


def test_main_case():
    p = rl.ModelParams(0.02, 0.1, 0.1, 0.09, 1.0)
    s = rl.solve(p)
    assert s.regime == rl.Regime.Main
    assert abs(s.C0 - 0.295) <= 0.002
    phi, dphi, _ = s.evaluate(0.0)
    assert dphi == pytest.approx(0.09 * phi / 0.1, rel=1e-12)
    assert s.tail.exponent == pytest.approx(-3.0)
    assert s.diagnostics.u0 > 0


def test_grid_options():
    o = rl.SolveOptions()
    o.grid = rl.GridSpec(u_max=50.0, points=11, spacing=rl.Spacing.Log)
    s = rl.solve(rl.ModelParams(0.02, 0.1, 0.1, 0.09, 1.0), o)
    assert len(s.u) == 11
    assert s.u[-1] == pytest.approx(50.0)


def test_capital_stock():
    s = rl.solve(rl.ModelParams(0.1, 0.1, 0.0, 0.09, 1.0))
    assert s.regime == rl.Regime.CapitalStock
    assert s.P1 == pytest.approx(0.8609562572088, rel=1e-9)
    _, dphi, _ = s.evaluate(0.0)
    assert math.isinf(dphi)


def test_residual():
    s = rl.solve(rl.ModelParams(0.02, 0.1, 0.1, 0.09, 1.0))
    r = rl.ide_residual(s, np.linspace(0.0, 50.0, 101))
    assert r.sup_rel < 1e-6
    assert len(r.residual) == 101


def test_monte_carlo():
    o = rl.McOptions()
    o.n_paths = 2000
    o.T = 100.0
    o.dt = 0.05
    o.seed = 7
    a = rl.mc_survival(rl.ModelParams(0.02, 0.1, 0.1, 0.09, 1.0), 2.0, o)
    b = rl.mc_survival(rl.ModelParams(0.02, 0.1, 0.1, 0.09, 1.0), 2.0, o)
    assert 0.0 <= a.p_hat <= 1.0
    assert a.p_hat == b.p_hat
    assert rl.default_horizon(rl.ModelParams(0.0, 0.0, 0.1, 0.09, 1.0)) == pytest.approx(40000.0)


def test_regimes_and_errors():
    zero = rl.solve(rl.ModelParams(0.004, 0.1, 0.1, 0.09, 1.0))
    assert zero.ruin_certain()
    assert zero.reason == rl.NoSolutionReason.SharesNotRobust
    assert not np.any(zero.phi)
    with pytest.raises(rl.NoSolution):
        rl.solve(rl.ModelParams(0.0, 0.0, 0.05, 0.09, 1.0))
    with pytest.raises(rl.Refused):
        rl.solve(rl.ModelParams(0.005, 0.1, 0.1, 0.09, 1.0))
    with pytest.raises(rl.InvalidParams):
        rl.ModelParams(-1.0, 0.1, 0.1, 0.09, 1.0)
    with pytest.raises(rl.Error):
        rl.solve(rl.ModelParams(0.0, 0.0, 0.05, 0.09, 1.0))
    c = rl.classify_regime(rl.ModelParams(0.05, 0.0, 0.1, 0.09, 1.0))
    assert c.regime == rl.Regime.RiskFree
