import math

import numpy as np
import pytest

import fracfem


def test_mittag_leffler_reductions():
    # E_{1,1}(z) = exp(z); E_{1/2,1}(-x) = exp(x^2) erfc(x)
    for z in (-5.0, -0.5, 0.0, 1.5):
        assert fracfem.mml_value([1.0], 1.0, [z]) == pytest.approx(math.exp(z), rel=1e-12)
    x = 2.0
    assert fracfem.mml_value([0.5], 1.0, [-x]) == pytest.approx(math.exp(x * x) * math.erfc(x), rel=1e-12)
    assert fracfem.mml_contour([0.5, 0.3], 1.2, [-1.0, -0.4]) == pytest.approx(
        fracfem.mml_series([0.5, 0.3], 1.2, [-1.0, -0.4]), abs=1e-10
    )
    with pytest.raises(ValueError):
        fracfem.mml_value([0.5], 1.0, [-1.0, -2.0])


def test_mode_factors():
    o = fracfem.Orders(0.5, [(0.2, 1.0)])
    assert o.lower == [(0.2, 1.0)]
    lam = math.pi**2
    e = fracfem.relaxation(lam, 0.3, o)
    assert 0.0 < e < 1.0
    assert e == pytest.approx(1.0 - lam * fracfem.primitive(lam, 0.3, o), rel=1e-8)
    assert fracfem.response(lam, 0.3, o) > fracfem.response(lam, 0.6, o) > 0.0
    with pytest.raises(ValueError):
        fracfem.Orders(1.2)


def test_l1_operator():
    w = fracfem.l1_weights(0.5, 3)
    assert w[0] == 1.0
    assert w[1] == pytest.approx(math.sqrt(2.0) - 1.0)
    k = 50
    line = [n / k for n in range(k + 1)]
    assert fracfem.caputo_l1(line, 0.3, 1.0 / k) == pytest.approx(1.0 / math.gamma(1.7), rel=1e-12)


def test_solvers_agree():
    o = fracfem.Orders(0.5, [(0.2, 1.0)])
    points, semi = fracfem.solve_semidiscrete("2b", o, 16, [0.5, 1.0])
    assert points.shape == (15, 2)
    assert semi.shape == (15, 2)
    _, times, full = fracfem.solve_fully_discrete("2b", o, 16, 200)
    assert times[-1] == 1.0
    assert full.shape == (15, 201)
    gap = np.max(np.abs(full[:, -1] - semi[:, 1]))
    assert gap < 5e-3 * np.max(np.abs(semi[:, 1]))


def test_space_study_and_table_round_trip():
    o = fracfem.Orders(0.5, [(0.2, 1.0)])
    (report,) = fracfem.converge_space("2b", o, [1.0], [8, 16, 32], reference_modes=4096)
    assert report.pass_l2() and report.pass_h1()
    assert [p.param for p in report.points] == [0.125, 0.0625, 0.03125]
    text = fracfem.emit_table(report)
    assert text.startswith("param,l2_error,h1_error\n")
    assert "# rate_l2=" in text and "# rate_h1=" in text and "# theory=2\n" in text
    assert fracfem.parse_table(text) == report
    assert fracfem.emit_table(fracfem.parse_table(text)) == text


def test_rate_and_config_helpers():
    assert fracfem.estimate_rate([0.5, 0.25, 0.125], [4.0, 1.0, 0.25]) == pytest.approx(2.0)
    a = fracfem.config_hash('{"case": "2b", "orders": {"alpha": 0.5}}')
    b = fracfem.config_hash('{"orders": {"alpha": 0.5}, "case": "2b"}')
    assert a == b and len(a) == 16
    assert "smooth" in fracfem.case_names()
    assert fracfem.worker_count() >= 1
