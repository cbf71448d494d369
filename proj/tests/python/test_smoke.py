import math

import pytest

import holokit as hk


def test_domain_roundtrip():
    d = hk.Domain.preset("preset:ball:2")
    assert d.n == 2
    assert d.domain_class == "strongly_pseudoconvex"
    d2 = hk.Domain.from_json(d.to_json())
    assert d2.n == 2
    assert d2.rho([0j, 0j]) == pytest.approx(-1.0)


def test_metric_at_center():
    d = hk.Domain.preset("preset:ball:2")
    m = hk.kobayashi_metric(d, [0j, 0j], [1 + 0j, 0j], N=4, iterations=200)
    assert m["bound"] == "upper"
    assert 1.0 <= m["value"] <= 1.05
    c = hk.caratheodory_metric(d, [0j, 0j], [1 + 0j, 0j], N=4, iterations=200)
    assert c["bound"] == "lower"
    assert c["value"] <= m["value"] + 1e-9


def test_closed_form_distance():
    v = hk.closed_form_distance("disc", [0j], [0.5 + 0j])
    assert v == pytest.approx(math.atanh(0.5), rel=1e-12)


def test_distance_estimate_brackets_closed_form():
    d = hk.Domain.preset("preset:ball:2")
    est = hk.kobayashi_distance(d, [0j, 0j], [0.5 + 0j, 0j], N=4,
                                iterations=100)
    assert est["bound"] == "upper"
    assert est["value"] >= math.atanh(0.5) - 1e-9
    assert est["value"] <= 1.1 * math.atanh(0.5)


def test_scaling_step_recentres():
    d = hk.Domain.preset("preset:ball:2")
    step = hk.scaling_step(d, [0j, 0.9 + 0j], j=2)
    assert step["j"] == 2
    assert len(step["scales"]) >= 1
    assert all(s > 0 for s in step["scales"])


def test_herbort_rho_star_symmetric_zero():
    d = hk.Domain.preset("preset:ball:2")
    p = [0j, -0.5 + 0j]
    r = hk.herbort_rho_star(d, p, p)
    assert r["value"] == pytest.approx(0.0, abs=1e-12)


def test_fridman_zero_cert():
    d = hk.Domain.preset("preset:ball:2")
    zc = hk.fridman_zero_cert(d, [0j, 0j], "ball")
    assert zc["certified"]
    radii = [r for _, r in zc["exhaustion"]]
    assert radii == sorted(radii)
    # uncataloged domains are refused, not rejected with an exception
    th = hk.Domain.preset("preset:thullen_model:2")
    assert not hk.fridman_zero_cert(th, [0j, -1 + 0j], "ball")["certified"]


def test_fridman_boundary_experiment():
    d = hk.Domain.preset("preset:ball:2")
    seq = [[0j, complex(1 - t, 0)] for t in (1e-1, 1e-2)]
    rows = hk.fridman_boundary_experiment(d, seq, "ball", closed_form=True,
                                          extra_directions=4)
    assert len(rows) == 2
    assert all(r["error"] == "" for r in rows)
    assert rows[1]["upper"] < rows[0]["upper"]


def test_error_maps_to_python_exception():
    d = hk.Domain.preset("preset:ball:2")
    with pytest.raises(hk.HolokitError):
        hk.kobayashi_metric(d, [2 + 0j, 0j], [1 + 0j, 0j])


def test_fmt17():
    assert hk.fmt17(0.1) == "0.10000000000000001"
    assert hk.fmt17(1.0) == "1"
