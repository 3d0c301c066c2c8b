"""End-to-end checks that the compiled extension exposes working operations."""

import json
import math

import pytest

import wmax


def test_version_present():
    assert isinstance(wmax.__version__, str) and wmax.__version__


def test_w_exact_small():
    r = wmax.w_exact(8)
    assert r["w"] == 6
    assert r["status"] == "solved"
    cert = r["certificate"]
    assert cert["elements"] == [2, 4, 8]
    assert cert["y"] == 2
    assert cert["x"] == 8


def test_w_exact_methods_agree():
    brute = wmax.w_exact(12, method="brute")
    opt = wmax.w_exact(12, method="optimized")
    assert brute["w"] == opt["w"] == 6


def test_w_exact_budget_is_reported():
    r = wmax.w_exact(100000, budget_nodes=1000)
    assert r["status"] == "budget_exhausted"
    assert r["w"] == 136  # power chain floor survives exhaustion
    lo, hi = r["unresolved"]
    assert lo == 137 and hi >= lo


def test_psi():
    assert wmax.psi(100, 3) == 20
    assert wmax.psi(100, 3, method="recursive") == 20
    assert wmax.psi(10, 10) == 10
    assert wmax.psi_envelope(10000, 10) == pytest.approx(139.0625)


def test_upper_bound():
    assert wmax.upper_bound(8) == (9, 2)


def test_scale_functions():
    assert wmax.predicted_argmax_q(1e6) == pytest.approx(70.73295531366388)
    assert wmax.envelope(1e6, 2**0.5) == pytest.approx(199.87404068254955)
    assert wmax.scale_L(1e6) == pytest.approx(6.0230105360575745)


def test_power_chain():
    c = wmax.power_chain(1000)
    assert c["w"] == 45
    assert len(c["elements"]) == 9
    assert c["y"] == 2


def test_best_witness_meets_target():
    r = wmax.best_witness(8, target_w=6, budget_nodes=100_000)
    assert r["w"] >= 6
    assert r["certificate"]["x"] == 8


def test_certificate_round_trip():
    text = wmax.certificate_json(1000)
    doc = json.loads(text)
    assert doc["w"] == 77
    assert int(doc["y"]) >= 2
    ok, reason = wmax.verify_certificate(text)
    assert ok and reason == "none"


def test_tampered_certificate_is_rejected():
    doc = json.loads(wmax.certificate_json(8))
    doc["w"] += 1
    ok, reason = wmax.verify_certificate(json.dumps(doc))
    assert not ok and reason != "none"


def test_big_y_survives_the_boundary():
    # 25! style products exceed 64 bits; y must come back as a python int
    chain = wmax.power_chain(1_000_000)
    assert chain["y"] == 2
    assert chain["w"] == 19 * 20 // 2
    product = math.prod(range(2, 26))
    assert product > 2**64
    text = json.dumps(
        {"x": 25, "w": 1, "y": str(product), "elements": list(range(2, 26))}
    )
    ok, reason = wmax.verify_certificate(text)
    assert ok, reason


def test_error_types():
    with pytest.raises(wmax.DomainError):
        wmax.w_exact(1)
    assert issubclass(wmax.DomainError, ValueError)
    with pytest.raises(wmax.CapacityError):
        wmax.w_exact(30_000_000)
    assert issubclass(wmax.CapacityError, OverflowError)
    with pytest.raises(wmax.CertificateError):
        wmax.verify_certificate("not json")
    with pytest.raises(wmax.DomainError):
        wmax.psi(10, 1.5)
