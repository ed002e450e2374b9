"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Three criteria quote constants that contradict the internally consistent set
(variational factor 2n vs 2; s->0 target (|L|/2) vs (n|L|/2); the s->1
right-hand side vs half of it), and one pins a first-order convergence window
that the edge-graded quadrature beats. Those checks appear twice: the
consistent version must pass, and the printed version is a strict expected
failure so any change in behavior shows up.
"""
import json

import numpy as np
import pytest

from fracgeo.cli import main
from fracgeo.presets import run_preset

SQUARE = {"dim": 2, "normals": [[1, 0], [0, 1], [-1, 0], [0, -1]],
          "support": [1, 1, 1, 1]}


def _report(num, result):
    status = "PASS" if result["pass"] else "FAIL"
    print(f"criterion {num:2d} [{result['criterion']}]: {status}")
    assert result["pass"], json.dumps(
        [c for c in result["checks"] if not c["pass"]], default=str)


@pytest.fixture(scope="module")
def centroid_result():
    return run_preset("centroid-check")


@pytest.fixture(scope="module")
def variational_result():
    return run_preset("variational")


@pytest.fixture(scope="module")
def limit_s0_result():
    return run_preset("limit-s0")


@pytest.fixture(scope="module")
def lemma_conv_result():
    return run_preset("lemma-conv")


def test_criterion_01_route_agreement():
    _report(1, run_preset("route-agreement"))


def test_criterion_02_homogeneity():
    _report(2, run_preset("homogeneity"))


def test_criterion_03_centroid(centroid_result):
    _report(3, centroid_result)


@pytest.mark.xfail(strict=True, reason=(
    "the [0.35, 0.65] halving window assumes first-order quadrature; the "
    "edge-graded boundary rule converges at ~0.28x per doubling, i.e. faster "
    "than the window allows"))
def test_criterion_03_strict_halving_window(centroid_result):
    assert centroid_result["pass_printed"]


def test_criterion_04_asint_identity():
    _report(4, run_preset("asint-identity"))


def test_criterion_05_variational(variational_result):
    _report(5, variational_result)


@pytest.mark.xfail(strict=True, reason=(
    "the printed first-variation factor 2n contradicts homogeneity combined "
    "with the support-integral identity, which force the factor 2; central "
    "finite differences agree with 2 to ~1e-4"))
def test_criterion_05_printed_constant(variational_result):
    assert variational_result["pass_printed"]


def test_criterion_06_lemma_id():
    _report(6, run_preset("lemma-id"))


def test_criterion_07_limit_s0(limit_s0_result):
    _report(7, limit_s0_result)


@pytest.mark.xfail(strict=True, reason=(
    "against the printed target (|L|/2) a_i the measured ratios converge to "
    "n, not 1; the target consistent with s P_s -> n|K||L| is (n|L|/2) a_i"))
def test_criterion_07_printed_target(limit_s0_result):
    assert limit_s0_result["pass_printed"]


def test_criterion_08_lemma_conv(lemma_conv_result):
    _report(8, lemma_conv_result)


@pytest.mark.xfail(strict=True, reason=(
    "the printed right-hand side omits the factor 1/2 produced by the local "
    "graph expansion; measured ratios converge to 1/2 against it"))
def test_criterion_08_printed_rhs(lemma_conv_result):
    assert lemma_conv_result["pass_printed"]


def test_criterion_09_ludwig_limits():
    _report(9, run_preset("ludwig-limits"))


def test_criterion_10_projection_curvature():
    _report(10, run_preset("projection-curvature"))


def test_criterion_11_minkowski_roundtrip():
    _report(11, run_preset("minkowski-roundtrip"))


def test_criterion_12_subsphere_rejection():
    _report(12, run_preset("subsphere-rejection"))


def test_criterion_13_isoperimetric():
    _report(13, run_preset("isoperimetric"))


def test_criterion_14_determinism(tmp_path):
    result = run_preset("determinism")
    # and at the CLI level: identical configs give byte-identical files
    body = tmp_path / "square.json"
    body.write_text(json.dumps(SQUARE))
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        rc = main(["perimeter", "--body", str(body), "--s", "0.5",
                   "--route", "montecarlo", "--samples", "100000",
                   "--seed", "2024", "--out", str(out)])
        assert rc == 0
        outs.append(out.read_bytes())
    identical = outs[0] == outs[1]
    result["checks"].append({"name": "cli-byte-identical", "pass": identical})
    result["pass"] = result["pass"] and identical
    _report(14, result)
