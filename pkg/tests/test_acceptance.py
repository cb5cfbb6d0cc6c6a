"""Acceptance suite: one test per criterion, each printing a PASS line.

Criteria 5, 9, and 10 share two seeded studies; the studies run once in
module-scoped fixtures and criterion 10 re-runs them from scratch to
check byte-identical CSV payloads.
"""

import json
import math
import time

import numpy as np
import pytest

from sampdisc import (
    CoefficientVector,
    brute_force_certificate,
    certify,
    evaluate,
    extract_factor,
    generate_points,
    make_lacunary_space,
    make_trig_space,
    nikolskii_constant,
    tensor_product,
    verify_recovery,
)
from sampdisc.cli import ExperimentConfig, run_experiment

TWO_PI = 2 * math.pi


def full_trig_space(degree):
    return make_trig_space(1, [[k] for k in range(-degree, degree + 1)])


def report_line(k, text):
    print(f"ACCEPTANCE {k}: PASS - {text}")


SCALING_CONFIG = {
    "kind": "study-scaling", "Ns": [5, 9, 17, 33], "p": 2, "eps": 0.5,
    "trials": 50, "success_threshold": 0.9, "seed": 1, "m_max_factor": 20,
}

LACUNARY_CONFIG = {
    "kind": "study-lacunary", "ns": [2, 3, 4, 5], "ratio": 2, "p": 4,
    "eps": 0.5, "trials": 20, "success_threshold": 0.9, "seed": 1,
    "m_max_factor": 4, "budget": 16,
}


@pytest.fixture(scope="module")
def scaling_study():
    start = time.monotonic()
    report = run_experiment(ExperimentConfig(json.loads(json.dumps(SCALING_CONFIG))))
    return report, report.series_csv(), time.monotonic() - start


@pytest.fixture(scope="module")
def lacunary_study():
    start = time.monotonic()
    report = run_experiment(ExperimentConfig(json.loads(json.dumps(LACUNARY_CONFIG))))
    return report, report.series_csv(), time.monotonic() - start


def test_criterion_01_exact_quadrature_certificates():
    start = time.monotonic()
    for n in (1, 2, 4, 8, 16):
        space = full_trig_space(n)
        cert = certify(space, generate_points(space, "equispaced", 2 * n + 1), 2)
        assert abs(cert.c1_pow - 1.0) <= 1e-10
        assert abs(cert.c2_pow - 1.0) <= 1e-10
        assert cert.status == "certified"
    elapsed = time.monotonic() - start
    assert elapsed < 1.0
    report_line(1, f"equispaced m=N certificates are (1,1) within 1e-10 ({elapsed:.2f}s)")


def test_criterion_02_even_p_exactness():
    start = time.monotonic()
    space = make_trig_space(1, [[1], [-1]])
    nodes = generate_points(space, "equispaced", 5)
    cert = certify(space, nodes, 4)
    assert abs(cert.c1_pow - 1.0) <= 1e-8
    assert abs(cert.c2_pow - 1.0) <= 1e-8
    assert cert.status == "certified"
    oracle = brute_force_certificate(space, nodes, 4, resolution=200)
    assert abs(oracle.c1_pow - cert.c1_pow) <= oracle.tolerance
    assert abs(oracle.c2_pow - cert.c2_pow) <= oracle.tolerance
    elapsed = time.monotonic() - start
    assert elapsed < 10.0
    report_line(2, f"p=4 certificate (1,1), oracle agrees within {oracle.tolerance:g} ({elapsed:.2f}s)")


def test_criterion_03_nikolskii_anchors():
    start = time.monotonic()
    for N in (3, 5, 9, 17):
        est = nikolskii_constant(full_trig_space((N - 1) // 2), 2)
        assert abs(est.M - math.sqrt(N)) <= 1e-10
    for n in (2, 3, 4, 5):
        lac = make_lacunary_space(n, 2)
        est2 = nikolskii_constant(lac, 2)
        assert abs(est2.M - math.sqrt(n)) <= 1e-8
        est4 = nikolskii_constant(lac, 4)
        assert est4.B <= n ** 0.25 + 1e-6
    elapsed = time.monotonic() - start
    assert elapsed < 30.0
    report_line(3, f"M = sqrt(N) and lacunary q=4 bound hold ({elapsed:.2f}s)")


def test_criterion_04_oracle_equivalence():
    start = time.monotonic()
    rng = np.random.default_rng(2024)
    checked = 0
    for i in range(20):
        p = (2, 3, 4)[i % 3]
        n = 2 + (i % 2)
        freqs = sorted(rng.choice(np.arange(-4, 5), size=n, replace=False).tolist())
        space = make_trig_space(1, [[int(k)] for k in freqs])
        m = int(rng.integers(n + 2, 13))
        pts = generate_points(space, "iid", m, seed=(500, i))
        cert = certify(space, pts, p)
        oracle = brute_force_certificate(space, pts, p, resolution=200)
        assert oracle.tolerance <= 1e-3
        assert abs(cert.c1_pow - oracle.c1_pow) <= oracle.tolerance, (i, p, freqs)
        assert abs(cert.c2_pow - oracle.c2_pow) <= oracle.tolerance, (i, p, freqs)
        checked += 1
    elapsed = time.monotonic() - start
    assert checked == 20
    assert elapsed < 300.0
    report_line(4, f"20 instances agree with the enumeration oracle ({elapsed:.1f}s)")


def test_criterion_05_random_sampling_scaling(scaling_study):
    report, _, elapsed = scaling_study
    Ns = report.summary["Ns"]
    m_stars = report.summary["m_stars"]
    for n, m_star in zip(Ns, m_stars):
        assert n <= m_star <= 20 * n * math.log2(2 * n)
    exponent = report.summary["exponent_vs_N"]
    assert 0.9 <= exponent <= 1.4
    assert elapsed < 600.0
    report_line(5, f"m* = {m_stars}, exponent {exponent:.3f} in [0.9, 1.4] ({elapsed:.1f}s)")


def test_criterion_06_tensor_multiplicativity():
    start = time.monotonic()
    f1, f2 = full_trig_space(1), full_trig_space(1)
    tensor = tensor_product([f1, f2])
    # generic factors: product interval
    p1 = generate_points(f1, "iid", 8, seed=61)
    p2 = generate_points(f2, "iid", 10, seed=62)
    c1, c2 = certify(f1, p1, 2), certify(f2, p2, 2)
    ct = certify(tensor, generate_points(tensor, "tensor", factors=[p1, p2]), 2)
    assert ct.c1_pow >= c1.c1_pow * c2.c1_pow - 1e-8
    assert ct.c2_pow <= c1.c2_pow * c2.c2_pow + 1e-8
    # both factors exact: the product set is exact
    e1 = generate_points(f1, "equispaced", 3)
    e2 = generate_points(f2, "equispaced", 3)
    ce = certify(tensor, generate_points(tensor, "tensor", factors=[e1, e2]), 2)
    assert abs(ce.c1_pow - 1.0) <= 1e-10
    assert abs(ce.c2_pow - 1.0) <= 1e-10
    elapsed = time.monotonic() - start
    assert elapsed < 60.0
    report_line(6, f"tensor constants lie in the factor product interval ({elapsed:.2f}s)")


def test_criterion_07_factor_extraction():
    start = time.monotonic()
    f1, f2 = full_trig_space(1), full_trig_space(2)
    tensor = tensor_product([f1, f2])
    p1 = generate_points(f1, "iid", 9, seed=71)
    p2 = generate_points(f2, "equispaced", 5)  # exact factor
    ts = generate_points(tensor, "tensor", factors=[p1, p2])
    ct = certify(tensor, ts, 2)
    fac_set, transferred = extract_factor(tensor, ts, 0, ct)
    direct = certify(f1, fac_set, 2)
    assert abs(transferred.c1_pow - direct.c1_pow) <= 1e-8
    assert abs(transferred.c2_pow - direct.c2_pow) <= 1e-8
    elapsed = time.monotonic() - start
    assert elapsed < 60.0
    report_line(7, f"transferred certificate matches direct certification ({elapsed:.2f}s)")


def _recovery_fixture():
    deg1, deg2 = full_trig_space(1), full_trig_space(2)
    cos2 = lambda x: np.cos(2 * x)  # noqa: E731
    cos3 = lambda x: np.cos(3 * x)  # noqa: E731
    smooth = lambda x: np.exp(np.cos(x))  # noqa: E731
    mixed = lambda x: np.sin(2 * x) + 0.3 * np.cos(5 * x)  # noqa: E731
    near = lambda x: np.cos(x) + 0.2 * np.sin(4 * x)  # noqa: E731
    cases = []
    for i, f in enumerate((cos2, cos3, smooth, mixed, near)):
        cases.append((f, deg1, generate_points(deg1, "equispaced", 9), 2))
        cases.append((f, deg2, generate_points(deg2, "equispaced", 13), 2))
        cases.append((f, deg1, generate_points(deg1, "iid", 14, seed=(80, i)), 2))
        cases.append((f, deg1, generate_points(deg1, "equispaced", 9), 4))
    return cases


def test_criterion_08_recovery_bound():
    start = time.monotonic()
    cases = _recovery_fixture()
    assert len(cases) == 20
    for f, space, sample, p in cases:
        report = verify_recovery(f, space, sample, p)
        assert report.lhs <= report.rhs * 1.05, (p, sample.provenance)
    anchor_space = full_trig_space(1)
    anchor = verify_recovery(lambda x: np.cos(2 * x), anchor_space,
                             generate_points(anchor_space, "equispaced", 9), 2)
    assert abs(anchor.lhs - 1 / math.sqrt(2)) <= 1e-6
    assert abs(anchor.rhs - 3.0) <= 5e-3
    elapsed = time.monotonic() - start
    assert elapsed < 120.0
    report_line(8, f"error bound holds on all 20 instances; anchor lhs=1/sqrt(2) ({elapsed:.1f}s)")


def test_criterion_09_lacunary_trend(lacunary_study):
    report, _, elapsed = lacunary_study
    m_stars = report.summary["m_stars"]
    assert all(a <= b for a, b in zip(m_stars, m_stars[1:]))
    assert m_stars[-1] / m_stars[0] >= 2.5
    assert elapsed < 900.0
    report_line(9, f"lacunary m* = {m_stars}, ratio {m_stars[-1] / m_stars[0]:.2f} >= 2.5 ({elapsed:.1f}s)")


def test_criterion_10_determinism(scaling_study, lacunary_study):
    start = time.monotonic()
    _, scaling_csv, _ = scaling_study
    _, lacunary_csv, _ = lacunary_study
    again_scaling = run_experiment(ExperimentConfig(json.loads(json.dumps(SCALING_CONFIG))))
    again_lacunary = run_experiment(ExperimentConfig(json.loads(json.dumps(LACUNARY_CONFIG))))
    assert again_scaling.series_csv() == scaling_csv
    assert again_lacunary.series_csv() == lacunary_csv
    elapsed = time.monotonic() - start
    report_line(10, f"re-runs reproduce byte-identical CSV payloads ({elapsed:.1f}s)")
