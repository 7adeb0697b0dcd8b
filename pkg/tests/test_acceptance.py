"""Acceptance criteria 1-12, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line (visible with
``pytest -s`` and in the ``-v`` log on failure) before asserting.
"""

import subprocess
import sys
import time

import pytest

from softlin import selftest


def _run(fn, **kw):
    t0 = time.perf_counter()
    res = fn(**kw)
    return res, time.perf_counter() - t0


def _report(number, ok, detail, seconds=None):
    timing = "" if seconds is None else f" ({seconds:.2f} s)"
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}{timing} {detail}")


def test_criterion_01_norm_axioms():
    res, dt = _run(selftest.criterion_norm_axioms)
    ok = res.passed and dt < 10
    _report(1, ok, res.detail, dt)
    assert res.detail["families"] == 20 and res.detail["samples"] == 10_000
    assert ok


def test_criterion_02_de_morgan():
    # timed with the plain-set oracle cross-check included
    res, dt = _run(selftest.criterion_de_morgan)
    ok = res.passed and dt < 1.0
    _report(2, ok, res.detail, dt)
    assert res.detail["trials"] == 1000
    assert ok


def test_criterion_03_independence():
    res, dt = _run(selftest.criterion_independence)
    _report(3, res.passed, res.detail, dt)
    assert res.detail["trials"] == 1000
    assert res.passed


def test_criterion_04_null_vector_and_remark():
    res, dt = _run(selftest.criterion_null_vector)
    _report(4, res.passed, res.detail, dt)
    assert res.passed


def test_criterion_05_metric():
    res, dt = _run(selftest.criterion_metric)
    _report(5, res.passed, res.detail, dt)
    assert res.passed


def test_criterion_06_independence_constant():
    res, dt = _run(selftest.criterion_independence_constant)
    _report(6, res.passed, res.detail, dt)
    assert res.passed


def test_criterion_07_equivalence():
    res, dt = _run(selftest.criterion_equivalence)
    _report(7, res.passed, res.detail, dt)
    assert res.passed


def test_criterion_08_riesz():
    res, dt = _run(selftest.criterion_riesz)
    _report(8, res.passed, res.detail, dt)
    assert res.passed


def test_criterion_09_completeness():
    res, dt = _run(selftest.criterion_completeness)
    _report(9, res.passed, res.detail, dt)
    assert res.detail["cases"] == 100
    assert res.passed


def test_criterion_10_limit_algebra():
    res, dt = _run(selftest.criterion_limit_algebra)
    _report(10, res.passed, res.detail, dt)
    assert res.passed


def test_criterion_11_convexity():
    res, dt = _run(selftest.criterion_convexity)
    _report(11, res.passed, res.detail, dt)
    assert res.detail["segment_samples_per_region"] >= 1000
    assert res.passed


@pytest.mark.slow
def test_criterion_12_cli_determinism():
    cmd = [sys.executable, "-m", "softlin", "selftest", "--seed", "0"]
    t0 = time.perf_counter()
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    dt = time.perf_counter() - t0
    per_run = dt / 2
    ok = (first.returncode == 0 and second.returncode == 0 and first.stdout == second.stdout
          and per_run < 120)
    _report(12, ok, f"exit={first.returncode},{second.returncode} identical={first.stdout == second.stdout} "
                    f"bytes={len(first.stdout)}", per_run)
    assert b'"passed":true' in first.stdout
    assert ok
