"""Acceptance suite: every criterion, exact, with one pass/fail line each.

This drives the same desk suite as `klsc validate --suite desk`.  All
comparisons are exact integer polynomial equalities (tolerance zero); the
timing bounds are the stated per-criterion budgets.
"""

import time

import pytest

from klsc.validate import run_desk_suite

_LINES = []


@pytest.fixture(scope="module")
def suite():
    t0 = time.time()
    report = run_desk_suite(log=_LINES.append)
    report.total_seconds = time.time() - t0
    for line in _LINES:
        print(line)
    return report


def _criterion(report, cid):
    return next(c for c in report.criteria if c.cid == cid)


@pytest.mark.parametrize("cid,budget", [
    (1, 1.0),
    (2, 1.0),
    (3, 1.0),
    (4, 1.0),
    (5, 1.0),
    (6, 300.0),
    (7, 300.0),
    (8, 60.0),
    (9, 1.0),
])
def test_criterion(suite, cid, budget):
    c = _criterion(suite, cid)
    print(c.line())
    assert c.passed, f"criterion {cid} failed: {c.details}"
    assert c.seconds < budget, f"criterion {cid} exceeded its {budget}s budget"


def test_all_criteria_pass(suite):
    assert suite.passed
    assert suite.total_seconds < 300.0
