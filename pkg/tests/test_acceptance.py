"""Acceptance suite: one test per criterion, each reporting a single PASS/FAIL line."""

import json

import pytest

from orbitq.checks import CRITERIA, PASS, run_criterion

RESULTS = {}


@pytest.mark.parametrize("n", sorted(CRITERIA), ids=lambda n: f"criterion-{n}")
def test_criterion(n):
    report = run_criterion(n)
    RESULTS[n] = report
    line = f"{'PASS' if report.status == PASS else 'FAIL'} criterion {n}: {CRITERIA[n]} ({report.seconds:.1f}s)"
    print(line)
    assert report.status == PASS, json.dumps(report.to_json(), default=str)[:2000]
