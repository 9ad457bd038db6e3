"""Acceptance gate: the ten reproduction criteria, one line each.

Each test runs one criterion of the verification suite at its stated
tolerance and logs a single pass/fail line, printed in the terminal
summary.
"""

import pytest
from conftest import record_acceptance

from secmeasure import verify


def _check(label, reports):
    ok = all(r.passed for r in reports)
    worst = max((abs(r.computed - r.expected)
                 if isinstance(r.expected, float) else abs(r.computed))
                for r in reports)
    record_acceptance(
        f"{'PASS' if ok else 'FAIL'}  {label:<58} "
        f"({len(reports)} checks, worst deviation {worst:.3e})")
    assert ok, "\n".join(r.row() for r in reports if not r.passed)


def test_criterion_01_reducer_closed_forms():
    _check("criterion 1: reducer closed forms (tol 1e-7)",
           verify.criterion_reducer_closed_forms())


def test_criterion_02_moment0_values():
    _check("criterion 2: moment-0 curve values (tol 1e-6)",
           verify.criterion_moment0_values())


def test_criterion_03_family_closed_forms():
    _check("criterion 3: family closed forms, t=2 density (tol 1e-7)",
           verify.criterion_family_closed_forms())


def test_criterion_04_second_moment_identity():
    _check("criterion 4: uniform second moment (t+3)/12 (tol 1e-6)",
           verify.criterion_equinormal_moments())


def test_criterion_05_root_scans():
    _check("criterion 5: denominator root scans",
           verify.criterion_root_scans())


def test_criterion_06_isometry_value():
    _check("criterion 6: isometry value 0.1010020264 (tol 1e-6)",
           verify.criterion_isometry_value())


def test_criterion_07_integral_equation():
    _check("criterion 7: integral-equation round trips (tol 1e-5)",
           verify.criterion_integral_equation())


def test_criterion_08_barycentric():
    _check("criterion 8: barycentric identity and value (tol 1e-5)",
           verify.criterion_barycentric())


def test_criterion_09_transform_relation():
    _check("criterion 9: transform relation at 10 z (tol 1e-8)",
           verify.criterion_transform_relation())


def test_criterion_10_property_suites():
    _check("criterion 10: operator property suites",
           verify.criterion_property_suites())


def test_full_suite_aggregate():
    reports = verify.run_suite("paper")
    assert all(r.passed for r in reports)
    assert sum(r.runtime_ms for r in reports) < 600_000
