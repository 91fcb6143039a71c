"""Acceptance criteria, one test per criterion, each printing its verdict.

Run with `pytest -s tests/test_acceptance.py` to see one line per criterion;
`openeff verify --suite full` prints the same lines from the CLI.
"""
import pytest

from openeff import verify


def _run(criterion):
    result = criterion()
    print(result.line())
    assert result.passed, result.detail
    return result


def test_criterion_01_theta_anchor_values():
    _run(verify.criterion_01_theta_anchors)


def test_criterion_02_inequality_chain():
    _run(verify.criterion_02_inequality_chain)


def test_criterion_03_q_minimum():
    _run(verify.criterion_03_q_minimum)


def test_criterion_04_kernel_examples():
    _run(verify.criterion_04_kernel_examples)


def test_criterion_05_power_family_consistency():
    _run(verify.criterion_05_power_family)


def test_criterion_06_berndtsson_dominance():
    _run(verify.criterion_06_berndtsson_dominance)


def test_criterion_07_dk_equality_case():
    _run(verify.criterion_07_dk_equality)


def test_criterion_08_jm_remark_case():
    _run(verify.criterion_08_jm_remark)


def test_criterion_09_ode_witnesses():
    _run(verify.criterion_09_ode_witnesses)


def test_criterion_10_chain_audit():
    _run(verify.criterion_10_chain_audit)


def test_criterion_11_monte_carlo_cross_checks():
    result = verify.criterion_11_monte_carlo()
    print(result.line())
    assert result.passed, result.detail


def test_suite_runtimes_within_budget():
    results = verify.run_suite("full")
    fast = [r for r in results if r.name != "11-monte-carlo"]
    assert sum(r.seconds for r in fast) < 10.0
    mc = next(r for r in results if r.name == "11-monte-carlo")
    assert mc.seconds < 30.0
