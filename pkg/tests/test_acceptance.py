"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with the worst observed
residual and the threshold, straight to the terminal, then asserts.
Families are seeded (seed 0) and evaluated at tol = 1e-14.
"""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from qmgamma import invariants as inv

SEED = 0
TOL = 1e-14


@pytest.fixture
def report(capsys):
    def emit(criterion: str, results: list[inv.Residual]) -> None:
        ok = all(r.passed for r in results)
        detail = "; ".join(f"{r.name} {r.value:.2e} < {r.threshold:.0e}" for r in results)
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'}  criterion {criterion}: {detail}")
        assert ok, detail

    return emit


def test_criterion_1_functional_equation(report):
    report("1 functional equation", [inv.functional_equation(SEED, TOL)])


def test_criterion_2_normalization(report):
    report("2 normalization", [inv.normalization(SEED, TOL)])


def test_criterion_3_integer_closed_form(report):
    report("3 integer closed form", [inv.closed_form(SEED, TOL)])


def test_criterion_4_q_gamma_reduction(report):
    report("4 q-gamma reduction", [inv.reduction(SEED, TOL), inv.qgamma_integer_factorial(SEED, TOL)])


def test_criterion_5_three_expressions(report):
    report("5 three expressions", [inv.three_way(SEED, TOL)])


def test_criterion_6_exponent_identities(report):
    report(
        "6 exponent identities",
        [
            inv.g_difference_identity(SEED),
            inv.binomial_sum_identity(SEED),
            inv.g_recursion_identity(SEED),
        ],
    )


def test_criterion_7_log_convexity(report):
    report("7 log-convexity", [inv.deriv_positivity(SEED, TOL), inv.deriv_finite_difference(SEED, TOL)])


def test_criterion_8_truncation_soundness(report):
    report("8 truncation soundness", [inv.truncation_soundness(SEED, TOL)])


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "qmgamma", *args], capture_output=True, text=True)


def test_criterion_9_cli_contract(capsys):
    check = _cli("check")
    value = json.loads(_cli("eval", "--r", "2", "--q", "0.5", "--z", "3").stdout)["re"]
    grid = ["grid", "--r", "3", "--q", "0.5", "--z-start", "-2.5,1", "--z-end", "4,-1", "--steps", "20"]
    first, second = _cli(*grid), _cli(*grid)
    parts = {
        "check exit 0": check.returncode == 0,
        "eval value 1.5 +- 1e-10": abs(value - 1.5) <= 1e-10,
        "grid byte-identical": first.returncode == 0 and first.stdout == second.stdout,
    }
    ok = all(parts.values())
    detail = "; ".join(f"{k} {'ok' if v else 'FAILED'}" for k, v in parts.items())
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'}  criterion 9 CLI contract: {detail} (eval value {value!r})")
    assert ok, check.stdout + check.stderr
