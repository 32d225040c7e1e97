import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from biharmonic import spectrum
from biharmonic.model import ball, dirichlet, navier, punctured, shell
from biharmonic.spectrum import (
    InternalConsistencyError,
    NoSignChangeError,
    branch_sweep,
    crossing_brackets,
    euler_eigenvalues,
    euler_threshold,
    first_eigenvalue,
    form_coefficients,
    fundamental_tone,
    threshold_find,
)

A0 = 0.0013117174


def test_form_coefficient_examples():
    for s in (-0.5, 0.0, 0.7):
        fc = form_coefficients(0, 2, s)
        assert fc.A == 1 - s and fc.B == 0
        fc = form_coefficients(1, 2, s)
        assert fc.A == 2 + (1 - s) and fc.B == -3
        assert form_coefficients(1, 3, s).B == 0
    assert form_coefficients(0, 3).B == 0


@given(st.integers(0, 30))
def test_b_in_the_plane(ell):
    assert form_coefficients(ell, 2).B == ell**2 * (ell**2 - 4)


@pytest.mark.parametrize("N", [2, 3, 4, 5, 8])
def test_a_b_monotone(N):
    A = [form_coefficients(ell, N, 0.3).A for ell in range(12)]
    B = [form_coefficients(ell, N).B for ell in range(12)]
    assert all(x < y for x, y in zip(A, A[1:]))
    start = 0 if N >= 4 else 1
    assert all(x < y for x, y in zip(B[start:], B[start + 1:]))


def test_fundamental_tone_examples():
    ft = fundamental_tone(shell(3, 0.5), dirichlet())
    assert ft.ell_star == frozenset({0}) and ft.multiplicity == 1 and not ft.degenerate
    ft = fundamental_tone(shell(2, 0.0005), dirichlet())
    assert ft.ell_star == frozenset({1}) and ft.multiplicity == 2
    ft = fundamental_tone(shell(2, 0.5), dirichlet())
    assert ft.ell_star == frozenset({0}) and ft.multiplicity == 1
    assert ft.lam == min(ft.branch_values.values())


def test_fundamental_tone_balls():
    # ball and punctured ball in N >= 4 are the same problem
    a = fundamental_tone(ball(4), navier(0.2))
    b = fundamental_tone(punctured(4), navier(0.2))
    assert a.lam == b.lam and a.ell_star == frozenset({0})


def test_fundamental_tone_consistency_guard(monkeypatch):
    fake = {0: 10.0, 1: 9.0, 2: 5.0, 3: 20.0, 4: 30.0}
    monkeypatch.setattr(spectrum, "first_eigenvalue", lambda d, b, ell, tol: fake[ell])
    with pytest.raises(InternalConsistencyError):
        fundamental_tone(shell(2, 0.5), dirichlet())


def test_fundamental_tone_tie_reporting(monkeypatch):
    fake = {0: 10.0, 1: 10.0 * (1 + 1e-10), 2: 50.0, 3: 60.0, 4: 70.0}
    monkeypatch.setattr(spectrum, "first_eigenvalue", lambda d, b, ell, tol: fake[ell])
    ft = fundamental_tone(shell(2, A0), dirichlet())
    assert ft.degenerate and ft.ell_star == frozenset({0, 1}) and ft.multiplicity == 3


def test_branch_sweep_n3_radial_below():
    grid = [0.1, 0.3, 0.5, 0.7, 0.9]
    table = branch_sweep(dirichlet(), 3, [1, 0], grid)
    assert [(r.a, r.ell) for r in table.rows] == [(a, ell) for a in grid for ell in (0, 1)]
    _, l0 = table.branch(0)
    _, l1 = table.branch(1)
    assert np.all(l0 < l1)
    assert table.crossings() == []
    assert all(r.lambda1 > 0 for r in table.rows)


def test_branch_sweep_dirichlet_crossing_near_a0():
    grid = np.linspace(1e-4, 0.012, 25)
    table = branch_sweep(dirichlet(), 2, [0, 1], grid)
    cr = table.crossings()
    assert len(cr) == 1
    lo, hi = cr[0]
    assert lo <= A0 <= hi


def test_branch_sweep_records_failures_and_a0_rows():
    table = branch_sweep(navier(1.0), 2, [0], [0.0, 0.5])
    bad = [r for r in table.rows if r.error]
    assert len(bad) == 1 and bad[0].a == 0.0 and math.isnan(bad[0].lambda1)
    assert "SpecError" in bad[0].error
    assert "note" in table.metadata
    ok = [r for r in table.rows if not r.error]
    assert ok[0].a == 0.5 and ok[0].lambda1 > 0


def test_branch_sweep_a0_uses_punctured():
    table = branch_sweep(dirichlet(), 2, [0], [0.0])
    assert table.rows[0].lambda1 == pytest.approx(first_eigenvalue(punctured(2), dirichlet(), 0), rel=0)


def test_branch_sweep_rejects_bad_radius():
    with pytest.raises(ValueError):
        branch_sweep(dirichlet(), 2, [0], [1.0])


def test_threshold_examples():
    a = threshold_find(dirichlet(), 2, 5e-4, 5e-3)
    assert abs(a - A0) < 5e-5
    b = threshold_find(navier(0.5), 2, 1e-4, 6e-3)
    assert b < 0.006
    with pytest.raises(NoSignChangeError):
        threshold_find(dirichlet(), 2, 0.01, 0.02)


def test_crossing_brackets():
    br = crossing_brackets(dirichlet(), 2, 1e-4, 0.012, 8)
    assert len(br) == 1 and br[0][0] <= A0 <= br[0][1]
    with pytest.raises(ValueError):
        crossing_brackets(dirichlet(), 2, 0.0, 0.1)


def test_euler_closed_forms():
    a1 = euler_threshold()
    assert a1 == pytest.approx(math.exp(-math.pi * math.sqrt(2)), rel=1e-15)
    assert a1 == pytest.approx(0.01176198, abs=5e-9)
    assert euler_eigenvalues(a1, 1)[0] == pytest.approx(1.5, rel=1e-12)
    assert euler_eigenvalues(0.1, 1)[0] == pytest.approx(2.8615, abs=1e-4)
    l1, l2 = euler_eigenvalues(0.2, 2)
    assert l2 - 1 == pytest.approx(4 * (l1 - 1), rel=1e-14)
    assert euler_eigenvalues(0.02, 1)[0] > 1.5
    assert euler_eigenvalues(0.005, 1)[0] < 1.5
    with pytest.raises(ValueError):
        euler_eigenvalues(1.0)


@given(st.floats(1e-6, 0.999))
def test_euler_threshold_iff(a):
    a1 = euler_threshold()
    if abs(a - a1) > 1e-12:
        assert (euler_eigenvalues(a, 1)[0] > 1.5) == (a > a1)


@pytest.mark.parametrize("N", [2, 3])
@pytest.mark.parametrize("ell", [0, 1])
def test_dirichlet_domain_monotone_in_a(N, ell):
    lams = [first_eigenvalue(shell(N, a), dirichlet(), ell) for a in (0.1, 0.3, 0.5, 0.7)]
    assert all(x <= y for x, y in zip(lams, lams[1:]))


@pytest.mark.parametrize("d", [ball(2), ball(3), shell(2, 0.3), shell(3, 0.6), punctured(2), punctured(3)])
@pytest.mark.parametrize("sigma", [-0.2, 0.0, 0.5])
def test_navier_below_dirichlet(d, sigma):
    for ell in (0, 1, 2):
        lam_n = first_eigenvalue(d, navier(sigma), ell)
        lam_d = first_eigenvalue(d, dirichlet(), ell)
        assert lam_n <= lam_d * (1 + 1e-8)
