"""End-to-end acceptance checks; the terminal summary prints one line per criterion."""

from __future__ import annotations

import time

import numpy as np
import pytest

from drsp_orth.canonical import _solve_ordered, column_operators, feasibility, generate_ordered_type, simplify_to_ordered
from drsp_orth.core_types import (
    ParameterVector,
    instantiate_numeric,
    orthogonality_residual,
    validate_special_orthogonal,
)
from drsp_orth.drsp import phase_residuals, simulate_drsp
from drsp_orth.gf2 import Gf2System, eliminate_and_solve
from drsp_orth.operators import SignedPermutation, compose, random_matching_operator
from drsp_orth.oracle import SignAssignment, brute_force_gf2, brute_force_signs
from drsp_orth.sign_solver import build_equations, compute_divisions, find_solution

TOL = 1e-12

ORDERED_4 = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
ORDERED_8 = [
    [0, 1, 2, 3, 4, 5, 6, 7],
    [1, 0, 3, 2, 5, 4, 7, 6],
    [2, 3, 0, 1, 6, 7, 4, 5],
    [3, 2, 1, 0, 7, 6, 5, 4],
    [4, 5, 6, 7, 0, 1, 2, 3],
    [5, 4, 7, 6, 1, 0, 3, 2],
    [6, 7, 4, 5, 2, 3, 0, 1],
    [7, 6, 5, 4, 3, 2, 1, 0],
]


def test_criterion_1_existence_by_order():
    _solve_ordered.cache_clear()
    start = time.perf_counter()
    verdicts = {n: feasibility(n) for n in (1, 2, 3, 4)}
    elapsed = time.perf_counter() - start
    for n in (1, 2, 3):
        assert verdicts[n].feasible
        assert validate_special_orthogonal(verdicts[n].witness)
        assert verdicts[n].witness.order == 2 ** n
    assert not verdicts[4].feasible
    assert verdicts[4].rank_full > verdicts[4].rank_coeff
    assert elapsed < 1.0


@pytest.mark.parametrize("n,shape", [(2, (3, 7)), (3, (42, 29)), (4, (420, 121))])
def test_criterion_2_system_shape(n, shape):
    N = 2 ** n
    sys_ = build_equations(compute_divisions(generate_ordered_type(n)))
    assert sys_.shape == shape
    assert sys_.n_rows == N * (N - 1) * (N - 2) // 8
    assert sys_.n_vars == N * (N - 1) // 2
    assert all(len(sys_.row_vars(r)) == 4 for r in range(sys_.n_rows))


def _oracle_agreement(n):
    m = generate_ordered_type(n)
    search = brute_force_signs(m)
    res = find_solution(m)
    assert (search.count > 0) == res.found
    assert SignAssignment(tuple(res.solution)) in search.witnesses
    for w in search.witnesses:
        assert validate_special_orthogonal(search.materialize(m, w))
    return search


def test_criterion_3_sign_oracle_n4():
    search = _oracle_agreement(2)
    assert search.n_vars == 6


@pytest.mark.long
def test_criterion_3_sign_oracle_n8():
    search = _oracle_agreement(3)
    assert search.n_vars == 28


def test_criterion_4_gf2_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        V = int(rng.integers(1, 13))
        R = int(rng.integers(0, 2 * V + 2))
        sys_ = Gf2System.from_dense(rng.integers(0, 2, size=(R, V + 1))) if R else Gf2System(0, V + 1)
        res = eliminate_and_solve(sys_)
        truth = brute_force_gf2(sys_)
        assert res.consistent == truth.consistent
        if res.consistent:
            assert res.solution in truth.all_solutions
        else:
            assert res.solution is None


def test_criterion_5_canonical_form():
    assert generate_ordered_type(2).indices.tolist() == ORDERED_4
    assert generate_ordered_type(3).indices.tolist() == ORDERED_8
    rng = np.random.default_rng(5)
    for trial in range(100):
        n = 1 + trial % 4
        N = 2 ** n
        base = generate_ordered_type(n)
        m = base.permuted(rng.permutation(N), rng.permutation(N))
        s = simplify_to_ordered(m)
        out = s.apply(m)
        r = np.arange(N)
        assert np.array_equal(out.indices, r[:, None] ^ r[None, :])


def test_criterion_6_operator_algebra():
    rng = np.random.default_rng(6)
    for N in (4, 8, 16):
        eye = np.eye(N, dtype=np.int64)
        for _ in range(1000):
            m = random_matching_operator(N, rng)
            d = m.dense()
            assert np.array_equal(d @ d, -eye)
            assert np.array_equal(d.T, -d)
            assert not np.any(np.diag(d))
    for n in (1, 2, 3, 4):
        ops = column_operators(generate_ordered_type(n))
        N = 2 ** n
        ident = SignedPermutation.identity(N, signed=False)
        index = {op: c for c, op in enumerate(ops)}
        assert len(index) == N and ops[0] == ident
        table = np.empty((N, N), dtype=np.int64)
        for a in range(N):
            for b in range(N):
                ab = compose(ops[a], ops[b])
                assert ab in index
                table[a, b] = index[ab]
        assert np.array_equal(table, table.T)
        assert np.all(np.diag(table) == 0)
        r = np.arange(N)
        assert np.array_equal(table, r[:, None] ^ r[None, :])


def test_criterion_7_numeric_orthogonality():
    rng = np.random.default_rng(7)
    for n in (1, 2, 3):
        w = feasibility(n).witness
        worst = max(
            orthogonality_residual(instantiate_numeric(w, ParameterVector.random(w.order, rng)))
            for _ in range(100)
        )
        assert worst <= TOL


def test_criterion_8_determinism():
    rng = np.random.default_rng(8)
    for n in (1, 2, 3):
        N = 2 ** n
        w = feasibility(n).witness
        for _ in range(100):
            psi = ParameterVector.random(N, rng).values
            reports = simulate_drsp(n, psi, w)
            assert len(reports) == N
            for r in reports:
                assert abs(r.probability - 1 / N) <= TOL
                assert r.fidelity >= 1 - TOL


def test_criterion_9_phase_extension():
    rng = np.random.default_rng(9)
    for n in (2, 3):
        w = feasibility(n).witness
        for _ in range(100):
            phases = rng.uniform(0, 2 * np.pi, w.order)
            params = ParameterVector.random(w.order, rng)
            res = phase_residuals(w, phases, params)
            assert res.unitarity_residual <= TOL
            assert res.factorization_residual <= TOL
