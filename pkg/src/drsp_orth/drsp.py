"""State-vector check of deterministic remote state preparation.

Alice and Bob share ``n`` Bell pairs ``(|00> + |11>)/sqrt(2)``.  Particles
are labelled ``1, 2, ..., 2n`` with odd labels Alice's and even labels
Bob's; after building the product state in that order the qubits are
reordered so Alice's ``n`` qubits are the high-order tensor factors and
Bob's the low-order ones.  Alice measures in the basis whose ``i``-th
vector is column ``i`` of the numeric special matrix built from the target
amplitudes; Bob undoes outcome ``i`` with a fixed signed permutation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core_types import TOL, ParameterVector, SymbolicMatrix, as_symbolic, instantiate_numeric, validate_special_orthogonal
from .errors import DimensionMismatch, InvalidMatrix, MalformedMatrix
from .operators import SignedPermutation

MAX_QUBITS = 3

_BELL = np.array([1.0, 0.0, 0.0, 1.0], dtype=np.complex128) / np.sqrt(2.0)


@dataclass(frozen=True)
class OutcomeReport:
    outcome: int
    probability: float
    fidelity: float


def shared_state(n: int) -> np.ndarray:
    """Product of ``n`` Bell pairs, Alice's qubits high-order, as a length ``4**n`` vector."""
    psi = np.ones(1, dtype=np.complex128)
    for _ in range(n):
        psi = np.kron(psi, _BELL)
    # particle order 1,2,...,2n -> Alice (odd) first, then Bob (even)
    t = psi.reshape((2,) * (2 * n))
    t = t.transpose(list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2)))
    return t.reshape(-1)


def measurement_basis(s: SymbolicMatrix, psi) -> np.ndarray:
    """Columns are Alice's basis vectors ``tau_i``."""
    basis = instantiate_numeric(s, ParameterVector(psi)).astype(np.complex128)
    if np.max(np.abs(basis.conj().T @ basis - np.eye(basis.shape[0]))) > TOL:
        raise InvalidMatrix("measurement basis is not orthonormal")
    return basis


def recovery_operator(s: SymbolicMatrix, i: int) -> SignedPermutation:
    """Signed permutation taking column ``i`` back to ``(a_0, ..., a_{N-1})``.

    Read off the symbolic column alone, so it does not depend on the
    parameter values.
    """
    N = s.order
    perm = [0] * N
    signs = [1] * N
    for r in range(N):
        k = int(s.indices[r, i])
        perm[k] = r
        signs[k] = int(s.signs[r, i])
    return SignedPermutation(perm, signs, True)


def simulate_drsp(n: int, psi, s) -> list[OutcomeReport]:
    """Evaluate every measurement branch exactly; no sampling."""
    if not 1 <= n <= MAX_QUBITS:
        raise DimensionMismatch(f"simulation supports 1..{MAX_QUBITS} qubits, got {n}")
    try:
        s = as_symbolic(s)
    except MalformedMatrix as exc:
        raise InvalidMatrix(str(exc)) from None
    N = 2 ** n
    psi = np.asarray(psi, dtype=np.float64)
    if psi.shape != (N,) or s.order != N:
        raise DimensionMismatch(f"need a length-{N} state and an order-{N} matrix")
    if not s.is_special or not validate_special_orthogonal(s):
        raise InvalidMatrix("matrix is not special orthogonal")
    basis = measurement_basis(s, psi)
    total = shared_state(n).reshape(N, N)  # [alice, bob]
    reports = []
    for i in range(N):
        bob = basis[:, i].conj() @ total
        prob = float(np.real(bob.conj() @ bob))
        bob = bob / np.sqrt(prob)
        restored = recovery_operator(s, i)(bob)
        fid = float(abs(np.vdot(psi, restored)) ** 2)
        reports.append(OutcomeReport(i, prob, fid))
    return reports


# ---------------------------------------------------------------------------
# column phases
# ---------------------------------------------------------------------------

def phased_matrix(s: SymbolicMatrix, params, phases) -> np.ndarray:
    """Numeric matrix with column ``i`` multiplied by ``exp(1j * phases[i])``."""
    g = instantiate_numeric(s, params)
    ph = np.asarray(phases, dtype=np.float64)
    if ph.shape != (g.shape[1],):
        raise DimensionMismatch(f"need {g.shape[1]} phases")
    return g * np.exp(1j * ph)[None, :]


@dataclass(frozen=True)
class PhaseCheck:
    unitarity_residual: float
    factorization_residual: float

    @property
    def ok(self) -> bool:
        return self.unitarity_residual <= TOL and self.factorization_residual <= TOL


def phase_residuals(s, phases, params=None) -> PhaseCheck:
    """Unitarity residual of the phased matrix and the worst pairwise deviation of
    ``s_i^H s_j`` from ``exp(1j (phi_j - phi_i)) * (plain s_i . plain s_j)``."""
    try:
        s = as_symbolic(s)
    except MalformedMatrix as exc:
        raise InvalidMatrix(str(exc)) from None
    if not s.is_special:
        raise InvalidMatrix("phase check needs a special-mode matrix")
    if params is None:
        params = ParameterVector.random(s.order, np.random.default_rng(0))
    base = instantiate_numeric(s, params)
    ph = np.asarray(phases, dtype=np.float64)
    p = phased_matrix(s, params, ph)
    gram = p.conj().T @ p
    unit = float(np.max(np.abs(gram - np.eye(s.order))))
    predicted = np.exp(1j * (ph[None, :] - ph[:, None])) * (base.T @ base)
    fact = float(np.max(np.abs(gram - predicted)))
    return PhaseCheck(unit, fact)


def phase_equivalence_check(s, phases, params=None) -> bool:
    """True iff the column-phased matrix is unitary and the phase factorization holds."""
    return phase_residuals(s, phases, params).ok


def phased_solvable(m, phases: Optional[Sequence[float]] = None) -> bool:
    """Whether the skeleton admits a column-phased unitary matrix.

    A phased matrix is unitary exactly when its phase-free version is
    orthogonal, so this solves the skeleton and confirms the phased witness.
    """
    from .sign_solver import find_solution

    res = find_solution(m)
    if not res.found:
        return False
    N = res.matrix.order
    ph = np.zeros(N) if phases is None else phases
    return phase_equivalence_check(res.matrix, ph)
