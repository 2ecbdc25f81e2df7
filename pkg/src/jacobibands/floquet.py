"""Independent band-edge oracle via Floquet boundary conditions.

Imposing periodic (phase 0) or antiperiodic (phase pi) boundary conditions
over one period reduces the operator to a real symmetric p x p matrix whose
eigenvalues are exactly the solutions of discriminant = +2 and -2. This
module diagonalizes those matrices with a self-contained cyclic Jacobi
rotation sweep so the oracle shares no code with the polynomial path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .coefficients import PeriodicCoefficients
from .errors import NonConvergence

PHASE_PERIODIC = 0.0
PHASE_ANTIPERIODIC = math.pi


@dataclass(frozen=True)
class SymMatrix:
    """Real symmetric matrix stored as a full tuple-of-tuples."""

    entries: tuple[tuple[float, ...], ...]

    @property
    def order(self) -> int:
        return len(self.entries)


def floquet_matrix(c: PeriodicCoefficients, phase: float) -> SymMatrix:
    """Symmetric p x p reduction of the operator at quasimomentum phase 0 or pi.

    Diagonal is b, the first off-diagonal is a_1..a_{p-1}, and the wrap
    entry +/-a_p sits in the corners. For p = 2 the wrap lands on the
    off-diagonal (a_1 +/- a_2); for p = 1 it lands on the diagonal twice.
    """
    if phase == PHASE_PERIODIC:
        sign = 1.0
    elif phase == PHASE_ANTIPERIODIC:
        sign = -1.0
    else:
        raise ValueError(f"phase must be 0 or pi, got {phase!r}")
    p = c.p
    m = [[0.0] * p for _ in range(p)]
    for i in range(p):
        m[i][i] = c.b[i]
    for i in range(p - 1):
        m[i][i + 1] += c.a[i]
        m[i + 1][i] += c.a[i]
    if p == 1:
        m[0][0] += sign * 2.0 * c.a[0]
    else:
        m[0][p - 1] += sign * c.a[p - 1]
        m[p - 1][0] += sign * c.a[p - 1]
    return SymMatrix(tuple(tuple(row) for row in m))


def symmetric_eigenvalues(
    mat: SymMatrix, tol: float = 1e-13, max_sweeps: int = 100
) -> tuple[float, ...]:
    """All eigenvalues by cyclic Jacobi rotations, sorted ascending.

    Sweeps run until the off-diagonal Frobenius mass drops below
    tol * (diagonal mass + 1). Raises NonConvergence if the sweep budget
    runs out, which does not happen for symmetric input.
    """
    if not (tol > 0.0):
        raise ValueError(f"tol must be positive, got {tol}")
    n = mat.order
    if n == 1:
        return (mat.entries[0][0],)
    a = [list(row) for row in mat.entries]

    def off_mass() -> float:
        acc = 0.0
        for i in range(n):
            row = a[i]
            for j in range(i + 1, n):
                acc += row[j] * row[j]
        return math.sqrt(2.0 * acc)

    def diag_mass() -> float:
        return math.sqrt(sum(a[i][i] * a[i][i] for i in range(n)))

    for _ in range(max_sweeps):
        if off_mass() <= tol * (diag_mass() + 1.0):
            break
        for p_idx in range(n - 1):
            for q_idx in range(p_idx + 1, n):
                apq = a[p_idx][q_idx]
                if apq == 0.0:
                    continue
                theta = 0.5 * (a[q_idx][q_idx] - a[p_idx][p_idx]) / apq
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                cs = 1.0 / math.sqrt(t * t + 1.0)
                sn = t * cs
                tau = sn / (1.0 + cs)
                a[p_idx][p_idx] -= t * apq
                a[q_idx][q_idx] += t * apq
                a[p_idx][q_idx] = 0.0
                a[q_idx][p_idx] = 0.0
                for i in range(n):
                    if i == p_idx or i == q_idx:
                        continue
                    aip = a[i][p_idx]
                    aiq = a[i][q_idx]
                    a[i][p_idx] = aip - sn * (aiq + tau * aip)
                    a[p_idx][i] = a[i][p_idx]
                    a[i][q_idx] = aiq + sn * (aip - tau * aiq)
                    a[q_idx][i] = a[i][q_idx]
    else:
        raise NonConvergence(f"Jacobi sweeps did not converge in {max_sweeps} sweeps")

    return tuple(sorted(a[i][i] for i in range(n)))


def band_edges_oracle(
    c: PeriodicCoefficients, tol: float = 1e-13
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Band edges as Floquet eigenvalues.

    Returns (edges at phase 0, edges at phase pi): the multisets of
    solutions of discriminant = +2 and = -2, each of size p, sorted.
    """
    plus = symmetric_eigenvalues(floquet_matrix(c, PHASE_PERIODIC), tol)
    minus = symmetric_eigenvalues(floquet_matrix(c, PHASE_ANTIPERIODIC), tol)
    return plus, minus
