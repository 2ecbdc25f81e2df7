"""Discriminant of a periodic Jacobi operator.

The discriminant is the trace of the one-period transfer-matrix product,
a degree-p polynomial in the spectral parameter. It is built here in two
redundant forms: expanded monomial coefficients (needed for Sturm-based
root isolation) and a numerically stable point evaluation through the
2x2 matrix product. An exact rational evaluator backs up the float path
where cancellation would otherwise dominate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .coefficients import PeriodicCoefficients, offdiag_product, scalar_summary
from .errors import IndexOutOfRange, JacobiBandsError, PropertyViolation
from .polynomial import Poly, real_roots_in

# unit roundoff with headroom; used by the running error bound
_U = 2.3e-16

# Beyond this period the expanded coefficients are not trusted for root
# isolation and band extraction falls back to stable evaluation with
# Floquet brackets.
TRUSTED_PERIOD = 30


@dataclass(frozen=True)
class TransferMatrix:
    """One-site transfer step [[(x - b_n)/a_n, -a_{n-1}/a_n], [1, 0]]."""

    entries: tuple[tuple[Poly, Poly], tuple[Poly, Poly]]


def transfer_matrix(c: PeriodicCoefficients, n: int) -> TransferMatrix:
    """Transfer step for 1-based site index n; a_0 wraps to a_p."""
    if not 1 <= n <= c.p:
        raise IndexOutOfRange(f"site index {n} outside 1..{c.p}")
    an = c.a[n - 1]
    a_prev = c.a[n - 2]  # n=1 wraps to a[p-1]
    bn = c.b[n - 1]
    return TransferMatrix(
        (
            (Poly([-bn / an, 1.0 / an]), Poly([-a_prev / an])),
            (Poly([1.0]), Poly([0.0])),
        )
    )


def _matmul(x, y):
    (x00, x01), (x10, x11) = x
    (y00, y01), (y10, y11) = y
    return (
        (x00 * y00 + x01 * y10, x00 * y01 + x01 * y11),
        (x10 * y00 + x11 * y10, x10 * y01 + x11 * y11),
    )


@dataclass(frozen=True)
class DiscriminantData:
    """Expanded discriminant plus everything needed for stable re-evaluation.

    critical_points are the roots of the derivative inside the padded
    Gershgorin interval, sorted. expanded_ok records whether the monomial
    coefficients passed all structural checks; when False the band solver
    must not trust them.
    """

    delta: Poly
    leading: float
    coeffs: PeriodicCoefficients
    critical_points: tuple[float, ...]
    expanded_ok: bool

    @property
    def p(self) -> int:
        return self.coeffs.p


def search_interval(c: PeriodicCoefficients, pad_fraction: float = 0.01) -> tuple[float, float]:
    """Gershgorin interval padded by a fraction of its width.

    Every root of the discriminant and of discriminant +/- 2 lies strictly
    inside; the padding guarantees |trace| > 2 at both endpoints.
    """
    s = scalar_summary(c)
    pad = pad_fraction * (s.gershgorin_hi - s.gershgorin_lo)
    return s.gershgorin_lo - pad, s.gershgorin_hi + pad


def eval_discriminant_stable(c: PeriodicCoefficients, t: float) -> float:
    """Trace of the numeric transfer product at t, taken site p down to 1."""
    a, b = c.a, c.b
    m00, m01, m10, m11 = 1.0, 0.0, 0.0, 1.0
    for n in range(c.p):
        t00 = (t - b[n]) / a[n]
        t01 = -a[n - 1] / a[n]
        m00, m01, m10, m11 = (
            t00 * m00 + t01 * m10,
            t00 * m01 + t01 * m11,
            m00,
            m01,
        )
    return m00 + m11


def eval_discriminant_bounded(c: PeriodicCoefficients, t: float) -> tuple[float, float]:
    """Stable evaluation plus a running forward-error bound.

    The bound tracks |T|*E + u*|T|*|M| through the product and is used to
    decide when a critical value is indistinguishable from +/-2.
    """
    a, b = c.a, c.b
    m00, m01, m10, m11 = 1.0, 0.0, 0.0, 1.0
    e00 = e01 = e10 = e11 = 0.0
    for n in range(c.p):
        t00 = (t - b[n]) / a[n]
        t01 = -a[n - 1] / a[n]
        at0, at1 = abs(t00), abs(t01)
        n00 = t00 * m00 + t01 * m10
        n01 = t00 * m01 + t01 * m11
        f00 = at0 * e00 + at1 * e10 + 4.0 * _U * (at0 * abs(m00) + at1 * abs(m10))
        f01 = at0 * e01 + at1 * e11 + 4.0 * _U * (at0 * abs(m01) + at1 * abs(m11))
        m00, m01, m10, m11 = n00, n01, m00, m01
        e00, e01, e10, e11 = f00, f01, e00, e01
    value = m00 + m11
    return value, e00 + e11 + _U * abs(value)


def offdiag_product_exact(c: PeriodicCoefficients) -> Fraction:
    """Exact product of the off-diagonal floats as a rational."""
    out = Fraction(1)
    for x in c.a:
        out *= Fraction(x)
    return out


def scaled_trace_exact(c: PeriodicCoefficients, t) -> Fraction:
    """Exact trace of the product of the cleared-denominator transfer steps.

    Each step (1/a_n) * [[t - b_n, -a_{n-1}], [a_n, 0]] contributes its
    1/a_n to a common prefactor, so this trace equals the discriminant
    times prod(a); all intermediates are dyadic rationals and stay cheap.
    """
    t = Fraction(t)
    a = [Fraction(x) for x in c.a]
    b = [Fraction(x) for x in c.b]
    m00, m01, m10, m11 = Fraction(1), Fraction(0), Fraction(0), Fraction(1)
    for n in range(c.p):
        s00 = t - b[n]
        s01 = -a[n - 1]
        an = a[n]
        m00, m01, m10, m11 = (
            s00 * m00 + s01 * m10,
            s00 * m01 + s01 * m11,
            an * m00,
            an * m01,
        )
    return m00 + m11


def eval_discriminant_exact(c: PeriodicCoefficients, t) -> Fraction:
    """Exact rational discriminant value at a rational point t.

    Floats convert to exact dyadic rationals, so this is an arbitrary-
    precision oracle for the float paths. Cost grows mildly with p.
    """
    return scaled_trace_exact(c, t) / offdiag_product_exact(c)


def build_discriminant(c: PeriodicCoefficients, root_tol: float | None = None) -> DiscriminantData:
    """Expand the discriminant and verify its structural properties.

    Checks, each within float tolerance:
      degree equals p; leading coefficient equals 1/(a_1...a_p);
      p distinct real roots; |value| >= 2 at every critical point.

    Raises PropertyViolation when a check fails for p <= TRUSTED_PERIOD;
    for longer periods failures downgrade to a warning and the data is
    marked expanded_ok=False.
    """
    p = c.p
    prod = transfer_matrix(c, p).entries
    for n in range(p - 1, 0, -1):
        prod = _matmul(prod, transfer_matrix(c, n).entries)
    delta = prod[0][0] + prod[1][1]

    lo, hi = search_interval(c)
    if root_tol is None:
        root_tol = 1e-12 * max(1.0, hi - lo)

    problems: list[str] = []
    if delta.degree != p:
        problems.append(f"degree {delta.degree} != p = {p}")
    leading = delta.coeffs[-1]
    if leading <= 0.0:
        problems.append(f"leading coefficient {leading} not positive")
    else:
        # leading * prod(a) == 1, tested in log space to dodge overflow
        drift = math.expm1(math.log(leading) + math.fsum(math.log(x) for x in c.a))
        if abs(drift) > 1e-9:
            problems.append(f"leading coefficient drift {drift:.3e}")

    criticals: tuple[float, ...] = ()
    if not problems:
        try:
            roots = real_roots_in(delta, lo, hi, root_tol)
            if sum(r.multiplicity for r in roots) != p:
                problems.append(
                    f"found {sum(r.multiplicity for r in roots)} roots (with multiplicity), expected {p}"
                )
            elif len(roots) != p:
                # Root separation below float resolution; positions are still
                # good, so downstream checks (Floquet agreement) take over.
                warnings.warn(
                    f"{p - len(roots)} near-coincident discriminant roots merged at float resolution",
                    RuntimeWarning,
                    stacklevel=2,
                )
            if p >= 2:
                crit_roots = real_roots_in(delta.derivative(), lo, hi, root_tol)
                criticals = tuple(r.value for r in crit_roots)
                if len(criticals) != p - 1:
                    problems.append(f"{len(criticals)} critical points, expected {p - 1}")
                else:
                    for x in criticals:
                        value, err = eval_discriminant_bounded(c, x)
                        if abs(value) < 2.0 - (1e-9 + 4.0 * err):
                            problems.append(f"|D({x})| = {abs(value)} < 2 beyond tolerance")
                            break
        except JacobiBandsError as exc:
            problems.append(f"root isolation failed: {exc}")

    ok = not problems
    if problems:
        message = "; ".join(problems)
        if p <= TRUSTED_PERIOD:
            raise PropertyViolation(message)
        warnings.warn(f"expanded discriminant not trusted for p={p}: {message}", RuntimeWarning, stacklevel=2)

    return DiscriminantData(
        delta=delta,
        leading=leading,
        coeffs=c,
        critical_points=criticals,
        expanded_ok=ok,
    )


def chebyshev_scale(c: PeriodicCoefficients) -> float:
    """Product a_1...a_p; multiplying the discriminant by this makes it monic."""
    return offdiag_product(c)
