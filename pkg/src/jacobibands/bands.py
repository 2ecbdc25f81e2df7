"""Band-gap structure as the preimage of [-2, 2] under the discriminant.

Between consecutive critical points the discriminant is strictly monotone
and sweeps across the full strip [-2, 2] exactly once, so every such piece
carries exactly one band. Solving discriminant = +2 and = -2 per piece
yields the 2p edges, including touching bands: when the float value at a
critical point sits within evaluation noise of +/-2, exact rational
arithmetic arbitrates between a genuine touch (both neighboring edges
snap onto the critical point, gap length exactly zero) and a microscopic
open gap (bisected as usual). Edges around narrow open gaps, whose flat
crossings would otherwise scatter by noise over slope, are re-refined
exactly as well.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

from .coefficients import PeriodicCoefficients
from .discriminant import (
    TRUSTED_PERIOD,
    DiscriminantData,
    eval_discriminant_bounded,
    eval_discriminant_stable,
    offdiag_product_exact,
    scaled_trace_exact,
    search_interval,
)
from .errors import EdgeCountMismatch, NonConvergence
from .floquet import band_edges_oracle

_BISECT_BUDGET = 300

DEFAULT_CLOSED_TOL = 1e-9


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class BandStructure:
    """Ordered bands and gaps of one operator.

    edge_labels holds, per band, the discriminant target (+1 for +2,
    -1 for -2) that defined its lower and upper edge. min_gap is the
    smallest open gap, +inf when every gap is closed, and None when p = 1
    and no gap exists at all.
    """

    bands: tuple[Interval, ...]
    gaps: tuple[Interval, ...]
    edge_labels: tuple[tuple[int, int], ...]
    s: float
    total_band_measure: float
    min_gap: float | None
    closed_gap_flags: tuple[bool, ...]
    closed_tol: float

    @property
    def p(self) -> int:
        return len(self.bands)

    @property
    def edges(self) -> tuple[float, ...]:
        """All 2p edges in ascending order, shared touch points repeated."""
        out: list[float] = []
        for band in self.bands:
            out.append(band.lo)
            out.append(band.hi)
        return tuple(out)

    @property
    def total_gap_measure(self) -> float:
        return math.fsum(g.length for g in self.gaps)

    @property
    def max_band(self) -> float:
        return max(b.length for b in self.bands)

    @property
    def min_band(self) -> float:
        return min(b.length for b in self.bands)


def _crossing_beyond_resolution(c, x, target, err_bound):
    """Exact arbitration at a critical point whose float value sits in noise.

    Evaluates the discriminant minus target exactly. A value at the target
    or on the band side means a touching point (the critical point itself
    carries position error ~1e-12, which perturbs its value only at order
    curvature * 1e-24). A value strictly beyond the target means an open
    gap, but bisection can only place its edges to within the evaluation
    noise; gaps whose exact overshoot is inside that noise are reported
    as touching. Returns the corrected sign of value - target for
    bisection, or None to snap.
    """
    ap = offdiag_product_exact(c)
    overshoot = scaled_trace_exact(c, x) - Fraction(target) * ap
    if overshoot == 0 or (overshoot > 0) != (target > 0):
        return None
    if abs(overshoot) <= Fraction(0.5 * err_bound) * ap:
        return None
    return 1.0 if target > 0 else -1.0


def _solve_on_piece(
    c: PeriodicCoefficients,
    xl: float,
    xr: float,
    target: float,
    left_is_critical: bool,
    right_is_critical: bool,
    tol: float,
) -> float:
    """Unique solution of discriminant = target on a monotone piece.

    Endpoints that are critical points get snap treatment: if the exact
    value there does not overshoot the target by more than the float
    evaluation noise, the edge is the critical point itself (touching
    bands) and the adjacent gap has length exactly zero.
    """
    vl, el = eval_discriminant_bounded(c, xl)
    vr, er = eval_discriminant_bounded(c, xr)
    gl = vl - target
    gr = vr - target
    noise_l = 4.0 * el + 1e-14 * (1.0 + abs(target))
    noise_r = 4.0 * er + 1e-14 * (1.0 + abs(target))

    if left_is_critical and abs(gl) <= noise_l:
        corrected = _crossing_beyond_resolution(c, xl, target, el)
        if corrected is None:
            return xl
        gl = corrected * max(abs(gl), 1e-300)
    if right_is_critical and abs(gr) <= noise_r:
        corrected = _crossing_beyond_resolution(c, xr, target, er)
        if corrected is None:
            return xr
        gr = corrected * max(abs(gr), 1e-300)
    if gl == 0.0:
        return xl
    if gr == 0.0:
        return xr
    if (gl > 0.0) == (gr > 0.0):
        # Same sign beyond noise: the crossing exists but sits below float
        # resolution next to a critical endpoint. Snap to the nearer one.
        if left_is_critical and (not right_is_critical or abs(gl) <= abs(gr)):
            return xl
        if right_is_critical:
            return xr
        raise EdgeCountMismatch(
            f"no sign change for target {target} on [{xl}, {xr}]: values ({vl}, {vr})"
        )

    lo, hi = xl, xr
    flo, fhi = gl, gr
    for _ in range(_BISECT_BUDGET):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            break
        fm = eval_discriminant_stable(c, mid) - target
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    else:
        raise NonConvergence(f"edge bisection budget exhausted on [{lo}, {hi}]")
    return _secant_polish(c, target, lo, flo, hi, fhi, xl, xr)


def _secant_polish(c, target, x0, f0, x1, f1, piece_lo, piece_hi):
    """Sharpen a bisected edge to float resolution with secant steps.

    The bisection bracket is tol-wide; on steep edges that leaves the
    evaluated discriminant far from the target even though the position
    is fine. A few secant iterations push the residual down to the
    evaluation noise floor. Steps are confined to the piece.
    """
    best_x, best_f = (x0, f0) if abs(f0) <= abs(f1) else (x1, f1)
    for _ in range(4):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        if not (piece_lo <= x2 <= piece_hi) or x2 == x1:
            break
        f2 = eval_discriminant_stable(c, x2) - target
        if abs(f2) < abs(best_f):
            best_x, best_f = x2, f2
        if f2 == 0.0:
            break
        x0, f0, x1, f1 = x1, f1, x2, f2
    return best_x


# Open gaps narrower than this fraction of the spectrum carry flat
# crossings whose float edges scatter by eval-noise / slope; those edges
# get re-refined with exact arithmetic.
_FLAT_GAP_TRIGGER = 1e-4


def _exact_edge_position(c, x, target, inner, span, outward):
    """Edge position by exact bisection between the band and the gap.

    inner is a point inside the open gap, where the discriminant provably
    overshoots the target; the outer bracket end is stepped into the band
    until the exact signs straddle. Falls back to x if no bracket forms.
    """
    ap = offdiag_product_exact(c)
    tgt = Fraction(target) * ap
    f_inner = scaled_trace_exact(c, Fraction(inner)) - tgt
    if f_inner == 0:
        return inner
    if (f_inner > 0) != (target > 0):
        return x  # inner point is not beyond the target: touching, no bracket
    tol = Fraction(1e-13 * max(1.0, abs(x)))
    step = max(4.0 * span, 1e-12 * max(1.0, abs(x)))
    for _ in range(8):
        outer = x - step if outward < 0 else x + step
        f_outer = scaled_trace_exact(c, Fraction(outer)) - tgt
        if f_outer == 0:
            return outer
        if (f_outer > 0) != (f_inner > 0):
            lo, flo = (Fraction(outer), f_outer) if outer < inner else (Fraction(inner), f_inner)
            hi = Fraction(inner) if outer < inner else Fraction(outer)
            while hi - lo > tol:
                mid = (lo + hi) / 2
                fm = scaled_trace_exact(c, mid) - tgt
                if fm == 0:
                    return float(mid)
                if (fm > 0) == (flo > 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            return float((lo + hi) / 2)
        step *= 4.0
    return x


def _sharpen_flat_gap_edges(c, bands, labels):
    """Re-refine the two edges around every narrow open gap."""
    p = len(bands)
    if p < 2:
        return bands
    cut = _FLAT_GAP_TRIGGER * max(1.0, bands[-1].hi - bands[0].lo)
    out = list(bands)
    for n in range(p - 1):
        gap = out[n + 1].lo - out[n].hi
        if not 0.0 < gap < cut:
            continue
        inner = 0.5 * (out[n].hi + out[n + 1].lo)
        hi_edge = _exact_edge_position(c, out[n].hi, 2.0 * labels[n][1], inner, gap, -1)
        lo_edge = _exact_edge_position(c, out[n + 1].lo, 2.0 * labels[n + 1][0], inner, gap, +1)
        out[n] = Interval(out[n].lo, hi_edge)
        out[n + 1] = Interval(lo_edge, out[n + 1].hi)
    return out


def _assemble(
    c: PeriodicCoefficients,
    bands: list[Interval],
    labels: list[tuple[int, int]],
    closed_tol: float,
) -> BandStructure:
    bands = _sharpen_flat_gap_edges(c, bands, labels)
    p = len(bands)
    gaps = tuple(Interval(bands[n - 1].hi, bands[n].lo) for n in range(1, p))
    s = bands[-1].hi - bands[0].lo
    total = math.fsum(b.length for b in bands)
    min_gap, flags = _gap_stats(gaps, s, closed_tol, p)
    return BandStructure(
        bands=tuple(bands),
        gaps=gaps,
        edge_labels=tuple(labels),
        s=s,
        total_band_measure=total,
        min_gap=min_gap,
        closed_gap_flags=flags,
        closed_tol=closed_tol,
    )


def _gap_stats(gaps, s, closed_tol, p):
    if p == 1:
        return None, ()
    scale = closed_tol * max(1.0, s)
    flags = tuple(g.length <= scale for g in gaps)
    open_lengths = [g.length for g, closed in zip(gaps, flags) if not closed]
    min_gap = min(open_lengths) if open_lengths else math.inf
    return min_gap, flags


def band_structure(
    d: DiscriminantData,
    tol: float | None = None,
    closed_tol: float = DEFAULT_CLOSED_TOL,
    use_oracle: bool | None = None,
) -> BandStructure:
    """Extract the p bands and p-1 gaps from a discriminant.

    Edges are refined to absolute accuracy tol (default 1e-12 times the
    Gershgorin width). Exactly p bands are always returned; closed gaps
    appear as zero-length gaps between them, never as merged bands.

    use_oracle=None lets the data decide: the piecewise-monotone solver
    needs trusted critical points, otherwise Floquet eigenvalues supply
    the edge brackets.
    """
    c = d.coeffs
    if use_oracle is None:
        use_oracle = not d.expanded_ok or c.p > TRUSTED_PERIOD
    lo_bound, hi_bound = search_interval(c)
    if tol is None:
        tol = 1e-12 * max(1.0, hi_bound - lo_bound)
    if not (tol > 0.0 and closed_tol > 0.0):
        raise ValueError("tolerances must be positive")

    if use_oracle:
        return _band_structure_from_oracle(c, tol, closed_tol)

    p = c.p
    criticals = d.critical_points
    if len(criticals) != p - 1:
        raise EdgeCountMismatch(
            f"{len(criticals)} critical points for period {p}; expected {p - 1}"
        )
    knots = [lo_bound, *criticals, hi_bound]
    bands: list[Interval] = []
    labels: list[tuple[int, int]] = []
    for n in range(p):
        xl, xr = knots[n], knots[n + 1]
        left_crit = n > 0
        right_crit = n < p - 1
        e_plus = _solve_on_piece(c, xl, xr, 2.0, left_crit, right_crit, tol)
        e_minus = _solve_on_piece(c, xl, xr, -2.0, left_crit, right_crit, tol)
        if e_plus <= e_minus:
            bands.append(Interval(e_plus, e_minus))
            labels.append((1, -1))
        else:
            bands.append(Interval(e_minus, e_plus))
            labels.append((-1, 1))
    for n in range(p - 1):
        if bands[n].hi > bands[n + 1].lo:
            raise EdgeCountMismatch(
                f"band {n} upper edge {bands[n].hi} exceeds band {n + 1} lower edge {bands[n + 1].lo}"
            )
    return _assemble(c, bands, labels, closed_tol)


def _refine_near_oracle(c, x, target, tol, scale):
    """Sign-change bisection around an oracle eigenvalue; keeps x on failure."""
    h = max(1e-12 * scale, 1e-15 * max(1.0, abs(x)))
    for _ in range(40):
        lo, hi = x - h, x + h
        fl = eval_discriminant_stable(c, lo) - target
        fh = eval_discriminant_stable(c, hi) - target
        if fl == 0.0:
            return lo
        if fh == 0.0:
            return hi
        if (fl > 0.0) != (fh > 0.0):
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                if not (lo < mid < hi):
                    break
                fm = eval_discriminant_stable(c, mid) - target
                if fm == 0.0:
                    return mid
                if (fm > 0.0) == (fl > 0.0):
                    lo, fl = mid, fm
                else:
                    hi, fh = mid, fm
            return _secant_polish(c, target, lo, fl, hi, fh, lo, hi)
        h *= 8.0
    return x  # touching edge: no sign change exists


def _band_structure_from_oracle(c, tol, closed_tol) -> BandStructure:
    """Bands from Floquet eigenvalues refined by stable-evaluation bisection."""
    plus, minus = band_edges_oracle(c)
    lo_bound, hi_bound = search_interval(c)
    scale = hi_bound - lo_bound
    tagged = sorted([(x, 1) for x in plus] + [(x, -1) for x in minus])
    if len(tagged) != 2 * c.p:
        raise EdgeCountMismatch(f"oracle produced {len(tagged)} edges, expected {2 * c.p}")
    refined = [(_refine_near_oracle(c, x, 2.0 * lab, tol, scale), lab) for x, lab in tagged]
    refined.sort()
    bands: list[Interval] = []
    labels: list[tuple[int, int]] = []
    for n in range(c.p):
        (e_lo, lab_lo), (e_hi, lab_hi) = refined[2 * n], refined[2 * n + 1]
        if lab_lo == lab_hi:
            raise EdgeCountMismatch(
                f"band {n} edges carry the same discriminant sign {lab_lo}"
            )
        bands.append(Interval(e_lo, e_hi))
        labels.append((lab_lo, lab_hi))
    return _assemble(c, bands, labels, closed_tol)


def gap_report(bs: BandStructure, closed_tol: float = DEFAULT_CLOSED_TOL):
    """Recompute (min open gap, closed flags) under a different closed_tol."""
    return _gap_stats(bs.gaps, bs.s, closed_tol, bs.p)


def bands_to_csv(bs: BandStructure, target) -> None:
    """Write bands then gaps as CSV rows to a path or text file object."""
    own = isinstance(target, (str, bytes)) or hasattr(target, "__fspath__")
    fh = open(target, "w", newline="", encoding="utf-8") if own else target
    try:
        writer = csv.writer(fh)
        writer.writerow(["band_index", "lo", "hi", "length"])
        for n, band in enumerate(bs.bands, start=1):
            writer.writerow([n, repr(band.lo), repr(band.hi), repr(band.length)])
        writer.writerow(["gap_index", "lo", "hi", "length"])
        for n, gap in enumerate(bs.gaps, start=1):
            writer.writerow([n, repr(gap.lo), repr(gap.hi), repr(gap.length)])
    finally:
        if own:
            fh.close()


def bands_csv_text(bs: BandStructure) -> str:
    buf = io.StringIO()
    bands_to_csv(bs, buf)
    return buf.getvalue()
