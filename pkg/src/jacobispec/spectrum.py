"""Determinant zeros in the disk, the discrete spectrum and spectral functionals.

The zero search walks an adaptive quadtree over a square covering the search
disk.  Winding numbers of the determinant along cell boundaries (continuous
argument accumulation with adaptive step halving) decide which cells hold
zeros; positive cells are subdivided until small, then polished by a damped
Newton iteration whose derivative comes from differentiating the backward
recursion.  Multiplicities are confirmed by the winding of a tight circle
around each refined zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .jost import jost_function_and_derivative, jost_function_grid
from .operator import JacobiCoefficients, summarize
from .zhukovsky import cassini_radius, dist_to_band, lambda_of_z

LOG2 = math.log(2.0)

_NEAR_ZERO_TOL = 1e-9
_CELL_REFINE_DIAM = 1e-3
_CELL_SPLIT_FLOOR = 1e-6
_SNAP_TOL = 0.25
_MAX_BOUNDARY_POINTS = 262144


class _NearZeroOnContour(Exception):
    """A boundary sample came indistinguishably close to a zero."""


@dataclass(frozen=True)
class DiscreteEigenvalue:
    """One eigenvalue with its disk preimage and geometric functionals."""

    lam: complex
    z: complex
    multiplicity: int
    dist_band: float
    cassini: float
    residual: float

    def sort_key(self):
        return (self.lam.real, self.lam.imag)


@dataclass
class ZeroSearchReport:
    cells_examined: int
    total_winding: int
    zeros: list[DiscreteEigenvalue]
    search_radius: float
    warnings: list[str] = field(default_factory=list)


# --- adaptive winding ------------------------------------------------------

def _wrap_phase(d: np.ndarray) -> np.ndarray:
    return (d + math.pi) % (2.0 * math.pi) - math.pi


def _adaptive_winding(eval_points, point_of_s, s_init: np.ndarray, period: float,
                      near_tol: float) -> int | None:
    """Winding number along a closed parametric contour.

    ``point_of_s`` maps parameters (mod ``period``) to contour points;
    segments whose phase increment is not safely below pi/2 are bisected in
    parameter space until every increment is resolved.  Returns ``None`` when
    the total refuses to snap to an integer within 0.25 or the point budget
    runs out.  Raises ``_NearZeroOnContour`` when ``|f|`` drops below
    ``near_tol`` at a sample.
    """
    s = np.sort(np.asarray(s_init, dtype=float))
    vals = eval_points(point_of_s(s))
    while True:
        if near_tol > 0.0:
            mags = np.abs(vals)
            lo = float(np.min(mags))
            # relative guard: small |f| alone is fine when the whole contour
            # is small; a genuine on-contour zero dips far below the median
            if lo < near_tol and lo < 1e-6 * float(np.median(mags)):
                raise _NearZeroOnContour
        if not np.all(np.isfinite(vals)):
            return None
        phases = np.angle(vals)
        d = _wrap_phase(np.diff(phases, append=phases[:1]))
        bad = np.abs(d) >= math.pi / 2.0
        if not bad.any():
            total = float(d.sum()) / (2.0 * math.pi)
            w = round(total)
            if abs(total - w) >= _SNAP_TOL:
                return None
            return int(w)
        if len(s) > _MAX_BOUNDARY_POINTS:
            return None
        idx = np.nonzero(bad)[0]
        s_next = np.where(idx + 1 < len(s), s[(idx + 1) % len(s)], s[0] + period)
        gaps = (s_next - s[idx]) % period
        if near_tol > 0.0 and np.any(gaps[gaps > 0.0] < 1e-10):
            # bisection is diving onto a point where the phase still jumps:
            # the contour passes through (or hugs) a zero
            raise _NearZeroOnContour
        mids = ((s[idx] + s_next) / 2.0) % period
        new_vals = eval_points(point_of_s(mids))
        s = np.concatenate([s, mids])
        vals = np.concatenate([vals, new_vals])
        order = np.argsort(s, kind="stable")
        s = s[order]
        vals = vals[order]


def _rect_points(x0: float, x1: float, y0: float, y1: float, s: np.ndarray) -> np.ndarray:
    """Map parameters in [0, 4) to the rectangle boundary, one edge per unit."""
    s = np.asarray(s, dtype=float) % 4.0
    edge = np.floor(s).astype(int)
    f = s - edge
    xs = np.select(
        [edge == 0, edge == 1, edge == 2, edge == 3],
        [x0 + f * (x1 - x0), np.full_like(f, x1), x1 - f * (x1 - x0), np.full_like(f, x0)],
    )
    ys = np.select(
        [edge == 0, edge == 1, edge == 2, edge == 3],
        [np.full_like(f, y0), y0 + f * (y1 - y0), np.full_like(f, y1), y1 - f * (y1 - y0)],
    )
    return xs + 1j * ys


def _rect_winding(J: JacobiCoefficients, box, near_tol=_NEAR_ZERO_TOL, per_edge=8) -> int | None:
    x0, x1, y0, y1 = box
    s0 = np.concatenate([np.linspace(e, e + 1.0, per_edge, endpoint=False) for e in range(4)])
    return _adaptive_winding(
        lambda zs: jost_function_grid(J, zs),
        lambda s: _rect_points(x0, x1, y0, y1, s),
        s0,
        4.0,
        near_tol,
    )


def _circle_winding(J: JacobiCoefficients, center: complex, radius: float) -> int | None:
    s0 = np.linspace(0.0, 1.0, 24, endpoint=False)
    return _adaptive_winding(
        lambda zs: jost_function_grid(J, zs),
        lambda s: center + radius * np.exp(2j * math.pi * np.asarray(s)),
        s0,
        1.0,
        0.0,
    )


# --- quadtree zero search --------------------------------------------------

_JITTER_SCHEDULE = (0.0, 0.0031, -0.0031, 0.0073, -0.0073, 0.0137, -0.0137, 0.0191)


def _split_box(box, fx: float, fy: float):
    x0, x1, y0, y1 = box
    xm = x0 + fx * (x1 - x0)
    ym = y0 + fy * (y1 - y0)
    return [
        (x0, xm, y0, ym),
        (xm, x1, y0, ym),
        (x0, xm, ym, y1),
        (xm, x1, ym, y1),
    ]


def _newton_polish(J: JacobiCoefficients, z0: complex, tol: float, box, max_iter: int = 80):
    """Damped Newton on the determinant, confined near the originating cell.

    Returns ``(z, last_step, residual, converged)``.
    """
    x0, x1, y0, y1 = box
    wx, wy = x1 - x0, y1 - y0
    z = complex(z0)
    if z == 0:  # the determinant is 1 there; start Newton off the puncture
        z = complex(1e-9 * max(wx, 1e-9), 1e-9 * max(wy, 1e-9))
    val, der = jost_function_and_derivative(J, z)
    step = math.inf
    for _ in range(max_iter):
        if der == 0 or not math.isfinite(abs(der)):
            break
        full = val / der
        # polish past the residual target until the step stalls, so the
        # position is limited by conditioning, not by the (absolute) tol:
        # flat determinants satisfy |L| <= tol in a wide neighbourhood
        if abs(val) <= tol and abs(full) <= 1e-12 * (1.0 + abs(z)):
            return z, max(abs(full), step if math.isfinite(step) else 0.0, 1e-16), abs(val), True
        damp = 1.0
        for _ in range(25):
            cand = z - damp * full
            inside = (x0 - wx <= cand.real <= x1 + wx) and (y0 - wy <= cand.imag <= y1 + wy)
            if inside:
                cand_val, cand_der = jost_function_and_derivative(J, cand)
                if abs(cand_val) < abs(val) or (abs(cand_val) <= tol and damp == 1.0):
                    break
            damp *= 0.5
        else:
            break
        step = abs(damp * full)
        z, val, der = cand, cand_val, cand_der
    last = step if math.isfinite(step) else 0.0
    return z, last, abs(val), abs(val) <= tol


def find_determinant_zeros(
    J: JacobiCoefficients,
    r_max: float = 0.999,
    tol: float = 1e-10,
    seed: int = 0,
    initial_depth: int = 0,
) -> ZeroSearchReport:
    """Locate all zeros of the determinant with ``|z| <= r_max``.

    The search square ``[-r_max, r_max]^2`` covers the disk; refined zeros in
    the square corners with ``r_max < |z| < 1`` are reported in the warnings
    rather than as eigenvalue candidates.  ``initial_depth`` forces that many
    blind subdivision levels before winding-driven pruning starts (useful to
    confirm grid independence).  ``seed`` offsets the deterministic jitter
    schedule used when a contour lands on a zero.
    """
    if not 0.0 < r_max < 1.0:
        raise ValueError("r_max must lie in (0, 1)")
    if tol <= 0:
        raise ValueError("tol must be positive")
    warnings: list[str] = []
    cells = 0

    root = (-r_max, r_max, -r_max, r_max)
    w_root = None
    for attempt in range(8):
        grow = 1.0 + 3e-7 * attempt
        box = (-r_max * grow, r_max * grow, -r_max * grow, r_max * grow)
        try:
            w_root = _rect_winding(J, box)
        except _NearZeroOnContour:
            warnings.append("winding contour near a zero at the outer boundary; jittered")
            continue
        root = box
        break
    cells += 1

    raw: list[tuple[complex, float, int]] = []  # (z, residual, multiplicity)

    def subdivide(box, parent_w):
        nonlocal cells
        for attempt in range(len(_JITTER_SCHEDULE)):
            off = _JITTER_SCHEDULE[(attempt + seed) % len(_JITTER_SCHEDULE)]
            kids = _split_box(box, 0.5 + off, 0.5 - off)
            ws = []
            try:
                for kid in kids:
                    ws.append(_rect_winding(J, kid))
            except _NearZeroOnContour:
                if attempt == 0:
                    warnings.append("winding contour near a zero; subdivision jittered")
                continue
            cells += len(kids)
            if parent_w is not None and all(w is not None for w in ws) and sum(ws) != parent_w:
                warnings.append(
                    f"winding mismatch: parent {parent_w} vs children {sum(ws)} near {box}"
                )
            return list(zip(kids, ws))
        warnings.append(f"could not place a zero-free subdivision inside {box}")
        kids = _split_box(box, 0.5 + 0.0241, 0.5 - 0.0241)
        cells += len(kids)
        return [(kid, None) for kid in kids]

    def refine(box, w):
        # only reached with cell winding w == 1; the circle is a cross-check
        x0, x1, y0, y1 = box
        center = complex((x0 + x1) / 2.0, (y0 + y1) / 2.0)
        z_hat, last_step, residual, ok = _newton_polish(J, center, tol, box)
        if not ok:
            return False
        mult = None
        radius = max(10.0 * last_step, 1e-12)
        for _ in range(6):
            mult = _circle_winding(J, z_hat, radius)
            if mult is not None and mult >= 1:
                break
            radius *= 8.0
        if mult is not None and mult > w:
            warnings.append(
                f"multiplicity circle at z={z_hat} caught {mult} zeros; capped to cell winding {w}"
            )
        raw.append((z_hat, residual, w))
        return True

    stack: list[tuple[tuple, int | None, int]] = [(root, w_root, initial_depth)]
    while stack:
        box, w, force = stack.pop()
        x0, x1, y0, y1 = box
        diam = math.hypot(x1 - x0, y1 - y0)
        if force <= 0:
            if w == 0:
                continue
            if w is None and diam < _CELL_SPLIT_FLOOR:
                warnings.append(f"winding unresolved in tiny cell {box}; skipped")
                continue
            if w is not None and diam < _CELL_REFINE_DIAM:
                if w == 1 and refine(box, w):
                    continue
                if w >= 2 and diam < _CELL_SPLIT_FLOOR:
                    # unseparated cluster: one reported point carries the count
                    z_hat, _, residual, _ = _newton_polish(J, complex((x0 + x1) / 2, (y0 + y1) / 2), tol, box)
                    raw.append((z_hat, residual, w))
                    warnings.append(f"cluster of {w} zeros reported unseparated near {z_hat}")
                    continue
                if diam < _CELL_SPLIT_FLOOR:
                    warnings.append(f"Newton did not converge in cell {box}; zero dropped")
                    continue
        for kid, kw in subdivide(box, w if force <= 0 else None):
            stack.append((kid, kw, max(force - 1, 0)))

    # the cells partition the square, so distinct cells hold distinct zeros
    # (possibly closer together than any size threshold); collapse only
    # refinements that landed on literally the same point, and keep the
    # winding total by summing their counts
    deduped: list[tuple[complex, float, int]] = []
    for z_hat, residual, mult in raw:
        for i, (z_prev, res_prev, mult_prev) in enumerate(deduped):
            if abs(z_hat - z_prev) < 1e-12 * max(1.0, abs(z_prev)):
                warnings.append(f"unresolved zero pair at z={z_hat}; reported with joint count")
                best = (z_hat, residual) if residual < res_prev else (z_prev, res_prev)
                deduped[i] = (best[0], best[1], mult + mult_prev)
                break
        else:
            deduped.append((z_hat, residual, mult))

    zeros: list[DiscreteEigenvalue] = []
    for z_hat, residual, mult in deduped:
        r = abs(z_hat)
        if r > r_max:
            if r < 1.0:
                warnings.append(f"zero at |z|={r:.6f} beyond search radius {r_max}; not counted")
            continue
        lam = lambda_of_z(z_hat)
        zeros.append(
            DiscreteEigenvalue(
                lam=lam,
                z=z_hat,
                multiplicity=mult,
                dist_band=dist_to_band(lam),
                cassini=cassini_radius(lam),
                residual=residual,
            )
        )
    zeros.sort(key=DiscreteEigenvalue.sort_key)
    total = sum(ev.multiplicity for ev in zeros)
    return ZeroSearchReport(
        cells_examined=cells,
        total_winding=total,
        zeros=zeros,
        search_radius=r_max,
        warnings=warnings,
    )


def discrete_spectrum(J: JacobiCoefficients, r_max: float = 0.999, tol: float = 1e-10) -> list[DiscreteEigenvalue]:
    """Eigenvalues off the band, sorted by (Re, Im) for reproducibility."""
    return find_determinant_zeros(J, r_max=r_max, tol=tol).zeros


# --- spectral functionals --------------------------------------------------

def lieb_thirring_sum(spectrum: list[DiscreteEigenvalue], eps: float) -> float:
    """Accumulate ``dist(lam, band) / |lam^2 - 4|^((1-eps)/2)`` with multiplicity."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    expo = (1.0 - eps) / 2.0
    return float(sum(ev.multiplicity * ev.dist_band / ev.cassini**expo for ev in spectrum))


def blaschke_sum(spectrum: list[DiscreteEigenvalue], eps: float) -> float:
    """Disk-side zero sum ``(1 - |z|) |z^2 - 1|^eps / |z|^eps`` (diagnostic only)."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    out = 0.0
    for ev in spectrum:
        z = ev.z
        out += ev.multiplicity * (1.0 - abs(z)) * (abs(z * z - 1.0) / abs(z)) ** eps
    return float(out)


def cassini_enclosure_test(spectrum: list[DiscreteEigenvalue], Delta: float, slack: float = 1e-9) -> bool:
    """Every eigenvalue obeys ``|lam^2 - 4| <= (2 Delta / log 2)^2``."""
    if Delta < 0:
        raise ValueError("Delta must be nonnegative")
    bound = (2.0 * Delta / LOG2) ** 2
    return all(ev.cassini <= bound + slack for ev in spectrum)


def empty_spectrum_certificate(J: JacobiCoefficients) -> bool:
    """True when the first-moment sum is below log 2, which forbids eigenvalues."""
    return summarize(J).Delta1 < LOG2


def birman_schwinger_ovals(
    spectrum: list[DiscreteEigenvalue],
    trace_norm: float,
    schroedinger: bool,
    slack: float = 1e-9,
) -> bool:
    """Oval enclosures from the resolvent-product bound.

    Always checks ``|lam^2 - 4| <= 36^2 ||J - J0||_1^2``; for pure diagonal
    perturbations the tighter ``4 / (log 2)^2`` constant is checked as well.
    """
    general = 36.0**2 * trace_norm**2
    if not all(ev.cassini <= general + slack for ev in spectrum):
        return False
    if schroedinger:
        tight = 4.0 / LOG2**2 * trace_norm**2
        if not all(ev.cassini <= tight + slack for ev in spectrum):
            return False
    return True


def spectrum_report(
    J: JacobiCoefficients,
    r_max: float = 0.999,
    tol: float = 1e-10,
    eps: float = 0.5,
    seed: int = 0,
) -> dict:
    """Full machine-readable report: zeros, sums, enclosures, diagnostics."""
    summary = summarize(J)
    search = find_determinant_zeros(J, r_max=r_max, tol=tol, seed=seed)
    schroed = J.is_schroedinger()
    zeros = [
        {
            "z": {"re": ev.z.real, "im": ev.z.imag},
            "lambda": {"re": ev.lam.real, "im": ev.lam.imag},
            "mult": ev.multiplicity,
            "dist": ev.dist_band,
            "cassini": ev.cassini,
            "residual": ev.residual,
        }
        for ev in search.zeros
    ]
    lt = lieb_thirring_sum(search.zeros, eps)
    report = {
        "operator": {
            "support_bound": J.support_bound,
            "Delta": summary.Delta,
            "Delta1": summary.Delta1,
            "trace_norm": summary.trace_norm,
            "schroedinger": schroed,
        },
        "search": {
            "r_max": r_max,
            "tol": tol,
            "cells_examined": search.cells_examined,
            "total_winding": search.total_winding,
        },
        "zeros": zeros,
        "eps": eps,
        "lt_sum": lt,
        "lt_ratio": (lt / summary.Delta) if summary.Delta > 0 else 0.0,
        "blaschke_sum": blaschke_sum(search.zeros, eps),
        "enclosures": {
            "cassini": cassini_enclosure_test(search.zeros, summary.Delta),
            "bs_general": birman_schwinger_ovals(search.zeros, summary.trace_norm, False),
            "bs_schroedinger": (
                birman_schwinger_ovals(search.zeros, summary.trace_norm, True) if schroed else None
            ),
            "empty_certificate": empty_spectrum_certificate(J),
        },
        "warnings": search.warnings,
    }
    return report
