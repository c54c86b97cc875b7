"""Independent eigenvalue verification through truncated determinants.

The N-by-N principal section of the operator is tridiagonal, so its
characteristic determinant obeys a two-term recurrence that costs O(N) per
spectral point and shares no code with the analytic pipeline.  Overflow over
long sections is handled by tracking a separate exponent.  Spectral pollution
(spurious off-band zeros of finite sections) is rejected by requiring zeros
to survive a doubling of the truncation size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .jost import jost_backward
from .operator import JacobiCoefficients

_RESCALE_LIMIT = 2.0**512
_RESCALE_SHIFT = 512


@dataclass(frozen=True)
class TruncationPlan:
    """Section size and the geometric tail factor it leaves uncontrolled."""

    N: int
    tail_factor: float


def truncation_plan(z: complex, support_bound: int, threshold: float, n_cap: int = 20000) -> TruncationPlan:
    """Smallest section with ``|z|^(2 (N - M)) < threshold`` for a candidate at ``z``.

    The square is the right exponent: past that size the candidate's own
    position error re-excites the growing solution as fast as the true tail
    keeps shrinking, so larger sections stop helping.
    """
    r = abs(z)
    if not 0.0 < r < 1.0:
        raise ValueError("candidate disk parameter must satisfy 0 < |z| < 1")
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    extra = math.ceil(math.log(threshold) / (2.0 * math.log(r))) + 1
    N = min(max(support_bound + max(extra, 12), 8), n_cap)
    return TruncationPlan(N=N, tail_factor=r ** (2 * (N - support_bound)))


@dataclass(frozen=True)
class ScaledDeterminant:
    """Determinant value ``mantissa * 2**exponent`` with its running peak."""

    mantissa: complex
    exponent: int
    max_log2: float  # max over k <= N of log2 |D_k|

    @property
    def log2_abs(self) -> float:
        if self.mantissa == 0:
            return -math.inf
        return math.log2(abs(self.mantissa)) + self.exponent

    @property
    def value(self) -> complex:
        try:
            return self.mantissa * 2.0**self.exponent
        except OverflowError:
            return complex(math.inf, math.inf)

    @property
    def normalized_log2(self) -> float:
        """``log2`` of ``|D_N| / max_k |D_k|`` (0 when the final value is the peak)."""
        return self.log2_abs - self.max_log2


def char_det(J: JacobiCoefficients, N: int, lam: complex) -> ScaledDeterminant:
    """Characteristic determinant of the N-section by the three-term recurrence."""
    if N < 1:
        raise ValueError("section size must be >= 1")
    lam = complex(lam)
    d_prev = 1.0 + 0.0j  # D_0
    d_cur = J.b(1) - lam  # D_1
    expo = 0
    peak = max(0.0, math.log2(abs(d_cur)) if d_cur != 0 else -math.inf)
    for k in range(2, N + 1):
        d_next = (J.b(k) - lam) * d_cur - J.ac(k - 1) * d_prev
        d_prev, d_cur = d_cur, d_next
        m = max(abs(d_cur), abs(d_prev))
        if m > _RESCALE_LIMIT:
            d_prev *= 2.0**-_RESCALE_SHIFT
            d_cur *= 2.0**-_RESCALE_SHIFT
            expo += _RESCALE_SHIFT
        elif 0.0 < m < 1.0 / _RESCALE_LIMIT:
            d_prev *= 2.0**_RESCALE_SHIFT
            d_cur *= 2.0**_RESCALE_SHIFT
            expo -= _RESCALE_SHIFT
        if d_cur != 0:
            peak = max(peak, math.log2(abs(d_cur)) + expo)
    return ScaledDeterminant(mantissa=d_cur, exponent=expo, max_log2=peak)


def _det_log_derivative(J: JacobiCoefficients, N: int, lam: complex) -> complex | None:
    """``D_N'(lam) / D_N(lam)`` by the differentiated recurrence (scale-free)."""
    d_prev, d_cur = 1.0 + 0.0j, J.b(1) - lam
    g_prev, g_cur = 0.0 + 0.0j, -1.0 + 0.0j
    for k in range(2, N + 1):
        coeff = J.b(k) - lam
        ac = J.ac(k - 1)
        d_next = coeff * d_cur - ac * d_prev
        g_next = -d_cur + coeff * g_cur - ac * g_prev
        d_prev, d_cur = d_cur, d_next
        g_prev, g_cur = g_cur, g_next
        m = max(abs(d_cur), abs(d_prev), abs(g_cur), abs(g_prev))
        if m > _RESCALE_LIMIT or 0.0 < m < 1.0 / _RESCALE_LIMIT:
            f = 2.0**-_RESCALE_SHIFT if m > 1.0 else 2.0**_RESCALE_SHIFT
            d_prev *= f
            d_cur *= f
            g_prev *= f
            g_cur *= f
    if d_cur == 0:
        return complex(math.inf, 0.0)
    return g_cur / d_cur


def _char_det_newton(J: JacobiCoefficients, N: int, lam0: complex, max_iter: int = 60) -> complex | None:
    """Newton for zeros of the section determinant relative to the free one.

    Iterating on ``log(D_N / D_N^0)`` cancels the shared smooth growth factor
    whose gradient otherwise shrinks the Newton basin like ``1/N`` and drags
    iterates toward the band.
    """
    free = JacobiCoefficients({})
    lam = complex(lam0)
    for _ in range(max_iter):
        ld = _det_log_derivative(J, N, lam)
        ld0 = _det_log_derivative(free, N, lam)
        if ld is None or ld0 is None:
            return None
        denom = ld - ld0
        if denom == 0 or not (math.isfinite(denom.real) and math.isfinite(denom.imag)):
            return None
        step = 1.0 / denom
        lam = lam - step
        if abs(step) < 1e-13 * (1.0 + abs(lam)):
            return lam
    return None


def confirm_eigenvalue(J: JacobiCoefficients, lam: complex, z: complex, threshold: float = 1e-8) -> bool:
    """Accept a candidate when the section determinant follows the decaying
    solution past the support and the Jost-built eigenvector satisfies the
    recurrence rows.

    Past the support the determinant either decays like ``|z|^k`` (at a true
    eigenvalue) or grows like ``|z|^-k`` (anywhere else), so the measured
    tail drop ``|D_N| / |D_(M+5)|`` is compared to the geometric midpoint of
    the two rates.  Ratios make the test scale-free: profile constants from
    the perturbed region cancel.
    """
    plan = truncation_plan(z, J.support_bound, threshold)
    base = J.support_bound + 5
    d_base = -math.inf
    while base <= plan.N - 5 and not math.isfinite(d_base):
        d_base = char_det(J, base, lam).log2_abs  # dodge section eigenvalues
        base += 1
    if not math.isfinite(d_base):
        return False
    base -= 1
    drop = char_det(J, plan.N, lam).log2_abs - d_base
    midpoint = 0.5 * (plan.N - base) * math.log2(abs(z))
    if not drop <= midpoint:
        return False
    return eigenvector_residual(J, z) < threshold


def eigenvector_residual(J: JacobiCoefficients, z: complex, extra: int = 8) -> float:
    """Row residual of the eigenvector candidate rebuilt from the Jost solution.

    Components are ``v_k = u_k * a_1 ... a_(k-1)``; at a determinant zero the
    first row residual equals ``|u_0|`` and all later rows are exact.
    """
    ev = jost_backward(J, z)
    top = J.support_bound + extra
    v = [0.0 + 0.0j] * (top + 2)
    prod = 1.0 + 0.0j
    for k in range(1, top + 2):
        v[k] = ev.u(k) * prod
        prod *= J.a(k)
    scale = max(abs(x) for x in v[1:]) or 1.0
    lam = z + 1.0 / z
    worst = abs(J.b(1) * v[1] + J.c(1) * v[2] - lam * v[1])
    for j in range(2, top + 1):
        row = J.a(j - 1) * v[j - 1] + J.b(j) * v[j] + J.c(j) * v[j + 1] - lam * v[j]
        worst = max(worst, abs(row))
    return worst / scale


def _log_derivative_grid(J: JacobiCoefficients, N: int, lam: np.ndarray) -> np.ndarray:
    """Vectorised ``D_N'(lam) / D_N(lam)`` over a grid (overflow-safe)."""
    lam = np.asarray(lam, dtype=complex)
    d_prev = np.ones_like(lam)
    d_cur = J.b(1) - lam
    g_prev = np.zeros_like(lam)
    g_cur = np.full_like(lam, -1.0)
    for k in range(2, N + 1):
        coeff = J.b(k) - lam
        ac = J.ac(k - 1)
        d_next = coeff * d_cur - ac * d_prev
        g_next = -d_cur + coeff * g_cur - ac * g_prev
        d_prev, d_cur = d_cur, d_next
        g_prev, g_cur = g_cur, g_next
        m = np.maximum(np.maximum(np.abs(d_cur), np.abs(d_prev)),
                       np.maximum(np.abs(g_cur), np.abs(g_prev)))
        hot = m > 1e120
        cold = (m > 0) & (m < 1e-120)
        if hot.any() or cold.any():
            f = np.where(hot, 1e-120, np.where(cold, 1e120, 1.0))
            d_prev = d_prev * f
            d_cur = d_cur * f
            g_prev = g_prev * f
            g_cur = g_cur * f
    with np.errstate(divide="ignore", invalid="ignore"):
        return g_cur / d_cur


def grid_zero_scan(
    J: JacobiCoefficients,
    N: int,
    region: tuple[float, float, float, float],
    step: float,
) -> list[complex]:
    """Stable zeros of the section determinant over a rectangular grid.

    Detection works on the Newton displacement of ``log(D_N / D_N^0)``: the
    free-section division cancels the shared smooth growth toward the band,
    and any grid point whose proposed step is shorter than a cell flags a
    zero within reach.  Displaced candidates are deduplicated and polished
    by a Newton cascade at sizes ``N``, ``2 N`` and ``4 N``: section
    eigenvalues converge geometrically (like ``|z|^(2 N)``) toward true
    eigenvalues, so the second move must both stay under 1e-6 and contract
    against the first; spectral pollution near the band keeps wandering and
    is stripped.  Zeros outside the region are discarded.
    """
    re_min, re_max, im_min, im_max = region
    if re_max <= re_min or im_max <= im_min or step <= 0:
        raise ValueError("bad scan region or step")
    # grid offset breaks mirror symmetries about the imaginary axis
    xs = np.arange(re_min + 0.2331 * step, re_max + step / 2, step)
    ys = np.arange(im_min, im_max + step / 2, step)
    grid = xs[None, :] + 1j * ys[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        denom = _log_derivative_grid(J, N, grid) - _log_derivative_grid(JacobiCoefficients({}), N, grid)
        displacement = 1.0 / denom
    close = np.isfinite(displacement) & (np.abs(displacement) < 2.0 * step)
    cand = (grid[close] - displacement[close]).ravel()
    sizes = np.abs(displacement[close]).ravel()
    order = np.argsort(sizes, kind="stable")

    seeds: list[complex] = []
    for idx in order:
        w = complex(cand[idx])
        if all(abs(w - s) > 0.9 * step for s in seeds):
            seeds.append(w)

    # stage-1 polish is cheap; run it for every seed and keep the distinct
    # limits before paying for the larger sections (band pollution produces
    # many seeds that all collapse onto the same section zeros here)
    firsts: list[complex] = []
    for seed in seeds:
        first = _char_det_newton(J, N, seed)
        if first is None:
            continue
        if all(abs(first - known) > 1e-7 for known in firsts):
            firsts.append(first)

    stable: list[complex] = []
    for first in firsts:
        second = _char_det_newton(J, 2 * N, first)
        if second is None:
            continue
        third = _char_det_newton(J, 4 * N, second)
        if third is None:
            continue
        move1 = abs(second - first)
        move2 = abs(third - second)
        if move2 > 1e-6 or move2 > max(0.5 * move1, 1e-9):
            continue
        if not (re_min <= third.real <= re_max and im_min <= third.imag <= im_max):
            continue
        if any(abs(third - known) < 1e-7 for known in stable):
            continue
        stable.append(third)
    stable.sort(key=lambda w: (w.real, w.imag))
    return stable
