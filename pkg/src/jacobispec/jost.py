"""Jost solutions of the three-term recurrence and the perturbation determinant.

Two independent evaluators are provided.  ``jost_backward`` seeds the pure
power tail and recurses downward, which is exact for finitely supported
deviations (the discarded growing solution decays in that direction).
``jost_volterra`` solves the equivalent discrete Volterra equation by
successive approximations and carries a rigorous factorial-tail error bound;
it is kept as a cross-validation route, not for speed.

The 0-th Jost component is the perturbation determinant: its zeros in the
punctured unit disk are exactly the discrete eigenvalues in the ``z``
coordinate.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .operator import JacobiCoefficients, PerturbationSummary, summarize
from .zhukovsky import omega

#: below this distance from z^2 = 1 the boundary error model is used
BOUNDARY_SWITCH = 1e-3


@dataclass(frozen=True)
class JostEvaluation:
    """Jost values ``u_k`` for ``k = 0 .. tail_start + 1`` at a fixed ``z``.

    Components with ``k >= tail_start`` equal ``z^k`` exactly.  The error
    model is relative to the power scale: ``|values[k] - true| <=
    error_bound * |z|^k``.  The backward method reports 0 (exact up to
    rounding); the Volterra method reports its factorial-tail remainder.
    """

    z: complex
    values: tuple[complex, ...]
    tail_start: int
    error_bound: float

    def u(self, k: int) -> complex:
        """Component ``k``, extending past the stored range by the power tail."""
        if k < 0:
            raise IndexError("component index must be nonnegative")
        if k < len(self.values):
            return self.values[k]
        return self.z**k

    def component_error_bound(self, k: int) -> float:
        return self.error_bound * abs(self.z) ** k


def green_kernel(k: int, m: int, z: complex) -> complex:
    """Triangular Green kernel ``(z^(m-k) - z^(k-m)) / (z - 1/z)`` for ``m >= k``.

    Vanishes for ``m <= k``; the excluded points ``z in {0, 1, -1}`` are
    rejected (use the scaled polynomial form where those matter).
    """
    z = complex(z)
    if z == 0 or z == 1 or z == -1:
        raise ValueError("green_kernel requires z outside {0, 1, -1}")
    if m <= k:
        return 0.0 + 0.0j
    return (z ** (m - k) - z ** (k - m)) / (z - 1.0 / z)


def green_kernel_scaled(k: int, m: int, z: complex) -> complex:
    """The polynomial form ``z^(m-k) * G(k, m; z)``, finite for all ``z``.

    Equals ``z * (1 + z^2 + ... + z^(2(m-k-1))))`` for ``m > k``; evaluated as
    the explicit geometric sum so ``z = +-1`` is allowed by continuity.
    """
    if m <= k:
        return 0.0 + 0.0j
    z = complex(z)
    w = z * z
    acc = 0.0 + 0.0j
    for _ in range(m - k):
        acc = acc * w + 1.0
    return z * acc


def t_tilde(J: JacobiCoefficients, k: int, m: int, z: complex) -> complex:
    """Scaled Volterra kernel combining the diagonal and off-diagonal deviations.

    ``-b_m [z^(m-k) G(k,m;z)] + (1 - a_(m-1) c_(m-1)) [z^(m-k) G(k,m-1;z)]``,
    both brackets in polynomial form.  Requires ``m >= k + 1``.
    """
    if m < k + 1:
        raise ValueError("t_tilde requires m >= k + 1")
    z = complex(z)
    b_m = J.b(m)
    ac = J.ac(m - 1)
    out = 0.0 + 0.0j
    if b_m != 0:
        out -= b_m * green_kernel_scaled(k, m, z)
    if ac != 1:
        out += (1.0 - ac) * z * green_kernel_scaled(k, m - 1, z)
    return out


def jost_backward(J: JacobiCoefficients, z: complex) -> JostEvaluation:
    """Exact Jost solution by downward recursion from the power tail.

    Sets ``u_k = z^k`` for ``k = M, M+1`` and recurses
    ``u_(k-1) = (lambda(z) - b_k) u_k - a_k c_k u_(k+1)`` down to ``k = 1``.
    """
    z = complex(z)
    if z == 0:
        raise ValueError("z = 0 is not admissible (use the limit value L(0) = 1)")
    M = J.support_bound
    lam = z + 1.0 / z
    u = [0.0 + 0.0j] * (M + 2)
    u[M + 1] = z ** (M + 1)
    u[M] = z**M
    for k in range(M, 0, -1):
        u[k - 1] = (lam - J.b(k)) * u[k] - J.ac(k) * u[k + 1]
    return JostEvaluation(z=z, values=tuple(u), tail_start=M, error_bound=0.0)


def _volterra_tail(x: float, p: int) -> float:
    """Upper bound for ``sum_(j>p) x^j / j!`` (the series remainder after p terms)."""
    if x == 0.0:
        return 0.0
    # x^(p+1)/(p+1)! * e^x, in logs to survive large x
    log_rem = (p + 1) * math.log(x) - math.lgamma(p + 2) + x
    if log_rem > 700.0:
        return math.inf
    return math.exp(log_rem)


def jost_volterra(J: JacobiCoefficients, z: complex, tol: float = 1e-12) -> JostEvaluation:
    """Jost solution by successive approximations on the Volterra equation.

    Iterates ``f_(k,j+1) = sum_(m>k) T~(k,m;z) f_(m,j)`` from
    ``f_(k,1) = g_k = sum_(m>k) T~(k,m;z)`` and returns
    ``u_k = z^k (1 + sum_j f_(k,j))``.  The stopping rule is the analytic
    factorial remainder of the majorant series (so the reported bound is
    rigorous), with exact termination recognised when an iterate vanishes
    identically, which must happen for finite support.

    Near ``z^2 = 1`` the weight of the interior majorant blows up; there the
    first-moment boundary majorant ``|z| s1`` is used instead.
    """
    z = complex(z)
    if z == 0:
        raise ValueError("z = 0 is not admissible")
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = J.support_bound
    summary = summarize(J)

    if M == 0:
        return JostEvaluation(z=z, values=(1.0 + 0.0j, z), tail_start=0, error_bound=0.0)

    # majorant weight: interior |omega(z)| s0, boundary |z| s1
    if abs(z * z - 1.0) < BOUNDARY_SWITCH:
        x0 = abs(z) * summary.s1(0)
    else:
        x0 = abs(omega(z)) * summary.s0(0)

    # prefix[d] = 1 + z^2 + ... + z^(2(d-1)), so the two kernel brackets are
    # z*prefix[m-k] and z^2*prefix[m-k-1]
    w = z * z
    prefix = [0.0 + 0.0j] * (M + 2)
    powz2 = 1.0 + 0.0j
    for d in range(1, M + 2):
        prefix[d] = prefix[d - 1] + powz2
        powz2 *= w

    sites = [m for m in range(1, M + 2) if J.b(m) != 0 or J.ac(m - 1) != 1]
    bvals = {m: J.b(m) for m in sites}
    cvals = {m: (1.0 - J.ac(m - 1)) * z for m in sites}

    def kernel(k: int, m: int) -> complex:
        return (-bvals[m] * prefix[m - k] + cvals[m] * prefix[m - k - 1]) * z

    # f_k = 0 for k >= M identically, so the unknowns live on k = 0..M-1
    g = [0.0 + 0.0j] * M
    for k in range(M):
        g[k] = sum(kernel(k, m) for m in sites if m > k)
    total = list(g)
    current = g
    inner = [m for m in sites if m < M]
    error = _volterra_tail(x0, 1)
    steps = 1
    while error > tol:
        nxt = [0.0 + 0.0j] * M
        alive = False
        for k in range(M):
            acc = 0.0 + 0.0j
            for m in inner:
                if m > k:
                    acc += kernel(k, m) * current[m]
            nxt[k] = acc
            alive = alive or acc != 0
        steps += 1
        if not alive:
            error = 0.0  # iteration closed exactly; only rounding remains
            break
        for k in range(M):
            total[k] += nxt[k]
        current = nxt
        error = _volterra_tail(x0, steps)
        if steps > len(sites) + 2:
            # the nested sums are strictly increasing in the support, so the
            # series is finite; reaching here means the remaining terms are 0
            error = 0.0
            break

    values = [0.0 + 0.0j] * (M + 2)
    powk = 1.0 + 0.0j
    for k in range(M):
        values[k] = powk * (1.0 + total[k])
        powk *= z
    values[M] = z**M
    values[M + 1] = z ** (M + 1)
    return JostEvaluation(z=z, values=tuple(values), tail_start=M, error_bound=float(error))


def jost_function(J: JacobiCoefficients, z: complex) -> complex:
    """Perturbation determinant ``L(lambda(z), J)`` as the 0-th Jost component.

    ``L(0) = 1`` by analytic continuation (the determinant of the identity).
    """
    z = complex(z)
    if z == 0:
        return 1.0 + 0.0j
    return jost_backward(J, z).values[0]


def jost_function_and_derivative(J: JacobiCoefficients, z: complex) -> tuple[complex, complex]:
    """Determinant and its ``z`` derivative from the differentiated recursion."""
    z = complex(z)
    if z == 0:
        raise ValueError("derivative evaluation needs z != 0")
    M = J.support_bound
    lam = z + 1.0 / z
    dlam = 1.0 - 1.0 / (z * z)
    u_next = z ** (M + 1)
    u_cur = z**M
    du_next = (M + 1) * z**M
    du_cur = M * z ** (M - 1) if M >= 1 else 0.0 + 0.0j
    for k in range(M, 0, -1):
        coeff = lam - J.b(k)
        ac = J.ac(k)
        u_prev = coeff * u_cur - ac * u_next
        du_prev = dlam * u_cur + coeff * du_cur - ac * du_next
        u_next, u_cur = u_cur, u_prev
        du_next, du_cur = du_cur, du_prev
    return u_cur, du_cur


def jost_function_grid(J: JacobiCoefficients, z: np.ndarray) -> np.ndarray:
    """Vectorised determinant over an array of ``z`` values.

    Entries at ``z = 0`` get the continuation value 1 (the determinant is a
    polynomial with constant term 1), so grids touching the origin are safe.
    """
    z = np.asarray(z, dtype=complex)
    at_origin = z == 0
    if at_origin.any():
        z = np.where(at_origin, 1.0, z)
    M = J.support_bound
    lam = z + 1.0 / z
    u_next = z ** (M + 1)
    u_cur = z**M
    for k in range(M, 0, -1):
        u_prev = (lam - J.b(k)) * u_cur - J.ac(k) * u_next
        u_next, u_cur = u_cur, u_prev
    if at_origin.any():
        u_cur = np.where(at_origin, 1.0 + 0.0j, u_cur)
    return u_cur


def determinant_bound_check(J: JacobiCoefficients, z: complex, slack: float = 1e-10) -> bool:
    """Check the growth bounds of the determinant at one point.

    Interior bound: ``log|L| <= |omega(z)| Delta``; first-moment bound
    (always available for finite support): ``log|L| <= |z| Delta1``.  Both
    are tested with the given additive slack; at ``z = +-1`` only the latter
    applies.
    """
    z = complex(z)
    summary = summarize(J)
    L = jost_function(J, z)
    if L == 0:
        return True
    log_l = math.log(abs(L))
    ok = log_l <= abs(z) * summary.Delta1 + slack
    if z != 1 and z != -1 and z != 0:
        ok = ok and log_l <= abs(omega(z)) * summary.Delta + slack
    return ok


def boundary_modulus_profile(J: JacobiCoefficients, theta: float, tail: int = 4) -> list[float]:
    """Moduli ``|u_k(e^(i theta))|`` for ``k = 0 .. M + tail``.

    The interior band angles ``theta in {0, pi}`` are rejected.  Values with
    ``k >= M`` are exactly 1, which is what rules out square-summable
    eigenvectors at band points.
    """
    if theta <= 0.0 or theta >= math.pi:
        raise ValueError("theta must lie strictly between 0 and pi")
    z = cmath.exp(1j * theta)
    ev = jost_backward(J, z)
    M = J.support_bound
    out = [abs(ev.values[k]) for k in range(min(M + tail, M + 1) + 1)]
    while len(out) < M + tail + 1:
        out.append(1.0)
    return out


def volterra_bound_check(J: JacobiCoefficients, ev: JostEvaluation, slack: float = 1e-10) -> bool:
    """Verify the a priori envelope ``|u_k - z^k| <= |z|^k (e^(w s(k)) - 1)``.

    ``w s(k)`` is ``|omega(z)| s0(k)`` in the interior and ``|z| s1(k)`` on
    the boundary ring, matching the two error models of the solver.
    """
    summary = summarize(J)
    z = ev.z
    boundary = abs(z * z - 1.0) < BOUNDARY_SWITCH
    for k, value in enumerate(ev.values):
        if boundary:
            x = abs(z) * summary.s1(k)
        else:
            x = abs(omega(z)) * summary.s0(k)
        envelope = math.expm1(x) if x < 700 else math.inf
        if abs(value - z**k) > abs(z) ** k * envelope + ev.error_bound + slack:
            return False
    return True
