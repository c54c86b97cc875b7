from __future__ import annotations

import cmath
import math
import random

import pytest

from jacobispec import (
    JacobiCoefficients,
    boundary_modulus_profile,
    determinant_bound_check,
    green_kernel,
    green_kernel_scaled,
    jost_backward,
    jost_function,
    jost_function_and_derivative,
    jost_volterra,
    omega,
    step_operator,
    summarize,
    t_tilde,
    volterra_bound_check,
)

from conftest import rand_disk_point, rand_jacobi


# --- kernels ----------------------------------------------------------------

def test_green_kernel_special_values():
    z = 0.4 - 0.3j
    assert green_kernel(5, 5, z) == 0
    assert green_kernel(5, 6, z) == pytest.approx(1.0)
    assert green_kernel(0, 2, z) == pytest.approx(z + 1.0 / z)
    assert green_kernel(7, 3, z) == 0


def test_green_kernel_rejects_poles():
    for z in (0.0, 1.0, -1.0):
        with pytest.raises(ValueError):
            green_kernel(0, 1, z)


def test_scaled_kernel_matches_raw():
    rng = random.Random(3)
    for _ in range(300):
        k = rng.randint(0, 20)
        m = k + rng.randint(1, 15)
        z = rand_disk_point(rng, 0.15, 0.95)
        raw = z ** (m - k) * green_kernel(k, m, z)
        poly = green_kernel_scaled(k, m, z)
        assert abs(raw - poly) <= 1e-11 * max(1.0, abs(poly))


def test_scaled_kernel_at_unit_points():
    # finite geometric sums: d terms of 1 at z = 1, alternating at z = -1
    assert green_kernel_scaled(0, 4, 1.0) == pytest.approx(4.0)
    assert green_kernel_scaled(0, 4, -1.0) == pytest.approx(-4.0)
    assert green_kernel_scaled(0, 3, -1.0) == pytest.approx(-3.0)


def _identity_residuals(k: int, m: int, z: complex) -> tuple[float, float]:
    """Both three-term kernel identities, normalised by the largest term."""
    lam = z + 1.0 / z
    delta = 1.0 if k == m else 0.0
    t1 = green_kernel(k, m - 1, z) + green_kernel(k, m + 1, z) - lam * green_kernel(k, m, z) - delta
    t2 = green_kernel(k - 1, m, z) + green_kernel(k + 1, m, z) - lam * green_kernel(k, m, z) - delta
    scale = max(
        1.0,
        abs(green_kernel(k, m - 1, z)), abs(green_kernel(k, m + 1, z)),
        abs(green_kernel(k - 1, m, z)), abs(green_kernel(k + 1, m, z)),
        abs(lam * green_kernel(k, m, z)),
    )
    return abs(t1) / scale, abs(t2) / scale


def test_kernel_identities():
    rng = random.Random(5)
    for _ in range(2000):
        k = rng.randint(0, 25)
        m = rng.randint(0, 25)
        z = rand_disk_point(rng, 0.1, 0.95)
        if abs(z * z - 1.0) < 0.05:
            continue
        r1, r2 = _identity_residuals(k, m, z)
        assert r1 <= 1e-12 and r2 <= 1e-12


def test_t_tilde_vanishing_and_edge_cases():
    J = JacobiCoefficients({2: (1, 1j, 1)})
    z = 0.3 + 0.5j
    # site without deviation content contributes nothing
    assert t_tilde(J, 0, 4, z) == 0
    # adjacent site: only the diagonal part survives
    assert t_tilde(J, 1, 2, z) == pytest.approx(-1j * z)
    with pytest.raises(ValueError):
        t_tilde(J, 2, 2, z)


def test_t_tilde_weight_bounds():
    rng = random.Random(7)
    for _ in range(300):
        J = rand_jacobi(rng, 8)
        s = summarize(J)
        k = rng.randint(0, 6)
        m = k + rng.randint(1, 6)
        z = rand_disk_point(rng, 0.1, 0.98)
        if abs(z * z - 1.0) < 1e-6:
            continue
        value = abs(t_tilde(J, k, m, z))
        delta_m = s.delta[m - 1] if m - 1 < len(s.delta) else 0.0
        assert value <= abs(omega(z)) * delta_m + 1e-12
        assert value <= abs(z) * m * delta_m + 1e-12


def test_t_tilde_specific_bound():
    J = JacobiCoefficients({3: (1, 0.7 - 0.2j, 1), 2: (1.1, 0, 0.8)})
    s = summarize(J)
    assert abs(t_tilde(J, 0, 3, 0.5)) <= (4.0 / 3.0) * s.delta[2] + 1e-12


# --- evaluators ---------------------------------------------------------------

def test_backward_free():
    z = 0.3 - 0.7j
    ev = jost_backward(JacobiCoefficients({}), z)
    assert ev.values == (1.0, z)
    assert ev.tail_start == 0 and ev.error_bound == 0.0
    assert ev.u(5) == z**5


def test_backward_rank_one_closed_form():
    rng = random.Random(11)
    for _ in range(50):
        v = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        z = rand_disk_point(rng)
        ev = jost_backward(JacobiCoefficients({1: (1, v, 1)}), z)
        assert ev.values[0] == pytest.approx(1.0 - v * z, rel=1e-13, abs=1e-13)


def test_backward_step_closed_form():
    # single-site imaginary step: u_0 = 1 - i h z
    z = 0.6 + 0.2j
    ev = jost_backward(step_operator(1, 0.8), z)
    assert ev.values[0] == pytest.approx(1.0 - 0.8j * z, rel=1e-13)


def test_backward_rejects_origin():
    with pytest.raises(ValueError):
        jost_backward(JacobiCoefficients({}), 0)


def test_volterra_free():
    z = 0.5 + 0.1j
    ev = jost_volterra(JacobiCoefficients({}), z, 1e-12)
    assert ev.values == (1.0, z)
    assert ev.error_bound == 0.0


def test_volterra_matches_backward():
    rng = random.Random(13)
    for _ in range(400):
        J = rand_jacobi(rng, 12)
        z = rand_disk_point(rng, 0.05, 0.95)
        vb = jost_backward(J, z)
        vv = jost_volterra(J, z, 1e-12)
        for k, (x, y) in enumerate(zip(vb.values, vv.values)):
            scale = max(abs(x), abs(z) ** k, 1e-30)
            assert abs(x - y) / scale <= 1e-11


def test_volterra_on_circle_and_at_corners():
    rng = random.Random(17)
    for z in (1.0, -1.0, cmath.exp(0.3j), cmath.exp(2.9j), 0.9995 + 0.02j):
        for _ in range(10):
            J = rand_jacobi(rng, 6, b_scale=0.5)
            ev = jost_volterra(J, z, 1e-11)
            assert volterra_bound_check(J, ev)
            # the solution solves the original recurrence
            lam = z + 1.0 / z
            for k in range(1, J.support_bound + 1):
                res = abs(ev.u(k - 1) + J.b(k) * ev.u(k) + J.ac(k) * ev.u(k + 1) - lam * ev.u(k))
                assert res <= 10 * max(ev.error_bound, 1e-11)


def test_volterra_bound_every_run():
    rng = random.Random(19)
    for _ in range(200):
        J = rand_jacobi(rng, 10)
        z = rand_disk_point(rng, 0.05, 0.999)
        assert volterra_bound_check(J, jost_volterra(J, z, 1e-12))


def test_volterra_uniqueness_fixed_point():
    # iterate u <- z^k + sum T(k,m) u_m from two different starts; both limits
    # must coincide, which is the uniqueness statement in testable form
    rng = random.Random(23)
    J = rand_jacobi(rng, 6)
    z = 0.4 - 0.25j
    M = J.support_bound

    def fixed_point(start):
        u = list(start)
        for _ in range(200):
            # the raw kernel through the scaled one: T(k,m) = T~(k,m) z^(k-m)
            new = [z**k + sum(t_tilde(J, k, m, z) * z ** (k - m) * u[m]
                              for m in range(k + 1, M + 2)) for k in range(M + 2)]
            if max(abs(a - b) for a, b in zip(new, u)) < 1e-14:
                break
            u = new
        return u

    base = fixed_point([z**k for k in range(M + 2)])
    shaken = fixed_point([z**k + complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for k in range(M + 2)])
    exact = jost_backward(J, z)
    for k in range(M + 2):
        assert abs(base[k] - shaken[k]) <= 1e-11
        assert abs(base[k] - exact.values[k]) <= 1e-11


def test_jost_function_continuation_at_origin():
    rng = random.Random(29)
    J = rand_jacobi(rng, 5)
    assert jost_function(J, 0) == 1.0
    previous = None
    for z in (1e-2, 1e-4, 1e-6, 1e-8):
        gap = abs(jost_function(J, z) - 1.0)
        if previous is not None:
            assert gap < previous
        previous = gap
    assert previous < 1e-7


def test_jost_function_free_identity():
    for z in (0.5, -0.3 + 0.2j, 0.9j):
        assert jost_function(JacobiCoefficients({}), z) == pytest.approx(1.0)


def test_jost_function_rank_one_zero():
    J = JacobiCoefficients({1: (1, 2j, 1)})
    assert jost_function(J, -0.5j) == pytest.approx(0.0, abs=1e-14)


def test_derivative_against_finite_differences():
    rng = random.Random(31)
    for _ in range(100):
        J = rand_jacobi(rng, 8)
        z = rand_disk_point(rng, 0.2, 0.9)
        _, der = jost_function_and_derivative(J, z)
        h = 1e-6
        fd = (jost_function(J, z + h) - jost_function(J, z - h)) / (2 * h)
        assert abs(der - fd) <= 1e-4 * max(1.0, abs(der))


def test_determinant_bounds_on_grid():
    rng = random.Random(37)
    for _ in range(20):
        J = rand_jacobi(rng, 8)
        for _ in range(200):
            z = rand_disk_point(rng, 0.02, 0.999)
            assert determinant_bound_check(J, z)


def test_boundary_modulus_profile():
    assert boundary_modulus_profile(JacobiCoefficients({}), 1.0) == pytest.approx([1.0] * 5)
    J = step_operator(3, 0.5)
    profile = boundary_modulus_profile(J, math.pi / 2, tail=5)
    assert len(profile) == 3 + 5 + 1
    assert all(v > 0 for v in profile)
    for v in profile[3:]:
        assert v == 1.0
    for theta in (0.0, math.pi):
        with pytest.raises(ValueError):
            boundary_modulus_profile(J, theta)
