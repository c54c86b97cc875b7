"""Shared helpers: seeded random operators and sampling utilities."""

from __future__ import annotations

import cmath
import math
import random

from jacobispec import JacobiCoefficients


def rand_jacobi(rng: random.Random, max_support: int, b_scale: float = 1.0,
                offdiag_scale: float = 0.35, density: float = 0.8) -> JacobiCoefficients:
    """Random finitely supported operator with well-posed rows."""
    M = rng.randint(1, max_support)
    entries = {}
    for j in range(1, M + 1):
        if rng.random() > density:
            continue
        a = 1.0 + complex(rng.uniform(-offdiag_scale, offdiag_scale),
                          rng.uniform(-offdiag_scale, offdiag_scale))
        b = complex(rng.uniform(-b_scale, b_scale), rng.uniform(-b_scale, b_scale))
        c = 1.0 + complex(rng.uniform(-offdiag_scale, offdiag_scale),
                          rng.uniform(-offdiag_scale, offdiag_scale))
        entries[j] = (a, b, c)
    if not entries:
        entries[1] = (1.0, complex(rng.uniform(-b_scale, b_scale), 0.0), 1.0)
    return JacobiCoefficients(entries)


def rand_small_delta1(rng: random.Random, max_support: int, margin: float = 0.9) -> JacobiCoefficients:
    """Random operator rescaled so the first-moment sum stays below log 2."""
    from jacobispec import summarize

    J = rand_jacobi(rng, max_support, b_scale=0.5, offdiag_scale=0.2)
    s = summarize(J)
    if s.Delta1 < margin * math.log(2.0):
        return J
    f = margin * math.log(2.0) / s.Delta1
    entries = {j: (1.0 + (a - 1.0) * f, b * f, 1.0 + (c - 1.0) * f)
               for j, (a, b, c) in J.entries.items()}
    return JacobiCoefficients(entries)


def rand_disk_point(rng: random.Random, r_lo: float = 0.05, r_hi: float = 0.95) -> complex:
    r = rng.uniform(r_lo, r_hi)
    return r * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi))


def rand_gauge(rng: random.Random, length: int) -> list[complex]:
    return [cmath.exp(complex(rng.uniform(-0.7, 0.7), rng.uniform(0.0, 2.0 * math.pi)))
            for _ in range(length)]
