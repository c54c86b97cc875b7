"""Half-line Jacobi operators stored as finite deviations from the free operator.

The free operator has unit off-diagonals and zero diagonal.  A perturbed
operator keeps a map ``j -> (a_j, b_j, c_j)`` holding only the sites where the
row deviates from ``(1, 0, 1)``; everything else is implicit.  All indices are
1-based.  The boundary convention ``a_0 = c_0 = 1, b_0 = 0`` is hard-coded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

DEFAULT_TRIPLE = (1.0 + 0.0j, 0.0 + 0.0j, 1.0 + 0.0j)


class OperatorFormatError(ValueError):
    """Raised when an operator description file cannot be parsed."""


@dataclass(frozen=True)
class JacobiCoefficients:
    """Finitely supported deviation table for a half-line Jacobi operator.

    ``entries[j] = (a_j, b_j, c_j)`` for the stored sites; absent sites mean
    the free triple ``(1, 0, 1)``.  ``support_bound`` is the largest stored
    index (0 for the free operator).
    """

    entries: Mapping[int, tuple[complex, complex, complex]] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[int, tuple[complex, complex, complex]] = {}
        for j, triple in self.entries.items():
            if not isinstance(j, int) or j < 1:
                raise ValueError(f"site index must be a positive integer, got {j!r}")
            a, b, c = (complex(t) for t in triple)
            if a * c == 0:
                raise ValueError(f"a_j * c_j must be nonzero (site {j})")
            if (a, b, c) == DEFAULT_TRIPLE:
                continue
            clean[j] = (a, b, c)
        object.__setattr__(self, "entries", clean)

    @property
    def support_bound(self) -> int:
        return max(self.entries, default=0)

    def triple(self, j: int) -> tuple[complex, complex, complex]:
        """Row coefficients at site ``j >= 1`` (defaults off support)."""
        return self.entries.get(j, DEFAULT_TRIPLE)

    def a(self, j: int) -> complex:
        return 1.0 + 0.0j if j == 0 else self.triple(j)[0]

    def b(self, j: int) -> complex:
        return 0.0 + 0.0j if j == 0 else self.triple(j)[1]

    def c(self, j: int) -> complex:
        return 1.0 + 0.0j if j == 0 else self.triple(j)[2]

    def ac(self, j: int) -> complex:
        """The product ``a_j c_j`` (gauge invariant), with ``a_0 c_0 = 1``."""
        if j == 0:
            return 1.0 + 0.0j
        a, _, c = self.triple(j)
        return a * c

    def is_free(self) -> bool:
        return not self.entries

    def is_schroedinger(self) -> bool:
        """True when all off-diagonals are exactly 1 (pure diagonal potential)."""
        return all(a == 1 and c == 1 for a, _, c in self.entries.values())

    def __repr__(self) -> str:
        if not self.entries:
            return "JacobiCoefficients(free)"
        sites = ", ".join(str(j) for j in sorted(self.entries))
        return f"JacobiCoefficients(sites=[{sites}])"


@dataclass(frozen=True)
class PerturbationSummary:
    """Size functionals of the deviation ``J - J0``.

    ``delta[m-1]`` is ``|b_m| + |1 - a_(m-1) c_(m-1)|`` for ``m = 1..M+1``;
    ``Delta`` and ``Delta1`` are its plain and first-moment sums,
    ``trace_norm`` is the entrywise deviation sum, and ``s0``/``s1`` are the
    exact tail sums entering the Jost error bounds.
    """

    delta: tuple[float, ...]
    Delta: float
    Delta1: float
    trace_norm: float

    def s0(self, k: int) -> float:
        """Tail sum of delta past index ``k`` (nonincreasing, 0 for large k)."""
        if k < 0:
            k = 0
        return float(sum(self.delta[k:]))

    def s1(self, k: int) -> float:
        """First-moment tail sum past index ``k``."""
        if k < 0:
            k = 0
        return float(sum((m + 1) * d for m, d in enumerate(self.delta) if m >= k))


def delta_sequence(J: JacobiCoefficients) -> list[float]:
    """Per-site perturbation weights ``delta_m = |b_m| + |1 - a_(m-1)c_(m-1)|``.

    Returned for ``m = 1 .. M+1`` where ``M`` is the support bound; the extra
    slot carries the off-diagonal deviation at the last stored site (an
    ``a``/``c`` deviation at ``M`` shows up in ``delta_(M+1)``).  All later
    values vanish identically.
    """
    M = J.support_bound
    out = []
    for m in range(1, M + 2):
        out.append(abs(J.b(m)) + abs(1.0 - J.ac(m - 1)))
    return out


def summarize(J: JacobiCoefficients) -> PerturbationSummary:
    """Compute every perturbation size functional in one pass."""
    delta = tuple(delta_sequence(J))
    Delta = sum(abs(J.b(m)) + abs(1.0 - J.ac(m)) for m in range(1, J.support_bound + 1))
    Delta1 = sum(m * d for m, d in enumerate(delta, start=1))
    trace = 0.0
    for a, b, c in J.entries.values():
        trace += abs(1.0 - a) + abs(b) + abs(1.0 - c)
    # Delta over sites n and sum of delta_m agree exactly (index shift plus
    # the a_0 c_0 = 1 convention); keep the cheaper closed form above.
    return PerturbationSummary(delta=delta, Delta=float(Delta), Delta1=float(Delta1), trace_norm=float(trace))


def gauge_transform(J: JacobiCoefficients, r: Sequence[complex]) -> JacobiCoefficients:
    """Rescale rows by a diagonal similarity: ``a_j -> a_j r_j, c_j -> c_j / r_j``.

    The products ``a_j c_j`` are untouched, so the delta sequence and the
    discrete spectrum are invariant.  ``r`` is 1-based via position:
    ``r[0]`` acts on site 1.  Sites beyond ``len(r)`` keep ``r_j = 1``.
    """
    for j, rj in enumerate(r, start=1):
        if rj == 0:
            raise ValueError(f"gauge factor r_{j} must be nonzero")
    sites = set(J.entries) | set(range(1, len(r) + 1))
    new: dict[int, tuple[complex, complex, complex]] = {}
    for j in sites:
        a, b, c = J.triple(j)
        rj = complex(r[j - 1]) if j <= len(r) else 1.0 + 0.0j
        new[j] = (a * rj, b, c / rj)
    return JacobiCoefficients(new)


def stripped(J: JacobiCoefficients, k: int) -> JacobiCoefficients:
    """Drop the first ``k`` rows and columns; site ``j`` of the result is site ``j+k``."""
    if k < 0:
        raise ValueError("strip count must be nonnegative")
    if k == 0:
        return J
    return JacobiCoefficients({j - k: t for j, t in J.entries.items() if j > k})


def step_operator(n: int, h: complex) -> JacobiCoefficients:
    """Discrete Schroedinger operator with potential ``i*h`` on the first ``n`` sites."""
    if n < 1:
        raise ValueError("step length n must be >= 1")
    ih = 1j * complex(h)
    return JacobiCoefficients({j: (1.0 + 0.0j, ih, 1.0 + 0.0j) for j in range(1, n + 1)})


# --- operator description files -------------------------------------------

def from_json_dict(data: Mapping) -> JacobiCoefficients:
    """Build an operator from the JSON description format.

    Either ``{"entries": [{"j": 1, "b_re": 0, "b_im": 2, ...}, ...]}`` with
    omitted components defaulting to the free triple, or the shorthand
    ``{"step": {"n": 3, "h_re": 0.5, "h_im": 0.0}}``.
    """
    if not isinstance(data, Mapping):
        raise OperatorFormatError("operator description must be a JSON object")
    if "step" in data:
        step = data["step"]
        if not isinstance(step, Mapping) or "n" not in step:
            raise OperatorFormatError("step shorthand needs fields n, h_re[, h_im]")
        n = step["n"]
        if not isinstance(n, int) or n < 1:
            raise OperatorFormatError(f"step.n must be a positive integer, got {n!r}")
        h = complex(float(step.get("h_re", 0.0)), float(step.get("h_im", 0.0)))
        return step_operator(n, h)
    raw = data.get("entries", [])
    if not isinstance(raw, Iterable) or isinstance(raw, (str, bytes)):
        raise OperatorFormatError("entries must be an array of objects")
    entries: dict[int, tuple[complex, complex, complex]] = {}
    for pos, item in enumerate(raw):
        if not isinstance(item, Mapping) or "j" not in item:
            raise OperatorFormatError(f"entries[{pos}]: each entry needs an integer field j")
        j = item["j"]
        if not isinstance(j, int) or j < 1:
            raise OperatorFormatError(f"entries[{pos}]: j must be a positive integer, got {j!r}")
        if j in entries:
            raise OperatorFormatError(f"entries[{pos}]: duplicate site {j}")
        a = complex(_to_float(item, pos, "a_re", 1.0), _to_float(item, pos, "a_im", 0.0))
        b = complex(_to_float(item, pos, "b_re", 0.0), _to_float(item, pos, "b_im", 0.0))
        c = complex(_to_float(item, pos, "c_re", 1.0), _to_float(item, pos, "c_im", 0.0))
        if a * c == 0:
            raise OperatorFormatError(f"entries[{pos}]: a_j * c_j must be nonzero at site {j}")
        entries[j] = (a, b, c)
    return JacobiCoefficients(entries)


def _to_float(item: Mapping, pos: int, key: str, default: float) -> float:
    value = item.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise OperatorFormatError(f"entries[{pos}].{key}: expected a number, got {value!r}")
    return float(value)


def to_json_dict(J: JacobiCoefficients) -> dict:
    entries = []
    for j in sorted(J.entries):
        a, b, c = J.entries[j]
        entries.append(
            {
                "j": j,
                "a_re": a.real, "a_im": a.imag,
                "b_re": b.real, "b_im": b.imag,
                "c_re": c.real, "c_im": c.imag,
            }
        )
    return {"entries": entries}


def load_operator(path: str | Path) -> JacobiCoefficients:
    """Read an operator description file (JSON)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OperatorFormatError(f"cannot read operator file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OperatorFormatError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from exc
    return from_json_dict(data)


def save_operator(J: JacobiCoefficients, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_json_dict(J), indent=2) + "\n")
