"""Analytic upper bounds on the memory failure probability.

Counting argument: nontrivial paths start at points (n, k) on the front
wall, n = 0..(N-1)/2 in space and k = 0..T in time. Four of them have
length one and probability p each. From any other point a path has length
at least min(n + k, n + (T - k), N); there are at most 8^l paths of length l
and each lies in E + E_min with probability at most (2 sqrt(p(1-p)))^l.
Summing the geometric series gives powers of alpha = 16 sqrt(p(1-p)),
which converge only for alpha < 1.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Iterable

from scipy.optimize import brentq

P_VALID_MAX = 0.0039


def alpha(p: float) -> float:
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"p must lie in [0, 1/2], got {p}")
    return 16.0 * math.sqrt(p * (1.0 - p))


def _tail(a: float, l0: int) -> float:
    # sum_{l >= l0} a^l
    return a**l0 / (1.0 - a)


def _check_nt(N: int, T: int) -> None:
    if N < 3 or N % 2 == 0:
        raise ValueError(f"N must be odd and >= 3, got {N}")
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")


def pfail_finite_unsimplified(N: int, T: int, p: float) -> float | None:
    """Finite-size bound with the n = 1 corner terms written out separately."""
    _check_nt(N, T)
    a = alpha(p)
    if a >= 1.0:
        return None
    s = 2.0 * sum(_tail(a, min(1 + k, 1 + (T - k), N)) for k in range(1, T))
    for k in (0, T):
        n = 1
        s += _tail(a, min(n + 1 + k, n + 1 + (T - k), N))
    for n in range(2, (N - 1) // 2 + 1):
        for k in range(T + 1):
            s += _tail(a, min(n + k, n + (T - k), N))
    return 4.0 * p + s


def pfail_finite(N: int, T: int, p: float) -> float | None:
    """Finite (N, T) bound; None when alpha >= 1 and the series diverges."""
    _check_nt(N, T)
    a = alpha(p)
    if a >= 1.0:
        return None
    s = 2.0 * sum(_tail(a, min(1 + k, 1 + (T - k), N)) for k in range(1, T))
    s += 2.0 * _tail(a, min(2, N))
    for n in range(2, (N - 1) // 2 + 1):
        s += sum(_tail(a, min(n + k, n + (T - k), N)) for k in range(T + 1))
    return 4.0 * p + s


def _asym_alpha(p: float) -> float:
    a = alpha(p)
    if a >= 1.0:
        raise ValueError(f"bound diverges: alpha({p}) = {a:.5f} >= 1")
    return a


def pfail_phase_asymptotic(p: float) -> float:
    a = _asym_alpha(p)
    return 4.0 * p + 2.0 * (2.0 - a) ** 2 * a**2 / (1.0 - a) ** 3


def pfail_bit_asymptotic(p: float) -> float:
    a = _asym_alpha(p)
    return 10.0 * p + 2.0 * (3.0 - a) * (2.0 - a) * a**2 / (1.0 - a) ** 3


_WHICH: dict[str, Callable[[float], float]] = {
    "phase": pfail_phase_asymptotic,
    "bit": pfail_bit_asymptotic,
}


def _p_alpha_one() -> float:
    # alpha(p) = 1  <=>  p(1-p) = 1/256
    return (1.0 - math.sqrt(1.0 - 4.0 / 256.0)) / 2.0


def crossing_point(which: str, target: float = 0.5, tol: float = 1e-9) -> float:
    """p at which the asymptotic bound equals ``target``.

    The bounds increase monotonically from 0 at p = 0 and diverge as alpha
    approaches 1, so any positive target has exactly one crossing.
    """
    if which not in _WHICH:
        raise ValueError(f"which must be 'phase' or 'bit', got {which!r}")
    if not 0.0 < target < 1.0:
        raise ValueError(f"target must lie in (0, 1), got {target}")
    f = _WHICH[which]
    hi = _p_alpha_one() * (1.0 - 1e-12)
    if f(hi) < target:
        raise ValueError(f"target {target} unreachable while alpha < 1")
    p = brentq(lambda q: f(q) - target, 0.0, hi, xtol=1e-16, rtol=1e-15, maxiter=500)
    if abs(f(p) - target) >= tol:
        raise RuntimeError(f"root finder stopped at |f - target| = {abs(f(p) - target):.3g}")
    return p


@dataclass(frozen=True)
class BoundEvaluation:
    p: float
    alpha: float
    finite_bound: float | None
    phase_asymptotic: float | None
    bit_asymptotic: float | None
    valid: bool

    @classmethod
    def at(cls, p: float, finite: tuple[int, int] | None = None) -> "BoundEvaluation":
        a = alpha(p)
        valid = a < 1.0
        fin = pfail_finite(*finite, p) if finite else None
        return cls(
            p,
            a,
            fin,
            pfail_phase_asymptotic(p) if valid else None,
            pfail_bit_asymptotic(p) if valid else None,
            valid,
        )


def linspace(lo: float, hi: float, points: int) -> list[float]:
    if points < 1:
        raise ValueError("points must be >= 1")
    if points == 1:
        return [lo]
    return [lo + (hi - lo) * i / (points - 1) for i in range(points - 1)] + [hi]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(float(v))


def sweep_csv(ps: Iterable[float], finite: tuple[int, int] | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "alpha", "valid", "finite_bound", "phase_asymptotic", "bit_asymptotic"])
    for p in ps:
        e = BoundEvaluation.at(p, finite)
        w.writerow([_fmt(e.p), _fmt(e.alpha), _fmt(e.valid), _fmt(e.finite_bound),
                    _fmt(e.phase_asymptotic), _fmt(e.bit_asymptotic)])
    return buf.getvalue()
