"""Convergence classification for the infinite tails of lazy fibers.

A tail is a sequence of nonnegative terms ``t(k)``, ``k >= start``.  The sum is
decided by partial sums up to two window sizes plus a local power-law
exponent read off from terms at doubling indices past the window.  Exponents
stably above one certify convergence (p-series comparison, with an integral
bound for the remainder); exponents at or below one certify divergence by
comparison with the harmonic series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from ._numeric import DIVERGENCE_THRESHOLD, INF

WINDOWS = (1_000, 10_000)
EXPONENT_MARGIN = 1e-3


class InconclusiveSeries(ArithmeticError):
    """Raised when a tail sum cannot be certified either way."""


@dataclass(frozen=True)
class SeriesVerdict:
    value: float
    converges: bool
    reason: str  # "p-series" | "geometric" | "finite-support" | "divergent-by-comparison" | "threshold"
    exponent: float | None = None


NEGLIGIBLE = 1e-290


def _local_exponents(term: Callable[[int], float], base: int) -> list[float] | None:
    samples = [float(term(base * 2 ** j)) for j in range(4)]
    if any(s == INF for s in samples):
        return [-INF]
    if all(s <= NEGLIGIBLE for s in samples) and all(s >= 0 for s in samples):
        # zero or underflowing terms: nothing left to sum at double precision
        return None
    if any(s <= 0 for s in samples):
        return []
    return [math.log2(samples[j] / samples[j + 1]) for j in range(3)]


def classify_tail(term: Callable[[int], float], start: int = 1) -> SeriesVerdict:
    """Sum ``term(k)`` for ``k >= start`` or certify divergence.

    Raises :class:`InconclusiveSeries` when the sampled exponents disagree
    between the two windows or straddle the critical value one.
    """
    partial = 0.0
    sums = {}
    last = WINDOWS[-1]
    for k in range(start, last + 1):
        t = float(term(k))
        if t == INF:
            return SeriesVerdict(INF, False, "divergent-by-comparison")
        partial += t
        if partial > DIVERGENCE_THRESHOLD:
            return SeriesVerdict(INF, False, "threshold")
        if k in WINDOWS:
            sums[k] = partial

    verdicts = []
    for window in WINDOWS:
        q = _local_exponents(term, window)
        if q is None:
            verdicts.append(("finite-support", None))
        elif not q:
            raise InconclusiveSeries("tail terms vanish irregularly")
        elif q == [-INF]:
            verdicts.append(("divergent-by-comparison", None))
        elif min(q) > 1 + EXPONENT_MARGIN:
            if q[-1] > 1.5 * q[0]:
                verdicts.append(("geometric", q[-1]))
            elif max(q) - min(q) <= EXPONENT_MARGIN:
                verdicts.append(("p-series", q[-1]))
            else:
                raise InconclusiveSeries(f"tail exponents {q} drift; not a p-series")
        elif max(q) <= 1 + EXPONENT_MARGIN and max(q) - min(q) <= EXPONENT_MARGIN or max(q) < 1 - EXPONENT_MARGIN:
            verdicts.append(("divergent-by-comparison", q[-1]))
        else:
            raise InconclusiveSeries(f"tail exponents {q} near the critical value 1")

    kinds = {v[0] for v in verdicts}
    converging = {"p-series", "geometric", "finite-support"}
    if kinds <= converging:
        exps = [q for kind, q in verdicts if kind == "p-series"]
        if len(exps) == 2 and abs(exps[0] - exps[1]) > EXPONENT_MARGIN:
            raise InconclusiveSeries(f"p-series exponents differ between windows: {exps}")
        reason, q = verdicts[-1]
        remainder = 0.0
        if reason == "p-series":
            # integral bound: sum_{k > K} C k^-q <= t(K) K / (q - 1)
            remainder = float(term(last)) * last / (q - 1)
        elif reason == "geometric":
            r = float(term(last + 1)) / float(term(last)) if float(term(last)) else 0.0
            remainder = float(term(last)) * r / (1 - r) if r < 1 else 0.0
        return SeriesVerdict(sums[last] + remainder, True, reason, q)
    if kinds == {"divergent-by-comparison"}:
        return SeriesVerdict(INF, False, "divergent-by-comparison", verdicts[-1][1])
    raise InconclusiveSeries(f"window verdicts disagree: {sorted(kinds)}")
