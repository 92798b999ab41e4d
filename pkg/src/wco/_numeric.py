"""Extended-real arithmetic on [0, inf] with exact rational support.

Conventions used throughout the package: ``0 * inf = 0``, ``t / 0 = inf`` for
``t > 0`` and ``0 / 0 = 0``.  Values are plain Python numbers: ``int`` and
:class:`fractions.Fraction` stay exact as long as every operation allows it,
anything irrational silently degrades to ``float``.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from numbers import Number

INF = math.inf

EXACT_TOL = 1e-12
ORACLE_TOL = 1e-9
DIVERGENCE_THRESHOLD = 1e12


def tolerances() -> dict[str, float]:
    """Return the active tolerances, honouring the ``WCO_TOL`` override.

    ``WCO_TOL`` is either a single float (replaces the exact-form tolerance)
    or a comma separated list like ``exact=1e-10,oracle=1e-8``.
    """
    tols = {"exact": EXACT_TOL, "oracle": ORACLE_TOL}
    raw = os.environ.get("WCO_TOL", "").strip()
    if not raw:
        return tols
    items = [("exact", raw)] if "=" not in raw else [i.partition("=")[::2] for i in raw.split(",")]
    for key, value in items:
        key = key.strip()
        if key not in tols:
            raise ValueError(f"unknown tolerance key in WCO_TOL: {key!r}")
        try:
            tols[key] = float(value)
        except ValueError:
            raise ValueError(f"WCO_TOL value for {key!r} is not a number: {value!r}") from None
        if not tols[key] > 0:
            raise ValueError(f"WCO_TOL value for {key!r} must be positive")
    return tols


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def is_zero(x) -> bool:
    return x == 0


def abs2(w):
    """|w|^2, exact for rational input."""
    if isinstance(w, complex):
        return w.real * w.real + w.imag * w.imag
    return w * w


def mul(a, b):
    """Product with the convention 0 * inf = 0."""
    if a == 0 or b == 0:
        return 0
    return a * b


def div(a, b):
    """Quotient with t/0 = inf (t > 0) and 0/0 = 0."""
    if b == 0:
        return 0 if a == 0 else INF
    if a == INF:
        if b == INF:
            raise ArithmeticError("inf / inf is undefined")
        return INF
    if b == INF:
        return 0
    if is_exact(a) and is_exact(b):
        return Fraction(a) / b
    return a / b


def _iroot(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 2:
        return n
    r = int(round(n ** (1.0 / k))) if n.bit_length() < 1000 else 1 << (n.bit_length() // k)
    # Newton refinement handles large n where the float guess is poor
    while True:
        nr = ((k - 1) * r + n // r ** (k - 1)) // k
        if abs(nr - r) <= 1:
            break
        r = nr
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    return None


def _exact_power(x: Fraction, t: Fraction) -> Fraction | None:
    if t.denominator > 64:
        return None
    base = x ** t.numerator
    k = t.denominator
    if k == 1:
        return Fraction(base)
    num = _iroot(base.numerator, k)
    den = _iroot(base.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def power(x, t):
    """x ** t for x in [0, inf] and real t.

    0 ** t = 0 and inf ** t = inf for t > 0 (reversed for t < 0); x ** 0 = 1.
    Rational x with a rational exponent stays exact whenever the root is.
    """
    if t == 0:
        return 1
    if x == 0:
        return 0 if t > 0 else INF
    if x == INF:
        return INF if t > 0 else 0
    if x < 0:
        raise ValueError(f"power of a negative value: {x!r}")
    if is_exact(x) and isinstance(t, (int, float, Fraction)):
        ft = Fraction(t)
        r = _exact_power(Fraction(x), ft)
        if r is not None:
            return r
    return float(x) ** float(t)


def as_number(value, exact: bool = False):
    """Coerce a JSON-ish scalar into the working number type."""
    if exact:
        if isinstance(value, float):
            return Fraction(repr(value))
        return Fraction(value)
    return value


def finite(x) -> bool:
    if isinstance(x, complex):
        return math.isfinite(x.real) and math.isfinite(x.imag)
    if isinstance(x, Number):
        return math.isfinite(float(x)) if not is_exact(x) else True
    return False


def rel_close(a, b, tol: float) -> bool:
    """|a - b| <= tol * max(|a|, |b|), treating equal infinities as close."""
    if a == b:
        return True
    if a == INF or b == INF:
        return False
    return abs(a - b) <= tol * max(abs(a), abs(b))


def leq(a, b, tol: float) -> bool:
    """a <= b up to a relative slack tol (exact comparison when tol == 0)."""
    if a <= b:
        return True
    if b == INF:
        return True
    if a == INF:
        return False
    return a - b <= tol * max(abs(a), abs(b), 1e-300)


def to_json_number(x):
    """Serialize an extended real; inf becomes the string "inf"."""
    if x == INF:
        return "inf"
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else float(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x
