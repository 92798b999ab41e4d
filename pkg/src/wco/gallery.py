"""Countable example families with closed-form certificates.

A family behaves like a :class:`~wco.space.PointSpace` whose ``points`` are a
finite window of a countable set; fibers are produced on demand and may end
in an infinite tail.  Each family carries :class:`Certificate` objects
(closed forms that window computations must reproduce) and answers
``certified(check, **params)`` for properties that no finite window can
decide on its own.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable

import numpy as np

from ._numeric import INF, abs2, power, rel_close, to_json_number
from .calculus import calculus_of
from .properties import Status, Verdict, rn_linear_gaussian, stages_feasible
from .series import InconclusiveSeries, classify_tail
from .space import Fiber, FiberTail, SpaceError, format_label, truncate


@dataclass(frozen=True)
class Certificate:
    """A closed-form fact about a family.

    ``quantity`` names what the closed form reproduces: ``"h"``,
    ``"pullback"`` (E(h^alpha) o phi^{-1}), ``"weight_alpha"`` or ``"series"``.
    Series certificates give ``term``/``start`` and whether the sum converges.
    """

    name: str
    statement: str
    quantity: str
    closed_form: Callable | None = None
    applies: Callable | None = None
    alpha: Any = None
    term: Callable | None = None
    start: int = 1
    converges: bool | None = None
    reason: str = ""
    tolerance: float = 1e-12

    def verify(self, family) -> dict:
        if self.quantity == "series":
            return self._verify_series()
        calc = calculus_of(family)
        evaluate = {
            "h": calc.h,
            "pullback": lambda x: calc.pullback_h_power(self.alpha, x),
            "weight_alpha": lambda x: calc.weight_alpha(self.alpha, x),
        }[self.quantity]
        worst, checked = 0.0, 0
        for x in family.points:
            if self.applies is not None and not self.applies(x):
                continue
            got, want = evaluate(x), self.closed_form(x)
            checked += 1
            if got == want:
                continue
            if got == INF or want == INF:
                worst = INF
                continue
            err = abs(got - want) / max(abs(got), abs(want))
            worst = max(worst, float(err))
        return {"name": self.name, "statement": self.statement, "points": checked,
                "max_rel_error": worst, "ok": worst <= self.tolerance}

    def _verify_series(self) -> dict:
        try:
            verdict = classify_tail(self.term, self.start)
        except InconclusiveSeries as exc:
            return {"name": self.name, "statement": self.statement, "ok": False,
                    "reason": f"inconclusive: {exc}"}
        return {"name": self.name, "statement": self.statement,
                "ok": verdict.converges == self.converges, "converges": verdict.converges,
                "reason": verdict.reason, "declared_reason": self.reason,
                "value": to_json_number(verdict.value)}

    def to_json(self) -> dict:
        out = {"name": self.name, "statement": self.statement, "quantity": self.quantity}
        if self.alpha is not None:
            out["alpha"] = to_json_number(self.alpha)
        if self.quantity == "series":
            out["converges"] = self.converges
            out["reason"] = self.reason
        return out


def _certified_verdict(status: Status, certificate: str, constant=None, **details) -> Verdict:
    witness = {"point": None, "certificate": certificate} if status is Status.FAILS else None
    return Verdict(status, witness=witness, constant=constant, details={"certificate": certificate, **details})


class LazyFamily:
    """Countable instance evaluated on a window of ``window_points(window)``."""

    is_lazy = True
    is_analytic = False
    name = "family"
    default_window = 8

    def __init__(self, window: int | None = None):
        self.window = int(window) if window is not None else self.default_window
        if self.window < 1:
            raise ValueError("window must be positive")

    @cached_property
    def points(self) -> tuple:
        return tuple(self.window_points(self.window))

    def window_points(self, n: int) -> list:
        raise NotImplementedError

    def mass_of(self, x):
        return 1

    def with_window(self, n: int) -> "LazyFamily":
        twin = copy.copy(self)
        twin.__dict__.pop("points", None)
        twin.__dict__.pop("_wco_calculus", None)
        twin.window = int(n)
        return twin

    def truncate(self, window=None):
        return truncate(self, self.points if window is None else window, close=True)

    @property
    def certificates(self) -> list[Certificate]:
        return []

    def certified(self, check: str, **params) -> Verdict | None:
        return None

    def verify_certificates(self) -> list[dict]:
        return [c.verify(self) for c in self.certificates]

    def parameters(self) -> dict:
        return {}

    def to_json(self) -> dict:
        doc: dict = {"family": self.name, "window": self.window,
                     "parameters": {k: to_json_number(v) if not isinstance(v, str) else v
                                    for k, v in self.parameters().items()},
                     "certificates": [c.to_json() for c in self.certificates]}
        try:
            doc["space"] = self.truncate().to_json()
        except SpaceError as exc:
            doc["space"] = None
            doc["space_error"] = str(exc)
        return doc


# -- swap map ----------------------------------------------------------------

class SwapFamily(LazyFamily):
    """phi(2n) = 2n - 1 and phi(2n - 1) = 2n on N, counting measure.

    Fibers are singletons, so h(n) = |w(phi(n))|^2 and the fiber average of
    h^alpha at n is h^alpha(phi(n)) wherever h(n) != 0.
    """

    name = "swap"
    presets = ("serwis", "linear", "constant")

    def __init__(self, weights: str | Callable = "serwis", value=1, window=None,
                 w_sup=None, tail_at_least_one=None):
        super().__init__(window)
        self.value = value
        if callable(weights):
            self.preset = "custom"
            self._w = weights
            self.w_sup = INF if w_sup is None else w_sup
            self.tail_at_least_one = bool(tail_at_least_one)
        elif weights == "serwis":
            self.preset = weights
            self._w = lambda n: 0 if n == 1 else 1
            self.w_sup, self.tail_at_least_one = 1, True
        elif weights == "linear":
            self.preset = weights
            self._w = lambda n: n
            self.w_sup, self.tail_at_least_one = INF, True
        elif weights == "constant":
            self.preset = weights
            self._w = lambda n: value
            self.w_sup, self.tail_at_least_one = abs(value), abs(value) >= 1
        else:
            raise ValueError(f"unknown swap preset {weights!r}; choose from {self.presets}")

    def parameters(self) -> dict:
        out = {"weights": self.preset}
        if self.preset == "constant":
            out["value"] = self.value
        return out

    def window_points(self, n: int) -> list:
        n += n % 2
        return list(range(1, n + 1))

    def phi_of(self, x):
        return x - 1 if x % 2 == 0 else x + 1

    def weight_of(self, x):
        return self._w(x)

    def fiber(self, x) -> Fiber:
        return Fiber((self.phi_of(x),))

    @property
    def certificates(self) -> list[Certificate]:
        h = lambda n: abs2(self._w(self.phi_of(n)))  # noqa: E731
        return [
            Certificate("h", "h(n) = w(phi(n))^2", "h", closed_form=h),
            Certificate("pullback", "E(h^a) o phi^{-1} = h^a o phi on {h != 0}", "pullback",
                        closed_form=lambda n: power(h(self.phi_of(n)), Fraction(1, 2)),
                        applies=lambda n: h(n) != 0, alpha=Fraction(1, 2)),
        ]

    def certified(self, check: str, **params) -> Verdict | None:
        if check == "densely_defined":
            return _certified_verdict(Status.HOLDS, "singleton fibers")
        if check == "bounded":
            if self.w_sup == INF:
                return _certified_verdict(Status.FAILS, "sup w = inf, so h = w(phi(n))^2 is unbounded")
            return _certified_verdict(Status.HOLDS, "h <= (sup w)^2", constant=self.w_sup ** 2)
        if check in ("serwis_iv", "aluthge_closed"):
            if self.w_sup < INF or self.tail_at_least_one:
                # h^(1-a) / (1 + w(n)^(2a) h^(1-a)) <= w(n)^(-2a) <= 1 once w(n) >= 1
                calc = calculus_of(self)
                alpha = params["alpha"]
                head = [self._closed_ratio(calc, n, alpha) for n in (1, 2, 3, 4)]
                const = max([1] + [r for r in head if r is not None])
                if self.w_sup < INF and not self.tail_at_least_one:
                    const = max(const, self.w_sup ** (2 * (1 - alpha)))
                return _certified_verdict(Status.HOLDS, "w >= 1 eventually or w bounded", constant=const)
            return None
        if self.preset == "constant" and self.value != 0 and check in (
                "quasinormal", "p_hyponormal", "class_Q", "aluthge_fixed_point"):
            return _certified_verdict(Status.HOLDS, "h is constant")
        return None

    @staticmethod
    def _closed_ratio(calc, n, alpha):
        hx = calc.h(n)
        if hx == 0:
            return None
        lifted = power(hx, 1 - alpha)
        return lifted / (1 + calc.pullback_h_power(alpha, n) * lifted)


# -- grid tree ----------------------------------------------------------------

def _reciprocal(n: int) -> Fraction:
    return Fraction(1, n)


class GridTreeFamily(LazyFamily):
    """Rooted tree on N x N: phi(n, m + 1) = (n, m), phi(n + 1, 1) = (n, 1), phi(1, 1) = (1, 1).

    Weights w(n, 1) = a_n, w(n, 2) = a_{n+1} and 1 elsewhere.  The first
    column is a chain down to the root (1, 1), which maps to itself.
    """

    name = "grid_tree"
    default_window = 4

    def __init__(self, a_seq: Callable[[int], Any] = _reciprocal, window=None, cluster_at_zero=True):
        super().__init__(window)
        self.a = a_seq
        self.cluster_at_zero = cluster_at_zero

    def parameters(self) -> dict:
        return {"a": "1/n" if self.a is _reciprocal else "custom"}

    def window_points(self, n: int) -> list:
        return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]

    def phi_of(self, x):
        n, m = x
        if m > 1:
            return (n, m - 1)
        return (n - 1, 1) if n > 1 else (1, 1)

    def weight_of(self, x):
        n, m = x
        if m == 1:
            return self.a(n)
        if m == 2:
            return self.a(n + 1)
        return 1

    def fiber(self, x) -> Fiber:
        n, m = x
        pre = []
        if x == (1, 1):
            pre.append((1, 1))
        pre.append((n, m + 1))
        if m == 1:
            pre.append((n + 1, 1))
        return Fiber(tuple(pre))

    def h_closed(self, x):
        n, m = x
        a = self.a
        if m >= 2:
            return 1
        if n == 1:
            return a(1) ** 2 + 2 * a(2) ** 2
        return 2 * a(n + 1) ** 2

    def pullback_closed(self, x, alpha):
        n, m = x
        a = self.a
        if m >= 2:
            return 1
        if n >= 2:
            # (1 + 2^a a_{n+2}^{2a}) / 2
            return (1 + power(2 * a(n + 2) ** 2, alpha)) / 2
        root = a(1) ** 2 + 2 * a(2) ** 2
        top = a(1) ** 2 * power(root, alpha) + a(2) ** 2 + a(2) ** 2 * power(2 * a(3) ** 2, alpha)
        return top / root

    @property
    def certificates(self) -> list[Certificate]:
        out = [Certificate("h", "h(1,1) = a_1^2 + 2 a_2^2, h(n,1) = 2 a_{n+1}^2 (n >= 2), h(n,m) = 1 (m >= 2)",
                           "h", closed_form=self.h_closed)]
        for alpha in (Fraction(1, 4), Fraction(1, 2), 1):
            out.append(Certificate(
                f"pullback[{alpha}]",
                "E(h^a) o phi^{-1}(n,1) = (1 + 2^a a_{n+2}^(2a)) / 2 for n >= 2, 1 off the root row",
                "pullback", closed_form=lambda x, a=alpha: self.pullback_closed(x, a), alpha=alpha,
                tolerance=1e-12))
        return out

    def certified(self, check: str, **params) -> Verdict | None:
        if check == "densely_defined":
            return _certified_verdict(Status.HOLDS, "finite fibers")
        if check == "serwis_i" and self.cluster_at_zero:
            return _certified_verdict(Status.FAILS, "0 is a cluster point of a_n and h(n,1) = 2 a_{n+1}^2")
        if check == "serwis_ii":
            alpha = params["alpha"]
            at_root = self.pullback_closed((1, 1), alpha)
            return _certified_verdict(Status.HOLDS, "(1 + 2^a a^(2a)) / 2 >= 1/2 off the root",
                                      constant=min(Fraction(1, 2), at_root))
        if check == "serwis_iii":
            alpha = params["alpha"]
            at_root = self.pullback_closed((1, 1), alpha)
            return _certified_verdict(Status.HOLDS, "reciprocal of the (ii) constant",
                                      constant=max(2, 1 / at_root))
        if check in ("serwis_iv", "aluthge_closed"):
            alpha = params["alpha"]
            at_root = self.pullback_closed((1, 1), alpha)
            return _certified_verdict(Status.HOLDS, "implied by (iii)", constant=max(2, 1 / at_root))
        return None


# -- Example with a densely defined transform of a non-densely-defined square --

class BudaFamily(LazyFamily):
    """X = Z_+ together with N x N, counting measure.

    phi(k - 1) = k on the chain, phi(k, 1) = 0, phi(m, n) = (m, n - 1) for n >= 2.
    w(k, 1) = 1/k, w(k, 2) = sqrt(k), 1 elsewhere.  The fiber of 0 is the
    infinite set {(k, 1)}.  Truncation turns the last chain point into a
    fixed point.
    """

    name = "buda"
    default_window = 4

    def parameters(self) -> dict:
        return {}

    def window_points(self, n: int) -> list:
        return list(range(n + 2)) + [(k, m) for k in range(1, n + 1) for m in range(1, n + 1)]

    def phi_of(self, x):
        if isinstance(x, tuple):
            k, m = x
            return 0 if m == 1 else (k, m - 1)
        return x + 1

    def boundary_phi(self, x, members):
        if not isinstance(x, tuple):
            return x
        raise SpaceError(f"window not closed under phi at {x!r}")

    def weight_of(self, x):
        if isinstance(x, tuple):
            k, m = x
            if m == 1:
                return 1 / k
            if m == 2:
                return math.sqrt(k)
        return 1

    def fiber(self, x) -> Fiber:
        if isinstance(x, tuple):
            k, m = x
            return Fiber(((k, m + 1),))
        if x == 0:
            return Fiber((), FiberTail(lambda k: (k, 1), 1, "{(k, 1) : k >= 1}"))
        return Fiber((x - 1,))

    def h_closed(self, x):
        if isinstance(x, tuple):
            k, m = x
            return k if m == 1 else 1
        return math.pi ** 2 / 6 if x == 0 else 1

    @property
    def certificates(self) -> list[Certificate]:
        return [
            Certificate("h", "h(0) = pi^2/6, h(k,1) = k, h = 1 elsewhere", "h",
                        closed_form=self.h_closed, tolerance=1e-7),
            Certificate("sum w(k,1)^2", "sum 1/k^2 converges", "series",
                        term=lambda k: 1 / k ** 2, converges=True, reason="p-series"),
            Certificate("sum w(k,1)^2 w(k,2)^(2a), a = 1/2", "sum k^(a-2) converges for a < 1", "series",
                        term=lambda k: k ** -1.5, converges=True, reason="p-series"),
            Certificate("sum w(k,1)^2 w(k,2)^2", "sum 1/k diverges", "series",
                        term=lambda k: 1 / k, converges=False, reason="divergent-by-comparison"),
        ]

    def certified(self, check: str, **params) -> Verdict | None:
        if check == "densely_defined":
            return _certified_verdict(Status.HOLDS, "sum 1/k^2 converges, other fibers are singletons")
        return None


# -- bilateral weighted shift -----------------------------------------------

class BilateralFamily(LazyFamily):
    """X = Z, phi(n) = n - 1, w(n) = scale * base^n, counting measure.

    h(n) = |w(n + 1)|^2 and the fiber average is the identity on the support.
    Windows {-N..N} are not phi-closed, so the family cannot be truncated.
    """

    name = "bilateral"
    default_window = 64

    def __init__(self, base=2, scale=1, window=None):
        super().__init__(window)
        if base == 0:
            raise ValueError("base must be nonzero")
        # integer parameters become Fractions so that negative powers stay exact
        self.base = Fraction(base) if isinstance(base, int) else base
        self.scale = Fraction(scale) if isinstance(scale, int) else scale

    def parameters(self) -> dict:
        return {"base": self.base, "scale": self.scale}

    def window_points(self, n: int) -> list:
        return list(range(-n, n + 1))

    def phi_of(self, x):
        return x - 1

    def weight_of(self, x):
        return self.scale * self.base ** x

    def fiber(self, x) -> Fiber:
        return Fiber((x + 1,))

    def h_closed(self, x):
        return abs2(self.scale) * abs2(self.base) ** (x + 1)

    def aluthge_family(self, alpha) -> "BilateralFamily":
        """w_alpha(n) = scale |base|^alpha base^n."""
        return BilateralFamily(self.base, self.scale * power(abs2(self.base), alpha / 2), self.window)

    @property
    def certificates(self) -> list[Certificate]:
        return [
            Certificate("h", "h(n) = |scale|^2 |base|^(2(n+1))", "h", closed_form=self.h_closed),
            Certificate("w_alpha", "w_a(n) = scale |base|^a base^n", "weight_alpha", alpha=Fraction(1, 2),
                        closed_form=lambda x: self.aluthge_family(Fraction(1, 2)).weight_of(x)),
        ]

    def certified(self, check: str, **params) -> Verdict | None:
        b = abs2(self.base)
        if check == "densely_defined":
            return _certified_verdict(Status.HOLDS, "singleton fibers")
        if self.scale == 0:
            if check == "bounded":
                return _certified_verdict(Status.HOLDS, "zero weight", constant=0)
            return _certified_verdict(Status.HOLDS, "zero weight: every condition on supp w is vacuous")
        if check == "bounded":
            if b == 1:
                return _certified_verdict(Status.HOLDS, "h is constant", constant=abs2(self.scale))
            return _certified_verdict(Status.FAILS, "h grows geometrically in one direction")
        if check in ("p_hyponormal", "class_Q"):
            status = Status.HOLDS if b >= 1 else Status.FAILS
            return _certified_verdict(status, "E(h^p o phi / h^p) = |base|^(-2p), constant in n")
        if check in ("quasinormal", "aluthge_fixed_point"):
            status = Status.HOLDS if b == 1 else Status.FAILS
            return _certified_verdict(status, "h(n - 1) / h(n) = |base|^(-2)")
        return None


# -- fan with a divergent fiber ----------------------------------------------

class FanFamily(LazyFamily):
    """Point 0 absorbs every k >= 1 (and itself), all weights 1: h(0) is infinite."""

    name = "fan"

    def window_points(self, n: int) -> list:
        return list(range(n + 1))

    def phi_of(self, x):
        return 0

    def weight_of(self, x):
        return 1

    def fiber(self, x) -> Fiber:
        if x == 0:
            return Fiber((0,), FiberTail(lambda k: k, 1, "{k : k >= 1}"))
        return Fiber(())

    def boundary_phi(self, x, members):
        return 0

    @property
    def certificates(self) -> list[Certificate]:
        return [Certificate("sum over the fiber of 0", "sum of 1 over N diverges", "series",
                            term=lambda k: 1, converges=False, reason="divergent-by-comparison")]


# -- linear maps on R^2 with a Gaussian-type density ------------------------

class LinearGaussianFamily:
    """Linear phi on R^2 with mu = rho(|x|^2) dx and w = 1.

    ``involutive=False`` gives phi(x1, x2) = (theta x2, x1); ``involutive=True``
    gives phi(x1, x2) = (theta x2, x1 / theta), which squares to the identity.
    Everything is closed form: no point space is built.
    """

    is_lazy = True
    is_analytic = True
    name = "linear_gaussian"

    def __init__(self, theta=Fraction(1, 2), rho="exp", involutive=False):
        if not (0 < theta < INF) or theta == 1:
            raise ValueError("theta must lie in (0, inf) and differ from 1")
        self.theta = theta
        self.rho = rho
        self.involutive = involutive

    def parameters(self) -> dict:
        return {"theta": self.theta, "rho": self.rho if isinstance(self.rho, str) else list(self.rho),
                "involutive": self.involutive}

    @property
    def phi_matrix(self) -> np.ndarray:
        t = float(self.theta)
        return np.array([[0.0, t], [1.0 / t, 0.0]]) if self.involutive else np.array([[0.0, t], [1.0, 0.0]])

    @property
    def inverse_norm(self) -> float:
        return float(np.linalg.norm(np.linalg.inv(self.phi_matrix), 2))

    def rn(self, x, log: bool = False):
        return rn_linear_gaussian(self.phi_matrix, self.rho, x, log=log)

    def stages(self, alpha) -> tuple[bool, bool]:
        return stages_feasible(alpha, self.theta)

    def transform_exponent(self, alpha, x) -> Fraction:
        """Exponent whose sign decides h_{w_a} o phi <= h_{w_a} at x (exp density, non-involutive map)."""
        theta = Fraction(self.theta) if not isinstance(self.theta, float) else Fraction(repr(self.theta))
        alpha = Fraction(alpha) if not isinstance(alpha, float) else Fraction(repr(alpha))
        x1, x2 = (Fraction(c) if not isinstance(c, float) else Fraction(repr(c)) for c in x)

        def sq(v):
            return v[0] * v[0] + v[1] * v[1]

        forward = (theta * x2, x1)
        back = (x2, x1 / theta)
        back2 = (x1 / theta, x2 / theta)
        return ((alpha - 1) * sq(forward) + (2 - 3 * alpha) * sq((x1, x2))
                + (3 * alpha - 1) * sq(back) - alpha * sq(back2))

    def transform_hyponormal(self, alpha, samples=None) -> Verdict:
        """Hyponormality of the alpha-transform from the exponent on a sample grid.

        The verdict is cross-checked against the (alpha, theta) inequalities.
        """
        if self.involutive or self.rho != "exp":
            raise ValueError("closed form available for the exp density and the non-involutive map")
        if samples is None:
            ticks = [Fraction(k, 2) for k in range(-6, 7)]
            samples = [(a, b) for a in ticks for b in ticks]
        worst, where = None, None
        for x in samples:
            e = self.transform_exponent(alpha, x)
            if worst is None or e > worst:
                worst, where = e, x
        stages = self.stages(alpha)
        details = {"stages": list(stages), "max_exponent": float(worst), "samples": len(samples)}
        if worst > 0:
            v = Verdict(Status.FAILS, witness={"point": ",".join(str(c) for c in where),
                                               "exponent": float(worst)}, details=details)
        else:
            v = Verdict(Status.HOLDS, details=details)
        details["agrees_with_stages"] = (v.holds == all(stages))
        return v

    def certified(self, check: str, **params) -> Verdict | None:
        if check == "densely_defined":
            return _certified_verdict(Status.HOLDS, "h is finite and continuous")
        det = abs(float(np.linalg.det(self.phi_matrix)))
        norm = self.inverse_norm
        if check == "bounded":
            if self.rho == "exp":
                if norm <= 1:
                    return _certified_verdict(Status.HOLDS, "|phi^{-1}| <= 1", constant=1 / det)
                return _certified_verdict(Status.FAILS, "|phi^{-1}| > 1 with rho = exp")
            degree = max(k for k, c in enumerate(self.rho) if c)
            return _certified_verdict(Status.HOLDS, "rho is a polynomial (constant is an upper bound)",
                                      constant=max(1.0, norm ** (2 * degree)) / det)
        if check == "aluthge_closed" and self.involutive and params.get("alpha") == Fraction(1, 2) \
                and self.rho == "exp":
            # E(h^(1/2)) o phi^{-1} h^(1/2) = 1 / |det phi|, so the ratio is h^(1/2) / (1 + 1/|det|)
            if norm <= 1:
                return _certified_verdict(Status.HOLDS, "h bounded", constant=det ** -0.5 / (1 + 1 / det))
            return self._unbounded_ratio_witness(det)
        return None

    def _unbounded_ratio_witness(self, det) -> Verdict:
        _, _, vh = np.linalg.svd(np.linalg.inv(self.phi_matrix))
        direction = vh[0]
        t = 1.0
        while True:
            x = t * direction
            log_ratio = 0.5 * self.rn(x, log=True) - math.log(1 + 1 / det)
            if log_ratio > math.log(1e12) or t > 1e6:
                break
            t *= 2
        return Verdict(Status.FAILS, witness={"point": f"{x[0]:.6g},{x[1]:.6g}", "log_ratio": log_ratio},
                       details={"certificate": "E(h^(1/2)) o phi^{-1} h^(1/2) = 1/|det phi| and h is unbounded"})

    def to_json(self) -> dict:
        return {"family": self.name, "parameters": {k: to_json_number(v) if not isinstance(v, (str, list, bool))
                                                     else v for k, v in self.parameters().items()},
                "certificates": [{"name": "transform", "statement":
                                  "the alpha-transform is hyponormal iff both (alpha, theta) inequalities hold"}],
                "space": None}


# -- registry -----------------------------------------------------------------

def _parse_value(text: str):
    text = text.strip()
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return Fraction(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def swap_family(w_seq="serwis", window=None, **kw) -> SwapFamily:
    return SwapFamily(w_seq, window=window, **kw)


def grid_tree_family(a_seq=_reciprocal, window=None, **kw) -> GridTreeFamily:
    return GridTreeFamily(a_seq, window=window, **kw)


def buda_family(window=None) -> BudaFamily:
    return BudaFamily(window)


def bilateral_shift_family(base=2, scale=1, window=None) -> BilateralFamily:
    return BilateralFamily(base, scale, window)


def fan_family(window=None) -> FanFamily:
    return FanFamily(window)


def linear_gaussian_family(theta=Fraction(1, 2), rho="exp", involutive=False) -> LinearGaussianFamily:
    return LinearGaussianFamily(theta, rho, involutive)


FAMILIES = {
    "swap": (SwapFamily, "phi swaps 2n-1 and 2n; params: weights=serwis|linear|constant, value"),
    "grid_tree": (GridTreeFamily, "rooted tree on N x N with a_n = 1/n"),
    "buda": (BudaFamily, "chain plus N x N with an infinite fiber at 0"),
    "bilateral": (BilateralFamily, "bilateral weighted shift on Z; params: base, scale"),
    "fan": (FanFamily, "every point maps to 0 (divergent fiber)"),
    "linear_gaussian": (LinearGaussianFamily, "linear map on R^2 with exp density; params: theta, involutive"),
}


def build_family(name: str, params: dict | None = None, window: int | None = None):
    """Instantiate a registered family from string parameters."""
    if name not in FAMILIES:
        raise KeyError(f"unknown family {name!r}; known: {sorted(FAMILIES)}")
    cls = FAMILIES[name][0]
    kwargs = {k: _parse_value(v) if isinstance(v, str) else v for k, v in (params or {}).items()}
    if cls is LinearGaussianFamily:
        if window is not None:
            kwargs.pop("window", None)
        return cls(**kwargs)
    if window is not None:
        kwargs["window"] = window
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {name}: {exc}") from exc


def list_families() -> list[dict]:
    return [{"name": k, "description": v[1]} for k, v in FAMILIES.items()]


__all__ = [
    "BilateralFamily", "BudaFamily", "Certificate", "FanFamily", "GridTreeFamily", "LazyFamily",
    "LinearGaussianFamily", "SwapFamily", "bilateral_shift_family", "buda_family", "build_family",
    "fan_family", "grid_tree_family", "linear_gaussian_family", "list_families", "swap_family",
    "format_label",
]
