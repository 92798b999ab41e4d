"""Pointwise calculus of weighted composition operators on discrete spaces.

Everything here reduces to sums over fibers ``phi^{-1}({x})``:

* ``h(x)``: Radon-Nikodym derivative of ``mu_w o phi^{-1}`` against ``mu``,
  i.e. the |w|^2-mass of the fiber of ``x`` divided by ``mass(x)``;
* ``E(f) o phi^{-1}(x)``: the |w|^2-weighted fiber average of ``f`` (0 when
  ``h(x) = 0``), and ``E(f)(z)`` is that average at ``x = phi(z)``;
* the Aluthge weight ``w_alpha = w * (h / h o phi)^(alpha/2)`` and the
  partial-isometry weight ``w / sqrt(h o phi)``.

:class:`PointwiseCalculus` evaluates these lazily and works for finite
:class:`~wco.space.PointSpace` objects as well as lazy gallery families whose
fibers may end in an infinite tail (summed through :mod:`wco.series`).  The
module-level functions materialize fields over ``space.points`` and realize
operator actions on finite spaces as numpy vectors in point order.
"""

from __future__ import annotations

from collections.abc import Mapping
from typing import Callable

import numpy as np

from ._numeric import INF, abs2, div, mul, power
from .series import classify_tail
from .space import Fiber, ScalarField, SpaceError, WeightFunction


class NotDenselyDefined(ValueError):
    """Raised when ``h`` is infinite at a point where a finite value is required."""


def _as_callable(f) -> Callable:
    if callable(f):
        return f
    if isinstance(f, Mapping):
        return f.__getitem__
    raise TypeError(f"expected a mapping or callable field, got {type(f).__name__}")


class PointwiseCalculus:
    """Cached pointwise evaluation of ``h``, fiber averages and derived weights."""

    def __init__(self, space):
        self.space = space
        self._h: dict = {}
        self._pullback_power: dict = {}

    # -- fiber sums -----------------------------------------------------------

    def fiber(self, x) -> Fiber:
        return self.space.fiber(x)

    def fiber_sum(self, x, term: Callable):
        """Sum ``term(y)`` over ``phi^{-1}({x})``; infinite tails are classified."""
        fib = self.fiber(x)
        total = 0
        for y in fib.head:
            total = total + term(y)
        if fib.tail is not None:
            tail = fib.tail
            verdict = classify_tail(lambda k: term(tail.point(k)), tail.start)
            total = INF if verdict.value == INF else total + verdict.value
        return total

    def weighted_mass(self, y):
        """|w(y)|^2 * mass(y), the mu_w-mass of the singleton {y}."""
        return abs2(self.space.weight_of(y)) * self.space.mass_of(y)

    # -- Radon-Nikodym derivative and conditional expectation ----------------

    def h(self, x):
        if x not in self._h:
            self._h[x] = div(self.fiber_sum(x, self.weighted_mass), self.space.mass_of(x))
        return self._h[x]

    def pullback(self, f: Callable, x):
        """(E(f) o phi^{-1})(x) for a nonnegative (or complex, finite-fiber) ``f``."""
        hx = self.h(x)
        if hx == 0:
            return 0
        if hx == INF:
            raise NotDenselyDefined(f"h is infinite at {x!r}; the fiber average is undefined")
        numer = self.fiber_sum(x, lambda y: mul(f(y), self.weighted_mass(y)))
        return div(numer, hx * self.space.mass_of(x)) if not isinstance(numer, complex) \
            else numer / (hx * self.space.mass_of(x))

    def cond_exp(self, f: Callable, z):
        """E(f)(z); zero when the fiber through z carries no mu_w-mass."""
        return self.pullback(f, self.space.phi_of(z))

    def pullback_h_power(self, alpha, x):
        """(E(h^alpha) o phi^{-1})(x), cached per exponent."""
        key = (alpha, x)
        if key not in self._pullback_power:
            self._pullback_power[key] = self.pullback(lambda y: power(self.h(y), alpha), x)
        return self._pullback_power[key]

    # -- derived weights -----------------------------------------------------

    def _finite_h(self, x):
        hx = self.h(x)
        if hx == INF:
            raise NotDenselyDefined(f"not densely defined: h is infinite at {x!r}")
        return hx

    def weight_alpha(self, alpha, x):
        """w_alpha(x) = w(x) * (h(x) / h(phi(x)))^(alpha/2), zero where w vanishes."""
        w = self.space.weight_of(x)
        hx = self._finite_h(x)
        hphi = self._finite_h(self.space.phi_of(x))
        if w == 0:
            return 0 * w
        # w(x) != 0 forces h(phi(x)) >= |w(x)|^2 mass(x) / mass(phi(x)) > 0
        return w * power(div(hx, hphi), _half(alpha))

    def tilde_weight(self, x):
        """w(x) / sqrt(h(phi(x))), zero where w vanishes."""
        w = self.space.weight_of(x)
        hphi = self._finite_h(self.space.phi_of(x))
        if w == 0:
            return 0 * w
        return w * power(div(1, hphi), _half(1))

    def aluthge_rn(self, alpha, x):
        """h_{phi, w_alpha}(x) = (E(h^alpha) o phi^{-1})(x) * h(x)^(1-alpha).

        At alpha = 1 the second factor is the indicator of {h > 0}; the
        pullback already vanishes where h does, so both readings agree.
        The value may be infinite (the transform is then not densely defined).
        """
        hx = self._finite_h(x)
        if hx == 0:
            return 0
        return mul(self.pullback_h_power(alpha, x), power(hx, 1 - alpha))


def _half(t):
    # keeps Fractions exact and floats as floats
    return t / 2


def calculus_of(space) -> PointwiseCalculus:
    """Shared evaluator for a space (memoized on the space object when possible)."""
    cached = getattr(space, "_wco_calculus", None)
    if cached is not None:
        return cached
    calc = PointwiseCalculus(space)
    try:
        object.__setattr__(space, "_wco_calculus", calc)
    except (AttributeError, TypeError):
        pass
    return calc


# -- reweighting --------------------------------------------------------------

class ReweightedView:
    """Lazy space with the points, masses and symbol of ``base`` and a new weight."""

    def __init__(self, base, weight_of: Callable, name: str = ""):
        self.base = base
        self.weight_of = weight_of
        self.name = name or getattr(base, "name", "")
        self.is_lazy = getattr(base, "is_lazy", False)

    @property
    def points(self):
        return self.base.points

    def mass_of(self, x):
        return self.base.mass_of(x)

    def phi_of(self, x):
        return self.base.phi_of(x)

    def fiber(self, x):
        return self.base.fiber(x)

    def __getattr__(self, item):
        # certificates etc. are deliberately not inherited: they describe the old weight
        if item in ("window_points", "boundary_phi"):
            return getattr(self.base, item)
        raise AttributeError(item)


def reweight(space, weight):
    """``space`` with weight replaced by ``weight`` (mapping or callable).

    Finite spaces give a new validated :class:`PointSpace`; lazy families give
    a :class:`ReweightedView`.
    """
    if not getattr(space, "is_lazy", False):
        return space.reweighted(weight)
    return ReweightedView(space, _as_callable(weight))


def aluthge_space(space, alpha):
    """The space re-weighted by ``w_alpha``."""
    if not getattr(space, "is_lazy", False):
        return space.reweighted(aluthge_weight(space, alpha))
    calc = calculus_of(space)
    return ReweightedView(space, lambda x: calc.weight_alpha(alpha, x))


# -- fields -------------------------------------------------------------------

def radon_nikodym(space) -> ScalarField:
    """h_{phi,w} at every (window) point."""
    calc = calculus_of(space)
    return ScalarField({x: calc.h(x) for x in space.points})


def cond_exp(space, f) -> ScalarField:
    """E_{phi,w}(f) for a nonnegative field ``f`` (mapping or callable)."""
    calc = calculus_of(space)
    f = _as_callable(f)
    return ScalarField({z: calc.cond_exp(f, z) for z in space.points})


def cond_exp_pullback(space, f) -> ScalarField:
    """E_{phi,w}(f) o phi^{-1}, set to 0 where h vanishes."""
    calc = calculus_of(space)
    f = _as_callable(f)
    return ScalarField({x: calc.pullback(f, x) for x in space.points})


def aluthge_weight(space, alpha) -> WeightFunction:
    """The weight w_alpha of the Aluthge transform, alpha in (0, 1]."""
    _check_alpha(alpha)
    calc = calculus_of(space)
    return WeightFunction({x: calc.weight_alpha(alpha, x) for x in space.points})


def aluthge_rn(space, alpha) -> ScalarField:
    """h_{phi, w_alpha} via the fiber formula; infinite values are kept."""
    _check_alpha(alpha)
    calc = calculus_of(space)
    return ScalarField({x: calc.aluthge_rn(alpha, x) for x in space.points})


def partial_isometry_weight(space) -> WeightFunction:
    """Weight of the partial isometry in the polar decomposition."""
    calc = calculus_of(space)
    return WeightFunction({x: calc.tilde_weight(x) for x in space.points})


def _check_alpha(alpha) -> None:
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha!r}")


# -- operator actions on finite spaces ---------------------------------------

def _finite(space):
    if getattr(space, "is_lazy", False):
        raise SpaceError("operator actions need a finite space; truncate the family first")
    return space


def _vector(space, f) -> np.ndarray:
    if isinstance(f, Mapping):
        f = [f[x] for x in space.points]
    vec = np.asarray(f, dtype=complex)
    if vec.shape != (space.dim,):
        raise ValueError(f"vector of shape {vec.shape} for a space of dimension {space.dim}")
    return vec


def _weights(space) -> np.ndarray:
    return np.array([complex(space.weight_of(x)) for x in space.points])


def _h_array(space) -> np.ndarray:
    calc = calculus_of(space)
    return np.array([float(calc._finite_h(x)) for x in space.points])


def _phi_index(space) -> np.ndarray:
    return np.array([space.index[space.phi_of(x)] for x in space.points], dtype=int)


def _divided_by_weight(space, vec: np.ndarray) -> np.ndarray:
    """f_w = chi_{w != 0} f / w."""
    w = _weights(space)
    out = np.zeros_like(vec)
    nz = w != 0
    out[nz] = vec[nz] / w[nz]
    return out


def _pullback_vector(space, vec: np.ndarray) -> np.ndarray:
    """Complex fiber averages E(f) o phi^{-1}, componentwise in re/im."""
    calc = calculus_of(space)
    idx = space.index
    return np.array([complex(calc.pullback(lambda y: complex(vec[idx[y]]), x)) for x in space.points])


def cond_exp_vector(space, f) -> np.ndarray:
    """E_{phi,w}(f) for a complex vector ``f``."""
    space = _finite(space)
    return _pullback_vector(space, _vector(space, f))[_phi_index(space)]


def apply_operator(space, f) -> np.ndarray:
    """(C f)(x) = w(x) f(phi(x))."""
    space = _finite(space)
    vec = _vector(space, f)
    return _weights(space) * vec[_phi_index(space)]


def apply_adjoint(space, f) -> np.ndarray:
    """C* f = h * (E(f_w) o phi^{-1})."""
    space = _finite(space)
    vec = _vector(space, f)
    return _h_array(space) * _pullback_vector(space, _divided_by_weight(space, vec))


def apply_modulus_power(space, p, f) -> np.ndarray:
    """|C|^p f = h^(p/2) f."""
    space = _finite(space)
    return _h_array(space) ** (p / 2) * _vector(space, f)


def apply_adjoint_modulus_power(space, p, f) -> np.ndarray:
    """|C*|^p f = w (h o phi)^(p/2) E(f_w)."""
    space = _finite(space)
    vec = _vector(space, f)
    phi = _phi_index(space)
    expect = _pullback_vector(space, _divided_by_weight(space, vec))[phi]
    return _weights(space) * _h_array(space)[phi] ** (p / 2) * expect


def projection(space, f) -> np.ndarray:
    """P f = w E(f_w), the range projection of the partial isometry."""
    space = _finite(space)
    vec = _vector(space, f)
    expect = _pullback_vector(space, _divided_by_weight(space, vec))[_phi_index(space)]
    return _weights(space) * expect


def action_matrix(space, action: Callable) -> np.ndarray:
    """Matrix of a linear action in the orthonormal basis chi_x / sqrt(mass(x)).

    Coordinates ``c`` of a function ``f`` are ``sqrt(mass) * f``.
    """
    space = _finite(space)
    scale = np.sqrt(np.array([float(space.mass_of(x)) for x in space.points]))
    cols = []
    for j in range(space.dim):
        e = np.zeros(space.dim, dtype=complex)
        e[j] = 1.0 / scale[j]
        cols.append(scale * np.asarray(action(space, e)))
    return np.column_stack(cols)
