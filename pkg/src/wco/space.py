"""Discrete measure spaces carrying a self-map and a weight.

The sigma-algebra is always the power set of the (countable) point set, so
"almost everywhere" statements become pointwise statements: a.e. [mu] means
at every point (all masses are positive) and a.e. [mu_w] means at every point
where the weight does not vanish.

Two kinds of spaces share one accessor protocol (``mass_of``, ``phi_of``,
``weight_of``, ``fiber`` and ``points``):

* :class:`PointSpace` - finite, validated, immutable;
* lazy families from :mod:`wco.gallery` - countable, evaluated on a window of
  points, whose fibers may end in an infinite :class:`FiberTail`.
"""

from __future__ import annotations

import json
import math
from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Any, Callable

from ._numeric import INF, abs2, as_number, finite, to_json_number


class SpaceError(ValueError):
    """Invalid space construction or input document."""


@dataclass(frozen=True)
class FiberTail:
    """Infinite remainder of a fiber, enumerated as ``point(k)`` for ``k >= start``."""

    point: Callable[[int], Hashable]
    start: int = 1
    description: str = ""


@dataclass(frozen=True)
class Fiber:
    head: tuple
    tail: FiberTail | None = None

    @property
    def is_finite(self) -> bool:
        return self.tail is None


@dataclass(frozen=True)
class FiberIndex:
    """Materialized preimages ``phi^{-1}({x})`` of a finite space, in point order."""

    preimages: Mapping[Hashable, tuple]

    def __getitem__(self, x) -> tuple:
        return self.preimages[x]

    def __eq__(self, other) -> bool:
        return isinstance(other, FiberIndex) and dict(self.preimages) == dict(other.preimages)


class _Field(Mapping):
    """Immutable point -> value map."""

    __slots__ = ("_data",)

    def __init__(self, data: Mapping | Iterable = ()):
        self._data = dict(data)
        self._validate()

    def _validate(self) -> None:
        pass

    def __getitem__(self, key):
        return self._data[key]

    def __iter__(self):
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self._data!r})"

    def to_json(self) -> dict:
        return {format_label(k): to_json_number(v) for k, v in self._data.items()}


class ScalarField(_Field):
    """Values in [0, inf]; ``math.inf`` is an ordinary value."""

    __slots__ = ()

    def _validate(self) -> None:
        for k, v in self._data.items():
            if isinstance(v, complex) or v != v or v < 0:
                raise ValueError(f"scalar field value at {k!r} is not in [0, inf]: {v!r}")


class WeightFunction(_Field):
    """Complex (or exact real) weight values, finite everywhere."""

    __slots__ = ()

    def _validate(self) -> None:
        for k, v in self._data.items():
            if not finite(v):
                raise ValueError(f"weight at {k!r} is not finite: {v!r}")


@dataclass(frozen=True, eq=False)
class PointSpace:
    """A finite discrete measure space with self-map ``phi`` and weight ``w``.

    Build instances through :func:`build_space`, which validates the inputs.
    """

    points: tuple
    mass: Mapping
    phi: Mapping
    weight: Mapping
    name: str = ""

    is_lazy = False

    def mass_of(self, x):
        return self.mass[x]

    def phi_of(self, x):
        return self.phi[x]

    def weight_of(self, x):
        return self.weight[x]

    @cached_property
    def fiber_index(self) -> FiberIndex:
        pre: dict = {x: [] for x in self.points}
        for y in self.points:
            pre[self.phi[y]].append(y)
        return FiberIndex(MappingProxyType({x: tuple(v) for x, v in pre.items()}))

    def fiber(self, x) -> Fiber:
        return Fiber(self.fiber_index[x])

    @cached_property
    def index(self) -> dict:
        return {x: i for i, x in enumerate(self.points)}

    @property
    def dim(self) -> int:
        return len(self.points)

    @property
    def exact(self) -> bool:
        return all(isinstance(m, Fraction) for m in self.mass.values())

    def reweighted(self, weight: Mapping | Callable) -> "PointSpace":
        """Same points, masses and symbol with a new weight."""
        if callable(weight):
            weight = {x: weight(x) for x in self.points}
        return build_space(self.points, self.mass, self.phi, weight, name=self.name)

    def weighted_measure(self, subset: Iterable) -> Any:
        """mu_w(subset) = sum of |w|^2 * mass over the subset."""
        return sum((abs2(self.weight[x]) * self.mass[x] for x in subset), 0)

    def vector(self, values: Mapping | Sequence) -> list:
        if isinstance(values, Mapping):
            return [values[x] for x in self.points]
        values = list(values)
        if len(values) != self.dim:
            raise ValueError(f"vector of length {len(values)} for a space of dimension {self.dim}")
        return values

    def to_json(self) -> dict:
        return {
            "points": [format_label(x) for x in self.points],
            "mass": {format_label(x): to_json_number(self.mass[x]) for x in self.points},
            "phi": {format_label(x): format_label(self.phi[x]) for x in self.points},
            "w": {format_label(x): _weight_to_json(self.weight[x]) for x in self.points},
        }


def _weight_to_json(w) -> list:
    if isinstance(w, complex):
        return [w.real, w.imag]
    return [to_json_number(w), 0]


def format_label(x) -> str:
    """String form of a point label (tuples become ``"k,n"``)."""
    if isinstance(x, tuple):
        return ",".join(str(c) for c in x)
    return str(x)


def _aligned(values, points: tuple, what: str) -> dict:
    if isinstance(values, Mapping):
        missing = [x for x in points if x not in values]
        if missing:
            raise SpaceError(f"{what} missing for point {missing[0]!r}")
        return {x: values[x] for x in points}
    values = list(values)
    if len(values) != len(points):
        raise SpaceError(f"{what}: expected {len(points)} entries, got {len(values)}")
    return dict(zip(points, values))


def build_space(points, masses, phi_map, weights, *, exact: bool = False, name: str = "") -> PointSpace:
    """Validate and assemble a :class:`PointSpace`.

    ``masses``, ``phi_map`` and ``weights`` are mappings keyed by point or
    sequences aligned with ``points``.  With ``exact=True`` masses and weights
    are converted to :class:`~fractions.Fraction` (weights must then be real).

    On a discrete space with positive masses the standing absolute-continuity
    assumption ``mu_w o phi^{-1} << mu`` holds automatically, so it is not
    re-checked here.
    """
    points = tuple(points)
    if len(set(points)) != len(points):
        seen = set()
        dup = next(x for x in points if x in seen or seen.add(x))
        raise SpaceError(f"duplicate label {dup!r}")
    pointset = set(points)

    mass = _aligned(masses, points, "mass")
    for x, m in mass.items():
        if isinstance(m, complex) or not finite(m):
            raise SpaceError(f"mass at {x!r} is not a finite real: {m!r}")
        if m <= 0:
            raise SpaceError(f"nonpositive mass at {x!r}: {m!r}")

    phi = _aligned(phi_map, points, "phi")
    for x, y in phi.items():
        if y not in pointset:
            raise SpaceError(f"phi target not in point set: phi({x!r}) = {y!r}")

    weight = _aligned(weights, points, "weight")
    for x, v in weight.items():
        if not finite(v):
            raise SpaceError(f"weight at {x!r} is not finite: {v!r}")

    if exact:
        mass = {x: as_number(m, True) for x, m in mass.items()}
        converted = {}
        for x, v in weight.items():
            if isinstance(v, complex):
                if v.imag != 0:
                    raise SpaceError("exact mode supports real weights only")
                v = v.real
            converted[x] = as_number(v, True)
        weight = converted
    else:
        weight = {x: (v if isinstance(v, (Fraction, int)) and not isinstance(v, bool) else complex(v))
                  for x, v in weight.items()}

    return PointSpace(points, MappingProxyType(mass), MappingProxyType(phi),
                      MappingProxyType(weight), name=name)


def fibers(space: PointSpace) -> FiberIndex:
    """Preimage index of a finite space."""
    return space.fiber_index


def phi_closure(phi_of: Callable, window: Iterable, limit: int = 100_000) -> tuple:
    """Smallest phi-invariant superset of ``window``; raises if it exceeds ``limit`` points."""
    out = list(dict.fromkeys(window))
    seen = set(out)
    i = 0
    while i < len(out):
        y = phi_of(out[i])
        if y not in seen:
            if len(out) >= limit:
                raise SpaceError("window not closed under phi (orbit leaves every finite window)")
            seen.add(y)
            out.append(y)
        i += 1
    return tuple(out)


def truncate(family, window, *, close: bool = False) -> PointSpace:
    """Restrict a lazy family to a finite phi-closed window.

    ``window`` is an iterable of points or an int (the family's standard window
    of that size).  A family may declare ``boundary_phi(x, window)`` which
    redirects images leaving the window; otherwise an image outside the window
    is an error.  ``close=True`` first adds phi-images up to closure.
    """
    if isinstance(window, int):
        window = family.window_points(window)
    window = tuple(dict.fromkeys(window))
    if close:
        try:
            window = phi_closure(family.phi_of, window, limit=max(10 * len(window), 1000))
        except SpaceError:
            if getattr(family, "boundary_phi", None) is None:
                raise
    members = set(window)
    phi = {}
    for x in window:
        y = family.phi_of(x)
        if y not in members:
            boundary = getattr(family, "boundary_phi", None)
            if boundary is None:
                raise SpaceError(f"window not closed under phi: phi({x!r}) = {y!r} lies outside")
            y = boundary(x, members)
        phi[x] = y
    mass = {x: family.mass_of(x) for x in window}
    weight = {x: family.weight_of(x) for x in window}
    exact = all(isinstance(m, Fraction) for m in mass.values()) and not any(
        isinstance(v, complex) for v in weight.values())
    return build_space(window, mass, phi, weight, exact=exact, name=getattr(family, "name", ""))


# -- JSON documents -----------------------------------------------------------

def _reject_constant(token: str):
    raise SpaceError(f"non-finite number in input: {token}")


def load_space(source: str | Mapping, *, exact: bool = False) -> PointSpace:
    """Parse a JSON space document ``{"points", "mass", "phi", "w"}``.

    ``source`` is JSON text or an already decoded mapping.  NaN/Infinity and
    nonpositive masses are rejected.
    """
    if isinstance(source, str):
        try:
            doc = json.loads(source, parse_constant=_reject_constant,
                             parse_float=(Fraction if exact else float))
        except json.JSONDecodeError as exc:
            raise SpaceError(f"malformed JSON: {exc}") from exc
    else:
        doc = source
    if not isinstance(doc, Mapping):
        raise SpaceError("space document must be a JSON object")
    for key in ("points", "mass", "phi", "w"):
        if key not in doc:
            raise SpaceError(f"space document lacks {key!r}")
    points = [str(p) for p in doc["points"]]
    mass = {str(k): v for k, v in doc["mass"].items()}
    phi = {str(k): str(v) for k, v in doc["phi"].items()}
    weights = {}
    for k, v in doc["w"].items():
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise SpaceError(f"weight of {k!r} must be [re, im]")
            re, im = v
        else:
            re, im = v, 0
        for part in (re, im):
            if isinstance(part, bool) or not isinstance(part, (int, float, Fraction)):
                raise SpaceError(f"weight of {k!r} is not numeric")
            if isinstance(part, float) and not math.isfinite(part):
                raise SpaceError(f"non-finite weight at {k!r}")
        if exact:
            if im != 0:
                raise SpaceError("exact mode supports real weights only")
            weights[str(k)] = Fraction(re)
        else:
            weights[str(k)] = complex(float(re), float(im))
    for k, m in mass.items():
        if isinstance(m, bool) or not isinstance(m, (int, float, Fraction)):
            raise SpaceError(f"mass of {k!r} is not numeric")
    return build_space(points, mass, phi, weights, exact=exact)


def dump_space(space: PointSpace) -> str:
    return json.dumps(space.to_json(), indent=2)


def weighted_fiber_mass(space, x):
    """mu_w(phi^{-1}({x})) for a finite fiber (used in tests and docs)."""
    return sum((abs2(space.weight_of(y)) * space.mass_of(y) for y in space.fiber(x).head), 0)


__all__ = [
    "Fiber", "FiberIndex", "FiberTail", "PointSpace", "ScalarField", "SpaceError",
    "WeightFunction", "build_space", "dump_space", "fibers", "format_label", "load_space",
    "phi_closure", "truncate", "INF",
]
