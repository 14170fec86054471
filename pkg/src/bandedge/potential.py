"""Symmetric periodic potentials with one well per period.

Units: hbar = 1 and 2 * (particle mass) = 1, so the Schroedinger equation is
``-psi'' + V psi = E psi`` and the local momentum is ``sqrt|E - V(x)|``.

Every potential is even about ``x = 0`` (its minimum) and about ``x = L/2``
(its maximum), and non-decreasing on ``[0, L/2]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from .elliptic import check_parameter, complete_K, incomplete_F, jacobi_sncndn
from .errors import BelowWellError, InvalidPotentialError, NoTurningPointError


class PotentialSpec:
    """Common behaviour of the concrete potential kinds."""

    kind = "abstract"

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        raise NotImplementedError

    def below_max(self, x):
        """``V_max - V(x)`` without cancellation where the kind allows it."""
        return self.v_max - self.evaluate(x)

    @property
    def period(self) -> float:
        raise NotImplementedError

    @property
    def half_period(self) -> float:
        return 0.5 * self.period

    @property
    def v_min(self) -> float:
        return self.extrema()[0]

    @property
    def v_max(self) -> float:
        return self.extrema()[1]

    @property
    def infinite_period(self) -> bool:
        return math.isinf(self.period)

    def extrema(self) -> tuple[float, float, float]:
        """``(V_min, V_max, L)``; ``L`` is ``inf`` for the infinite-period limit."""
        raise NotImplementedError

    def turning_point(self, energy: float) -> float:
        """Right classical turning point ``x_R`` in ``(0, L/2)`` where ``V(x_R) = E``."""
        v_min, v_max, _ = self.extrema()
        if energy <= v_min:
            raise BelowWellError(f"E={energy!r} is at or below the well bottom V_min={v_min!r}")
        if energy >= v_max:
            raise NoTurningPointError(
                f"E={energy!r} is at or above V_max={v_max!r}: no classical turning point"
            )
        return self._turning_point(energy)

    def _turning_point(self, energy: float) -> float:
        return bisect_turning_point(self, energy)

    def label(self) -> str:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Lame(PotentialSpec):
    """``V(x) = m a (a+1) sn^2(x, m)`` with period ``2K(m)``."""

    a: float
    m: float
    kind = "lame"

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "m", check_parameter(self.m))
        if not self.a >= 1.0:
            raise InvalidPotentialError(f"Lame index a={self.a!r} must be >= 1")

    @property
    def amplitude(self) -> float:
        return self.m * self.a * (self.a + 1.0)

    @property
    def period(self) -> float:
        if self.m == 1.0:
            return math.inf
        return 2.0 * complete_K(self.m)

    def evaluate(self, x):
        sn, _, _ = jacobi_sncndn(x, self.m)
        return self.amplitude * sn * sn

    def below_max(self, x):
        _, cn, _ = jacobi_sncndn(x, self.m)
        return self.amplitude * cn * cn

    def extrema(self):
        return 0.0, self.amplitude, self.period

    def _turning_point(self, energy):
        s = math.sqrt(energy / self.amplitude)
        if self.m == 1.0:
            return math.atanh(s)
        return incomplete_F(math.asin(s), self.m)

    def with_m(self, m: float) -> "Lame":
        return replace(self, m=m)

    def label(self):
        return f"{self.amplitude:g} sn^2(x,{self.m:.12g})"

    def to_dict(self):
        return {"kind": self.kind, "a": self.a, "m": self.m}


@dataclass(frozen=True)
class CosineLattice(PotentialSpec):
    """``V(x) = v0 sin^2(pi x / L)``."""

    v0: float
    L: float
    kind = "cosine"

    def __post_init__(self):
        object.__setattr__(self, "v0", float(self.v0))
        object.__setattr__(self, "L", float(self.L))
        if not (self.v0 >= 0.0 and math.isfinite(self.v0)):
            raise InvalidPotentialError(f"cosine amplitude v0={self.v0!r} must be finite and >= 0")
        if not (self.L > 0.0 and math.isfinite(self.L)):
            raise InvalidPotentialError(f"period L={self.L!r} must be finite and positive")

    @property
    def period(self):
        return self.L

    def evaluate(self, x):
        s = np.sin(np.pi * np.asarray(x, dtype=float) / self.L)
        return self.v0 * s * s

    def below_max(self, x):
        c = np.cos(np.pi * np.asarray(x, dtype=float) / self.L)
        return self.v0 * c * c

    def extrema(self):
        return 0.0, self.v0, self.L

    def _turning_point(self, energy):
        return self.L / math.pi * math.asin(math.sqrt(energy / self.v0))

    def label(self):
        return f"{self.v0:g} sin^2(pi x/{self.L:g})"

    def to_dict(self):
        return {"kind": self.kind, "v0": self.v0, "L": self.L}


@dataclass(frozen=True, eq=False)
class Tabulated(PotentialSpec):
    """Samples of ``V`` on ``[0, L/2]``, extended by symmetry and periodicity.

    Interpolation is monotone cubic (PCHIP), so a non-decreasing table
    stays non-decreasing between samples.
    """

    x: np.ndarray
    v: np.ndarray
    L: float | None = None
    source: str | None = None
    _interp: PchipInterpolator = field(init=False, repr=False)
    kind = "tabulated"

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        v = np.array(self.v, dtype=float)
        if x.ndim != 1 or x.shape != v.shape or x.size < 2:
            raise InvalidPotentialError("tabulated potential needs two equal-length columns, >= 2 rows")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
            raise InvalidPotentialError("tabulated potential contains non-finite values")
        if np.any(np.diff(x) <= 0):
            raise InvalidPotentialError("tabulated x values must be strictly ascending")
        L = 2.0 * x[-1] if self.L is None else float(self.L)
        half = 0.5 * L
        tol = 1e-9 * max(1.0, half)
        if abs(x[0]) > tol:
            raise InvalidPotentialError(f"tabulated x must start at 0 (got {x[0]!r})")
        if abs(x[-1] - half) > tol:
            raise InvalidPotentialError(f"tabulated x must end at L/2={half!r} (got {x[-1]!r})")
        if np.any(np.diff(v) < 0):
            raise InvalidPotentialError(
                "tabulated V must be non-decreasing on [0, L/2] (single well, minimum at x=0)"
            )
        x[0], x[-1] = 0.0, half
        x.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "_interp", PchipInterpolator(x, v, extrapolate=False))

    @classmethod
    def load(cls, path, L: float | None = None) -> "Tabulated":
        """Read a two-column ``x V`` text file; ``#`` starts a comment."""
        path = Path(path)
        try:
            data = np.loadtxt(path, comments="#", ndmin=2)
        except ValueError as exc:
            raise InvalidPotentialError(f"{path}: {exc}") from None
        if data.shape[1] != 2:
            raise InvalidPotentialError(f"{path}: expected 2 columns, found {data.shape[1]}")
        return cls(data[:, 0], data[:, 1], L=L, source=str(path))

    @property
    def period(self):
        return self.L

    def evaluate(self, x):
        y = np.abs(np.asarray(x, dtype=float)) % self.L
        y = np.where(y > 0.5 * self.L, self.L - y, y)
        return self._interp(np.clip(y, 0.0, 0.5 * self.L))

    def extrema(self):
        return float(self.v[0]), float(self.v[-1]), self.L

    def label(self):
        name = Path(self.source).name if self.source else f"{self.x.size} samples"
        return f"tabulated({name}, L={self.L:g})"

    def to_dict(self):
        d = {"kind": self.kind, "L": self.L, "samples": int(self.x.size)}
        if self.source:
            d["path"] = self.source
        return d


def evaluate(spec: PotentialSpec, x):
    return spec.evaluate(x)


def extrema(spec: PotentialSpec) -> tuple[float, float, float]:
    return spec.extrema()


def turning_point(spec: PotentialSpec, energy: float) -> float:
    return spec.turning_point(energy)


def bisect_turning_point(spec: PotentialSpec, energy: float, secant_steps: int = 4) -> float:
    """Generic turning-point search on ``[0, L/2]`` relying only on monotonicity.

    Bisection narrows the bracket to a relative width of ~1e-13, after which
    a few secant steps (kept inside the bracket) polish the root.
    """
    v_min, v_max, L = spec.extrema()
    if energy <= v_min:
        raise BelowWellError(f"E={energy!r} is at or below the well bottom V_min={v_min!r}")
    if energy >= v_max:
        raise NoTurningPointError(f"E={energy!r} is at or above V_max={v_max!r}")
    if math.isinf(L):
        raise NoTurningPointError("generic turning-point search needs a finite period")

    def g(x):
        return float(spec.evaluate(x)) - energy

    lo, hi = 0.0, 0.5 * L
    g_lo, g_hi = g(lo), g(hi)
    for _ in range(200):
        if hi - lo <= 1e-13 * hi:
            break
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if g_mid < 0.0:
            lo, g_lo = mid, g_mid
        else:
            hi, g_hi = mid, g_mid
    best_x, best_g = (lo, g_lo) if abs(g_lo) <= abs(g_hi) else (hi, g_hi)
    for _ in range(secant_steps):
        if g_hi == g_lo or best_g == 0.0:
            break
        x_new = lo - g_lo * (hi - lo) / (g_hi - g_lo)
        if not lo < x_new < hi:
            break
        g_new = g(x_new)
        if abs(g_new) < abs(best_g):
            best_x, best_g = x_new, g_new
        if g_new < 0.0:
            lo, g_lo = x_new, g_new
        else:
            hi, g_hi = x_new, g_new
    return best_x


def potential_from_dict(d: dict) -> PotentialSpec:
    kind = d.get("kind")
    if kind == "lame":
        return Lame(d["a"], d["m"])
    if kind == "cosine":
        return CosineLattice(d["v0"], d["L"])
    if kind == "tabulated":
        return Tabulated.load(d["path"], L=d.get("L"))
    raise InvalidPotentialError(f"unknown potential kind {kind!r}")
