"""Band edges from the periodic WKB quantization condition.

For a symmetric periodic well the band edges are the roots of

    theta(E) = (pi/2) n + branch * arctan(tanh(phi(E)))

with ``theta`` and ``phi`` the allowed- and forbidden-region actions
(:mod:`bandedge.action`), ``n >= 0`` and ``branch = +1 | -1`` (``n = 0`` only
with ``+1``).  As the period grows, ``phi -> inf`` and the condition reduces
to the textbook rule ``theta = (pi/2)(n + 1/2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .action import ActionPair, action_pair, allowed_action
from .errors import DomainError, InfinitePeriodError
from .potential import PotentialSpec

PLUS = 1
MINUS = -1
SCAN_POINTS = 64
EDGE_EPS = 1e-9
DEFAULT_TOL = 1e-8

# Symmetry about x = 0 and about x = L/2, in ascending-energy order after the
# nodeless ground state.
_CYCLE = ("AS", "SA", "AA", "SS")
_PERIOD = {"SS": 1, "AA": 1, "AS": 2, "SA": 2}


@dataclass(frozen=True)
class BandEdge:
    energy: float
    symmetry: str
    period_multiple: int
    n: int | None = None
    branch: int | None = None
    source: str = "wkb"
    kL: float | None = None

    @property
    def symmetry_label(self) -> str:
        return f"{self.symmetry[0]},{self.symmetry[1]}"

    @property
    def branch_sign(self) -> str | None:
        if self.branch is None:
            return None
        return "+" if self.branch > 0 else "-"


@dataclass(frozen=True)
class BandStructure:
    """Band edges in ascending energy, with bands ``(e0,e1), (e2,e3), ...``."""

    edges: tuple[BandEdge, ...]
    source: str = "wkb"

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))

    @property
    def energies(self) -> list[float]:
        return [e.energy for e in self.edges]

    @property
    def bands(self) -> list[tuple[float, float]]:
        e = self.energies
        return [(e[i], e[i + 1]) for i in range(0, len(e) - 1, 2)]

    @property
    def gaps(self) -> list[tuple[float, float]]:
        e = self.energies
        return [(e[i], e[i + 1]) for i in range(1, len(e) - 1, 2)]

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)


def oscillation_symmetry(position: int) -> str:
    """Symmetry type of the band edge at ``position`` (0-based, ascending energy)."""
    if position == 0:
        return "SS"
    return _CYCLE[(position - 1) % 4]


def oscillation_violations(edges: Sequence[BandEdge]) -> int:
    """Number of edges whose symmetry breaks the SS, AS, SA, AA, SS, ... pattern."""
    return sum(e.symmetry != oscillation_symmetry(i) for i, e in enumerate(edges))


def _check_quantum_numbers(n: int, branch: int) -> None:
    if int(n) != n or n < 0:
        raise DomainError(f"quantum number n={n!r} must be a non-negative integer")
    if branch not in (PLUS, MINUS):
        raise DomainError(f"branch must be +1 or -1, got {branch!r}")
    if n == 0 and branch == MINUS:
        raise DomainError("(n=0, branch=-) has a negative right-hand side and no solution")


def _position(n: int, branch: int) -> int:
    return 2 * n if branch == PLUS else 2 * n - 1


def symmetry_label(n: int, branch: int) -> tuple[str, int]:
    """``(symmetry, period_multiple)`` of the edge solving the ``(n, branch)`` condition."""
    _check_quantum_numbers(n, branch)
    if n % 2 == 0:
        sym = "SS" if branch == PLUS else "AA"
    else:
        sym = "SA" if branch == PLUS else "AS"
    return sym, _PERIOD[sym]


def _target(phi: float, n: int, branch: int) -> float:
    return 0.5 * math.pi * n + branch * math.atan(math.tanh(phi))


def residual_from_actions(pair: ActionPair, n: int, branch: int) -> float:
    return pair.theta - _target(pair.phi, n, branch)


def residual(
    spec: PotentialSpec, n: int, branch: int, energy: float, *, extension: bool = False
) -> float:
    """``theta(E) - [(pi/2) n + branch * arctan(tanh(phi(E)))]``."""
    _check_quantum_numbers(n, branch)
    return residual_from_actions(action_pair(spec, energy, extension=extension), n, branch)


class EnergyScan:
    """Action pairs on a fixed energy grid, shared by every ``(n, branch)`` solve.

    The grid covers ``(V_min + eps, V_max - eps)`` with ``eps = 1e-9 (V_max - V_min)``.
    In extension mode a second grid continues above ``V_max`` far enough for
    ``theta`` to exceed ``theta_needed``.
    """

    def __init__(
        self,
        spec: PotentialSpec,
        *,
        extension: bool = False,
        theta_needed: float = 0.0,
        points: int = SCAN_POINTS,
    ):
        self.spec = spec
        self.extension = extension
        v_min, v_max, _ = spec.extrema()
        width = v_max - v_min
        if width > 0:
            eps = EDGE_EPS * width
            energies = list(np.linspace(v_min + eps, v_max - eps, points))
        else:
            energies = []
        if extension:
            if spec.infinite_period:
                raise InfinitePeriodError("extension mode needs a finite period")
            step = max(width, 1.0)
            upper = v_max + step
            while allowed_action(spec, upper, extension=True) < theta_needed:
                step *= 2.0
                upper = v_max + step
            energies += list(np.linspace(v_max, upper, points)[1:])
        self.energies = np.array(energies)
        self.pairs = [action_pair(spec, E, extension=extension) for E in self.energies]

    def solve(self, n: int, branch: int, tol: float = DEFAULT_TOL) -> BandEdge | None:
        _check_quantum_numbers(n, branch)
        if len(self.pairs) == 0:
            return None
        r = np.array([residual_from_actions(p, n, branch) for p in self.pairs])
        hits = np.flatnonzero(r >= 0.0)
        if hits.size == 0 or hits[0] == 0:
            return None
        i = hits[0]
        if r[i] == 0.0:
            energy = float(self.energies[i])
        else:
            energy = brentq(
                lambda E: residual(self.spec, n, branch, E, extension=self.extension),
                self.energies[i - 1],
                self.energies[i],
                xtol=tol,
                rtol=4 * np.finfo(float).eps,
            )
        sym, period = symmetry_label(n, branch)
        return BandEdge(float(energy), sym, period, n=n, branch=branch, source="wkb")

    def residual_signs(self, n: int, branch: int) -> np.ndarray:
        return np.sign([residual_from_actions(p, n, branch) for p in self.pairs])


def _theta_needed(n: int, branch: int) -> float:
    return 0.5 * math.pi * n + branch * 0.25 * math.pi


def solve_band_edge(
    spec: PotentialSpec,
    n: int,
    branch: int,
    tol: float = DEFAULT_TOL,
    *,
    extension: bool = False,
) -> BandEdge | None:
    """The ``(n, branch)`` band edge, or ``None`` if it lies outside the scanned range.

    In default mode edges within ``1e-9 (V_max - V_min)`` of either extremum,
    and all edges above ``V_max``, are absent.
    """
    _check_quantum_numbers(n, branch)
    if tol <= 0:
        raise DomainError("tol must be positive")
    scan = EnergyScan(spec, extension=extension, theta_needed=_theta_needed(n, branch) + 0.1)
    return scan.solve(n, branch, tol)


def band_structure(
    spec: PotentialSpec,
    n_max: int | None = None,
    tol: float = DEFAULT_TOL,
    *,
    extension: bool = False,
) -> BandStructure:
    """Solve every ``(n, branch)`` with ``n <= n_max`` and collect the edges.

    ``n_max=None`` keeps going until a quantum number yields no edge; it is
    required in extension mode, where edges exist for every ``n``.
    """
    if n_max is None and extension:
        raise DomainError("extension mode needs an explicit n_max")
    if n_max is not None and n_max < 0:
        raise DomainError("n_max must be >= 0")
    needed = _theta_needed(n_max, PLUS) + 0.1 if n_max is not None else 0.0
    scan = EnergyScan(spec, extension=extension, theta_needed=needed)
    edges = []
    n = 0
    while n_max is None or n <= n_max:
        found = False
        for branch in (MINUS, PLUS):
            if n == 0 and branch == MINUS:
                continue
            edge = scan.solve(n, branch, tol)
            if edge is not None:
                edges.append(edge)
                found = True
        if not found and n_max is None:
            break
        n += 1
    # Theory fixes the order E(n,-) < E(n,+) < E(n+1,-); near-degenerate pairs
    # (m -> 1) can swap within the solver tolerance, so sort on it.
    edges.sort(key=lambda e: _position(e.n, e.branch))
    return BandStructure(tuple(edges), source="wkb")


def solve_standard_levels(
    spec: PotentialSpec, n_max: int, tol: float = DEFAULT_TOL
) -> list[float | None]:
    """Levels of the two-turning-point rule ``theta(E) = (pi/2)(n + 1/2)``.

    Meant for the infinite-period limit (``Lame`` with ``m = 1``) or an
    isolated confining well; for a finite period it gives the ``L -> inf``
    approximation.  Entries are ``None`` where no root lies below ``V_max``.
    """
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    v_min, v_max, _ = spec.extrema()
    eps = EDGE_EPS * (v_max - v_min)
    grid = np.linspace(v_min + eps, v_max - eps, SCAN_POINTS)
    thetas = np.array([allowed_action(spec, E) for E in grid])
    levels: list[float | None] = []
    for n in range(n_max + 1):
        target = 0.5 * math.pi * (n + 0.5)
        r = thetas - target
        hits = np.flatnonzero(r >= 0.0)
        if hits.size == 0 or hits[0] == 0:
            levels.append(None)
            continue
        i = hits[0]
        levels.append(
            float(
                brentq(
                    lambda E: allowed_action(spec, E) - target,
                    grid[i - 1],
                    grid[i],
                    xtol=tol,
                    rtol=4 * np.finfo(float).eps,
                )
            )
        )
    return levels
