"""The two action integrals entering the periodic quantization condition.

``theta(E)`` is the phase accumulated across the classically allowed half
well ``[0, x_R]``; ``phi(E)`` is the decay exponent across the forbidden
region ``[x_R, L/2]``.  Both integrands vanish like ``sqrt|x - x_R|`` at the
turning point, which tanh-sinh quadrature integrates at full accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NoTurningPointError
from .potential import PotentialSpec
from .quadrature import integrate

ACTION_TOL = 1e-9
_QUAD_TOL = 1e-11


@dataclass(frozen=True)
class ActionPair:
    theta: float
    phi: float
    energy: float


def _integrate(f, a, b):
    r = integrate(f, a, b, tol=_QUAD_TOL, strict=False)
    if r.error > ACTION_TOL:
        raise ConvergenceError(
            f"action integral on [{a:g}, {b:g}] only converged to {r.error:.2g} (target {ACTION_TOL:g})"
        )
    return r.value


def _allowed_limit(spec: PotentialSpec, energy: float, extension: bool) -> float:
    """Upper limit of the allowed region; ``L/2`` above the barrier in extension mode."""
    if extension and energy >= spec.v_max:
        return spec.half_period
    return spec.turning_point(energy)


def _theta(spec: PotentialSpec, energy: float, x_r: float) -> float:
    if x_r == 0.0:
        return 0.0
    if math.isinf(x_r) and energy > spec.v_max:
        return math.inf

    above_max = energy - spec.v_max

    def p(x):
        return np.sqrt(np.maximum(above_max + spec.below_max(x), 0.0))

    return _integrate(p, 0.0, x_r)


def _phi(spec: PotentialSpec, energy: float, x_r: float) -> float:
    half = spec.half_period
    if math.isinf(half):
        return math.inf
    if x_r >= half:
        return 0.0

    def kappa(x):
        return np.sqrt(np.maximum(spec.evaluate(x) - energy, 0.0))

    return _integrate(kappa, x_r, half)


def allowed_action(spec: PotentialSpec, energy: float, *, extension: bool = False) -> float:
    """``int_0^{x_R} sqrt(E - V) dx``.

    With ``extension`` an energy at or above ``V_max`` makes the whole half
    period allowed.  For an infinite period this is finite only at
    ``E == V_max``.
    """
    return _theta(spec, energy, _allowed_limit(spec, energy, extension))


def forbidden_action(spec: PotentialSpec, energy: float, *, extension: bool = False) -> float:
    """``int_{x_R}^{L/2} sqrt(V - E) dx``; ``inf`` when the period is infinite."""
    if extension and energy >= spec.v_max:
        return 0.0
    return _phi(spec, energy, spec.turning_point(energy))


def action_pair(spec: PotentialSpec, energy: float, *, extension: bool = False) -> ActionPair:
    """Both integrals at ``energy`` with one turning-point solve."""
    if extension and energy >= spec.v_max:
        x_r = spec.half_period
        return ActionPair(_theta(spec, energy, x_r), 0.0, energy)
    if energy >= spec.v_max:
        raise NoTurningPointError(
            f"E={energy!r} is at or above V_max={spec.v_max!r}: no classical turning point"
        )
    x_r = spec.turning_point(energy)
    return ActionPair(_theta(spec, energy, x_r), _phi(spec, energy, x_r), energy)
