"""Jacobi elliptic functions and elliptic integrals of the first kind.

Everything here works with the *parameter* ``m`` (``k**2``), restricted to
``0 <= m <= 1``.  The complete integral and the Jacobi functions are computed
by the arithmetic-geometric mean, the incomplete integral by Carlson's
symmetric form ``R_F``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, InfinitePeriodError

_AGM_TOL = 1e-16
_AGM_MAX_ITER = 40


def check_parameter(m: float) -> float:
    """Return ``m`` as a float, rejecting values outside ``[0, 1]``."""
    m = float(m)
    if not 0.0 <= m <= 1.0 or math.isnan(m):
        raise DomainError(f"elliptic parameter m={m!r} outside [0, 1]")
    return m


def _agm_sequence(m: float) -> tuple[list[float], list[float]]:
    a, b, c = 1.0, math.sqrt(1.0 - m), math.sqrt(m)
    a_seq, c_seq = [a], [c]
    for _ in range(_AGM_MAX_ITER):
        if abs(c) <= _AGM_TOL * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
    return a_seq, c_seq


def complete_K(m: float) -> float:
    """Quarter period ``K(m)``, the complete elliptic integral of the first kind.

    Raises
    ------
    InfinitePeriodError
        For ``m == 1`` where ``K`` diverges.
    """
    m = check_parameter(m)
    if m == 1.0:
        raise InfinitePeriodError("K(m) diverges at m = 1 (infinite period)")
    a_seq, _ = _agm_sequence(m)
    return math.pi / (2.0 * a_seq[-1])


def jacobi_sncndn(x, m: float):
    """Jacobi elliptic functions ``(sn, cn, dn)`` at ``x`` for parameter ``m``.

    ``x`` may be a scalar or an array; the return values match its shape.
    Uses the descending AGM (Landen) recursion after reducing ``x`` modulo
    the real period ``4K``.  ``m = 0`` and ``m = 1`` use the trigonometric and
    hyperbolic closed forms.
    """
    m = check_parameter(m)
    x = np.asarray(x, dtype=float)
    if m == 0.0:
        return np.sin(x), np.cos(x), np.ones_like(x)
    if m == 1.0:
        e = np.exp(-np.abs(x))
        sech = 2.0 * e / (1.0 + e * e)
        return np.tanh(x), sech, sech.copy()

    a_seq, c_seq = _agm_sequence(m)
    K = math.pi / (2.0 * a_seq[-1])
    period = 4.0 * K
    xr = x - period * np.round(x / period)

    n = len(a_seq) - 1
    phi = (2.0**n) * a_seq[-1] * xr
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c_seq[j] / a_seq[j] * np.sin(phi)))
    sn = np.sin(phi)
    cn = np.cos(phi)
    # dn^2 = (1 - m) + m cn^2 has no cancellation, unlike 1 - m sn^2 near m = 1;
    # the amplitude quotient cn / cos(phi_1 - phi_0) is 0/0 at x = K.
    dn = np.sqrt((1.0 - m) + m * cn * cn)
    return sn, cn, dn


def _carlson_rf(x: float, y: float, z: float) -> float:
    # Carlson (1995) duplication algorithm; relative error ~ machine epsilon.
    a0 = (x + y + z) / 3.0
    q = (3.0 * 2.2e-16) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    a = a0
    scale = 1.0
    for _ in range(100):
        if scale * q < abs(a):
            break
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
        a = 0.25 * (a + lam)
        scale *= 0.25
    dx = (a - x) / a
    dy = (a - y) / a
    dz = -dx - dy
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / math.sqrt(a)


def incomplete_F(phi: float, m: float) -> float:
    """Incomplete elliptic integral of the first kind ``F(phi | m)``.

    ``0 <= phi <= pi/2`` and ``0 <= m < 1``.
    """
    m = check_parameter(m)
    phi = float(phi)
    half_pi = 0.5 * math.pi
    if not (-1e-15 <= phi <= half_pi + 1e-15):
        raise DomainError(f"amplitude phi={phi!r} outside [0, pi/2]")
    if m == 1.0:
        raise InfinitePeriodError("F(phi | 1) is only finite below pi/2; use atanh(sin phi)")
    phi = min(max(phi, 0.0), half_pi)
    if phi == 0.0:
        return 0.0
    if phi == half_pi:
        return complete_K(m)
    s, c = math.sin(phi), math.cos(phi)
    return s * _carlson_rf(c * c, 1.0 - m * s * s, 1.0)
