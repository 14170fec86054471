"""Exact band edges from the Hill equation in a plane-wave basis.

Bloch states ``exp(i k x) sum_j u_j exp(2 pi i j x / L)`` turn
``-psi'' + V psi = E psi`` into the Hermitian matrix

    H[j, j'] = (k + 2 pi j / L)^2 delta_{jj'} + c_{j - j'}

with ``c_q`` the Fourier coefficients of ``V``.  Band edges sit at
``kL = 0`` (period ``L``) and ``kL = pi`` (period ``2L``).  For analytic
potentials the eigenvalues converge exponentially in the basis size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .errors import ConvergenceError, DomainError, InfinitePeriodError
from .potential import PotentialSpec
from .quantization import BandEdge, BandStructure, oscillation_symmetry

DEFAULT_N = 64
MAX_N = 512
N_STEP = 8
CONVERGENCE_TOL = 1e-8
ORDER_SLACK = 1e-8

# Which Bloch phase supplies the edge at each position of the 4-cycle
# following the ground state: kL=pi, kL=pi, kL=0, kL=0.
_K_PATTERN = (math.pi, math.pi, 0.0, 0.0)


@dataclass(frozen=True)
class HillMatrix:
    kL: float
    half_size: int
    entries: np.ndarray


def _require_finite(spec: PotentialSpec) -> float:
    L = spec.period
    if math.isinf(L):
        raise InfinitePeriodError(
            "the Hill oracle needs a finite period; substitute m = 1 - eps for m = 1"
        )
    return L


def fourier_coefficients(spec: PotentialSpec, N: int) -> np.ndarray:
    """``c_q`` for ``q = -2N .. 2N`` (index ``q + 2N``), from uniform samples.

    Uses ``8 (2N + 1)`` samples over one period.  Symmetric real potentials
    give real coefficients; the imaginary parts are checked and dropped.
    """
    if N < 0:
        raise DomainError("N must be >= 0")
    L = _require_finite(spec)
    M = 8 * (2 * N + 1)
    x = np.arange(M) * (L / M)
    c = np.fft.fft(spec.evaluate(x)) / M
    q = np.arange(-2 * N, 2 * N + 1)
    cq = c[q % M]
    scale = max(1.0, float(np.max(np.abs(cq.real))))
    if np.max(np.abs(cq.imag)) > 1e-10 * scale:
        raise DomainError("potential has non-negligible odd Fourier components; it is not symmetric")
    # an even potential has c_q = c_-q; enforce it so H is exactly symmetric
    return 0.5 * (cq.real + cq.real[::-1])


def hill_matrix(spec: PotentialSpec, kL: float, N: int, coefficients: np.ndarray | None = None) -> HillMatrix:
    L = _require_finite(spec)
    c = fourier_coefficients(spec, N) if coefficients is None else coefficients
    j = np.arange(-N, N + 1)
    H = c[(j[:, None] - j[None, :]) + 2 * N]
    H[np.diag_indices_from(H)] += (kL / L + 2.0 * np.pi * j / L) ** 2
    return HillMatrix(kL, N, H)


def _lowest(spec: PotentialSpec, kL: float, N: int, count: int) -> np.ndarray:
    H = hill_matrix(spec, kL, N).entries
    return eigh(H, eigvals_only=True, subset_by_index=[0, count - 1])


def bloch_eigenvalues(
    spec: PotentialSpec,
    kL: float,
    count: int,
    N: int | None = None,
    *,
    tol: float = CONVERGENCE_TOL,
    max_N: int = MAX_N,
) -> np.ndarray:
    """Lowest ``count`` eigenvalues at Bloch phase ``kL``, converged in basis size.

    Starting from ``N`` (default 64), the basis is doubled until the
    eigenvalues move by less than ``tol`` when ``N`` grows by 8.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    N = DEFAULT_N if N is None else int(N)
    N = max(N, count)
    while True:
        coarse = _lowest(spec, kL, N, count)
        fine = _lowest(spec, kL, N + N_STEP, count)
        if np.max(np.abs(fine - coarse)) < tol:
            return fine
        if 2 * N > max_N:
            raise ConvergenceError(
                f"Bloch eigenvalues at kL={kL:g} not converged at N={N}: "
                f"{coarse.tolist()} vs {fine.tolist()} (N={N + N_STEP})"
            )
        N *= 2


def _position_sources(count: int) -> list[tuple[float, int]]:
    """For each merged position, the Bloch phase and index into its eigenvalue list."""
    used = {0.0: 1, math.pi: 0}
    out = [(0.0, 0)]
    for p in range(1, count):
        kL = _K_PATTERN[(p - 1) % 4]
        out.append((kL, used[kL]))
        used[kL] += 1
    return out


def exact_band_edges(
    spec: PotentialSpec, count: int, N: int | None = None, *, max_N: int = MAX_N
) -> BandStructure:
    """The lowest ``count`` band edges, labelled by the oscillation pattern.

    Edges at positions 1, 4, 5, 8, 9, ... (1-based) come from ``kL = 0``,
    the rest from ``kL = pi``.  The merged list must ascend; a violation
    means the eigen-solve went wrong.  ``max_N`` caps the basis growth.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    sources = _position_sources(count)
    need = {0.0: 0, math.pi: 0}
    for kL, i in sources:
        need[kL] = max(need[kL], i + 1)
    values = {kL: bloch_eigenvalues(spec, kL, n, N, max_N=max_N) for kL, n in need.items() if n > 0}
    edges = []
    for p, (kL, i) in enumerate(sources):
        energy = float(values[kL][i])
        if edges and energy < edges[-1].energy - ORDER_SLACK * max(1.0, abs(energy)):
            raise ConvergenceError(
                f"band edges do not interleave: position {p} (kL={kL:g}) has E={energy!r} "
                f"below the previous edge {edges[-1].energy!r}"
            )
        sym = oscillation_symmetry(p)
        edges.append(
            BandEdge(energy, sym, 1 if kL == 0.0 else 2, source="exact", kL=kL)
        )
    return BandStructure(tuple(edges), source="exact")
