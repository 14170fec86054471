"""Band diagrams rendered to image files.

matplotlib is an optional dependency (``pip install artifact[plot]``) and is
imported only when a figure is requested.
"""

from __future__ import annotations

import math

import numpy as np

from .potential import PotentialSpec
from .quantization import BandStructure

# Half-width of the x window used when the period is infinite.
_INFINITE_WINDOW = 6.0


def _x_window(spec: PotentialSpec) -> np.ndarray:
    if spec.infinite_period:
        return np.linspace(-_INFINITE_WINDOW, _INFINITE_WINDOW, 600)
    L = spec.period
    return np.linspace(-L, L, 600)


def _draw_panel(ax, spec, exact, wkb, title):
    x = _x_window(spec)
    ax.plot(x, spec.evaluate(x), color="k", lw=1.2, label="V(x)")
    if exact is not None:
        for lo, hi in exact.bands:
            ax.axhspan(lo, hi, color="tab:blue", alpha=0.15, lw=0)
        for i, e in enumerate(exact.energies):
            ax.axhline(e, color="tab:blue", lw=1.0, label="exact" if i == 0 else None)
    if wkb is not None:
        for i, e in enumerate(wkb.energies):
            ax.axhline(e, color="tab:red", lw=1.0, ls="--", label="WKB" if i == 0 else None)
    ax.axhline(spec.v_max, color="0.5", lw=0.8, ls=":")
    ax.set_xlim(x[0], x[-1])
    ax.set_xlabel("x")
    ax.set_ylabel("E")
    ax.set_title(title, fontsize=10)
    ax.legend(loc="lower right", fontsize=8, frameon=False)


def plot_band_diagrams(
    panels: list[tuple[PotentialSpec, BandStructure | None, BandStructure | None, str]],
    path,
    dpi: int = 150,
):
    """Write one panel per ``(spec, exact, wkb, title)`` entry to ``path``.

    The file type follows the extension of ``path``.  Returns the figure.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ncols = min(len(panels), 2)
    nrows = math.ceil(len(panels) / ncols)
    fig, axes = plt.subplots(nrows, ncols, figsize=(5.0 * ncols, 3.8 * nrows), squeeze=False)
    for ax, (spec, exact, wkb, title) in zip(axes.flat, panels):
        _draw_panel(ax, spec, exact, wkb, title)
    for ax in list(axes.flat)[len(panels):]:
        ax.set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    return fig
