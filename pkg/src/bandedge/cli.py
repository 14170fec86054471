"""Command-line interface.

Usage::

    bandedge wkb     --lame 2 0.5 --n-max 1
    bandedge exact   --lame 2 0.5 --format csv
    bandedge compare --table1
    bandedge compare --cosine 5 3.14159 --plot bands.png

Exit codes: 0 success, 1 numerical failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import ConvergenceError, DomainError
from .potential import CosineLattice, Lame, PotentialSpec, Tabulated, potential_from_dict
from .quantization import DEFAULT_TOL, BandStructure, band_structure
from .reference import exact_band_edges
from .report import Report, build_report, format_table, to_csv, to_json

TABLE1 = ((2, 0.5), (3, 0.5), (3, 0.8), (3, 1.0))
DEFAULT_EPSILON = 1e-6

DASH_NOTE = (
    "'-': no WKB edge with V_min < E < V_max (no classical turning point above V_max; "
    "see --extension for finite periods)"
)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    mode: str
    potentials: list[PotentialSpec] = field(default_factory=list)
    n_max: int | None = None
    tol: float = DEFAULT_TOL
    fmt: str = "table"
    extension: bool = False
    table1: bool = False
    stamp: bool = False
    epsilon: float = DEFAULT_EPSILON
    output: Path | None = None
    plot: Path | None = None


def _potential_from_args(args) -> PotentialSpec | None:
    if args.lame is not None:
        a, m = args.lame
        return Lame(a, m)
    if args.cosine is not None:
        v0, L = args.cosine
        return CosineLattice(v0, L)
    if args.tabulated is not None:
        return Tabulated.load(args.tabulated)
    return None


def config_from_args(args) -> RunConfig:
    file_cfg = {}
    if args.config is not None:
        try:
            file_cfg = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None

    sources = [s for s in (args.lame, args.cosine, args.tabulated) if s is not None]
    if len(sources) > 1:
        raise UsageError("give exactly one of --lame, --cosine, --tabulated")
    table1 = args.table1 or bool(file_cfg.get("table1", False))
    spec = _potential_from_args(args)
    if spec is None and "potential" in file_cfg:
        spec = potential_from_dict(file_cfg["potential"])
    if table1 and spec is not None:
        raise UsageError("--table1 cannot be combined with an explicit potential")
    if not table1 and spec is None:
        raise UsageError("a potential is required (--lame, --cosine, --tabulated, --config or --table1)")
    potentials = [Lame(a, m) for a, m in TABLE1] if table1 else [spec]

    def pick(name, default):
        value = getattr(args, name)
        return file_cfg.get(name, default) if value is None else value

    cfg = RunConfig(
        mode=args.command,
        potentials=potentials,
        n_max=pick("n_max", None),
        tol=float(pick("tol", DEFAULT_TOL)),
        fmt=pick("format", "table"),
        extension=args.extension or bool(file_cfg.get("extension", False)),
        table1=table1,
        stamp=args.stamp,
        epsilon=float(pick("epsilon", DEFAULT_EPSILON)),
        output=Path(args.output) if args.output else None,
        plot=Path(args.plot) if args.plot else None,
    )
    if cfg.n_max is not None and cfg.n_max < 0:
        raise UsageError("--n-max must be >= 0")
    if cfg.tol <= 0:
        raise UsageError("--tol must be positive")
    if not 0 < cfg.epsilon < 1:
        raise UsageError("--epsilon must lie in (0, 1)")
    if cfg.fmt not in ("table", "csv", "json"):
        raise UsageError(f"unknown format {cfg.fmt!r}")
    if cfg.extension and cfg.n_max is None:
        raise UsageError("--extension needs --n-max (edges exist for every n above V_max)")
    return cfg


def _exact_spec(spec: PotentialSpec, epsilon: float) -> tuple[PotentialSpec, dict]:
    if isinstance(spec, Lame) and spec.m == 1.0:
        return spec.with_m(1.0 - epsilon), {"m_substituted": True, "epsilon": epsilon}
    return spec, {"m_substituted": False, "epsilon": epsilon}


def _exact_count(spec: PotentialSpec, n_max: int | None, n_wkb: int = 0) -> int:
    if n_max is not None:
        count = 2 * n_max + 1
    elif isinstance(spec, Lame) and spec.a == int(spec.a):
        count = 2 * int(spec.a) + 1
    else:
        # every edge up to V_max, plus the next two
        count = 8
        while True:
            bs = exact_band_edges(spec, count)
            below = sum(e <= spec.v_max for e in bs.energies)
            if below + 2 <= count:
                count = below + 2
                break
            count *= 2
    return max(count, n_wkb)


def run_potential(spec: PotentialSpec, cfg: RunConfig) -> tuple[Report, BandStructure | None, BandStructure | None]:
    wkb = exact = None
    metadata = {"m_substituted": False, "epsilon": cfg.epsilon}
    notes = []
    if cfg.mode in ("wkb", "compare"):
        wkb = band_structure(spec, cfg.n_max, cfg.tol, extension=cfg.extension)
        if cfg.extension:
            metadata["extension"] = True
    if cfg.mode in ("exact", "compare"):
        exact_spec, metadata_exact = _exact_spec(spec, cfg.epsilon)
        metadata.update(metadata_exact)
        count = _exact_count(exact_spec, cfg.n_max, len(wkb) if wkb is not None else 0)
        exact = exact_band_edges(exact_spec, count)
    if cfg.mode == "compare" and wkb is not None and exact is not None and len(wkb) < len(exact):
        notes.append(DASH_NOTE)
    report = build_report(cfg.mode, spec, wkb=wkb, exact=exact, metadata=metadata, notes=notes)
    return report, exact, wkb


def _run_mode(cfg: RunConfig, mode: str) -> list[Report]:
    if cfg.mode != mode:
        cfg = RunConfig(**{**cfg.__dict__, "mode": mode})
    return [run_potential(spec, cfg)[0] for spec in cfg.potentials]


def cmd_wkb(cfg: RunConfig) -> list[Report]:
    """WKB band edges for every potential in ``cfg``."""
    return _run_mode(cfg, "wkb")


def cmd_exact(cfg: RunConfig) -> list[Report]:
    """Hill-equation band edges; ``m = 1`` is replaced by ``1 - cfg.epsilon``."""
    return _run_mode(cfg, "exact")


def cmd_compare(cfg: RunConfig) -> list[Report]:
    """Exact and WKB edges aligned by position, with ``|dE|`` per row."""
    return _run_mode(cfg, "compare")


def render(reports: list[Report], cfg: RunConfig, stamp: str | None) -> str:
    if cfg.fmt == "json":
        if stamp:
            for r in reports:
                r.metadata["timestamp"] = stamp
        return to_json(reports)
    if cfg.fmt == "csv":
        return to_csv(reports, comment=f"generated {stamp}" if stamp else None)
    decimals = 2 if cfg.table1 else None
    parts = []
    for r in reports:
        header = f"# bandedge {r.mode}: V(x) = {r.label}"
        if stamp:
            header += f"  ({stamp})"
        parts.append(format_table(r, decimals=decimals, header=header))
    return "\n".join(parts)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("potential")
    src.add_argument("--lame", nargs=2, type=float, metavar=("A", "M"),
                     help="Lame potential m a(a+1) sn^2(x, m)")
    src.add_argument("--cosine", nargs=2, type=float, metavar=("V0", "L"),
                     help="cosine lattice V0 sin^2(pi x / L)")
    src.add_argument("--tabulated", metavar="PATH",
                     help="two-column x V file on [0, L/2], '#' comments")
    src.add_argument("--table1", action="store_true",
                     help="run the four reference Lame potentials (2 decimals in table output)")
    src.add_argument("--config", metavar="JSON",
                     help="run configuration with a 'potential' block; flags override it")
    common.add_argument("--n-max", type=int, dest="n_max", help="largest quantum number n")
    common.add_argument("--tol", type=float, help=f"energy tolerance (default {DEFAULT_TOL:g})")
    common.add_argument("--format", choices=("table", "csv", "json"), help="output format")
    common.add_argument("--extension", action="store_true",
                        help="also solve above V_max with the forbidden action set to zero")
    common.add_argument("--epsilon", type=float,
                        help=f"m = 1 is replaced by 1 - EPS for the exact solver (default {DEFAULT_EPSILON:g})")
    common.add_argument("--stamp", action="store_true", help="add a timestamp to the output header")
    common.add_argument("-o", "--output", metavar="PATH", help="write the data here instead of stdout")
    common.add_argument("--plot", metavar="PATH", help="also render a band diagram to this image file")

    parser = argparse.ArgumentParser(
        prog="bandedge",
        description="Semiclassical and exact band edges of symmetric periodic potentials.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("wkb", parents=[common], help="WKB band edges")
    sub.add_parser("exact", parents=[common], help="exact band edges from the Hill equation")
    sub.add_parser("compare", parents=[common], help="exact and WKB edges side by side")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (UsageError, DomainError, OSError) as exc:
        print(f"bandedge: error: {exc}", file=sys.stderr)
        return 2

    try:
        results = [run_potential(spec, cfg) for spec in cfg.potentials]
    except DomainError as exc:
        print(f"bandedge: error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"bandedge: numerical failure: {exc}", file=sys.stderr)
        return 1

    reports = [r for r, _, _ in results]
    for r in reports:
        if not r.edges:
            print(f"bandedge: warning: no band edges found for V(x) = {r.label}", file=sys.stderr)

    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds") if cfg.stamp else None
    text = render(reports, cfg, stamp)
    if cfg.output is not None:
        cfg.output.write_text(text)
    else:
        sys.stdout.write(text)

    if cfg.plot is not None:
        from .plotting import plot_band_diagrams

        panels = [(spec, exact, wkb, f"V(x) = {r.label}") for spec, (r, exact, wkb) in zip(cfg.potentials, results)]
        plot_band_diagrams(panels, cfg.plot)
    return 0


if __name__ == "__main__":
    sys.exit(main())
