"""Command-line front end: ``spectraflow <command> --config run.json``.

Commands write deterministic CSV files into the output directory
(``converge`` prints one JSON object instead).  Exit codes: 0 success,
2 configuration error, 3 numerical failure, 4 truncation cap reached.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import svg
from .eigensolve import ConvergenceError
from .hilbert import Model, ModelParams
from .observables import histogram, uncertainty_records
from .spectra import TruncationCapError, find_crossings, sweep, track_lines, truncation_scan

log = logging.getLogger("spectraflow")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_CAP = 0, 2, 3, 4
COMMANDS = ("spectrum", "crossings", "uncertainty", "histogram", "converge")

SPECTRUM_HEADER = ("g", "line_id", "sorted_index", "energy", "parity")
CROSSINGS_HEADER = ("g_star", "energy", "line_a", "line_b", "min_gap", "kind")
UNCERTAINTY_HEADER = ("g", "eigen_index", "sx", "sz", "dsx", "dsy", "delta")
HISTOGRAM_HEADER = ("bin_lo", "bin_hi", "count", "probability")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    model: str = "RABI"
    omega: float = 1.0
    omega0: float | None = None
    epsilon: float = 0.0
    g_min: float = 0.0
    g_max: float = 1.5
    g_steps: int = 151
    levels: int = 50
    n_cut: int | str = "auto"
    tol: float = 1e-8
    histogram_g: float = 1.2
    n_bins: int = 25
    output_dir: str = "."

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        try:
            cfg = cls(**raw)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
        cfg.check()
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        try:
            raw = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
        return cls.from_dict(raw)

    def check(self):
        def number(name, integer=False):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{name} must be a number, got {value!r}")
            if integer and int(value) != value:
                raise ConfigError(f"{name} must be an integer, got {value!r}")
            if not np.isfinite(value):
                raise ConfigError(f"{name} must be finite")

        for name in ("omega", "epsilon", "g_min", "g_max", "tol", "histogram_g"):
            number(name)
        for name in ("g_steps", "levels", "n_bins"):
            number(name, integer=True)
        if self.omega0 is not None:
            number("omega0")
        if not self.g_min < self.g_max:
            raise ConfigError(f"need g_min < g_max, got {self.g_min} >= {self.g_max}")
        if self.g_steps < 2:
            raise ConfigError("g_steps must be >= 2")
        if self.levels < 1:
            raise ConfigError("levels must be >= 1")
        if self.n_bins < 2:
            raise ConfigError("n_bins must be >= 2")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.n_cut != "auto":
            number("n_cut", integer=True)
            if self.n_cut < 2:
                raise ConfigError("n_cut must be 'auto' or an integer >= 2")
            if self.levels > self.n_cut:
                raise ConfigError(f"levels={self.levels} exceeds n_cut={self.n_cut}")
        try:
            self.params()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if Model.parse(self.model) is Model.JC and self.epsilon != 0:
            raise ConfigError("the JC model takes no epsilon")

    def params(self) -> ModelParams:
        return ModelParams(self.model, self.omega, self.omega0, 0.0, self.epsilon)

    def grid(self) -> np.ndarray:
        return np.linspace(self.g_min, self.g_max, int(self.g_steps))


def fmt(x: float) -> str:
    """12 significant digits; negative zero printed as 0."""
    x = float(x) + 0.0
    return f"{x:.12g}"


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def resolve_n_cut(cfg: RunConfig, g_extent: float) -> int:
    if cfg.n_cut != "auto":
        return int(cfg.n_cut)
    return truncation_scan(cfg.params(), int(cfg.levels), cfg.tol, g_extent).n_cut


def _g_extent(cfg: RunConfig, *extra: float) -> float:
    return max(abs(cfg.g_min), abs(cfg.g_max), *(abs(e) for e in extra))


# -- commands ----------------------------------------------------------------
# Each builder returns the CSV text; run() is the single writer.

def spectrum_csv(cfg: RunConfig) -> str:
    p = cfg.params()
    n_cut = resolve_n_cut(cfg, _g_extent(cfg))
    flow = track_lines(sweep(p, cfg.grid(), int(cfg.levels), n_cut))
    rows = []
    for k, g in enumerate(flow.g_grid):
        position = np.argsort(flow.line_ids[k])
        for line in range(flow.levels):
            i = position[line]
            rows.append((fmt(g), str(line), str(i), fmt(flow.energies[k, i]),
                         str(int(flow.parities[k, i]))))
    return _csv(SPECTRUM_HEADER, rows)


def crossings_csv(cfg: RunConfig) -> str:
    p = cfg.params()
    n_cut = resolve_n_cut(cfg, _g_extent(cfg))
    flow = track_lines(sweep(p, cfg.grid(), int(cfg.levels), n_cut))
    rows = [(fmt(c.g_star), fmt(c.energy), str(c.line_a), str(c.line_b), fmt(c.min_gap),
             c.kind.value) for c in find_crossings(p, flow)]
    return _csv(CROSSINGS_HEADER, rows)


def uncertainty_csv(cfg: RunConfig) -> str:
    p = cfg.params()
    n_cut = resolve_n_cut(cfg, _g_extent(cfg))
    records = uncertainty_records(sweep(p, cfg.grid(), int(cfg.levels), n_cut))
    rows = [(fmt(r.g), str(r.eigen_index), fmt(r.sx), fmt(r.sz), fmt(r.dsx), fmt(r.dsy),
             fmt(r.delta)) for r in records]
    return _csv(UNCERTAINTY_HEADER, rows)


def histogram_csv(cfg: RunConfig) -> str:
    p = cfg.params()
    n_cut = resolve_n_cut(cfg, _g_extent(cfg, cfg.histogram_g))
    records = uncertainty_records(sweep(p, [cfg.histogram_g], int(cfg.levels), n_cut))
    hist = histogram(records, int(cfg.n_bins))
    rows = [(fmt(lo), fmt(hi), str(c), fmt(pr)) for lo, hi, c, pr in hist.rows()]
    return _csv(HISTOGRAM_HEADER, rows)


def converge_report(cfg: RunConfig) -> dict:
    """Truncation scan at the configured ``g_max`` (not the grid extent)."""
    g_max = float(cfg.g_max)
    report = truncation_scan(cfg.params(), int(cfg.levels), cfg.tol, g_max)
    return {
        "model": Model.parse(cfg.model).value,
        "levels": int(cfg.levels),
        "g_max": g_max,
        "tol": cfg.tol,
        "n_cut": report.n_cut,
        "history": [{"n_cut": n, "max_change": change} for n, change in report.history],
        "eigenvalues": [float(v) for v in report.values],
    }


_TABLES = {
    "spectrum": ("spectrum.csv", spectrum_csv, svg.spectrum_svg),
    "crossings": ("crossings.csv", crossings_csv, None),
    "uncertainty": ("uncertainty.csv", uncertainty_csv, svg.uncertainty_svg),
    "histogram": ("histogram.csv", histogram_csv, svg.histogram_svg),
}


def run(command: str, cfg: RunConfig, out_dir: Path, want_svg: bool = False) -> list[Path]:
    """Execute one table-producing command and write its files."""
    name, build, render = _TABLES[command]
    text = build(cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = [out_dir / name]
    written[0].write_text(text)
    if want_svg and render is not None:
        target = out_dir / name.replace(".csv", ".svg")
        target.write_text(render(text))
        written.append(target)
    return written


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectraflow",
        description="Level crossings and qubit uncertainty products of Rabi-type models.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--out", help="output directory (overrides output_dir)")
    parser.add_argument("--svg", action="store_true", help="also write an SVG plot")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = RunConfig.load(args.config)
        if args.command == "converge":
            print(json.dumps(converge_report(cfg)))
        else:
            out_dir = Path(args.out if args.out is not None else cfg.output_dir)
            for path in run(args.command, cfg, out_dir, args.svg):
                log.info("wrote %s", path)
    except ConfigError as exc:
        print(f"spectraflow: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TruncationCapError as exc:
        print(f"spectraflow: truncation cap reached: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ConvergenceError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"spectraflow: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
