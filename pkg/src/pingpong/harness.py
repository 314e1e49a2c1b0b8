"""Experiment orchestration: enumerate, sample, certify, cross-check, report.

A run walks a grid of radii; per radius it enumerates the ball, samples
generator pairs, measures trace/gap/proximality/certificate fractions,
runs the exact word oracle on every certified pair (any falsification
there aborts the run -- it would disprove the implementation, so it is an
invariant violation, not a data point) and on an equal-sized control
group of uncertified pairs, and attaches Lyapunov estimates for a few
sampled pairs.  Everything derives from the config seed, so a re-run is
byte-identical.
"""

from __future__ import annotations

import io
import statistics
from dataclasses import asdict, dataclass

from . import serialize
from .certify import (
    choose_k,
    hausdorff_upper_bound,
    ping_pong_pair,
    schottky_sl2,
    very_proximal,
)
from .dynamics import estimate_lyapunov, falsify_freeness
from .errors import ConfigError, InvariantViolation
from .matrices import IntMatrix, inverse
from .sampler import BallSpec, enumerate_ball, sample_pairs
from .spectral import singular_gap

__version__ = "0.1.0"

LYAPUNOV_PAIRS = 10
LYAPUNOV_M = 200
LYAPUNOV_TRIALS = 4

CSV_COLUMNS = [
    "x",
    "count_ball",
    "frac_trace_large",
    "frac_gapped",
    "frac_very_proximal",
    "frac_pingpong",
    "frac_schottky",
    "median_hausdorff_bound",
    "oracle_falsifications",
    "control_falsified",
    "lyapunov_mean",
]


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    x_grid: tuple
    symmetrized: bool
    pairs_per_x: int
    eps: float = 0.2
    r: float = 0.5
    eta: float = 5.0
    oracle_depth: int = 8
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "x_grid", tuple(self.x_grid))
        if not self.x_grid:
            raise ConfigError("x_grid must be non-empty")
        if not 0 < self.eps < 0.25:
            raise ConfigError(f"need 0 < eps < 1/4, got {self.eps}")
        if not self.r > 2 * self.eps:
            raise ConfigError(f"need r > 2*eps, got r = {self.r}, eps = {self.eps}")
        if self.eta <= 1:
            raise ConfigError("eta must be > 1")
        if not 1 <= self.oracle_depth <= 12:
            raise ConfigError("oracle_depth must be in [1, 12]")
        if self.pairs_per_x < 1:
            raise ConfigError("pairs_per_x must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")


@dataclass(frozen=True)
class ExperimentReport:
    rows: tuple
    provenance: dict


def _required_gap_positions(n: int) -> list[int]:
    # even n: position n/2 covers g and g^-1; odd n: positions k, k+1 do
    k = choose_k(n)
    return [k] if n % 2 == 0 else [k, k + 1]


def _is_gapped(g: IntMatrix, positions, eta: float) -> bool:
    return all(singular_gap(g, p) >= eta * eta for p in positions)


def run_experiment(cfg: ExperimentConfig, cache_dir: str | None = None) -> ExperimentReport:
    k = choose_k(cfg.n)
    positions = _required_gap_positions(cfg.n)
    rows = []
    for xi, x in enumerate(cfg.x_grid):
        enum = enumerate_ball(BallSpec(cfg.n, x, cfg.symmetrized), cache_dir=cache_dir)
        pairs = sample_pairs(enum, cfg.pairs_per_x, seed=[cfg.seed, xi])
        n_pairs = len(pairs)

        trace_large = 0
        gapped = 0
        very_prox = 0
        pingpong = 0
        schottky_count = 0
        certified_pairs = []
        uncertified_pairs = []
        hausdorff_bounds = []

        for g1, g2 in pairs:
            if abs(g1.trace()) > 2 and abs(g2.trace()) > 2:
                trace_large += 1
            if _is_gapped(g1, positions, cfg.eta) and _is_gapped(g2, positions, cfg.eta):
                gapped += 1
            vp_both = (
                very_proximal(g1, k, cfg.r, cfg.eps) is not None
                and very_proximal(g2, k, cfg.r, cfg.eps) is not None
            )
            if vp_both:
                very_prox += 1
            pp = ping_pong_pair(g1, g2, k, cfg.r, cfg.eps)
            if pp is not None:
                pingpong += 1
            certified = pp is not None
            if cfg.n == 2:
                sc = schottky_sl2(g1, g2)
                if sc is not None:
                    schottky_count += 1
                    certified = True
                    bound = hausdorff_upper_bound(sc)
                    if bound is not None:
                        hausdorff_bounds.append(bound)
            if certified:
                certified_pairs.append((g1, g2))
            else:
                uncertified_pairs.append((g1, g2))

        falsifications = 0
        for g1, g2 in certified_pairs:
            word = falsify_freeness(g1, g2, cfg.oracle_depth)
            if word is not None:
                raise InvariantViolation(
                    "certified pair falsified by the exact word oracle: "
                    f"word {word!r} is the identity for g1 = {g1}, g2 = {g2} "
                    f"(x = {x}, seed = {cfg.seed})"
                )
        control_falsified = 0
        for g1, g2 in uncertified_pairs[: len(certified_pairs)]:
            if falsify_freeness(g1, g2, cfg.oracle_depth) is not None:
                control_falsified += 1

        lyap_means = []
        for pi, (g1, g2) in enumerate(pairs[:LYAPUNOV_PAIRS]):
            gens = [g1, inverse(g1), g2, inverse(g2)]
            est = estimate_lyapunov(
                gens, None, LYAPUNOV_M, LYAPUNOV_TRIALS, cfg.seed, extra_key=(xi, pi)
            )
            lyap_means.append(est.mean)

        rows.append(
            {
                "x": float(x),
                "count_ball": enum.count,
                "frac_trace_large": trace_large / n_pairs,
                "frac_gapped": gapped / n_pairs,
                "frac_very_proximal": very_prox / n_pairs,
                "frac_pingpong": pingpong / n_pairs,
                "frac_schottky": (schottky_count / n_pairs) if cfg.n == 2 else None,
                "median_hausdorff_bound": (
                    statistics.median(hausdorff_bounds) if hausdorff_bounds else None
                ),
                "oracle_falsifications": falsifications,
                "control_falsified": control_falsified,
                "lyapunov_mean": (
                    sum(lyap_means) / len(lyap_means) if lyap_means else None
                ),
            }
        )

    # gap thresholds imply contraction thresholds only when eta <= 1/eps
    if cfg.eta <= 1.0 / cfg.eps:
        for row in rows:
            chain = (
                row["frac_pingpong"] <= row["frac_very_proximal"] + 1e-12
                and row["frac_very_proximal"] <= row["frac_gapped"] + 1e-12
            )
            if not chain:
                raise InvariantViolation(
                    f"fraction chain violated at x = {row['x']}: {row}"
                )

    provenance = {
        "config": asdict(cfg),
        "version": __version__,
        # wall-clock timing stays out of the canonical report so identical
        # configs re-emit byte-identical files
        "timing_seconds": None,
    }
    return ExperimentReport(tuple(rows), provenance)


def report_to_json(rep: ExperimentReport) -> str:
    obj = {
        "rows": [
            {col: row[col] for col in CSV_COLUMNS} for row in rep.rows
        ],
        "provenance": {
            "config": {
                k: (list(v) if isinstance(v, tuple) else v)
                for k, v in rep.provenance["config"].items()
            },
            "version": rep.provenance["version"],
            "timing_seconds": rep.provenance["timing_seconds"],
        },
    }
    return serialize.canonical_json(obj)


def report_to_csv(rep: ExperimentReport) -> str:
    out = io.StringIO()
    out.write(",".join(CSV_COLUMNS) + "\n")
    for row in rep.rows:
        cells = []
        for col in CSV_COLUMNS:
            v = row[col]
            if v is None:
                cells.append("")
            elif isinstance(v, bool):
                cells.append(str(v).lower())
            elif isinstance(v, int):
                cells.append(str(v))
            else:
                cells.append(serialize.format_float(v))
        out.write(",".join(cells) + "\n")
    return out.getvalue()


def emit_report(rep: ExperimentReport, fmt: str, path: str | None = None) -> str:
    """Render the report as 'csv' or 'json'; optionally write it to path."""
    if fmt == "csv":
        text = report_to_csv(rep)
    elif fmt == "json":
        text = report_to_json(rep)
    else:
        raise ConfigError(f"unknown report format {fmt!r}")
    if path is not None:
        try:
            with open(path, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write report to {path}: {exc}") from exc
    return text


def config_from_obj(obj) -> ExperimentConfig:
    if not isinstance(obj, dict):
        raise ConfigError("experiment config must be a JSON object")
    known = {
        "n",
        "x_grid",
        "symmetrized",
        "pairs_per_x",
        "eps",
        "r",
        "eta",
        "oracle_depth",
        "seed",
    }
    unknown = set(obj) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    missing = {"n", "x_grid", "symmetrized", "pairs_per_x"} - set(obj)
    if missing:
        raise ConfigError(f"missing config keys: {sorted(missing)}")
    try:
        return ExperimentConfig(**obj)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
