"""Random instances and the feasibility-rate experiment.

Points are integer pixels of a ``width x height`` area drawn with numpy's
PCG64 generator.  x- and y-coordinates are sampled without replacement, so
every instance is in general position by construction.  An instance is
seeded with ``SeedSequence([seed, k, l])`` and trial ``t`` of an experiment
uses ``seed * 1000003 + t``, so every cell is reproducible on its own and
independent of scheduling.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exact import solve_bep
from .model import ColoredPointSet, Point, validate_planarity

PRNG = "numpy.PCG64"
DEFAULT_AREA = (1024, 768)
MAX_EXACT_K = 12
TRIAL_STRIDE = 1_000_003
CSV_FIELDS = ("k", "l", "feasible", "trials", "rate", "seed")


def default_seed() -> int:
    return int(os.environ.get("BUSEMBED_SEED", "0"))


def _rng(*key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(v) for v in key])))


def generate_random(k: int, l: int, seed: int, area: Tuple[int, int] = DEFAULT_AREA) -> ColoredPointSet:
    """``k`` colors with ``l`` points each at distinct integer x and distinct integer y."""
    width, height = area
    n = k * l
    if k < 1 or l < 1:
        raise ValueError("k and l must be positive")
    if n > width or n > height:
        raise ValueError(f"{n} points do not fit a {width}x{height} grid in general position")
    rng = _rng(seed, k, l)
    xs = rng.choice(width, size=n, replace=False)
    ys = rng.choice(height, size=n, replace=False)
    pts = [Point(int(xs[j]), int(ys[j]), f"c{j // l}") for j in range(n)]
    return ColoredPointSet(pts, [f"c{i}" for i in range(k)], {"generator": "random", "seed": seed, "prng": PRNG})


@dataclass(frozen=True)
class ExperimentConfig:
    k_values: Tuple[int, ...] = tuple(range(3, MAX_EXACT_K + 1))
    l_values: Tuple[int, ...] = (2, 3, 4)
    trials: int = 100
    area: Tuple[int, int] = DEFAULT_AREA
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.k_values or min(self.k_values) < 3:
            raise ValueError("k must be at least 3")
        if not self.l_values or min(self.l_values) < 2:
            raise ValueError("l must be at least 2")
        if max(self.k_values) > MAX_EXACT_K:
            raise ValueError(f"k above {MAX_EXACT_K} exceeds the exact solver budget")


@dataclass(frozen=True)
class Cell:
    k: int
    l: int
    feasible: Optional[int]
    trials: int
    seed: int

    @property
    def rate(self) -> Optional[float]:
        return None if self.feasible is None else self.feasible / self.trials

    @property
    def complete(self) -> bool:
        return self.feasible is not None


def _run_cell(args) -> Cell:
    k, l, trials, area, seed = args
    feasible = 0
    try:
        for t in range(trials):
            inst = generate_random(k, l, seed * TRIAL_STRIDE + t, area)
            result = solve_bep(inst)
            if result:
                if validate_planarity(inst, result):  # pragma: no cover - solver bug guard
                    raise AssertionError(f"invalid layout for k={k}, l={l}, trial {t}")
                feasible += 1
    except (TimeoutError, MemoryError):
        return Cell(k, l, None, trials, seed)
    return Cell(k, l, feasible, trials, seed)


def run_experiment(cfg: ExperimentConfig) -> List[Cell]:
    """Feasible counts per ``(k, l)``, in ``(k, l)`` order whatever the worker count."""
    jobs = [(k, l, cfg.trials, cfg.area, cfg.seed) for k in cfg.k_values for l in cfg.l_values]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            cells = list(pool.map(_run_cell, jobs))
    else:
        cells = [_run_cell(j) for j in jobs]
    return sorted(cells, key=lambda c: (c.k, c.l))


def rate_table(cells: Sequence[Cell]) -> Dict[Tuple[int, int], Optional[float]]:
    return {(c.k, c.l): c.rate for c in cells}


def to_csv(cells: Sequence[Cell], cfg: ExperimentConfig) -> str:
    """CSV with a ``#`` comment line naming the generator, then the table."""
    buf = io.StringIO()
    buf.write(f"# prng={PRNG} area={cfg.area[0]}x{cfg.area[1]} solver=exact\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for c in cells:
        rate = "incomplete" if c.rate is None else f"{c.rate:.4f}"
        w.writerow([c.k, c.l, "" if c.feasible is None else c.feasible, c.trials, rate, c.seed])
    return buf.getvalue()


def read_csv(text: str) -> List[Cell]:
    rows = csv.DictReader(line for line in text.splitlines() if not line.startswith("#"))
    out = []
    for r in rows:
        feasible = None if r["feasible"] == "" else int(r["feasible"])
        out.append(Cell(int(r["k"]), int(r["l"]), feasible, int(r["trials"]), int(r["seed"])))
    return out
