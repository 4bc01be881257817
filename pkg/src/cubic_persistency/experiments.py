"""Parameter sweeps over the synthetic data sets, aggregated into CSV rows.

Each grid cell runs ``reps`` instances.  Repetition ``r`` uses the seed
``SeedSequence([seed, r])``, the same in every cell, so that neighbouring
cells share graph and noise draws and differ only in the swept parameter.
Aggregates are the median and the quartiles with linear interpolation.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .engine import ALL_CONDITIONS, EngineConfig, reduce, stats
from .generators import GeometricConfig, PartitionConfig, gen_geometric, gen_partition

KEYS = ("alpha", "sigma", "numberOfPoints")
MEASURES = (
    ("EliminatedVariables", "fixed_edge_fraction"),
    ("EliminatedTriangles", "fixed_triple_fraction"),
    ("Duration", "runtime_ns"),
)
COLUMNS = [f"{q}{name}" for name, _ in MEASURES for q in ("median", "q25", "q75")]


@dataclass
class ExperimentSpec:
    """A one-dimensional sweep.

    ``key`` selects the swept parameter: ``alpha`` (partition data),
    ``sigma`` (geometric data) or ``numberOfPoints`` (either; the vertex
    count must be divisible by 8 resp. 9).
    """

    kind: str
    key: str
    values: Sequence[float]
    reps: int = 20
    seed: int = 0
    n: int = 2
    p_edge: float = 1.0
    alpha: float = 0.5
    beta: float = 0.5
    m: int = 2
    sigma: float = 0.1
    k: Optional[int] = None
    conditions: frozenset[str] = frozenset(ALL_CONDITIONS)
    slack: float = 0.0
    time_limit: Optional[float] = None
    timing: bool = True

    def __post_init__(self):
        if self.kind not in ("partition", "geometric"):
            raise ValueError(f"unknown data set {self.kind!r}")
        if self.key not in KEYS:
            raise ValueError(f"unknown sweep key {self.key!r}")
        if self.key == "alpha" and self.kind != "partition":
            raise ValueError("alpha sweeps need the partition data set")
        if self.key == "sigma" and self.kind != "geometric":
            raise ValueError("sigma sweeps need the geometric data set")
        if self.reps < 1:
            raise ValueError("reps must be at least 1")
        if not self.values:
            raise ValueError("empty parameter grid")
        if self.key == "numberOfPoints":
            div = 8 if self.kind == "partition" else 9
            for v in self.values:
                if int(v) != v or int(v) % div:
                    raise ValueError(f"numberOfPoints {v} is not a multiple of {div}")


def rep_seed(seed: int, rep: int) -> int:
    return int(np.random.SeedSequence([seed, rep]).generate_state(1, np.uint64)[0])


def make_instance(spec: ExperimentSpec, value: float, rep: int):
    seed = rep_seed(spec.seed, rep)
    if spec.kind == "partition":
        n = spec.n
        alpha = spec.alpha
        if spec.key == "alpha":
            alpha = float(value)
        elif spec.key == "numberOfPoints":
            n = int(value) // 8
        return gen_partition(PartitionConfig(n, spec.p_edge, alpha, spec.beta, seed))[0]
    m, sigma = spec.m, spec.sigma
    if spec.key == "sigma":
        sigma = float(value)
    elif spec.key == "numberOfPoints":
        m = int(value) // 9
    return gen_geometric(GeometricConfig(m, sigma, spec.k, seed))[0]


def run_cell(spec: ExperimentSpec, value: float) -> dict:
    config = EngineConfig(enabled=spec.conditions, slack=spec.slack,
                          time_limit=spec.time_limit)
    samples: dict[str, list[float]] = {field_: [] for _, field_ in MEASURES}
    for rep in range(spec.reps):
        inst = make_instance(spec, value, rep)
        st = stats(reduce(inst, config))
        if not spec.timing:
            st["runtime_ns"] = 0
        for _, field_ in MEASURES:
            samples[field_].append(st[field_])
    key_value = int(value) if spec.key == "numberOfPoints" else float(value)
    row = {spec.key: key_value}
    for name, field_ in MEASURES:
        q25, med, q75 = np.quantile(np.asarray(samples[field_], dtype=float),
                                    [0.25, 0.5, 0.75], method="linear")
        row[f"median{name}"] = float(med)
        row[f"q25{name}"] = float(q25)
        row[f"q75{name}"] = float(q75)
    return row


def run_experiment(spec: ExperimentSpec) -> list[dict]:
    """One aggregated row per grid value, sorted by the key."""
    return [run_cell(spec, v) for v in sorted(spec.values)]


def dumps_csv(rows: Sequence[dict], key: str) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([key] + COLUMNS)
    for row in rows:
        writer.writerow([repr(row[key])] + [repr(row[c]) for c in COLUMNS])
    return out.getvalue()
