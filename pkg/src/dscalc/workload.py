"""Workload files: a data profile plus deterministic operation generators."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .instance import DataProfile, zipf_weights

OP_KINDS = ("get", "range_get", "update", "bulk_load")


class WorkloadError(ValueError):
    pass


@dataclass(frozen=True)
class Operation:
    op: str
    sid: int
    key: int = 0
    hi: int = 0  # range upper bound


@dataclass(frozen=True)
class WorkloadSpec:
    data: DataProfile
    operations: tuple
    seed: int

    def counts(self) -> dict:
        out: dict = {}
        for op in self.operations:
            out[op.op] = out.get(op.op, 0) + 1
        return out


@dataclass(frozen=True)
class OperationGenerator:
    op: str
    count: int
    distribution: str = "uniform"  # uniform | zipf
    alpha: float = 1.0
    fraction: float = 1.0  # targeted share of the key domain
    width: float = 0.01  # range width as a share of the domain
    offset: float = 0.0  # targeted region start within the domain

    def __post_init__(self):
        if self.op not in OP_KINDS:
            raise WorkloadError("unknown operation kind %r" % self.op)
        if self.count < 0:
            raise WorkloadError("operation count must be >= 0")
        if not (0.0 < self.fraction <= 1.0):
            raise WorkloadError("targeted fraction must be in (0, 1]")
        if self.distribution == "zipf" and self.alpha <= 0:
            raise WorkloadError("zipf alpha must be positive")


@dataclass(frozen=True)
class WorkloadFile:
    data: DataProfile
    generators: tuple
    seed: int

    def to_dict(self) -> dict:
        return {
            "data": self.data.to_dict(),
            "operations": [
                {
                    "op": g.op, "count": g.count, "distribution": g.distribution,
                    "alpha": g.alpha, "fraction": g.fraction, "width": g.width,
                    "offset": g.offset,
                }
                for g in self.generators
            ],
            "seed": self.seed,
        }

    @staticmethod
    def from_dict(doc: dict) -> "WorkloadFile":
        if "seed" not in doc:
            raise WorkloadError("workload file needs an explicit seed")
        gens = tuple(
            OperationGenerator(
                op=g["op"], count=int(g["count"]),
                distribution=g.get("distribution", "uniform"),
                alpha=float(g.get("alpha", 1.0)),
                fraction=float(g.get("fraction", 1.0)),
                width=float(g.get("width", 0.01)),
                offset=float(g.get("offset", 0.0)),
            )
            for g in doc.get("operations", ())
        )
        return WorkloadFile(DataProfile.from_dict(doc["data"]), gens, int(doc["seed"]))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=1)

    @staticmethod
    def load(path) -> "WorkloadFile":
        with open(path) as fh:
            return WorkloadFile.from_dict(json.load(fh))


def _draw_keys(gen: OperationGenerator, domain, rng, count):
    lo, hi = domain
    span = hi - lo
    start = lo + int(gen.offset * span)
    width = max(1, int(gen.fraction * span))
    if gen.distribution == "zipf":
        n_ranks = int(min(width, 10**6))
        weights = zipf_weights(n_ranks, gen.alpha)
        ranks = rng.choice(n_ranks, size=count, p=weights)
        stride = max(1, width // max(1, n_ranks))
        keys = start + ranks.astype(np.int64) * stride
    else:
        keys = rng.integers(start, start + width, size=count, dtype=np.int64)
    return np.clip(keys, lo, hi - 1)


def generate_workload(wf: WorkloadFile) -> WorkloadSpec:
    """Materialize concrete operations; identical seeds give identical ops."""
    rng = np.random.default_rng(np.random.SeedSequence([wf.seed, 0x0b5]))
    ops = []
    sid = 0
    for gen in wf.generators:
        if gen.count == 0:
            continue
        if gen.op == "bulk_load":
            for _ in range(gen.count):
                sid += 1
                ops.append(Operation("bulk_load", sid))
            continue
        keys = _draw_keys(gen, wf.data.key_domain, rng, gen.count)
        if gen.op == "range_get":
            span = wf.data.key_domain[1] - wf.data.key_domain[0]
            width = max(1, int(gen.width * span))
            for k in keys.tolist():
                sid += 1
                ops.append(Operation("range_get", sid, key=int(k),
                                     hi=min(int(k) + width, wf.data.key_domain[1] - 1)))
        else:
            for k in keys.tolist():
                sid += 1
                ops.append(Operation(gen.op, sid, key=int(k)))
    return WorkloadSpec(data=wf.data, operations=tuple(ops), seed=wf.seed)


def base_reference_workload(entry_count: int = 100_000, gets: int = 100,
                            seed: int = 42) -> WorkloadFile:
    """Uniform integer load plus a batch of uniform point lookups."""
    return WorkloadFile(
        data=DataProfile(entry_count=entry_count),
        generators=(OperationGenerator("get", gets),),
        seed=seed,
    )
