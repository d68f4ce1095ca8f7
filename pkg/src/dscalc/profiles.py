"""Profile construction helpers.

``train_and_fit`` produces the real thing by benchmarking the host.
``synthetic_profile`` fits the same model families to a plausible noiseless
machine law; it is deterministic and instant, which makes it the right
fixture for engine tests and a usable stand-in before training.
"""

from __future__ import annotations

import math

import numpy as np

from . import bench
from .models import HardwareProfile, fit, fit_profile

_L1, _L2, _L3 = 48 * 1024, 1.25 * 2**20, 20 * 2**20


def _steps(x, c, y0, k=4.0):
    lnx = np.log(x)
    total = np.full_like(lnx, y0, dtype=float)
    for ci, xi in zip(c, (math.log(_L1), math.log(_L2), math.log(_L3))):
        total += ci / (1.0 + np.exp(-k * (lnx - xi)))
    return total


def _law(variant: str, X: np.ndarray) -> np.ndarray:
    x = X[:, 0].astype(float)
    if variant.startswith("scan_scalar"):
        return 0.45e-9 * x + 6e-9
    if variant.startswith("scan_simd"):
        return 0.12e-9 * x + 8e-9
    if variant.startswith("sorted_search_binary"):
        return 1e-13 * x + 2.2e-9 * np.log(x) + 1.1e-8
    if variant.startswith("sorted_search_interp"):
        return 1e-13 * x + 0.4e-9 * np.log(x) + 2.6e-9 * np.log(np.log(x)) + 1.2e-8
    if variant.startswith("hash_probe"):
        return _steps(x, (2e-9, 7e-9, 5.2e-8), 4e-9)
    if variant == "random_access":
        return _steps(x, (2e-9, 8e-9, 6e-8), 2.5e-9)
    if variant == "batched_random_access":
        return _steps(x, (0.5e-9, 2e-9, 9e-9), 1.5e-9)
    if variant.startswith("sort_"):
        scale = {"sort_quicksort": 1.0, "sort_mergesort": 1.15,
                 "sort_external_mergesort": 1.3}[variant]
        return scale * (3.2e-9 * x * np.log(x) + 1.5e-9 * x) + 1e-7
    if variant.startswith("bloom_probe"):
        m = X[:, 1].astype(float)
        base = _steps(x, (1e-9, 3e-9, 2.4e-8), 4e-9)
        per = _steps(x, (0.5e-9, 1.5e-9, 1.2e-8), 2e-9)
        return base + (m - 1.0) * per
    if variant.startswith("write_unordered"):
        return 0.11e-9 * x + 2.5e-8
    if variant.startswith("write_ordered"):
        w, n = X[:, 0].astype(float), X[:, 1].astype(float)
        return 0.14e-9 * w + 0.12e-9 * n + 4e-8
    if variant == "write_scattered":
        m = X[:, 1].astype(float)
        per = _steps(x, (1.5e-9, 6e-9, 4.5e-8), 3e-9)
        return m * per + 5e-8
    raise ValueError("no synthetic law for %r" % variant)


def synthetic_profile(machine_id: str = "synthetic", seed: int = 0) -> HardwareProfile:
    entries = {}
    for vid, variant in bench.VARIANTS.items():
        X = np.asarray([list(row) for row in variant.grid], dtype=float)
        Y = _law(vid, X)
        entries[vid] = fit(variant.family, X, Y,
                           param_names=variant.param_names, seed=seed)
    return HardwareProfile(machine_id=machine_id, entries=entries,
                           created_at="1970-01-01T00:00:00")


def train_and_fit(seed: int = 0, backend=None, variants=None, progress=None,
                  machine: str | None = None) -> tuple:
    """Benchmark the host and fit a profile; returns (profile, runs)."""
    runs = bench.train_all(seed=seed, backend=backend, variants=variants,
                           progress=progress)
    profile = fit_profile(runs, machine=machine, seed=seed)
    return profile, runs
