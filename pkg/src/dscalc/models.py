"""Latency model families and hardware profiles.

Seven families cover every access primitive: four linear-in-basis forms
fitted by (non-negative) least squares, two sigmoid-step forms fitted by
initialized nonlinear refinement, and a weighted nearest-neighbor fallback
that keeps its training data. A hardware profile is the set of fitted
models for one machine.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import curve_fit, nnls

from .bench import BenchmarkRun, VARIANTS

LN10 = float(np.log(10.0))

FAMILIES = (
    "linear", "loglinear", "logloglinear", "nlogn",
    "sigmoids", "sum_sigmoids2", "wknn",
)

#: families whose prediction is nondecreasing in the size argument once all
#: coefficients are non-negative
MONOTONE_FAMILIES = ("linear", "loglinear", "nlogn", "sigmoids")

#: coefficient non-negativity per family ("logloglinear" is unconstrained)
CONSTRAINED = ("linear", "loglinear", "nlogn", "sigmoids", "sum_sigmoids2")


class FitError(ValueError):
    pass


@dataclass
class FittedModel:
    family: str
    coefficients: dict
    param_names: tuple
    trained_range: dict  # param -> [min, max]
    fit_quality: dict = field(default_factory=dict)
    flags: tuple = ()
    training_X: list | None = None  # wknn only
    training_Y: list | None = None

    def to_dict(self) -> dict:
        doc = {
            "family": self.family,
            "coefficients": {k: (list(v) if isinstance(v, (list, tuple, np.ndarray)) else float(v))
                             for k, v in self.coefficients.items()},
            "param_names": list(self.param_names),
            "trained_range": {k: list(v) for k, v in self.trained_range.items()},
            "fit_quality": self.fit_quality,
            "flags": list(self.flags),
        }
        if self.training_X is not None:
            doc["training_X"] = self.training_X
            doc["training_Y"] = self.training_Y
        return doc

    @staticmethod
    def from_dict(doc: dict) -> "FittedModel":
        coeff = {
            k: (np.asarray(v, dtype=float) if isinstance(v, list) else float(v))
            for k, v in doc["coefficients"].items()
        }
        return FittedModel(
            family=doc["family"],
            coefficients=coeff,
            param_names=tuple(doc["param_names"]),
            trained_range={k: tuple(v) for k, v in doc["trained_range"].items()},
            fit_quality=dict(doc.get("fit_quality", {})),
            flags=tuple(doc.get("flags", ())),
            training_X=doc.get("training_X"),
            training_Y=doc.get("training_Y"),
        )

    @property
    def monotone(self) -> bool:
        if self.family not in MONOTONE_FAMILIES:
            return False
        return all(
            np.all(np.asarray(v) >= 0) for v in self.coefficients.values()
        )


# ---------------------------------------------------------------------------
# basis families


def _basis(family: str, X: np.ndarray) -> tuple:
    """Design matrix columns (no intercept) and their names."""
    x0 = X[:, 0]
    rest = [X[:, j] for j in range(1, X.shape[1])]
    rest_names = ["p%d" % j for j in range(1, X.shape[1])]
    if family == "linear":
        cols, names = [x0], ["w"]
    elif family == "loglinear":
        if np.any(x0 <= 0):
            raise FitError("log of non-positive parameter")
        cols, names = [x0, np.log(x0)], ["c1", "c2"]
    elif family == "logloglinear":
        if np.any(x0 <= 1):
            raise FitError("log log needs parameters > 1")
        cols, names = [x0, np.log(x0), np.log(np.log(x0))], ["c1", "c2", "c3"]
    elif family == "nlogn":
        if np.any(x0 <= 0):
            raise FitError("log of non-positive parameter")
        cols, names = [x0 * np.log(x0), x0], ["c1", "c2"]
    else:
        raise FitError("not a basis family: %r" % family)
    return cols + rest, names + rest_names


def _fit_basis(family: str, X: np.ndarray, Y: np.ndarray) -> dict:
    cols, names = _basis(family, X)
    A = np.column_stack(cols + [np.ones(len(Y))])
    names = names + ["y0"]
    if len(Y) < A.shape[1]:
        raise FitError("need at least %d rows for %s" % (A.shape[1], family))
    if np.linalg.matrix_rank(A) < A.shape[1]:
        bad = [names[j] for j in range(A.shape[1])
               if np.allclose(A[:, j], A[:, 0]) and j > 0]
        raise FitError("singular design matrix (collinear columns: %s)"
                       % (", ".join(bad) or "unknown"))
    scale = np.linalg.norm(A, axis=0)
    scale[scale == 0] = 1.0
    if family in CONSTRAINED:
        sol, _ = nnls(A / scale, Y)
    else:
        sol, *_ = np.linalg.lstsq(A / scale, Y, rcond=None)
    coef = sol / scale
    return dict(zip(names, coef.tolist()))


def _eval_basis(family: str, coef: dict, X: np.ndarray) -> np.ndarray:
    cols, names = _basis(family, X)
    out = np.full(X.shape[0], coef["y0"], dtype=float)
    for col, name in zip(cols, names):
        out = out + coef[name] * col
    return out


# ---------------------------------------------------------------------------
# sigmoid families


def _sigmoid_eval(lnx, c, kk, xi, y0):
    acc = np.full_like(lnx, y0, dtype=float)
    for ci, ki, xii in zip(c, kk, xi):
        expo = np.clip(-ki * (lnx - xii), -700.0, 700.0)
        acc = acc + ci / (1.0 + np.exp(expo))
    return acc


def _rate_of_change_guesses(lnx, Y, k, window_ln):
    """The k highest local maxima of dY/dlnx over windows of the given size."""
    order = np.argsort(lnx)
    lnx, Y = lnx[order], Y[order]
    slopes, centers = [], []
    j = 0
    for i in range(len(lnx)):
        j = i + 1
        while j < len(lnx) and lnx[j] - lnx[i] < window_ln:
            j += 1
        if j >= len(lnx):
            break
        slopes.append((Y[j] - Y[i]) / (lnx[j] - lnx[i]))
        centers.append(0.5 * (lnx[j] + lnx[i]))
    slopes, centers = np.asarray(slopes), np.asarray(centers)
    if len(slopes) == 0:
        return None
    is_max = np.ones(len(slopes), dtype=bool)
    if len(slopes) > 1:
        is_max[1:] &= slopes[1:] >= slopes[:-1]
        is_max[:-1] &= slopes[:-1] >= slopes[1:]
    cand = np.where(is_max)[0]
    cand = cand[np.argsort(slopes[cand])[::-1]]
    picks = []
    for idx in cand:
        if all(abs(centers[idx] - centers[p]) > window_ln for p in picks):
            picks.append(idx)
        if len(picks) == k:
            break
    while len(picks) < k:
        # pad with evenly spaced guesses
        picks.append(None)
    guesses = []
    spread = np.linspace(lnx[0], lnx[-1], k + 2)[1:-1]
    for i, p in enumerate(picks):
        guesses.append(centers[p] if p is not None else spread[i])
    return np.sort(np.asarray(guesses))


def _fit_sigmoids(X, Y, k, seed=0):
    """Step guesses come from rate-of-change maxima; refinement weights
    residuals relative to the observation, since latencies span decades and
    benchmark noise is multiplicative."""
    lnx = np.log(X[:, 0].astype(float))
    lny = np.log(np.maximum(Y, 1e-30))
    sigma = np.maximum(Y, float(Y.max()) * 1e-9)
    rng = np.random.default_rng(seed)
    best = None
    flags = ()
    for z in (0.1, 0.5, 1.0):
        xi0 = _rate_of_change_guesses(lnx, lny, k, z * LN10)
        if xi0 is None:
            continue
        c0 = rng.uniform(0.1, 1.0, k) * max(Y.max() - Y.min(), 1e-12)
        k0 = rng.uniform(0.5, 1.0, k) * 4.0
        y00 = max(float(Y[np.argmin(lnx)]), 0.0)
        p0 = np.concatenate([c0, k0, xi0, [y00]])
        lo = np.concatenate([np.zeros(k), np.zeros(k),
                             np.full(k, lnx.min() - 2.0), [0.0]])
        hi = np.concatenate([np.full(k, np.inf), np.full(k, 80.0),
                             np.full(k, lnx.max() + 2.0), [np.inf]])

        def f(x, *params):
            c, kk, xi = params[:k], params[k:2 * k], params[2 * k:3 * k]
            return _sigmoid_eval(np.log(x), c, kk, xi, params[-1])

        try:
            popt, _ = curve_fit(f, X[:, 0].astype(float), Y, p0=p0,
                                bounds=(lo, hi), sigma=sigma,
                                absolute_sigma=False, maxfev=20000)
            cur_flags = ()
        except Exception:
            popt = p0
            cur_flags = ("non_convergent",)
        pred = f(X[:, 0].astype(float), *popt)
        score = float(np.sum(((pred - Y) / sigma) ** 2))
        if best is None or score < best[0]:
            best = (score, popt, cur_flags)
    if best is None:
        raise FitError("cannot initialize sigmoid steps")
    _, popt, flags = best
    rss = float(np.sum((_sigmoid_eval(lnx, popt[:k], popt[k:2 * k],
                                      popt[2 * k:3 * k], popt[-1]) - Y) ** 2))
    c, kk, xi, y0 = popt[:k], popt[k:2 * k], popt[2 * k:3 * k], popt[-1]
    order = np.argsort(xi)
    return {
        "c": np.asarray(c)[order].tolist(),
        "k": np.asarray(kk)[order].tolist(),
        "x": np.asarray(xi)[order].tolist(),
        "y0": float(y0),
    }, rss, flags


def _eval_sigmoids(coef, X):
    lnx = np.log(np.asarray(X[:, 0], dtype=float))
    return _sigmoid_eval(lnx, coef["c"], coef["k"], coef["x"], coef["y0"])


def _fit_sum_sigmoids2(X, Y, k, seed=0):
    """Two-input family: steps shared in x, second input m scales one term."""
    x = X[:, 0].astype(float)
    m = X[:, 1].astype(float)
    lnx = np.log(x)
    rng = np.random.default_rng(seed)
    m_lo = m == m.min()
    xi0 = _rate_of_change_guesses(
        lnx[m_lo], np.log(np.maximum(Y[m_lo], 1e-30)), k, 0.5 * LN10
    )
    if xi0 is None:
        xi0 = np.linspace(lnx.min(), lnx.max(), k + 2)[1:-1]
    spread = max(Y.max() - Y.min(), 1e-12)
    p0 = np.concatenate([
        rng.uniform(0.1, 1.0, k) * spread,          # c1
        rng.uniform(0.1, 1.0, k) * spread,          # c2
        rng.uniform(0.5, 1.0, k) * 4.0,             # k
        xi0,                                        # x
        [0.0, max(float(Y.min()), 0.0)],            # y1, y0
    ])
    lo = np.concatenate([np.zeros(2 * k), np.zeros(k),
                         np.full(k, lnx.min() - 2.0), [0.0, 0.0]])
    hi = np.concatenate([np.full(2 * k, np.inf), np.full(k, 80.0),
                         np.full(k, lnx.max() + 2.0), [np.inf, np.inf]])

    def f(xm, *params):
        xx, mm = xm
        c1 = params[:k]
        c2 = params[k:2 * k]
        kk = params[2 * k:3 * k]
        xi = params[3 * k:4 * k]
        y1, y0 = params[-2], params[-1]
        lnxx = np.log(xx)
        base = _sigmoid_eval(lnxx, c1, kk, xi, 0.0)
        per = _sigmoid_eval(lnxx, c2, kk, xi, 0.0) + y1
        return base + (mm - 1.0) * per + y0

    flags = ()
    sigma = np.maximum(Y, float(Y.max()) * 1e-9)
    try:
        popt, _ = curve_fit(f, (x, m), Y, p0=p0, bounds=(lo, hi), sigma=sigma,
                            absolute_sigma=False, maxfev=40000)
    except Exception:
        popt = p0
        flags = ("non_convergent",)
    rss = float(np.sum((f((x, m), *popt) - Y) ** 2))
    order = np.argsort(popt[3 * k:4 * k])
    return {
        "c1": np.asarray(popt[:k])[order].tolist(),
        "c2": np.asarray(popt[k:2 * k])[order].tolist(),
        "k": np.asarray(popt[2 * k:3 * k])[order].tolist(),
        "x": np.asarray(popt[3 * k:4 * k])[order].tolist(),
        "y1": float(popt[-2]),
        "y0": float(popt[-1]),
    }, rss, flags


def _eval_sum_sigmoids2(coef, X):
    lnx = np.log(np.asarray(X[:, 0], dtype=float))
    m = np.asarray(X[:, 1], dtype=float)
    base = _sigmoid_eval(lnx, coef["c1"], coef["k"], coef["x"], 0.0)
    per = _sigmoid_eval(lnx, coef["c2"], coef["k"], coef["x"], 0.0) + coef["y1"]
    return base + (m - 1.0) * per + coef["y0"]


def _eval_wknn(model: FittedModel, X: np.ndarray) -> np.ndarray:
    tx = np.asarray(model.training_X, dtype=float)
    ty = np.asarray(model.training_Y, dtype=float)
    k = int(model.coefficients.get("k", 3))
    out = np.empty(X.shape[0])
    for i, row in enumerate(np.asarray(X, dtype=float)):
        d = np.linalg.norm(tx - row, axis=1)
        idx = np.argsort(d)[:k]
        if d[idx[0]] == 0.0:
            out[i] = ty[idx[0]]
            continue
        w = 1.0 / d[idx]
        out[i] = float(np.dot(w, ty[idx]) / w.sum())
    return out


# ---------------------------------------------------------------------------
# public fit / predict


def fit(family: str, X, Y, param_names=("size",), k: int = 3, seed: int = 0) -> FittedModel:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[0] == 1 and X.shape[1] > 1 and len(np.atleast_1d(Y)) == X.shape[1]:
        X = X.T
    Y = np.asarray(Y, dtype=float)
    if X.shape[0] != len(Y):
        raise FitError("X and Y row counts differ")
    flags = ()
    training = (None, None)
    if family in ("linear", "loglinear", "logloglinear", "nlogn"):
        coef = _fit_basis(family, X, Y)
        rss = float(np.sum((_eval_basis(family, coef, X) - Y) ** 2))
    elif family == "sigmoids":
        coef, rss, flags = _fit_sigmoids(X, Y, k, seed)
    elif family == "sum_sigmoids2":
        coef, rss, flags = _fit_sum_sigmoids2(X, Y, k, seed)
    elif family == "wknn":
        coef, rss = {"k": k}, 0.0
        training = (X.tolist(), Y.tolist())
    else:
        raise FitError("unknown family %r" % family)
    trained_range = {
        name: (float(X[:, j].min()), float(X[:, j].max()))
        for j, name in enumerate(param_names[: X.shape[1]])
    }
    return FittedModel(
        family=family,
        coefficients=coef,
        param_names=tuple(param_names[: X.shape[1]]),
        trained_range=trained_range,
        fit_quality={"rss": rss, "rows": int(len(Y))},
        flags=flags,
        training_X=training[0],
        training_Y=training[1],
    )


def predict(model: FittedModel, params) -> float:
    return predict_batch(model, [params])[0]


def predict_batch(model: FittedModel, rows) -> np.ndarray:
    X = np.atleast_2d(np.asarray(rows, dtype=float))
    fam = model.family
    if fam in ("linear", "loglinear", "logloglinear", "nlogn"):
        return _eval_basis(fam, model.coefficients, X)
    if fam == "sigmoids":
        if np.any(X[:, 0] <= 0):
            raise FitError("log of non-positive parameter")
        return _eval_sigmoids(model.coefficients, X)
    if fam == "sum_sigmoids2":
        if np.any(X[:, 0] <= 0):
            raise FitError("log of non-positive parameter")
        return _eval_sum_sigmoids2(model.coefficients, X)
    if fam == "wknn":
        return _eval_wknn(model, X)
    raise FitError("unknown family %r" % fam)


@dataclass(frozen=True)
class Prediction:
    seconds: float
    extrapolated: bool = False


def predict_clamped(model: FittedModel, params) -> Prediction:
    """Clamp parameters into the trained range; flag when clamping happened."""
    row = list(np.atleast_1d(np.asarray(params, dtype=float)))
    extrapolated = False
    for j, name in enumerate(model.param_names):
        lo, hi = model.trained_range[name]
        if row[j] < lo:
            row[j] = lo
            extrapolated = True
        elif row[j] > hi:
            row[j] = hi
            extrapolated = True
    return Prediction(float(predict(model, row)), extrapolated)


# ---------------------------------------------------------------------------
# hardware profiles

PROFILE_VERSION = 1

#: variants the synthesis policy may ask for; a profile must carry them all
REQUIRED_VARIANTS = (
    "scan_scalar_row_eq", "scan_scalar_row_range",
    "scan_scalar_col_eq", "scan_scalar_col_range",
    "sorted_search_binary_row", "sorted_search_binary_col",
    "hash_probe_multiply_shift",
    "bloom_probe_multiply_shift",
    "sort_quicksort",
    "random_access", "batched_random_access",
    "write_unordered_row", "write_unordered_col",
    "write_ordered_row", "write_ordered_col",
    "write_scattered",
)


class ProfileError(ValueError):
    pass


@dataclass
class HardwareProfile:
    machine_id: str
    entries: dict  # variant id -> FittedModel
    created_at: str = ""
    key_size: int = 8
    value_size: int = 8
    page_size: int = 4096
    version: int = PROFILE_VERSION

    def model(self, variant_id: str) -> FittedModel:
        try:
            return self.entries[variant_id]
        except KeyError:
            raise ProfileError("profile %r has no model for %r"
                               % (self.machine_id, variant_id)) from None

    def has(self, variant_id: str) -> bool:
        return variant_id in self.entries

    def predict(self, variant_id: str, params) -> Prediction:
        return predict_clamped(self.model(variant_id), params)

    def missing_required(self) -> list:
        return [v for v in REQUIRED_VARIANTS if v not in self.entries]

    def check_complete(self) -> None:
        missing = self.missing_required()
        if missing:
            raise ProfileError("profile %r is missing models: %s"
                               % (self.machine_id, ", ".join(missing)))

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "machine_id": self.machine_id,
            "created_at": self.created_at,
            "key_size": self.key_size,
            "value_size": self.value_size,
            "page_size": self.page_size,
            "entries": {vid: m.to_dict() for vid, m in sorted(self.entries.items())},
        }

    @staticmethod
    def from_dict(doc: dict) -> "HardwareProfile":
        if int(doc.get("version", -1)) != PROFILE_VERSION:
            raise ProfileError("profile version %r not supported" % doc.get("version"))
        return HardwareProfile(
            machine_id=doc["machine_id"],
            entries={vid: FittedModel.from_dict(m) for vid, m in doc["entries"].items()},
            created_at=doc.get("created_at", ""),
            key_size=int(doc.get("key_size", 8)),
            value_size=int(doc.get("value_size", 8)),
            page_size=int(doc.get("page_size", 4096)),
        )


def save_profile(profile: HardwareProfile, path) -> None:
    with open(path, "w") as fh:
        json.dump(profile.to_dict(), fh, indent=1)


def load_profile(path, warn=None) -> HardwareProfile:
    with open(path) as fh:
        profile = HardwareProfile.from_dict(json.load(fh))
    missing = profile.missing_required()
    if missing and warn:
        warn("profile %s is missing models: %s" % (profile.machine_id, ", ".join(missing)))
    return profile


def fit_profile(runs: dict, machine: str | None = None, k: int = 3,
                seed: int = 0) -> HardwareProfile:
    """Fit each benchmark run with its variant's model family."""
    entries = {}
    mid = machine
    for vid, run in runs.items():
        if isinstance(run, dict):
            run = BenchmarkRun.from_dict(run)
        family = VARIANTS[vid].family
        entries[vid] = fit(family, run.X, run.Y,
                           param_names=run.param_names, k=k, seed=seed)
        if mid is None:
            mid = run.environment.get("machine_id")
    return HardwareProfile(
        machine_id=mid or "local",
        entries=entries,
        created_at=time.strftime("%Y-%m-%dT%H:%M:%S"),
    )
