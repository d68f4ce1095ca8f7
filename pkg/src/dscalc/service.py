"""Local HTTP service exposing the calculator over the module file formats.

Loopback-only, single-user, read-only with respect to profiles: profile
files are loaded from a directory at startup and never written. Training
is refused while the service holds the engine lock.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import cardinality
from .catalog import DomainValue
from .instance import DataProfile, build_instance, export_dot
from .layout import validate_structure
from .models import HardwareProfile, load_profile
from .search import (
    ComparisonReport,
    SearchError,
    WhatIfRequest,
    complete_design,
    cost_workload,
    what_if,
)
from .specfile import SpecFormatError, parse_element, spec_from_dict, spec_to_dict
from .synthesis import (
    costed_tree_to_dict,
    lower_to_level2,
    synthesize_bulk_load,
    synthesize_get,
    synthesize_range,
    synthesize_update,
)
from .workload import WorkloadFile, generate_workload

DEFAULT_LOCK_PATH = "/tmp/dscalc-engine.lock"


class ServiceState:
    def __init__(self, profile_dir: str | None = None):
        self.profiles: dict[str, HardwareProfile] = {}
        if profile_dir:
            for path in sorted(Path(profile_dir).glob("*.json")):
                try:
                    self.profiles[path.stem] = load_profile(path)
                except Exception:
                    continue

    def add_profile(self, name: str, profile: HardwareProfile) -> None:
        self.profiles[name] = profile

    def profile(self, name: str) -> HardwareProfile:
        if name not in self.profiles:
            raise HTTPException(status_code=404, detail="unknown profile %r" % name)
        return self.profiles[name]


class SpecBody(BaseModel):
    spec: dict


class CostBody(BaseModel):
    spec: dict | str
    workload: dict
    profile: str
    mode: str = "set"
    seed: int = 0
    skew: bool = False


class WhatIfBody(BaseModel):
    spec: dict | str
    workload: dict
    profile: str
    mode: str = "set"
    seed: int = 0
    layout_delta: dict | None = None
    profile_swap: str | None = None
    workload_delta: dict | None = None


class CompleteBody(BaseModel):
    workload: dict
    candidates: dict
    profile: str
    depth_limit: int = 4
    partial: list[str] = []
    seed: int = 0


class ExportBody(BaseModel):
    spec: dict | str
    data: dict
    seed: int = 0


def _resolve_spec(doc):
    try:
        if isinstance(doc, str):
            from .specfile import load_bundled

            return load_bundled(doc)
        return spec_from_dict(doc)
    except (SpecFormatError, KeyError, FileNotFoundError) as exc:
        raise HTTPException(status_code=422, detail="spec: %s" % exc) from exc


def _resolve_workload(doc):
    try:
        return generate_workload(WorkloadFile.from_dict(doc))
    except Exception as exc:
        raise HTTPException(status_code=422, detail="workload: %s" % exc) from exc


def _layout_delta(doc):
    out = {}
    for elem, changes in (doc or {}).items():
        out[elem] = {
            prim: DomainValue(v[0], tuple(v[1:])) if isinstance(v, list) else DomainValue(str(v))
            for prim, v in changes.items()
        }
    return out


def cost_payload(spec, workload, profile, mode="set", seed=0, skew=False) -> dict:
    """The cost report body; shared verbatim by the CLI for parity."""
    report = cost_workload(spec, workload, profile, mode=mode, seed=seed, skew=skew)
    instance = build_instance(spec, workload.data, seed=seed)
    uniform = workload.data.key_distribution == "uniform"
    sample_traces = {}
    for op in workload.operations:
        if op.op in sample_traces:
            continue
        if op.op == "get":
            tree = synthesize_get(instance, op.key, expected=(mode == "set"))
        elif op.op == "range_get":
            tree = synthesize_range(instance, op.key, op.hi)
        elif op.op == "update":
            tree = synthesize_update(instance, op.key, expected=(mode == "set"))
        else:
            tree = synthesize_bulk_load(instance)
        sample_traces[op.op] = costed_tree_to_dict(lower_to_level2(tree, profile, uniform))
    return {
        "machine_id": profile.machine_id,
        "mode": mode,
        "seed": seed,
        "report": report.to_dict(),
        "sample_traces": sample_traces,
        "instance": instance.stats.to_dict(),
    }


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="design calculator", version="0.1.0")

    @app.get("/health")
    def health():
        return {"status": "ok", "profiles": sorted(state.profiles)}

    @app.get("/profiles")
    def profiles():
        return {
            "profiles": [
                {
                    "id": name,
                    "machine_id": p.machine_id,
                    "created_at": p.created_at,
                    "entries": sorted(p.entries),
                }
                for name, p in sorted(state.profiles.items())
            ]
        }

    @app.get("/specs")
    def specs():
        from .specfile import bundled_names, load_bundled

        return {
            "specs": {name: spec_to_dict(load_bundled(name)) for name in bundled_names()}
        }

    @app.get("/catalog")
    def catalog_view():
        from .catalog import DEFAULT_CATALOG

        return {
            "primitives": [
                {
                    "name": p.name,
                    "class": p.klass,
                    "domain": [
                        {"tag": t.tag, "arity": t.arity, "params": list(t.param_names)}
                        for t in p.domain
                    ],
                }
                for p in DEFAULT_CATALOG
            ]
        }

    @app.post("/validate")
    def validate(body: SpecBody):
        spec = _resolve_spec(body.spec)
        return validate_structure(spec).to_dict()

    @app.post("/cost")
    def cost(body: CostBody):
        spec = _resolve_spec(body.spec)
        workload = _resolve_workload(body.workload)
        profile = state.profile(body.profile)
        try:
            return cost_payload(spec, workload, profile, body.mode, body.seed, body.skew)
        except SearchError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

    @app.post("/whatif")
    def whatif(body: WhatIfBody):
        spec = _resolve_spec(body.spec)
        workload = _resolve_workload(body.workload)
        profile = state.profile(body.profile)
        try:
            req = WhatIfRequest(
                base=spec,
                layout_delta=_layout_delta(body.layout_delta) if body.layout_delta is not None else None,
                profile_swap=state.profile(body.profile_swap) if body.profile_swap else None,
                workload_delta=_resolve_workload(body.workload_delta) if body.workload_delta else None,
                mode=body.mode,
            )
            report: ComparisonReport = what_if(req, workload, profile, body.seed)
        except SearchError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return report.to_dict()

    @app.post("/complete")
    def complete(body: CompleteBody):
        workload = _resolve_workload(body.workload)
        profile = state.profile(body.profile)
        try:
            candidates = [
                parse_element(flat, name) for name, flat in body.candidates.items()
            ]
            partial = None
            if body.partial:
                by_name = {e.name: e for e in candidates}
                partial = [by_name[n] for n in body.partial]
            result = complete_design(
                workload, candidates, profile, depth_limit=body.depth_limit,
                partial=partial,
            )
        except (SearchError, SpecFormatError, KeyError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return {
            "cost": result.cost,
            "design": result.root.to_dict(),
            "spec": spec_to_dict(result.as_structure_spec()),
            "cache_hits": result.cache_hits,
            "evaluated": result.evaluated,
        }

    @app.get("/enumerate")
    def enumerate_space(kind: str = "element", elements: str = "",
                        fanout: int = 2, pages: int = 1):
        if kind == "element":
            count = cardinality.element_space_cardinality()
            return {"kind": "element", "result": str(count)}
        n = int(float(elements)) if elements else cardinality.element_space_cardinality()
        try:
            est = cardinality.design_space_estimate(kind, n, fanout, pages)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return est.to_dict()

    @app.post("/export")
    def export(body: ExportBody):
        spec = _resolve_spec(body.spec)
        data = DataProfile.from_dict(body.data)
        instance = build_instance(spec, data, seed=body.seed)
        return {"dot": export_dot(instance), "stats": instance.stats.to_dict()}

    return app


def default_state_with_synthetic() -> ServiceState:
    from .profiles import synthetic_profile

    state = ServiceState()
    state.add_profile("synthetic", synthetic_profile())
    return state
