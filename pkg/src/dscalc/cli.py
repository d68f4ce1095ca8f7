"""Command line interface.

Subcommands: train, fit, cost, whatif, complete, enumerate, export-dot,
serve. All outputs are deterministic under --seed; reports are the same
JSON documents the service returns.
"""

from __future__ import annotations

import json
from pathlib import Path

import click
from filelock import FileLock, Timeout

from . import bench, cardinality
from .models import fit_profile, load_profile, save_profile
from .search import WhatIfRequest, complete_design, what_if
from .service import DEFAULT_LOCK_PATH, cost_payload
from .specfile import load_bundled, parse_element, parse_spec, spec_to_dict
from .workload import WorkloadFile, generate_workload


def _load_spec(ref: str):
    if "/" in ref or ref.endswith(".json"):
        return parse_spec(Path(ref).read_text())
    return load_bundled(ref)


def _load_workload(path: str):
    return generate_workload(WorkloadFile.load(path))


def _load_profile(path: str):
    return load_profile(path, warn=lambda msg: click.echo("warning: " + msg, err=True))


def _engine_lock(lock_path: str) -> FileLock:
    return FileLock(lock_path)


@click.group()
def main():
    """Data-structure design cost calculator."""


@main.command()
@click.option("--out", required=True, type=click.Path(), help="directory for benchmark runs")
@click.option("--seed", default=0, show_default=True)
@click.option("--variants", default="", help="comma-separated subset of primitive ids")
@click.option("--backend", default=None, type=click.Choice(["compiled", "pure"]))
@click.option("--lock", "lock_path", default=DEFAULT_LOCK_PATH, show_default=True)
def train(out, seed, variants, backend, lock_path):
    """Run the access-primitive benchmarks on this machine."""
    from .kernels import get_backend

    subset = [v.strip() for v in variants.split(",") if v.strip()] or None
    for vid in subset or ():
        if vid not in bench.VARIANTS:
            raise click.ClickException("unknown primitive id %r" % vid)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        with _engine_lock(lock_path).acquire(timeout=0.1):
            kb = get_backend(backend)
            runs = bench.train_all(
                seed=seed, backend=kb, variants=subset,
                progress=lambda vid: click.echo("benchmarking %s" % vid),
            )
    except Timeout:
        raise click.ClickException(
            "engine lock is held (service running?); refusing to train"
        )
    for vid, run in runs.items():
        run.save(out_dir / ("%s.json" % vid))
    click.echo("wrote %d runs to %s" % (len(runs), out_dir))


@main.command("fit")
@click.option("--runs", "runs_dir", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--seed", default=0, show_default=True)
@click.option("--machine", default=None)
def fit_cmd(runs_dir, out, seed, machine):
    """Fit cost models from benchmark runs into a hardware profile."""
    runs = {}
    for path in sorted(Path(runs_dir).glob("*.json")):
        run = bench.BenchmarkRun.load(path)
        runs[run.primitive_id] = run
    if not runs:
        raise click.ClickException("no benchmark runs found in %s" % runs_dir)
    profile = fit_profile(runs, machine=machine, seed=seed)
    save_profile(profile, out)
    missing = profile.missing_required()
    if missing:
        click.echo("warning: profile is missing models: %s" % ", ".join(missing), err=True)
    click.echo("wrote profile %s (%d models) to %s"
               % (profile.machine_id, len(profile.entries), out))


@main.command()
@click.option("--spec", required=True, help="spec file path or bundled name")
@click.option("--workload", required=True, type=click.Path(exists=True))
@click.option("--profile", required=True, type=click.Path(exists=True))
@click.option("--mode", default="set", type=click.Choice(["set", "single"]), show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--skew/--no-skew", default=False, show_default=True)
@click.option("--psb", is_flag=True, help="print the compact probe/scan/search trace")
@click.option("--out", default=None, type=click.Path(), help="write the JSON report")
def cost(spec, workload, profile, mode, seed, skew, psb, out):
    """Synthesize the latency of a workload over a design."""
    payload = cost_payload(
        _load_spec(spec), _load_workload(workload), _load_profile(profile),
        mode=mode, seed=seed, skew=skew,
    )
    if out:
        Path(out).write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")
    if psb:
        for op, trace in sorted(payload["sample_traces"].items()):
            click.echo("%s: %s" % (op, trace["psb"]))
    else:
        click.echo(json.dumps(payload, indent=1, sort_keys=True))


@main.command()
@click.option("--spec", required=True)
@click.option("--workload", required=True, type=click.Path(exists=True))
@click.option("--profile", required=True, type=click.Path(exists=True))
@click.option("--set", "assignments", multiple=True,
              help="element.primitive=tag[:param[:param]] layout change")
@click.option("--profile2", default=None, type=click.Path(exists=True))
@click.option("--workload2", default=None, type=click.Path(exists=True))
@click.option("--mode", default="set", type=click.Choice(["set", "single"]), show_default=True)
@click.option("--seed", default=0, show_default=True)
def whatif(spec, workload, profile, assignments, profile2, workload2, mode, seed):
    """Re-cost a design with one input changed and report the delta."""
    from .catalog import DomainValue

    delta = None
    if assignments:
        delta = {}
        for item in assignments:
            try:
                target, value = item.split("=", 1)
                elem, primitive = target.rsplit(".", 1)
            except ValueError:
                raise click.ClickException("bad --set %r (element.primitive=tag[:p...])" % item)
            parts = value.split(":")
            params = []
            for p in parts[1:]:
                try:
                    params.append(int(p))
                except ValueError:
                    try:
                        params.append(float(p))
                    except ValueError:
                        params.append(p)
            delta.setdefault(elem, {})[primitive] = DomainValue(parts[0], tuple(params))
    axes = sum(x is not None for x in (delta, profile2, workload2))
    if axes != 1:
        raise click.ClickException("give exactly one of --set/--profile2/--workload2")
    req = WhatIfRequest(
        base=_load_spec(spec),
        layout_delta=delta,
        profile_swap=_load_profile(profile2) if profile2 else None,
        workload_delta=_load_workload(workload2) if workload2 else None,
        mode=mode,
    )
    report = what_if(req, _load_workload(workload), _load_profile(profile), seed)
    click.echo(json.dumps(report.to_dict(), indent=1, sort_keys=True))


@main.command()
@click.option("--workload", required=True, type=click.Path(exists=True))
@click.option("--profile", required=True, type=click.Path(exists=True))
@click.option("--candidates", "candidates_path", required=True, type=click.Path(exists=True),
              help="JSON file with an 'elements' map of candidate elements")
@click.option("--depth", default=4, show_default=True)
@click.option("--partial", default="", help="comma-separated prefix of candidate names")
@click.option("--seed", default=0, show_default=True)
def complete(workload, profile, candidates_path, depth, partial, seed):
    """Auto-complete a partial design for a workload."""
    doc = json.loads(Path(candidates_path).read_text())
    candidates = [parse_element(flat, name) for name, flat in doc["elements"].items()]
    prefix = None
    if partial:
        by_name = {e.name: e for e in candidates}
        try:
            prefix = [by_name[n.strip()] for n in partial.split(",") if n.strip()]
        except KeyError as exc:
            raise click.ClickException("unknown partial element %s" % exc)
    result = complete_design(
        _load_workload(workload), candidates, _load_profile(profile),
        depth_limit=depth, partial=prefix,
    )
    click.echo(json.dumps({
        "cost": result.cost,
        "design": result.root.to_dict(),
        "spec": spec_to_dict(result.as_structure_spec()),
        "cache_hits": result.cache_hits,
        "evaluated": result.evaluated,
    }, indent=1, sort_keys=True))


@main.command()
@click.option("--standard", "kind", flag_value="standard")
@click.option("--polymorphic", "kind", flag_value="polymorphic")
@click.option("--elements", default="", help="element count (defaults to the full catalog)")
@click.option("--fanout", default=2, show_default=True)
@click.option("--pages", default=1, show_default=True)
def enumerate(kind, elements, fanout, pages):
    """Design-space cardinalities (element space by default)."""
    if not kind:
        click.echo(str(cardinality.element_space_cardinality()))
        return
    n = int(float(elements)) if elements else cardinality.element_space_cardinality()
    est = cardinality.design_space_estimate(kind, n, fanout, pages)
    click.echo(str(est.result))


@main.command("export-dot")
@click.option("--spec", required=True)
@click.option("--workload", required=True, type=click.Path(exists=True))
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default=None, type=click.Path())
def export_dot_cmd(spec, workload, seed, out):
    """Emit the instance block tree as a graph description."""
    from .instance import build_instance, export_dot

    wl = generate_workload(WorkloadFile.load(workload))
    instance = build_instance(_load_spec(spec), wl.data, seed=seed)
    text = export_dot(instance)
    if out:
        Path(out).write_text(text)
        click.echo("wrote %s" % out)
    else:
        click.echo(text, nl=False)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8572, show_default=True)
@click.option("--profiles", "profile_dir", default=None, type=click.Path(exists=True))
@click.option("--synthetic", is_flag=True, help="also load a synthetic profile")
@click.option("--lock", "lock_path", default=DEFAULT_LOCK_PATH, show_default=True)
def serve(host, port, profile_dir, synthetic, lock_path):
    """Run the local design service (read-only; blocks training)."""
    import uvicorn

    from .service import ServiceState, create_app

    state = ServiceState(profile_dir)
    if synthetic:
        from .profiles import synthetic_profile

        state.add_profile("synthetic", synthetic_profile())
    if not state.profiles:
        click.echo("warning: no profiles loaded; cost endpoints will 404", err=True)
    lock = _engine_lock(lock_path)
    try:
        lock.acquire(timeout=0.1)
    except Timeout:
        raise click.ClickException("engine lock is held (training?); not serving")
    try:
        uvicorn.run(create_app(state), host=host, port=port, log_level="warning")
    finally:
        lock.release()


if __name__ == "__main__":
    main()
