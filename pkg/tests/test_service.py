import json
import subprocess
import sys

import pytest
from fastapi.testclient import TestClient
from filelock import FileLock

from dscalc.models import save_profile
from dscalc.service import ServiceState, create_app, cost_payload
from dscalc.specfile import load_bundled, spec_to_dict
from dscalc.workload import base_reference_workload, generate_workload


@pytest.fixture(scope="module")
def client(synth_profile):
    state = ServiceState()
    state.add_profile("synthetic", synth_profile)
    return TestClient(create_app(state))


@pytest.fixture(scope="module")
def workload_doc():
    return base_reference_workload().to_dict()


def test_health_and_profiles(client):
    assert client.get("/health").json()["status"] == "ok"
    listing = client.get("/profiles").json()["profiles"]
    assert listing and listing[0]["id"] == "synthetic"
    assert "random_access" in listing[0]["entries"]


def test_specs_and_catalog(client):
    specs = client.get("/specs").json()["specs"]
    assert "btree" in specs and "hash_table" in specs
    catalog = client.get("/catalog").json()["primitives"]
    assert len(catalog) == 21


def test_validate_endpoint(client):
    doc = spec_to_dict(load_bundled("btree"))
    assert client.post("/validate", json={"spec": doc}).json()["ok"]
    doc["elements"]["leaf"]["intra-block.dataRetention.keyRetention.type"] = "none"
    doc["elements"]["leaf"]["intra-block.dataRetention.valueRetention.type"] = "none"
    report = client.post("/validate", json={"spec": doc}).json()
    assert not report["ok"]
    assert any("terminal-must-retain" in v[1] for v in report["violations"])


def test_cost_endpoint_roundtrips_library_call(client, workload_doc, synth_profile):
    body = {"spec": "btree_worked_example", "workload": workload_doc,
            "profile": "synthetic", "mode": "single", "seed": 0}
    via_http = client.post("/cost", json=body).json()
    direct = cost_payload(
        load_bundled("btree_worked_example"),
        generate_workload(base_reference_workload()),
        synth_profile, mode="single", seed=0,
    )
    assert json.dumps(via_http, sort_keys=True) == json.dumps(direct, sort_keys=True)
    trace = via_http["sample_traces"]["get"]
    regions = [c["bytes"] for c in trace["calls"] if c["kind"] == "RandomAccess"]
    assert regions == [312, 6552, 1606552, 2000]


def test_whatif_identity_zero(client, workload_doc):
    body = {"spec": "btree", "workload": workload_doc, "profile": "synthetic",
            "layout_delta": {"leaf": {}}}
    report = client.post("/whatif", json=body).json()
    assert report["delta_seconds"] == 0.0


def test_unknown_profile_404(client, workload_doc):
    r = client.post("/cost", json={"spec": "btree", "workload": workload_doc,
                                   "profile": "nope"})
    assert r.status_code == 404


def test_malformed_spec_422_names_problem(client, workload_doc):
    broken = spec_to_dict(load_bundled("btree"))
    del broken["elements"]["leaf"]["intra-block.capacity.type"]
    r = client.post("/cost", json={"spec": broken, "workload": workload_doc,
                                   "profile": "synthetic"})
    assert r.status_code == 422
    assert "intra-block.capacity.type" in r.json()["detail"]


def test_enumerate_endpoints(client):
    r = client.get("/enumerate", params={"kind": "standard", "elements": "1e16"})
    assert r.json()["result"] == str(10**32)
    r = client.get("/enumerate", params={"kind": "polymorphic", "elements": "5",
                                         "fanout": 2, "pages": 4})
    assert r.json()["result"] == "500"
    r = client.get("/enumerate")
    assert int(r.json()["result"]) > 10**15


def test_export_endpoint_empty_single_node(client):
    r = client.post("/export", json={"spec": "btree", "data": {"entry_count": 0},
                                     "seed": 1})
    dot = r.json()["dot"]
    assert dot.count("label=") == 1


def test_complete_endpoint(client, workload_doc, synth_profile):
    candidates = {
        name: spec_to_dict(load_bundled("btree"))["elements"]["leaf"]
        for name in ("page_a",)
    }
    r = client.post("/complete", json={
        "workload": workload_doc, "candidates": candidates,
        "profile": "synthetic", "depth_limit": 2,
    })
    # the bundled leaf holds 256 records; 1e5 entries cannot fit one page
    assert r.status_code == 422

    big_leaf = dict(candidates["page_a"])
    big_leaf["inter-block.fanout.fixedValue"] = 1 << 20
    r = client.post("/complete", json={
        "workload": workload_doc, "candidates": {"big_page": big_leaf},
        "profile": "synthetic", "depth_limit": 2,
    })
    assert r.status_code == 200
    body = r.json()
    assert body["design"]["element"] == "big_page"
    assert body["spec"]["root"].startswith("big_page")


def test_profile_directory_loading(tmp_path, synth_profile):
    save_profile(synth_profile, tmp_path / "machine_a.json")
    (tmp_path / "junk.json").write_text("{not json")
    state = ServiceState(str(tmp_path))
    assert sorted(state.profiles) == ["machine_a"]


def test_train_refused_while_lock_held(tmp_path):
    lock_path = str(tmp_path / "engine.lock")
    lock = FileLock(lock_path)
    with lock:
        proc = subprocess.run(
            [sys.executable, "-m", "dscalc.cli", "train", "--out", str(tmp_path / "runs"),
             "--variants", "scan_scalar_row_eq", "--lock", lock_path],
            capture_output=True, text=True, timeout=120,
        )
    assert proc.returncode != 0
    assert "lock" in proc.stderr.lower()
