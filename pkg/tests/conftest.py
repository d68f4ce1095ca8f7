import json
import os
import time
from pathlib import Path

import pytest

from dscalc.instance import DataProfile
from dscalc.models import load_profile, save_profile
from dscalc.profiles import synthetic_profile, train_and_fit
from dscalc.workload import base_reference_workload, generate_workload

TRAINED_CACHE = Path(os.environ.get("DSCALC_PROFILE_CACHE", "/tmp/dscalc-test-profile.json"))


@pytest.fixture(scope="session")
def synth_profile():
    return synthetic_profile()


@pytest.fixture(scope="session")
def trained_profile():
    """Profile trained on this machine; cached on disk across test runs.

    Training wall-clock is itself an acceptance bound, checked in
    tests/test_acceptance.py, which ignores this cache.
    """
    if TRAINED_CACHE.exists():
        try:
            return load_profile(TRAINED_CACHE)
        except Exception:
            TRAINED_CACHE.unlink()
    profile, _ = train_and_fit(seed=0)
    save_profile(profile, TRAINED_CACHE)
    return profile


@pytest.fixture(scope="session")
def data_100k():
    return DataProfile(entry_count=100_000)


@pytest.fixture(scope="session")
def base_workload():
    return generate_workload(base_reference_workload())


@pytest.fixture()
def tmp_json(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return p

    return write
