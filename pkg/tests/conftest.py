import os

import pytest


@pytest.fixture(scope="session", autouse=True)
def enumeration_cache(tmp_path_factory):
    """Share graph enumeration results across the whole test run."""
    cache = tmp_path_factory.mktemp("graphcache")
    os.environ["XYCOLOR_CACHE_DIR"] = str(cache)
    yield cache
    os.environ.pop("XYCOLOR_CACHE_DIR", None)
