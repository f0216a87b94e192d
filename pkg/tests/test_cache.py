import json
import logging
import os

import pytest

from bfun.cache import ENV_VAR, Cache, cache_key
from bfun.core.multipoly import MultiPoly
from bfun.cyclic import cyclic_det


def test_key_depends_on_every_part():
    base = cache_key("f", {"n": 3}, "v1")
    assert base == cache_key("f", {"n": 3}, "v1")
    assert base != cache_key("f", {"n": 2}, "v1")
    assert base != cache_key("g", {"n": 3}, "v1")
    assert base != cache_key("f", {"n": 3}, "v2")


def test_round_trip_polynomial(tmp_path):
    c = Cache(tmp_path)
    f = cyclic_det(3)
    assert c.put("cyclic_det", {"n": 3}, f.to_text())
    assert MultiPoly.from_text(c.get("cyclic_det", {"n": 3})) == f


def test_version_change_is_a_miss(tmp_path):
    Cache(tmp_path, "v1").put("op", {"a": 1}, "payload")
    assert Cache(tmp_path, "v1").get("op", {"a": 1}) == "payload"
    assert Cache(tmp_path, "v2").get("op", {"a": 1}) is None


def test_hash_mismatch_recomputes(tmp_path, caplog):
    c = Cache(tmp_path)
    c.put("op", {}, "good")
    (entry,) = tmp_path.glob("*.json")
    data = json.loads(entry.read_text())
    data["payload"] = "tampered"
    entry.write_text(json.dumps(data))
    calls = []
    with caplog.at_level(logging.WARNING):
        out = c.cached("op", {}, lambda: calls.append(1) or "fresh", str, str)
    assert out == "fresh" and calls == [1]
    assert "hash check" in caplog.text
    assert c.get("op", {}) == "fresh"


def test_garbage_file_is_a_miss(tmp_path):
    c = Cache(tmp_path)
    c.put("op", {}, "x")
    (entry,) = tmp_path.glob("*.json")
    entry.write_text("{not json")
    assert c.get("op", {}) is None


def test_cached_hit_skips_compute(tmp_path):
    c = Cache(tmp_path)
    assert c.cached("op", {}, lambda: 7, str, int) == 7
    assert c.cached("op", {}, lambda: pytest.fail("recomputed"), str, int) == 7


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores directory permissions")
def test_unwritable_directory_disables(tmp_path, caplog):
    d = tmp_path / "ro"
    d.mkdir()
    d.chmod(0o500)
    with caplog.at_level(logging.WARNING):
        c = Cache(d)
    assert not c.enabled
    assert "not writable" in caplog.text


def test_path_that_is_a_file_disables(tmp_path, caplog):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with caplog.at_level(logging.WARNING):
        c = Cache(blocker / "sub")
    assert not c.enabled
    assert c.get("op", {}) is None
    assert not c.put("op", {}, "x")
    assert c.cached("op", {}, lambda: 3, str, int) == 3


def test_env_default(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    assert Cache.from_env().dir == tmp_path
    monkeypatch.delenv(ENV_VAR)
    assert not Cache.from_env().enabled
