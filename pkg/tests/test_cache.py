import json

import pytest
import redis

from config import AppConfig, get_cache_dir
from fgl_cobord.core.cache import PresentationCache, RedisCacheManager
from fgl_cobord.database.database import PresentationStore


class FakeRedis:
    def __init__(self, fail_ping=False):
        self.data = {}
        self.fail_ping = fail_ping
        self.expiry = {}

    def ping(self):
        if self.fail_ping:
            raise redis.ConnectionError("refused")
        return True

    def get(self, key):
        return self.data.get(key)

    def set(self, key, value, ex=None):
        self.data[key] = value
        self.expiry[key] = ex


@pytest.fixture
def settings(tmp_path):
    cfg = AppConfig(tmp_path / "settings.json")
    cfg.settings["redis_enabled"] = True
    return cfg


def test_config_round_trip(tmp_path):
    cfg = AppConfig(tmp_path / "settings.json")
    assert cfg.get("max_weight") == 6
    cfg.set("max_weight", 4)
    assert AppConfig(tmp_path / "settings.json").get("max_weight") == 4


def test_unreadable_config_falls_back_to_defaults(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text("{not json")
    assert AppConfig(path).get("mode") == "integral"


def test_cache_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.delenv("FGL_COBORD_CACHE", raising=False)
    assert get_cache_dir() is None
    monkeypatch.setenv("FGL_COBORD_CACHE", str(tmp_path / "memo"))
    assert get_cache_dir() == tmp_path / "memo"
    assert (tmp_path / "memo").is_dir()


def test_store_save_load_delete(tmp_path, L3):
    store = PresentationStore(tmp_path)
    assert store.db_path == tmp_path / "presentations.db"
    assert store.load(3) is None
    assert store.save(L3.to_state())
    assert store.stored_weights() == [3]
    assert store.load(3)["max_weight"] == 3
    assert store.delete(3)
    assert not store.delete(3)


def test_redis_layer(settings, L3):
    client = FakeRedis()
    manager = RedisCacheManager(settings, client)
    assert manager.available
    manager.cache_state(L3.to_state())
    assert client.expiry[manager.key_for(3)] == settings.get("redis_ttl_s")
    assert manager.get_state(3)["max_weight"] == 3
    assert manager.get_state(4) is None


def test_redis_connection_failure_disables_layer(settings):
    manager = RedisCacheManager(settings, FakeRedis(fail_ping=True))
    assert not manager.available
    assert manager.get_state(3) is None


def test_presentation_cache_layers(tmp_path, settings, L3):
    store = PresentationStore(tmp_path)
    client = FakeRedis()
    cache = PresentationCache(settings, store, RedisCacheManager(settings, client))
    built = cache.load(3)
    assert built.ranks() == [1, 1, 2, 3]
    assert cache.load(3) is built
    assert store.stored_weights() == [3]
    assert json.loads(client.data["fgl-cobord:presentation:3"])["schema"] == "fgl-cobord/1"

    # a fresh process reads the stored state instead of rebuilding
    client.data.clear()
    fresh = PresentationCache(settings, store, RedisCacheManager(settings, client))
    reloaded = fresh.load(3)
    assert reloaded.ranks() == L3.ranks()
    assert reloaded.parse("a11*a12 - a13").coords == L3.parse("a11*a12 - a13").coords
    assert "fgl-cobord:presentation:3" in client.data


def test_stale_schema_is_ignored(tmp_path, settings, L3):
    store = PresentationStore(tmp_path)
    state = L3.to_state()
    state["schema"] = "fgl-cobord/0"
    store.save(state)
    cache = PresentationCache(settings, store, None)
    assert cache.load(3).ranks() == [1, 1, 2, 3]
    assert store.load(3)["schema"] == "fgl-cobord/1"
