import json
from typing import Dict, Optional

import redis

from fgl_cobord.core.errors import FglCobordError
from fgl_cobord.core.lazard import SCHEMA, LazardPresentation
from fgl_cobord.database.database import PresentationStore
from fgl_cobord.utils.logging import logger


class RedisCacheManager:
    """Optional Redis layer holding serialized presentations."""

    def __init__(self, app_config, client=None):
        self.enabled = bool(app_config and app_config.get('redis_enabled', False))
        self.ttl = app_config.get('redis_ttl_s', None) if app_config else None
        self.client = client
        self._connected = False
        if self.enabled:
            try:
                if self.client is None:
                    self.client = redis.Redis(
                        host=app_config.get('redis_host', 'localhost'),
                        port=app_config.get('redis_port', 6379),
                        db=app_config.get('redis_db', 0),
                        decode_responses=True,
                    )
                # ping once
                self.client.ping()
                self._connected = True
                logger.info("Redis connected")
            except redis.RedisError as e:
                logger.warning(f"Redis disabled (connection failed): {e}")
                self.enabled = False

    @property
    def available(self) -> bool:
        return self.enabled and self._connected

    def key_for(self, max_weight: int) -> str:
        return f"fgl-cobord:presentation:{max_weight}"

    def get_state(self, max_weight: int) -> Optional[Dict]:
        if not self.available:
            return None
        try:
            data = self.client.get(self.key_for(max_weight))
            return json.loads(data) if data else None
        except (redis.RedisError, ValueError) as e:
            logger.error(f"Redis read error: {e}")
            return None

    def cache_state(self, state: Dict):
        if not self.available:
            return
        try:
            self.client.set(self.key_for(state["max_weight"]), json.dumps(state), ex=self.ttl)
        except redis.RedisError as e:
            logger.error(f"Redis write error: {e}")


class PresentationCache:
    """Presentations by N: memory, then Redis, then SQLite, then a fresh build."""

    def __init__(self, app_config=None, store: Optional[PresentationStore] = None,
                 redis_cache: Optional[RedisCacheManager] = None):
        self.enabled = bool(app_config.get('cache_enabled', True)) if app_config else True
        self.store = store
        self.redis = redis_cache
        self._memory: Dict[int, LazardPresentation] = {}

    def _restore(self, state: Optional[Dict], source: str) -> Optional[LazardPresentation]:
        if not state:
            return None
        if state.get("schema") != SCHEMA:
            logger.warning(f"Ignoring {source} presentation with schema {state.get('schema')!r}")
            return None
        try:
            presentation = LazardPresentation.from_state(state)
        except FglCobordError as e:
            logger.warning(f"Ignoring unreadable {source} presentation: {e}")
            return None
        logger.info(f"Presentation N={presentation.max_weight} loaded from {source}")
        return presentation

    def load(self, max_weight: int, parallel: bool = False) -> LazardPresentation:
        if max_weight in self._memory:
            return self._memory[max_weight]
        presentation = None
        if self.enabled and self.redis is not None:
            presentation = self._restore(self.redis.get_state(max_weight), "redis")
        if presentation is None and self.enabled and self.store is not None:
            presentation = self._restore(self.store.load(max_weight), "sqlite")
            if presentation is not None and self.redis is not None:
                self.redis.cache_state(presentation.to_state())
        if presentation is None:
            logger.info(f"Presentation N={max_weight}: cache miss, building")
            presentation = LazardPresentation.build(max_weight, parallel=parallel)
            if self.enabled:
                state = presentation.to_state()
                if self.store is not None:
                    self.store.save(state)
                if self.redis is not None:
                    self.redis.cache_state(state)
        return self._memory.setdefault(max_weight, presentation)
