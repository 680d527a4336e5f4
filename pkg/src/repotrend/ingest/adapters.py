"""Pluggable search clients and the rate-limited, retrying search driver.

Adapters fetch one page at a time behind a cursor. The driver owns rate
limiting and retry policy so adapters stay dumb. Clocks and sleep functions
are injectable for tests; the defaults are the real ones.
"""

from __future__ import annotations

import time
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable, Iterator, Sequence

from ..errors import AdapterError, TransientAdapterError, ValidationError
from .queries import SearchQuery


@dataclass(frozen=True)
class RateLimit:
    max_requests: int
    window_seconds: float

    def __post_init__(self) -> None:
        if self.max_requests < 1:
            raise ValidationError(f"max_requests must be >= 1, got {self.max_requests}")
        if self.window_seconds <= 0:
            raise ValidationError(f"window_seconds must be > 0, got {self.window_seconds}")


class RateLimiter:
    """Sliding-window limiter: at most max_requests per window, blocking."""

    def __init__(
        self,
        limit: RateLimit,
        clock: Callable[[], float] = time.monotonic,
        sleeper: Callable[[float], None] = time.sleep,
    ):
        self.limit = limit
        self._clock = clock
        self._sleep = sleeper
        self._stamps: deque[float] = deque()

    def acquire(self) -> None:
        now = self._clock()
        window = self.limit.window_seconds
        while self._stamps and now - self._stamps[0] >= window:
            self._stamps.popleft()
        if len(self._stamps) >= self.limit.max_requests:
            wait = self._stamps[0] + window - now
            if wait > 0:
                self._sleep(wait)
            now = self._clock()
            while self._stamps and now - self._stamps[0] >= window:
                self._stamps.popleft()
        self._stamps.append(now)


@dataclass(frozen=True)
class SearchPage:
    items: tuple[dict, ...]
    next_cursor: str | None


class ClientAdapter(ABC):
    """One search client per collaboration platform."""

    platform: str
    capabilities: frozenset[str]  # subset of {"api", "web-scrape"}
    rate_limit: RateLimit

    @abstractmethod
    def fetch_page(self, query: SearchQuery, cursor: str | None) -> SearchPage:
        """Return one result page; next_cursor None means exhaustion."""


class FixtureAdapter(ClientAdapter):
    """Replays recorded pages; can fail transiently a set number of times."""

    def __init__(
        self,
        platform: str,
        pages: Sequence[Sequence[dict]],
        rate_limit: RateLimit | None = None,
        capabilities: frozenset[str] = frozenset({"api"}),
        transient_failures: int = 0,
        error: Exception | None = None,
    ):
        self.platform = platform
        self.capabilities = capabilities
        self.rate_limit = rate_limit or RateLimit(max_requests=1000, window_seconds=1.0)
        self._pages = [tuple(dict(item) for item in page) for page in pages]
        self._transient_left = transient_failures
        self._error = error
        self.requests = 0

    def fetch_page(self, query: SearchQuery, cursor: str | None) -> SearchPage:
        self.requests += 1
        if self._error is not None:
            raise self._error
        if self._transient_left > 0:
            self._transient_left -= 1
            raise TransientAdapterError(f"simulated transient failure for {query.term!r}")
        index = 0 if cursor is None else int(cursor)
        if index >= len(self._pages):
            return SearchPage(items=(), next_cursor=None)
        next_cursor = str(index + 1) if index + 1 < len(self._pages) else None
        return SearchPage(items=self._pages[index], next_cursor=next_cursor)


def _utc_now() -> datetime:
    return datetime.now(timezone.utc)


def run_search(
    adapter: ClientAdapter,
    query: SearchQuery,
    max_retries: int = 3,
    backoff_seconds: float = 0.5,
    clock: Callable[[], float] = time.monotonic,
    sleeper: Callable[[float], None] = time.sleep,
    now_fn: Callable[[], datetime] = _utc_now,
) -> Iterator[dict]:
    """Yield raw result objects lazily, tagged with retrieval metadata.

    Transient adapter failures are retried with exponential backoff up to
    max_retries; credential errors and permanent failures propagate, the
    latter annotated with the query.
    """
    limiter = RateLimiter(adapter.rate_limit, clock=clock, sleeper=sleeper)
    cursor: str | None = None
    while True:
        attempts = 0
        while True:
            limiter.acquire()
            try:
                page = adapter.fetch_page(query, cursor)
                break
            except TransientAdapterError:
                attempts += 1
                if attempts > max_retries:
                    raise AdapterError(
                        f"giving up on {query.term!r} at {query.target} "
                        f"after {max_retries} retries",
                        query=query,
                    )
                sleeper(backoff_seconds * 2 ** (attempts - 1))
            except AdapterError as exc:
                if exc.query is None:
                    exc.query = query
                raise
        retrieved_at = now_fn()
        for item in page.items:
            tagged = dict(item)
            tagged["_retrieved_at"] = retrieved_at.strftime("%Y-%m-%dT%H:%M:%SZ")
            tagged["_searchterm"] = query.term
            tagged["_social_platform"] = query.platform_name
            yield tagged
        if page.next_cursor is None:
            return
        cursor = page.next_cursor
