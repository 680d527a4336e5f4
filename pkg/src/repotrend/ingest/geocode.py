"""Free-text location resolution with exact-string caching.

Clients are pluggable: an offline gazetteer CSV, a recorded fixture, or a
plain HTTP geocoder (GET ?q=, JSON {lat, lon, country_code}). Unresolvable
strings are cached as misses so the client is asked once per distinct input.
"""

from __future__ import annotations

import csv
import json
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass
from typing import Callable, Protocol

from ..errors import GeocodeTransportError, ValidationError


@dataclass(frozen=True)
class GeoPoint:
    latitude: float
    longitude: float
    country_code: str | None = None

    def __post_init__(self) -> None:
        if not -90.0 <= self.latitude <= 90.0:
            raise ValidationError(f"latitude out of range: {self.latitude}")
        if not -180.0 <= self.longitude <= 180.0:
            raise ValidationError(f"longitude out of range: {self.longitude}")


class GeocoderClient(Protocol):
    def lookup(self, query: str) -> GeoPoint | None:
        """Best-match point, or None when the string cannot be resolved."""


class FixtureGeocoder:
    """In-memory mapping with a call counter, for tests and recorded runs."""

    def __init__(self, points: dict[str, GeoPoint], transient_failures: int = 0):
        self._points = dict(points)
        self._transient_left = transient_failures
        self.calls = 0

    def lookup(self, query: str) -> GeoPoint | None:
        self.calls += 1
        if self._transient_left > 0:
            self._transient_left -= 1
            raise GeocodeTransportError(f"simulated transport failure for {query!r}")
        return self._points.get(query)


class GazetteerGeocoder:
    """Offline lookup against a CSV of name,lat,lon,country_code rows."""

    def __init__(self, path: str):
        self._table: dict[str, GeoPoint] = {}
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            for row in reader:
                if not row or row[0].startswith("#"):
                    continue
                if len(row) != 4:
                    raise ValidationError(f"gazetteer row needs 4 fields: {row!r}")
                name, lat, lon, country = row
                if name.strip().lower() == "name":
                    continue  # header
                self._table[self._fold(name)] = GeoPoint(
                    latitude=float(lat), longitude=float(lon),
                    country_code=country.strip() or None,
                )
        self.calls = 0

    @staticmethod
    def _fold(name: str) -> str:
        return " ".join(name.casefold().split())

    def lookup(self, query: str) -> GeoPoint | None:
        self.calls += 1
        return self._table.get(self._fold(query))


class HttpGeocoder:
    """Minimal HTTP client: GET <base_url>?q=<location>, JSON response."""

    def __init__(
        self,
        base_url: str,
        timeout: float = 10.0,
        max_retries: int = 2,
        backoff_seconds: float = 0.5,
        sleeper: Callable[[float], None] = time.sleep,
    ):
        self.base_url = base_url
        self.timeout = timeout
        self.max_retries = max_retries
        self.backoff_seconds = backoff_seconds
        self._sleep = sleeper
        self.calls = 0

    def _get(self, query: str) -> GeoPoint | None:
        url = f"{self.base_url}?{urllib.parse.urlencode({'q': query})}"
        try:
            with urllib.request.urlopen(url, timeout=self.timeout) as response:
                payload = json.loads(response.read().decode("utf-8"))
        except urllib.error.HTTPError as exc:
            if exc.code == 404:
                return None
            raise GeocodeTransportError(f"geocoder returned HTTP {exc.code} for {query!r}")
        except (urllib.error.URLError, TimeoutError, json.JSONDecodeError) as exc:
            raise GeocodeTransportError(f"geocoder transport failure for {query!r}: {exc}")
        if not payload or "lat" not in payload or "lon" not in payload:
            return None
        return GeoPoint(
            latitude=float(payload["lat"]),
            longitude=float(payload["lon"]),
            country_code=payload.get("country_code") or None,
        )

    def lookup(self, query: str) -> GeoPoint | None:
        self.calls += 1
        attempts = 0
        while True:
            try:
                return self._get(query)
            except GeocodeTransportError:
                attempts += 1
                if attempts > self.max_retries:
                    raise
                self._sleep(self.backoff_seconds * 2 ** (attempts - 1))


def geocode(
    location_raw: str,
    client: GeocoderClient,
    cache: dict[str, GeoPoint | None],
) -> GeoPoint | None:
    """Resolve one location string; None means unresolvable (and is cached)."""
    if not location_raw or not location_raw.strip():
        raise ValidationError("geocode requires a non-empty location string")
    if location_raw in cache:
        return cache[location_raw]
    point = client.lookup(location_raw)
    cache[location_raw] = point
    return point
