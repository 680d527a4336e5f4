"""Crawling-side pipeline: queries, search drivers, normalization, geocoding."""

from .adapters import ClientAdapter, FixtureAdapter, RateLimit, RateLimiter, SearchPage, run_search
from .geocode import GazetteerGeocoder, GeoPoint, HttpGeocoder, FixtureGeocoder, geocode
from .normalize import dedupe_mirrors, normalize, DEFAULT_PLATFORM_PRIORITY
from .queries import SearchQuery, build_queries

__all__ = [
    "ClientAdapter",
    "DEFAULT_PLATFORM_PRIORITY",
    "FixtureAdapter",
    "FixtureGeocoder",
    "GazetteerGeocoder",
    "GeoPoint",
    "HttpGeocoder",
    "RateLimit",
    "RateLimiter",
    "SearchPage",
    "SearchQuery",
    "build_queries",
    "dedupe_mirrors",
    "geocode",
    "normalize",
    "run_search",
]
