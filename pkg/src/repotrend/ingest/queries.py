"""Search query construction: one query per (social platform, target) pair."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ConfigError


@dataclass(frozen=True)
class SearchQuery:
    platform_name: str
    term: str
    target: str


def build_queries(social_platforms: list[str], targets: list[str]) -> list[SearchQuery]:
    """Cross product in input order; the term is always '<platform> bot'."""
    if not social_platforms:
        raise ConfigError("social platform list is empty")
    if not targets:
        raise ConfigError("target platform list is empty")
    cleaned = []
    for name in social_platforms:
        trimmed = name.strip()
        if not trimmed:
            raise ConfigError(f"blank social platform name in list: {social_platforms!r}")
        cleaned.append(trimmed)
    cleaned_targets = []
    for target in targets:
        trimmed = target.strip()
        if not trimmed:
            raise ConfigError(f"blank target platform name in list: {targets!r}")
        cleaned_targets.append(trimmed)
    return [
        SearchQuery(platform_name=name, term=f"{name} bot", target=target)
        for name in cleaned
        for target in cleaned_targets
    ]
