"""Map platform-native payloads onto the common record schema.

Each platform gets a field map of dotted lookup paths. Anything optional that
is missing stays unknown (None); a payload without an id or creation time is
rejected outright.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..errors import NormalizationError, ValidationError
from ..schema import RepoRecord, parse_utc


@dataclass(frozen=True)
class FieldMap:
    id: tuple[str, ...]
    name: tuple[str, ...]
    description: tuple[str, ...]
    created_at: tuple[str, ...]
    last_activity_at: tuple[str, ...]
    commit_count: tuple[str, ...] = ()
    primary_language: tuple[str, ...] = ()
    owner_location: tuple[str, ...] = ()
    fork_count: tuple[str, ...] = ()
    url: tuple[str, ...] = ()


FIELD_MAPS: dict[str, FieldMap] = {
    "github": FieldMap(
        id=("id", "full_name"),
        name=("name", "full_name"),
        description=("description",),
        created_at=("created_at",),
        last_activity_at=("pushed_at", "updated_at"),
        commit_count=("commit_count",),
        primary_language=("language",),
        owner_location=("owner.location",),
        fork_count=("forks_count", "forks"),
        url=("html_url",),
    ),
    "gitlab": FieldMap(
        id=("id", "path_with_namespace"),
        name=("name", "path"),
        description=("description",),
        created_at=("created_at",),
        last_activity_at=("last_activity_at",),
        commit_count=("statistics.commit_count", "commit_count"),
        primary_language=("language",),
        owner_location=("owner.location", "namespace.location"),
        fork_count=("forks_count",),
        url=("web_url",),
    ),
    "bitbucket": FieldMap(
        id=("uuid", "full_name"),
        name=("name", "slug"),
        description=("description",),
        created_at=("created_on",),
        last_activity_at=("updated_on",),
        commit_count=("commit_count",),
        primary_language=("language",),
        owner_location=("owner.location",),
        fork_count=("fork_count",),
        url=("links.html.href",),
    ),
}

GENERIC_FIELD_MAP = FieldMap(
    id=("id",),
    name=("name",),
    description=("description",),
    created_at=("created_at",),
    last_activity_at=("last_activity_at", "updated_at"),
    commit_count=("commit_count",),
    primary_language=("language", "primary_language"),
    owner_location=("owner_location", "location"),
    fork_count=("fork_count", "forks_count"),
    url=("url",),
)

DEFAULT_PLATFORM_PRIORITY: dict[str, int] = {
    "github": 5,
    "gitlab": 4,
    "bitbucket": 3,
    "sourceforge": 2,
    "launchpad": 1,
}


def _dig(raw: dict, path: str):
    value = raw
    for part in path.split("."):
        if not isinstance(value, dict) or part not in value:
            return None
        value = value[part]
    return value


def _first(raw: dict, paths: tuple[str, ...]):
    for path in paths:
        value = _dig(raw, path)
        if value is not None:
            return value
    return None


def _excerpt(raw: dict) -> str:
    text = json.dumps(raw, sort_keys=True, default=str)
    return text if len(text) <= 200 else text[:197] + "..."


def _optional_int(value) -> int | None:
    if value is None or isinstance(value, bool):
        return None
    if isinstance(value, int) and value >= 0:
        return value
    if isinstance(value, str) and value.isdigit():
        return int(value)
    return None


def normalize(raw: dict, platform: str, searchterm: str | None = None) -> RepoRecord:
    """Build a RepoRecord from one platform payload.

    searchterm (a social platform name) is taken from the argument when
    given, else from the _social_platform tag the search driver adds.
    """
    fmap = FIELD_MAPS.get(platform, GENERIC_FIELD_MAP)

    repo_id = _first(raw, fmap.id)
    if repo_id is None:
        raise NormalizationError(f"{platform} payload has no id: {_excerpt(raw)}")
    created_raw = _first(raw, fmap.created_at)
    if created_raw is None:
        raise NormalizationError(f"{platform} payload has no creation time: {_excerpt(raw)}")
    try:
        created_at = parse_utc(str(created_raw))
    except ValidationError as exc:
        raise NormalizationError(f"{platform} payload has bad creation time: {exc}") from exc

    last_raw = _first(raw, fmap.last_activity_at)
    if last_raw is None:
        last_activity_at = created_at
    else:
        try:
            last_activity_at = parse_utc(str(last_raw))
        except ValidationError as exc:
            raise NormalizationError(f"{platform} payload has bad activity time: {exc}") from exc

    name = _first(raw, fmap.name)
    description = _first(raw, fmap.description)
    location = _first(raw, fmap.owner_location)
    url = _first(raw, fmap.url)

    terms = set()
    tagged = searchterm if searchterm is not None else raw.get("_social_platform")
    if tagged:
        terms.add(str(tagged).lower())

    return RepoRecord(
        platform=platform,
        repo_id=str(repo_id),
        name=" ".join(str(name).split()) if name is not None else "",
        description=" ".join(str(description).split()) if description is not None else "",
        created_at=created_at,
        last_activity_at=last_activity_at,
        commit_count=_optional_int(_first(raw, fmap.commit_count)),
        primary_language=str(_first(raw, fmap.primary_language)) if _first(raw, fmap.primary_language) is not None else None,
        owner_location_raw=" ".join(str(location).split()) if location is not None else None,
        matched_searchterms=frozenset(terms),
        fork_count=_optional_int(_first(raw, fmap.fork_count)),
        url=str(url) if url is not None else "",
    )


def merge_matched_searchterms(records: list[RepoRecord]) -> list[RepoRecord]:
    """Collapse per-query duplicates of the same repository, unioning terms."""
    merged: dict[tuple[str, str], RepoRecord] = {}
    for record in records:
        existing = merged.get(record.key)
        if existing is None:
            merged[record.key] = record
        else:
            merged[record.key] = existing.with_searchterms(
                existing.matched_searchterms | record.matched_searchterms
            )
    return list(merged.values())


def _mirror_key(record: RepoRecord) -> tuple[str, str] | None:
    name = " ".join(record.name.casefold().split())
    description = " ".join(record.description.casefold().split())
    if not name or not description:
        return None
    return (name, description)


def dedupe_mirrors(
    records: list[RepoRecord],
    priority: dict[str, int] | None = None,
) -> tuple[list[RepoRecord], list[tuple[RepoRecord, RepoRecord]]]:
    """Drop cross-platform mirrors, keeping the highest-priority platform's copy.

    A mirror pair shares a case-folded, whitespace-collapsed name AND
    description, both non-empty, across different platforms. Returns the kept
    records in input order plus (dropped, kept) pairs.
    """
    ranks = DEFAULT_PLATFORM_PRIORITY if priority is None else priority
    groups: dict[tuple[str, str], list[int]] = {}
    for index, record in enumerate(records):
        key = _mirror_key(record)
        if key is not None:
            groups.setdefault(key, []).append(index)

    dropped: dict[int, int] = {}  # dropped index -> kept index
    for indices in groups.values():
        platforms = {records[i].platform for i in indices}
        if len(platforms) < 2:
            continue
        # highest priority wins; ties break toward the lexicographically
        # smaller platform name so the outcome never depends on input order
        winner = min(platforms, key=lambda p: (-ranks.get(p, 0), p))
        kept_index = next(i for i in indices if records[i].platform == winner)
        for i in indices:
            if records[i].platform != winner:
                dropped[i] = kept_index

    kept = [record for i, record in enumerate(records) if i not in dropped]
    pairs = [(records[i], records[kept_i]) for i, kept_i in sorted(dropped.items())]
    return kept, pairs
