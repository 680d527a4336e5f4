"""Common intermediate schema for repository metadata and the corpus file store.

Every other module consumes :class:`RepoRecord`. Records are immutable values
and safe to share across threads. The corpus store is a line-delimited JSON
file (one record per line) preceded by a ``{"schema_version": 1}`` header;
it permits concurrent readers, but appends must come from a single writer.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from .errors import CorpusFormatError, ValidationError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

_SECONDS_PER_DAY = 86400


def parse_utc(value: str) -> datetime:
    """Parse an ISO-8601 timestamp (or bare date) into an aware UTC datetime.

    Accepts a trailing ``Z``, an explicit offset, or no offset (taken as UTC).
    """
    if not isinstance(value, str) or not value.strip():
        raise ValidationError(f"not a timestamp: {value!r}")
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(text)
    except ValueError as exc:
        raise ValidationError(f"unparsable timestamp: {value!r}") from exc
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_utc(dt: datetime) -> str:
    """Canonical ISO-8601 UTC rendering used in the corpus file."""
    dt = dt.astimezone(timezone.utc)
    if dt.microsecond:
        return dt.strftime("%Y-%m-%dT%H:%M:%S.%fZ")
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class RepoRecord:
    """One normalized repository across heterogeneous collaboration platforms.

    ``commit_count``, ``primary_language``, ``owner_location_raw`` and
    ``fork_count`` use ``None`` for unknown; 0 commits is meaningful data and
    is never conflated with unknown.
    """

    platform: str
    repo_id: str
    name: str
    description: str
    created_at: datetime
    last_activity_at: datetime
    commit_count: int | None = None
    primary_language: str | None = None
    owner_location_raw: str | None = None
    matched_searchterms: frozenset[str] = field(default_factory=frozenset)
    fork_count: int | None = None
    url: str = ""

    def __post_init__(self) -> None:
        if not self.platform or not self.repo_id:
            raise ValidationError("platform and repo_id must be non-empty")
        for label in ("created_at", "last_activity_at"):
            dt = getattr(self, label)
            if not isinstance(dt, datetime) or dt.tzinfo is None:
                raise ValidationError(f"{label} must be an aware datetime ({self.key})")
        for label in ("commit_count", "fork_count"):
            count = getattr(self, label)
            if count is not None and count < 0:
                raise ValidationError(f"{label} is negative ({self.key})")
        if not isinstance(self.matched_searchterms, frozenset):
            object.__setattr__(self, "matched_searchterms", frozenset(self.matched_searchterms))

    @property
    def key(self) -> tuple[str, str]:
        """Corpus-wide unique identity: (platform, repo_id)."""
        return (self.platform, self.repo_id)

    def with_searchterms(self, terms: frozenset[str]) -> "RepoRecord":
        return replace(self, matched_searchterms=frozenset(terms))

    def validate(self) -> None:
        """Check the stored-record invariant ``last_activity_at >= created_at``."""
        if self.last_activity_at < self.created_at:
            raise ValidationError(
                f"record {self.key}: last_activity_at {format_utc(self.last_activity_at)} "
                f"precedes created_at {format_utc(self.created_at)}"
            )

    def to_json_dict(self) -> dict:
        return {
            "platform": self.platform,
            "repo_id": self.repo_id,
            "name": self.name,
            "description": self.description,
            "created_at": format_utc(self.created_at),
            "last_activity_at": format_utc(self.last_activity_at),
            "commit_count": self.commit_count,
            "primary_language": self.primary_language,
            "owner_location_raw": self.owner_location_raw,
            "matched_searchterms": sorted(self.matched_searchterms),
            "fork_count": self.fork_count,
            "url": self.url,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "RepoRecord":
        if not isinstance(data, dict):
            raise ValidationError("record line is not a JSON object")
        try:
            record = cls(
                platform=data["platform"],
                repo_id=data["repo_id"],
                name=data.get("name", ""),
                description=data.get("description", ""),
                created_at=parse_utc(data["created_at"]),
                last_activity_at=parse_utc(data["last_activity_at"]),
                commit_count=_optional_count(data.get("commit_count"), "commit_count"),
                primary_language=data.get("primary_language"),
                owner_location_raw=data.get("owner_location_raw"),
                matched_searchterms=frozenset(data.get("matched_searchterms") or ()),
                fork_count=_optional_count(data.get("fork_count"), "fork_count"),
                url=data.get("url", ""),
            )
        except KeyError as exc:
            raise ValidationError(f"record missing field {exc.args[0]!r}") from exc
        record.validate()
        return record


def _optional_count(value, label: str) -> int | None:
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{label} must be an integer or null, got {value!r}")
    return value


def lifespan(record: RepoRecord) -> int:
    """Whole days between creation and last activity (floor).

    0 when both fall on the same instant or within one day.
    """
    record.validate()
    delta = record.last_activity_at - record.created_at
    return int(delta.total_seconds() // _SECONDS_PER_DAY)


def timeliness(record: RepoRecord, now: datetime) -> int:
    """Whole days between a reference clock and the last activity (floor).

    Low values mean recently active. ``now`` must not precede the record's
    last activity.
    """
    if now.tzinfo is None:
        raise ValidationError("now must be an aware datetime")
    delta = now - record.last_activity_at
    if delta.total_seconds() < 0:
        raise ValidationError(
            f"record {record.key}: now {format_utc(now)} precedes "
            f"last_activity_at {format_utc(record.last_activity_at)}"
        )
    return int(delta.total_seconds() // _SECONDS_PER_DAY)


@dataclass(frozen=True)
class CorpusHandle:
    """Locator plus the count of well-formed record lines in the backing file."""

    path: Path
    record_count: int = 0


class SkipReport(NamedTuple):
    line_no: int
    reason: str


class CorpusReadResult(NamedTuple):
    records: list[RepoRecord]
    skips: list[SkipReport]


def read_corpus(path: str | Path) -> CorpusReadResult:
    """Read all records from a corpus file in file order.

    Malformed lines are skipped and reported with their line numbers. A
    duplicate (platform, repo_id) later in the file supersedes the earlier
    occurrence (last-write-wins), mirroring the append contract.

    Raises:
        OSError: unreadable file.
        CorpusFormatError: missing header or schema-version mismatch.
    """
    path = Path(path)
    by_key: dict[tuple[str, str], RepoRecord] = {}
    skips: list[SkipReport] = []
    with path.open("r", encoding="utf-8") as fh:
        header_seen = False
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if not header_seen:
                _check_header(line)
                header_seen = True
                continue
            try:
                record = RepoRecord.from_json_dict(json.loads(line))
            except (json.JSONDecodeError, ValidationError) as exc:
                skips.append(SkipReport(line_no, str(exc)))
                continue
            if record.key in by_key:
                logger.warning("corpus %s: record %s superseded by line %d", path, record.key, line_no)
                del by_key[record.key]
            by_key[record.key] = record
    return CorpusReadResult(list(by_key.values()), skips)


def _check_header(line: str) -> None:
    try:
        header = json.loads(line)
        version = header["schema_version"]
    except (json.JSONDecodeError, TypeError, KeyError) as exc:
        raise CorpusFormatError("corpus file does not start with a schema_version header") from exc
    if version != SCHEMA_VERSION:
        raise CorpusFormatError(f"unsupported corpus schema_version {version!r}, expected {SCHEMA_VERSION}")


def open_corpus(path: str | Path) -> CorpusHandle:
    """Handle for an existing corpus file, or for one to be created on first append."""
    path = Path(path)
    if not path.exists():
        return CorpusHandle(path=path, record_count=0)
    records, _ = read_corpus(path)
    return CorpusHandle(path=path, record_count=len(records))


def append_records(handle: CorpusHandle, records: Iterable[RepoRecord]) -> CorpusHandle:
    """Append records to the corpus, atomically per call.

    Duplicate (platform, repo_id) keys supersede existing records
    (last-write-wins, logged). The whole file is rewritten to a temp name and
    renamed into place, so a partial write is never observable. Callers must
    not append concurrently; readers are unaffected mid-append.

    Raises:
        ValidationError: a new record violates the stored-record invariants.
    """
    new_records = list(records)
    for record in new_records:
        record.validate()

    path = Path(handle.path)
    existing_lines: list[str] = []  # (raw line) in file order, malformed kept verbatim
    existing_keys: dict[tuple[str, str], int] = {}  # key -> index into existing_lines
    if path.exists():
        with path.open("r", encoding="utf-8") as fh:
            first = fh.readline().strip()
            if first:
                _check_header(first)
            for raw in fh:
                raw = raw.rstrip("\n")
                if not raw.strip():
                    continue
                index = len(existing_lines)
                existing_lines.append(raw)
                try:
                    record = RepoRecord.from_json_dict(json.loads(raw))
                except (json.JSONDecodeError, ValidationError):
                    continue
                existing_keys[record.key] = index

    superseded: set[int] = set()
    appended: dict[tuple[str, str], RepoRecord] = {}
    for record in new_records:
        if record.key in existing_keys:
            superseded.add(existing_keys[record.key])
            logger.warning("corpus %s: superseding existing record %s", path, record.key)
        if record.key in appended:
            logger.warning("corpus %s: superseding record %s within append batch", path, record.key)
        appended[record.key] = record

    kept_lines = [line for i, line in enumerate(existing_lines) if i not in superseded]
    new_lines = [json.dumps(r.to_json_dict(), ensure_ascii=False, sort_keys=True) for r in appended.values()]

    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as out:
            out.write(json.dumps({"schema_version": SCHEMA_VERSION}) + "\n")
            for line in kept_lines:
                out.write(line + "\n")
            for line in new_lines:
                out.write(line + "\n")
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise

    records_now, _ = read_corpus(path)
    return CorpusHandle(path=path, record_count=len(records_now))


def write_corpus(path: str | Path, records: Sequence[RepoRecord]) -> CorpusHandle:
    """Create (or replace) a corpus file from scratch."""
    path = Path(path)
    if path.exists():
        path.unlink()
    return append_records(CorpusHandle(path=path), records)


__all__ = [
    "SCHEMA_VERSION",
    "RepoRecord",
    "CorpusHandle",
    "CorpusReadResult",
    "SkipReport",
    "parse_utc",
    "format_utc",
    "lifespan",
    "timeliness",
    "read_corpus",
    "open_corpus",
    "append_records",
    "write_corpus",
]
