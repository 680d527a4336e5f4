"""Pareto selection of repositories over (commits, lifespan, timeliness).

Commit count and lifespan are maximized, timeliness (days since last
activity) is minimized. The filter keeps every vector no other vector
dominates; equal vectors never dominate each other and are all retained.
"""

from __future__ import annotations

from datetime import datetime
from typing import Sequence

from .errors import ValidationError
from .schema import RepoRecord, lifespan, timeliness


class IndicatorVector:
    """(n_commits max, lifespan max, timeliness min) for one repository."""

    __slots__ = ("n_commits", "lifespan_days", "timeliness_days", "source")

    def __init__(self, n_commits: int, lifespan_days: int, timeliness_days: int,
                 source: tuple[str, str] = ("", "")):
        for label, value in (("n_commits", n_commits), ("lifespan_days", lifespan_days),
                             ("timeliness_days", timeliness_days)):
            if value < 0:
                raise ValidationError(f"{label} must be non-negative, got {value}")
        self.n_commits = n_commits
        self.lifespan_days = lifespan_days
        self.timeliness_days = timeliness_days
        self.source = source

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n_commits, self.lifespan_days, self.timeliness_days)

    def __repr__(self) -> str:
        return (f"IndicatorVector({self.n_commits}, {self.lifespan_days}, "
                f"{self.timeliness_days}, source={self.source})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, IndicatorVector):
            return NotImplemented
        return self.as_tuple() == other.as_tuple() and self.source == other.source

    def __hash__(self) -> int:
        return hash((self.as_tuple(), self.source))


def indicator_vector(record: RepoRecord, now: datetime) -> IndicatorVector | None:
    """Build the indicator vector, or None when the commit count is unknown."""
    if record.commit_count is None:
        return None
    return IndicatorVector(
        n_commits=record.commit_count,
        lifespan_days=lifespan(record),
        timeliness_days=timeliness(record, now),
        source=record.key,
    )


def build_indicators(
    records: Sequence[RepoRecord], now: datetime
) -> tuple[list[IndicatorVector], int]:
    """Vectors for all records with known commits, plus the excluded count."""
    vectors = []
    excluded = 0
    for record in records:
        vec = indicator_vector(record, now)
        if vec is None:
            excluded += 1
        else:
            vectors.append(vec)
    return vectors, excluded


def _dominates_tuple(v: tuple[int, int, int], w: tuple[int, int, int]) -> bool:
    return (v != w
            and v[0] >= w[0]
            and v[1] >= w[1]
            and v[2] <= w[2])


def dominates(v: IndicatorVector, w: IndicatorVector) -> bool:
    return _dominates_tuple(v.as_tuple(), w.as_tuple())


def non_dominated_filter(vs: Sequence[IndicatorVector]) -> list[IndicatorVector]:
    """Keep exactly the vectors no other input vector dominates, input order."""
    keep = _non_dominated_indices(vs, range(len(vs)))
    return [vs[i] for i in sorted(keep)]


def _non_dominated_indices(vs: Sequence[IndicatorVector], indices) -> set[int]:
    # Sorted this way, any dominator of v is visited before v, and the kept
    # front always contains an undominated dominator of every dropped vector.
    order = sorted(indices, key=lambda i: (-vs[i].n_commits, -vs[i].lifespan_days,
                                           vs[i].timeliness_days, i))
    front: list[tuple[int, int, int]] = []
    front_seen: set[tuple[int, int, int]] = set()
    keep: set[int] = set()
    for i in order:
        v = vs[i].as_tuple()
        if any(_dominates_tuple(w, v) for w in front):
            continue
        keep.add(i)
        if v not in front_seen:
            front_seen.add(v)
            front.append(v)
    return keep


def pareto_layers(vs: Sequence[IndicatorVector], layers: int) -> list[list[IndicatorVector]]:
    """Peel successive non-dominated fronts; layer 1 is non_dominated_filter."""
    if layers < 1:
        raise ValidationError(f"layers must be >= 1, got {layers}")
    remaining = list(range(len(vs)))
    out: list[list[IndicatorVector]] = []
    for _ in range(layers):
        if not remaining:
            break
        keep = _non_dominated_indices(vs, remaining)
        out.append([vs[i] for i in sorted(keep)])
        remaining = [i for i in remaining if i not in keep]
    return out
