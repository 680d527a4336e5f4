"""Descriptive statistics and report series over the normalized corpus.

Counting operations are order-independent. Time series carry strictly
increasing buckets: calendar months as "YYYY-MM" strings for repository
counts, stream-time bucket starts as floats for cluster weights.
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Mapping, Sequence

from .errors import ValidationError
from .schema import RepoRecord, lifespan
from .textclust import ClusterEventLog, ClusterState, MicroCluster, top_tokens


class ApiSupportLevel(IntEnum):
    """Ordinal third-party access classes, weakest to strongest."""

    NO_API = 0
    LIMITED_API = 1
    API = 2
    BOT_API = 3

    @classmethod
    def parse(cls, name: str) -> "ApiSupportLevel":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            valid = ", ".join(level.name.lower() for level in cls)
            raise ValidationError(f"unknown api support level {name!r}; expected one of {valid}")


@dataclass(frozen=True)
class TimeSeries:
    entries: tuple[tuple[object, float], ...]

    def __post_init__(self) -> None:
        buckets = [bucket for bucket, _ in self.entries]
        for a, b in zip(buckets, buckets[1:]):
            if not a < b:
                raise ValidationError(f"time series buckets must strictly increase: {a!r} >= {b!r}")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def lifespan_histogram(records: Sequence[RepoRecord]) -> tuple[dict[int, int], float | None]:
    """Day-bucket counts plus the fraction at zero days (None when empty)."""
    counts = Counter(lifespan(r) for r in records)
    if not records:
        return {}, None
    return dict(sorted(counts.items())), counts.get(0, 0) / len(records)


def _month_key(dt) -> str:
    return f"{dt.year:04d}-{dt.month:02d}"


def _next_month(key: str) -> str:
    year, month = int(key[:4]), int(key[5:7])
    if month == 12:
        return f"{year + 1:04d}-01"
    return f"{year:04d}-{month + 1:02d}"


def monthly_new_repos(
    records: Sequence[RepoRecord],
    platform: str | None = None,
    searchterm: str | None = None,
) -> TimeSeries:
    """Repositories created per UTC calendar month, zero months gap-filled.

    platform filters on the hosting platform, searchterm on the matched
    social-platform search terms; both are optional and combine.
    """
    selected = []
    for r in records:
        if platform is not None and r.platform != platform:
            continue
        if searchterm is not None and searchterm.lower() not in r.matched_searchterms:
            continue
        selected.append(r)
    if not selected:
        return TimeSeries(entries=())
    counts = Counter(_month_key(r.created_at) for r in selected)
    first, last = min(counts), max(counts)
    entries = []
    key = first
    while True:
        entries.append((key, float(counts.get(key, 0))))
        if key == last:
            break
        key = _next_month(key)
    return TimeSeries(entries=tuple(entries))


def platform_counts(records: Sequence[RepoRecord]) -> dict[str, int]:
    """Repository count per matched social platform (multi-matches count once each)."""
    counts: Counter[str] = Counter()
    for r in records:
        counts.update(r.matched_searchterms)
    return dict(sorted(counts.items()))


def language_distribution(
    records: Sequence[RepoRecord], top_n: int = 5
) -> dict[str, dict[str, int]]:
    """Language counts per social platform, over the top_n platforms by count."""
    if top_n < 1:
        raise ValidationError(f"top_n must be >= 1, got {top_n}")
    totals = platform_counts(records)
    top = [name for name, _ in sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))[:top_n]]
    out: dict[str, dict[str, int]] = {}
    for name in top:
        langs: Counter[str] = Counter()
        for r in records:
            if name in r.matched_searchterms:
                langs[r.primary_language if r.primary_language else "unknown"] += 1
        out[name] = dict(sorted(langs.items()))
    return out


def _mid_ranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        # tied block shares the average of the ranks it spans (1-based)
        avg = (i + j) / 2 + 1
        for pos in range(i, j + 1):
            ranks[order[pos]] = avg
        i = j + 1
    return ranks


def spearman_rho(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Rank correlation: Pearson correlation of mid-ranks."""
    if len(xs) != len(ys):
        raise ValidationError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise ValidationError("need at least 2 observations")
    if min(xs) == max(xs) or min(ys) == max(ys):
        raise ValidationError("rank correlation is undefined for constant input")
    rx = _mid_ranks(xs)
    ry = _mid_ranks(ys)
    n = len(rx)
    mean_x = sum(rx) / n
    mean_y = sum(ry) / n
    cov = sum((a - mean_x) * (b - mean_y) for a, b in zip(rx, ry))
    var_x = sum((a - mean_x) ** 2 for a in rx)
    var_y = sum((b - mean_y) ** 2 for b in ry)
    return cov / math.sqrt(var_x * var_y)


def api_support_correlation(
    counts: Mapping[str, int], levels: Mapping[str, ApiSupportLevel]
) -> float:
    """Spearman correlation between per-platform counts and API support levels."""
    missing = sorted(set(counts) - set(levels))
    if missing:
        raise ValidationError(f"no api support level for platform(s): {', '.join(missing)}")
    names = sorted(counts)
    xs = [float(counts[name]) for name in names]
    ys = [float(levels[name]) for name in names]
    return spearman_rho(xs, ys)


def country_counts(geopoints: Iterable) -> tuple[dict[str, int], int]:
    """Counts by country code; entries that are None or uncoded go to unknown."""
    counts: Counter[str] = Counter()
    unknown = 0
    for point in geopoints:
        code = getattr(point, "country_code", None) if point is not None else None
        if code:
            counts[code] += 1
        else:
            unknown += 1
    return dict(sorted(counts.items())), unknown


def _last_states(log: ClusterEventLog):
    """Replay the log yielding, per event, the live-cluster state table.

    State per cluster id: (t, weight, top tokens of the latest snapshot that
    describes it). A cluster dies when removed or absorbed by a pair merge.
    """
    state: dict[int, tuple[float, float, tuple[str, ...]]] = {}
    for event in log:
        subject = event.ids[0]
        if event.event == "removed":
            state.pop(subject, None)
        else:
            state[subject] = (event.t, event.weight, tuple(tok for tok, _ in event.top_tokens))
            if event.event == "pair-merged":
                state.pop(event.ids[1], None)
        yield event, state


def cluster_weight_series(
    log: ClusterEventLog,
    term: str,
    bucket_size: float,
    fade_rate: float = 0.01,
    top_k: int = 10,
) -> TimeSeries:
    """Summed faded weight of clusters whose top tokens contain the term.

    One entry per bucket that contains at least one event; the reference time
    is the bucket's last event, and untouched clusters fade to it by
    2^(-fade_rate * elapsed). Term membership checks the first top_k snapshot
    tokens of each cluster's latest state.
    """
    if bucket_size <= 0:
        raise ValidationError(f"bucket_size must be > 0, got {bucket_size}")
    if top_k < 1:
        raise ValidationError(f"top_k must be >= 1, got {top_k}")
    closing: dict[float, tuple[float, dict]] = {}
    for event, state in _last_states(log):
        bucket = math.floor(event.t / bucket_size) * bucket_size
        closing[bucket] = (event.t, {cid: snap for cid, snap in state.items()})
    entries = []
    for bucket in sorted(closing):
        ref_t, state = closing[bucket]
        total = 0.0
        for t_last, weight, tokens in state.values():
            if term in tokens[:top_k]:
                total += weight * 2.0 ** (-fade_rate * (ref_t - t_last))
        entries.append((bucket, total))
    return TimeSeries(entries=tuple(entries))


def term_neighborhood(
    source: ClusterState | Iterable[MicroCluster], term: str, k: int = 10
) -> dict[str, float]:
    """Union of top-k token maps of live clusters whose top-k contains the term."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    clusters = source.clusters.values() if isinstance(source, ClusterState) else source
    out: dict[str, float] = {}
    for mc in clusters:
        ranked = top_tokens(mc, k)
        if any(tok == term for tok, _ in ranked):
            for tok, weight in ranked:
                out[tok] = out.get(tok, 0.0) + weight
    return dict(sorted(out.items()))


def write_counts_csv(counts: Mapping, path: str, header: Sequence[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(header))
        for key in counts:
            writer.writerow([key, counts[key]])


def write_timeseries_csv(series: TimeSeries, path: str, value_name: str = "value") -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bucket", value_name])
        for bucket, value in series:
            writer.writerow([bucket, value])


def write_timeseries_svg(series: TimeSeries, path: str, width: int = 640, height: int = 240) -> None:
    """Minimal polyline rendering of a series, for quick visual inspection."""
    pad = 10.0
    n = len(series)
    values = [v for _, v in series]
    lo = min(values) if values else 0.0
    hi = max(values) if values else 1.0
    span = (hi - lo) or 1.0
    points = []
    for i, (_, value) in enumerate(series):
        x = pad + (width - 2 * pad) * (i / (n - 1) if n > 1 else 0.0)
        y = height - pad - (height - 2 * pad) * ((value - lo) / span)
        points.append(f"{x:.2f},{y:.2f}")
    body = (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}">\n'
        f'  <polyline fill="none" stroke="black" points="{" ".join(points)}"/>\n'
        "</svg>\n"
    )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(body)
