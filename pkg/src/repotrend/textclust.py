"""Online text stream clustering with temporal fading.

Micro-clusters hold faded term-frequency maps. Documents are inserted by
maximal cosine similarity over tf-idf representations; periodic cleanups fade
everything to the current time, drop stale clusters and tokens, and merge
near-duplicate clusters. All tie-breaks are by ascending cluster id so runs
are reproducible byte for byte.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from datetime import timedelta
from typing import Callable, Sequence

from .errors import StreamOrderError, ValidationError
from .textprep import IdfTable, SparseVector, TokenDoc, cosine, tfidf

VALID_MODES = ("wall-time", "count-time")


@dataclass(frozen=True)
class ClustererConfig:
    """Knobs for the stream clusterer.

    fade_rate and radius follow the source framework (0.01 and 0.06). The
    cleanup period t_gap and the wall-clock span of one time unit are not
    fixed by that framework; the defaults here are 100 units of 1 hour each.
    """

    fade_rate: float = 0.01
    radius: float = 0.06
    t_gap: float = 100.0
    n_min: int = 1
    n_max: int = 2
    time_unit_hours: float = 1.0
    mode: str = "wall-time"
    merge_radius: float | None = None
    snapshot_top_k: int = 10

    def __post_init__(self) -> None:
        if self.fade_rate <= 0:
            raise ValidationError(f"fade_rate must be > 0, got {self.fade_rate}")
        if not 0 < self.radius < 1:
            raise ValidationError(f"radius must be in (0, 1), got {self.radius}")
        if self.t_gap < 1:
            raise ValidationError(f"t_gap must be >= 1, got {self.t_gap}")
        if self.n_min < 1 or self.n_max < self.n_min:
            raise ValidationError(f"need n_max >= n_min >= 1, got ({self.n_min}, {self.n_max})")
        if self.time_unit_hours <= 0:
            raise ValidationError(f"time_unit_hours must be > 0, got {self.time_unit_hours}")
        if self.mode not in VALID_MODES:
            raise ValidationError(f"mode must be one of {VALID_MODES}, got {self.mode!r}")
        if self.merge_radius is not None and not 0 < self.merge_radius <= 1:
            raise ValidationError(f"merge_radius must be in (0, 1], got {self.merge_radius}")
        if self.snapshot_top_k < 1:
            raise ValidationError(f"snapshot_top_k must be >= 1, got {self.snapshot_top_k}")

    @property
    def effective_merge_radius(self) -> float:
        return self.radius if self.merge_radius is None else self.merge_radius

    @property
    def removal_threshold(self) -> float:
        return 2.0 ** (-self.fade_rate * self.t_gap)


class MicroCluster:
    """One fading cluster: token weights, a faded document count, a clock."""

    __slots__ = ("id", "tf", "weight", "last_update")

    def __init__(self, cluster_id: int, tf: dict[str, float], weight: float, last_update: float):
        self.id = cluster_id
        self.tf = tf
        self.weight = weight
        self.last_update = last_update

    def fade(self, t: float, fade_rate: float) -> "MicroCluster":
        delta = t - self.last_update
        if delta < 0:
            raise StreamOrderError(
                f"cluster {self.id}: cannot fade backwards from {self.last_update} to {t}"
            )
        if delta > 0:
            factor = 2.0 ** (-fade_rate * delta)
            self.weight *= factor
            for token in self.tf:
                self.tf[token] *= factor
        self.last_update = t
        return self


def fade(mc: MicroCluster, t: float, fade_rate: float) -> MicroCluster:
    return mc.fade(t, fade_rate)


def top_tokens(mc: MicroCluster, k: int) -> list[tuple[str, float]]:
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    ranked = sorted(mc.tf.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


@dataclass(frozen=True)
class ClusterEvent:
    t: float
    event: str
    ids: tuple[int, ...]
    top_tokens: tuple[tuple[str, float], ...]
    weight: float

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "event": self.event,
            "ids": list(self.ids),
            "top_tokens": [[token, weight] for token, weight in self.top_tokens],
            "weight": self.weight,
        }


class ClusterEventLog:
    """Append-only, time-ordered record of cluster lifecycle events."""

    def __init__(self) -> None:
        self.events: list[ClusterEvent] = []

    def append(self, event: ClusterEvent) -> None:
        if self.events and event.t < self.events[-1].t:
            raise ValidationError(
                f"event log must be time-ordered: {event.t} after {self.events[-1].t}"
            )
        self.events.append(event)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e.to_dict(), sort_keys=True) + "\n" for e in self.events)


class ClusterState:
    """Mutable clusterer state: live clusters plus the idf table in force."""

    def __init__(self, config: ClustererConfig):
        self.config = config
        self.clusters: dict[int, MicroCluster] = {}
        self.next_id = 0
        self.last_t: float | None = None
        self.skipped_empty = 0
        self.processed = 0
        self.idf = IdfTable(doc_count=0)
        self.events = ClusterEventLog()

    def _snapshot(self, t: float, event: str, ids: Sequence[int], mc: MicroCluster) -> None:
        self.events.append(
            ClusterEvent(
                t=t,
                event=event,
                ids=tuple(ids),
                top_tokens=tuple(top_tokens(mc, self.config.snapshot_top_k)),
                weight=mc.weight,
            )
        )


@dataclass(frozen=True)
class Assignment:
    cluster_id: int | None
    action: str  # merged | created | skipped


def insert(doc: TokenDoc, t: float, state: ClusterState) -> Assignment:
    """Route one document into the closest cluster, or open a new one."""
    if state.last_t is not None and t < state.last_t:
        raise StreamOrderError(f"stream time went backwards: {t} after {state.last_t}")
    state.last_t = t
    if not doc.tokens:
        state.skipped_empty += 1
        return Assignment(cluster_id=None, action="skipped")
    state.processed += 1

    counts = doc.counts()
    doc_vec = tfidf({tok: float(c) for tok, c in counts.items()}, state.idf)

    best_id = None
    best_sim = 0.0
    for cluster_id in sorted(state.clusters):
        mc = state.clusters[cluster_id]
        sim = cosine(tfidf(mc.tf, state.idf), doc_vec)
        if sim > best_sim:
            best_sim = sim
            best_id = cluster_id

    if best_id is not None and best_sim > state.config.radius:
        mc = state.clusters[best_id]
        mc.fade(t, state.config.fade_rate)
        for token, count in counts.items():
            mc.tf[token] = mc.tf.get(token, 0.0) + float(count)
        mc.weight += 1.0
        mc.last_update = t
        state._snapshot(t, "merged-into", [best_id], mc)
        return Assignment(cluster_id=best_id, action="merged")

    mc = MicroCluster(
        cluster_id=state.next_id,
        tf={tok: float(c) for tok, c in counts.items()},
        weight=1.0,
        last_update=t,
    )
    state.clusters[mc.id] = mc
    state.next_id += 1
    state._snapshot(t, "created", [mc.id], mc)
    return Assignment(cluster_id=mc.id, action="created")


def _cluster_idf(clusters: dict[int, MicroCluster]) -> IdfTable:
    # document frequency here means "number of clusters holding the token"
    df: Counter[str] = Counter()
    for mc in clusters.values():
        df.update(mc.tf.keys())
    n = len(clusters)
    idf = {tok: math.log((1 + n) / (1 + d)) + 1.0 for tok, d in df.items()}
    return IdfTable(doc_count=n, df=dict(df), idf=idf)


def cleanup(state: ClusterState, t: float) -> ClusterState:
    """Fade everything to t, drop the stale, prune tokens, merge near-twins."""
    config = state.config
    threshold = config.removal_threshold

    for cluster_id in sorted(state.clusters):
        mc = state.clusters[cluster_id]
        mc.fade(t, config.fade_rate)
        if mc.weight <= threshold:
            state._snapshot(t, "removed", [cluster_id], mc)
            del state.clusters[cluster_id]

    for cluster_id in sorted(state.clusters):
        mc = state.clusters[cluster_id]
        mc.tf = {tok: w for tok, w in mc.tf.items() if w > threshold}
        if not mc.tf:
            state._snapshot(t, "removed", [cluster_id], mc)
            del state.clusters[cluster_id]

    # the idf in force until the next cleanup reflects the pruned survivors
    state.idf = _cluster_idf(state.clusters)

    merge_radius = config.effective_merge_radius
    changed = True
    while changed:
        changed = False
        ids = sorted(state.clusters)
        for pos, low in enumerate(ids):
            if low not in state.clusters:
                continue
            keeper = state.clusters[low]
            keeper_vec = tfidf(keeper.tf, state.idf)
            for high in ids[pos + 1 :]:
                if high not in state.clusters:
                    continue
                other = state.clusters[high]
                if cosine(keeper_vec, tfidf(other.tf, state.idf)) >= merge_radius:
                    for token, w in other.tf.items():
                        keeper.tf[token] = keeper.tf.get(token, 0.0) + w
                    keeper.weight += other.weight
                    keeper.last_update = t
                    del state.clusters[high]
                    state._snapshot(t, "pair-merged", [low, high], keeper)
                    keeper_vec = tfidf(keeper.tf, state.idf)
                    changed = True
    return state


def sort_docs(docs: Sequence[TokenDoc]) -> list[TokenDoc]:
    return sorted(docs, key=lambda d: (d.timestamp, d.doc_id))


def run_stream(
    docs: Sequence[TokenDoc],
    config: ClustererConfig,
    on_cleanup: Callable[[float, ClusterState], None] | None = None,
    on_insert: Callable[[TokenDoc, Assignment], None] | None = None,
) -> tuple[ClusterState, ClusterEventLog]:
    """Feed a time-ordered document sequence through the clusterer.

    In wall-time mode one time unit is config.time_unit_hours of stream time
    and a cleanup fires whenever elapsed time crosses a multiple of t_gap; in
    count-time mode t is the document index and cleanups fire at t % t_gap == 0.
    The optional hooks observe assignments and post-cleanup state.
    """
    for prev, cur in zip(docs, docs[1:]):
        if cur.timestamp < prev.timestamp:
            raise StreamOrderError(
                f"docs not sorted by timestamp: {cur.doc_id} precedes {prev.doc_id}"
            )

    state = ClusterState(config)
    if not docs:
        return state, state.events

    origin = docs[0].timestamp
    unit = timedelta(hours=config.time_unit_hours)
    next_cleanup = config.t_gap

    for index, doc in enumerate(docs):
        if config.mode == "wall-time":
            t = (doc.timestamp - origin) / unit
        else:
            t = float(index)
        assignment = insert(doc, t, state)
        if on_insert is not None:
            on_insert(doc, assignment)
        if config.mode == "wall-time":
            if t >= next_cleanup:
                cleanup(state, t)
                next_cleanup = config.t_gap * (math.floor(t / config.t_gap) + 1)
                if on_cleanup is not None:
                    on_cleanup(t, state)
        elif t % config.t_gap == 0:
            cleanup(state, t)
            if on_cleanup is not None:
                on_cleanup(t, state)
    return state, state.events


def state_to_dict(state: ClusterState) -> dict:
    return {
        "clusters": [
            {
                "id": mc.id,
                "weight": mc.weight,
                "last_update": mc.last_update,
                "tf": {tok: mc.tf[tok] for tok in sorted(mc.tf)},
            }
            for _, mc in sorted(state.clusters.items())
        ],
        "next_id": state.next_id,
        "last_t": state.last_t,
        "skipped_empty": state.skipped_empty,
        "processed": state.processed,
    }


def write_event_log(log: ClusterEventLog, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(log.to_jsonl())


def read_event_log(path: str) -> ClusterEventLog:
    log = ClusterEventLog()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
                event = ClusterEvent(
                    t=float(data["t"]),
                    event=str(data["event"]),
                    ids=tuple(int(i) for i in data["ids"]),
                    top_tokens=tuple((str(tok), float(w)) for tok, w in data["top_tokens"]),
                    weight=float(data["weight"]),
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ValidationError(f"{path}:{line_no}: bad event line: {exc}")
            log.append(event)
    return log


def read_state_clusters(path: str) -> list[MicroCluster]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    clusters = []
    for entry in data.get("clusters", []):
        clusters.append(
            MicroCluster(
                cluster_id=int(entry["id"]),
                tf={str(tok): float(w) for tok, w in entry["tf"].items()},
                weight=float(entry["weight"]),
                last_update=float(entry["last_update"]),
            )
        )
    return clusters


def write_state(state: ClusterState, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(state_to_dict(state), fh, sort_keys=True, indent=2)
        fh.write("\n")
