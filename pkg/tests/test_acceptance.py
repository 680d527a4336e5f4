"""End-to-end acceptance checks for the analysis pipeline.

Each test prints one PASS/FAIL line (run with -s to see them) and enforces a
wall-clock budget, so this module doubles as a quick release gate:

    pytest tests/test_acceptance.py -v -s
"""

import math
import os
import time
from contextlib import contextmanager
from datetime import timedelta
from pathlib import Path

import numpy as np
import pytest

import synth
from conftest import FIXTURES
from repotrend import analytics, textclust, textprep, topics
from repotrend.cli import main
from repotrend.schema import write_corpus
from repotrend.selection import IndicatorVector, dominates, non_dominated_filter
from repotrend.textprep import IdfTable, TokenDoc, build_idf, cosine

PLATFORMS = ["telegram", "twitter", "reddit"]


@contextmanager
def criterion(name, budget_seconds):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL")
        raise
    elapsed = time.perf_counter() - start
    if elapsed >= budget_seconds:
        print(f"ACCEPTANCE {name}: FAIL (over budget)")
        raise AssertionError(f"{name} took {elapsed:.2f}s (budget {budget_seconds}s)")
    print(f"ACCEPTANCE {name}: PASS ({elapsed:.2f}s)")


def synthetic_docs(records, stopwords):
    return textprep.docs_from_corpus(records, PLATFORMS, stopwords)


def doc_label(doc_id):
    # synthetic repo ids end in the zero-padded stream index
    return int(doc_id[1][-4:]) % 3


def test_fading_exactness():
    # fade mutates in place, so each path below starts from a fresh cluster
    def cluster():
        return textclust.MicroCluster(cluster_id=0, tf={"a": 1.0}, weight=1.0,
                                      last_update=0.0)

    with criterion("fading-exactness", 1.0):
        faded = textclust.fade(cluster(), 100.0, fade_rate=0.01)
        assert faded.weight == pytest.approx(0.5, rel=1e-12)

        staged = textclust.fade(cluster(), 37.25, fade_rate=0.01)
        staged = textclust.fade(staged, 100.0, fade_rate=0.01)
        direct = textclust.fade(cluster(), 100.0, fade_rate=0.01)
        assert staged.weight == pytest.approx(direct.weight, rel=1e-12)
        assert staged.tf["a"] == pytest.approx(direct.tf["a"], rel=1e-12)


def test_cleanup_removal_boundary():
    with criterion("cleanup-boundary", 1.0):
        doc = TokenDoc(doc_id="d", timestamp=synth.BASE_TIME, tokens=("a",))

        state = textclust.ClusterState(textclust.ClustererConfig())
        textclust.insert(doc, 0.0, state)
        textclust.cleanup(state, 100.0)  # weight 2^-1 == threshold, boundary is <=
        assert state.clusters == {}

        state = textclust.ClusterState(textclust.ClustererConfig())
        textclust.insert(doc, 0.0, state)
        textclust.cleanup(state, 99.0)
        assert len(state.clusters) == 1


def test_synthetic_stream_recovery(stopwords):
    with criterion("stream-recovery", 10.0):
        docs = synthetic_docs(synth.make_corpus(), stopwords)
        assert len(docs) == 300

        assigned = {}
        state, log = textclust.run_stream(
            docs, textclust.ClustererConfig(),
            on_insert=lambda doc, a: assigned.__setitem__(doc.doc_id, a.cluster_id),
        )

        merged_into = {ev.ids[1]: ev.ids[0] for ev in log if ev.event == "pair-merged"}

        def final_id(cid):
            while cid in merged_into:
                cid = merged_into[cid]
            return cid

        members = {}
        for doc_id, cid in assigned.items():
            members.setdefault(final_id(cid), []).append(doc_id)

        heaviest = sorted(state.clusters, key=lambda c: -state.clusters[c].weight)[:3]
        assert len(heaviest) == 3
        covered = 0
        for cid in heaviest:
            labels = [doc_label(doc_id) for doc_id in members.get(cid, [])]
            assert labels
            majority = max(set(labels), key=labels.count)
            assert labels.count(majority) / len(labels) >= 0.9
            covered += len(labels)
        assert covered / len(docs) >= 0.9


def test_concept_drift_envelope(stopwords):
    with criterion("concept-drift", 10.0):
        docs = textclust.sort_docs(synthetic_docs(synth.make_drift_records(), stopwords))
        config = textclust.ClustererConfig()
        state = textclust.ClusterState(config)
        origin = docs[0].timestamp
        unit = timedelta(hours=config.time_unit_hours)

        def anchor_weight(at):
            return sum(mc.weight * 2 ** (-config.fade_rate * (at - mc.last_update))
                       for mc in state.clusters.values() if "weath" in mc.tf)

        next_cleanup = config.t_gap
        base = None
        measured = {}
        for doc in docs:
            t = (doc.timestamp - origin) / unit
            textclust.insert(doc, t, state)
            if t == 150.0:
                base = anchor_weight(150.0)  # last weather doc just arrived
            if t >= next_cleanup:
                textclust.cleanup(state, t)
                measured[t] = anchor_weight(t)
                next_cleanup = config.t_gap * (math.floor(t / config.t_gap) + 1)

        assert base is not None and base > 1.0
        removal_t = next(
            t for t in sorted(measured)
            if t > 150.0 and base * 2 ** (-config.fade_rate * (t - 150.0))
            <= config.removal_threshold
        )
        for t in sorted(measured):
            if t <= 150.0:
                continue
            envelope = base * 2 ** (-config.fade_rate * (t - 150.0))
            if t < removal_t:
                assert math.isclose(measured[t], envelope, rel_tol=1e-9, abs_tol=1e-12)
            else:
                assert measured[t] == 0.0

        removed = [ev for ev in state.events
                   if ev.event == "removed" and ev.t == removal_t
                   and any(tok == "weath" for tok, _ in ev.top_tokens)]
        assert removed and removed[0].weight <= config.removal_threshold


def brute_force_front(triples):
    arr = np.asarray(triples, dtype=np.int64)
    ge_commits = arr[:, 0][:, None] >= arr[:, 0][None, :]
    ge_lifespan = arr[:, 1][:, None] >= arr[:, 1][None, :]
    le_timeliness = arr[:, 2][:, None] <= arr[:, 2][None, :]
    identical = (
        (arr[:, 0][:, None] == arr[:, 0][None, :])
        & (arr[:, 1][:, None] == arr[:, 1][None, :])
        & (arr[:, 2][:, None] == arr[:, 2][None, :])
    )
    dominates_matrix = ge_commits & ge_lifespan & le_timeliness & ~identical
    return [i for i in range(len(arr)) if not dominates_matrix[:, i].any()]


def test_dominance_matches_brute_force():
    with criterion("dominance-oracle", 5.0):
        for seed in range(20):
            rng = np.random.Generator(np.random.PCG64(seed))
            triples = np.column_stack([
                rng.integers(0, 500, 1000),
                rng.integers(0, 4000, 1000),
                rng.integers(0, 4000, 1000),
            ])
            vectors = [IndicatorVector(int(c), int(l), int(t), source=("s", str(i)))
                       for i, (c, l, t) in enumerate(triples)]

            front = non_dominated_filter(vectors)
            expected = [vectors[i] for i in brute_force_front(triples)]
            assert front == expected

            assert non_dominated_filter(front) == front
            kept = set(front)
            for v in front:
                assert not any(dominates(w, v) for w in front)
            for v in vectors:
                if v not in kept:
                    assert any(dominates(w, v) for w in front)


def rank_then_pearson(xs, ys):
    def mid_ranks(values):
        order = np.argsort(values, kind="stable")
        ranks = np.empty(len(values), dtype=float)
        i = 0
        while i < len(values):
            j = i
            while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
                j += 1
            ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
            i = j + 1
        return ranks

    return float(np.corrcoef(mid_ranks(np.asarray(xs)), mid_ranks(np.asarray(ys)))[0, 1])


def test_spearman_matches_rank_pearson_oracle():
    with criterion("spearman-oracle", 1.0):
        xs = list(range(1, 21))
        assert analytics.spearman_rho(xs, [x ** 3 for x in xs]) == 1.0
        assert analytics.spearman_rho(xs, [-x for x in xs]) == -1.0

        rng = np.random.Generator(np.random.PCG64(42))
        checked = 0
        while checked < 100:
            n = int(rng.integers(5, 60))
            xs = rng.integers(0, 8, n)  # small range forces ties
            ys = rng.integers(0, 8, n)
            if len(set(xs.tolist())) < 2 or len(set(ys.tolist())) < 2:
                continue
            rho = analytics.spearman_rho(xs.tolist(), ys.tolist())
            assert rho == pytest.approx(rank_then_pearson(xs, ys), abs=1e-9)
            checked += 1


def test_lda_recovers_generators(stopwords):
    with criterion("lda-recovery", 60.0):
        docs = synthetic_docs(synth.make_corpus(), stopwords)
        model = topics.fit_lda(docs, k_topics=3, alpha=1.0, iterations=200,
                               seed=0, check_invariants=True)

        stems = [synth.generator_stems(g) for g in range(3)]

        def owner(token):
            for g, stem_set in enumerate(stems):
                if all(part in stem_set for part in token.split("_")):
                    return g
            return None

        owners_per_topic = []
        for k in range(3):
            top5 = [tok for tok, _ in topics.top_words(model, k, 5)]
            owners = {owner(tok) for tok in top5}
            assert len(owners) == 1 and None not in owners, (k, top5)
            owners_per_topic.append(owners.pop())
        assert sorted(owners_per_topic) == [0, 1, 2]


def test_cosine_and_idf_numerics():
    with criterion("cosine-idf-numerics", 1.0):
        assert cosine({"a": 3.0}, {"a": 3.0}) == pytest.approx(1.0, abs=1e-7)
        assert cosine({"a": 1.0}, {"b": 1.0}) == pytest.approx(0.0, abs=1e-7)
        assert cosine({"a": 1.0, "b": 1.0}, {"a": 1.0}) == pytest.approx(
            1.0 / math.sqrt(2.0), abs=1e-7)

        one = build_idf([TokenDoc("d1", synth.BASE_TIME, ("a",))])
        assert one.lookup("a") == pytest.approx(1.0, abs=1e-7)

        two = build_idf([
            TokenDoc("d1", synth.BASE_TIME, ("a",)),
            TokenDoc("d2", synth.BASE_TIME, ("b",)),
        ])
        assert two.lookup("a") == pytest.approx(math.log(1.5) + 1.0, abs=1e-7)


def test_cli_runs_are_byte_identical(corpus_path, tmp_path):
    with criterion("cli-determinism", 30.0):
        commands = {
            "stream": ["stream", "--corpus", str(corpus_path)],
            "select": ["select", "--corpus", str(corpus_path),
                       "--now", "2019-06-01T00:00:00Z"],
            "lda": ["lda", "--corpus", str(corpus_path), "--k", "3",
                    "--iterations", "10", "--seed", "7"],
        }
        for name, args in commands.items():
            first = tmp_path / name / "one"
            second = tmp_path / name / "two"
            for out in (first, second):
                assert main(args + ["--out", str(out)]) == 0
            files = sorted(p.name for p in first.iterdir())
            assert files == sorted(p.name for p in second.iterdir())
            for file_name in files:
                assert (first / file_name).read_bytes() == (second / file_name).read_bytes(), \
                    (name, file_name)


def test_archived_corpus_recompute_smoke(corpus_records, write_config, tmp_path):
    """Recompute the headline measures end to end from a corpus file.

    Data-conditional: points REPOTREND_ARCHIVE_CORPUS at a real archive when
    one is available, otherwise derives an unevenly-sized corpus from the
    bundled fixture so the rank correlation is well defined.
    """
    with criterion("archived-corpus-smoke", 30.0):
        archive = os.environ.get("REPOTREND_ARCHIVE_CORPUS")
        if archive:
            corpus = Path(archive)
        else:
            kept = [r for r in corpus_records
                    if not ("twitter" in r.matched_searchterms and r.repo_id >= "synth-0150")
                    and not ("reddit" in r.matched_searchterms and r.repo_id >= "synth-0075")]
            corpus = tmp_path / "archive.jsonl"
            write_corpus(corpus, kept)

        cfg = write_config(
            """
            [api_levels]
            telegram = "bot_api"
            twitter = "api"
            reddit = "limited_api"
            """
        )
        stats_out = tmp_path / "stats"
        select_out = tmp_path / "select"
        assert main(["--config", str(cfg), "stats", "--corpus", str(corpus),
                     "--out", str(stats_out)]) == 0
        assert main(["--config", str(cfg), "select", "--corpus", str(corpus),
                     "--now", "2019-06-01T00:00:00Z", "--out", str(select_out)]) == 0

        summary = (stats_out / "summary.csv").read_text(encoding="utf-8")
        assert "zero_lifespan_fraction" in summary
        assert "api_spearman_rho" in summary
        assert (stats_out / "platform_counts.csv").exists()
        assert (stats_out / "monthly_counts.csv").exists()
        selected = (select_out / "selected.csv").read_text(encoding="utf-8").splitlines()
        assert len(selected) > 1  # header plus a non-empty front
