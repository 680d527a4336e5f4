"""Command-line pipeline: crawl, normalize, geocode, stats, select, lda, stream, report.

Analysis subcommands never read the wall clock; the reference time comes from
--now or the config so outputs are reproducible. Every run writes its outputs
atomically plus a manifest with config and corpus hashes. Exit codes: 0 on
success, 1 on validation errors, 2 on I/O or file-format errors.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import os
import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Sequence

import click

from . import __version__
from . import analytics, schema, selection, textclust, textprep, topics
from .config import PipelineConfig, load_config
from .errors import ConfigError, RepoTrendError, ValidationError
from .ingest import (
    FixtureAdapter,
    GazetteerGeocoder,
    HttpGeocoder,
    RateLimit,
    build_queries,
    dedupe_mirrors,
    geocode as geocode_one,
    normalize as normalize_raw,
    run_search,
)
from .ingest.normalize import merge_matched_searchterms

logger = logging.getLogger("repotrend")


# ---------------------------------------------------------------- helpers

def _sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _atomic_write(path: Path, write: Callable[[str], None]) -> Path:
    """Run write() against a temp name, then rename over the target."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    os.close(fd)
    try:
        write(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _write_manifest(
    out_dir: Path,
    subcommand: str,
    cfg_path: str | None,
    cfg: PipelineConfig,
    params: dict,
    outputs: Sequence[Path],
    corpus_path: Path | None,
) -> Path:
    manifest = {
        "subcommand": subcommand,
        "versions": {"package": __version__, "python": sys.version.split()[0]},
        "config_sha256": _sha256_file(Path(cfg_path)) if cfg_path else None,
        "corpus_sha256": _sha256_file(corpus_path) if corpus_path else None,
        "seed": cfg.seed,
        "now": schema.format_utc(cfg.now) if cfg.now else None,
        "parameters": params,
        "outputs": {path.name: _sha256_file(path) for path in outputs},
    }
    target = out_dir / f"manifest-{subcommand}.json"
    body = json.dumps(manifest, sort_keys=True, indent=2) + "\n"
    return _atomic_write(target, lambda tmp: Path(tmp).write_text(body, encoding="utf-8"))


def _read_corpus(path: str) -> list[schema.RepoRecord]:
    result = schema.read_corpus(path)
    for skip in result.skips:
        logger.warning("corpus line %d skipped: %s", skip.line_no, skip.reason)
    return result.records


def _resolve_now(cfg: PipelineConfig, now_flag: str | None, required: bool) -> datetime | None:
    if now_flag is not None:
        try:
            return schema.parse_utc(now_flag)
        except ValidationError as exc:
            raise ConfigError(f"--now is not a valid timestamp: {exc}") from exc
    if cfg.now is not None:
        return cfg.now
    if required:
        raise ConfigError("this subcommand needs a reference clock: pass --now or set run.now")
    return None


def _stopwords(cfg: PipelineConfig) -> frozenset[str]:
    return textprep.load_stopwords(cfg.stopwords_path)


def _docs(cfg: PipelineConfig, records, english_only: bool) -> list[textprep.TokenDoc]:
    return textprep.docs_from_corpus(
        records,
        platform_names=[p.lower() for p in cfg.social_platforms],
        stopwords=_stopwords(cfg),
        n_min=cfg.cluster.n_min,
        n_max=cfg.cluster.n_max,
        english_only=english_only,
    )


def _write_csv(path: Path, header: Sequence[str], rows) -> Path:
    def write(tmp: str) -> None:
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(list(header))
            writer.writerows(rows)

    return _atomic_write(path, write)


def _term_token(term: str, cfg: PipelineConfig) -> str:
    return textprep.term_to_token(
        term, [p.lower() for p in cfg.social_platforms], _stopwords(cfg)
    )


# ---------------------------------------------------------------- command group

@click.group(name="repotrend")
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="TOML pipeline configuration.")
@click.option("-v", "--verbose", count=True, help="Increase log verbosity.")
@click.version_option(version=__version__)
@click.pass_context
def cli(ctx: click.Context, config_path: str | None, verbose: int) -> None:
    """Repository trend mining: ingest, cluster, select, model, report."""
    logging.basicConfig(
        level=logging.WARNING - 10 * min(verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.obj = {"config_path": config_path, "config": load_config(config_path)}


def _ctx(ctx: click.Context) -> tuple[str | None, PipelineConfig]:
    return ctx.obj["config_path"], ctx.obj["config"]


# ---------------------------------------------------------------- crawl

@cli.command()
@click.option("--fixtures", "fixtures_path", type=click.Path(), default=None,
              help="JSON file of recorded result pages, keyed by target platform.")
@click.option("--online", is_flag=True, help="Allow live network access.")
@click.option("--corpus", "corpus_path", type=click.Path(), required=True)
@click.option("--now", "now_flag", default=None, help="Pin the retrieval timestamp.")
@click.option("--dedupe/--no-dedupe", "dedupe", default=True,
              help="Drop cross-platform mirrors (default on).")
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.pass_context
def crawl(ctx, fixtures_path, online, corpus_path, now_flag, dedupe, out_dir):
    """Run all configured search queries and append results to the corpus."""
    cfg_path, cfg = _ctx(ctx)
    if online:
        raise ConfigError(
            "this build ships fixture adapters only; live platform clients must "
            "be registered programmatically. Drop --online and pass --fixtures."
        )
    if fixtures_path is None:
        raise ConfigError("offline crawl needs --fixtures with recorded pages")
    with open(fixtures_path, encoding="utf-8") as fh:
        fixtures = json.load(fh)

    now = _resolve_now(cfg, now_flag, required=False) or datetime.now(timezone.utc)
    limit = RateLimit(cfg.rate_limit_requests, cfg.rate_limit_window_seconds)
    queries = build_queries(cfg.social_platforms, cfg.targets)
    records: list[schema.RepoRecord] = []
    for query in queries:
        recorded = fixtures.get(query.target)
        if recorded is None:
            continue
        pages = recorded.get(query.term, []) if isinstance(recorded, dict) else recorded
        adapter = FixtureAdapter(query.target, pages, rate_limit=limit)
        for raw in run_search(adapter, query, now_fn=lambda: now):
            records.append(normalize_raw(raw, query.target))

    records = merge_matched_searchterms(records)
    dropped_pairs = []
    if dedupe:
        records, dropped_pairs = dedupe_mirrors(records)

    corpus = Path(corpus_path)
    handle = schema.open_corpus(corpus) if corpus.exists() else schema.write_corpus(corpus, [])
    handle = schema.append_records(handle, records)

    out = Path(out_dir or cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_manifest(out, "crawl", cfg_path, cfg, {
        "queries": len(queries),
        "records_added": len(records),
        "mirrors_dropped": len(dropped_pairs),
        "corpus_records": handle.record_count,
        "retrieved_at": schema.format_utc(now),
    }, [], corpus)
    click.echo(f"crawl: {len(records)} records into {corpus} ({handle.record_count} total)")


# ---------------------------------------------------------------- normalize

@cli.command()
@click.option("--raw", "raw_path", type=click.Path(), required=True,
              help="JSONL file of platform-native payloads.")
@click.option("--platform", required=True, help="Target platform of the payloads.")
@click.option("--searchterm", default=None, help="Social platform to tag records with.")
@click.option("--corpus", "corpus_path", type=click.Path(), required=True)
@click.option("--dedupe/--no-dedupe", "dedupe", default=False)
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.pass_context
def normalize(ctx, raw_path, platform, searchterm, corpus_path, dedupe, out_dir):
    """Map raw payload lines onto the common schema and append to the corpus."""
    cfg_path, cfg = _ctx(ctx)
    records = []
    skipped = 0
    with open(raw_path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                payload = json.loads(line)
                records.append(normalize_raw(payload, platform, searchterm))
            except (json.JSONDecodeError, RepoTrendError) as exc:
                skipped += 1
                logger.warning("%s:%d skipped: %s", raw_path, line_no, exc)

    records = merge_matched_searchterms(records)
    dropped_pairs = []
    if dedupe:
        records, dropped_pairs = dedupe_mirrors(records)

    corpus = Path(corpus_path)
    handle = schema.open_corpus(corpus) if corpus.exists() else schema.write_corpus(corpus, [])
    handle = schema.append_records(handle, records)

    out = Path(out_dir or cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_manifest(out, "normalize", cfg_path, cfg, {
        "raw_lines_skipped": skipped,
        "records_added": len(records),
        "mirrors_dropped": len(dropped_pairs),
        "corpus_records": handle.record_count,
    }, [], corpus)
    click.echo(f"normalize: {len(records)} records ({skipped} skipped) into {corpus}")


# ---------------------------------------------------------------- geocode

@cli.command()
@click.option("--corpus", "corpus_path", type=click.Path(), required=True)
@click.option("--gazetteer", type=click.Path(), default=None,
              help="Offline CSV of name,lat,lon,country_code rows.")
@click.option("--base-url", default=None, help="HTTP geocoder endpoint (needs --online).")
@click.option("--online", is_flag=True)
@click.option("--cache", "cache_path", type=click.Path(), default=None,
              help="JSON cache of previous lookups, updated in place.")
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.pass_context
def geocode(ctx, corpus_path, gazetteer, base_url, online, cache_path, out_dir):
    """Resolve owner locations to coordinates and aggregate by country."""
    cfg_path, cfg = _ctx(ctx)
    if base_url and not online:
        raise ConfigError("an HTTP geocoder touches the network: pass --online as well")
    if gazetteer:
        client = GazetteerGeocoder(gazetteer)
    elif base_url:
        client = HttpGeocoder(base_url)
    else:
        raise ConfigError("pick a geocoder: --gazetteer FILE or --base-url URL --online")

    cache: dict = {}
    if cache_path and Path(cache_path).exists():
        with open(cache_path, encoding="utf-8") as fh:
            for key, value in json.load(fh).items():
                cache[key] = None if value is None else ingest_geopoint(value)

    records = _read_corpus(corpus_path)
    rows = []
    points = []
    no_location = 0
    for record in records:
        location = record.owner_location_raw
        if not location or not location.strip():
            no_location += 1
            continue
        point = geocode_one(location, client, cache)
        points.append(point)
        rows.append([
            record.platform, record.repo_id, location,
            "" if point is None else point.latitude,
            "" if point is None else point.longitude,
            "" if point is None or point.country_code is None else point.country_code,
        ])

    counts, unknown = analytics.country_counts(points)
    out = Path(out_dir or cfg.out_dir)
    outputs = [
        _write_csv(out / "geocoded.csv",
                   ["platform", "repo_id", "location_raw", "latitude", "longitude", "country_code"],
                   rows),
        _write_csv(out / "country_counts.csv", ["country", "count"],
                   list(counts.items()) + [["unknown", unknown]]),
    ]
    if cache_path:
        body = json.dumps(
            {k: None if v is None else {"lat": v.latitude, "lon": v.longitude,
                                        "country_code": v.country_code}
             for k, v in sorted(cache.items())},
            sort_keys=True, indent=2) + "\n"
        _atomic_write(Path(cache_path), lambda tmp: Path(tmp).write_text(body, encoding="utf-8"))

    _write_manifest(out, "geocode", cfg_path, cfg, {
        "records": len(records),
        "without_location": no_location,
        "looked_up": len(rows),
        "unresolved": unknown,
        "client_calls": getattr(client, "calls", None),
    }, outputs, Path(corpus_path))
    click.echo(f"geocode: {len(rows)} locations, {unknown} unresolved")


def ingest_geopoint(value: dict):
    from .ingest.geocode import GeoPoint

    return GeoPoint(latitude=float(value["lat"]), longitude=float(value["lon"]),
                    country_code=value.get("country_code"))


# ---------------------------------------------------------------- stats

@cli.command()
@click.option("--corpus", "corpus_path", type=click.Path(), required=True)
@click.option("--platform", default=None, help="Hosting platform filter for the monthly series.")
@click.option("--searchterm", default=None, help="Social platform filter for the monthly series.")
@click.option("--top-languages", default=5, show_default=True)
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.pass_context
def stats(ctx, corpus_path, platform, searchterm, top_languages, out_dir):
    """Descriptive statistics: lifespans, platform counts, languages, trends."""
    cfg_path, cfg = _ctx(ctx)
    records = _read_corpus(corpus_path)

    histogram, zero_fraction = analytics.lifespan_histogram(records)
    monthly = analytics.monthly_new_repos(records, platform=platform, searchterm=searchterm)
    counts = analytics.platform_counts(records)
    languages = analytics.language_distribution(records, top_n=top_languages) if records else {}

    summary = [
        ["total_records", len(records)],
        ["zero_lifespan_fraction", "" if zero_fraction is None else zero_fraction],
    ]
    if cfg.api_levels and counts:
        levels = {name: analytics.ApiSupportLevel.parse(level)
                  for name, level in cfg.api_levels.items()}
        summary.append(["api_spearman_rho", analytics.api_support_correlation(counts, levels)])

    out = Path(out_dir or cfg.out_dir)
    outputs = [
        _write_csv(out / "summary.csv", ["metric", "value"], summary),
        _write_csv(out / "lifespan_histogram.csv", ["days", "count"],
                   list(histogram.items())),
        _write_csv(out / "platform_counts.csv", ["platform", "count"], list(counts.items())),
        _write_csv(out / "monthly_counts.csv", ["bucket", "count"],
                   [[bucket, int(value)] for bucket, value in monthly]),
        _write_csv(out / "languages.csv", ["platform", "language", "count"],
                   [[p, lang, n] for p, langs in languages.items()
                    for lang, n in langs.items()]),
    ]
    _write_manifest(out, "stats", cfg_path, cfg, {
        "records": len(records),
        "monthly_platform_filter": platform,
        "monthly_searchterm_filter": searchterm,
        "top_languages": top_languages,
    }, outputs, Path(corpus_path))
    click.echo(f"stats: {len(records)} records summarized into {out}")


# ---------------------------------------------------------------- select

@cli.command()
@click.option("--corpus", "corpus_path", type=click.Path(), required=True)
@click.option("--now", "now_flag", default=None,
              help="Reference clock for timeliness (ISO-8601 UTC).")
@click.option("--layers", default=1, show_default=True,
              help="Peel this many successive non-dominated fronts.")
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.pass_context
def select(ctx, corpus_path, now_flag, layers, out_dir):
    """Pareto-select repositories over (commits, lifespan, timeliness)."""
    cfg_path, cfg = _ctx(ctx)
    now = _resolve_now(cfg, now_flag, required=True)
    records = _read_corpus(corpus_path)
    vectors, excluded = selection.build_indicators(records, now)

    header = ["platform", "repo_id", "n_commits", "lifespan_days", "timeliness_days"]
    if layers == 1:
        chosen = selection.non_dominated_filter(vectors)
        rows = [[v.source[0], v.source[1], v.n_commits, v.lifespan_days, v.timeliness_days]
                for v in chosen]
        selected_count = len(chosen)
    else:
        fronts = selection.pareto_layers(vectors, layers)
        header.append("layer")
        rows = [[v.source[0], v.source[1], v.n_commits, v.lifespan_days, v.timeliness_days, i + 1]
                for i, front in enumerate(fronts) for v in front]
        selected_count = sum(len(front) for front in fronts)

    out = Path(out_dir or cfg.out_dir)
    cfg = _with_now(cfg, now)
    outputs = [_write_csv(out / "selected.csv", header, rows)]
    _write_manifest(out, "select", cfg_path, cfg, {
        "records": len(records),
        "excluded_unknown_commits": excluded,
        "vectors": len(vectors),
        "selected": selected_count,
        "layers": layers,
    }, outputs, Path(corpus_path))
    click.echo(f"select: {selected_count} of {len(vectors)} vectors kept "
               f"({excluded} excluded for unknown commits)")


def _with_now(cfg: PipelineConfig, now: datetime | None) -> PipelineConfig:
    from dataclasses import replace

    return replace(cfg, now=now)


# ---------------------------------------------------------------- lda

@cli.command()
@click.option("--corpus", "corpus_path", type=click.Path(), required=True)
@click.option("--k", "k_topics", default=None, type=int, help="Topic count (default from config).")
@click.option("--alpha", default=None, type=float)
@click.option("--beta", default=None, type=float)
@click.option("--iterations", default=None, type=int)
@click.option("--seed", default=None, type=int)
@click.option("--english-only/--all-descriptions", "english_only", default=True, show_default=True)
@click.option("--trace-every", default=0, show_default=True,
              help="Record perplexity every N sweeps.")
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.pass_context
def lda(ctx, corpus_path, k_topics, alpha, beta, iterations, seed, english_only,
        trace_every, out_dir):
    """Fit the batch topic model and emit the top-word table."""
    cfg_path, cfg = _ctx(ctx)
    records = _read_corpus(corpus_path)
    docs = _docs(cfg, records, english_only)

    model = topics.fit_lda(
        docs,
        k_topics=k_topics if k_topics is not None else cfg.lda.k_topics,
        alpha=alpha if alpha is not None else cfg.lda.alpha,
        beta=beta if beta is not None else cfg.lda.beta,
        iterations=iterations if iterations is not None else cfg.lda.iterations,
        seed=seed if seed is not None else cfg.seed,
        trace_every=trace_every,
    )

    out = Path(out_dir or cfg.out_dir)
    outputs = [
        _atomic_write(out / "lda_model.json", lambda tmp: topics.write_model_json(model, tmp)),
        _atomic_write(out / "lda_topics.csv", lambda tmp: topics.write_topics_csv(model, tmp)),
    ]
    _write_manifest(out, "lda", cfg_path, cfg, {
        "records": len(records),
        "documents": len(model.doc_ids),
        "vocabulary": model.vocab_size,
        "k_topics": model.k_topics,
        "alpha": model.alpha,
        "beta": model.beta,
        "iterations": iterations if iterations is not None else cfg.lda.iterations,
        "seed": model.seed,
        "perplexity": topics.perplexity(model),
        "perplexity_trace": model.perplexity_trace,
    }, outputs, Path(corpus_path))
    click.echo(f"lda: {model.k_topics} topics over {len(model.doc_ids)} documents")


# ---------------------------------------------------------------- stream

@cli.command()
@click.option("--corpus", "corpus_path", type=click.Path(), required=True)
@click.option("--fade-rate", default=None, type=float)
@click.option("--radius", default=None, type=float)
@click.option("--t-gap", default=None, type=float)
@click.option("--time-unit-hours", default=None, type=float)
@click.option("--mode", default=None, type=click.Choice(textclust.VALID_MODES))
@click.option("--merge-radius", default=None, type=float)
@click.option("--english-only/--all-descriptions", "english_only", default=True, show_default=True)
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.pass_context
def stream(ctx, corpus_path, fade_rate, radius, t_gap, time_unit_hours, mode,
           merge_radius, english_only, out_dir):
    """Run the online clusterer over the corpus as a time-ordered stream."""
    cfg_path, cfg = _ctx(ctx)
    base = cfg.cluster
    cluster_cfg = textclust.ClustererConfig(
        fade_rate=fade_rate if fade_rate is not None else base.fade_rate,
        radius=radius if radius is not None else base.radius,
        t_gap=t_gap if t_gap is not None else base.t_gap,
        n_min=base.n_min,
        n_max=base.n_max,
        time_unit_hours=time_unit_hours if time_unit_hours is not None else base.time_unit_hours,
        mode=mode if mode is not None else base.mode,
        merge_radius=merge_radius if merge_radius is not None else base.merge_radius,
        snapshot_top_k=base.snapshot_top_k,
    )
    records = _read_corpus(corpus_path)
    docs = _docs(cfg, records, english_only)
    state, log = textclust.run_stream(docs, cluster_cfg)

    out = Path(out_dir or cfg.out_dir)
    outputs = [
        _atomic_write(out / "stream_events.jsonl",
                      lambda tmp: textclust.write_event_log(log, tmp)),
        _atomic_write(out / "stream_state.json",
                      lambda tmp: textclust.write_state(state, tmp)),
    ]
    _write_manifest(out, "stream", cfg_path, cfg, {
        "records": len(records),
        "documents": len(docs),
        "skipped_empty": state.skipped_empty,
        "final_clusters": len(state.clusters),
        "events": len(log),
        "fade_rate": cluster_cfg.fade_rate,
        "radius": cluster_cfg.radius,
        "t_gap": cluster_cfg.t_gap,
        "time_unit_hours": cluster_cfg.time_unit_hours,
        "mode": cluster_cfg.mode,
    }, outputs, Path(corpus_path))
    click.echo(f"stream: {len(docs)} docs -> {len(state.clusters)} clusters, "
               f"{len(log)} events")


# ---------------------------------------------------------------- report

@cli.command()
@click.option("--events", "events_path", type=click.Path(), required=True)
@click.option("--state", "state_path", type=click.Path(), default=None,
              help="Stream state snapshot, needed for term neighborhoods.")
@click.option("--term", "terms", multiple=True, required=True,
              help="Query term (repeatable); preprocessed like stream tokens.")
@click.option("--bucket-size", default=None, type=float,
              help="Series bucket width in stream time units (default: t_gap).")
@click.option("--top-k", default=10, show_default=True)
@click.option("--svg/--no-svg", default=False, show_default=True)
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.pass_context
def report(ctx, events_path, state_path, terms, bucket_size, top_k, svg, out_dir):
    """Per-term cluster weight series and token neighborhoods."""
    cfg_path, cfg = _ctx(ctx)
    log = textclust.read_event_log(events_path)
    clusters = textclust.read_state_clusters(state_path) if state_path else None
    width = bucket_size if bucket_size is not None else cfg.cluster.t_gap

    out = Path(out_dir or cfg.out_dir)
    outputs = []
    resolved = {}
    for term in terms:
        token = _term_token(term, cfg)
        resolved[term] = token
        series = analytics.cluster_weight_series(
            log, token, width, fade_rate=cfg.cluster.fade_rate, top_k=top_k
        )
        outputs.append(_atomic_write(
            out / f"term_weight_{token}.csv",
            lambda tmp, s=series: analytics.write_timeseries_csv(s, tmp, value_name="weight"),
        ))
        if svg:
            outputs.append(_atomic_write(
                out / f"term_weight_{token}.svg",
                lambda tmp, s=series: analytics.write_timeseries_svg(s, tmp),
            ))
        if clusters is not None:
            neighborhood = analytics.term_neighborhood(clusters, token, k=top_k)
            outputs.append(_write_csv(
                out / f"term_neighborhood_{token}.csv", ["token", "weight"],
                list(neighborhood.items()),
            ))

    _write_manifest(out, "report", cfg_path, cfg, {
        "events": len(log),
        "terms": resolved,
        "bucket_size": width,
        "top_k": top_k,
    }, outputs, None)
    click.echo(f"report: {len(terms)} term(s) over {len(log)} events")


# ---------------------------------------------------------------- entry point

def main(argv: Sequence[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False, prog_name="repotrend")
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except (click.UsageError, ValidationError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except (RepoTrendError, OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except click.Abort:
        click.echo("aborted", err=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
