"""TOML pipeline configuration shared by all subcommands.

Every referenced path must exist at load time. Credentials never live in the
file; they come from REPOTREND_<PLATFORM>_TOKEN environment variables.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import ConfigError, ValidationError
from .schema import parse_utc
from .textclust import ClustererConfig

DEFAULT_SOCIAL_PLATFORMS = [
    "Telegram", "Twitter", "Facebook", "Reddit", "Skype", "Instagram",
    "Youtube", "Whatsapp", "Linkedin", "Tumblr", "vKontakte", "Snapchat",
    "Pinterest",
]

DEFAULT_TARGETS = ["github", "gitlab", "bitbucket", "sourceforge", "launchpad"]


@dataclass(frozen=True)
class LdaConfig:
    k_topics: int = 15
    alpha: float | None = None  # None -> 50 / k_topics
    beta: float = 0.01
    iterations: int = 1000

    def __post_init__(self) -> None:
        if self.k_topics < 1:
            raise ConfigError(f"lda.k_topics must be >= 1, got {self.k_topics}")
        if self.iterations < 1:
            raise ConfigError(f"lda.iterations must be >= 1, got {self.iterations}")
        if self.beta <= 0:
            raise ConfigError(f"lda.beta must be > 0, got {self.beta}")
        if self.alpha is not None and self.alpha <= 0:
            raise ConfigError(f"lda.alpha must be > 0, got {self.alpha}")


@dataclass(frozen=True)
class PipelineConfig:
    social_platforms: list[str] = field(default_factory=lambda: list(DEFAULT_SOCIAL_PLATFORMS))
    targets: list[str] = field(default_factory=lambda: list(DEFAULT_TARGETS))
    stopwords_path: str | None = None  # None -> bundled list
    out_dir: str = "out"
    seed: int = 0
    now: datetime | None = None
    cluster: ClustererConfig = field(default_factory=ClustererConfig)
    lda: LdaConfig = field(default_factory=LdaConfig)
    api_levels: dict[str, str] = field(default_factory=dict)
    rate_limit_requests: int = 10
    rate_limit_window_seconds: float = 1.0
    source_path: str | None = None

    def credential_for(self, platform: str) -> str | None:
        return os.environ.get(f"REPOTREND_{platform.upper()}_TOKEN")


def _require(table: dict, key: str, kind, context: str):
    value = table[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ConfigError(f"{context}.{key} must be {kind.__name__}, got {value!r}")
    return value


def _string_list(table: dict, key: str, context: str) -> list[str]:
    value = table[key]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ConfigError(f"{context}.{key} must be a list of strings")
    return value


def load_config(path: str | Path | None) -> PipelineConfig:
    """Read TOML config; a missing path argument yields all defaults."""
    if path is None:
        return PipelineConfig()
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid TOML: {exc}")

    kwargs: dict = {}
    crawl = data.get("crawl", {})
    if "social_platforms" in crawl:
        kwargs["social_platforms"] = _string_list(crawl, "social_platforms", "crawl")
    if "targets" in crawl:
        kwargs["targets"] = _string_list(crawl, "targets", "crawl")
    if "rate_limit_requests" in crawl:
        kwargs["rate_limit_requests"] = _require(crawl, "rate_limit_requests", int, "crawl")
    if "rate_limit_window_seconds" in crawl:
        kwargs["rate_limit_window_seconds"] = _require(
            crawl, "rate_limit_window_seconds", float, "crawl"
        )

    paths = data.get("paths", {})
    if "stopwords" in paths:
        stopwords = _require(paths, "stopwords", str, "paths")
        resolved = (path.parent / stopwords).resolve() if not os.path.isabs(stopwords) else Path(stopwords)
        if not resolved.is_file():
            raise ConfigError(f"paths.stopwords does not exist: {resolved}")
        kwargs["stopwords_path"] = str(resolved)
    if "source" in paths:
        source = _require(paths, "source", str, "paths")
        resolved = (path.parent / source).resolve() if not os.path.isabs(source) else Path(source)
        if not resolved.is_file():
            raise ConfigError(f"paths.source does not exist: {resolved}")
        kwargs["source_path"] = str(resolved)
    if "out_dir" in paths:
        kwargs["out_dir"] = _require(paths, "out_dir", str, "paths")

    run = data.get("run", {})
    if "seed" in run:
        seed = _require(run, "seed", int, "run")
        if seed < 0:
            raise ConfigError(f"run.seed must be >= 0, got {seed}")
        kwargs["seed"] = seed
    if "now" in run:
        raw_now = _require(run, "now", str, "run")
        try:
            kwargs["now"] = parse_utc(raw_now)
        except ValidationError as exc:
            raise ConfigError(f"run.now is not a valid timestamp: {exc}") from exc

    cluster = data.get("cluster", {})
    if cluster:
        allowed = {"fade_rate", "radius", "t_gap", "n_min", "n_max",
                   "time_unit_hours", "mode", "merge_radius", "snapshot_top_k"}
        unknown = set(cluster) - allowed
        if unknown:
            raise ConfigError(f"unknown cluster option(s): {', '.join(sorted(unknown))}")
        kwargs["cluster"] = ClustererConfig(**cluster)

    lda = data.get("lda", {})
    if lda:
        allowed = {"k_topics", "alpha", "beta", "iterations"}
        unknown = set(lda) - allowed
        if unknown:
            raise ConfigError(f"unknown lda option(s): {', '.join(sorted(unknown))}")
        kwargs["lda"] = LdaConfig(**lda)

    levels = data.get("api_levels", {})
    if levels:
        if not all(isinstance(v, str) for v in levels.values()):
            raise ConfigError("api_levels values must be strings")
        kwargs["api_levels"] = {k.lower(): v for k, v in levels.items()}

    return PipelineConfig(**kwargs)
