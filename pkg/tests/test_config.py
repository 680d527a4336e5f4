from datetime import datetime, timezone

import pytest

from repotrend.config import (
    DEFAULT_SOCIAL_PLATFORMS,
    DEFAULT_TARGETS,
    LdaConfig,
    PipelineConfig,
    load_config,
)
from repotrend.errors import ConfigError

UTC = timezone.utc


class TestDefaults:
    def test_no_file_yields_defaults(self):
        cfg = load_config(None)
        assert cfg.social_platforms == DEFAULT_SOCIAL_PLATFORMS
        assert cfg.targets == DEFAULT_TARGETS
        assert cfg.stopwords_path is None
        assert cfg.seed == 0
        assert cfg.now is None
        assert cfg.cluster.fade_rate == 0.01
        assert cfg.lda.k_topics == 15

    def test_thirteen_social_platforms_five_targets(self):
        assert len(DEFAULT_SOCIAL_PLATFORMS) == 13
        assert len(DEFAULT_TARGETS) == 5

    def test_lda_config_validation(self):
        with pytest.raises(ConfigError):
            LdaConfig(k_topics=0)
        with pytest.raises(ConfigError):
            LdaConfig(beta=0.0)
        with pytest.raises(ConfigError):
            LdaConfig(alpha=-2.0)
        with pytest.raises(ConfigError):
            LdaConfig(iterations=0)


class TestLoadConfig:
    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ConfigError) as err:
            load_config(tmp_path / "absent.toml")
        assert "absent.toml" in str(err.value)

    def test_invalid_toml_rejected(self, write_config):
        path = write_config("this is = not = toml")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_full_file(self, write_config, tmp_path):
        stops = tmp_path / "stops.txt"
        stops.write_text("the\n", encoding="utf-8")
        path = write_config(
            """
            [crawl]
            social_platforms = ["Telegram", "Twitter"]
            targets = ["github"]
            rate_limit_requests = 5
            rate_limit_window_seconds = 2

            [paths]
            stopwords = "stops.txt"
            out_dir = "results"

            [run]
            seed = 7
            now = "2020-06-01T00:00:00Z"

            [cluster]
            fade_rate = 0.02
            t_gap = 50

            [lda]
            k_topics = 3
            iterations = 40

            [api_levels]
            Telegram = "bot_api"
            """
        )
        cfg = load_config(path)
        assert cfg.social_platforms == ["Telegram", "Twitter"]
        assert cfg.targets == ["github"]
        assert cfg.rate_limit_requests == 5
        assert cfg.rate_limit_window_seconds == 2.0
        assert cfg.stopwords_path == str(stops.resolve())
        assert cfg.out_dir == "results"
        assert cfg.seed == 7
        assert cfg.now == datetime(2020, 6, 1, tzinfo=UTC)
        assert cfg.cluster.fade_rate == 0.02
        assert cfg.cluster.t_gap == 50.0
        assert cfg.cluster.radius == 0.06  # untouched default
        assert cfg.lda.k_topics == 3
        assert cfg.lda.iterations == 40
        assert cfg.api_levels == {"telegram": "bot_api"}

    def test_relative_paths_resolve_against_config_dir(self, tmp_path):
        sub = tmp_path / "conf"
        sub.mkdir()
        (sub / "stops.txt").write_text("a\n", encoding="utf-8")
        cfg_path = sub / "repotrend.toml"
        cfg_path.write_text('[paths]\nstopwords = "stops.txt"\n', encoding="utf-8")
        cfg = load_config(cfg_path)
        assert cfg.stopwords_path == str((sub / "stops.txt").resolve())

    def test_missing_stopwords_file_rejected_with_path(self, write_config):
        path = write_config('[paths]\nstopwords = "nope.txt"\n')
        with pytest.raises(ConfigError) as err:
            load_config(path)
        assert "nope.txt" in str(err.value)

    def test_missing_source_file_rejected(self, write_config):
        path = write_config('[paths]\nsource = "corpus.jsonl"\n')
        with pytest.raises(ConfigError):
            load_config(path)

    def test_unknown_cluster_key_rejected(self, write_config):
        path = write_config("[cluster]\nhalf_life = 3\n")
        with pytest.raises(ConfigError) as err:
            load_config(path)
        assert "half_life" in str(err.value)

    def test_unknown_lda_key_rejected(self, write_config):
        path = write_config("[lda]\ntopics = 3\n")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_bad_now_rejected(self, write_config):
        path = write_config('[run]\nnow = "whenever"\n')
        with pytest.raises(ConfigError):
            load_config(path)

    def test_negative_seed_rejected(self, write_config):
        path = write_config("[run]\nseed = -1\n")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_wrong_type_rejected(self, write_config):
        path = write_config('[crawl]\nsocial_platforms = "Telegram"\n')
        with pytest.raises(ConfigError):
            load_config(path)


class TestCredentials:
    def test_env_token_read(self, monkeypatch):
        monkeypatch.setenv("REPOTREND_GITHUB_TOKEN", "sekrit")
        assert PipelineConfig().credential_for("github") == "sekrit"

    def test_absent_token_is_none(self, monkeypatch):
        monkeypatch.delenv("REPOTREND_LAUNCHPAD_TOKEN", raising=False)
        assert PipelineConfig().credential_for("launchpad") is None
