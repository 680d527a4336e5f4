import math
from datetime import datetime, timezone

import pytest
from hypothesis import given, strategies as st

from repotrend.errors import ValidationError
from repotrend.textprep import (
    IdfTable,
    TokenDoc,
    build_idf,
    cosine,
    docs_from_corpus,
    is_english_multiword,
    load_stopwords,
    preprocess,
    term_to_token,
    tf_vector,
    tfidf,
)

UTC = timezone.utc
TS = datetime(2020, 1, 1, tzinfo=UTC)


def doc(tokens, ts=TS, doc_id=("github", "x")):
    return TokenDoc(doc_id=doc_id, timestamp=ts, tokens=tuple(tokens))


class TestStopwords:
    def test_bundled_list_loads(self, stopwords):
        assert len(stopwords) > 100
        for w in ["the", "a", "and", "for", "with", "is"]:
            assert w in stopwords

    def test_custom_file_lowercases(self, tmp_path):
        path = tmp_path / "stops.txt"
        path.write_text("Foo\n\nbar\n", encoding="utf-8")
        loaded = load_stopwords(str(path))
        assert loaded == frozenset({"foo", "bar"})


class TestTokenDoc:
    def test_counts(self):
        assert doc(["a", "b", "a"]).counts() == {"a": 2, "b": 1}

    def test_rejects_naive_timestamp(self):
        with pytest.raises(ValidationError):
            doc(["a"], ts=datetime(2020, 1, 1))

    def test_rejects_empty_token(self):
        with pytest.raises(ValidationError):
            doc(["a", ""])

    def test_rejects_uppercase_token(self):
        with pytest.raises(ValidationError):
            doc(["Weather"])


class TestIdf:
    def test_smoothed_values(self):
        table = build_idf([doc(["a", "b"]), doc(["b", "c"])])
        assert table.doc_count == 2
        assert table.lookup("b") == pytest.approx(math.log(3 / 3) + 1, abs=1e-12)
        assert table.lookup("a") == pytest.approx(math.log(3 / 2) + 1, abs=1e-12)

    def test_unseen_token_gets_max_idf(self):
        table = build_idf([doc(["a"])])
        assert table.lookup("zzz") == pytest.approx(math.log(2) + 1, abs=1e-12)
        assert table.lookup("zzz") >= table.lookup("a")

    def test_idf_at_least_one(self):
        table = build_idf([doc(["a"]), doc(["a"]), doc(["a"])])
        assert table.lookup("a") >= 1.0

    def test_repeated_token_counts_once_per_doc(self):
        table = build_idf([doc(["a", "a", "a"]), doc(["b"])])
        assert table.df["a"] == 1

    def test_accepts_sparse_vectors(self):
        table = build_idf([{"a": 2.0}, {"a": 1.0, "b": 1.0}])
        assert table.df == {"a": 2, "b": 1}

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValidationError):
            build_idf([])


class TestVectors:
    def test_tf_vector(self):
        assert tf_vector(doc(["a", "b", "a"])) == {"a": 2.0, "b": 1.0}

    def test_tfidf_scales_by_idf(self):
        table = IdfTable(doc_count=1, df={"a": 1}, idf={"a": 2.0})
        assert tfidf({"a": 3.0, "new": 1.0}, table) == {
            "a": 6.0,
            "new": pytest.approx(math.log(2) + 1),
        }

    def test_cosine_identical_is_one(self):
        v = {"a": 2.0, "b": 1.0}
        assert cosine(v, v) == pytest.approx(1.0, abs=1e-12)

    def test_cosine_orthogonal_is_zero(self):
        assert cosine({"a": 1.0}, {"b": 1.0}) == 0.0

    def test_cosine_empty_vector_is_zero(self):
        assert cosine({}, {"a": 1.0}) == 0.0

    def test_cosine_hand_computed(self):
        v = {"a": 1.0, "b": 2.0}
        w = {"b": 3.0, "c": 4.0}
        expected = 6.0 / (math.sqrt(5.0) * 5.0)
        assert cosine(v, w) == pytest.approx(expected, abs=1e-12)
        assert cosine(w, v) == pytest.approx(expected, abs=1e-12)

    @given(st.dictionaries(st.text(st.characters(codec="ascii"), min_size=1, max_size=3),
                           st.floats(0.01, 100.0), max_size=6),
           st.dictionaries(st.text(st.characters(codec="ascii"), min_size=1, max_size=3),
                           st.floats(0.01, 100.0), max_size=6))
    def test_cosine_symmetric_and_bounded(self, v, w):
        s = cosine(v, w)
        assert s == cosine(w, v)
        assert -1e-9 <= s <= 1.0 + 1e-9


class TestLanguageGuard:
    def test_english_multiword_passes(self, stopwords):
        assert is_english_multiword("a weather bot for telegram groups", stopwords)

    def test_single_word_fails(self, stopwords):
        assert not is_english_multiword("weatherbot", stopwords)

    def test_ascii_dominant_passes_without_stopwords(self, stopwords):
        # heuristic by design: ASCII text counts as english even with no stopwords
        assert is_english_multiword("wetter bericht heute morgen", stopwords)

    def test_two_cjk_words_fail(self, stopwords):
        assert not is_english_multiword("天気 予報", stopwords)

    def test_mostly_non_ascii_fails(self, stopwords):
        assert not is_english_multiword("бот для погоды и новостей", stopwords)

    def test_empty_fails(self, stopwords):
        assert not is_english_multiword("", stopwords)


class TestPreprocess:
    def test_full_pipeline(self, stopwords):
        out = preprocess(
            "Sends daily weather forecasts https://example.com/x for Telegram users!",
            ["telegram"], stopwords, 1, 2,
        )
        assert out == [
            "send", "daili", "weath", "forecast", "user",
            "send_daili", "daili_weath", "weath_forecast", "forecast_user",
        ]

    def test_urls_removed(self, stopwords):
        out = preprocess("see www.example.com/page now", [], stopwords, 1, 1)
        assert out == ["now"] or "example" not in " ".join(out)

    def test_intra_word_hyphen_kept(self, stopwords):
        out = preprocess("real-time updates", [], stopwords, 1, 1)
        assert "real-tim" in out

    def test_platform_names_dropped_case_insensitive(self, stopwords):
        out = preprocess("TELEGRAM Telegram telegram news", ["telegram"], stopwords, 1, 1)
        assert out == ["new"]

    def test_post_stem_stopword_guard(self, stopwords):
        # "doing" stems to the stopword "do" and must not survive
        assert preprocess("doing things", [], stopwords, 1, 1) == ["thing"]

    def test_unigrams_only(self, stopwords):
        out = preprocess("weather forecast storm", [], stopwords, 1, 1)
        assert out == ["weath", "forecast", "storm"]

    def test_ngram_range_validation(self, stopwords):
        with pytest.raises(ValidationError):
            preprocess("x", [], stopwords, 2, 1)
        with pytest.raises(ValidationError):
            preprocess("x", [], stopwords, 0, 1)

    def test_empty_description(self, stopwords):
        assert preprocess("", [], stopwords) == []

    def test_trigrams(self, stopwords):
        out = preprocess("weather forecast storm", [], stopwords, 3, 3)
        assert out == ["weath_forecast_storm"]


class TestTermToToken:
    def test_simple_term(self, stopwords):
        assert term_to_token("Weather", [], stopwords) == "weath"

    def test_multi_word_joined(self, stopwords):
        assert term_to_token("weather forecast", [], stopwords) == "weath_forecast"

    def test_platform_word_dropped(self, stopwords):
        assert term_to_token("Telegram bot", ["telegram"], stopwords) == "bot"

    def test_empty_after_cleanup_rejected(self, stopwords):
        with pytest.raises(ValidationError):
            term_to_token("the", [], stopwords)


class TestDocsFromCorpus:
    def test_sorted_and_filtered(self, corpus_records, stopwords):
        docs = docs_from_corpus(corpus_records, ["telegram", "twitter", "reddit"],
                                stopwords, 1, 2)
        stamps = [d.timestamp for d in docs]
        assert stamps == sorted(stamps)
        assert len(docs) == len(corpus_records)  # synthetic descriptions are all english
        assert all(d.tokens for d in docs)

    def test_english_only_drops_non_english(self, stopwords, corpus_records):
        from repotrend.schema import RepoRecord

        german = RepoRecord(
            platform="github", repo_id="de-1", name="wetter",
            description="\u0431\u043e\u0442 \u043f\u043e\u0433\u043e\u0434\u044b \u043a\u0430\u0436\u0434\u044b\u0439 \u0434\u0435\u043d\u044c", created_at=TS,
            last_activity_at=TS,
        )
        docs = docs_from_corpus([corpus_records[0], german], [], stopwords, 1, 1)
        assert [d.doc_id for d in docs] == [corpus_records[0].key]

    def test_keep_all_when_disabled(self, stopwords, corpus_records):
        from repotrend.schema import RepoRecord

        german = RepoRecord(
            platform="github", repo_id="de-1", name="wetter",
            description="\u0431\u043e\u0442 \u043f\u043e\u0433\u043e\u0434\u044b \u043a\u0430\u0436\u0434\u044b\u0439 \u0434\u0435\u043d\u044c", created_at=TS,
            last_activity_at=TS,
        )
        docs = docs_from_corpus([corpus_records[0], german], [], stopwords, 1, 1,
                                english_only=False)
        assert len(docs) == 2
