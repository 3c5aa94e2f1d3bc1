import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tweetsift.preprocess import (
    PreprocessConfig,
    apply_strategy,
    default_stopwords,
    is_emoji_token,
    length_percentiles,
    normalize,
    strategy_config,
    tokenize,
    truncate,
)


class TestNormalize:
    def test_url_mention_lowercase(self):
        assert normalize("Check https://t.co/Ab1 NOW @Anna") == "check http now @user"

    def test_plain_text_identity(self):
        assert normalize("no urls here") == "no urls here"

    def test_every_occurrence_replaced(self):
        assert normalize("@a @b http://x.y http://z.w") == "@user @user http http"

    def test_www_counts_as_url(self):
        assert normalize("see www.example.org/page now") == "see http now"

    def test_mixed_case_url_becomes_plain_marker(self):
        assert normalize("HTTPS://EXAMPLE.COM/A") == "http"

    @given(st.text(max_size=200))
    @settings(max_examples=200)
    def test_idempotent(self, text):
        once = normalize(text)
        assert normalize(once) == once


class TestTokenize:
    def test_punctuation_separates(self):
        assert tokenize("now !!") == ["now", "!", "!"]

    def test_interior_apostrophe_kept(self):
        assert tokenize("don't stop") == ["don't", "stop"]

    def test_empty(self):
        assert tokenize("") == []

    def test_markers_are_single_tokens(self):
        assert tokenize("@user http") == ["@user", "http"]

    def test_marker_with_trailing_punctuation(self):
        assert tokenize("@user: hi") == ["@user", ":", "hi"]

    def test_phone_number_single_token(self):
        assert tokenize("call 1-800-273-8255 now") == ["call", "1-800-273-8255", "now"]

    def test_emoji_split_individually(self):
        assert tokenize("sad 😢😢") == ["sad", "😢", "😢"]

    def test_emoji_with_skin_tone_is_one_token(self):
        assert tokenize("ok 👍🏽") == ["ok", "👍🏽"]

    def test_hashtag_splits(self):
        assert tokenize("#hope now") == ["#", "hope", "now"]

    @given(st.text(max_size=200))
    @settings(max_examples=200)
    def test_no_uppercase_after_normalize(self, text):
        # "no uppercase" = lowercasing is a fixed point; characters without
        # a lowercase mapping (math alphanumerics etc.) count as folded
        for token in tokenize(normalize(text)):
            assert token == token.lower()

    @given(st.text(max_size=200))
    @settings(max_examples=300)
    def test_round_trip_stable(self, text):
        tokens = tokenize(text)
        assert all(tokens), "no empty tokens"
        assert not any(any(c.isspace() for c in t) for t in tokens)
        assert tokenize(" ".join(tokens)) == tokens


class TestApplyStrategy:
    def test_digit_removal_keeps_mixed_tokens(self):
        config = PreprocessConfig(remove_digits=True)
        tokens = ["call", "1-800-273-8255", "now"]
        assert apply_strategy(tokens, config) == tokens

    def test_digit_removal_drops_all_digit_tokens(self):
        config = PreprocessConfig(remove_digits=True)
        assert apply_strategy(["a", "42", "b"], config) == ["a", "b"]

    def test_punctuation_removal(self):
        config = PreprocessConfig(remove_punctuation=True)
        assert apply_strategy(["a", "!", "cat"], config) == ["a", "cat"]

    def test_punctuation_removal_keeps_emoji(self):
        config = PreprocessConfig(remove_punctuation=True)
        assert apply_strategy(["🙂", "!", "x"], config) == ["🙂", "x"]

    def test_all_flags_off_is_identity(self):
        config = PreprocessConfig()
        tokens = ["the", "42", "!", "🙂", "end"]
        assert apply_strategy(tokens, config) == tokens

    def test_stopword_removal(self):
        config = PreprocessConfig(remove_stopwords=True)
        assert apply_strategy(["the", "lifeline", "is", "open"], config) == ["lifeline", "open"]

    def test_lemma_table(self):
        config = PreprocessConfig(lemma_table={"running": "run"})
        assert apply_strategy(["running", "fast"], config) == ["run", "fast"]

    @given(st.lists(st.sampled_from(["a", "the", "42", "!", "🙂", "word"]), max_size=30))
    def test_identity_property(self, tokens):
        assert apply_strategy(tokens, PreprocessConfig()) == tokens


class TestTruncate:
    def test_cuts_to_80(self):
        assert truncate(list(map(str, range(100))), 80) == list(map(str, range(80)))

    def test_short_unchanged(self):
        tokens = ["a"] * 5
        assert truncate(tokens, 80) == tokens

    def test_boundary(self):
        tokens = ["a"] * 80
        assert truncate(tokens, 80) == tokens

    @given(st.lists(st.just("t"), max_size=50), st.integers(1, 30))
    def test_prefix_property(self, tokens, m):
        out = truncate(tokens, m)
        assert len(out) <= m
        assert out == tokens[:len(out)]


class TestLengthPercentiles:
    def test_nearest_rank(self):
        corpus = [["x"] * n for n in range(10, 101, 10)]
        result = length_percentiles(corpus, [0.95])
        assert result[0.95] == 100

    def test_nearest_rank_interior(self):
        corpus = [["x"] * n for n in range(10, 101, 10)]
        # ceil(0.5 * 10) = 5th sorted value = 50
        assert length_percentiles(corpus, [0.5])[0.5] == 50

    def test_single_sequence(self):
        result = length_percentiles([["a"] * 7], [0.5, 0.95, 0.99])
        assert result[0.5] == result[0.95] == result[0.99] == 7

    def test_constant_corpus(self):
        corpus = [["x"] * 25 for _ in range(8)]
        result = length_percentiles(corpus, [0.25, 0.99])
        assert result["mean"] == 25
        assert result[0.25] == 25
        assert result[0.99] == 25

    def test_empty_corpus_error(self):
        with pytest.raises(ValueError):
            length_percentiles([], [0.5])


class TestStrategies:
    def test_stopword_list_size(self):
        assert len(default_stopwords()) == 179

    def test_strategy_one_is_basic(self):
        config = strategy_config(1)
        assert not (config.remove_digits or config.remove_punctuation
                    or config.remove_stopwords)

    def test_strategy_nine_removes_all(self):
        config = strategy_config(9)
        assert config.remove_digits and config.remove_punctuation and config.remove_stopwords

    def test_strategy_two_needs_lemma_table(self):
        with pytest.raises(ValueError):
            strategy_config(2)
        assert strategy_config(2, lemma_table={"a": "b"}).lemma_table == {"a": "b"}

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            strategy_config(10)


def test_emoji_token_detection():
    assert is_emoji_token("🙂")
    assert not is_emoji_token("!")
    assert not is_emoji_token("word")
