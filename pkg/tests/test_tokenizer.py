from ironymarkers.tokenizer import TokenKind, detokenize, gaps_of, is_all_caps, tokenize


def toks(text, res):
    return [(t.surface, t.kind) for t in tokenize(text, res.emoticons, res.emoji)]


def test_wonderful_day(res):
    assert toks("WONDERFUL day!!!", res) == [
        ("WONDERFUL", TokenKind.WORD), ("day", TokenKind.WORD), ("!!!", TokenKind.PUNCT)]


def test_hashtag_after_period(res):
    assert toks("cute text. #suck", res) == [
        ("cute", TokenKind.WORD), ("text", TokenKind.WORD), (".", TokenKind.PUNCT), ("#suck", TokenKind.HASHTAG)]


def test_empty():
    assert tokenize("") == []


def test_emoticon_at_end_is_one_token(res):
    out = toks("I must be AWESOME. :P", res)
    assert out[-1] == (":P", TokenKind.EMOTICON)
    assert out[-2] == (".", TokenKind.PUNCT)


def test_mixed_punctuation_yields_adjacent_tokens(res):
    out = tokenize("what?!", res.emoticons, res.emoji)
    assert [t.surface for t in out] == ["what", "?", "!"]
    assert out[1].end == out[2].start


def test_contractions_are_single_words(res):
    assert toks("i'm sure it isn't", res) == [
        ("i'm", TokenKind.WORD), ("sure", TokenKind.WORD), ("it", TokenKind.WORD), ("isn't", TokenKind.WORD)]


def test_url_mention_number(res):
    out = toks("@bob see https://x.co/a?b=1. 3.5 stars", res)
    kinds = [k for _, k in out]
    assert kinds == [TokenKind.MENTION, TokenKind.WORD, TokenKind.URL, TokenKind.PUNCT,
                     TokenKind.NUMBER, TokenKind.WORD]
    assert out[2][0] == "https://x.co/a?b=1"


def test_emoticon_boundary_guard(res):
    # "XD" inside a word is not an emoticon
    assert all(k is not TokenKind.EMOTICON for _, k in toks("XDA phones", res))
    assert toks("lol XD", res)[-1] == ("XD", TokenKind.EMOTICON)


def test_emoji_with_variation_selector(res):
    out = toks("ok ❤️", res)
    assert out[-1] == ("❤️", TokenKind.EMOJI)


def test_unknown_emoji_is_other(res):
    assert toks("\U0001F9FF", res) == [("\U0001F9FF", TokenKind.OTHER)]


def test_without_catalogs_no_emoticons():
    assert [t.kind for t in tokenize(":)")] == [TokenKind.PUNCT, TokenKind.PUNCT]


def test_round_trip(res):
    text = "  Hi!!  :)\tthere… #tag @u \U0001F612 end "
    t = tokenize(text, res.emoticons, res.emoji)
    assert detokenize(len(text), t, gaps_of(text, t)) == text
    for tok in t:
        assert text[tok.start:tok.end] == tok.surface


def test_is_all_caps():
    assert is_all_caps("AWESOME")
    assert is_all_caps("I'M")
    assert not is_all_caps("I")
    assert not is_all_caps("Awesome")
