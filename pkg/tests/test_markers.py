import pytest
from hypothesis import given, settings, strategies as st

from ironymarkers.corpus import Platform, make_utterance
from ironymarkers.lexicons import MetaphorLexicon, default_resources
from ironymarkers.markers import (
    FIXED_FEATURES, MARKERS, FeatureGroup, MarkerVector, detect_capitalization, detect_emoji,
    detect_emoticon, detect_exclamation, detect_hashtag_sentiment, detect_hyperbole, detect_interjection,
    detect_metaphor, detect_punctuation, detect_quotation, detect_rhetorical_question, detect_tag_question,
    extract_all, group_of, marker_of, unknown_emoji_count,
)

REDDIT = ("Are you telling me iPhone 5 is only marginally better than iPhone 4S? I thought we were "
          "reaching a golden age with this game-changing device.")


def test_metaphor(utt, res):
    assert detect_metaphor(utt(REDDIT), res.metaphors)["metaphor_present"] == 1
    assert detect_metaphor(utt("nothing to see"), res.metaphors)["metaphor_present"] == 0
    lex = MetaphorLexicon(frozenset({"golden age"}))
    assert detect_metaphor(utt("a Golden Age indeed"), lex)["metaphor_present"] == 1


def test_metaphor_annotation_is_ored(utt, res):
    u = utt("plain words", id="u9")
    assert detect_metaphor(u, res.metaphors, {"u9": 1})["metaphor_present"] == 1
    assert detect_metaphor(u, res.metaphors, {"u9": 0})["metaphor_present"] == 0


def test_hyperbole(utt, res):
    assert detect_hyperbole(utt("a vile comment"), res.subjectivity) == {
        "hyperbole_present": 1, "hyperbole_pos": 0, "hyperbole_neg": 1}
    f = detect_hyperbole(utt("notably helpful"), res.subjectivity)
    assert f["hyperbole_present"] == 1 and f["hyperbole_pos"] == 1
    assert set(detect_hyperbole(utt("the bus came"), res.subjectivity).values()) == {0}


def test_rhetorical_question(utt):
    assert detect_rhetorical_question(utt(REDDIT))["rq_present"] == 1
    assert detect_rhetorical_question(utt("What time is it?"))["rq_present"] == 0
    assert detect_rhetorical_question(utt("A? B? done."))["rq_present"] == 1
    # a later "sentence" made only of an emoticon has no words
    assert detect_rhetorical_question(utt("really? :)"))["rq_present"] == 0


def test_exclamation(utt):
    assert detect_exclamation(utt("GREAT i'm SO happy on this WONDERFUL day!!!")) == {
        "exclaim_single": 0, "exclaim_multi": 1}
    assert detect_exclamation(utt("nice!")) == {"exclaim_single": 1, "exclaim_multi": 0}
    assert detect_exclamation(utt("nice")) == {"exclaim_single": 0, "exclaim_multi": 0}


def test_tag_question(utt, res):
    f = detect_tag_question(utt("great plan, isn't it?"), res.tag_questions)
    assert f == {"tagq_present": 1, "tagq_pos": 0, "tagq_neg": 1}
    f = detect_tag_question(utt("good, is it? I wonder."), res.tag_questions)
    assert f == {"tagq_present": 1, "tagq_pos": 1, "tagq_neg": 0}
    assert detect_tag_question(utt("Isn’t it??"), res.tag_questions)["tagq_neg"] == 1
    assert set(detect_tag_question(utt("it is fine"), res.tag_questions).values()) == {0}


def test_interjection(utt, res):
    assert detect_interjection(utt("wow that went well"), res.interjections)["interjection_present"] == 1
    assert detect_interjection(utt("ouch. that hurts."), res.interjections)["interjection_present"] == 1
    assert detect_interjection(utt("Yeah Right"), res.interjections)["interjection_present"] == 1
    assert detect_interjection(utt("the bus came"), res.interjections)["interjection_present"] == 0


def test_capitalization(utt):
    assert detect_capitalization(utt("With 1 follower I must be AWESOME. :P"))["caps_present"] == 1
    assert detect_capitalization(utt("GREAT i'm SO happy shattered phone on this WONDERFUL day!!!"))["caps_present"] == 1
    assert detect_capitalization(utt("I am here"))["caps_present"] == 0
    assert detect_capitalization(utt("USA"))["caps_present"] == 1


def test_quotation(utt):
    assert detect_quotation(utt('the "great" experience'))["quote_present"] == 1
    assert detect_quotation(utt("the “great” one"))["quote_present"] == 1
    assert detect_quotation(utt('she said "'))["quote_present"] == 0
    long = '"' + " ".join(["word"] * 10) + '"'
    assert detect_quotation(utt(long))["quote_present"] == 0


def test_punctuation(utt):
    f = detect_punctuation(utt("really?? fine."))
    assert f["punct_q_multi"] == 1 and f["punct_period_single"] == 1 and f["punct_mix"] == 0
    assert detect_punctuation(utt("what?!"))["punct_mix"] == 1
    assert set(detect_punctuation(utt("no punctuation here")).values()) == {0}
    assert detect_punctuation(utt("so…"))["punct_period_multi"] == 1
    assert detect_punctuation(utt("a; b;; c"))["punct_semi_multi"] == 1
    # separated by a space: not a mix
    assert detect_punctuation(utt("what? !"))["punct_mix"] == 0


def test_hashtag_sentiment(utt, res):
    f = detect_hashtag_sentiment(utt("nice to wake up to cute text. #suck"), res.subjectivity, res.splitter)
    assert f == {"hashtag_pos": 0, "hashtag_neg": 1}
    assert detect_hashtag_sentiment(utt("#funnight"), res.subjectivity, res.splitter)["hashtag_pos"] == 1
    assert set(detect_hashtag_sentiment(utt("no tags"), res.subjectivity, res.splitter).values()) == {0}


def test_hashtag_ignores_label_tags_and_reddit(utt, res):
    f = detect_hashtag_sentiment(utt("#sarcastic day"), res.subjectivity, res.splitter, {"#sarcastic"})
    assert set(f.values()) == {0}
    f = detect_hashtag_sentiment(utt("#suck", platform=Platform.REDDIT), res.subjectivity, res.splitter)
    assert set(f.values()) == {0}


def test_emoticon(utt, res):
    f = detect_emoticon(utt("I love the weather ;) "), res.emoticons, res.subjectivity)
    assert f["emoticon_wink"] == 1 and f["emoticon_pos"] == 1 and f["emoticon_neg"] == 0
    assert detect_emoticon(utt("I must be AWESOME. :P"), res.emoticons, res.subjectivity)["emoticon_tongue_out"] == 1
    assert set(detect_emoticon(utt("plain"), res.emoticons, res.subjectivity).values()) == {0}


def test_emoji(utt, res):
    f = detect_emoji(utt("great \U0001F612\U0001F616"), res.emoji)
    assert f == {"emoji_unamused": 1, "emoji_confounded": 1}
    assert detect_emoji(utt("plain"), res.emoji) == {}
    u = utt("odd \U0001F9FF")
    assert detect_emoji(u, res.emoji) == {}
    assert unknown_emoji_count(u) == 1
    assert extract_all(u, res).unknown_emoji == 1


def test_extract_all_table1(utt, res):
    mv = extract_all(utt("with 1 follower i must be AWESOME. :P"), res)
    assert mv.features["caps_present"] == 1
    assert mv.features["emoticon_tongue_out"] == 1
    assert mv.features["punct_period_single"] == 1


def test_extract_all_empty(utt, res):
    mv = extract_all(utt(""), res)
    assert set(mv.features) == set(FIXED_FEATURES)
    assert mv.active() == []


def test_feature_namespace():
    assert set(FIXED_FEATURES.values()) <= set(MARKERS)
    assert group_of("emoji_rage") is FeatureGroup.TYPOGRAPHIC
    assert group_of("hyperbole_pos") is FeatureGroup.TROPE
    assert group_of("tagq_neg") is FeatureGroup.MORPHO_SYNTACTIC
    assert marker_of("emoticon_wink") == "emoticon"
    with pytest.raises(KeyError):
        marker_of("bogus_feature")
    with pytest.raises(KeyError):
        MarkerVector({"bogus_feature": 1})
    with pytest.raises(ValueError):
        MarkerVector({"caps_present": 2})


def test_group_presence_helpers(utt, res):
    mv = extract_all(utt("hello THERE"), res)
    assert mv.group_present(FeatureGroup.TYPOGRAPHIC) == 1
    assert mv.group_present(FeatureGroup.TROPE) == 0
    assert mv.marker_present("capitalization") == 1


WORDS = ["the", "bus", "AWESOME", "wow", "golden", "age", "vile", "isn't", "it", "I", "\"great\"",
         "#funnight", ":)", ";)", "\U0001F612", "!!!", "?", ".", "...", "?!", "ok", "ugh", "so"]


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from(WORDS), max_size=15), st.sampled_from([":)", ";)", ":P", "-_-"]))
def test_planting_emoticon_is_monotone(words, emo):
    res = default_resources()
    text = " ".join(words)
    before = extract_all(make_utterance(text, res), res)
    after = extract_all(make_utterance(text + " " + emo, res), res)
    name = f"emoticon_{res.emoticons.lookup(emo).name}"
    assert after.features[name] == 1
    for f, v in before.features.items():
        if group_of(f) is FeatureGroup.TROPE:
            assert after.features[f] == v


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from(WORDS), max_size=15))
def test_rq_and_caps_soundness(words):
    res = default_resources()
    u = make_utterance(" ".join(words), res)
    mv = extract_all(u, res)
    if mv.features["rq_present"]:
        assert len(u.sentences) >= 2
    assert extract_all(u, res) == mv
    if mv.features["caps_present"]:
        assert any(len(t.surface) >= 2 and t.surface.isupper() for t in u.tokens)
