"""Irony-marker detectors.

Twelve detectors grouped as tropes (metaphor, hyperbole, rhetorical
question), morpho-syntactic markers (exclamation, tag question, interjection)
and typographic markers (capitalization, quotation, punctuation, hashtag
sentiment, emoticon, emoji). All features are binary presence indicators.
"""

import re
from dataclasses import dataclass, field
from enum import Enum

from .lexicons import Polarity, normalize_surfaces, split_hashtag
from .tokenizer import TokenKind, is_all_caps, looks_like_emoji


class FeatureGroup(str, Enum):
    TROPE = "trope"
    MORPHO_SYNTACTIC = "morpho_syntactic"
    TYPOGRAPHIC = "typographic"


MARKERS = {
    "metaphor": FeatureGroup.TROPE,
    "hyperbole": FeatureGroup.TROPE,
    "rhetorical_question": FeatureGroup.TROPE,
    "exclamation": FeatureGroup.MORPHO_SYNTACTIC,
    "tag_question": FeatureGroup.MORPHO_SYNTACTIC,
    "interjection": FeatureGroup.MORPHO_SYNTACTIC,
    "capitalization": FeatureGroup.TYPOGRAPHIC,
    "quotation": FeatureGroup.TYPOGRAPHIC,
    "punctuation": FeatureGroup.TYPOGRAPHIC,
    "hashtag": FeatureGroup.TYPOGRAPHIC,
    "emoticon": FeatureGroup.TYPOGRAPHIC,
    "emoji": FeatureGroup.TYPOGRAPHIC,
}

PUNCT_CHARS = {"?": "q", ".": "period", ";": "semi"}

FIXED_FEATURES = {
    "metaphor_present": "metaphor",
    "hyperbole_present": "hyperbole",
    "hyperbole_pos": "hyperbole",
    "hyperbole_neg": "hyperbole",
    "rq_present": "rhetorical_question",
    "exclaim_single": "exclamation",
    "exclaim_multi": "exclamation",
    "tagq_present": "tag_question",
    "tagq_pos": "tag_question",
    "tagq_neg": "tag_question",
    "interjection_present": "interjection",
    "caps_present": "capitalization",
    "quote_present": "quotation",
    "punct_mix": "punctuation",
    "hashtag_pos": "hashtag",
    "hashtag_neg": "hashtag",
    "emoticon_pos": "emoticon",
    "emoticon_neg": "emoticon",
}
for _p in PUNCT_CHARS.values():
    for _k in ("single", "multi"):
        FIXED_FEATURES[f"punct_{_p}_{_k}"] = "punctuation"

PARAMETRIC_PREFIXES = {"emoticon_": "emoticon", "emoji_": "emoji"}
_PARAM_NAME_RE = re.compile(r"^(emoticon|emoji)_[a-z0-9_]+$")


def marker_of(name):
    if name in FIXED_FEATURES:
        return FIXED_FEATURES[name]
    if _PARAM_NAME_RE.match(name):
        for prefix, marker in PARAMETRIC_PREFIXES.items():
            if name.startswith(prefix):
                return marker
    raise KeyError(f"unknown feature name {name!r}")


def group_of(name):
    return MARKERS[marker_of(name)]


def markers_in(group):
    return [m for m, g in MARKERS.items() if g is group]


def _check_group_partition():
    groups = {}
    for name in FIXED_FEATURES:
        groups.setdefault(group_of(name), set()).add(name)
    assert set(groups) == set(FeatureGroup), "every group must own features"
    seen = set()
    for names in groups.values():
        assert not (names & seen)
        seen |= names
    assert seen == set(FIXED_FEATURES)
    assert set(MARKERS) == set(FIXED_FEATURES.values()) | set(PARAMETRIC_PREFIXES.values())


_check_group_partition()


@dataclass
class MarkerVector:
    features: dict
    counts: dict = field(default_factory=dict)
    unknown_emoji: int = 0

    def __post_init__(self):
        for name, value in self.features.items():
            marker_of(name)
            if value not in (0, 1):
                raise ValueError(f"feature {name!r} must be 0 or 1, got {value!r}")

    @property
    def group_of(self):
        return {name: group_of(name) for name in self.features}

    def active(self):
        return sorted(n for n, v in self.features.items() if v)

    def marker_present(self, marker):
        return int(any(v and marker_of(n) == marker for n, v in self.features.items()))

    def group_present(self, group):
        return int(any(v and group_of(n) is group for n, v in self.features.items()))


# ---------------------------------------------------------------------------
# helpers

def _words(utt):
    return [t for t in utt.tokens if t.kind is TokenKind.WORD]


def _phrase_stream(utt):
    """Normalized token surfaces; "?"-only punctuation runs collapse to "?"."""
    surfaces = []
    for t in utt.tokens:
        if t.kind is TokenKind.PUNCT and set(t.surface) == {"?"}:
            surfaces.append("?")
        else:
            surfaces.append(t.surface)
    return normalize_surfaces(surfaces)


def _find_phrases(stream, plist):
    by_first = {}
    for ph in plist.phrases:
        by_first.setdefault(ph.tokens[0], []).append(ph)
    hits = []
    for i, tok in enumerate(stream):
        for ph in by_first.get(tok, ()):
            if tuple(stream[i:i + len(ph.tokens)]) == ph.tokens:
                hits.append(ph)
    return hits


def _binary(d):
    return {k: int(bool(v)) for k, v in d.items()}


# ---------------------------------------------------------------------------
# tropes

def _metaphor(utt, lexicon, annotations=None):
    low = [t.surface.lower() for t in utt.tokens]
    hits = sum(1 for w in low if w in lexicon.entries)
    hits += sum(1 for a, b in zip(low, low[1:]) if f"{a} {b}" in lexicon.entries)
    if annotations and annotations.get(utt.id):
        hits += 1
    return {"metaphor_present": hits}, hits


def detect_metaphor(utt, lexicon, annotations=None):
    return _binary(_metaphor(utt, lexicon, annotations)[0])


def _hyperbole(utt, strong_by_word):
    feats = {"hyperbole_present": 0, "hyperbole_pos": 0, "hyperbole_neg": 0}
    for t in _words(utt):
        e = strong_by_word.get(normalize_surfaces([t.surface])[0])
        if e is None:
            continue
        feats["hyperbole_present"] += 1
        feats["hyperbole_pos" if e.polarity is Polarity.POSITIVE else "hyperbole_neg"] += 1
    return feats, feats["hyperbole_present"]


def _strong_index(subj):
    if isinstance(subj, dict):
        return subj
    return {e.word: e for e in subj if e.strength.value == "strong"}


def detect_hyperbole(utt, subj):
    return _binary(_hyperbole(utt, _strong_index(subj))[0])


_TERMINAL_RE = re.compile(r"[.!?]+$")


def _rhetorical_question(utt):
    wordful = []
    is_question = []
    word_starts = [t.start for t in _words(utt)]
    for start, end in utt.sentences:
        m = _TERMINAL_RE.search(utt.text[start:end])
        is_question.append(bool(m and "?" in m.group()))
        wordful.append(any(start <= s < end for s in word_starts))
    hits = 0
    for i, q in enumerate(is_question):
        if q and any(wordful[i + 1:]):
            hits += 1
    return {"rq_present": hits}, hits


def detect_rhetorical_question(utt):
    return _binary(_rhetorical_question(utt)[0])


# ---------------------------------------------------------------------------
# morpho-syntactic

def _exclamation(utt):
    feats = {"exclaim_single": 0, "exclaim_multi": 0}
    for t in utt.tokens:
        if t.kind is TokenKind.PUNCT and t.surface[0] == "!":
            feats["exclaim_single" if len(t.surface) == 1 else "exclaim_multi"] += 1
    return feats, feats["exclaim_single"] + feats["exclaim_multi"]


def detect_exclamation(utt):
    return _binary(_exclamation(utt)[0])


def _tag_question(utt, tags):
    feats = {"tagq_present": 0, "tagq_pos": 0, "tagq_neg": 0}
    for ph in _find_phrases(_phrase_stream(utt), tags):
        feats["tagq_present"] += 1
        feats["tagq_neg" if ph.polarity is Polarity.NEGATIVE else "tagq_pos"] += 1
    return feats, feats["tagq_present"]


def detect_tag_question(utt, tags):
    return _binary(_tag_question(utt, tags)[0])


def _interjection(utt, interjections):
    hits = len(_find_phrases(_phrase_stream(utt), interjections))
    return {"interjection_present": hits}, hits


def detect_interjection(utt, interjections):
    return _binary(_interjection(utt, interjections)[0])


# ---------------------------------------------------------------------------
# typographic

def _capitalization(utt):
    hits = sum(1 for t in _words(utt) if is_all_caps(t.surface))
    return {"caps_present": hits}, hits


def detect_capitalization(utt):
    return _binary(_capitalization(utt)[0])


_QUOTE_CLOSERS = {'"': '"', "“": "”", "'": "'", "‘": "’"}
MAX_QUOTED_TOKENS = 3


def _quotation(utt):
    toks = utt.tokens
    hits = 0
    i = 0
    while i < len(toks):
        t = toks[i]
        closer = _QUOTE_CLOSERS.get(t.surface) if t.kind is TokenKind.PUNCT else None
        if closer is None:
            i += 1
            continue
        j = next((k for k in range(i + 1, len(toks))
                  if toks[k].kind is TokenKind.PUNCT and toks[k].surface == closer), None)
        if j is None:
            i += 1
            continue
        if 1 <= j - i - 1 <= MAX_QUOTED_TOKENS:
            hits += 1
        i = j + 1
    return {"quote_present": hits}, hits


def detect_quotation(utt):
    return _binary(_quotation(utt)[0])


_MIX_CHARS = set("?!.;")


def _punctuation(utt):
    feats = {f"punct_{p}_{k}": 0 for p in PUNCT_CHARS.values() for k in ("single", "multi")}
    feats["punct_mix"] = 0
    puncts = [t for t in utt.tokens if t.kind is TokenKind.PUNCT]
    for t in puncts:
        if t.surface == "…":
            feats["punct_period_multi"] += 1
            continue
        name = PUNCT_CHARS.get(t.surface[0])
        if name:
            feats[f"punct_{name}_{'single' if len(t.surface) == 1 else 'multi'}"] += 1
    for a, b in zip(puncts, puncts[1:]):
        if a.end == b.start and a.surface[0] in _MIX_CHARS and b.surface[0] in _MIX_CHARS:
            feats["punct_mix"] += 1
    return feats, sum(feats.values())


def detect_punctuation(utt):
    return _binary(_punctuation(utt)[0])


def hashtag_words(tag_body, splitter):
    words = []
    for part in tag_body.split("_"):
        if not part:
            continue
        pieces = split_hashtag(part, splitter) if part.isalnum() else [part]
        words.extend(p.lower() for p in pieces)
    return words


def _hashtag(utt, subj_by_word, splitter, label_hashtags=frozenset()):
    feats = {"hashtag_pos": 0, "hashtag_neg": 0}
    if utt.platform.value != "twitter":
        return feats, 0
    hits = 0
    for t in utt.tokens:
        if t.kind is not TokenKind.HASHTAG or t.surface.lower() in label_hashtags:
            continue
        polarities = set()
        for w in hashtag_words(t.surface[1:], splitter):
            e = subj_by_word.get(w)
            if e is not None:
                polarities.add(e.polarity)
        if Polarity.POSITIVE in polarities:
            feats["hashtag_pos"] += 1
        if Polarity.NEGATIVE in polarities:
            feats["hashtag_neg"] += 1
        hits += bool(polarities)
    return feats, hits


def detect_hashtag_sentiment(utt, subj, splitter, label_hashtags=frozenset()):
    if not isinstance(subj, dict):
        subj = {e.word: e for e in subj}
    return _binary(_hashtag(utt, subj, splitter, label_hashtags)[0])


def emoticon_sentiment(entry, subj_by_word):
    """Catalog sentiment, else the subjectivity of the words in its name."""
    if entry.sentiment is not None:
        return entry.sentiment
    for w in entry.name.split("_"):
        e = subj_by_word.get(w)
        if e is not None:
            return e.polarity
    return None


def _emoticon(utt, catalog, subj_by_word):
    feats = {"emoticon_pos": 0, "emoticon_neg": 0}
    hits = 0
    for t in utt.tokens:
        if t.kind is not TokenKind.EMOTICON:
            continue
        entry = catalog.lookup(t.surface)
        if entry is None:
            continue
        hits += 1
        key = f"emoticon_{entry.name}"
        feats[key] = feats.get(key, 0) + 1
        pol = emoticon_sentiment(entry, subj_by_word)
        if pol is Polarity.POSITIVE:
            feats["emoticon_pos"] += 1
        elif pol is Polarity.NEGATIVE:
            feats["emoticon_neg"] += 1
    return feats, hits


def detect_emoticon(utt, catalog, subj):
    if not isinstance(subj, dict):
        subj = {e.word: e for e in subj}
    return _binary(_emoticon(utt, catalog, subj)[0])


def _emoji(utt, catalog):
    feats = {}
    hits = 0
    unknown = 0
    for t in utt.tokens:
        if t.kind is TokenKind.EMOJI:
            entry = catalog.lookup(t.surface)
            if entry is not None:
                key = f"emoji_{entry.name}"
                feats[key] = feats.get(key, 0) + 1
                hits += 1
                continue
        if t.kind is TokenKind.OTHER and looks_like_emoji(t.surface[0]):
            unknown += 1
    return feats, hits, unknown


def detect_emoji(utt, catalog):
    return _binary(_emoji(utt, catalog)[0])


def unknown_emoji_count(utt):
    """Emoji-looking characters that no catalog entry matched."""
    return sum(1 for t in utt.tokens
               if t.kind is TokenKind.OTHER and looks_like_emoji(t.surface[0]))


# ---------------------------------------------------------------------------

def extract_all(utt, resources):
    """Run all twelve detectors and return a :class:`MarkerVector`."""
    res = resources
    feats = dict.fromkeys(FIXED_FEATURES, 0)
    counts = {}
    results = {
        "metaphor": _metaphor(utt, res.metaphors, res.metaphor_annotations),
        "hyperbole": _hyperbole(utt, res.strong_by_word),
        "rhetorical_question": _rhetorical_question(utt),
        "exclamation": _exclamation(utt),
        "tag_question": _tag_question(utt, res.tag_questions),
        "interjection": _interjection(utt, res.interjections),
        "capitalization": _capitalization(utt),
        "quotation": _quotation(utt),
        "punctuation": _punctuation(utt),
        "hashtag": _hashtag(utt, res.subj_by_word, res.splitter, res.label_hashtags),
        "emoticon": _emoticon(utt, res.emoticons, res.subj_by_word),
    }
    emoji_feats, emoji_hits, unknown = _emoji(utt, res.emoji)
    results["emoji"] = (emoji_feats, emoji_hits)
    for marker, (f, n) in results.items():
        feats.update(_binary(f))
        counts[marker] = n
    return MarkerVector(feats, counts, unknown)
