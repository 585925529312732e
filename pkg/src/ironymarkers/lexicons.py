"""Lexical resources used by the marker detectors.

Every resource has a small plain-text format (see ``write_*`` for the exact
layout). Sample resources ship in ``ironymarkers/data``; a resource directory
given on the command line overrides them file by file.
"""

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources as importlib_resources
from pathlib import Path

from .tokenizer import tokenize

logger = logging.getLogger(__name__)

DEFAULT_LABEL_HASHTAGS = frozenset({"#irony", "#sarcasm", "#sarcastic"})

RESOURCE_FILES = {
    "subjectivity": "subjectivity.tsv",
    "metaphors": "metaphors.txt",
    "tag_questions": "tag_questions.txt",
    "interjections": "interjections.txt",
    "emoticons": "emoticons.tsv",
    "emoji": "emoji.tsv",
    "splitter": "splitter_dict.tsv",
}

NAME_RE = re.compile(r"^[a-z0-9_]+$")
# names that would collide with the aggregate sentiment features
RESERVED_NAMES = {"pos", "neg"}
VARIATION_SELECTOR = "\ufe0f"


class ResourceError(ValueError):
    """A resource file is malformed. Carries the path and 1-based line."""

    def __init__(self, path, lineno, msg):
        self.path = str(path)
        self.lineno = lineno
        where = f"{path}:{lineno}" if lineno else str(path)
        super().__init__(f"{where}: {msg}")


class Polarity(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class Strength(str, Enum):
    STRONG = "strong"
    WEAK = "weak"


class PhraseKind(str, Enum):
    TAG_QUESTION = "tag_question"
    INTERJECTION = "interjection"


def _polarity_or_none(token):
    return None if token == "none" else Polarity(token)


def _polarity_str(p):
    return "none" if p is None else p.value


def _read_lines(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read().splitlines()
    except OSError as exc:
        raise ResourceError(path, 0, f"cannot read resource: {exc}") from exc


def _data_lines(path):
    """Yield (lineno, line) skipping blanks and ``#`` comments."""
    for i, raw in enumerate(_read_lines(path), 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield i, line


# ---------------------------------------------------------------------------
# subjectivity lexicon

@dataclass(frozen=True)
class SubjectivityEntry:
    word: str
    polarity: Polarity
    strength: Strength


def load_subjectivity(path):
    entries = {}
    for lineno, line in _data_lines(path):
        cols = line.split("\t")
        if len(cols) != 3:
            raise ResourceError(path, lineno, f"expected 3 tab-separated columns, got {len(cols)}")
        word = cols[0].strip().lower()
        if not word or any(c.isspace() for c in word):
            raise ResourceError(path, lineno, f"invalid word {cols[0]!r}")
        try:
            polarity = Polarity(cols[1].strip().lower())
        except ValueError:
            raise ResourceError(path, lineno, f"unknown polarity {cols[1]!r}") from None
        try:
            strength = Strength(cols[2].strip().lower())
        except ValueError:
            raise ResourceError(path, lineno, f"unknown strength {cols[2]!r}") from None
        if word in entries:
            logger.warning("%s:%d: duplicate subjectivity entry %r, last one wins", path, lineno, word)
            del entries[word]
        entries[word] = SubjectivityEntry(word, polarity, strength)
    return list(entries.values())


def write_subjectivity(entries, path):
    with open(path, "w", encoding="utf-8") as fh:
        for e in entries:
            fh.write(f"{e.word}\t{e.polarity.value}\t{e.strength.value}\n")


# ---------------------------------------------------------------------------
# metaphor lexicon

@dataclass(frozen=True)
class MetaphorLexicon:
    entries: frozenset

    def __post_init__(self):
        for e in self.entries:
            if not 1 <= len(e.split(" ")) <= 2 or e != e.lower() or "  " in e:
                raise ValueError(f"metaphor entry must be 1 or 2 lowercase tokens: {e!r}")


def load_metaphors(path):
    entries = set()
    for lineno, line in _data_lines(path):
        phrase = " ".join(line.lower().split())
        if not 1 <= len(phrase.split(" ")) <= 2:
            raise ResourceError(path, lineno, f"metaphor entry must have 1 or 2 tokens: {line!r}")
        entries.add(phrase)
    return MetaphorLexicon(frozenset(entries))


def write_metaphors(lexicon, path):
    with open(path, "w", encoding="utf-8") as fh:
        for e in sorted(lexicon.entries):
            fh.write(e + "\n")


def load_metaphor_annotations(path):
    """Precomputed per-utterance metaphor decisions: ``id<TAB>0|1``."""
    out = {}
    for lineno, line in _data_lines(path):
        cols = line.split("\t")
        if len(cols) != 2 or cols[1].strip() not in ("0", "1"):
            raise ResourceError(path, lineno, "expected 'utterance_id<TAB>0|1'")
        out[cols[0]] = int(cols[1])
    return out


# ---------------------------------------------------------------------------
# phrase lists (tag questions, interjections)

def normalize_surfaces(surfaces):
    """Lowercase, unify apostrophes and re-attach split "n't" clitics."""
    out = []
    for s in surfaces:
        s = s.lower().replace("\u2019", "'").replace("\u2018", "'")
        if s == "n't" and out:
            out[-1] = out[-1] + s
            continue
        out.append(s)
    return out


def phrase_tokens(text):
    return tuple(normalize_surfaces(t.surface for t in tokenize(text)))


@dataclass(frozen=True)
class Phrase:
    tokens: tuple
    polarity: Polarity = None


@dataclass(frozen=True)
class PhraseList:
    kind: PhraseKind
    phrases: tuple

    def __post_init__(self):
        if not self.phrases:
            raise ValueError(f"empty {self.kind.value} list")


def tag_polarity(tokens):
    # negated auxiliary contraction up front: "isn't it?", "don't they?"
    return Polarity.NEGATIVE if tokens and tokens[0].endswith("n't") else Polarity.POSITIVE


def load_phrase_list(path, kind):
    kind = PhraseKind(kind)
    phrases = []
    seen = set()
    for lineno, line in _data_lines(path):
        toks = phrase_tokens(line.strip())
        if not toks:
            continue
        if kind is PhraseKind.TAG_QUESTION:
            if toks[-1] != "?":
                raise ResourceError(path, lineno, f"tag question must end with '?': {line!r}")
            polarity = tag_polarity(toks)
        else:
            polarity = None
        if toks in seen:
            continue
        seen.add(toks)
        phrases.append(Phrase(toks, polarity))
    if not phrases:
        raise ResourceError(path, 0, f"{kind.value} list is empty")
    return PhraseList(kind, tuple(phrases))


def write_phrase_list(plist, path):
    with open(path, "w", encoding="utf-8") as fh:
        for ph in plist.phrases:
            fh.write(" ".join(ph.tokens) + "\n")


# ---------------------------------------------------------------------------
# emoticons

@dataclass(frozen=True)
class EmoticonEntry:
    pattern: str
    name: str
    sentiment: Polarity = None
    is_regex: bool = False


class EmoticonCatalog:
    """Literal and regex emoticon patterns with longest-match lookup.

    Patterns whose first (last) character is alphanumeric only match when not
    glued to another alphanumeric on that side, so "XD" does not fire inside
    "XDA".
    """

    def __init__(self, entries):
        entries = tuple(entries)
        if not entries:
            raise ValueError("emoticon catalog is empty")
        names = [e.name for e in entries]
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise ValueError(f"duplicate emoticon names: {sorted(dupes)}")
        self.entries = entries
        self._literals = {}
        self._regexes = []
        for e in entries:
            if e.is_regex:
                self._regexes.append((re.compile(e.pattern), e))
            else:
                self._literals.setdefault(e.pattern[0], []).append(e)
        for lst in self._literals.values():
            lst.sort(key=lambda e: -len(e.pattern))
        self.by_name = {e.name: e for e in entries}

    def __eq__(self, other):
        return isinstance(other, EmoticonCatalog) and self.entries == other.entries

    def __len__(self):
        return len(self.entries)

    @staticmethod
    def _bounded(text, start, end):
        if text[start].isalnum() and start > 0 and text[start - 1].isalnum():
            return False
        if text[end - 1].isalnum() and end < len(text) and text[end].isalnum():
            return False
        return True

    def match(self, text, pos):
        """Return (end, entry) of the longest emoticon at ``pos`` or None."""
        best = None
        for e in self._literals.get(text[pos], ()):
            end = pos + len(e.pattern)
            if text.startswith(e.pattern, pos) and self._bounded(text, pos, end):
                best = (end, e)
                break
        for regex, e in self._regexes:
            m = regex.match(text, pos)
            if m and m.end() > pos and self._bounded(text, pos, m.end()):
                if best is None or m.end() > best[0]:
                    best = (m.end(), e)
        return best

    def match_at(self, text, pos):
        hit = self.match(text, pos)
        return hit[0] if hit else None

    def lookup(self, surface):
        hit = self.match(surface, 0)
        if hit and hit[0] == len(surface):
            return hit[1]
        return None


def load_emoticon_catalog(path):
    entries = []
    for lineno, line in _data_lines(path):
        cols = line.split("\t")
        if len(cols) != 3:
            raise ResourceError(path, lineno, "expected 'pattern<TAB>name<TAB>sentiment'")
        pattern, name, sent = cols
        is_regex = pattern.startswith("re:")
        if is_regex:
            pattern = pattern[3:]
            try:
                re.compile(pattern)
            except re.error as exc:
                raise ResourceError(path, lineno, f"pattern does not compile: {exc}") from None
        if not pattern:
            raise ResourceError(path, lineno, "empty pattern")
        if not NAME_RE.match(name) or name in RESERVED_NAMES:
            raise ResourceError(path, lineno, f"invalid emoticon name {name!r}")
        try:
            sentiment = _polarity_or_none(sent.strip().lower())
        except ValueError:
            raise ResourceError(path, lineno, f"unknown sentiment {sent!r}") from None
        entries.append(EmoticonEntry(pattern, name, sentiment, is_regex))
    try:
        return EmoticonCatalog(entries)
    except ValueError as exc:
        raise ResourceError(path, 0, str(exc)) from None


def write_emoticon_catalog(catalog, path):
    with open(path, "w", encoding="utf-8") as fh:
        for e in catalog.entries:
            pat = "re:" + e.pattern if e.is_regex else e.pattern
            fh.write(f"{pat}\t{e.name}\t{_polarity_str(e.sentiment)}\n")


# ---------------------------------------------------------------------------
# emoji

@dataclass(frozen=True)
class EmojiEntry:
    codepoints: tuple
    name: str
    sentiment: Polarity = None

    @property
    def text(self):
        return "".join(chr(c) for c in self.codepoints)


class EmojiCatalog:
    """Codepoint-sequence trie. U+FE0F variation selectors are transparent."""

    def __init__(self, entries):
        entries = tuple(entries)
        if not entries:
            raise ValueError("emoji catalog is empty")
        self.entries = entries
        self._trie = {}
        self.by_name = {}
        seen = set()
        for e in entries:
            key = tuple(c for c in e.codepoints if c != 0xFE0F)
            if key in seen:
                raise ValueError(f"duplicate emoji sequence {'-'.join('%X' % c for c in e.codepoints)}")
            if e.name in self.by_name:
                raise ValueError(f"duplicate emoji name {e.name!r}")
            seen.add(key)
            self.by_name[e.name] = e
            node = self._trie
            for c in key:
                node = node.setdefault(c, {})
            node[None] = e

    def __eq__(self, other):
        return isinstance(other, EmojiCatalog) and self.entries == other.entries

    def __len__(self):
        return len(self.entries)

    def match(self, text, pos):
        node = self._trie
        best = None
        i = pos
        n = len(text)
        while i < n:
            ch = text[i]
            if ch == VARIATION_SELECTOR and i > pos:
                i += 1
                if None in node:
                    best = (i, node[None])
                continue
            node = node.get(ord(ch))
            if node is None:
                break
            i += 1
            if None in node:
                best = (i, node[None])
        return best

    def match_at(self, text, pos):
        hit = self.match(text, pos)
        return hit[0] if hit else None

    def lookup(self, surface):
        hit = self.match(surface, 0)
        if hit and hit[0] == len(surface):
            return hit[1]
        return None


def load_emoji_catalog(path):
    entries = []
    for lineno, line in _data_lines(path):
        cols = line.split("\t")
        if len(cols) != 3:
            raise ResourceError(path, lineno, "expected 'codepoints<TAB>name<TAB>sentiment'")
        hexes, name, sent = cols
        try:
            cps = tuple(int(h, 16) for h in hexes.strip().split("-"))
            for c in cps:
                chr(c)
        except ValueError:
            raise ResourceError(path, lineno, f"invalid codepoint sequence {hexes!r}") from None
        if not NAME_RE.match(name):
            raise ResourceError(path, lineno, f"invalid emoji name {name!r}")
        try:
            sentiment = _polarity_or_none(sent.strip().lower())
        except ValueError:
            raise ResourceError(path, lineno, f"unknown sentiment {sent!r}") from None
        entries.append(EmojiEntry(cps, name, sentiment))
    try:
        return EmojiCatalog(entries)
    except ValueError as exc:
        raise ResourceError(path, 0, str(exc)) from None


def write_emoji_catalog(catalog, path):
    with open(path, "w", encoding="utf-8") as fh:
        for e in catalog.entries:
            hexes = "-".join("%X" % c for c in e.codepoints)
            fh.write(f"{hexes}\t{e.name}\t{_polarity_str(e.sentiment)}\n")


# ---------------------------------------------------------------------------
# hashtag splitting

@dataclass(frozen=True)
class SplitterDictionary:
    ranks: dict = field(hash=False)

    @property
    def max_len(self):
        return max((len(w) for w in self.ranks), default=0)


def load_splitter_dictionary(path):
    ranks = {}
    for lineno, line in _data_lines(path):
        cols = line.split("\t")
        if len(cols) != 2:
            raise ResourceError(path, lineno, "expected 'word<TAB>rank'")
        word = cols[0].strip().lower()
        try:
            rank = int(cols[1])
        except ValueError:
            raise ResourceError(path, lineno, f"rank is not an integer: {cols[1]!r}") from None
        if rank < 1:
            raise ResourceError(path, lineno, "rank must be positive")
        if word in ranks:
            raise ResourceError(path, lineno, f"word {word!r} listed twice")
        ranks[word] = rank
    return SplitterDictionary(ranks)


def write_splitter_dictionary(d, path):
    with open(path, "w", encoding="utf-8") as fh:
        for w, r in sorted(d.ranks.items(), key=lambda kv: (kv[1], kv[0])):
            fh.write(f"{w}\t{r}\n")


def split_hashtag(tag, dictionary):
    """Segment a hashtag body into dictionary words.

    Minimizes the number of segments, then the sum of frequency ranks, then
    the segment tuple itself (for a total order). Lookups are
    case-insensitive but the returned pieces keep the input's characters, so
    ``"".join(result) == tag``. Falls back to ``[tag]`` if no cover exists.
    """
    ranks = dictionary.ranks
    low = tag.lower()
    n = len(tag)
    maxlen = dictionary.max_len
    # best[i]: key for the optimal segmentation of tag[i:]
    best = [None] * (n + 1)
    best[n] = (0, 0, ())
    for i in range(n - 1, -1, -1):
        cand = None
        for j in range(i + 1, min(n, i + maxlen) + 1):
            rest = best[j]
            if rest is None:
                continue
            r = ranks.get(low[i:j])
            if r is None:
                continue
            key = (rest[0] + 1, rest[1] + r, (tag[i:j],) + rest[2])
            if cand is None or key < cand:
                cand = key
        best[i] = cand
    if n == 0 or best[0] is None:
        return [tag]
    return list(best[0][2])


# ---------------------------------------------------------------------------
# bundle

@dataclass
class ResourceBundle:
    subjectivity: list
    metaphors: MetaphorLexicon
    tag_questions: PhraseList
    interjections: PhraseList
    emoticons: EmoticonCatalog
    emoji: EmojiCatalog
    splitter: SplitterDictionary
    metaphor_annotations: dict = field(default_factory=dict)
    label_hashtags: frozenset = DEFAULT_LABEL_HASHTAGS

    def __post_init__(self):
        self.subj_by_word = {e.word: e for e in self.subjectivity}
        self.strong_by_word = {e.word: e for e in self.subjectivity if e.strength is Strength.STRONG}
        self.label_hashtags = frozenset(h.lower() if h.startswith("#") else "#" + h.lower()
                                        for h in self.label_hashtags)


def bundled_data_dir():
    return Path(str(importlib_resources.files("ironymarkers") / "data"))


def load_resources(directory=None, metaphor_annotations=None, label_hashtags=None):
    """Load every resource, preferring files in ``directory`` over bundled ones."""
    base = bundled_data_dir()
    paths = {}
    for key, fname in RESOURCE_FILES.items():
        p = Path(directory) / fname if directory else None
        paths[key] = p if p is not None and p.exists() else base / fname
    bundle = ResourceBundle(
        subjectivity=load_subjectivity(paths["subjectivity"]),
        metaphors=load_metaphors(paths["metaphors"]),
        tag_questions=load_phrase_list(paths["tag_questions"], PhraseKind.TAG_QUESTION),
        interjections=load_phrase_list(paths["interjections"], PhraseKind.INTERJECTION),
        emoticons=load_emoticon_catalog(paths["emoticons"]),
        emoji=load_emoji_catalog(paths["emoji"]),
        splitter=load_splitter_dictionary(paths["splitter"]),
        metaphor_annotations=load_metaphor_annotations(metaphor_annotations) if metaphor_annotations else {},
        label_hashtags=label_hashtags if label_hashtags is not None else DEFAULT_LABEL_HASHTAGS,
    )
    return bundle


_DEFAULT = None


def default_resources():
    """Bundled sample resources, loaded once and shared (they are immutable)."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_resources()
    return _DEFAULT
