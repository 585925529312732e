"""Corpus ingestion, platform-specific preprocessing and stratified splits."""

import json
import logging
import math
import random
import re
from dataclasses import dataclass, field
from enum import Enum

from .lexicons import default_resources
from .tokenizer import TokenKind, is_all_caps, tokenize

logger = logging.getLogger(__name__)


class Label(str, Enum):
    IRONIC = "I"
    NON_IRONIC = "NI"


class Platform(str, Enum):
    TWITTER = "twitter"
    REDDIT = "reddit"


class CorpusError(ValueError):
    pass


class Rejected(Exception):
    """A record was filtered out during preprocessing."""

    def __init__(self, record_id, reason):
        self.record_id = record_id
        self.reason = reason
        super().__init__(f"{record_id}: {reason}")


@dataclass(frozen=True)
class RawRecord:
    id: str
    text: str
    platform: Platform
    genre: str = None
    gold_label: Label = None


@dataclass
class Utterance:
    id: str
    text: str
    tokens: list
    sentences: list
    platform: Platform = Platform.TWITTER
    genre: str = None
    label: Label = None


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    dev_fraction: float = 0.1
    test_fraction: float = 0.1
    seed: int = 13

    def __post_init__(self):
        fracs = (self.train_fraction, self.dev_fraction, self.test_fraction)
        if any(f <= 0 for f in fracs):
            raise ValueError(f"split fractions must be positive: {fracs}")
        if abs(sum(fracs) - 1.0) > 1e-9:
            raise ValueError(f"split fractions must sum to 1: {fracs}")


@dataclass
class LoadResult:
    records: list
    skipped: int = 0
    malformed: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# loading

def load_corpus(path, platform):
    """Read a JSON-lines corpus. Malformed lines are skipped and counted."""
    platform = Platform(platform)
    result = LoadResult([])
    seen = set()
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                rec = _record_from_json(obj, platform)
            except (json.JSONDecodeError, TypeError, ValueError, KeyError) as exc:
                result.skipped += 1
                result.malformed.append((lineno, str(exc)))
                logger.warning("%s:%d: skipping malformed line (%s)", path, lineno, exc)
                continue
            if rec.id in seen:
                raise CorpusError(f"{path}:{lineno}: duplicate id {rec.id!r}")
            seen.add(rec.id)
            result.records.append(rec)
    if result.skipped:
        logger.info("%s: %d malformed lines skipped", path, result.skipped)
    return result


def _record_from_json(obj, platform):
    if not isinstance(obj, dict):
        raise TypeError("line is not a JSON object")
    rid, text = obj["id"], obj["text"]
    if not isinstance(rid, str) or not rid:
        raise ValueError("'id' must be a non-empty string")
    if not isinstance(text, str):
        raise ValueError("'text' must be a string")
    label = obj.get("label")
    genre = obj.get("genre")
    if genre is not None and not isinstance(genre, str):
        raise ValueError("'genre' must be a string")
    return RawRecord(rid, text, platform, genre, Label(label) if label is not None else None)


# ---------------------------------------------------------------------------
# sentences and utterances

# a run of terminal marks followed by whitespace or end of text closes a sentence
SENT_END_RE = re.compile(r"[.!?]+(?=\s|$)")


def sentence_spans(text):
    """Character spans of sentences. A trailing unterminated fragment counts."""
    spans = []
    start = 0
    for m in SENT_END_RE.finditer(text):
        _add_span(text, start, m.end(), spans)
        start = m.end()
    _add_span(text, start, len(text), spans)
    return spans


def _add_span(text, start, end, spans):
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    if end > start:
        spans.append((start, end))


def make_utterance(text, resources=None, id="u", platform=Platform.TWITTER, genre=None, label=None):
    res = resources or default_resources()
    return Utterance(
        id=id,
        text=text,
        tokens=tokenize(text, res.emoticons, res.emoji),
        sentences=sentence_spans(text),
        platform=Platform(platform),
        genre=genre,
        label=label,
    )


# ---------------------------------------------------------------------------
# twitter

TRAILING_TAG_RE = re.compile(r"(?<![\w#])(#\w+)\s*$")
ANY_TAG_RE = re.compile(r"(?<![\w#])#\w+")
_KEEP_CASE_KINDS = (TokenKind.EMOTICON, TokenKind.EMOJI, TokenKind.URL)


def normalize_for_dedup(text):
    return " ".join(text.lower().split())


def selective_lowercase(text, resources=None):
    """Lowercase every token except all-caps words (two or more letters).

    Emoticons, emoji and URLs are left untouched so ":P" stays ":P".
    """
    res = resources or default_resources()
    out = []
    prev = 0
    for tok in tokenize(text, res.emoticons, res.emoji):
        out.append(text[prev:tok.start])
        s = tok.surface
        if tok.kind in _KEEP_CASE_KINDS or is_all_caps(s):
            out.append(s)
        else:
            out.append(s.lower())
        prev = tok.end
    out.append(text[prev:])
    return "".join(out)


def preprocess_twitter(record, label_hashtags=None, resources=None, seen=None):
    """Filter and normalize one tweet. Returns (Utterance, Label).

    Raises :class:`Rejected` for retweets, duplicates (when ``seen`` is
    given) and tweets whose label hashtag is not part of the trailing run.
    """
    res = resources or default_resources()
    labels = res.label_hashtags if label_hashtags is None else {h.lower() for h in label_hashtags}
    text = record.text
    if text.startswith("RT "):
        raise Rejected(record.id, "retweet")

    body = text
    found = False
    while True:
        m = TRAILING_TAG_RE.search(body)
        if not m or m.group(1).lower() not in labels:
            break
        found = True
        body = body[:m.start(1)].rstrip()
    if any(t.lower() in labels for t in ANY_TAG_RE.findall(body)):
        raise Rejected(record.id, "label hashtag not at end")
    if found:
        body = body.rstrip()

    if seen is not None:
        key = normalize_for_dedup(text)
        if key in seen:
            raise Rejected(record.id, "duplicate")
        seen.add(key)

    body = selective_lowercase(body, res)
    label = Label.IRONIC if found else Label.NON_IRONIC
    utt = make_utterance(body, res, id=record.id, platform=Platform.TWITTER,
                         genre=record.genre, label=label)
    return utt, label


# ---------------------------------------------------------------------------
# reddit

SARCASM_TAG_RE = re.compile(r"(?:^|\s)/s\s*$")


def preprocess_reddit(record, resources=None, seen=None):
    """Strip a trailing "/s" (the sarcasm label) and apply the two-sentence filter.

    Case is preserved.
    """
    res = resources or default_resources()
    text = record.text
    m = SARCASM_TAG_RE.search(text)
    if m:
        text = text[:m.start()].rstrip()
    label = Label.IRONIC if m else Label.NON_IRONIC
    if seen is not None:
        key = normalize_for_dedup(text)
        if key in seen:
            raise Rejected(record.id, "duplicate")
        seen.add(key)
    utt = make_utterance(text, res, id=record.id, platform=Platform.REDDIT,
                         genre=record.genre, label=label)
    if len(utt.sentences) < 2:
        raise Rejected(record.id, "fewer than two sentences")
    return utt, label


def preprocess(record, resources=None, seen=None, label_hashtags=None):
    if record.platform is Platform.TWITTER:
        return preprocess_twitter(record, label_hashtags, resources, seen)
    return preprocess_reddit(record, resources, seen)


# ---------------------------------------------------------------------------
# splitting

def _largest_remainder(quotas, total):
    floors = [math.floor(q) for q in quotas]
    short = total - sum(floors)
    order = sorted(range(len(quotas)), key=lambda i: (-(quotas[i] - floors[i]), i))
    for i in order[:short]:
        floors[i] += 1
    return floors


def split(items, spec=None):
    """Stratified, seeded train/dev/test split.

    Split sizes are floored for train and dev with the remainder going to
    test. Ironic items are distributed over the splits by largest remainder
    so each split is within one item of the global class ratio.
    """
    spec = spec or SplitSpec()
    items = list(items)
    if any(getattr(u, "label", None) is None for u in items):
        raise CorpusError("every utterance must be labeled before splitting")
    if len(items) < 10:
        raise CorpusError(f"need at least 10 labeled utterances to split, got {len(items)}")

    n = len(items)
    n_train = math.floor(n * spec.train_fraction)
    n_dev = math.floor(n * spec.dev_fraction)
    sizes = [n_train, n_dev, n - n_train - n_dev]

    rng = random.Random(spec.seed)
    ironic = [u for u in items if u.label is Label.IRONIC]
    other = [u for u in items if u.label is not Label.IRONIC]
    rng.shuffle(ironic)
    rng.shuffle(other)

    k_ironic = _largest_remainder([s * len(ironic) / n for s in sizes], len(ironic))
    parts = []
    i = j = 0
    for size, k in zip(sizes, k_ironic):
        part = ironic[i:i + k] + other[j:j + size - k]
        i += k
        j += size - k
        rng.shuffle(part)
        parts.append(part)
    return tuple(parts)
