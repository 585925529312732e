"""Social-media aware tokenizer.

Tokens keep their character spans so detectors can reason about adjacency
(punctuation mixes, scare quotes) and the original text can be rebuilt from
the token surfaces plus the whitespace gaps between them.

Matching is attempted in priority order at every position:
URL, emoticon, emoji, hashtag, mention, word/number, punctuation run.
Anything left over becomes a single-character ``Other`` token.
"""

import re
import unicodedata
from dataclasses import dataclass
from enum import Enum


class TokenKind(str, Enum):
    WORD = "Word"
    HASHTAG = "Hashtag"
    MENTION = "Mention"
    URL = "Url"
    EMOTICON = "Emoticon"
    EMOJI = "Emoji"
    PUNCT = "Punct"
    NUMBER = "Number"
    OTHER = "Other"


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int
    kind: TokenKind

    @property
    def span(self):
        return (self.start, self.end)


URL_RE = re.compile(r"(?:https?://|www\.)\S+?(?=[.,!?;:)\]\"']*(?:\s|$))", re.IGNORECASE)
HASHTAG_RE = re.compile(r"#\w+")
MENTION_RE = re.compile(r"@\w+")
# letters with internal apostrophes only, so 'great' still yields quote tokens
WORD_RE = re.compile(r"[^\W\d_]+(?:['’][^\W\d_]+)*")
NUMBER_RE = re.compile(r"\d+(?:[.,:]\d+)*")
SPACE_RE = re.compile(r"\s+")


def is_punct(ch):
    return unicodedata.category(ch).startswith("P")


def is_all_caps(surface):
    """At least two letters and every letter uppercase ("AWESOME", "I'M")."""
    letters = [c for c in surface if c.isalpha()]
    return len(letters) >= 2 and all(c.isupper() for c in letters)


def looks_like_emoji(ch):
    cp = ord(ch)
    return (0x1F000 <= cp <= 0x1FAFF or 0x2600 <= cp <= 0x27BF
            or 0x2B00 <= cp <= 0x2BFF or 0x2190 <= cp <= 0x21FF)


def tokenize(text, emoticons=None, emoji=None):
    """Split ``text`` into a list of :class:`Token`.

    ``emoticons`` and ``emoji`` are catalogs exposing ``match_at(text, pos)``
    which returns the end offset of the longest entry starting at ``pos`` (or
    None). Either may be None, in which case that token kind is never produced.
    """
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = SPACE_RE.match(text, pos)
        if m:
            pos = m.end()
            continue

        kind = None
        end = None
        m = URL_RE.match(text, pos)
        if m:
            kind, end = TokenKind.URL, m.end()
        if kind is None and emoticons is not None:
            e = emoticons.match_at(text, pos)
            if e is not None:
                kind, end = TokenKind.EMOTICON, e
        if kind is None and emoji is not None:
            e = emoji.match_at(text, pos)
            if e is not None:
                kind, end = TokenKind.EMOJI, e
        if kind is None:
            for regex, k in ((HASHTAG_RE, TokenKind.HASHTAG),
                             (MENTION_RE, TokenKind.MENTION),
                             (WORD_RE, TokenKind.WORD),
                             (NUMBER_RE, TokenKind.NUMBER)):
                m = regex.match(text, pos)
                if m:
                    kind, end = k, m.end()
                    break
        if kind is None:
            ch = text[pos]
            if is_punct(ch):
                end = pos + 1
                while end < n and text[end] == ch:
                    end += 1
                kind = TokenKind.PUNCT
            else:
                kind, end = TokenKind.OTHER, pos + 1

        tokens.append(Token(text[pos:end], pos, end, kind))
        pos = end
    return tokens


def detokenize(text_length, tokens, gaps):
    """Rebuild text from token surfaces and the inter-token gap strings.

    ``gaps`` has ``len(tokens) + 1`` entries (leading gap, gaps between
    tokens, trailing gap).
    """
    parts = [gaps[0]]
    for tok, gap in zip(tokens, gaps[1:]):
        parts.append(tok.surface)
        parts.append(gap)
    out = "".join(parts)
    assert len(out) == text_length
    return out


def gaps_of(text, tokens):
    """Inter-token gap strings for :func:`detokenize`."""
    gaps = []
    prev = 0
    for tok in tokens:
        gaps.append(text[prev:tok.start])
        prev = tok.end
    gaps.append(text[prev:])
    return gaps
