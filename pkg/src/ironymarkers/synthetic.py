"""Synthetic corpora with known marker rates.

Used to check the classifier and the frequency statistics against oracles
that can be computed in closed form. Filler text is drawn from a vocabulary
that triggers no detector, so the only markers present are the planted ones.
"""

import math
import random
from dataclasses import dataclass

from .corpus import Label, Platform, RawRecord

NEUTRAL_WORDS = (
    "the a of to in on at for with from by about this that it we they you my our your "
    "morning train bus office meeting email report paper coffee tea lunch dinner window door "
    "table chair street city road car phone laptop screen update plan schedule list note page "
    "file folder box bag shirt book chapter line station ticket queue desk room floor wall "
    "garden park river bridge tuesday monday week day month year after before then there here "
    "also just still only some more other another each every one two three today tomorrow"
).split()

CAPS_WORDS = ("TODAY", "MONDAY", "AGAIN", "THIS", "MEETING", "TRAIN", "EMAIL")
PLANTED_EMOTICONS = (":)", ":P", ";)", ":(", ":D", "-_-")
PLANTED_EMOJI = ("\U0001F612", "\U0001F621", "\U0001F616")  # unamused, rage, confounded

# Each snippet fires exactly one marker (plus the punctuation it carries).
SNIPPETS = {
    "emoticon": lambda rng: rng.choice(PLANTED_EMOTICONS),
    "caps": lambda rng: rng.choice(CAPS_WORDS),
    "exclaim_multi": lambda rng: rng.choice(NEUTRAL_WORDS) + "!!!",
    "emoji": lambda rng: rng.choice(PLANTED_EMOJI),
    "quote": lambda rng: '"' + rng.choice(NEUTRAL_WORDS) + '"',
    "ellipsis": lambda rng: rng.choice(NEUTRAL_WORDS) + "...",
    "hyperbole": lambda rng: rng.choice(("awesome", "amazing", "brilliant", "fantastic")),
    "interjection": lambda rng: rng.choice(("ugh", "meh", "yikes", "whoa")),
    "metaphor": lambda rng: rng.choice(("golden age", "silver lining", "rat race")),
    "rhetorical_question": lambda rng: "why " + rng.choice(NEUTRAL_WORDS) + "?",
    "tag_question": lambda rng: rng.choice(NEUTRAL_WORDS) + ", isn't it?",
}

# planted kind -> feature it drives
PLANTED_FEATURES = {
    "emoticon": "emoticon_*",
    "caps": "caps_present",
    "exclaim_multi": "exclaim_multi",
    "emoji": "emoji_*",
    "quote": "quote_present",
    "ellipsis": "punct_period_multi",
}
PLANTED_KINDS = tuple(PLANTED_FEATURES)
TYPOGRAPHIC_KINDS = ("emoticon", "caps", "emoji", "quote", "ellipsis")
BACKGROUND_KINDS = ("hyperbole", "interjection", "metaphor", "rhetorical_question")


def compose(rng, snippets, n_filler=None):
    """Interleave snippets with neutral filler; the text ends in a plain word and '.'."""
    n_filler = n_filler if n_filler is not None else rng.randint(4, 9)
    words = [rng.choice(NEUTRAL_WORDS) for _ in range(n_filler)]
    body = words[:-1]
    for s in snippets:
        body.insert(rng.randint(0, len(body)), s)
    # a question snippet must be followed by more text, so it never ends the utterance
    return " ".join(body + [words[-1] + "."])


@dataclass(frozen=True)
class PlantedSpec:
    n: int = 10000
    rate_ironic: float = 0.6
    rate_non_ironic: float = 0.2
    kinds: tuple = PLANTED_KINDS
    background_kinds: tuple = BACKGROUND_KINDS
    background_rate: float = 0.2
    seed: int = 13


def planted_corpus(spec=PlantedSpec()):
    """Balanced labeled records; every planted kind fires independently per class rate."""
    rng = random.Random(spec.seed)
    records = []
    for i in range(spec.n):
        label = Label.IRONIC if i % 2 == 0 else Label.NON_IRONIC
        rate = spec.rate_ironic if label is Label.IRONIC else spec.rate_non_ironic
        snippets = [SNIPPETS[k](rng) for k in spec.kinds if rng.random() < rate]
        snippets += [SNIPPETS[k](rng) for k in spec.background_kinds if rng.random() < spec.background_rate]
        records.append(RawRecord(f"p{i:05d}", compose(rng, snippets), Platform.TWITTER, None, label))
    return records


def bayes_accuracy(m, p1=0.6, p0=0.2):
    """Accuracy of the optimal rule for m independent binary cues, equal priors.

    The likelihood ratio only depends on the number k of cues present, so
    the Bayes accuracy is 0.5 * sum_k C(m,k) max(p1^k q1^(m-k), p0^k q0^(m-k)).
    """
    total = 0.0
    for k in range(m + 1):
        a = p1 ** k * (1 - p1) ** (m - k)
        b = p0 ** k * (1 - p0) ** (m - k)
        total += math.comb(m, k) * max(a, b)
    return 0.5 * total


def bernoulli_corpus(n, rate, kind="hyperbole", seed=13, platform=Platform.TWITTER, genre=None, prefix="b"):
    """Records where exactly round(n*rate) utterances carry one snippet of ``kind``.

    The positions are shuffled, so the empirical presence rate is exact.
    """
    rng = random.Random(seed)
    k = round(n * rate)
    flags = [True] * k + [False] * (n - k)
    rng.shuffle(flags)
    out = []
    for i, flag in enumerate(flags):
        snippets = [SNIPPETS[kind](rng)] if flag else []
        # reddit keeps only posts with two or more sentences
        text = compose(rng, snippets)
        if platform is Platform.REDDIT:
            text += " " + compose(rng, [])
        out.append(RawRecord(f"{prefix}{i:05d}", text, Platform(platform), genre, None))
    return out


def sampled_bernoulli_corpus(n, rate, kind="hyperbole", seed=13, platform=Platform.TWITTER, genre=None, prefix="s"):
    """Like :func:`bernoulli_corpus` but each utterance draws presence independently."""
    rng = random.Random(seed)
    out = []
    for i in range(n):
        snippets = [SNIPPETS[kind](rng)] if rng.random() < rate else []
        text = compose(rng, snippets)
        if platform is Platform.REDDIT:
            text += " " + compose(rng, [])
        out.append(RawRecord(f"{prefix}{i:05d}", text, Platform(platform), genre, None))
    return out


def genre_corpora(rates, n=2000, kind="hyperbole", seed=13, sampled=True):
    """One Bernoulli corpus per genre, e.g. ``{"technology": 0.19, ...}``."""
    gen = sampled_bernoulli_corpus if sampled else bernoulli_corpus
    return {g: gen(n, r, kind, seed + j, Platform.REDDIT, g, prefix=f"{g}_")
            for j, (g, r) in enumerate(rates.items())}
