"""Marker frequency statistics and Welch two-sample t-tests."""

import math
from dataclasses import dataclass, field
from itertools import combinations

from .markers import MARKERS, FIXED_FEATURES, FeatureGroup, MarkerVector, extract_all, marker_of

SIG_STRONG = 0.005
SIG_WEAK = 0.05


@dataclass(frozen=True)
class FrequencyStat:
    marker: str
    n: int
    mean: float
    sd: float


@dataclass(frozen=True)
class TTestResult:
    t: float
    df: float
    p: float

    @property
    def significant_005(self):
        return self.p <= SIG_STRONG

    @property
    def significant_05(self):
        return self.p <= SIG_WEAK

    def to_json(self):
        return {"t": self.t, "df": self.df, "p": self.p,
                "significant_005": self.significant_005, "significant_05": self.significant_05}


# ---------------------------------------------------------------------------
# Student t distribution

_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAX_ITER = 100000


def _betacf(a, b, x):
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc_reg(a, b, x, x_complement=None):
    """Regularized incomplete beta I_x(a, b).

    ``x_complement`` may carry an accurately computed ``1 - x``.
    """
    y = 1.0 - x if x_complement is None else x_complement
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log(y))
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _betacf(a, b, x) / a
    return 1.0 - math.exp(log_front) * _betacf(b, a, y) / b


def t_two_sided_p(t, df):
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if math.isnan(t):
        return float("nan")
    if math.isinf(t):
        return 0.0
    t2 = t * t
    x = df / (df + t2)
    return min(1.0, betainc_reg(df / 2.0, 0.5, x, x_complement=t2 / (df + t2)))


# ---------------------------------------------------------------------------
# Welch test

def _mean_var(sample):
    n = len(sample)
    m = math.fsum(sample) / n
    v = math.fsum((x - m) ** 2 for x in sample) / (n - 1)
    return m, v


def welch_ttest(sample_a, sample_b):
    """Welch's unequal-variance t-test with a two-sided p value."""
    na, nb = len(sample_a), len(sample_b)
    if na < 2 or nb < 2:
        raise ValueError(f"each sample needs at least 2 observations (got {na}, {nb})")
    ma, va = _mean_var(sample_a)
    mb, vb = _mean_var(sample_b)
    sa, sb = va / na, vb / nb
    se2 = sa + sb
    if se2 == 0.0:
        df = float(na + nb - 2)
        if ma == mb:
            return TTestResult(0.0, df, 1.0)
        return TTestResult(math.copysign(math.inf, ma - mb), df, 0.0)
    t = (ma - mb) / math.sqrt(se2)
    df = se2 * se2 / (sa * sa / (na - 1) + sb * sb / (nb - 1))
    return TTestResult(t, df, t_two_sided_p(t, df))


# ---------------------------------------------------------------------------
# frequencies

def _vectors(items, resources):
    return [it if isinstance(it, MarkerVector) else extract_all(it, resources) for it in items]


def indicator(mv, marker, counts=False):
    """Presence (or raw occurrence count) of a marker or single feature."""
    if marker in MARKERS:
        return mv.counts.get(marker, 0) if counts else mv.marker_present(marker)
    if counts:
        return mv.counts.get(marker_of(marker), 0)
    marker_of(marker)
    return mv.features.get(marker, 0)


def frequency_from_values(marker, values):
    n = len(values)
    if n == 0:
        return FrequencyStat(marker, 0, 0.0, 0.0)
    if n == 1:
        return FrequencyStat(marker, 1, float(values[0]), 0.0)
    m, v = _mean_var(values)
    return FrequencyStat(marker, n, m, math.sqrt(v))


def marker_frequency(items, resources, marker, counts=False):
    """Mean and sample SD of a marker's per-utterance presence.

    ``items`` may be utterances or precomputed marker vectors. With
    ``counts=True`` raw occurrence counts are used instead of presence.
    """
    vecs = _vectors(items, resources)
    return frequency_from_values(marker, [indicator(mv, marker, counts) for mv in vecs])


def group_presence(item, resources, group):
    mv = item if isinstance(item, MarkerVector) else extract_all(item, resources)
    return mv.group_present(FeatureGroup(group))


def type_pair_tests(items, resources=None):
    """Compare group presence rates between every pair of marker groups."""
    vecs = _vectors(items, resources)
    presence = {g: [mv.group_present(g) for mv in vecs] for g in FeatureGroup}
    return {(a, b): welch_ttest(presence[a], presence[b]) for a, b in combinations(FeatureGroup, 2)}


@dataclass
class FrequencyTable:
    columns: list
    markers: list
    stats: dict = field(default_factory=dict)
    tests: dict = field(default_factory=dict)

    def annotation(self, marker, column):
        """Superscript-style significance note against earlier columns.

        Letters name the earlier columns (a, b, ...); ``**`` marks
        p <= 0.005 and ``*`` marks p <= 0.05.
        """
        k = self.columns.index(column)
        strong, weak = [], []
        for j in range(k):
            res = self.tests.get((marker, self.columns[j], column))
            if res is None:
                continue
            if res.significant_005:
                strong.append(chr(ord("a") + j))
            elif res.significant_05:
                weak.append(chr(ord("a") + j))
        parts = []
        for letters, stars in ((strong, "**"), (weak, "*")):
            if letters:
                body = letters[0] if len(letters) == 1 else "(" + ",".join(letters) + ")"
                parts.append(body + stars)
        return ", ".join(parts)


def frequency_table(corpora, resources, markers=None, counts=False, pairwise=True):
    """Per-column (platform or genre) mean/SD for each marker.

    ``corpora`` maps a column name to utterances or marker vectors. With
    ``pairwise`` every pair of columns is compared per marker.
    """
    markers = list(markers or MARKERS)
    columns = list(corpora)
    vecs = {c: _vectors(items, resources) for c, items in corpora.items()}
    table = FrequencyTable(columns, markers)
    values = {}
    for c in columns:
        for m in markers:
            values[m, c] = [indicator(mv, m, counts) for mv in vecs[c]]
            table.stats[m, c] = frequency_from_values(m, values[m, c])
    if pairwise:
        for m in markers:
            for a, b in combinations(columns, 2):
                if len(values[m, a]) >= 2 and len(values[m, b]) >= 2:
                    table.tests[m, a, b] = welch_ttest(values[m, a], values[m, b])
    return table


def genre_table(corpora, resources, markers=None, counts=False):
    return frequency_table(corpora, resources, markers, counts, pairwise=True)


def all_feature_markers():
    return list(MARKERS) + list(FIXED_FEATURES)
