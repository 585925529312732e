"""Linear max-margin classifier over marker features.

Training minimizes the L2-regularized hinge loss

    F(w, b) = lam/2 * (|w|^2 + b^2) + mean_i max(0, 1 - y_i (w.x_i + b)),
    lam = 1 / (C * n)

(the bias is regularized like a constant feature) with Pegasos-style
stochastic subgradient steps of size 1/(lam*t), projection onto the ball of
radius 1/sqrt(lam), and a t-weighted running average of the iterates. At
every epoch boundary the averaged iterate is scored on the full objective and
kept only if it improves on the best one so far, so the reported objective
history never increases.

Labels are coded Ironic = +1, NonIronic = -1.
"""

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_UP, Decimal

import numba
import numpy as np

from .corpus import Label
from .features import FeatureIndex, fit_index, to_dense, vectorize
from .markers import FeatureGroup

logger = logging.getLogger(__name__)

DEFAULT_C_GRID = (0.01, 0.1, 1.0, 10.0)
DEFAULT_EPOCHS = 200
DEFAULT_SEED = 13

ABLATION_LABELS = {
    FeatureGroup.TROPE: "- tropes",
    FeatureGroup.MORPHO_SYNTACTIC: "- MS",
    FeatureGroup.TYPOGRAPHIC: "- typography",
}


class TrainingError(ValueError):
    pass


@dataclass
class LinearModel:
    index: FeatureIndex
    weights: np.ndarray
    bias: float
    C: float
    seed: int = DEFAULT_SEED
    epochs: int = DEFAULT_EPOCHS
    history: list = field(default_factory=list)
    dev_scores: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.weights) != len(self.index):
            raise ValueError("weight vector length must equal the feature index size")
        if not (np.all(np.isfinite(self.weights)) and math.isfinite(self.bias)):
            raise ValueError("model parameters must be finite")

    def decision(self, v):
        return float(self.weights[list(v.indices)].sum() + self.bias)

    def to_json(self):
        return {
            "features": self.index.to_json(),
            "weights": [float(w) for w in self.weights],
            "bias": float(self.bias),
            "C": self.C,
            "seed": self.seed,
            "epochs": self.epochs,
            "dev_macro_f1": {repr(c): s for c, s in sorted(self.dev_scores.items())},
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            index=FeatureIndex.from_json(obj["features"]),
            weights=np.asarray(obj["weights"], dtype=float),
            bias=float(obj["bias"]),
            C=float(obj["C"]),
            seed=int(obj.get("seed", DEFAULT_SEED)),
            epochs=int(obj.get("epochs", DEFAULT_EPOCHS)),
        )

    def save(self, path, extra=None):
        obj = self.to_json()
        if extra:
            obj.update(extra)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, indent=1, sort_keys=True)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


# ---------------------------------------------------------------------------
# optimization

@numba.njit(cache=True)
def _pegasos_epoch(X, y, order, w, b, w_avg, b_avg, t, lam):
    d = X.shape[1]
    radius = 1.0 / np.sqrt(lam)
    for k in range(order.shape[0]):
        i = order[k]
        t += 1
        score = b
        for j in range(d):
            score += w[j] * X[i, j]
        eta = 1.0 / (lam * t)
        shrink = 1.0 - 1.0 / t
        for j in range(d):
            w[j] *= shrink
        b *= shrink
        if y[i] * score < 1.0:
            for j in range(d):
                w[j] += eta * y[i] * X[i, j]
            b += eta * y[i]
        norm2 = b * b
        for j in range(d):
            norm2 += w[j] * w[j]
        if norm2 > radius * radius:
            s = radius / np.sqrt(norm2)
            for j in range(d):
                w[j] *= s
            b *= s
        rho = 2.0 / (t + 1.0)
        for j in range(d):
            w_avg[j] = (1.0 - rho) * w_avg[j] + rho * w[j]
        b_avg = (1.0 - rho) * b_avg + rho * b
    return b, b_avg, t


def hinge_objective(X, y, w, b, C):
    """Regularized hinge objective (bias included in the penalty)."""
    n = X.shape[0]
    lam = 1.0 / (C * n)
    margins = np.maximum(0.0, 1.0 - y * (X @ w + b))
    return 0.5 * lam * (float(w @ w) + b * b) + float(margins.mean())


def fit_dense(X, y, C, epochs=DEFAULT_EPOCHS, seed=DEFAULT_SEED):
    """Train on a dense design matrix. Returns (w, b, objective history)."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n, d = X.shape
    if n == 0:
        raise TrainingError("empty training set")
    if len(set(y.tolist())) < 2:
        raise TrainingError("training data must contain both classes")
    if C <= 0:
        raise TrainingError(f"C must be positive, got {C}")
    lam = 1.0 / (C * n)
    rng = np.random.default_rng(seed)
    w = np.zeros(d)
    w_avg = np.zeros(d)
    b = b_avg = 0.0
    t = 0
    best_w, best_b, best_obj = np.zeros(d), 0.0, hinge_objective(X, y, np.zeros(d), 0.0, C)
    history = []
    for _ in range(epochs):
        order = rng.permutation(n)
        b, b_avg, t = _pegasos_epoch(X, y, order, w, b, w_avg, b_avg, t, lam)
        obj = hinge_objective(X, y, w_avg, b_avg, C)
        if not math.isfinite(obj):
            raise TrainingError("non-finite training objective")
        if obj <= best_obj:
            best_w, best_b, best_obj = w_avg.copy(), b_avg, obj
        history.append(best_obj)
    return best_w, float(best_b), history


def _labels_to_y(vectors):
    return np.array([1.0 if v.label is Label.IRONIC else -1.0 for v in vectors])


def train(train_vecs, dev_vecs, index, c_grid=DEFAULT_C_GRID, epochs=DEFAULT_EPOCHS, seed=DEFAULT_SEED):
    """Fit one model per C, keep the one with the best dev macro-F1 (ties: smaller C)."""
    train_vecs = list(train_vecs)
    dev_vecs = list(dev_vecs)
    if not c_grid:
        raise TrainingError("empty C grid")
    if len({v.label for v in train_vecs}) < 2:
        raise TrainingError("training data must contain both classes")
    X = to_dense(train_vecs, len(index))
    y = _labels_to_y(train_vecs)
    select_on = dev_vecs
    if not dev_vecs:
        logger.warning("empty dev set; selecting C on the training data")
        select_on = train_vecs

    best = None
    scores = {}
    for C in sorted(c_grid):
        w, b, hist = fit_dense(X, y, C, epochs, seed)
        model = LinearModel(index, w, b, C, seed, epochs, hist)
        score = evaluate(model, select_on).macro_f1
        scores[C] = score
        if best is None or score > best[0]:
            best = (score, model)
    model = best[1]
    model.dev_scores = scores
    return model


def predict(model, v):
    """Ironic iff w.x + b >= 0 (a zero score counts as Ironic)."""
    return Label.IRONIC if model.decision(v) >= 0 else Label.NON_IRONIC


# ---------------------------------------------------------------------------
# evaluation

def round_half_up(x, places=2):
    q = Decimal(1).scaleb(-places)
    return float(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


def f1_from_pr(p, r):
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int

    @classmethod
    def from_counts(cls, tp, fp, fn):
        p = round_half_up(100.0 * tp / (tp + fp)) if tp + fp else 0.0
        r = round_half_up(100.0 * tp / (tp + fn)) if tp + fn else 0.0
        return cls(p, r, round_half_up(f1_from_pr(p, r)), tp, fp, fn)


@dataclass(frozen=True)
class EvalReport:
    scores: dict
    n: int

    def __getitem__(self, label):
        return self.scores[Label(label)]

    @property
    def macro_f1(self):
        return sum(s.f1 for s in self.scores.values()) / len(self.scores)

    @property
    def accuracy(self):
        correct = self.scores[Label.IRONIC].tp + self.scores[Label.NON_IRONIC].tp
        return 100.0 * correct / self.n if self.n else 0.0

    def to_json(self):
        return {
            "n": self.n,
            "macro_f1": round_half_up(self.macro_f1),
            "classes": {lab.value: asdict(s) for lab, s in self.scores.items()},
        }


def report_from_predictions(gold, pred):
    gold = [Label(g) for g in gold]
    pred = [Label(p) for p in pred]
    scores = {}
    for lab in (Label.IRONIC, Label.NON_IRONIC):
        tp = sum(1 for g, p in zip(gold, pred) if g is lab and p is lab)
        fp = sum(1 for g, p in zip(gold, pred) if g is not lab and p is lab)
        fn = sum(1 for g, p in zip(gold, pred) if g is lab and p is not lab)
        scores[lab] = ClassScores.from_counts(tp, fp, fn)
    return EvalReport(scores, len(gold))


def evaluate(model, vectors):
    vectors = list(vectors)
    return report_from_predictions([v.label for v in vectors], [predict(model, v) for v in vectors])


# ---------------------------------------------------------------------------
# ablation and weights

@dataclass
class AblationRow:
    name: str
    ablated: frozenset
    report: EvalReport
    model: LinearModel


def ablation_suite(train_mvs, dev_mvs, test_mvs, groups=tuple(FeatureGroup), c_grid=DEFAULT_C_GRID,
                   epochs=DEFAULT_EPOCHS, seed=DEFAULT_SEED, min_count=1):
    """Retrain and evaluate with nothing removed and with each group removed.

    Each ``*_mvs`` argument is a list of (MarkerVector, Label) pairs.
    """
    index = fit_index([mv for mv, _ in train_mvs], min_count=min_count)
    configs = [("all", frozenset())]
    configs += [(ABLATION_LABELS[FeatureGroup(g)], frozenset({FeatureGroup(g)})) for g in groups]
    rows = []
    for name, ablate in configs:
        tr = [vectorize(mv, index, ablate, lab) for mv, lab in train_mvs]
        dv = [vectorize(mv, index, ablate, lab) for mv, lab in dev_mvs]
        te = [vectorize(mv, index, ablate, lab) for mv, lab in test_mvs]
        model = train(tr, dv, index, c_grid, epochs, seed)
        rows.append(AblationRow(name, ablate, evaluate(model, te), model))
    return rows


@dataclass
class WeightRanking:
    entries: list

    def top(self, k, label=Label.IRONIC):
        """Most discriminative features for one class (positive weights for Ironic)."""
        if Label(label) is Label.IRONIC:
            return [e for e in self.entries if e[1] > 0][:k]
        return [e for e in reversed(self.entries) if e[1] < 0][:k]


def rank_weights(model, index=None):
    index = index or model.index
    pairs = [(name, float(model.weights[i])) for i, name in enumerate(index.names)]
    pairs.sort(key=lambda p: (-p[1], p[0]))
    return WeightRanking(pairs)
