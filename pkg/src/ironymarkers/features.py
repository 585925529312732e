"""Feature indexing and ablation masking for marker vectors."""

import json
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .markers import FIXED_FEATURES, group_of


@dataclass(frozen=True)
class SparseVector:
    indices: tuple
    label: object = None

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError("column ids must be strictly increasing")


class FeatureIndex:
    """Bijective feature-name to column map, frozen once fitted."""

    def __init__(self, names, frozen=True):
        names = sorted(set(names))
        self.names = names
        self.name_to_index = {n: i for i, n in enumerate(names)}
        self.frozen = frozen

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self.name_to_index

    def __eq__(self, other):
        return isinstance(other, FeatureIndex) and self.names == other.names

    def to_json(self):
        return dict(self.name_to_index)

    @classmethod
    def from_json(cls, mapping):
        names = sorted(mapping, key=mapping.get)
        if [mapping[n] for n in names] != list(range(len(names))):
            raise ValueError("feature index manifest must map names onto 0..N-1")
        idx = cls(names)
        if idx.names != names:
            raise ValueError("feature index manifest is not in lexicographic order")
        return idx

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def fit_index(train, min_count=1):
    """Index the fixed features plus every feature active in ``train``.

    Per-entry emoticon/emoji features seen in fewer than ``min_count``
    training vectors are left out.
    """
    train = list(train)
    if not train:
        raise ValueError("cannot fit a feature index on an empty training set")
    seen = Counter()
    for mv in train:
        seen.update(n for n, v in mv.features.items() if v)
    names = set(FIXED_FEATURES)
    names.update(n for n, c in seen.items() if c >= min_count)
    return FeatureIndex(names)


def _as_groups(ablate):
    return frozenset(ablate or ())


def vectorize(mv, index, ablate=None, label=None):
    """Column ids of active features; features in ablated groups are zeroed."""
    ablate = _as_groups(ablate)
    cols = []
    for name, value in mv.features.items():
        if not value:
            continue
        col = index.name_to_index.get(name)
        if col is None:
            continue
        if ablate and group_of(name) in ablate:
            continue
        cols.append(col)
    return SparseVector(tuple(sorted(cols)), label)


def mask(vec, index, ablate):
    """Zero out columns whose feature belongs to an ablated group."""
    ablate = _as_groups(ablate)
    cols = tuple(c for c in vec.indices if group_of(index.names[c]) not in ablate)
    return SparseVector(cols, vec.label)


def unvectorize(vec, index):
    return {index.names[c] for c in vec.indices}


def to_dense(vectors, n_features):
    X = np.zeros((len(vectors), n_features))
    for i, v in enumerate(vectors):
        X[i, list(v.indices)] = 1.0
    return X
