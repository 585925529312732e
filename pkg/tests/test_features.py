import pytest

from ironymarkers.features import FeatureIndex, SparseVector, fit_index, mask, to_dense, unvectorize, vectorize
from ironymarkers.markers import FIXED_FEATURES, FeatureGroup, MarkerVector


def mv(*names):
    return MarkerVector({n: 1 for n in names})


def test_fit_index_union_lexicographic():
    idx = fit_index([mv("emoji_rage"), mv("emoticon_wink")])
    assert len(idx) == len(FIXED_FEATURES) + 2
    assert idx.names == sorted(idx.names)
    assert fit_index([mv("emoji_rage"), mv("emoticon_wink")]) == idx


def test_fit_index_empty():
    with pytest.raises(ValueError):
        fit_index([])


def test_min_count_prunes_rare_parametric_features():
    idx = fit_index([mv("emoji_rage"), mv("emoji_rage"), mv("emoji_fire")], min_count=2)
    assert "emoji_rage" in idx and "emoji_fire" not in idx
    assert set(FIXED_FEATURES) <= set(idx.names)


def test_unseen_feature_dropped():
    idx = fit_index([mv("caps_present")])
    v = vectorize(mv("caps_present", "emoji_unicorn"), idx)
    assert unvectorize(v, idx) == {"caps_present"}


def test_ablation_masks():
    idx = fit_index([mv("caps_present")])
    x = mv("hyperbole_present", "caps_present")
    assert unvectorize(vectorize(x, idx, {FeatureGroup.TROPE}), idx) == {"caps_present"}
    assert unvectorize(vectorize(x, idx), idx) == {"hyperbole_present", "caps_present"}
    assert vectorize(x, idx, set(FeatureGroup)).indices == ()


def test_mask_commutes_with_vectorize():
    idx = fit_index([mv("emoji_rage")])
    x = mv("emoji_rage", "rq_present", "tagq_neg", "quote_present")
    for groups in ({FeatureGroup.TROPE}, {FeatureGroup.TYPOGRAPHIC, FeatureGroup.MORPHO_SYNTACTIC}):
        assert mask(vectorize(x, idx), idx, groups) == vectorize(x, idx, groups)


def test_index_json_round_trip(tmp_path):
    idx = fit_index([mv("emoji_rage")])
    p = tmp_path / "idx.json"
    idx.save(p)
    assert FeatureIndex.load(p) == idx
    with pytest.raises(ValueError):
        FeatureIndex.from_json({"b": 0, "a": 1})


def test_sparse_vector_strictly_increasing():
    with pytest.raises(ValueError):
        SparseVector((2, 1))
    with pytest.raises(ValueError):
        SparseVector((1, 1))


def test_to_dense():
    X = to_dense([SparseVector((0, 2)), SparseVector(())], 3)
    assert X.tolist() == [[1, 0, 1], [0, 0, 0]]
