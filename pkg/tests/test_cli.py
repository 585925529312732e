import json

import pytest

from ironymarkers.cli import main, read_features, read_tsv
from ironymarkers.synthetic import PlantedSpec, genre_corpora, planted_corpus, sampled_bernoulli_corpus


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            obj = {"id": r.id, "text": r.text}
            if r.gold_label is not None:
                obj["label"] = r.gold_label.value
            if r.genre is not None:
                obj["genre"] = r.genre
            fh.write(json.dumps(obj) + "\n")
    return path


@pytest.fixture(scope="module")
def planted(tmp_path_factory):
    d = tmp_path_factory.mktemp("planted")
    corpus = write_jsonl(d / "c.jsonl", planted_corpus(PlantedSpec(n=2000, seed=5)))
    assert main(["extract", str(corpus), "--out", str(d / "x")]) == 0
    return d


def test_extract_table1(tmp_path):
    c = tmp_path / "c.jsonl"
    c.write_text(json.dumps({"id": "t1", "text": "With 1 follower I must be AWESOME. :P #ironic"}) + "\n")
    assert main(["extract", str(c), "--out", str(tmp_path / "o"), "--label-hashtags", "#ironic"]) == 0
    meta, items = read_features(tmp_path / "o" / "features.jsonl")
    assert meta["seed"] == 13 and meta["config_hash"]
    assert items[0].label.value == "I"
    assert {"caps_present", "emoticon_tongue_out"} <= set(items[0].mv.active())


def test_extract_empty_corpus(tmp_path):
    c = tmp_path / "c.jsonl"
    c.write_text("")
    assert main(["extract", str(c), "--out", str(tmp_path / "o")]) == 0
    _, items = read_features(tmp_path / "o" / "features.jsonl")
    assert items == []


def test_extract_malformed_line_reported(tmp_path):
    c = tmp_path / "c.jsonl"
    c.write_text('{"id":"a","text":"fine text"}\n{broken\n{"id":"b","text":"RT @x: copy"}\n')
    assert main(["extract", str(c), "--out", str(tmp_path / "o")]) == 0
    _, items = read_features(tmp_path / "o" / "features.jsonl")
    assert [it.id for it in items] == ["a"]
    rej = read_tsv(tmp_path / "o" / "rejections.tsv")
    assert {r["id"]: r["reason"] for r in rej}["b"] == "retweet"
    assert any(r["id"] == "line:2" for r in rej)


def test_resource_error_is_fatal(tmp_path, capsys):
    rdir = tmp_path / "res"
    rdir.mkdir()
    (rdir / "subjectivity.tsv").write_text("good\tpositive\tweak\nbad\tnope\tstrong\n")
    c = tmp_path / "c.jsonl"
    c.write_text('{"id":"a","text":"x"}\n')
    assert main(["extract", str(c), "--resources", str(rdir), "--out", str(tmp_path / "o")]) == 1
    err = capsys.readouterr().err
    assert "subjectivity.tsv:2" in err


def test_rerun_byte_identical_and_worker_independent(planted, tmp_path):
    corpus = planted / "c.jsonl"
    assert main(["extract", str(corpus), "--out", str(tmp_path / "a"), "--workers", "2"]) == 0
    assert (tmp_path / "a" / "features.jsonl").read_bytes() == (planted / "x" / "features.jsonl").read_bytes()


def test_train_evaluate_ablate(planted, tmp_path):
    feats = str(planted / "x" / "features.jsonl")
    assert main(["train", feats, "--out", str(tmp_path / "m"), "--epochs", "40"]) == 0
    model = json.loads((tmp_path / "m" / "model.json").read_text())
    assert model["_meta"]["seed"] == 13 and len(model["splits"]["test"]) == 200
    assert main(["evaluate", feats, "--model", str(tmp_path / "m" / "model.json"), "--out", str(tmp_path / "e")]) == 0
    row = read_tsv(tmp_path / "e" / "eval.tsv")[0]
    assert float(row["macro_F1"]) > 70

    assert main(["ablate", feats, "--out", str(tmp_path / "ab"), "--epochs", "40"]) == 0
    rows = read_tsv(tmp_path / "ab" / "ablation.tsv")
    assert [r["features"] for r in rows] == ["all", "- tropes", "- MS", "- typography"]
    f1 = {r["features"]: float(r["macro_F1"]) for r in rows}
    assert f1["- typography"] == min(f1[k] for k in ("- tropes", "- MS", "- typography"))

    first = (tmp_path / "ab" / "ablation.tsv").read_bytes()
    assert main(["ablate", feats, "--out", str(tmp_path / "ab2"), "--epochs", "40"]) == 0
    assert (tmp_path / "ab2" / "ablation.tsv").read_bytes() == first


def test_train_single_c_and_ablate_flag(planted, tmp_path):
    feats = str(planted / "x" / "features.jsonl")
    assert main(["train", feats, "--out", str(tmp_path / "m"), "--epochs", "10", "--c-grid", "0.1",
                 "--ablate", "typography"]) == 0
    model = json.loads((tmp_path / "m" / "model.json").read_text())
    assert model["C"] == 0.1 and model["ablate"] == ["typographic"]
    weights = {r["feature"]: float(r["weight"]) for r in read_tsv(tmp_path / "m" / "weights.tsv")}
    assert weights["caps_present"] == 0.0


def test_freq_two_platforms(tmp_path):
    hi = write_jsonl(tmp_path / "t.jsonl", sampled_bernoulli_corpus(400, 0.3, "emoticon", seed=1))
    lo = write_jsonl(tmp_path / "r.jsonl", sampled_bernoulli_corpus(400, 0.02, "emoticon", seed=2))
    assert main(["freq", f"twitter={hi}", f"other={lo}", "--out", str(tmp_path / "f")]) == 0
    t = {r["marker"]: r for r in read_tsv(tmp_path / "f" / "freq_twitter.tsv")}
    o = {r["marker"]: r for r in read_tsv(tmp_path / "f" / "freq_other.tsv")}
    assert float(t["emoticon"]["mean"]) > float(o["emoticon"]["mean"]) + 0.2
    assert t["emoticon"]["group"] == "typographic" and t["emoticon"]["n"] == "400"
    sig = json.loads((tmp_path / "f" / "freq_significance.json").read_text())
    emo = [x for x in sig["markers"] if x["marker"] == "emoticon"][0]
    assert emo["significant_005"]


def test_freq_single_utterance(tmp_path):
    c = tmp_path / "c.jsonl"
    c.write_text('{"id":"a","text":"so AWESOME"}\n')
    assert main(["freq", str(c), "--out", str(tmp_path / "f")]) == 0
    rows = read_tsv(tmp_path / "f" / "freq_twitter.tsv")
    assert {r["mean"] for r in rows} <= {"0.0000", "1.0000"}
    assert {r["sd"] for r in rows} == {"0.0000"}


def test_compare_genres(tmp_path):
    rates = {"technology": 0.19, "sports": 0.34, "politics": 0.74}
    recs = [r for g in genre_corpora(rates, n=300).values() for r in g]
    c = write_jsonl(tmp_path / "g.jsonl", recs)
    assert main(["compare-genres", str(c), "--platform", "reddit", "--genres", "technology,sports,politics",
                 "--out", str(tmp_path / "g")]) == 0
    wide = {r["marker"]: r for r in read_tsv(tmp_path / "g" / "genre_table.tsv")}
    assert wide["hyperbole"]["politics (c)"].endswith("(a,b)**")
    assert main(["compare-genres", str(c), "--platform", "reddit", "--genres", "nope",
                 "--out", str(tmp_path / "h")]) == 1
