"""Command-line front end: extract, train, evaluate, ablate, freq, compare-genres.

Every output carries the run's config hash and seed and contains no
timestamps, so rerunning a command with the same inputs reproduces the
output files byte for byte.
"""

import argparse
import hashlib
import json
import logging
import sys
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .classifier import (DEFAULT_C_GRID, DEFAULT_EPOCHS, DEFAULT_SEED, LinearModel,
                         TrainingError, ablation_suite, evaluate, rank_weights, round_half_up, train)
from .corpus import CorpusError, Label, Platform, Rejected, SplitSpec, load_corpus, preprocess, split
from .features import fit_index, vectorize
from .lexicons import RESOURCE_FILES, ResourceError, bundled_data_dir, load_resources
from .markers import MARKERS, FeatureGroup, MarkerVector, extract_all
from .stats import frequency_table, type_pair_tests, welch_ttest

logger = logging.getLogger("ironymarkers")

GROUP_FLAGS = {
    "tropes": FeatureGroup.TROPE,
    "ms": FeatureGroup.MORPHO_SYNTACTIC,
    "typography": FeatureGroup.TYPOGRAPHIC,
}

Item = namedtuple("Item", "id mv label genre")


class CliError(Exception):
    pass


# ---------------------------------------------------------------------------
# config hashing and output helpers

def _file_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _resource_digests(args):
    base = bundled_data_dir()
    out = {}
    rdir = getattr(args, "resources", None)
    for key, fname in sorted(RESOURCE_FILES.items()):
        p = Path(rdir) / fname if rdir else None
        out[key] = _file_digest(p if p is not None and p.exists() else base / fname)
    if getattr(args, "metaphor_annotations", None):
        out["metaphor_annotations"] = _file_digest(args.metaphor_annotations)
    return out


def config_hash(args, inputs=()):
    """Hash of everything that determines a command's output."""
    skip = {"out", "workers", "func", "log_level"}
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    cfg["inputs"] = [_file_digest(p) for p in inputs]
    cfg["resources"] = _resource_digests(args)
    cfg["version"] = __version__
    blob = json.dumps(cfg, sort_keys=True, default=str).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()[:16]


def _meta(args, chash):
    return {"command": args.command, "config_hash": chash, "seed": args.seed}


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True, ensure_ascii=False)
        fh.write("\n")


def _write_tsv(path, meta, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# config_hash={meta['config_hash']}\tseed={meta['seed']}\n")
        fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write("\t".join(str(x) for x in row) + "\n")


def read_tsv(path):
    """Rows of a TSV written by this tool (comment header skipped)."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if not ln.startswith("#")]
    header = lines[0].split("\t")
    return [dict(zip(header, ln.split("\t"))) for ln in lines[1:]]


def _fmt(x, places=2):
    return f"{round_half_up(x, places):.{places}f}"


def _out_dir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# ingestion

_WORKER_RESOURCES = None


def _label_tags(args):
    if not args.label_hashtags:
        return None
    return [t.strip() for t in args.label_hashtags.split(",") if t.strip()]


def _resources(args):
    return load_resources(args.resources, args.metaphor_annotations, _label_tags(args))


def _init_worker(resource_dir, annotations, tags):
    global _WORKER_RESOURCES
    _WORKER_RESOURCES = load_resources(resource_dir, annotations, tags)


def _extract_one(utt):
    return extract_all(utt, _WORKER_RESOURCES)


def extract_vectors(utterances, resources, workers=1, resource_args=(None, None, None)):
    """Marker vectors in input order, optionally computed in worker processes."""
    if workers <= 1 or len(utterances) < 2:
        return [extract_all(u, resources) for u in utterances]
    chunk = max(1, len(utterances) // (4 * workers))
    with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=resource_args) as pool:
        return list(pool.map(_extract_one, utterances, chunksize=chunk))


def ingest(path, platform, args, resources):
    """Load, preprocess and extract one corpus.

    Returns (items, rejections, malformed_count). A gold ``label`` on a
    record overrides the label derived from hashtags or "/s".
    """
    loaded = load_corpus(path, platform)
    seen = set()
    kept, rejections = [], []
    for rec in loaded.records:
        try:
            utt, _ = preprocess(rec, resources, seen)
        except Rejected as exc:
            rejections.append((exc.record_id, exc.reason))
            continue
        if rec.gold_label is not None:
            utt.label = rec.gold_label
        kept.append(utt)
    for lineno, msg in loaded.malformed:
        rejections.append((f"line:{lineno}", "malformed: " + msg.replace("\t", " ")))
    mvs = extract_vectors(kept, resources, args.workers,
                          (args.resources, args.metaphor_annotations, _label_tags(args)))
    items = [Item(u.id, mv, u.label, u.genre) for u, mv in zip(kept, mvs)]
    return items, rejections, loaded.skipped


def _item_to_json(item):
    return {
        "id": item.id,
        "label": item.label.value if item.label else None,
        "genre": item.genre,
        "features": item.mv.active(),
        "counts": {k: v for k, v in sorted(item.mv.counts.items()) if v},
        "unknown_emoji": item.mv.unknown_emoji,
    }


def write_features(path, meta, items):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps({"_meta": meta}, sort_keys=True) + "\n")
        for it in items:
            fh.write(json.dumps(_item_to_json(it), sort_keys=True, ensure_ascii=False) + "\n")


def read_features(path):
    """Parse a feature file. Returns (meta, items)."""
    meta, items = {}, []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            obj = json.loads(line)
            if "_meta" in obj:
                meta = obj["_meta"]
                continue
            try:
                mv = MarkerVector({n: 1 for n in obj["features"]}, dict(obj.get("counts", {})),
                                  obj.get("unknown_emoji", 0))
                label = Label(obj["label"]) if obj.get("label") else None
            except (KeyError, ValueError) as exc:
                raise CliError(f"{path}:{lineno}: bad feature line ({exc})") from exc
            items.append(Item(obj["id"], mv, label, obj.get("genre")))
    return meta, items


# ---------------------------------------------------------------------------
# commands

def cmd_extract(args):
    out = _out_dir(args)
    resources = _resources(args)
    chash = config_hash(args, [args.corpus])
    meta = _meta(args, chash)
    items, rejections, skipped = ingest(args.corpus, args.platform, args, resources)
    write_features(out / "features.jsonl", meta, items)
    _write_tsv(out / "rejections.tsv", meta, ["id", "reason"], rejections)
    logger.info("extracted %d utterances, %d rejected, %d malformed", len(items), len(rejections) - skipped, skipped)
    return 0


def _ablate_groups(args):
    return frozenset(GROUP_FLAGS[g] for g in (args.ablate or ()))


def _c_grid(args):
    try:
        grid = tuple(float(c) for c in args.c_grid.split(","))
    except ValueError as exc:
        raise CliError(f"bad --c-grid {args.c_grid!r}") from exc
    if not grid or any(c <= 0 for c in grid):
        raise CliError("--c-grid needs positive values")
    return grid


def _split_items(items, seed):
    labeled = [it for it in items if it.label is not None]
    if len(labeled) < len(items):
        logger.warning("%d unlabeled utterances ignored", len(items) - len(labeled))
    return split(labeled, SplitSpec(seed=seed))


def _report_rows(name, report):
    i, ni = report[Label.IRONIC], report[Label.NON_IRONIC]
    return [name, _fmt(i.precision), _fmt(i.recall), _fmt(i.f1),
            _fmt(ni.precision), _fmt(ni.recall), _fmt(ni.f1), _fmt(report.macro_f1)]


REPORT_HEADER = ["features", "I_P", "I_R", "I_F1", "NI_P", "NI_R", "NI_F1", "macro_F1"]


def cmd_train(args):
    out = _out_dir(args)
    chash = config_hash(args, [args.features])
    meta = _meta(args, chash)
    _, items = read_features(args.features)
    tr, dv, te = _split_items(items, args.seed)
    ablate = _ablate_groups(args)
    index = fit_index([it.mv for it in tr], min_count=args.min_feature_count)
    vec = lambda its: [vectorize(it.mv, index, ablate, it.label) for it in its]
    model = train(vec(tr), vec(dv), index, _c_grid(args), args.epochs, args.seed)
    extra = {
        "_meta": meta,
        "ablate": sorted(g.value for g in ablate),
        "splits": {"train": [it.id for it in tr], "dev": [it.id for it in dv], "test": [it.id for it in te]},
    }
    model.save(out / "model.json", extra)
    ranking = rank_weights(model)
    _write_tsv(out / "weights.tsv", meta, ["feature", "weight"],
               [(n, repr(round(w, 10))) for n, w in ranking.entries])
    logger.info("selected C=%s (dev macro-F1 %.2f)", model.C, model.dev_scores[model.C])
    return 0


def cmd_evaluate(args):
    out = _out_dir(args)
    chash = config_hash(args, [args.features, args.model])
    meta = _meta(args, chash)
    with open(args.model, encoding="utf-8") as fh:
        raw = json.load(fh)
    model = LinearModel.from_json(raw)
    ablate = frozenset(FeatureGroup(g) for g in raw.get("ablate", []))
    _, items = read_features(args.features)
    by_id = {it.id: it for it in items}
    ids = raw.get("splits", {}).get(args.split)
    if ids is None:
        raise CliError(f"model file has no {args.split!r} split")
    missing = [i for i in ids if i not in by_id]
    if missing:
        raise CliError(f"{len(missing)} {args.split} ids missing from {args.features} (e.g. {missing[0]!r})")
    vecs = [vectorize(by_id[i].mv, model.index, ablate, by_id[i].label) for i in ids]
    report = evaluate(model, vecs)
    _write_tsv(out / "eval.tsv", meta, REPORT_HEADER, [_report_rows("all" if not ablate else "ablated", report)])
    _write_json(out / "eval.json", {"_meta": meta, "split": args.split, "report": report.to_json()})
    return 0


def cmd_ablate(args):
    out = _out_dir(args)
    chash = config_hash(args, [args.features])
    meta = _meta(args, chash)
    _, items = read_features(args.features)
    tr, dv, te = _split_items(items, args.seed)
    groups = [GROUP_FLAGS[g] for g in (args.ablate or GROUP_FLAGS)]
    pairs = lambda its: [(it.mv, it.label) for it in its]
    rows = ablation_suite(pairs(tr), pairs(dv), pairs(te), groups, _c_grid(args), args.epochs,
                          args.seed, args.min_feature_count)
    _write_tsv(out / "ablation.tsv", meta, REPORT_HEADER, [_report_rows(r.name, r.report) for r in rows])
    _write_json(out / "ablation.json", {
        "_meta": meta,
        "rows": [{"name": r.name, "ablated": sorted(g.value for g in r.ablated), "C": r.model.C,
                  "report": r.report.to_json()} for r in rows],
    })
    return 0


def _filter_label(items, which):
    if which == "all":
        return items
    return [it for it in items if it.label is Label(which)]


def _stat_rows(table, column):
    rows = []
    for m in table.markers:
        s = table.stats[m, column]
        rows.append((m, MARKERS[m].value, f"{s.mean:.4f}", f"{s.sd:.4f}", s.n))
    return rows


def _significance_json(table):
    return [{"marker": m, "a": a, "b": b, **res.to_json()}
            for (m, a, b), res in sorted(table.tests.items())]


def _wide_rows(table):
    rows = []
    for m in table.markers:
        cells = [m, MARKERS[m].value]
        for c in table.columns:
            s = table.stats[m, c]
            note = table.annotation(m, c)
            cells.append(f"{s.mean:.2f} ({s.sd:.2f})" + (f" {note}" if note else ""))
        rows.append(cells)
    return rows


def _corpus_specs(specs, default_platform):
    out = {}
    for spec in specs:
        name, sep, path = spec.partition("=")
        if not sep:
            name, path = default_platform, spec
        if name in out:
            raise CliError(f"corpus name {name!r} given twice")
        out[name] = path
    return out


def cmd_freq(args):
    out = _out_dir(args)
    specs = _corpus_specs(args.corpora, args.platform)
    chash = config_hash(args, list(specs.values()))
    meta = _meta(args, chash)
    resources = _resources(args)
    columns = {}
    for name, path in specs.items():
        platform = name if name in {p.value for p in Platform} else args.platform
        items, _, _ = ingest(path, platform, args, resources)
        columns[name] = [it.mv for it in _filter_label(items, args.label)]
    table = frequency_table(columns, resources, counts=args.counts)
    for name in columns:
        _write_tsv(out / f"freq_{name}.tsv", meta, ["marker", "group", "mean", "sd", "n"], _stat_rows(table, name))
    _write_tsv(out / "freq_table.tsv", meta, ["marker", "group", *columns], _wide_rows(table))
    groups = {}
    for name, mvs in columns.items():
        if len(mvs) >= 2:
            groups[name] = [{"a": a.value, "b": b.value, **r.to_json()}
                            for (a, b), r in type_pair_tests(mvs).items()]
    across = []
    names = list(columns)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            for g in FeatureGroup:
                xa = [mv.group_present(g) for mv in columns[a]]
                xb = [mv.group_present(g) for mv in columns[b]]
                if len(xa) >= 2 and len(xb) >= 2:
                    across.append({"group": g.value, "a": a, "b": b, **welch_ttest(xa, xb).to_json()})
    _write_json(out / "freq_significance.json", {
        "_meta": meta,
        "markers": _significance_json(table),
        "type_pairs": groups,
        "groups_across_corpora": across,
    })
    return 0


def cmd_compare_genres(args):
    out = _out_dir(args)
    chash = config_hash(args, [args.corpus])
    meta = _meta(args, chash)
    resources = _resources(args)
    items, _, _ = ingest(args.corpus, args.platform, args, resources)
    items = _filter_label(items, args.label)
    by_genre = {}
    for it in items:
        if it.genre is not None:
            by_genre.setdefault(it.genre, []).append(it.mv)
    order = [g.strip() for g in args.genres.split(",")] if args.genres else sorted(by_genre)
    unknown = [g for g in order if g not in by_genre]
    if unknown:
        raise CliError(f"no utterances for genre(s) {unknown}")
    columns = {g: by_genre[g] for g in order}
    table = frequency_table(columns, resources, counts=args.counts)
    long_rows = [(g, *row) for g in order for row in _stat_rows(table, g)]
    _write_tsv(out / "genres.tsv", meta, ["genre", "marker", "group", "mean", "sd", "n"], long_rows)
    letters = [f"{g} ({chr(ord('a') + i)})" for i, g in enumerate(order)]
    _write_tsv(out / "genre_table.tsv", meta, ["marker", "group", *letters], _wide_rows(table))
    _write_json(out / "genre_significance.json", {"_meta": meta, "genres": order,
                                                  "tests": _significance_json(table)})
    return 0


# ---------------------------------------------------------------------------
# argument parsing

def _add_common(p):
    p.add_argument("--platform", choices=[x.value for x in Platform], default="twitter")
    p.add_argument("--resources", metavar="DIR", help="directory overriding bundled resource files")
    p.add_argument("--label-hashtags", help="comma-separated label hashtags (default #irony,#sarcasm,#sarcastic)")
    p.add_argument("--metaphor-annotations", metavar="TSV", help="utterance_id<TAB>0|1 sidecar")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--workers", type=int, default=1, help="extraction processes")


def _add_training(p):
    p.add_argument("features", help="feature file written by 'extract'")
    p.add_argument("--c-grid", default=",".join(repr(c) for c in DEFAULT_C_GRID))
    p.add_argument("--epochs", type=int, default=DEFAULT_EPOCHS)
    p.add_argument("--min-feature-count", type=int, default=1)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--ablate", nargs="*", choices=sorted(GROUP_FLAGS), default=None)


def build_parser():
    parser = argparse.ArgumentParser(prog="ironymarkers", description=__doc__.splitlines()[0])
    parser.add_argument("--log-level", default="WARNING")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="preprocess a corpus and write marker features")
    p.add_argument("corpus")
    _add_common(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="train the linear classifier with dev-set C selection")
    _add_training(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="score a trained model on a stored split")
    p.add_argument("features")
    p.add_argument("--model", required=True)
    p.add_argument("--split", choices=["train", "dev", "test"], default="test")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("ablate", help="retrain without each marker group")
    _add_training(p)
    p.set_defaults(func=cmd_ablate)

    helps = {"freq": "marker frequency tables with Welch t-tests across corpora",
             "compare-genres": "marker frequency tables with Welch t-tests across genres of one corpus"}
    for name, func in (("freq", cmd_freq), ("compare-genres", cmd_compare_genres)):
        p = sub.add_parser(name, help=helps[name])
        if name == "freq":
            p.add_argument("corpora", nargs="+", metavar="[NAME=]PATH",
                           help="one corpus per column; NAME twitter/reddit also sets the platform")
        else:
            p.add_argument("corpus")
            p.add_argument("--genres", help="comma-separated column order (default sorted)")
        _add_common(p)
        p.add_argument("--label", choices=["all", "I", "NI"], default="all")
        p.add_argument("--counts", action="store_true", help="use raw occurrence counts instead of presence")
        p.set_defaults(func=func)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be >= 1")
    try:
        return args.func(args)
    except (CliError, CorpusError, ResourceError, TrainingError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
