"""Command-line entry point.

Subcommands: build-db, retrieve, extract-features, train, eval, ablate, cue.
Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib.resources import files
from pathlib import Path

import numpy as np

from . import classifier, corpus, evaluation, features, report, retrieval, \
    rules, soundbank
from .errors import DataError
from .pipeline import run_pipeline, save_cue_sheet

DATA_DIR = files("soundcue") / "data"
DEFAULT_LEXICONS = str(DATA_DIR / "lexicons")
DEFAULT_DEPREL_MAP = str(DATA_DIR / "deprel_map.json")

ABLATION_MASKS = ["None", "SpecialWords", "ActionWords", "NowWords", "POS",
                  "Syntactic"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


def _rule_cfg(args) -> rules.RuleConfig:
    cfg = (rules.load_rule_config(args.rule_config)
           if getattr(args, "rule_config", None) else rules.RuleConfig())
    if args.rules == "off":
        cfg.enabled = False
    return cfg


def _load_instances(args) -> list[evaluation.Instance]:
    stories = corpus.load_stories(args.stories)
    lexicons = corpus.load_lexicons(args.lexicons)
    deprel_map = features.load_deprel_map(args.deprel_map)
    instances = []
    for sentence, trig in stories.labeled_triggers():
        x = features.extract_features(sentence, trig.start, trig.end,
                                      lexicons, deprel_map)
        instances.append(evaluation.Instance(
            features=x, label=bool(trig.label), sentence=sentence,
            trigger_start=trig.start))
    if not instances:
        raise DataError("no labeled triggers in corpus")
    return instances


def _eval_mask(args) -> tuple[str, frozenset[int]]:
    if args.preset == "paper-best":
        return "NowWords", features.mask_by_name("NowWords")
    return args.mask, features.mask_by_name(args.mask)


def cmd_build_db(args) -> int:
    sounds = soundbank.load_soundbank(args.sounds)
    embeddings = (corpus.load_embeddings(args.embeddings)
                  if args.embeddings else None)
    synonyms = None
    if args.synonyms:
        raw = json.loads(Path(args.synonyms).read_text(encoding="utf-8"))
        synonyms = {k.casefold(): list(v) for k, v in raw.items()}
    tagsets = soundbank.build_database(sounds, embeddings, synonyms,
                                       k=args.k, min_sim=args.min_sim)
    soundbank.save_tagsets(tagsets, args.out)
    print(f"wrote {len(tagsets)} tag sets to {args.out}")
    return 0


def cmd_retrieve(args) -> int:
    sounds = soundbank.load_soundbank(args.sounds)
    tagsets = soundbank.load_tagsets(args.bank)
    cfg = retrieval.RetrievalConfig(k1=args.k1, b=args.b)
    bank = retrieval.SoundBankIndex(sounds, tagsets, cfg)
    stories = corpus.load_stories(args.stories)
    triggers = []
    for sentence in stories.sentences:
        triggers.extend(retrieval.detect_triggers(sentence, bank))
    if args.out:
        retrieval.save_triggers(triggers, args.out)
    else:
        for trig in triggers:
            print(json.dumps(trig.to_record(), ensure_ascii=False))
    return 0


def cmd_extract_features(args) -> int:
    instances = _load_instances(args)
    lines = []
    for inst in instances:
        cells = [str(int(inst.label))]
        cells += [f"{v:.6f}" for v in inst.features]
        lines.append("\t".join(cells))
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _load_matrix(path) -> tuple[np.ndarray, np.ndarray]:
    rows, labels = [], []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != features.N_FEATURES + 1:
                raise DataError(
                    f"line {lineno}: expected label + "
                    f"{features.N_FEATURES} values, got {len(parts)}")
            labels.append(bool(int(parts[0])))
            rows.append([float(v) for v in parts[1:]])
    if not rows:
        raise DataError("empty feature matrix")
    return np.array(rows), np.array(labels)


def cmd_train(args) -> int:
    X, y = _load_matrix(args.features)
    hyper = classifier.Hyper(lam=args.lam, epochs=args.epochs, seed=args.seed)
    model = classifier.train(X, y, hyper)
    classifier.save_model(model, args.out)
    print(f"trained on {len(y)} instances; model written to {args.out}")
    return 0


def _run_eval(args, masks: list[str]) -> int:
    instances = _load_instances(args)
    if args.balance:
        instances = evaluation.balance_sample(instances, args.seed)
    cfg = evaluation.EvalConfig(
        k=args.k, seed=args.seed,
        rules_enabled=args.rules == "on",
        rule_cfg=_rule_cfg(args),
        hyper=classifier.Hyper(lam=args.lam, epochs=args.epochs,
                               seed=args.seed),
    )
    named = [(name, features.mask_by_name(name)) for name in masks]
    rows = evaluation.ablation_suite(instances, named, cfg)
    table = [(name, mean) for name, mean, _ in rows]
    out = Path(args.out)
    report.write_table(table, out.with_suffix(".tsv"))
    report.write_detail(rows, {
        "k": args.k, "seed": args.seed, "rules": args.rules,
        "lambda": args.lam, "epochs": args.epochs,
        "balance": args.balance, "masks": masks,
        "n_instances": len(instances),
    }, out.with_suffix(".json"))
    report.render_metrics_figure(table, out.with_suffix(".png"),
                                 title="cross-validation metrics")
    sys.stdout.write(report.format_table(table))
    return 0


def cmd_eval(args) -> int:
    name, _ = _eval_mask(args)
    return _run_eval(args, [name])


def cmd_ablate(args) -> int:
    return _run_eval(args, ABLATION_MASKS)


def cmd_cue(args) -> int:
    stories = corpus.load_stories(args.stories)
    sounds = soundbank.load_soundbank(args.sounds)
    tagsets = soundbank.load_tagsets(args.bank)
    bank = retrieval.SoundBankIndex(sounds, tagsets)
    model = classifier.load_model(args.model)
    lexicons = corpus.load_lexicons(args.lexicons)
    deprel_map = features.load_deprel_map(args.deprel_map)
    rule_cfg = _rule_cfg(args) if args.rules == "on" else None
    entries = run_pipeline(stories, bank, model, lexicons, deprel_map,
                           rule_cfg)
    if args.out:
        save_cue_sheet(entries, args.out)
    else:
        for entry in entries:
            print(json.dumps(entry.to_record(), ensure_ascii=False))
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="soundcue", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--rules", choices=["on", "off"], default="off")
    common.add_argument("--rule-config", default=None)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-db", parents=[common],
                       help="expand sound-effect tags")
    p.add_argument("--sounds", required=True)
    p.add_argument("--embeddings", default=None)
    p.add_argument("--synonyms", default=None,
                   help="JSON file mapping word -> synonym list")
    p.add_argument("--k", type=int, default=5,
                   help="embedding neighbors per tag")
    p.add_argument("--min-sim", type=float, default=0.6)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_db)

    p = sub.add_parser("retrieve", parents=[common],
                       help="detect candidate triggers")
    p.add_argument("--bank", required=True, help="expanded tag set file")
    p.add_argument("--sounds", required=True)
    p.add_argument("--stories", required=True)
    p.add_argument("--k1", type=float, default=1.2)
    p.add_argument("--b", type=float, default=0.75)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_retrieve)

    p = sub.add_parser("extract-features", parents=[common],
                       help="write the labeled feature matrix")
    p.add_argument("--stories", required=True)
    p.add_argument("--lexicons", default=DEFAULT_LEXICONS)
    p.add_argument("--deprel-map", default=DEFAULT_DEPREL_MAP)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_extract_features)

    p = sub.add_parser("train", parents=[common],
                       help="train the linear classifier")
    p.add_argument("--features", required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1e-4)
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    for name, fn in (("eval", cmd_eval), ("ablate", cmd_ablate)):
        p = sub.add_parser(name, parents=[common],
                           help="cross-validated evaluation"
                           if name == "eval" else "feature-group ablation")
        p.add_argument("--stories", required=True)
        p.add_argument("--lexicons", default=DEFAULT_LEXICONS)
        p.add_argument("--deprel-map", default=DEFAULT_DEPREL_MAP)
        p.add_argument("--k", type=int, default=5, help="CV folds")
        p.add_argument("--lambda", dest="lam", type=float, default=1e-4)
        p.add_argument("--epochs", type=int, default=100)
        p.add_argument("--balance", action=argparse.BooleanOptionalAction,
                       default=True)
        p.add_argument("--out", required=True,
                       help="output prefix (.tsv/.json/.png)")
        if name == "eval":
            p.add_argument("--mask", default="None",
                           choices=ABLATION_MASKS)
            p.add_argument("--preset", choices=["paper-best"], default=None)
        p.set_defaults(func=fn)

    p = sub.add_parser("cue", parents=[common], help="emit a cue sheet")
    p.add_argument("--stories", required=True)
    p.add_argument("--bank", required=True)
    p.add_argument("--sounds", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--lexicons", default=DEFAULT_LEXICONS)
    p.add_argument("--deprel-map", default=DEFAULT_DEPREL_MAP)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_cue)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as e:
        sys.stderr.write(f"data error: {e}\n")
        return 2
    except FileNotFoundError as e:
        sys.stderr.write(f"data error: {e}\n")
        return 2
    except Exception as e:  # anything unexpected
        sys.stderr.write(f"internal error: {e}\n")
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
