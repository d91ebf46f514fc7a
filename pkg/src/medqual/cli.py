"""Command-line entry points: extract, sample, rank, train, evaluate, classify.

Every option can also come from a JSON ``--config`` file whose keys are the
option names with dashes replaced by underscores; explicit flags win.
Exit status is 0 on success, 1 on usage errors and 2 on data errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import QUALITY_CLASSES, CorpusError, read_corpus
from .dataset import Dataset
from .dictionary import DictionaryError, load_dictionary
from .features import (
    FEATURE_NAMES,
    VARIANTS,
    FeatureFileError,
    extract_all,
    read_feature_csv,
    write_feature_csv,
)
from .learn import (
    EvaluationError,
    ForestConfig,
    ForestConfigError,
    ForestModel,
    ModelFormatError,
    cross_validate,
    rank_features,
    report_document,
    train_forest,
)
from .learn.forest import encode_vector
from .sampling import (
    BENCHMARK_SMOTE_PERCENT,
    BENCHMARK_UNDERSAMPLE_TARGETS,
    SamplingError,
    SmoteConfig,
    rebalance,
    undersample,
)
from .text import load_resources
from .wikitext import DuplicateTitleError, TitleIndex, build_title_index

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

DATA_ERRORS = (
    CorpusError,
    DictionaryError,
    DuplicateTitleError,
    EvaluationError,
    FeatureFileError,
    ModelFormatError,
    SamplingError,
    OSError,
    UnicodeDecodeError,
)

# Built-in values for options left unset by both flags and config.
DEFAULTS = {
    "seed": 0,
    "jobs": 1,
    "smote_k": 5,
    "trees": 100,
    "min_leaf": 1,
    "folds": 10,
    "undersample": [],
    "smote": [],
    "variant": None,
    "benchmark_sampling": False,
    "smote_in_folds": False,
}


INT_OPTIONS = ("seed", "jobs", "smote_k", "trees", "min_leaf", "folds", "max_depth", "features_per_split")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def parse_class_assignments(items: Sequence[str] | Mapping[str, int], what: str) -> dict[str, int]:
    """``["GA=40", "FA=180"]`` (or an already-built mapping) to a class map."""
    if isinstance(items, Mapping):
        pairs = [(str(k), v) for k, v in items.items()]
    else:
        pairs = []
        for item in items:
            cls, sep, value = str(item).partition("=")
            if not sep:
                raise UsageError(f"{what}: expected CLASS=N, got {item!r}")
            pairs.append((cls.strip(), value.strip()))
    out = {}
    for cls, value in pairs:
        if cls not in QUALITY_CLASSES:
            raise UsageError(f"{what}: unknown class {cls!r}")
        try:
            n = int(value)
        except (TypeError, ValueError):
            raise UsageError(f"{what}: {cls} needs an integer, got {value!r}") from None
        if n < 0:
            raise UsageError(f"{what}: {cls} must be >= 0, got {n}")
        out[cls] = n
    return out


def _add_resource_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("linguistic resources (bundled copies by default)")
    g.add_argument("--dictionary", help="surface<TAB>semantic_group file")
    g.add_argument("--lemmas", help="surface<TAB>lemma file")
    g.add_argument("--stopwords", help="one stopword per line")
    g.add_argument("--function-words", help="one function word per line")


def _add_input_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("input (one of)")
    g.add_argument("--corpus", help="JSON Lines corpus; features are extracted first")
    g.add_argument("--features", help="feature CSV written by 'extract' or 'sample'")
    _add_resource_options(p)


def _add_sampling_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("rebalancing")
    g.add_argument("--undersample", nargs="+", metavar="CLASS=N", default=None, help="keep N random rows of CLASS")
    g.add_argument("--smote", nargs="+", metavar="CLASS=PERCENT", default=None, help="add PERCENT%% SMOTE rows to CLASS")
    g.add_argument("--smote-k", type=_positive_int, default=None, help="SMOTE neighbours (default 5)")
    g.add_argument(
        "--benchmark-sampling",
        action="store_true",
        default=None,
        help="use the benchmark targets (1015 each for Stub/Start/C/B; GA +40%%, FA +180%%) "
        "for classes not given explicitly",
    )


def _add_forest_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("random forest")
    g.add_argument("--trees", type=_positive_int, default=None, help="number of trees (default 100)")
    g.add_argument("--features-per-split", type=_positive_int, default=None, help="default floor(sqrt(F))")
    g.add_argument("--max-depth", type=_nonneg_int, default=None, help="default unlimited")
    g.add_argument("--min-leaf", type=_positive_int, default=None, help="default 1")


def _add_variant_option(p: argparse.ArgumentParser, multiple: bool) -> None:
    p.add_argument(
        "--variant",
        choices=list(VARIANTS),
        action="append" if multiple else "store",
        default=None,
        help="feature subset" + (" (repeatable; default: all three)" if multiple else " (default FullMedicalDomain)"),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="medqual", description="Quality classification of medical wiki articles.")
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file of option values; flags take precedence")
    common.add_argument("--seed", type=_nonneg_int, default=None, help="random seed (default 0)")
    common.add_argument("--jobs", type=_positive_int, default=None, help="worker threads (default 1)")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("extract", parents=[common], help="corpus to feature CSV")
    p.add_argument("--corpus", help="JSON Lines corpus")
    p.add_argument("--out", help="output CSV (default stdout)")
    _add_resource_options(p)

    p = sub.add_parser("sample", parents=[common], help="undersample and SMOTE a feature set")
    _add_input_options(p)
    _add_sampling_options(p)
    p.add_argument("--out", help="output CSV with a synthetic column (default stdout)")

    p = sub.add_parser("rank", parents=[common], help="information gain of every feature")
    _add_input_options(p)
    p.add_argument("--out", help="output TSV (default stdout)")

    p = sub.add_parser("train", parents=[common], help="fit a forest and save it")
    _add_input_options(p)
    _add_sampling_options(p)
    _add_forest_options(p)
    _add_variant_option(p, multiple=False)
    p.add_argument("--model-out", help="model file to write")

    p = sub.add_parser("evaluate", parents=[common], help="stratified cross-validation report")
    _add_input_options(p)
    _add_sampling_options(p)
    p.add_argument(
        "--smote-in-folds",
        action="store_true",
        default=None,
        help="apply SMOTE to each training split instead of before cross-validation",
    )
    _add_forest_options(p)
    _add_variant_option(p, multiple=True)
    p.add_argument("--folds", type=_positive_int, default=None, help="default 10")
    p.add_argument("--report-out", help="JSON report (default stdout)")

    p = sub.add_parser("classify", parents=[common], help="predict classes with a saved model")
    p.add_argument("--model", help="model written by 'train'")
    p.add_argument("--corpus", help="JSON Lines corpus; labels are optional")
    p.add_argument("--out", help="predictions CSV (default stdout)")
    _add_resource_options(p)
    return parser


def merge_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> argparse.Namespace:
    """Fill options the user did not pass from the config file, then defaults."""
    values = vars(args)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                config = json.load(fh)
        except OSError as exc:
            raise DataError(f"cannot read config {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {args.config} is not valid JSON: {exc}") from exc
        if not isinstance(config, dict):
            raise UsageError(f"config {args.config} must hold a JSON object")
        unknown = sorted(set(config) - set(values) - {"command", "config"})
        if unknown:
            raise UsageError(f"unknown config keys for '{args.command}': {', '.join(unknown)}")
        for key, value in config.items():
            if key in ("command", "config"):
                continue
            if values.get(key) is None:
                values[key] = value
    for key, value in DEFAULTS.items():
        if key in values and values[key] is None:
            values[key] = value
    for key in INT_OPTIONS:
        value = values.get(key)
        if value is not None and (isinstance(value, bool) or not isinstance(value, int)):
            raise UsageError(f"{key} must be an integer, got {value!r}")
    variant = values.get("variant")
    if variant is not None:
        names = [variant] if isinstance(variant, str) else list(variant)
        bad = [v for v in names if v not in VARIANTS]
        if bad:
            raise UsageError(f"unknown variant {bad[0]!r}; choose from {', '.join(VARIANTS)}")
        if args.command == "train" and len(names) != 1:
            raise UsageError("train takes a single variant")
        values["variant"] = names[0] if args.command == "train" else names
    return argparse.Namespace(**values)


def _require(args, *names: str) -> None:
    for name in names:
        if not getattr(args, name, None):
            raise UsageError(f"--{name.replace('_', '-')} is required")


def _check_inputs(args, *names: str) -> None:
    for name in names:
        path = getattr(args, name, None)
        if path and not os.path.isfile(path):
            raise DataError(f"--{name.replace('_', '-')}: no such file: {path}")
        if path and not os.access(path, os.R_OK):
            raise DataError(f"--{name.replace('_', '-')}: not readable: {path}")


def _check_outputs(args, *names: str) -> None:
    for name in names:
        path = getattr(args, name, None)
        if path and path != "-":
            parent = Path(path).resolve().parent
            if not parent.is_dir():
                raise DataError(f"--{name.replace('_', '-')}: directory does not exist: {parent}")


def write_output(path: str | None, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and an atomic rename."""
    if not path or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.resolve().parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


RESOURCE_OPTIONS = ("dictionary", "lemmas", "stopwords", "function_words")


def _load_resources(args):
    resources = load_resources(args.lemmas, args.stopwords, args.function_words)
    dictionary = load_dictionary(args.dictionary, resources)
    if dictionary.skipped_malformed or dictionary.skipped_empty:
        print(
            f"dictionary: {len(dictionary)} entries, skipped {dictionary.skipped_malformed} malformed "
            f"and {dictionary.skipped_empty} without content words",
            file=sys.stderr,
        )
    return resources, dictionary


def _read_articles(path: str, require_label: bool = True):
    articles, skipped = read_corpus(path, require_label=require_label)
    print(f"parsed {len(articles)} articles, skipped {skipped} malformed lines", file=sys.stderr)
    return articles


def _load_dataset(args) -> tuple[Dataset, list[str]]:
    """Dataset from ``--corpus`` or ``--features``, plus the real article titles."""
    if bool(args.corpus) == bool(args.features):
        raise UsageError("give exactly one of --corpus and --features")
    if args.corpus:
        articles = _read_articles(args.corpus)
        resources, dictionary = _load_resources(args)
        vectors = extract_all(articles, build_title_index(articles), dictionary, resources, args.jobs)
        flags = [False] * len(vectors)
    else:
        vectors, flags = read_feature_csv(args.features)
        print(f"read {len(vectors)} feature rows", file=sys.stderr)
    if any(v.label is None for v in vectors):
        raise DataError("every row needs a quality label")
    titles = [v.title for v, synthetic in zip(vectors, flags) if not synthetic]
    return Dataset.from_vectors(vectors, flags), titles


def _sampling_plan(args) -> tuple[dict[str, int], dict[str, int]]:
    targets = parse_class_assignments(args.undersample, "--undersample")
    percent = parse_class_assignments(args.smote, "--smote")
    if args.benchmark_sampling:
        targets = {**BENCHMARK_UNDERSAMPLE_TARGETS, **targets}
        percent = {**BENCHMARK_SMOTE_PERCENT, **percent}
    return targets, percent


def _forest_config(args) -> ForestConfig:
    return ForestConfig(
        num_trees=args.trees,
        features_per_split=args.features_per_split,
        min_leaf=args.min_leaf,
        max_depth=args.max_depth,
        seed=args.seed,
        n_jobs=args.jobs,
    )


def _csv_text(vectors, synthetic=None) -> str:
    buf = io.StringIO()
    write_feature_csv(vectors, buf, synthetic)
    return buf.getvalue()


def cmd_extract(args) -> int:
    _require(args, "corpus")
    _check_inputs(args, "corpus", *RESOURCE_OPTIONS)
    _check_outputs(args, "out")
    articles = _read_articles(args.corpus)
    resources, dictionary = _load_resources(args)
    vectors = extract_all(articles, build_title_index(articles), dictionary, resources, args.jobs)
    write_output(args.out, _csv_text(vectors))
    return EXIT_OK


def cmd_sample(args) -> int:
    _check_inputs(args, "corpus", "features", *RESOURCE_OPTIONS)
    _check_outputs(args, "out")
    targets, percent = _sampling_plan(args)
    data, _ = _load_dataset(args)
    before = data.class_counts
    data = rebalance(data, targets, SmoteConfig(percent, args.smote_k, args.seed), args.seed)
    after = data.class_counts
    print("class counts: " + ", ".join(f"{c} {before[c]}->{after[c]}" for c in QUALITY_CLASSES), file=sys.stderr)
    write_output(args.out, _csv_text(data.to_vectors(), data.synthetic))
    return EXIT_OK


def cmd_rank(args) -> int:
    _check_inputs(args, "corpus", "features", *RESOURCE_OPTIONS)
    _check_outputs(args, "out")
    data, _ = _load_dataset(args)
    lines = ["feature\tinfo_gain"] + [f"{name}\t{gain:.6f}" for name, gain in rank_features(data)]
    write_output(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_train(args) -> int:
    _require(args, "model_out")
    _check_inputs(args, "corpus", "features", *RESOURCE_OPTIONS)
    _check_outputs(args, "model_out")
    variant = args.variant or "FullMedicalDomain"
    cfg = _forest_config(args)
    targets, percent = _sampling_plan(args)
    data, titles = _load_dataset(args)
    data = rebalance(data, targets, SmoteConfig(percent, args.smote_k, args.seed), args.seed)
    model = train_forest(data.select(VARIANTS[variant]), cfg)
    model.metadata = {"variant": variant, "title_index": sorted(set(titles)), "training_rows": len(data)}
    write_output(args.model_out, model.to_json() + "\n")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    _check_inputs(args, "corpus", "features", *RESOURCE_OPTIONS)
    _check_outputs(args, "report_out")
    variants = list(dict.fromkeys(args.variant or VARIANTS))
    cfg = _forest_config(args)
    targets, percent = _sampling_plan(args)
    data, _ = _load_dataset(args)
    smote_cfg = SmoteConfig(percent, args.smote_k, args.seed)
    if args.smote_in_folds:
        data = undersample(data, targets, args.seed)
        fold_smote = smote_cfg
    else:
        data = rebalance(data, targets, smote_cfg, args.seed)
        fold_smote = None
    reports = {}
    for v in variants:
        reports[v] = cross_validate(data.select(VARIANTS[v]), cfg, args.folds, args.seed, fold_smote, v)
        print(f"{v}: macro F {reports[v].macro_f:.3f}", file=sys.stderr)
    write_output(args.report_out, report_document(reports))
    return EXIT_OK


def cmd_classify(args) -> int:
    _require(args, "model", "corpus")
    _check_inputs(args, "model", "corpus", *RESOURCE_OPTIONS)
    _check_outputs(args, "out")
    with open(args.model, encoding="utf-8") as fh:
        model = ForestModel.from_json(fh.read())
    unknown = [n for n in model.feature_names if n not in FEATURE_NAMES]
    if unknown or tuple(model.class_list) != QUALITY_CLASSES:
        raise ModelFormatError(f"model schema does not match this feature set: {unknown or model.class_list}")
    titles = model.metadata.get("title_index")
    if not isinstance(titles, list):
        raise ModelFormatError("model has no stored title index")
    articles = _read_articles(args.corpus, require_label=False)
    resources, dictionary = _load_resources(args)
    vectors = extract_all(articles, TitleIndex(titles), dictionary, resources, args.jobs)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["title", "predicted_class"] + [f"p_{c}" for c in model.class_list])
    if vectors:
        X = [encode_vector(v, model.feature_names) for v in vectors]
        probs = model.predict_proba(X)
        for v, row in zip(vectors, probs):
            best = model.class_list[int(row.argmax())]
            writer.writerow([v.title, best] + [repr(float(p)) for p in row])
    write_output(args.out, buf.getvalue())
    return EXIT_OK


COMMANDS = {
    "extract": cmd_extract,
    "sample": cmd_sample,
    "rank": cmd_rank,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "classify": cmd_classify,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help and argument errors; keep main() usable as a function
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        args = merge_config(args, parser)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"medqual {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ForestConfigError as exc:
        print(f"medqual {args.command}: invalid forest settings: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"medqual {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DATA_ERRORS as exc:
        print(f"medqual {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
