"""``grossloss`` command-line tool.

Exit codes: 0 success, 1 usage error, 2 data/schema error, 3 I/O or model
format error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import persistence, regressors
from .errors import DataError, FormatError, GrossLossError, ModelIOError
from .evaluation import compare_models, labelled_matrix, mae, rmspe, train_model
from .schema_io import (
    PREDICTION_COLUMN,
    collect_issues,
    is_blank_row,
    encode_features,
    parse_csv,
    write_csv,
)
from .synthetic import make_rings

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    def __init__(self, message, usage=None):
        super().__init__(message)
        self.usage = usage


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}", self.format_usage())


def _u64(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"{value} is not an unsigned 64-bit integer")
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} must be >= 1")
    return value


def _ratio(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"ratio {value} must lie in (0, 1)")
    return value


def _nonnegative_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not value >= 0.0:
        raise argparse.ArgumentTypeError(f"{value} must be >= 0")
    return value


def build_parser():
    parser = _Parser(prog="grossloss", description="Estimate ring gross metal loss from CAD attributes.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("validate", help="check a CSV against the ring schema")
    p.add_argument("--data", required=True, type=Path)

    p = sub.add_parser("train", help="fit one method and save it")
    p.add_argument("--data", required=True, type=Path)
    p.add_argument("--model-out", required=True, type=Path)
    p.add_argument("--method", required=True, choices=list(regressors.METHODS))
    p.add_argument("--seed", required=True, type=_u64)
    p.add_argument("--ratio", type=_ratio, default=0.8)
    p.add_argument("--trees", type=_positive_int, help="forest size (forest only)")
    k = p.add_mutually_exclusive_group()
    k.add_argument("--k", type=_positive_int, help="fixed K (knn only)")
    k.add_argument("--k-auto", action="store_true", help="choose K by leave-one-out (knn default)")
    p.add_argument("--ridge-eps", type=_nonnegative_float, help="ridge fallback (linear only)")

    p = sub.add_parser("compare", help="fit all four methods on one split")
    p.add_argument("--data", required=True, type=Path)
    p.add_argument("--seed", required=True, type=_u64)
    p.add_argument("--ratio", type=_ratio, default=0.8)
    p.add_argument("--out", type=Path, help="write the JSON report here")

    p = sub.add_parser("predict", help="predict gross loss for new rings")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("evaluate", help="score a saved model on labelled data")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--data", required=True, type=Path)

    p = sub.add_parser("generate", help="write a synthetic ring dataset")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--rows", type=_positive_int, default=26)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--noise", type=_nonnegative_float, default=0.3)
    p.add_argument("--unlabelled", action="store_true", help="omit gross_loss_pct")
    return parser


def _read_bytes(path):
    try:
        return path.read_bytes()
    except OSError as exc:
        raise ModelIOError(f"cannot read {path}: {exc}") from exc


def _load_dataset(path, **kwargs):
    try:
        return parse_csv(_read_bytes(path), source_name=str(path), **kwargs)
    except DataError as exc:
        exc.args = (f"{path}: {exc}",)
        raise


def _method_config(args):
    kind = args.method
    if args.trees is not None and kind != "forest":
        raise UsageError("--trees only applies to --method forest")
    if (args.k is not None or args.k_auto) and kind != "knn":
        raise UsageError("--k/--k-auto only apply to --method knn")
    if args.ridge_eps is not None and kind != "linear":
        raise UsageError("--ridge-eps only applies to --method linear")
    if kind == "forest" and args.trees is not None:
        return regressors.ForestConfig(n_trees=args.trees)
    if kind == "knn":
        return regressors.KnnConfig(k=args.k)
    if kind == "linear" and args.ridge_eps is not None:
        return regressors.LinearConfig(ridge_eps=args.ridge_eps)
    return regressors.default_config(kind)


def cmd_validate(args, out):
    raw = _read_bytes(args.data)
    try:
        records, issues = collect_issues(raw)
    except DataError as exc:
        exc.args = (f"{args.data}: {exc}",)
        raise
    for _, message in issues:
        print(f"{args.data}: {message}", file=out)
    if issues:
        print(f"{args.data}: {len(issues)} problem(s) found", file=out)
        return EXIT_DATA
    labelled = sum(r.gross_loss is not None for r in records)
    print(f"{args.data}: OK, {len(records)} records ({labelled} labelled)", file=out)
    return EXIT_OK


def cmd_train(args, out):
    config = _method_config(args)
    ds = _load_dataset(args.data, require_target=True)
    X, y = labelled_matrix(ds)
    model, test_mae, test_rmspe, data = train_model(X, y, config, args.ratio, args.seed)
    persistence.save_model(model, args.model_out)
    print(f"method: {model.method_name}", file=out)
    if isinstance(model.model, regressors.KnnModel):
        print(f"k: {model.model.k}", file=out)
    print(f"rows: {len(data.split.train)} train / {len(data.split.test)} test", file=out)
    print(f"test MAE: {test_mae!r}", file=out)
    print(f"test RMSPE: {test_rmspe!r}", file=out)
    print(f"model written to {args.model_out}", file=out)
    return EXIT_OK


def cmd_compare(args, out):
    ds = _load_dataset(args.data, require_target=True)
    report = compare_models(ds, regressors.default_methods(), args.ratio, args.seed)
    print(persistence.format_report_table(report), file=out)
    if args.out is not None:
        persistence.save_report(report, args.out)
        print(f"report written to {args.out}", file=out)
    return EXIT_OK


def cmd_predict(args, out):
    model = persistence.load_model(args.model)
    raw = _read_bytes(args.input)
    ds = _load_dataset(args.input, ignore_target=True)
    if len(ds) == 0:
        raise DataError(f"{args.input}: no records to predict")
    X, _ = encode_features(ds)
    pred = model.predict_encoded(X)

    rows = list(csv.reader(io.StringIO(raw.decode("utf-8-sig"), newline="")))
    header, body = rows[0], [r for r in rows[1:] if not is_blank_row(r)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header + [PREDICTION_COLUMN])
    for cells, value in zip(body, pred):
        writer.writerow(cells + [repr(float(value))])
    persistence.atomic_write_text(args.out, buf.getvalue())
    print(f"{len(body)} predictions written to {args.out}", file=out)
    return EXIT_OK


def cmd_evaluate(args, out):
    model = persistence.load_model(args.model)
    ds = _load_dataset(args.data, require_target=True)
    X, y = labelled_matrix(ds)
    pred = model.predict_encoded(X)
    print(f"method: {model.method_name}", file=out)
    print(f"rows: {len(y)}", file=out)
    print(f"MAE: {mae(y, pred)!r}", file=out)
    print(f"RMSPE: {rmspe(y, pred)!r}", file=out)
    return EXIT_OK


def cmd_generate(args, out):
    ds = make_rings(args.rows, args.seed, args.noise, labelled=not args.unlabelled)
    persistence.atomic_write_text(args.out, write_csv(ds))
    print(f"{len(ds)} synthetic rings written to {args.out}", file=out)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "train": cmd_train,
    "compare": cmd_compare,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "generate": cmd_generate,
}


def run_command(argv=None, out=None, err=None) -> int:
    """Run one invocation and return its exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(exc.usage or parser.format_usage(), end="", file=err)
        print(exc, file=err)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (ModelIOError, FormatError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_IO
    except GrossLossError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DATA


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
