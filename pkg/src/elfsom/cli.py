"""Command-line interface: ``elfsom <command> ...``.

Exit status is 0 on success, 1 on a usage error and 2 on a data error.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .binning import equal_frequency_bins, equal_width_bins
from .errors import DataError, InvalidConfig, NotOneDimensional
from .ingest import (
    MeasurementPosition,
    build_all_datasets,
    build_dataset,
    parse_spectrum_csv,
    summarize_adapters,
)
from .plot import emit_plot_data, write_plot_data
from .report import (
    DEFAULT_LIMIT_UT,
    FORMATS,
    build_level_report,
    check_report,
    levels_from_labels,
    render_report,
    render_summary,
)
from .sample import load_sample
from .som import SomConfig, dump_model, load_model, train

SEED_ENV = "SOM_EMISSION_SEED"
EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _position(token: str) -> MeasurementPosition:
    try:
        return MeasurementPosition.parse(token)
    except ValueError:
        choices = "|".join(p.value for p in MeasurementPosition)
        raise argparse.ArgumentTypeError(f"invalid position {token!r} (choose {choices})")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    try:
        seed = int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None
    if seed < 0:
        raise UsageError(f"{SEED_ENV} must be non-negative")
    return seed


def _read_samples(path: str):
    try:
        with open(path, "rb") as fh:
            content = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    return parse_spectrum_csv(content)


def _emit(data: bytes, out: Optional[str]) -> None:
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _add_som_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--clusters", type=int, default=5, help="output neurons (default 5)")
    p.add_argument("--epochs", type=int, default=None,
                   help="presentations (default max(100 x instances, 1000))")
    p.add_argument("--seed", type=int, default=None, help=f"random seed (fallback ${SEED_ENV}, then 0)")
    p.add_argument("--ordering-steps", type=int, default=100)
    p.add_argument("--radius", type=int, default=3, help="initial neighbourhood radius")
    p.add_argument("--eta-start", type=float, default=0.5)
    p.add_argument("--eta-floor", type=float, default=0.01)
    p.add_argument("--init", choices=("range", "small"), default="range")
    p.add_argument("--kernel", choices=("flat", "gaussian"), default="flat")


def _config(args) -> SomConfig:
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        return SomConfig(
            k=args.clusters,
            n=1,
            epochs=args.epochs,
            ordering_steps=args.ordering_steps,
            initial_radius=args.radius,
            eta_start=args.eta_start,
            eta_floor=args.eta_floor,
            seed=seed,
            init=args.init,
            kernel=args.kernel,
        )
    except InvalidConfig as exc:
        raise UsageError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="elfsom", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"elfsom {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="parse a measurement CSV and check it")
    p.add_argument("csv")

    p = sub.add_parser("train", help="train a network on one position")
    p.add_argument("csv")
    p.add_argument("--position", type=_position, required=True)
    p.add_argument("--model", help="output model file (default: stdout)")
    _add_som_flags(p)

    p = sub.add_parser("report", help="level report for one position from a trained model")
    p.add_argument("csv")
    p.add_argument("--position", type=_position, required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--limit", type=float, default=DEFAULT_LIMIT_UT, help="safety limit in µT")
    p.add_argument("--format", choices=FORMATS, default="markdown")
    p.add_argument("--out")

    p = sub.add_parser("baseline", help="equal-width / equal-frequency binning of one position")
    p.add_argument("csv")
    p.add_argument("--position", type=_position, required=True)
    p.add_argument("--method", choices=("width", "frequency"), required=True)
    p.add_argument("--bins", type=int, default=5)
    p.add_argument("--limit", type=float, default=DEFAULT_LIMIT_UT)
    p.add_argument("--format", choices=FORMATS, default="markdown")
    p.add_argument("--out")

    p = sub.add_parser("plot", help="write spectrum series for two positions and their difference")
    p.add_argument("csv")
    p.add_argument("--adapter", required=True)
    p.add_argument("--pos-a", type=_position, required=True)
    p.add_argument("--pos-b", type=_position, required=True)
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("demo", help="run the bundled synthetic sample end to end")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--limit", type=float, default=DEFAULT_LIMIT_UT)
    p.add_argument("--format", choices=FORMATS, default="markdown")
    return parser


def cmd_validate(args) -> int:
    samples = _read_samples(args.csv)
    datasets = build_all_datasets(samples)
    for summary in summarize_adapters(samples):
        for pos, stat in summary.sides.items():
            if not stat.b_max >= stat.b_mean >= 0:
                raise DataError(f"{summary.adapter_id}/{pos}: inconsistent mean/max")
    print(f"{args.csv}: {len(samples)} samples OK")
    for pos, ds in datasets.items():
        lo, hi = ds.frequency_band
        print(f"  {pos.value:8s} {len(ds):5d} instances, {len(ds.adapters)} adapters, {lo:g}-{hi:g} Hz")
    return EXIT_OK


def cmd_train(args) -> int:
    config = _config(args)
    dataset = build_dataset(_read_samples(args.csv), args.position)
    network, trace = train(dataset, config)
    _emit(dump_model(network, trace.config).encode("utf-8"), args.model)
    print(
        f"trained {trace.presentations} presentations: "
        f"qe {trace.qe_initial:.6g} -> {trace.qe_final:.6g}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_report(args) -> int:
    dataset = build_dataset(_read_samples(args.csv), args.position)
    try:
        network, _ = load_model(args.model)
    except OSError as exc:
        raise DataError(f"cannot read {args.model}: {exc.strerror}") from None
    if network.n != 1:
        raise DataError(f"model {args.model} has {network.n} inputs, expected 1")
    report = build_level_report(dataset, network, args.limit)
    _emit(render_report(report, args.format), args.out)
    return EXIT_OK


def cmd_baseline(args) -> int:
    if args.bins < 1:
        raise UsageError("--bins must be >= 1")
    dataset = build_dataset(_read_samples(args.csv), args.position)
    values = [i.b_mean for i in dataset.instances]
    binner = equal_width_bins if args.method == "width" else equal_frequency_bins
    bins = binner(values, args.bins)
    method = "equal-width" if args.method == "width" else "equal-frequency"
    report = levels_from_labels(dataset, bins.labels, bins.n_bins, args.limit, method=method)
    cuts = ", ".join(repr(b) for b in bins.boundaries)
    print(f"{method} cut points [µT]: {cuts or '(none)'}", file=sys.stderr)
    _emit(render_report(report, args.format), args.out)
    return EXIT_OK


def cmd_plot(args) -> int:
    samples = _read_samples(args.csv)
    plot = emit_plot_data(samples, args.adapter, (args.pos_a, args.pos_b))
    for path in write_plot_data(plot, args.out_dir):
        print(path)
    return EXIT_OK


def cmd_demo(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    samples = load_sample()
    chunks = [
        b"# Synthetic demonstration sample (not measured data)\n\n",
        render_summary(summarize_adapters(samples), args.limit).encode("utf-8"),
    ]
    for pos, dataset in build_all_datasets(samples).items():
        network, _ = train(dataset, SomConfig(seed=seed))
        report = build_level_report(dataset, network, args.limit)
        problems = check_report(report, len(dataset))
        if problems:
            raise DataError(f"{pos}: " + "; ".join(problems))
        chunks.append(b"\n")
        chunks.append(render_report(report, args.format))
    _emit(b"".join(chunks), None)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "train": cmd_train,
    "report": cmd_report,
    "baseline": cmd_baseline,
    "plot": cmd_plot,
    "demo": cmd_demo,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; returns the exit status."""
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, NotOneDimensional) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    try:
        code = run()
    except BrokenPipeError:
        # downstream closed the pipe (e.g. `| head`)
        sys.stderr.close()
        code = EXIT_OK
    sys.exit(code)


if __name__ == "__main__":
    main()
