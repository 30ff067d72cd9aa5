"""
Batch command line surface. Every command reads and writes plain files
(SQuAD JSON, example records one per line, text embeddings, JSON, CSV), so
commands compose without hidden state.

Exit codes: 0 success, 1 usage error, 2 data error.
"""
import argparse
import logging
import sys

from qareader.config import ConfigError, PipelineConfig, open_config
from qareader.corpus import (
    DatasetParseError,
    ingest,
    open_dataset,
    read_examples,
    write_examples,
)
from qareader.embeddings import (
    DimensionMismatchError,
    EmbeddingFormatError,
    build_vocab,
    load_table,
    oov_join,
    write_table,
)
from qareader.metrics import (
    MetricError,
    load_predictions,
    score_set,
    write_predictions,
)
from qareader.models import SummaryRecord
from qareader.reader.functional import ShapeError
from qareader.reader.params import (
    WeightsFormatError,
    init_params,
    load_params,
    save_params,
)
from qareader.reader.pipeline import Reader, predictions_to_dict
from qareader.summarizer import (
    EmptySentenceError,
    KeySentenceError,
    apply_summary,
    retain_curve_frame,
    retain_rate,
    summarize,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

DATA_ERRORS = (
    DatasetParseError,
    EmbeddingFormatError,
    DimensionMismatchError,
    EmptySentenceError,
    KeySentenceError,
    ShapeError,
    WeightsFormatError,
    MetricError,
    OSError,
    ValueError,
)


class UsageError(Exception):
    def __init__(self, message):
        super().__init__(message)
        self.message = message


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _table_for(examples, table_path, config, verbose=False):
    """Loads only the vectors the examples can use, in the configured width"""

    table = load_table(table_path, restrict_to=build_vocab(examples), verbose=verbose)

    if table.dim != config.embedding_dim:
        raise DimensionMismatchError(
            f"Table [{table_path}] has dimension {table.dim}, "
            f"config expects {config.embedding_dim}"
        )

    return table


def cmd_ingest(dataset_path, out_path, config):
    dataset = open_dataset(dataset_path)
    examples, report = ingest(
        dataset,
        doc_cap=config.doc_cap if config.truncate else None,
        question_cap=config.question_cap if config.truncate else None,
    )
    count = write_examples(examples, out_path)

    counts = report.as_dict()
    print(
        f"parsed={counts['parsed']} aligned={counts['aligned']} "
        f"excluded={counts['excluded']} written={count}"
    )

    return count, report


def cmd_oov(examples_path, base_path, external_path, out_path, report_path=None,
            on_bad_line="error", verbose=False):
    vocab = build_vocab(read_examples(examples_path))
    table = load_table(base_path, verbose=verbose)
    augmented, report = oov_join(
        vocab, table, external_path, on_bad_line=on_bad_line, verbose=verbose
    )
    write_table(augmented, out_path)

    document = report.model_dump_json(indent=2)
    if report_path:
        with open(report_path, "w", encoding="utf8") as out:
            out.write(document + "\n")

    print(document)
    return report


def cmd_retain(examples_path, table_path, config, out_path=None, verbose=False):
    examples = list(read_examples(examples_path))
    table = _table_for(examples, table_path, config, verbose)

    points = []
    for mode in config.pooling_modes:
        points.extend(retain_rate(examples, table, mode, config.budgets, verbose))

    frame = retain_curve_frame(points)
    if out_path:
        frame.to_csv(out_path, index=False)
    else:
        print(frame.to_csv(index=False), end="")

    return frame


def cmd_summarize(examples_path, table_path, out_path, config, examples_out=None):
    """
    Writes one SummaryRecord per example. With `examples_out`, also writes
    each example restricted to its window; examples whose gold answers all
    fall outside the window are left out.
    """

    examples = list(read_examples(examples_path))
    table = _table_for(examples, table_path, config)
    windowed = []

    with open(out_path, "w", encoding="utf8") as out:
        for example in examples:
            summary = summarize(example, table, config.pooling, config.summary_budget)
            restricted = apply_summary(example, summary)
            if restricted is not None:
                windowed.append(restricted)

            record = SummaryRecord(
                id=example.id,
                window=summary.window,
                key_sentence_index=summary.key_sentence_index,
                similarity=summary.similarity,
                budget=summary.budget,
                text=example.text(*summary.window),
            )
            out.write(record.model_dump_json() + "\n")

    if examples_out:
        write_examples(windowed, examples_out)
        print(f"summarized={len(examples)} windowed={len(windowed)}")
    else:
        print(f"summarized={len(examples)}")

    return len(examples)


def _seeded_params(config):
    return init_params(
        embedding_dim=config.embedding_dim,
        hidden_size=config.hidden_size,
        pointer_input_dim=config.pointer_input_dim,
        seed=config.seed,
        sentinel=config.sentinel,
    )


def cmd_init_weights(out_path, config):
    params = _seeded_params(config)
    save_params(params, out_path)
    logger.info(f"Wrote weights {params.dims()} to {out_path}")
    return params


def cmd_encode(examples_path, table_path, out_path, config, weights_path=None,
               verbose=False):
    examples = list(read_examples(examples_path))
    table = _table_for(examples, table_path, config, verbose)

    if weights_path:
        logger.info(f"Loading weights from {weights_path}")
        params = load_params(weights_path)
    else:
        logger.info(f"Initializing weights with seed {config.seed}")
        params = _seeded_params(config)

    reader = Reader(table, params, config)
    predictions = predictions_to_dict(reader.predict_all(examples))
    write_predictions(predictions, out_path)

    print(f"predicted={len(predictions)}")
    return predictions


def cmd_score(predictions_path, examples_path, out_path=None):
    predictions = load_predictions(predictions_path)
    report = score_set(predictions, read_examples(examples_path))

    if out_path:
        with open(out_path, "w", encoding="utf8") as out:
            out.write(report.model_dump_json(indent=2) + "\n")

    print(report.summary_line())
    return report


def _budgets(value):
    try:
        return [int(b) for b in value.split(",") if b.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid budget list [{value}]")


def build_parser():
    parser = ArgumentParser(
        prog="qareader",
        description="Summary-attentive reader preprocessing, forward pass and scoring",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("--progress", action="store_true", help="show progress bars")
    parser.add_argument("--config", help="YAML configuration file")

    config_flags = ArgumentParser(add_help=False)
    config_flags.add_argument("--embedding-dim", type=int, dest="embedding_dim")
    config_flags.add_argument("--hidden-size", type=int, dest="hidden_size")
    config_flags.add_argument("--pooling", choices=["max", "mean"])
    config_flags.add_argument("--budgets", type=_budgets)
    config_flags.add_argument("--max-span-len", type=int, dest="max_span_len")
    config_flags.add_argument("--seed", type=int)
    config_flags.add_argument("--model", choices=["coattention", "match_lstm"])
    config_flags.add_argument(
        "--sentinel", action="store_const", const=True, default=None
    )
    config_flags.add_argument(
        "--no-fusion", action="store_const", const=False, default=None, dest="fusion"
    )

    commands = parser.add_subparsers(dest="command", required=True)

    ingest_cmd = commands.add_parser("ingest", parents=[config_flags])
    ingest_cmd.add_argument("dataset")
    ingest_cmd.add_argument("out")
    ingest_cmd.add_argument(
        "--truncate", action="store_const", const=True, default=None
    )
    ingest_cmd.add_argument(
        "--doc-cap", type=int, dest="doc_cap", help="implies --truncate"
    )
    ingest_cmd.add_argument(
        "--question-cap", type=int, dest="question_cap", help="implies --truncate"
    )

    oov_cmd = commands.add_parser("oov")
    oov_cmd.add_argument("examples")
    oov_cmd.add_argument("base_table")
    oov_cmd.add_argument("external_table")
    oov_cmd.add_argument("out")
    oov_cmd.add_argument("--report")
    oov_cmd.add_argument("--lenient", action="store_true", help="skip malformed lines")

    retain_cmd = commands.add_parser("retain", parents=[config_flags])
    retain_cmd.add_argument("examples")
    retain_cmd.add_argument("table")
    retain_cmd.add_argument("--out")
    retain_cmd.add_argument(
        "--single-mode",
        action="store_const",
        const=False,
        default=None,
        dest="report_both_modes",
    )

    summarize_cmd = commands.add_parser("summarize", parents=[config_flags])
    summarize_cmd.add_argument("examples")
    summarize_cmd.add_argument("table")
    summarize_cmd.add_argument("out")
    summarize_cmd.add_argument("--budget", type=int, dest="summary_budget")
    summarize_cmd.add_argument(
        "--examples-out", help="also write the examples cut to their windows"
    )

    weights_cmd = commands.add_parser("init-weights", parents=[config_flags])
    weights_cmd.add_argument("out")

    encode_cmd = commands.add_parser("encode", parents=[config_flags])
    encode_cmd.add_argument("examples")
    encode_cmd.add_argument("table")
    encode_cmd.add_argument("out")
    encode_cmd.add_argument("--weights")
    encode_cmd.add_argument(
        "--summarize", action="store_const", const=True, default=None
    )
    encode_cmd.add_argument("--summary-budget", type=int, dest="summary_budget")

    score_cmd = commands.add_parser("score")
    score_cmd.add_argument("predictions")
    score_cmd.add_argument("examples")
    score_cmd.add_argument("--out")

    return parser


CONFIG_KEYS = (
    "embedding_dim",
    "hidden_size",
    "pooling",
    "budgets",
    "max_span_len",
    "seed",
    "model",
    "sentinel",
    "fusion",
    "truncate",
    "doc_cap",
    "question_cap",
    "report_both_modes",
    "summarize",
    "summary_budget",
)


def resolve_config(args):
    """Defaults, overridden by the config file, overridden by flags"""

    config = open_config(args.config) if args.config else PipelineConfig()
    overrides = {key: getattr(args, key, None) for key in CONFIG_KEYS}

    # an explicit cap asks for truncation
    if overrides["doc_cap"] is not None or overrides["question_cap"] is not None:
        overrides["truncate"] = True

    return config.with_overrides(**overrides)


def run(args):
    config = resolve_config(args)
    verbose = args.progress

    if args.command == "ingest":
        cmd_ingest(args.dataset, args.out, config)
    elif args.command == "oov":
        cmd_oov(
            args.examples,
            args.base_table,
            args.external_table,
            args.out,
            report_path=args.report,
            on_bad_line="skip" if args.lenient else "error",
            verbose=verbose,
        )
    elif args.command == "retain":
        cmd_retain(args.examples, args.table, config, args.out, verbose)
    elif args.command == "summarize":
        cmd_summarize(
            args.examples, args.table, args.out, config, args.examples_out
        )
    elif args.command == "init-weights":
        cmd_init_weights(args.out, config)
    elif args.command == "encode":
        cmd_encode(
            args.examples, args.table, args.out, config, args.weights, verbose
        )
    elif args.command == "score":
        cmd_score(args.predictions, args.examples, args.out)


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"qareader: error: {e.message}", file=sys.stderr)
        return EXIT_USAGE

    levels = [logging.WARNING, logging.INFO, logging.DEBUG]
    logging.basicConfig(
        level=levels[min(args.verbose, len(levels) - 1)],
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        run(args)
    except (UsageError, ConfigError) as e:
        print(f"qareader: error: {e.message}", file=sys.stderr)
        return EXIT_USAGE
    except DATA_ERRORS as e:
        message = getattr(e, "message", None) or str(e)
        print(f"qareader: error: {message}", file=sys.stderr)
        return EXIT_DATA

    return EXIT_OK
