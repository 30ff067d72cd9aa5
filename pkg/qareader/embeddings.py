"""
Constant word-vector tables: loading from the text embedding format,
corpus vocabulary counting and the out-of-vocabulary join against a large
external file.

Text format: one `word v1 v2 ... vd` line per word, space separated.
Keys are lowercased on load; when two lines fold to the same key the first
one wins.
"""
import logging
import math
import os
import time
from collections import Counter
from types import MappingProxyType

import numpy as np
import tqdm
from pydantic import BaseModel, Field, model_validator

logger = logging.getLogger(__name__)


class EmbeddingFormatError(Exception):
    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.message = message
        self.line_number = line_number


class DimensionMismatchError(Exception):
    def __init__(self, message):
        super().__init__(message)
        self.message = message


def _frozen(vector):
    vector = np.array(vector, dtype=np.float64)
    vector.flags.writeable = False
    return vector


class EmbeddingTable:
    """
    Immutable map from lowercase word to a vector of `dim` finite floats.
    Unknown words resolve to `oov_vector` (zeros unless given).
    """

    def __init__(self, dim, entries, oov_vector=None):
        if dim <= 0:
            raise ValueError(f"Embedding dimension must be positive, got {dim}")

        self.dim = dim
        self.oov_vector = _frozen(np.zeros(dim) if oov_vector is None else oov_vector)

        if self.oov_vector.shape != (dim,):
            raise DimensionMismatchError(
                f"OOV vector has {self.oov_vector.shape[0]} components, expected {dim}"
            )

        checked = {}
        for word, vector in entries.items():
            vector = _frozen(vector)
            if vector.shape != (dim,):
                raise DimensionMismatchError(
                    f"Vector for [{word}] has shape {vector.shape}, expected ({dim},)"
                )
            if not np.all(np.isfinite(vector)):
                raise EmbeddingFormatError(f"Vector for [{word}] is not finite")
            checked[word.lower()] = vector

        self._entries = MappingProxyType(checked)

    @property
    def entries(self):
        return self._entries

    def __contains__(self, word):
        return word.lower() in self._entries

    def __len__(self):
        return len(self._entries)

    def __getitem__(self, word):
        return self._entries.get(word.lower(), self.oov_vector)

    def __repr__(self):
        return f"{self.__class__.__name__}({len(self)}, {self.dim})"

    def with_entries(self, additions):
        """Returns a new table holding the current entries plus `additions`"""

        merged = dict(additions)
        merged.update(self._entries)
        return EmbeddingTable(self.dim, merged, self.oov_vector)


class LookupReport(BaseModel):
    requested: int
    found: int
    still_missing: int
    elapsed: float = Field(description="seconds spent scanning the external file")
    missing_words: list[str] = Field(default_factory=list)
    lines_scanned: int = 0
    vectors_parsed: int = 0
    bad_lines: int = 0

    @model_validator(mode="after")
    def counts_add_up(self):
        if self.requested != self.found + self.still_missing:
            raise ValueError(
                f"requested ({self.requested}) != found ({self.found}) + "
                f"still_missing ({self.still_missing})"
            )
        return self


def _split_line(line, line_number):
    word, *values = line.rstrip("\r\n").split(" ")
    if not word or not values:
        raise EmbeddingFormatError(
            f"Line {line_number}: expected a word followed by numbers", line_number
        )
    return word, values


def _parse_vector(values, line_number):
    try:
        vector = [float(v) for v in values]
    except ValueError:
        raise EmbeddingFormatError(
            f"Line {line_number}: unparseable number in {values[:3]}...", line_number
        )

    if not all(math.isfinite(v) for v in vector):
        raise EmbeddingFormatError(
            f"Line {line_number}: non-finite value in vector", line_number
        )

    return vector


def _lines(path, verbose, description):
    """
    Non-blank lines with their 1-based numbers, read in one pass. The
    progress bar counts bytes so its total needs no pre-scan.
    """

    with open(path, "rb") as f, tqdm.tqdm(
        total=os.path.getsize(path),
        disable=not verbose,
        ncols=100,
        desc=description,
        unit="B",
        unit_scale=True,
    ) as bar:
        for line_number, raw in enumerate(f, start=1):
            bar.update(len(raw))
            line = raw.decode("utf8")
            if line.strip():
                yield line_number, line


def _check_bad_line(error, on_bad_line):
    if on_bad_line != "skip":
        raise error
    logger.warning(f"Bad line skipped: {error.message}")


def load_table(path, restrict_to=None, on_bad_line="error", verbose=False):
    """
    Loads a text embedding file. The dimension is taken from the first line
    that parses and enforced on every other line. With `restrict_to`, only
    those words (compared lowercase) are materialized.
    """

    logger.info(f"Loading vectors from {path}")
    wanted = None if restrict_to is None else {w.lower() for w in restrict_to}
    dim = None
    entries = {}
    bad_lines = 0

    for line_number, line in _lines(path, verbose, "Loading vectors"):
        try:
            word, values = _split_line(line, line_number)

            if dim is None:
                # the first line that parses fixes the width
                vector = _parse_vector(values, line_number)
                dim = len(vector)
            elif len(values) != dim:
                raise EmbeddingFormatError(
                    f"Line {line_number}: {len(values)} components, expected {dim}",
                    line_number,
                )

            key = word.lower()
            if key in entries or (wanted is not None and key not in wanted):
                continue

            entries[key] = _parse_vector(values, line_number)
        except EmbeddingFormatError as e:
            _check_bad_line(e, on_bad_line)
            bad_lines += 1

    if dim is None:
        raise EmbeddingFormatError(f"Embedding file [{path}] holds no vectors")

    if bad_lines:
        logger.warning(f"Totally {bad_lines} bad lines exist and were skipped")

    return EmbeddingTable(dim, entries)


def write_table(table, path):
    """Writes a table in the text format, with shortest round-trip floats"""

    with open(path, "w", encoding="utf8") as out:
        for word, vector in table.entries.items():
            out.write(word + " " + " ".join(repr(float(v)) for v in vector) + "\n")

    return len(table)


def build_vocab(examples):
    """Counts every lowercase document and question token"""

    vocab = Counter()
    for example in examples:
        vocab.update(token.lower for token in example.doc_tokens)
        vocab.update(token.lower for token in example.question_tokens)

    return vocab


def oov_join(vocab, table, external, on_bad_line="error", verbose=False):
    """
    Resolves the vocabulary words missing from `table` with a single
    sequential pass over the external file. Only vectors of missing words
    are parsed and held; existing entries are never overwritten.

    Returns (augmented table, LookupReport).
    """

    pending = {word.lower() for word in vocab} - set(table.entries)
    requested = len(pending)
    found = {}
    lines_scanned = 0
    vectors_parsed = 0
    bad_lines = 0
    checked_dim = False

    def parse(values, line_number):
        nonlocal vectors_parsed
        vectors_parsed += 1
        return _parse_vector(values, line_number)

    started = time.perf_counter()
    logger.info(f"Looking up {requested} missing words in {external}")

    for line_number, line in _lines(external, verbose, "Joining vectors"):
        lines_scanned += 1

        try:
            word, values = _split_line(line, line_number)

            if not checked_dim:
                if len(values) != table.dim:
                    raise DimensionMismatchError(
                        f"External file [{external}] has dimension {len(values)}, "
                        f"table has {table.dim}"
                    )
                checked_dim = True

            key = word.lower()
            if key not in pending:
                continue

            if len(values) != table.dim:
                raise EmbeddingFormatError(
                    f"Line {line_number}: {len(values)} components, "
                    f"expected {table.dim}",
                    line_number,
                )

            found[key] = parse(values, line_number)
            pending.discard(key)
        except EmbeddingFormatError as e:
            _check_bad_line(e, on_bad_line)
            bad_lines += 1

    elapsed = time.perf_counter() - started
    augmented = table.with_entries(found) if found else table

    report = LookupReport(
        requested=requested,
        found=len(found),
        still_missing=len(pending),
        elapsed=elapsed,
        missing_words=sorted(pending),
        lines_scanned=lines_scanned,
        vectors_parsed=vectors_parsed,
        bad_lines=bad_lines,
    )

    logger.info(
        f"Found {report.found} of {requested} missing words "
        f"in {elapsed:.1f}s ({lines_scanned} lines scanned)"
    )

    return augmented, report


def embed(tokens, table):
    """(len(tokens) x dim) matrix of the tokens' vectors, OOV rows included"""

    if not tokens:
        return np.zeros((0, table.dim))

    return np.stack([table[token.lower] for token in tokens])
