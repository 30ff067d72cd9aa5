"""
Summary-attentive preprocessing: pick the document sentence closest to the
question (cosine similarity of pooled word vectors) and cut the document
down to a token budget around it. Also hosts the ground-truth retain-rate
experiment used to choose the budget.
"""
import logging
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
import pandas as pd
import tqdm

from qareader.embeddings import embed
from qareader.reducers import new_reducer

logger = logging.getLogger(__name__)


class EmptySentenceError(Exception):
    def __init__(self, message):
        super().__init__(message)
        self.message = message


class VectorLengthError(Exception):
    def __init__(self, message):
        super().__init__(message)
        self.message = message


class KeySentenceError(Exception):
    def __init__(self, message):
        super().__init__(message)
        self.message = message


class PoolingMode(str, Enum):
    MAX = "max"
    MEAN = "mean"


@dataclass(frozen=True)
class Summary:
    window: tuple
    key_sentence_index: int
    similarity: float
    budget: int

    @property
    def length(self):
        return self.window[1] - self.window[0]

    def contains(self, span):
        return self.window[0] <= span[0] and span[1] <= self.window[1]


def pool(vectors, mode):
    """Componentwise max or mean over the rows of an (n x d) matrix"""

    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2 or vectors.shape[0] == 0:
        raise EmptySentenceError("Cannot pool an empty sentence")

    if PoolingMode(mode) is PoolingMode.MAX:
        return vectors.max(axis=0)

    return vectors.mean(axis=0)


def cosine(u, v):
    """Cosine similarity; 0.0 when either vector has zero norm"""

    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)

    if u.shape != v.shape:
        raise VectorLengthError(
            f"Cannot compare vectors of lengths {u.shape[0]} and {v.shape[0]}"
        )

    norms = np.linalg.norm(u) * np.linalg.norm(v)
    if norms == 0.0:
        return 0.0

    return float(np.clip(np.dot(u, v) / norms, -1.0, 1.0))


def select_key_sentence(example, table, mode):
    """
    Index and similarity of the sentence whose pooled vector is most similar
    to the pooled question. Ties go to the lowest index.
    """

    if not example.sentence_spans:
        raise KeySentenceError(f"Example [{example.id}] has no sentences")

    if example.question_tokens:
        question = pool(embed(example.question_tokens, table), mode)
    else:
        question = np.zeros(table.dim)

    doc = embed(example.doc_tokens, table)

    best_index, best_similarity = 0, None
    for index, (start, end) in enumerate(example.sentence_spans):
        similarity = cosine(pool(doc[start:end], mode), question)

        if best_similarity is None or similarity > best_similarity:
            best_index, best_similarity = index, similarity

    return best_index, best_similarity


def _growth_order(sentence_spans, key):
    """
    Sentences in the order the window grows: the key sentence, then
    following and preceding neighbours in turn, following first. A side
    that runs out is skipped.
    """

    yield key, "after"

    after, before = key + 1, key - 1
    turn = "after"

    while after < len(sentence_spans) or before >= 0:
        if turn == "after" and after < len(sentence_spans):
            yield after, "after"
            after += 1
        elif turn == "before" and before >= 0:
            yield before, "before"
            before -= 1

        turn = "before" if turn == "after" else "after"


def truncate_around(example, key, budget, similarity=0.0):
    """
    Window of at most `budget` tokens grown around the key sentence. Whole
    sentences are added while they fit; the sentence where growth stops is
    cut to fill the remaining budget (its head when it follows the window,
    its tail when it precedes it). The window length is always
    min(budget, document length), and windows are nested as budget grows.
    """

    if budget < 1:
        raise ValueError(f"Summary budget must be positive, got {budget}")

    spans = example.sentence_spans
    if not 0 <= key < len(spans):
        raise KeySentenceError(
            f"Key sentence {key} out of range for {len(spans)} sentences"
        )

    length = len(example.doc_tokens)
    if length <= budget:
        return Summary((0, length), key, similarity, budget)

    start, end = spans[key]
    if end - start >= budget:
        return Summary((start, start + budget), key, similarity, budget)

    remaining = budget - (end - start)

    for index, side in _growth_order(spans, key):
        if index == key:
            continue

        sentence_start, sentence_end = spans[index]
        size = sentence_end - sentence_start

        if size <= remaining:
            start, end = min(start, sentence_start), max(end, sentence_end)
            remaining -= size
            continue

        if side == "after":
            end += remaining
        else:
            start -= remaining
        break

    return Summary((start, end), key, similarity, budget)


def summarize(example, table, mode, budget):
    key, similarity = select_key_sentence(example, table, mode)
    return truncate_around(example, key, budget, similarity)


def apply_summary(example, summary):
    """
    Restricts an example to its summary window. Token offsets keep pointing
    into the original context. Only gold spans wholly inside the window are
    kept; returns None when there are none.
    """

    start, end = summary.window
    gold = [
        ((s - start, e - start), text)
        for (s, e), text in zip(example.gold_spans, example.gold_texts)
        if summary.contains((s, e))
    ]
    if not gold:
        return None

    sentences = tuple(
        (max(s, start) - start, min(e, end) - start)
        for s, e in example.sentence_spans
        if s < end and e > start
    )

    return replace(
        example,
        doc_tokens=example.doc_tokens[start:end],
        sentence_spans=sentences,
        gold_spans=tuple(span for span, _ in gold),
        gold_texts=tuple(text for _, text in gold),
    )


@dataclass(frozen=True)
class RetainPoint:
    budget: int
    mode: str
    retain_rate: float
    n_examples: int


def retain_rate(examples, table, mode, budgets, verbose=False):
    """
    Fraction of examples with at least one gold span wholly inside the
    summary window, for each budget. The key sentence is selected once per
    example and reused across budgets.
    """

    mode = PoolingMode(mode)
    budgets = list(budgets)
    retained = [new_reducer("counter") for _ in budgets]
    total = new_reducer("counter")

    for example in tqdm.tqdm(
        examples, disable=not verbose, ncols=100, desc=f"Retain rate ({mode.value})"
    ):
        key, similarity = select_key_sentence(example, table, mode)
        total.add(1)

        for budget, counter in zip(budgets, retained):
            summary = truncate_around(example, key, budget, similarity)
            if any(summary.contains(span) for span in example.gold_spans):
                counter.add(1)

    n = total.total()
    points = [
        RetainPoint(
            budget=budget,
            mode=mode.value,
            retain_rate=(counter.total() / n) if n else 0.0,
            n_examples=n,
        )
        for budget, counter in zip(budgets, retained)
    ]

    for point in points:
        logger.info(
            f"budget={point.budget} mode={point.mode} "
            f"retain_rate={point.retain_rate:.4f} n={point.n_examples}"
        )

    return points


def retain_curve_frame(points):
    """Retain curve as a DataFrame with columns budget, mode, retain_rate, n_examples"""

    return pd.DataFrame(
        {
            "budget": [p.budget for p in points],
            "mode": [p.mode for p in points],
            "retain_rate": [p.retain_rate for p in points],
            "n_examples": [p.n_examples for p in points],
        },
        columns=["budget", "mode", "retain_rate", "n_examples"],
    )
