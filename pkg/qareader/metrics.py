"""
SQuAD v1.1 style scoring: exact match and token-overlap F1 after answer
normalization, maxed over the gold answers of each question.

Normalization lowercases, deletes every character of Unicode general
category P*, drops the articles a/an/the and splits on whitespace.
"""
import json
from collections import Counter

from pydantic import BaseModel, Field, TypeAdapter

from qareader.reducers import new_reducer
from qareader.tokenizer import is_punctuation

ARTICLES = frozenset(["a", "an", "the"])

_predictions_adapter = TypeAdapter(dict[str, str])


class MetricError(Exception):
    def __init__(self, message):
        super().__init__(message)
        self.message = message


class ExampleScore(BaseModel):
    id: str
    em: int
    f1: float


class ScoreReport(BaseModel):
    n: int
    em: float
    f1: float
    per_example: list[ExampleScore] = Field(default_factory=list)
    missing: list[str] = Field(default_factory=list)

    def summary_line(self):
        return (
            f"n={self.n} exact_match={100.0 * self.em:.2f} f1={100.0 * self.f1:.2f} "
            f"missing={len(self.missing)}"
        )


def normalize(answer):
    text = "".join(ch for ch in answer.lower() if not is_punctuation(ch))
    return [token for token in text.split() if token not in ARTICLES]


def f1_score(prediction_tokens, gold_tokens):
    if not prediction_tokens and not gold_tokens:
        return 1.0

    if not prediction_tokens or not gold_tokens:
        return 0.0

    common = Counter(prediction_tokens) & Counter(gold_tokens)
    num_same = sum(common.values())
    if num_same == 0:
        return 0.0

    precision = num_same / len(prediction_tokens)
    recall = num_same / len(gold_tokens)
    return (2 * precision * recall) / (precision + recall)


def score_example(prediction, golds):
    """(em, f1) of a prediction against every gold answer, best of each"""

    if not golds:
        raise MetricError("Cannot score against an empty list of gold answers")

    predicted = normalize(prediction)
    normalized_golds = [normalize(gold) for gold in golds]

    em = int(any(predicted == gold for gold in normalized_golds))
    f1 = max(f1_score(predicted, gold) for gold in normalized_golds)

    return em, f1


def score_set(predictions, examples):
    """
    Averages per-example scores. Questions without a prediction are scored
    as the empty answer and listed in `missing`.
    """

    em_mean = new_reducer("mean")
    f1_mean = new_reducer("mean")
    per_example = []
    missing = []

    for example in examples:
        prediction = predictions.get(example.id)
        if prediction is None:
            missing.append(example.id)
            prediction = ""

        em, f1 = score_example(prediction, example.gold_texts)
        em_mean.add(em)
        f1_mean.add(f1)
        per_example.append(ExampleScore(id=example.id, em=em, f1=f1))

    return ScoreReport(
        n=len(per_example),
        em=em_mean.total(),
        f1=f1_mean.total(),
        per_example=per_example,
        missing=missing,
    )


def load_predictions(path):
    """Reads a SQuAD submission file: a JSON map from question id to answer"""

    with open(path, "r", encoding="utf8") as f:
        return _predictions_adapter.validate_python(json.load(f))


def write_predictions(predictions, path):
    with open(path, "w", encoding="utf8") as out:
        json.dump(predictions, out, ensure_ascii=False, indent=2, sort_keys=True)
