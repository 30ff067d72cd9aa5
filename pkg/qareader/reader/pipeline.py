"""
Forward pass of a whole example: optional summary window, embedding,
encoder, coattention (or the match-LSTM baseline), answer pointer, and the
mapping of the decoded span back to the context text.
"""
import logging
from dataclasses import dataclass

from qareader.embeddings import embed
from qareader.summarizer import summarize

from .coattention import coattend, encode
from .functional import ShapeError
from .lstm import lstm_forward
from .match import match_attend
from .pointer import point_answer

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Prediction:
    id: str
    text: str
    span: tuple
    score: float
    window: tuple


def check_dims(params, table, config):
    """Raises ShapeError when weights, embedding table and config disagree"""

    expected = {
        "embedding_dim": table.dim,
        "hidden_size": config.hidden_size,
        "pointer_input_dim": config.pointer_input_dim,
    }
    actual = params.dims()

    for name, value in expected.items():
        if actual[name] != value:
            raise ShapeError(f"Weights have {name}={actual[name]}, expected {value}")

    if config.sentinel != (params.sentinel is not None):
        raise ShapeError(
            f"Config sentinel={config.sentinel} but weights "
            f"{'carry' if params.sentinel is not None else 'lack'} a sentinel"
        )


class Reader:
    """
    Untrained reader assembled from explicit weights. Deterministic: the
    same weights, table and config always produce the same predictions.
    """

    def __init__(self, table, params, config):
        check_dims(params, table, config)

        self.table = table
        self.params = params
        self.config = config

    def _question(self, example):
        if example.question_tokens:
            return embed(example.question_tokens, self.table)

        return self.table.oov_vector[None, :]

    def encode_window(self, doc_emb, q_emb):
        """Rows the pointer reads, one per document token"""

        params = self.params

        if self.config.model == "match_lstm":
            passage = lstm_forward(params.shared_lstm, doc_emb)
            question = lstm_forward(params.shared_lstm, q_emb)
            return match_attend(passage, question, params.match).states

        doc, question = encode(doc_emb, q_emb, params)
        fusion = params.fusion if self.config.fusion else None
        u = coattend(doc, question, fusion).u

        # the sentinel row takes part in attention only
        return u[: doc_emb.shape[0]]

    def predict(self, example):
        window = (0, len(example.doc_tokens))

        if self.config.summarize:
            summary = summarize(
                example, self.table, self.config.pooling, self.config.summary_budget
            )
            window = summary.window

        start, end = window
        doc_emb = embed(example.doc_tokens[start:end], self.table)
        u = self.encode_window(doc_emb, self._question(example))

        prediction = point_answer(u, self.params.pointer, self.config.max_span_len)
        first, last = prediction.span
        span = (start + first, start + last)

        return Prediction(
            id=example.id,
            text=example.text(span[0], span[1] + 1),
            span=span,
            score=prediction.score,
            window=window,
        )

    def predict_all(self, examples):
        predictions = {}
        for example in examples:
            predictions[example.id] = self.predict(example)

        logger.info(f"Predicted {len(predictions)} answers")
        return predictions


def predictions_to_dict(predictions):
    return {key: prediction.text for key, prediction in predictions.items()}
