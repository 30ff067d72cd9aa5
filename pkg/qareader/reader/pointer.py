"""
Boundary answer pointer: two attention distributions over document
positions (start, end) and the best span under a length limit.

For each boundary the attention is the additive form used by the match
layer, with its own parameters:

    F = tanh(U V + (h W_a + b_a))
    beta = softmax(F w + c)

h is zero for the start boundary; for the end boundary it is one answer
LSTM step fed the start-weighted sum of the rows of U.
"""
from dataclasses import dataclass

import numpy as np

from .functional import ShapeError, as_matrix, softmax
from .lstm import lstm_step


@dataclass(frozen=True)
class SpanPrediction:
    start_probs: np.ndarray
    end_probs: np.ndarray
    span: tuple
    score: float


def boundary_attention(u, params, h):
    features = np.tanh(u @ params.v + (h @ params.w_a + params.b_a))
    return softmax(features @ params.w + params.c)


def boundary_probs(u, params):
    """(start_probs, end_probs) over the rows of U"""

    u = as_matrix(u, "U", cols=params.input_dim)
    if u.shape[0] == 0:
        raise ShapeError("Cannot point into an empty document")

    size = params.answer_lstm.hidden_dim
    start = boundary_attention(u, params.start, np.zeros(size))

    h, _ = lstm_step(params.answer_lstm, start @ u, np.zeros(size), np.zeros(size))
    end = boundary_attention(u, params.end, h)

    return start, end


def best_span(start_probs, end_probs, max_span_len):
    """
    (start, end_inclusive) maximizing start_probs[s] * end_probs[e] over
    s <= e <= s + max_span_len; ties go to the smaller s, then smaller e.
    """

    start_probs = np.asarray(start_probs, dtype=np.float64)
    end_probs = np.asarray(end_probs, dtype=np.float64)

    if start_probs.shape != end_probs.shape or start_probs.ndim != 1:
        raise ShapeError("Start and end probabilities must be vectors of equal length")

    if start_probs.shape[0] == 0:
        raise ShapeError("Cannot decode a span from empty distributions")

    positions = np.arange(start_probs.shape[0])
    offset = positions[None, :] - positions[:, None]
    feasible = (offset >= 0) & (offset <= max_span_len)

    scores = np.where(feasible, np.outer(start_probs, end_probs), -np.inf)
    start, end = np.unravel_index(np.argmax(scores), scores.shape)

    return (int(start), int(end)), float(scores[start, end])


def decode(start_probs, end_probs, max_span_len):
    span, score = best_span(start_probs, end_probs, max_span_len)
    return SpanPrediction(
        start_probs=np.asarray(start_probs, dtype=np.float64),
        end_probs=np.asarray(end_probs, dtype=np.float64),
        span=span,
        score=score,
    )


def point_answer(u, params, max_span_len=15):
    start, end = boundary_probs(u, params)
    return decode(start, end, max_span_len)
