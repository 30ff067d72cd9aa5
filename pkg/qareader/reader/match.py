"""
Match-LSTM layer: every document state attends over the question states,
and forward/reverse LSTMs read [h_i^p, attended question] per position.

    G_i = tanh(H^q W^q + (h_i^p W^p + h_{i-1}^r W^r + b^p))
    alpha_i = softmax(G_i w + b)

h^r is the previous state of the match LSTM reading in the same direction;
with W^r = 0 the attention depends on h_i^p alone.
"""
from dataclasses import dataclass

import numpy as np

from .functional import ShapeError, as_matrix, softmax
from .lstm import lstm_step


@dataclass(frozen=True)
class MatchOutput:
    alpha: np.ndarray
    alpha_reverse: np.ndarray
    states: np.ndarray


def _read(passage, question, projected_question, params, lstm, order):
    h = np.zeros(lstm.hidden_dim)
    c = np.zeros(lstm.hidden_dim)
    alphas = np.zeros((passage.shape[0], question.shape[0]))
    states = np.zeros((passage.shape[0], lstm.hidden_dim))

    for i in order:
        g = np.tanh(
            projected_question + (passage[i] @ params.w_p + h @ params.w_r + params.b_p)
        )
        alpha = softmax(g @ params.w + params.b)
        attended = alpha @ question

        h, c = lstm_step(lstm, np.concatenate([passage[i], attended]), h, c)

        alphas[i] = alpha
        states[i] = h

    return alphas, states


def match_attend(passage, question, params):
    """
    Returns the forward attention distributions (P x Q), the reverse ones
    and the concatenated forward/reverse match states (P x 2l).
    """

    size = params.hidden_size
    passage = as_matrix(passage, "H^p", cols=size)
    question = as_matrix(question, "H^q", cols=size)

    if question.shape[0] == 0:
        raise ShapeError("Match attention needs at least one question state")

    projected_question = question @ params.w_q
    count = passage.shape[0]

    alpha, forward = _read(
        passage, question, projected_question, params, params.forward, range(count)
    )
    alpha_reverse, backward = _read(
        passage,
        question,
        projected_question,
        params,
        params.backward,
        reversed(range(count)),
    )

    return MatchOutput(
        alpha=alpha, alpha_reverse=alpha_reverse, states=np.hstack([forward, backward])
    )
