"""
Single-layer LSTM forward pass. Gate weights act on the concatenation
[x_t, h_{t-1}], one (input_dim + hidden_dim) x hidden_dim matrix per gate.
"""
from dataclasses import dataclass

import numpy as np

from .functional import ShapeError, as_matrix, sigmoid

GATES = ("input", "forget", "output", "candidate")


@dataclass(frozen=True)
class LstmParams:
    w_input: np.ndarray
    w_forget: np.ndarray
    w_output: np.ndarray
    w_candidate: np.ndarray
    b_input: np.ndarray
    b_forget: np.ndarray
    b_output: np.ndarray
    b_candidate: np.ndarray

    def __post_init__(self):
        rows, hidden = np.shape(self.w_input)

        for gate in GATES:
            weights = getattr(self, f"w_{gate}")
            bias = getattr(self, f"b_{gate}")

            if np.shape(weights) != (rows, hidden):
                raise ShapeError(
                    f"w_{gate} has shape {np.shape(weights)}, expected {(rows, hidden)}"
                )
            if np.shape(bias) != (hidden,):
                raise ShapeError(
                    f"b_{gate} has shape {np.shape(bias)}, expected ({hidden},)"
                )

        if rows <= hidden:
            raise ShapeError(
                f"Gate weights have {rows} rows, need input_dim + {hidden} with input_dim > 0"
            )

    @property
    def hidden_dim(self):
        return self.w_input.shape[1]

    @property
    def input_dim(self):
        return self.w_input.shape[0] - self.hidden_dim

    @staticmethod
    def uniform(input_dim, hidden_dim, rng, scale):
        rows = input_dim + hidden_dim
        weights = {
            f"w_{gate}": rng.uniform(-scale, scale, (rows, hidden_dim)) for gate in GATES
        }
        biases = {f"b_{gate}": rng.uniform(-scale, scale, hidden_dim) for gate in GATES}
        return LstmParams(**weights, **biases)


@dataclass(frozen=True)
class BiLstmParams:
    forward: LstmParams
    backward: LstmParams

    def __post_init__(self):
        if (self.forward.input_dim, self.forward.hidden_dim) != (
            self.backward.input_dim,
            self.backward.hidden_dim,
        ):
            raise ShapeError("Forward and backward LSTMs disagree on dimensions")

    @property
    def input_dim(self):
        return self.forward.input_dim

    @property
    def output_dim(self):
        return 2 * self.forward.hidden_dim


def lstm_step(params, x, h, c):
    joined = np.concatenate([x, h])

    i = sigmoid(joined @ params.w_input + params.b_input)
    f = sigmoid(joined @ params.w_forget + params.b_forget)
    o = sigmoid(joined @ params.w_output + params.b_output)
    g = np.tanh(joined @ params.w_candidate + params.b_candidate)

    c = f * c + i * g
    h = o * np.tanh(c)
    return h, c


def lstm_forward(params, inputs):
    """All hidden states (T x hidden_dim) of a run from the zero state"""

    inputs = as_matrix(inputs, "LSTM input", cols=params.input_dim)

    h = np.zeros(params.hidden_dim)
    c = np.zeros(params.hidden_dim)
    states = np.zeros((inputs.shape[0], params.hidden_dim))

    for t, x in enumerate(inputs):
        h, c = lstm_step(params, x, h, c)
        states[t] = h

    return states


def bilstm_forward(params, inputs):
    """Forward states and re-reversed backward states, concatenated per row"""

    inputs = as_matrix(inputs, "BiLSTM input", cols=params.input_dim)

    forward = lstm_forward(params.forward, inputs)
    backward = lstm_forward(params.backward, inputs[::-1])[::-1]

    return np.hstack([forward, backward])
