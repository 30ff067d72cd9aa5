import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qareader.reader.functional import ShapeError
from qareader.reader.lstm import LstmParams
from qareader.reader.match import match_attend
from qareader.reader.params import MatchParams, init_params


def match_params(size, w_q, w_p, w_r, b_p, w, b, seed=0):
    rng = np.random.default_rng(seed)
    return MatchParams(
        w_q=np.asarray(w_q, dtype=float),
        w_p=np.asarray(w_p, dtype=float),
        w_r=np.asarray(w_r, dtype=float),
        b_p=np.asarray(b_p, dtype=float),
        w=np.asarray(w, dtype=float),
        b=b,
        forward=LstmParams.uniform(2 * size, size, rng, 0.5),
        backward=LstmParams.uniform(2 * size, size, rng, 0.5),
    )


def softmax(values):
    exps = [math.exp(v - max(values)) for v in values]
    return [e / sum(exps) for e in exps]


def test_zero_weights_give_uniform_attention():
    params = init_params(embedding_dim=2, hidden_size=3, scale=0.0).match
    rng = np.random.default_rng(0)
    out = match_attend(rng.normal(size=(4, 3)), rng.normal(size=(5, 3)), params)

    assert_allclose(out.alpha, np.full((4, 5), 0.2), atol=1e-9)
    assert_allclose(out.alpha_reverse, np.full((4, 5), 0.2), atol=1e-9)


def test_single_question_state():
    params = init_params(embedding_dim=2, hidden_size=3, seed=5).match
    rng = np.random.default_rng(1)
    out = match_attend(rng.normal(size=(4, 3)), rng.normal(size=(1, 3)), params)

    assert np.all(out.alpha == 1.0)
    assert np.all(out.alpha_reverse == 1.0)


def test_hand_computed_attention():
    eye = np.eye(2)
    params = match_params(
        2, w_q=eye, w_p=eye, w_r=np.zeros((2, 2)), b_p=[0.0, 0.0], w=[1.0, 0.0], b=0.0
    )
    passage = [[0.5, -0.5], [0.0, 1.0]]
    question = [[1.0, 0.0], [0.0, 1.0]]

    out = match_attend(passage, question, params)

    first = softmax([math.tanh(1.5), math.tanh(0.5)])
    second = softmax([math.tanh(1.0), math.tanh(0.0)])

    assert_allclose(out.alpha, [first, second], atol=1e-12)
    assert_allclose(out.alpha_reverse, [first, second], atol=1e-12)


def test_previous_state_steers_attention():
    rng = np.random.default_rng(9)
    size = 2
    common = dict(
        w_q=rng.normal(size=(2, 2)),
        w_p=rng.normal(size=(2, 2)),
        b_p=rng.normal(size=2),
        w=rng.normal(size=2),
        b=0.1,
    )
    passage = rng.normal(size=(3, 2))
    question = rng.normal(size=(4, 2))

    plain = match_attend(passage, question, match_params(size, w_r=np.zeros((2, 2)), **common))
    steered = match_attend(
        passage, question, match_params(size, w_r=np.full((2, 2), 3.0), **common)
    )

    assert_allclose(steered.alpha[0], plain.alpha[0])
    assert_allclose(steered.alpha_reverse[-1], plain.alpha_reverse[-1])
    assert not np.allclose(steered.alpha[1:], plain.alpha[1:])


def test_states_shape():
    params = init_params(embedding_dim=2, hidden_size=3, seed=1).match
    rng = np.random.default_rng(2)
    out = match_attend(rng.normal(size=(6, 3)), rng.normal(size=(2, 3)), params)

    assert out.alpha.shape == (6, 2)
    assert out.states.shape == (6, 6)
    assert_allclose(out.alpha.sum(axis=1), np.ones(6), atol=1e-6)
    assert np.all(np.isfinite(out.states))


def test_empty_question():
    params = init_params(embedding_dim=2, hidden_size=3).match

    with pytest.raises(ShapeError):
        match_attend(np.ones((2, 3)), np.zeros((0, 3)), params)


def test_width_mismatch():
    params = init_params(embedding_dim=2, hidden_size=3).match

    with pytest.raises(ShapeError):
        match_attend(np.ones((2, 2)), np.ones((2, 3)), params)
