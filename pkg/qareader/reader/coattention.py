"""
Document/question encoder and the coattention layer.

Notation: o = document length, n = question length, l = hidden size.
D' is o x l, Q' is n x l, the affinity matrix L = Q' D'^T is n x o.
"""
from dataclasses import dataclass

import numpy as np

from .functional import ShapeError, as_matrix, softmax_rows
from .lstm import bilstm_forward, lstm_forward


@dataclass(frozen=True)
class CoattentionOutput:
    affinity: np.ndarray
    a_q: np.ndarray
    a_d: np.ndarray
    c_q: np.ndarray
    c_d: np.ndarray
    u: np.ndarray


def _with_sentinel(matrix, sentinel):
    if sentinel is None:
        return matrix

    if matrix.shape[1] != sentinel.shape[0]:
        raise ShapeError(
            f"Sentinel has {sentinel.shape[0]} components, encodings have {matrix.shape[1]}"
        )

    return np.vstack([matrix, sentinel[None, :]])


def encode(doc_emb, q_emb, params, bypass=False):
    """
    Runs document and question through the one shared LSTM and projects the
    question encoding: Q' = tanh(Q W + b). With `bypass`, the embeddings are
    passed through unchanged. A configured sentinel row is appended to both.
    """

    if bypass:
        doc = as_matrix(doc_emb, "document embeddings")
        question = as_matrix(q_emb, "question embeddings", cols=doc.shape[1])
    else:
        doc = lstm_forward(params.shared_lstm, doc_emb)
        question = lstm_forward(params.shared_lstm, q_emb)
        question = np.tanh(question @ params.q_proj.w + params.q_proj.b)

    sentinel = None if params is None else params.sentinel

    return _with_sentinel(doc, sentinel), _with_sentinel(question, sentinel)


def coattend(doc, question, fusion=None):
    """
    Coattention over encoded document D' (o x l) and question Q' (n x l).

    A^Q = softmax(L) attends over the document for every question word,
    A^D = softmax(L^T) over the question for every document word,
    C^Q = A^Q D', C^D = A^D [Q'; C^Q] and U = BiLSTM([D'; C^D]).
    Without fusion parameters U is [D'; C^D] itself (o x 3l).
    """

    doc = as_matrix(doc, "D'")
    question = as_matrix(question, "Q'", cols=doc.shape[1])

    if doc.shape[0] == 0 or question.shape[0] == 0:
        raise ShapeError(
            f"Coattention needs non-empty inputs, got o={doc.shape[0]}, n={question.shape[0]}"
        )

    affinity = question @ doc.T
    a_q = softmax_rows(affinity)
    a_d = softmax_rows(affinity.T)
    c_q = a_q @ doc
    c_d = a_d @ np.hstack([question, c_q])

    fused_input = np.hstack([doc, c_d])
    if fusion is None:
        u = fused_input
    else:
        if fusion.input_dim != fused_input.shape[1]:
            raise ShapeError(
                f"Fusion BiLSTM expects {fusion.input_dim} inputs, got {fused_input.shape[1]}"
            )
        u = bilstm_forward(fusion, fused_input)

    return CoattentionOutput(
        affinity=affinity, a_q=a_q, a_d=a_d, c_q=c_q, c_d=c_d, u=u
    )
