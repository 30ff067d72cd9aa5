"""
Weight containers for every encoder layer, seeded initialization and the
JSON weights fixture.

Fixture schema:

    {
      "format": "qareader-weights",
      "version": 1,
      "dims": {"embedding_dim": d, "hidden_size": l, "pointer_input_dim": k},
      "tensors": {"<dotted.name>": {"shape": [...], "values": [row-major floats]}}
    }

Tensor names follow the attribute path, e.g. `shared_lstm.w_input`,
`match.b`, `pointer.end.v`. Scalars have shape [].
"""
import json
from dataclasses import dataclass, fields, is_dataclass
from typing import get_type_hints

import numpy as np

from .functional import ShapeError
from .lstm import BiLstmParams, LstmParams

FORMAT = "qareader-weights"
VERSION = 1


class WeightsFormatError(Exception):
    def __init__(self, message):
        super().__init__(message)
        self.message = message


def _expect(name, value, shape):
    if np.shape(value) != shape:
        raise ShapeError(f"{name} has shape {np.shape(value)}, expected {shape}")


@dataclass(frozen=True)
class Projection:
    """Nonlinear question projection Q' = tanh(Q W + b)"""

    w: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        size = np.shape(self.w)[0]
        _expect("q_proj.w", self.w, (size, size))
        _expect("q_proj.b", self.b, (size,))


@dataclass(frozen=True)
class MatchParams:
    w_q: np.ndarray
    w_p: np.ndarray
    w_r: np.ndarray
    b_p: np.ndarray
    w: np.ndarray
    b: float
    forward: LstmParams
    backward: LstmParams

    def __post_init__(self):
        size = self.hidden_size
        for name in ("w_q", "w_p", "w_r"):
            _expect(f"match.{name}", getattr(self, name), (size, size))
        _expect("match.b_p", self.b_p, (size,))
        _expect("match.w", self.w, (size,))

        for lstm in (self.forward, self.backward):
            if (lstm.input_dim, lstm.hidden_dim) != (2 * size, size):
                raise ShapeError(
                    f"Match LSTM must map {2 * size} inputs to {size} states, "
                    f"got {lstm.input_dim} -> {lstm.hidden_dim}"
                )

    @property
    def hidden_size(self):
        return np.shape(self.w_q)[0]


@dataclass(frozen=True)
class BoundaryParams:
    """Additive attention over document positions for one answer boundary"""

    v: np.ndarray
    w_a: np.ndarray
    b_a: np.ndarray
    w: np.ndarray
    c: float

    def __post_init__(self):
        _, size = np.shape(self.v)
        _expect("pointer.w_a", self.w_a, (size, size))
        _expect("pointer.b_a", self.b_a, (size,))
        _expect("pointer.w", self.w, (size,))

    @property
    def input_dim(self):
        return np.shape(self.v)[0]


@dataclass(frozen=True)
class PointerParams:
    start: BoundaryParams
    end: BoundaryParams
    answer_lstm: LstmParams

    def __post_init__(self):
        if np.shape(self.start.v) != np.shape(self.end.v):
            raise ShapeError("Start and end pointer attention disagree on dimensions")

        if (self.answer_lstm.input_dim, self.answer_lstm.hidden_dim) != np.shape(
            self.start.v
        ):
            raise ShapeError("Answer LSTM must map pointer inputs to attention size")

    @property
    def input_dim(self):
        return self.start.input_dim


@dataclass(frozen=True)
class EncoderParams:
    shared_lstm: LstmParams
    q_proj: Projection
    fusion: BiLstmParams
    match: MatchParams
    pointer: PointerParams
    sentinel: np.ndarray | None = None

    def __post_init__(self):
        size = self.hidden_size

        if np.shape(self.q_proj.w) != (size, size):
            raise ShapeError(f"q_proj.w must be {size} x {size}")

        if (self.fusion.input_dim, self.fusion.forward.hidden_dim) != (3 * size, size):
            raise ShapeError(
                f"Fusion BiLSTM must map {3 * size} inputs to {size} states per direction"
            )

        if self.match.hidden_size != size:
            raise ShapeError(f"Match attention size must be {size}")

        if self.pointer.start.w_a.shape[0] != size:
            raise ShapeError(f"Pointer attention size must be {size}")

        if self.sentinel is not None:
            _expect("sentinel", self.sentinel, (size,))

    @property
    def embedding_dim(self):
        return self.shared_lstm.input_dim

    @property
    def hidden_size(self):
        return self.shared_lstm.hidden_dim

    @property
    def pointer_input_dim(self):
        return self.pointer.input_dim

    def dims(self):
        return {
            "embedding_dim": self.embedding_dim,
            "hidden_size": self.hidden_size,
            "pointer_input_dim": self.pointer_input_dim,
        }


def init_params(
    embedding_dim, hidden_size, pointer_input_dim=None, seed=0, sentinel=False, scale=0.08
):
    """
    Draws every weight from uniform(-scale, scale) with a seeded generator,
    in a fixed order, so the same seed always yields identical parameters.
    """

    size = hidden_size
    k = 2 * size if pointer_input_dim is None else pointer_input_dim
    rng = np.random.default_rng(seed)

    def uniform(*shape):
        return rng.uniform(-scale, scale, shape)

    shared_lstm = LstmParams.uniform(embedding_dim, size, rng, scale)
    q_proj = Projection(w=uniform(size, size), b=uniform(size))
    fusion = BiLstmParams(
        forward=LstmParams.uniform(3 * size, size, rng, scale),
        backward=LstmParams.uniform(3 * size, size, rng, scale),
    )
    match = MatchParams(
        w_q=uniform(size, size),
        w_p=uniform(size, size),
        w_r=uniform(size, size),
        b_p=uniform(size),
        w=uniform(size),
        b=float(uniform()),
        forward=LstmParams.uniform(2 * size, size, rng, scale),
        backward=LstmParams.uniform(2 * size, size, rng, scale),
    )

    def boundary():
        return BoundaryParams(
            v=uniform(k, size),
            w_a=uniform(size, size),
            b_a=uniform(size),
            w=uniform(size),
            c=float(uniform()),
        )

    pointer = PointerParams(
        start=boundary(),
        end=boundary(),
        answer_lstm=LstmParams.uniform(k, size, rng, scale),
    )

    return EncoderParams(
        shared_lstm=shared_lstm,
        q_proj=q_proj,
        fusion=fusion,
        match=match,
        pointer=pointer,
        sentinel=uniform(size) if sentinel else None,
    )


def flatten(params, prefix=""):
    """Maps dotted parameter names to arrays"""

    tensors = {}
    for f in fields(params):
        value = getattr(params, f.name)
        name = f"{prefix}{f.name}"

        if value is None:
            continue

        if is_dataclass(value):
            tensors.update(flatten(value, name + "."))
        else:
            tensors[name] = np.asarray(value, dtype=np.float64)

    return tensors


def unflatten(cls, tensors, prefix=""):
    hints = get_type_hints(cls)
    kwargs = {}

    for f in fields(cls):
        name = f"{prefix}{f.name}"
        kind = hints[f.name]

        if is_dataclass(kind):
            kwargs[f.name] = unflatten(kind, tensors, name + ".")
        elif name not in tensors:
            if f.default is not None:
                raise WeightsFormatError(f"Tensor [{name}] missing from weights")
            kwargs[f.name] = None
        elif kind is float:
            kwargs[f.name] = float(tensors[name])
        else:
            kwargs[f.name] = tensors[name]

    return cls(**kwargs)


def save_params(params, path):
    document = {
        "format": FORMAT,
        "version": VERSION,
        "dims": params.dims(),
        "tensors": {
            name: {"shape": list(value.shape), "values": value.ravel().tolist()}
            for name, value in flatten(params).items()
        },
    }

    with open(path, "w", encoding="utf8") as out:
        json.dump(document, out)


def params_from_dict(document):
    if not isinstance(document, dict) or document.get("format") != FORMAT:
        raise WeightsFormatError(f"Weights document is not in [{FORMAT}] format")

    if document.get("version") != VERSION:
        raise WeightsFormatError(
            f"Unsupported weights version {document.get('version')}, expected {VERSION}"
        )

    tensors = {}
    for name, tensor in document.get("tensors", {}).items():
        try:
            values = np.asarray(tensor["values"], dtype=np.float64)
            shape = tuple(tensor["shape"])
            tensors[name] = values.reshape(shape)
        except (KeyError, TypeError, ValueError) as e:
            raise WeightsFormatError(f"Tensor [{name}] is malformed: {e}")

        if not np.all(np.isfinite(tensors[name])):
            raise WeightsFormatError(f"Tensor [{name}] holds non-finite values")

    return unflatten(EncoderParams, tensors)


def load_params(path):
    with open(path, "r", encoding="utf8") as f:
        try:
            document = json.load(f)
        except json.JSONDecodeError as e:
            raise WeightsFormatError(f"Weights file [{path}] is not JSON: {e.msg}")

    return params_from_dict(document)
