import json

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from qareader.reader.functional import ShapeError
from qareader.reader.params import (
    FORMAT,
    WeightsFormatError,
    flatten,
    init_params,
    load_params,
    params_from_dict,
    save_params,
)


def same(first, second):
    a, b = flatten(first), flatten(second)
    return a.keys() == b.keys() and all(
        a[name].tobytes() == b[name].tobytes() for name in a
    )


def test_seed_determinism():
    assert same(init_params(4, 3, seed=0), init_params(4, 3, seed=0))
    assert not same(init_params(4, 3, seed=0), init_params(4, 3, seed=1))


def test_init_range():
    for value in flatten(init_params(4, 3, seed=2)).values():
        assert np.all(np.abs(value) <= 0.08)


def test_dimensions():
    params = init_params(embedding_dim=5, hidden_size=3)

    assert params.dims() == {
        "embedding_dim": 5,
        "hidden_size": 3,
        "pointer_input_dim": 6,
    }
    assert params.shared_lstm.w_input.shape == (8, 3)
    assert params.q_proj.w.shape == (3, 3)
    assert params.fusion.input_dim == 9
    assert params.match.w_r.shape == (3, 3)
    assert params.pointer.answer_lstm.input_dim == 6
    assert params.sentinel is None


def test_pointer_input_dim():
    params = init_params(embedding_dim=5, hidden_size=3, pointer_input_dim=9)

    assert params.pointer_input_dim == 9
    assert params.pointer.start.v.shape == (9, 3)


def test_tensor_names():
    names = flatten(init_params(4, 3, sentinel=True))

    assert "shared_lstm.w_input" in names
    assert "fusion.backward.b_candidate" in names
    assert "match.b" in names
    assert "pointer.end.v" in names
    assert names["sentinel"].shape == (3,)
    assert names["match.b"].shape == ()


def test_weights_file(tmp_path):
    path = tmp_path / "weights.json"
    params = init_params(4, 3, seed=3, sentinel=True)
    save_params(params, path)

    document = json.loads(path.read_text())
    assert document["format"] == FORMAT
    assert document["version"] == 1
    assert document["dims"] == params.dims()
    assert document["tensors"]["match.b"]["shape"] == []

    assert same(load_params(path), params)


def test_weights_without_sentinel(tmp_path):
    path = tmp_path / "weights.json"
    save_params(init_params(4, 3), path)

    assert load_params(path).sentinel is None


def document():
    params = init_params(2, 2)
    return {
        "format": FORMAT,
        "version": 1,
        "dims": params.dims(),
        "tensors": {
            name: {"shape": list(value.shape), "values": value.ravel().tolist()}
            for name, value in flatten(params).items()
        },
    }


def test_wrong_format():
    with pytest.raises(WeightsFormatError):
        params_from_dict({**document(), "format": "something-else"})

    with pytest.raises(WeightsFormatError):
        params_from_dict({**document(), "version": 2})

    with pytest.raises(WeightsFormatError):
        params_from_dict([])


def test_missing_tensor():
    doc = document()
    del doc["tensors"]["pointer.start.w"]

    with pytest.raises(WeightsFormatError) as e:
        params_from_dict(doc)

    assert "pointer.start.w" in e.value.message


def test_malformed_tensor():
    doc = document()
    doc["tensors"]["q_proj.b"] = {"shape": [5], "values": [1.0, 2.0]}

    with pytest.raises(WeightsFormatError):
        params_from_dict(doc)


def test_inconsistent_shapes():
    doc = document()
    doc["tensors"]["q_proj.b"] = {"shape": [3], "values": [1.0, 2.0, 3.0]}

    with pytest.raises(ShapeError):
        params_from_dict(doc)


def test_non_finite_tensor():
    doc = document()
    doc["tensors"]["q_proj.b"]["values"] = [float("nan"), 0.0]

    with pytest.raises(WeightsFormatError):
        params_from_dict(doc)


def test_not_json(tmp_path):
    path = tmp_path / "weights.json"
    path.write_text("{not json")

    with pytest.raises(WeightsFormatError):
        load_params(path)


def test_zero_scale():
    for value in flatten(init_params(3, 2, scale=0.0)).values():
        assert_array_equal(value, np.zeros_like(value))
