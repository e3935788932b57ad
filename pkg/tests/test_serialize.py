import math

import numpy as np
import pytest

from cpdist.dilations import minimal_dilation
from cpdist.maps import random_channel
from cpdist.serialize import (
    channel_from_json,
    channel_to_json,
    dilation_from_dict,
    dilation_to_dict,
    dumps,
    loads,
    read_json,
    write_json,
)


def test_dumps_is_deterministic_and_round_trips_doubles():
    doc = {"v": math.pi, "w": 1.0 / 3.0, "tiny": 2.0 ** -1074, "k": 7}
    a = dumps(doc)
    b = dumps(doc)
    assert a == b
    back = loads(a)
    assert back["v"] == math.pi
    assert back["w"] == 1.0 / 3.0
    assert back["tiny"] == 2.0 ** -1074
    assert back["k"] == 7


def test_dumps_layout():
    assert dumps([1.5, 2.5]) == "[1.5, 2.5]\n"
    assert dumps({}) == "{}\n"
    assert dumps([]) == "[]\n"
    assert dumps({"a": True, "b": None}) == '{\n  "a": true,\n  "b": null\n}\n'
    # short numeric leaf lists stay inline inside nested structures
    text = dumps({"m": [[1.0, 2.0], [3.0, 4.0]]})
    assert "[1, 2]" in text and "[3, 4]" in text


def test_dumps_preserves_key_order():
    text = dumps({"z": 1, "a": 2, "m": 3})
    assert text.index('"z"') < text.index('"a"') < text.index('"m"')


def test_dumps_rejects_bad_values():
    with pytest.raises(ValueError):
        dumps({"v": float("nan")})
    with pytest.raises(ValueError):
        dumps({"v": float("inf")})
    with pytest.raises(ValueError):
        dumps({1: "x"})
    with pytest.raises(ValueError):
        dumps({"v": object()})


def test_dumps_handles_numpy_scalars():
    back = loads(dumps({"a": np.float64(0.1), "b": np.int64(3)}))
    assert back["a"] == 0.1
    assert back["b"] == 3


def test_loads_rejects_malformed():
    with pytest.raises(ValueError):
        loads("{not json")


def test_file_round_trip(tmp_path):
    path = tmp_path / "doc.json"
    doc = {"name": "x", "values": [0.1, 0.2, 0.3]}
    write_json(path, doc)
    assert read_json(path) == doc
    # identical content on rewrite
    first = path.read_bytes()
    write_json(path, doc)
    assert path.read_bytes() == first


def test_channel_json_round_trip():
    t = random_channel(2, 3, 2, seed=141)
    text = channel_to_json(t)
    back = channel_from_json(text)
    assert (back.d_in, back.d_out) == (2, 3)
    assert np.allclose(back.choi, t.choi, atol=0.0)
    # byte-identical re-serialization
    assert channel_to_json(back) == text


def test_dilation_dict_round_trip():
    t = random_channel(2, 2, 3, seed=142)
    dil = minimal_dilation(t)
    doc = dilation_to_dict(dil)
    assert doc["d"] == 2 and doc["n"] == 2 and doc["m"] == 3
    back = dilation_from_dict(doc)
    assert np.array_equal(back.v, dil.v)
    # survives a serialization pass
    back2 = dilation_from_dict(loads(dumps(doc)))
    assert np.array_equal(back2.v, dil.v)


def test_dilation_from_dict_rejects_malformed():
    with pytest.raises(ValueError):
        dilation_from_dict("not a dict")
    with pytest.raises(ValueError):
        dilation_from_dict({"d": 2, "n": 2, "V": []})
    t = random_channel(2, 2, 2, seed=143)
    doc = dilation_to_dict(minimal_dilation(t))
    doc["m"] = 3   # shape no longer matches
    with pytest.raises(ValueError):
        dilation_from_dict(doc)
