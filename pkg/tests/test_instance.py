import json
import warnings

import pytest

from genhw.errors import InstanceError
from genhw.instance import build_spec, load_spec, monomials, parse_spec, serialize_spec



def doc(**over):
    obj = {"p": 7, "a": 1, "n": 2, "d": 3,
           "terms": [{"exponents": [3, 0, 0], "coeff": "1"},
                     {"exponents": [0, 3, 0], "coeff": 1},
                     {"exponents": [0, 0, 3], "coeff": "-1"}]}
    obj.update(over)
    return json.dumps(obj)


def test_parse_and_round_trip():
    spec = parse_spec(doc())
    assert spec.N == 3 and spec.q == 7 and spec.mu == 0
    assert spec.coeffs[2] == 6
    assert spec.support[0] == (3, 0, 0, 1)
    again = parse_spec(serialize_spec(spec))
    assert again == spec


def test_extension_coefficients():
    spec = parse_spec(json.dumps({"p": 3, "a": 2, "n": 1, "d": 2, "terms": [
        {"exponents": [2, 0], "coeff": "g+1"}, {"exponents": [0, 2], "coeff": "2*g"}]}))
    assert spec.coeffs[0] == spec.field.gen + 1
    assert spec.describe()["modulus"] == [1, 0, 1]


@pytest.mark.parametrize("text,fragment", [
    (doc(p=4), "not prime"),
    (doc(d=1), "d = 1"),
    (doc(terms=[{"exponents": [2, 0, 0], "coeff": "1"}]), "non-homogeneous"),
    (doc(terms=[{"exponents": [3, 0], "coeff": "1"}]), "entries"),
    (doc(terms=[{"exponents": [3, 0, 0], "coeff": "1"}, {"exponents": [3, 0, 0], "coeff": "2"}]),
     "duplicate"),
    (doc(terms=[{"exponents": [3, 0, 0], "coeff": "0"}]), "degenerate"),
    (doc(terms=[{"exponents": [3, 0, 0], "coeff": "g"}]), "generator"),
    (doc(terms=[{"exponents": [3, 0, 0], "coeff": "1", "x": 1}]), "unknown term key"),
    (doc(extra=1), "unknown key"),
    (json.dumps({"p": 2}), "missing key"),
    ("not json", "not valid JSON"),
    (doc(terms=[{"exponents": [3, -1, 1], "coeff": "1"}]), "negative"),
])
def test_rejections(text, fragment):
    with pytest.raises(InstanceError, match=fragment):
        parse_spec(text)


def test_zero_coefficient_warns_and_stays():
    with pytest.warns(UserWarning, match="zero coefficients"):
        spec = build_spec(2, 1, 2, 2, [(2, 0, 0), (0, 1, 1)], [1, 0])
    assert spec.N == 2


def test_load_spec_missing_file(tmp_path):
    with pytest.raises(InstanceError):
        load_spec(tmp_path / "nope.hw")


def test_monomials():
    from math import comb
    for n in range(1, 4):
        for d in range(1, 5):
            ms = monomials(n, d)
            assert len(ms) == comb(n + d, n) == len(set(ms))
            assert all(sum(m) == d for m in ms)
            assert ms == sorted(ms, reverse=True)


def test_shipped_instances_load(instances_dir):
    files = sorted(instances_dir.glob("*.hw"))
    assert files
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for f in files:
            load_spec(f)
