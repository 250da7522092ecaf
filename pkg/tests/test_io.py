import json
import os
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from compat_leibniz import (
    BracketTensor,
    Cochain,
    CompatCochain,
    CompatibleBimodule,
    CompatiblePair,
    FormatError,
    build_extension,
    io,
)

from conftest import COMPAT_PAIR, EXAMPLE_3D, catalog_pairs, random_bracket, sample, seeds

F = Fraction


def write(tmp_path, name, data) -> str:
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


# scalars

@given(st.fractions(max_denominator=50))
def test_scalar_round_trip(v):
    assert io.scalar_from_json(io.scalar_to_json(v), "x") == v
    out = io.scalar_to_json(v)
    assert isinstance(out, int) if v.denominator == 1 else out == f"{v.numerator}/{v.denominator}"


@pytest.mark.parametrize("bad", [1.5, True, None, [1], "x/2", "1/0"])
def test_scalar_rejects(bad):
    with pytest.raises(FormatError) as info:
        io.scalar_from_json(bad, "here")
    assert info.value.location == "here"


# algebras

def test_sample_files_are_canonical():
    for name in sorted(os.listdir(sample(""))):
        text = open(sample(name)).read()
        assert text == io.dumps(json.loads(text)), name


@pytest.mark.parametrize("name", ["example3d.json", "compatible-example.json", "nonexample-pair.json",
                                  "abelian2.json", "pair-2d-L2-L3.json"])
def test_algebra_files_round_trip_bit_exact(name):
    data = io.load_json(sample(name))
    tensors = io.algebra_from_json(data)
    obj = tensors[0] if len(tensors) == 1 else CompatiblePair(*tensors)
    assert io.dumps(io.algebra_to_json(obj)) == open(sample(name)).read()


def test_example_files_contain_the_stated_brackets():
    (b,) = io.algebra_from_json(io.load_json(sample("example3d.json")))
    assert b == EXAMPLE_3D
    assert io.pair_from_json(io.load_json(sample("compatible-example.json"))) == COMPAT_PAIR


@given(seeds)
def test_random_algebra_round_trip(seed):
    rng = random.Random(seed)
    d = rng.randint(0, 4)
    pair = CompatiblePair(random_bracket(rng, d), random_bracket(rng, d))
    text = io.dumps(io.algebra_to_json(pair))
    back = io.pair_from_json(json.loads(text))
    assert back.b1 == pair.b1 and back.b2 == pair.b2
    assert io.dumps(io.algebra_to_json(back)) == text


@pytest.mark.parametrize("data,location", [
    ({"brackets": [[]]}, "algebra"),
    ({"dim": -1, "brackets": [[]]}, "algebra.dim"),
    ({"dim": 2, "brackets": []}, "algebra.brackets"),
    ({"dim": 2, "brackets": [[[1, 3, 1, 1]]]}, "algebra.brackets[0][0][1]"),
    ({"dim": 2, "brackets": [[], [[1, 1, 1]]]}, "algebra.brackets[1][0]"),
    ({"dim": 2, "brackets": [[[1, 1, 1, 0.5]]]}, "algebra.brackets[0][0][3]"),
    ([1, 2], "algebra"),
])
def test_algebra_format_errors_name_the_location(data, location):
    with pytest.raises(FormatError) as info:
        io.algebra_from_json(data)
    assert info.value.location == location


def test_repeated_entries_add_up():
    (b,) = io.algebra_from_json({"dim": 2, "brackets": [[[1, 1, 2, "1/2"], [1, 1, 2, "1/2"]]]})
    assert b == BracketTensor.from_products(2, {(1, 1): {2: 1}})


def test_pair_needs_two_brackets():
    with pytest.raises(FormatError, match="two brackets"):
        io.pair_from_json({"dim": 1, "brackets": [[]]})


def test_read_prefixes_the_path(tmp_path):
    p = write(tmp_path, "bad.json", {"dim": 2, "brackets": [[[9, 1, 1, 1]]]})
    with pytest.raises(FormatError) as info:
        io.read(p, io.algebra_from_json)
    assert info.value.location == p and "algebra.brackets[0][0][0]" in str(info.value)
    p2 = write(tmp_path, "broken.json", "{not json")
    with pytest.raises(FormatError, match="invalid JSON"):
        io.load_json(p2)
    with pytest.raises(FormatError, match="cannot read"):
        io.load_json(str(tmp_path / "missing.json"))


# cochains, bimodules, deformations, gauges, extensions

@given(seeds)
def test_cochain_round_trips(seed):
    rng = random.Random(seed)
    n, d, m = rng.randint(0, 3), rng.randint(1, 3), rng.randint(1, 2)
    vals = [F(rng.randint(-3, 3), rng.randint(1, 3)) if rng.random() < 0.4 else F(0) for _ in range(d ** n * m)]
    c = Cochain.from_flat(n, d, m, vals)
    assert io.cochain_from_json(json.loads(io.dumps(io.cochain_to_json(c)))) == c
    k = max(n, 1)
    comps = tuple(Cochain.from_flat(k, d, m, [F(rng.randint(-1, 1)) for _ in range(d ** k * m)]) for _ in range(k))
    h = CompatCochain(k, comps)
    assert io.compat_cochain_from_json(json.loads(io.dumps(io.compat_cochain_to_json(h)))) == h


def test_cochain_format_errors():
    with pytest.raises(FormatError) as info:
        io.cochain_from_json({"degree": 1, "dimG": 2, "dimM": 1, "entries": [[3, 1, 1]]})
    assert info.value.location == "cochain.entries[0][0]"
    with pytest.raises(FormatError):
        io.cochain_from_json({"degree": 1, "dimG": 2, "entries": []})


def test_bimodule_round_trip_and_errors():
    cbm = CompatibleBimodule.adjoint(COMPAT_PAIR)
    assert io.bimodule_from_json(json.loads(io.dumps(io.bimodule_to_json(cbm))), 3) == cbm
    data = io.load_json(sample("adjoint-compatible-example.json"))
    assert io.bimodule_from_json(data, 3) == cbm
    with pytest.raises(FormatError) as info:
        io.bimodule_from_json({"dimM": 1, "l1": [], "r1": [], "l2": []}, 3)
    assert info.value.location == "bimodule" and "r2" in str(info.value)
    with pytest.raises(FormatError) as info:
        io.bimodule_from_json({"dimM": 1, "l1": [], "r1": [], "l2": [[1, 2, 1, 1]], "r2": []}, 3)
    assert info.value.location == "bimodule.l2[0][1]"


def test_deformation_round_trip(tmp_path):
    defm = io.deformation_from_json(io.load_json(sample("deformation-example.json")), sample(""))
    assert defm.base == COMPAT_PAIR and defm.order == 1
    inline = io.deformation_to_json(defm)
    assert io.deformation_from_json(json.loads(io.dumps(inline))) == defm
    linked = io.deformation_to_json(defm, algebra="compatible-example.json")
    assert linked["algebra"] == "compatible-example.json"
    assert io.deformation_from_json(linked, sample("")) == defm


def test_deformation_format_errors():
    base = io.algebra_to_json(COMPAT_PAIR)
    with pytest.raises(FormatError) as info:
        io.deformation_from_json({"algebra": base, "order": 1, "terms1": {"2": []}, "terms2": {}})
    assert "deformation.terms1" in str(info.value)
    with pytest.raises(FormatError):
        io.deformation_from_json({"algebra": base, "order": -1, "terms1": {}, "terms2": {}})


def test_gauge_round_trip():
    g = io.gauge_from_json(io.load_json(sample("gauge-example.json")), 3)
    assert g.order == 1 and g.phi[0].coeffs[0, 1] == 1 and g.phi[0].coeffs[2, 0] == F(1, 2)
    assert io.gauge_from_json(json.loads(io.dumps(io.gauge_to_json(g))), 3).phi == g.phi


def test_extension_round_trip_and_defaults():
    pair = dict(catalog_pairs())["2D:(L2,L3)"]
    cbm = CompatibleBimodule.adjoint(pair)
    zero = Cochain.zero(2, 2, 2)
    ext = build_extension(pair, cbm, zero, zero)
    data = json.loads(io.dumps(io.extension_to_json(ext)))
    back = io.extension_from_json(data)
    assert back.total == ext.total and (back.split == ext.split).all()
    for key in ("inclusion", "projection", "splitting"):
        del data[key]
    default = io.extension_from_json(data)
    assert (default.incl == ext.incl).all() and (default.proj == ext.proj).all()
    data["dimM"] = 3
    with pytest.raises(FormatError) as info:
        io.extension_from_json(data)
    assert info.value.location == "extension.algebra.dim"
