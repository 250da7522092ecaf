import json
import re
from fractions import Fraction

import pytest

from compat_leibniz import (
    CATALOG,
    PAIR_CLAIMS,
    PAIR_CLAIMS_2D,
    PAIR_CLAIMS_3D,
    BasisChange,
    BracketTensor,
    InadmissibleParameter,
    PairClaim,
    apply_basis_change,
    instantiate,
    is_compatible_pair,
    report_to_json,
    sample_parameters,
    search_basis,
    search_witness_basis,
    verify_catalog,
    verify_claims,
    verify_pair_claim,
)
from compat_leibniz.catalog import CatalogEntry

F = Fraction

# Golden transcription of the printed tables, in the printed notation.
# "a" stands for the parameter alpha.
GOLDEN = {
    "2D:L1": "[e1,e2]=e2, [e2,e1]=-e2",
    "2D:L2": "[e1,e1]=e2",
    "2D:L3": "[e1,e1]=e2, [e2,e1]=e2",
    "3D:L1": "[e1,e3]=a e1, [e2,e3]=e1+e2, [e3,e3]=e1",
    "3D:L2": "[e3,e3]=e1, [e2,e3]=e1+e2",
    "3D:L3": "[e1,e2]=e3, [e1,e3]=-2e3, [e2,e1]=-e3, [e2,e3]=2e3, [e3,e1]=2e3, [e3,e2]=-2e3",
    "3D:L4": "[e1,e3]=a e1, [e2,e3]=-e2, [e3,e2]=e2, [e3,e3]=e1",
    "3D:L5": "[e1,e3]=e1, [e2,e3]=e1, [e3,e3]=e1",
    "3D:L6": "[e1,e3]=e2, [e3,e3]=e1",
    "3D:L7": "[e1,e2]=e1, [e1,e3]=e1, [e3,e2]=e1, [e3,e3]=e1",
    "3D:L8": "[e1,e1]=e2, [e2,e1]=e2",
    "3D:L9": "[e1,e2]=e2, [e1,e3]=a e3, [e2,e1]=-e2, [e3,e1]=-a e3",
    "3D:L10": "[e1,e2]=e2, [e2,e1]=-e2",
    "3D:L11": "[e1,e2]=e2, [e1,e3]=e2+e3, [e2,e1]=-e2, [e3,e1]=-e2-e3",
    "3D:L12": "[e2,e2]=e1, [e2,e3]=e1, [e3,e3]=a e1",
    "3D:L13": "[e2,e2]=e1, [e2,e3]=e1, [e3,e2]=e1",
    "3D:L14": "[e1,e3]=e1, [e2,e3]=e2, [e3,e3]=e1",
    "3D:L15": "[e1,e1]=e2",
    "3D:L16": "[e1,e2]=e2, [e1,e3]=e3, [e2,e1]=-e2, [e3,e1]=-e3",
    "3D:L17": "[e1,e2]=e3, [e2,e1]=-e3",
}
LIE = {"2D:L1", "3D:L3", "3D:L9", "3D:L10", "3D:L11", "3D:L16", "3D:L17"}
PARAMETRIC = {"3D:L1": {0}, "3D:L4": set(), "3D:L9": {0, 1}, "3D:L12": set()}

LISTED_3D = [
    ("L1", "L2"), ("L1", "L5"), ("L1", "L6"), ("L1", "L14"), ("L2", "L5"), ("L2", "L6"), ("L2", "L14"),
    ("L4", "L13"), ("L5", "L6"), ("L5", "L14"), ("L6", "L14"), ("L7", "L12"),
    ("L8", "L15"), ("L9", "L10"), ("L9", "L11"), ("L9", "L16"), ("L9", "L17"), ("L10", "L11"), ("L10", "L16"),
    ("L11", "L16"), ("L11", "L17"), ("L12", "L13"), ("L16", "L17"),
]


def parse_table(text: str, dim: int, alpha) -> BracketTensor:
    entries = []
    for lhs, rhs in re.findall(r"\[(e\d,e\d)\]=([^,]+(?:,(?!\s*\[)[^,]+)*)", text):
        i, j = (int(s[1]) for s in lhs.split(","))
        for sign, coef, k in re.findall(r"([+-]?)\s*(a |\d*)e(\d)", rhs):
            c = alpha if coef == "a " else F(int(coef) if coef else 1)
            entries.append((i, j, int(k), -c if sign == "-" else c))
    return BracketTensor.from_entries(dim, entries)


def golden_tensor(name, alpha=None) -> BracketTensor:
    return parse_table(GOLDEN[name], int(name[0]), alpha)


def sample_alphas(name):
    excluded = PARAMETRIC[name]
    return [a for a in (F(-2), F(0), F(2), F(1, 2)) if a not in excluded]


def test_parser_sanity():
    b = golden_tensor("3D:L1", F(3))
    assert b.coeffs[0, 2, 0] == 3 and b.coeffs[1, 2, 0] == 1 and b.coeffs[1, 2, 1] == 1
    assert golden_tensor("3D:L3").coeffs[0, 2, 2] == -2
    assert golden_tensor("3D:L11").coeffs[2, 0, 1] == -1


# golden comparison

def test_catalog_names():
    assert set(CATALOG) == set(GOLDEN)
    assert sum(1 for n in CATALOG if n.startswith("2D")) == 3
    assert sum(1 for n in CATALOG if n.startswith("3D")) == 17


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_catalog_matches_golden_transcription(name):
    if name in PARAMETRIC:
        for a in sample_alphas(name) + [F(7, 3)]:
            assert instantiate(name, {"alpha": a}) == golden_tensor(name, a)
    else:
        assert instantiate(name) == golden_tensor(name)
    assert CATALOG[name].is_lie == (name in LIE)


def test_instantiate_examples():
    assert instantiate("2D:L2") == BracketTensor.from_products(2, {(1, 1): {2: 1}})
    assert instantiate("3D:L3") == golden_tensor("3D:L3")
    with pytest.raises(InadmissibleParameter, match="excluded"):
        instantiate("3D:L9", {"alpha": 1})


def test_admissibility_and_parameter_errors():
    for name, excluded in PARAMETRIC.items():
        for a in excluded:
            with pytest.raises(InadmissibleParameter):
                instantiate(name, {"alpha": a})
        with pytest.raises(InadmissibleParameter):
            instantiate(name)
    with pytest.raises(InadmissibleParameter):
        instantiate("3D:L5", {"alpha": 2})
    with pytest.raises(InadmissibleParameter):
        instantiate("3D:L4", {"beta": 2})
    with pytest.raises(InadmissibleParameter, match="unknown"):
        instantiate("3D:L18")
    assert [p["alpha"] for p in sample_parameters("3D:L9")] == [-2, 2, F(1, 2)]
    assert sample_parameters("3D:L5") == [{}]


# verify_catalog

def test_verify_catalog_passes_everywhere():
    rows = verify_catalog()
    assert rows and all(r.ok for r in rows)
    assert {r.name for r in rows} == set(GOLDEN)
    assert all((r.antisymmetry is not None) == (r.name in LIE) for r in rows)
    assert len([r for r in rows if r.name.startswith("2D")]) == 3


def test_corrupted_entry_fails_with_witness():
    # 2D:L3 with the sign of [e2,e1] flipped is not Leibniz
    bad = CatalogEntry("2D:bad", 2, {(1, 1): {2: 1}, (2, 1): {2: -1}, (1, 2): {2: 1}}, ("solvable",))
    (row,) = verify_catalog({"2D:bad": bad})
    assert not row.ok and row.leibniz.witness is not None
    # a Lie-tagged entry that is not antisymmetric
    fake_lie = CatalogEntry("2D:fake", 2, {(1, 1): {2: 1}}, ("Lie",))
    (row,) = verify_catalog({"2D:fake": fake_lie})
    assert row.leibniz.ok and not row.antisymmetry.ok and row.antisymmetry.witness == (0, 0)


# pair claims

def test_claim_list_matches_printed_list():
    assert [(c.left, c.right) for c in PAIR_CLAIMS_2D] == [("2D:L2", "2D:L3")]
    assert [(c.left, c.right) for c in PAIR_CLAIMS_3D] == [(f"3D:{a}", f"3D:{b}") for a, b in LISTED_3D]
    fixed = {c.label: c.fixed for c in PAIR_CLAIMS if c.fixed}
    assert fixed == {"3D:(L4,L13) alpha=-2": (("3D:L4", F(-2)),), "3D:(L7,L12) alpha=0": (("3D:L12", F(0)),)}


def test_verify_pair_claim_examples():
    assert verify_pair_claim(PAIR_CLAIMS_2D[0]).status == "compatible-at-canonical-basis"
    v = verify_pair_claim(PairClaim("2D:L1", "2D:L2"))
    assert v.status == "defect-found" and v.verdict.witness == (0, 0, 0) and list(v.verdict.defect) == [0, 1]
    claim = next(c for c in PAIR_CLAIMS if c.label == "3D:(L4,L13) alpha=-2")
    b1, b2 = golden_tensor("3D:L4", F(-2)), golden_tensor("3D:L13")
    assert verify_pair_claim(claim).compatible == bool(is_compatible_pair(b1, b2))
    with pytest.raises(InadmissibleParameter):
        verify_pair_claim(next(c for c in PAIR_CLAIMS if c.label == "3D:(L9,L10)"))
    with pytest.raises(InadmissibleParameter):
        verify_pair_claim(PairClaim("3D:L9", "3D:L10"), {"3D:L9": 1})


def test_two_dimensional_negative_space():
    compatible = set()
    for a, b in (("L1", "L2"), ("L1", "L3"), ("L2", "L3")):
        if verify_pair_claim(PairClaim(f"2D:{a}", f"2D:{b}")).compatible:
            compatible.add((a, b))
    assert compatible == {("L2", "L3")}


@pytest.mark.parametrize("claim", PAIR_CLAIMS, ids=lambda c: c.label)
def test_verify_pair_claim_symmetric(claim):
    swapped = PairClaim(claim.right, claim.left, claim.fixed)
    for params in claim.parameter_choices():
        assert verify_pair_claim(claim, params).compatible == verify_pair_claim(swapped, params).compatible


@pytest.mark.parametrize("claim", PAIR_CLAIMS, ids=lambda c: c.label)
def test_listed_pairs_against_golden_tensors(claim):
    # empirical record: every listed pair is compatible in the printed bases at each sampled parameter
    for params in claim.parameter_choices():
        def gold(n):
            return golden_tensor(n, params.get(n))
        assert bool(is_compatible_pair(gold(claim.left), gold(claim.right)))
        assert verify_pair_claim(claim, params).compatible


# basis search

def test_search_examples():
    claim = PAIR_CLAIMS_2D[0]
    assert search_witness_basis(claim, attempts=0) == BasisChange.identity(2)
    assert search_witness_basis(PairClaim("2D:L1", "2D:L2"), attempts=0) is None


def test_search_finds_and_confirms_witness():
    b1, b2 = instantiate("3D:L5"), instantiate("3D:L15")
    assert not is_compatible_pair(b1, b2)
    P = search_basis(b1, b2, attempts=10_000, seed=42)
    assert P is not None
    assert is_compatible_pair(b1, apply_basis_change(b2, P))
    assert search_basis(b1, b2, attempts=10_000, seed=42) == P


def test_search_gives_up_on_two_dimensional_non_pairs():
    assert search_witness_basis(PairClaim("2D:L1", "2D:L2"), attempts=2000, seed=42) is None


def test_verify_claims_report():
    rows = verify_claims()
    assert all(r.status == "verified" for r in rows)
    labels = [r.label for r in rows]
    assert labels[0] == "2D:(L2,L3)" and labels.index("3D:(L9,L10)") < labels.index("3D:(L10,L11)")
    data = json.loads(report_to_json(rows))
    assert data["summary"] == {"verified": len(rows), "witness-found": 0, "unresolved": 0}
    bad = verify_claims([PairClaim("2D:L1", "2D:L2"), PairClaim("3D:L5", "3D:L15")], attempts=2000, seed=42)
    assert [r.status for r in bad] == ["unresolved", "witness-found"]
    assert "witness (e1,e1,e1)" in bad[0].witness and bad[1].basis
