from __future__ import annotations

import os
import sys
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from compat_leibniz import (
    PAIR_CLAIMS,
    BasisChange,
    BracketTensor,
    CompatiblePair,
    apply_basis_change,
    instantiate,
    sample_parameters,
    CATALOG,
)
from compat_leibniz.catalog import _tensors

settings.register_profile(
    "default", deadline=None, max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SAMPLES = os.path.join(os.path.dirname(__file__), "..", "samples")


def sample(name: str) -> str:
    return os.path.abspath(os.path.join(SAMPLES, name))


# paper examples

EXAMPLE_3D = BracketTensor.from_products(3, {(1, 3): {2: 1}, (3, 3): {1: 1}})
COMPAT_B1 = BracketTensor.from_products(3, {(1, 1): {3: 1}})
COMPAT_B2 = BracketTensor.from_products(3, {(1, 1): {2: 1}, (2, 1): {3: 1}})
COMPAT_PAIR = CompatiblePair(COMPAT_B1, COMPAT_B2)
NONEX_B1 = BracketTensor.from_products(3, {(1, 2): {3: 1}, (2, 1): {3: -1}})
NONEX_B2 = BracketTensor.from_products(3, {(1, 1): {2: 1}, (2, 1): {3: 1}})
NONEX_SUM = BracketTensor.from_products(3, {(1, 1): {2: 1}, (2, 2): {3: 1}, (1, 2): {3: 1}})


def catalog_tensors() -> list[tuple[str, BracketTensor]]:
    out = []
    for name in CATALOG:
        for params in sample_parameters(name):
            label = name + (f"[alpha={params['alpha']}]" if params else "")
            out.append((label, instantiate(name, params)))
    return out


def catalog_pairs() -> list[tuple[str, CompatiblePair]]:
    """Every listed pair at every sampled parameter (all compatible at the printed bases)."""
    out = []
    for claim in PAIR_CLAIMS:
        for params in claim.parameter_choices():
            b1, b2 = _tensors(claim, params)
            label = claim.label + "".join(f" alpha={a}" for a in params.values() if "alpha=" not in claim.label)
            out.append((label, CompatiblePair(b1, b2)))
    return out


def random_matrix(rng: random.Random, rows: int, cols: int, lo: int = -2, hi: int = 2) -> list[list[Fraction]]:
    return [[Fraction(rng.randint(lo, hi)) for _ in range(cols)] for _ in range(rows)]


def random_basis_change(rng: random.Random, d: int) -> BasisChange:
    while True:
        m = random_matrix(rng, d, d)
        try:
            return BasisChange(m)
        except ValueError:
            continue


def random_bracket(rng: random.Random, d: int, density: float = 0.3) -> BracketTensor:
    entries = []
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            for k in range(1, d + 1):
                if rng.random() < density:
                    entries.append((i, j, k, Fraction(rng.randint(-2, 2), rng.choice([1, 1, 2]))))
    return BracketTensor.from_entries(d, entries)


def conjugated_pair(rng: random.Random, pair: CompatiblePair) -> CompatiblePair:
    P = random_basis_change(rng, pair.dim)
    return CompatiblePair(apply_basis_change(pair.b1, P), apply_basis_change(pair.b2, P))


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@pytest.fixture(scope="session")
def all_catalog_pairs():
    return catalog_pairs()


def qq_rank(rows) -> int:
    """Rank by sympy over QQ; ``rows`` is a dense list of rational rows."""
    from sympy import QQ
    from sympy.polys.matrices import DomainMatrix
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    data = [[QQ(Fraction(v).numerator, Fraction(v).denominator) for v in r] for r in rows]
    return DomainMatrix(data, (len(data), len(data[0])), QQ).rank()


def pytest_terminal_summary(terminalreporter):
    """Print the acceptance criteria lines recorded by test_acceptance.py."""
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
