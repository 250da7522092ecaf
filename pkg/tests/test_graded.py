import itertools
import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given

from compat_leibniz import (
    BimoduleActions,
    BracketTensor,
    Cochain,
    DimensionMismatch,
    GradedElement,
    NotMaurerCartan,
    circ,
    com_bracket,
    delta,
    differential_d,
    instantiate,
    is_compatible_pair,
    is_leibniz,
    leibniz_defect,
    mc_check,
    nr_bracket,
    psi,
    shuffles,
    vector,
)

from conftest import (
    COMPAT_B1,
    COMPAT_B2,
    EXAMPLE_3D,
    NONEX_B1,
    NONEX_B2,
    NONEX_SUM,
    catalog_pairs,
    catalog_tensors,
    random_bracket,
    seeds,
)

F = Fraction


def random_cochain(rng, n, d) -> Cochain:
    return Cochain.from_flat(n, d, d, [F(rng.randint(-2, 2)) for _ in range(d ** n * d)])


def random_element(rng, degree, d) -> GradedElement:
    return GradedElement(degree, tuple(random_cochain(rng, degree + 1, d) for _ in range(degree + 1)))


# brute-force circle product: evaluate the printed double sum pointwise

def bf_shuffles(p, q):
    out = []
    for perm in itertools.permutations(range(1, p + q + 1)):
        if list(perm[:p]) == sorted(perm[:p]) and list(perm[p:]) == sorted(perm[p:]):
            inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
            out.append((perm, -1 if inv % 2 else 1))
    return out


def bf_circ(alpha: Cochain, beta: Cochain) -> dict:
    d = alpha.dim_g
    p, q = alpha.degree - 1, beta.degree - 1
    N = p + q + 1
    A, B = alpha.coeffs, beta.coeffs
    out = {}
    for xs in itertools.product(range(d), repeat=N):
        x = (None,) + xs  # 1-based
        total = [F(0)] * d
        for k in range(1, p + 2):
            outer = (-1) ** (q * (k - 1))
            for perm, sgn in bf_shuffles(q, p - k + 1):
                s = lambda j: k + perm[j - k - 1]  # noqa: E731, acts on positions k+1..N
                inner = [x[s(k + j)] for j in range(1, q + 1)]
                bval = [B[(x[k], *inner, c)] for c in range(d)]
                tail = [x[s(j)] for j in range(k + q + 1, N + 1)]
                head = [x[j] for j in range(1, k)]
                for c in range(d):
                    if not bval[c]:
                        continue
                    for o in range(d):
                        total[o] += outer * sgn * bval[c] * A[(*head, c, *tail, o)]
        out[xs] = total
    return out


def as_dict(c: Cochain) -> dict:
    d = c.dim_g
    return {xs: [c.coeffs[xs + (k,)] for k in range(d)] for xs in itertools.product(range(d), repeat=c.degree)}


# shuffles

def test_shuffle_examples():
    s11 = shuffles(1, 1)
    assert [(s.permutation, s.sign) for s in s11] == [((1, 2), 1), ((2, 1), -1)]
    assert [(s.permutation, s.sign) for s in shuffles(0, 3)] == [((1, 2, 3), 1)]
    assert len(shuffles(2, 1)) == 3
    with pytest.raises(ValueError):
        shuffles(-1, 2)


@pytest.mark.parametrize("p,q", [(p, q) for p in range(6) for q in range(6)])
def test_shuffle_counts_and_invariants(p, q):
    sh = shuffles(p, q)
    assert len(sh) == comb(p + q, p)
    firsts = [s.permutation[:p] for s in sh]
    assert firsts == sorted(firsts)
    for s in sh:
        assert list(s.permutation[:p]) == sorted(s.permutation[:p])
        assert list(s.permutation[p:]) == sorted(s.permutation[p:])
    if p + q <= 5:
        assert sorted((s.permutation, s.sign) for s in sh) == sorted(bf_shuffles(p, q))


# circle product

def test_circ_examples():
    L2 = Cochain.from_bracket(instantiate("2D:L2"))
    mm = circ(L2, L2)
    assert not any(mm.coeffs[0, 0, 0, k] for k in range(2))
    assert circ(L2, Cochain.zero(2, 2, 2)).is_zero()
    mu = Cochain.from_bracket(NONEX_SUM)
    val = [circ(mu, mu).coeffs[0, 0, 0, k] for k in range(3)]
    assert val in ([0, 0, 1], [0, 0, -1])


def test_circ_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        circ(Cochain.zero(2, 2, 2), Cochain.zero(2, 3, 3))
    with pytest.raises(DimensionMismatch):
        circ(Cochain.zero(2, 2, 3), Cochain.zero(2, 2, 3))


@given(seeds)
def test_circ_matches_brute_force(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 2)
    a, b = rng.randint(1, 3), rng.randint(1, 3)
    alpha, beta = random_cochain(rng, a, d), random_cochain(rng, b, d)
    assert as_dict(circ(alpha, beta)) == bf_circ(alpha, beta)


def test_m_circ_m_is_minus_defect():
    for m in (EXAMPLE_3D, NONEX_SUM, COMPAT_B2):
        mm = circ(m, m)
        for i, j, k in itertools.product(range(3), repeat=3):
            e = [vector([int(t == s) for t in range(3)]) for s in (i, j, k)]
            assert [mm.coeffs[i, j, k, o] for o in range(3)] == list(-leibniz_defect(m, *e))


# graded bracket

def test_nr_bracket_examples():
    assert nr_bracket(EXAMPLE_3D, EXAMPLE_3D).is_zero()
    mm = nr_bracket(NONEX_SUM, NONEX_SUM)
    assert not mm.is_zero()
    for i, j, k in itertools.product(range(3), repeat=3):
        e = [vector([int(t == s) for t in range(3)]) for s in (i, j, k)]
        assert [mm.coeffs[i, j, k, o] for o in range(3)] == list(-2 * leibniz_defect(NONEX_SUM, *e))
    rng = random.Random(1)
    assert nr_bracket(random_cochain(rng, 2, 3), Cochain.zero(3, 3, 3)).is_zero()


@given(seeds)
def test_graded_antisymmetry(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 3)
    a, b = rng.randint(1, 3), rng.randint(1, 3)
    alpha, beta = random_cochain(rng, a, d), random_cochain(rng, b, d)
    p, q = a - 1, b - 1
    assert (nr_bracket(alpha, beta) + nr_bracket(beta, alpha) * (-1) ** (p * q)).is_zero()


@given(seeds)
def test_graded_jacobi_nr_bracket(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 2)
    degs = [rng.randint(1, 2) for _ in range(3)]
    x, y, z = (random_cochain(rng, n, d) for n in degs)
    p, q, r = (n - 1 for n in degs)
    # [x,[y,z]] = [[x,y],z] + (-1)^{pq} [y,[x,z]]
    lhs = nr_bracket(x, nr_bracket(y, z))
    rhs = nr_bracket(nr_bracket(x, y), z) + nr_bracket(y, nr_bracket(x, z)) * (-1) ** (p * q)
    assert lhs == rhs


@pytest.mark.parametrize("label,b", catalog_tensors())
def test_mm_zero_iff_leibniz_catalog(label, b):
    assert nr_bracket(b, b).is_zero() == bool(is_leibniz(b))


def test_mm_zero_iff_leibniz_random_maps():
    rng = random.Random(20)
    seen = set()
    for _ in range(20):
        d = rng.randint(1, 3)
        b = random_bracket(rng, d, density=rng.choice([0.1, 0.2, 0.5]))
        ok = bool(is_leibniz(b))
        seen.add(ok)
        assert nr_bracket(b, b).is_zero() == ok
    assert seen == {True, False}


# Maurer-Cartan checks

def test_mc_check_examples():
    assert all(c.is_zero() for c in mc_check(COMPAT_B1, COMPAT_B2))
    assert all(c.is_zero() for c in mc_check(EXAMPLE_3D, BracketTensor.zero(3)))
    a, b, c = mc_check(NONEX_B1, NONEX_B2)
    assert a.is_zero() and not b.is_zero() and c.is_zero()


@pytest.mark.parametrize("label,pair", catalog_pairs())
def test_mc_check_agrees_with_compatibility(label, pair):
    assert all(c.is_zero() for c in mc_check(pair.b1, pair.b2)) == bool(is_compatible_pair(pair.b1, pair.b2))


def test_mc_check_agrees_with_compatibility_on_mixed_pairs():
    tensors = [b for _, b in catalog_tensors() if b.dim == 3]
    rng = random.Random(7)
    outcomes = set()
    for _ in range(30):
        b1, b2 = rng.choice(tensors), rng.choice(tensors)
        ok = bool(is_compatible_pair(b1, b2))
        outcomes.add(ok)
        assert all(c.is_zero() for c in mc_check(b1, b2)) == ok
    assert outcomes == {True, False}


# tuple algebra

def test_com_bracket_examples():
    h = GradedElement(1, (COMPAT_B1, COMPAT_B2))
    m1, m2 = Cochain.from_bracket(COMPAT_B1), Cochain.from_bracket(COMPAT_B2)
    hh = com_bracket(h, h)
    assert hh == GradedElement(2, (nr_bracket(m1, m1), nr_bracket(m1, m2) * 2, nr_bracket(m2, m2)))
    rng = random.Random(4)
    k = random_element(rng, 1, 3)
    assert com_bracket(GradedElement.zero(1, 3), k).is_zero()
    h1, h2 = random_cochain(rng, 2, 3), random_cochain(rng, 2, 3)
    k1, k2 = k.components
    got = com_bracket(GradedElement(1, (h1, h2)), k)
    assert got == GradedElement(2, (nr_bracket(h1, k1), nr_bracket(h1, k2) + nr_bracket(h2, k1), nr_bracket(h2, k2)))


def test_graded_element_validation():
    with pytest.raises(DimensionMismatch):
        GradedElement(1, (Cochain.zero(2, 2, 2),))
    with pytest.raises(DimensionMismatch):
        GradedElement(0, (Cochain.zero(2, 2, 2),))
    with pytest.raises(DimensionMismatch):
        com_bracket(GradedElement.zero(1, 2), GradedElement.zero(1, 3))


@given(seeds)
def test_com_bracket_antisymmetry_and_jacobi(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 2)
    degs = [rng.randint(0, 1) for _ in range(3)]
    x, y, z = (random_element(rng, n, d) for n in degs)
    p, q, _ = degs
    assert (com_bracket(x, y) + com_bracket(y, x) * (-1) ** (p * q)).is_zero()
    lhs = com_bracket(x, com_bracket(y, z))
    rhs = com_bracket(com_bracket(x, y), z) + com_bracket(y, com_bracket(x, z)) * (-1) ** (p * q)
    assert lhs == rhs


def test_psi_examples():
    assert psi(GradedElement(1, (COMPAT_B1, COMPAT_B2))) == Cochain.from_bracket(COMPAT_B1 + COMPAT_B2)
    assert psi(GradedElement.zero(2, 3)).is_zero()


@given(seeds)
def test_psi_is_a_morphism(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 3)
    h = random_element(rng, rng.randint(0, 1), d)
    k = random_element(rng, rng.randint(0, 1), d)
    assert psi(com_bracket(h, k)) == nr_bracket(psi(h), psi(k))


# differential

def test_differential_examples():
    h = GradedElement(1, (COMPAT_B1, COMPAT_B2))
    assert differential_d(COMPAT_B1, COMPAT_B2, h).is_zero()
    assert differential_d(COMPAT_B1, COMPAT_B2, GradedElement.zero(1, 3)).is_zero()
    with pytest.raises(NotMaurerCartan, match=r"\[m1,m2\]"):
        differential_d(NONEX_B1, NONEX_B2, h)


@pytest.mark.parametrize("label,pair", catalog_pairs()[::3])
def test_differential_squares_to_zero(label, pair):
    rng = random.Random(label)
    for degree in (0, 1):
        h = random_element(rng, degree, pair.dim)
        assert differential_d(pair.b1, pair.b2, differential_d(pair.b1, pair.b2, h)).is_zero()


@pytest.mark.parametrize("label,b", catalog_tensors()[::4])
def test_bracket_with_structure_is_signed_coboundary(label, b):
    # single structure, adjoint coefficients: [m, f] = (-1)^(n+1) delta f on an n-cochain
    rng = random.Random(label)
    acts = BimoduleActions.adjoint(b)
    for n in (1, 2):
        f = random_cochain(rng, n, b.dim)
        assert nr_bracket(b, f) == delta(b, acts, f) * (-1) ** (n + 1)
