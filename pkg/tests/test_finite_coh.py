import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import h1_enumerate
from surfacelie import finite_coh as fc
from surfacelie.errors import ParseError, TooLarge


def negation(k, r):
    return fc.cyclic_module(2, -np.eye(r, dtype=int).astype(object), 2 ** k)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("r", [1, 2])
def test_negation_module_has_exponent_two(k, r):
    res = fc.h1_bruteforce(fc.cyclic_group(2), negation(k, r))
    assert res.divisors == (2,) * r
    assert res.exponent == 2


def test_trivial_action():
    # H^1(Z/n, Z/m) with trivial action is Hom(Z/n, Z/m) = Z/gcd(n, m)
    res = fc.h1_bruteforce(fc.cyclic_group(4), fc.cyclic_module(4, [[1]], 6))
    assert res.order == 2


def test_trivial_group():
    G = fc.trivial_group()
    M = fc.FiniteModule(5, 2, (np.eye(2, dtype=int).astype(object),))
    assert fc.h1_bruteforce(G, M).order == 1


def test_center_kills():
    # a central element acting as -1 forces H^1 to have exponent dividing 2
    G = fc.cyclic_group(4)
    M = fc.cyclic_module(4, [[0, -1], [1, 0]], 8)
    assert G.is_central(2) and np.array_equal(M.action[2] % 8, (-np.eye(2, dtype=int)) % 8)
    res = fc.h1_bruteforce(G, M)
    assert res.exponent in (1, 2)
    assert res.divisors == (2,)


def test_klein_four():
    V4 = fc.direct_product(fc.cyclic_group(2), fc.cyclic_group(2))
    acts = tuple(((-1) ** (i // 2 + i % 2) * np.eye(2, dtype=int)).astype(object) for i in range(4))
    M = fc.FiniteModule(4, 2, acts)
    res = fc.h1_bruteforce(V4, M)
    order, exponent = h1_enumerate(V4.mult, [a.tolist() for a in M.action], 4)
    assert res.order == order and res.exponent == exponent


def test_matrix_group_sl2_f2():
    G, elems = fc.matrix_group([[[1, 1], [0, 1]], [[1, 0], [1, 1]]], 2)
    assert G.order == 6
    assert fc.invariants_mod_p([elems[s] for s in G.generators()], 2, 2) == []


small_modules = st.sampled_from([
    (3, [[1]], 3), (2, [[-1]], 4), (4, [[0, -1], [1, 0]], 2), (3, [[0, -1], [1, -1]], 3),
    (2, [[0, 1], [1, 0]], 2), (2, [[0, 1], [1, 0]], 3), (6, [[1, -1], [1, 0]], 2),
])


@settings(max_examples=20)
@given(small_modules)
def test_h1_matches_enumeration(case):
    n, mat, mod = case
    G = fc.cyclic_group(n)
    M = fc.cyclic_module(n, mat, mod)
    res = fc.h1_bruteforce(G, M)
    order, exponent = h1_enumerate(G.mult, [a.tolist() for a in M.action], mod)
    assert (res.order, res.exponent) == (order, exponent)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("r", [1, 2])
def test_bockstein_negation(k, r):
    acts = [np.eye(r, dtype=int).astype(object), (-np.eye(r, dtype=int)).astype(object)]
    rep = fc.bockstein_check(fc.cyclic_group(2), acts, r, k)
    assert rep.passed and rep.injective and rep.h0_dim == r


def test_size_guard():
    eye = np.eye(3, dtype=int).astype(object)
    M = fc.FiniteModule(2, 3, tuple(eye for _ in range(2048)))
    with pytest.raises(TooLarge):
        fc.h1_bruteforce(fc.cyclic_group(2048), M)


def test_wrong_action_count():
    with pytest.raises(ValueError):
        fc.h1_bruteforce(fc.cyclic_group(3), fc.cyclic_module(2, [[-1]], 3))


def test_non_associative_table_rejected():
    # a Latin square with identity 0 that is not a group
    table = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(ValueError):
        fc.FiniteGroupTable.from_table(table)


def test_action_must_respect_table():
    bad = fc.FiniteModule(3, 1, tuple(np.array([[v]], dtype=object) for v in (1, 2, 2)))
    with pytest.raises(ValueError):
        fc.h1_bruteforce(fc.cyclic_group(3), bad)


def test_parsers():
    G = fc.parse_group("# Z/2\norder 2\n0 1\n1 0\n")
    assert G.order == 2
    assert fc.parse_group("cyclic 5").order == 5
    M = fc.parse_module("modulus 4\nrank 1\n1\n-1\n")
    assert M.modulus == 4 and M.rank == 1
    assert fc.h1_bruteforce(G, M).divisors == (2,)
    for text in ("", "order 2\n0 1\n", "group 3", "order x"):
        with pytest.raises(ParseError):
            fc.parse_group(text)
    with pytest.raises(ParseError):
        fc.parse_module("modulus 4\n1 0\n")
