import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfacelie import exact_linalg as xl
from surfacelie.corpus import strict_commutator
from surfacelie.errors import NotInImage, NotTorelli
from surfacelie.johnson import (inner_endo, johnson_tau, relator_defect_degree, symplectic_automorphisms,
                                tau_tilde, validate_endo, f_map)
from surfacelie.sp_modules import build_standard_maps, sp_generator_action, transvection, wedge_basis, wedge_power
from surfacelie.words import GroupEndo, Word, parse_word

G = 3


def words(genus=G, max_size=6):
    letters = st.integers(-2 * genus, 2 * genus).filter(bool)
    return st.lists(letters, max_size=max_size).map(lambda xs: Word(genus, tuple(xs)))


def test_identity_is_strict_torelli_with_zero_tau():
    T = validate_endo(GroupEndo.identity(G))
    assert T.mode == "strict"
    assert not np.any(tau_tilde(T)) and not np.any(johnson_tau(T))


def test_non_torelli_rejected():
    swap = GroupEndo.from_dict(2, {"a1": "a2", "a2": "a1", "b1": "b2", "b2": "b1"})
    with pytest.raises(NotTorelli) as exc:
        validate_endo(swap)
    assert exc.value.condition == "abelianization"


def test_relator_not_preserved_strict():
    phi = GroupEndo.from_dict(G, {"b1": "[a2, a3] b1"})
    with pytest.raises(NotTorelli) as exc:
        validate_endo(phi)
    assert exc.value.condition == "relator"


def test_seed_relaxed_levels():
    phi = GroupEndo.from_dict(G, {"b1": "[a2, a3] b1", "b2": "[a3, a1] b2", "b3": "[a1, a2] b3"})
    assert relator_defect_degree(phi, 3) is None
    assert relator_defect_degree(phi, 4) == 4
    T = validate_endo(phi, 3)
    assert T.relaxed and T.validated_to_degree == 3
    idx = {t: i for i, t in enumerate(wedge_basis(2 * G, 3))}
    tau = johnson_tau(T)
    assert tau[idx[(0, 1, 2)]] == 1 and sum(abs(int(v)) for v in tau) == 1


def test_single_handle_commutator_is_not_in_image():
    phi = GroupEndo.from_dict(G, {"a1": "a1 [a2, b2]"})
    with pytest.raises(NotInImage):
        johnson_tau(validate_endo(phi, 2))
    with pytest.raises(NotTorelli) as exc:
        validate_endo(phi, 3)
    assert exc.value.condition == "relator_degree_3"


def test_tau_tilde_of_inner_a1():
    maps = build_standard_maps(G)
    b2 = maps.bracket2.matrix
    idx2 = {t: i for i, t in enumerate(wedge_basis(2 * G, 2))}
    r2 = b2.shape[0]
    want = np.zeros(2 * G * r2, dtype=object)

    def bracket_a1(k):
        # class of [a1, x_k] in Gr2
        v = np.zeros(len(idx2), dtype=object)
        if k > 0:
            v[idx2[(0, k)]] = 1
        return b2.dot(v)

    for j in range(G):
        a, b = j, G + j
        want[a * r2:(a + 1) * r2] += bracket_a1(b)
        want[b * r2:(b + 1) * r2] -= bracket_a1(a)
    got = tau_tilde(inner_endo(Word.a(G, 1)))
    assert np.array_equal(got, want)


def test_f_is_genus_one_empty():
    assert f_map(1).matrix.shape[1] == 0
    assert johnson_tau(GroupEndo.identity(1)).shape == (0,)


def test_f_on_a1_a2_a3():
    idx = {t: i for i, t in enumerate(wedge_basis(2 * G, 3))}
    x = np.zeros(20, dtype=object)
    x[idx[(0, 1, 2)]] = 1
    fx = f_map(G)(x)
    assert np.count_nonzero(fx) == 3
    assert xl.rank(f_map(G).matrix) == 20


def test_inner_scalar_is_minus_one():
    i = build_standard_maps(G).i
    for k in range(2 * G):
        w = Word.gen(G, k)
        e = [int(j == k) for j in range(2 * G)]
        assert np.array_equal(johnson_tau(inner_endo(w)), -i(e))


@settings(max_examples=25)
@given(words())
def test_inner_tau_depends_only_on_abelianization(w):
    i = build_standard_maps(G).i
    assert np.array_equal(johnson_tau(inner_endo(w)), -i(w.abelianization()))


def test_inner_endo_composition():
    u, v = parse_word("a1 b2", G), parse_word("a3^-1", G)
    assert inner_endo(u) @ inner_endo(v) == inner_endo(u * v)


def test_tau_additive():
    comm = strict_commutator(G)
    inn = inner_endo(parse_word("b1 a2", G))
    assert np.array_equal(johnson_tau(inn @ comm), johnson_tau(inn) + johnson_tau(comm))
    assert np.array_equal(johnson_tau(comm @ comm), 2 * johnson_tau(comm))


def test_strict_commutator_tau():
    idx = {t: i for i, t in enumerate(wedge_basis(2 * G, 3))}
    tau = johnson_tau(strict_commutator(G))
    assert tau[idx[(0, 1, 2)]] == -1 and sum(abs(int(v)) for v in tau) == 1


def test_symplectic_automorphisms_cover_generators():
    autos = symplectic_automorphisms(G)
    acts = sp_generator_action(G)
    assert [a.label for a in autos] == [a.label for a in acts]
    for a, act in zip(autos, acts):
        a.validate()
        assert np.array_equal(a.matrix, transvection(G, act.vector))


@pytest.mark.parametrize("k", range(0, 18, 3))
def test_tau_equivariant_under_conjugation(k):
    comm = strict_commutator(G)
    a = symplectic_automorphisms(G)[k]
    S3 = wedge_power(a.matrix, 3)
    assert np.array_equal(johnson_tau(a.conjugate(comm)), S3.dot(johnson_tau(comm)))
