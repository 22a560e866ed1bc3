import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import labute_rank, magnus_bruteforce
from surfacelie.errors import DegreeOverflow, LiftDegreeError, NotTorelliModN, ParseError
from surfacelie.johnson import inner_endo
from surfacelie.magnus import (epsilon_n, epsilon_on_word, filtration_degree, gr_class, magnus_expand,
                               surface_gr, symplectic_element)
from surfacelie.words import GroupEndo, Word, commutator, parse_word, surface_relator


def words(genus=2, max_size=8):
    n = 2 * genus
    letters = st.integers(-n, n).filter(bool)
    return st.lists(letters, max_size=max_size).map(lambda xs: Word(genus, tuple(xs)))


def test_magnus_of_generator_and_inverse():
    g = 1
    assert magnus_expand(Word.a(g, 1), 3).terms == {(): 1, (0,): 1}
    assert magnus_expand(Word.a(g, 1).inverse(), 3).terms == {(): 1, (0,): -1, (0, 0): 1, (0, 0, 0): -1}


def test_magnus_of_commutator_starts_in_degree_two():
    w = commutator(Word.a(1, 1), Word.b(1, 1))
    p = magnus_expand(w, 2)
    assert p.homogeneous_part(2) == {(0, 1): 1, (1, 0): -1}
    assert p.lowest_degree() == 2


@given(words(2, 7), st.integers(1, 4))
def test_magnus_matches_series_product(w, m):
    assert magnus_expand(w, m).terms == magnus_bruteforce(w.letters, m)


@given(words(), words())
def test_magnus_is_multiplicative(u, v):
    m = 4
    assert (magnus_expand(u, m) * magnus_expand(v, m)).terms == magnus_expand(u * v, m).terms


@given(words(2, 5), words(2, 5))
def test_commutators_drop_filtration(u, v):
    c = commutator(u, v)
    assert filtration_degree(c, 4) >= 2


@pytest.mark.parametrize("g", [1, 2, 3])
def test_relator_class_is_q(g):
    assert gr_class(surface_relator(g)) == symplectic_element(g)


@pytest.mark.parametrize("g", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_surface_ranks_low(g, n):
    gr = surface_gr(g, n)
    assert gr.rank == labute_rank(g, n)
    assert all(d == 1 for d in gr.divisors)


def test_spot_ranks_g3():
    assert [surface_gr(3, n).rank for n in (1, 2, 3)] == [6, 14, 64]


def test_degree_cap():
    with pytest.raises(DegreeOverflow):
        surface_gr(2, 6, max_degree=5)


def test_q_projects_to_zero():
    assert not np.any(surface_gr(2, 2).project(symplectic_element(2)))


def test_lift_words_represent_basis():
    gr = surface_gr(2, 3)
    for k in range(gr.rank):
        w = gr.lift_word(k)
        v = gr.project(gr_class(w))
        assert list(v) == [int(i == k) for i in range(gr.rank)]


def test_ideal_words_vanish_in_quotient():
    gr = surface_gr(2, 3)
    for gen in gr.generators:
        assert not np.any(gr.project(gr_class(gr.ideal_word(gen))))


def inner(word_text, g=3):
    return inner_endo(parse_word(word_text, g))


def test_epsilon_additive_on_composition():
    phi, psi = inner("a1"), inner("b2 a3")
    e1 = epsilon_n(phi @ psi, 1)
    assert np.array_equal(e1, epsilon_n(phi, 1) + epsilon_n(psi, 1))


def test_epsilon_independent_of_lift():
    g = 3
    phi = inner("a1 b2")
    gr = surface_gr(g, 2)
    u = gr.lift_word(0)
    extra = commutator(Word.a(g, 2), commutator(Word.a(g, 1), Word.b(g, 3)))
    assert np.array_equal(epsilon_on_word(phi, u, 2), epsilon_on_word(phi, u * extra, 2))
    # multiplying by a relator conjugate changes the free class but not the surface class
    assert np.array_equal(epsilon_on_word(phi, u, 2), epsilon_on_word(phi, u * surface_relator(g), 2))


def test_epsilon_rejects_low_degree_input():
    phi = inner("a1")
    with pytest.raises(LiftDegreeError):
        epsilon_on_word(phi, Word.b(3, 1), 2)


def test_epsilon_rejects_non_torelli():
    swap = GroupEndo.from_dict(1, {"a1": "b1", "b1": "a1"})
    with pytest.raises(NotTorelliModN):
        epsilon_n(swap, 1)


def test_parse_word_forms():
    g = 2
    assert parse_word("[a1, b1]", g) == commutator(Word.a(g, 1), Word.b(g, 1))
    assert parse_word("a1^-2 b2", g).letters == (-1, -1, 4)
    assert parse_word("1", g) == Word.identity(g)
    with pytest.raises(ParseError):
        parse_word("a3", g)
    with pytest.raises(ParseError):
        parse_word("[a1, b1", g)


@given(words(2, 6), words(2, 4))
def test_conjugates_are_detected(w, c):
    assert (c * w * c.inverse()).is_conjugate_to(w)


def test_non_conjugate():
    g = 1
    assert not Word.a(g, 1).is_conjugate_to(Word.b(g, 1))
