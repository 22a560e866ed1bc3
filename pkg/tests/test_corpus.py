import pytest

from surfacelie import corpus as cp
from surfacelie import exact_linalg as xl
from surfacelie import free_lie, johnson
from surfacelie.errors import NotTorelli, ParseError
from surfacelie.sp_modules import ModuleMap, build_standard_maps


@pytest.fixture(scope="module")
def shipped():
    return cp.load_corpus()


def test_empty_corpus():
    assert cp.parse_corpus("") == []
    assert cp.parse_corpus("# only a comment\n---\n") == []
    rep = cp.verify_corpus([])
    assert rep.passed and rep.span_rank == 0


def test_identity_entry_has_zero_tau():
    (e,) = cp.parse_corpus("id: id\nmode: strict\ngenus 3\n")
    assert cp.entry_tau(e) == (0,) * 20


def test_shipped_corpus_shape(shipped):
    assert len(shipped) >= 24
    assert len({e.id for e in shipped}) == len(shipped)
    assert all(e.expected_tau is not None and e.provenance for e in shipped)


def test_shipped_matches_recipe(shipped):
    built = cp.build_g3_corpus()
    assert [e.id for e in built] == [e.id for e in shipped]
    assert all(a.endo == b.endo and a.mode == b.mode for a, b in zip(built, shipped))


def test_regenerate_has_no_diffs(shipped):
    _, diffs = cp.regenerate_expected(shipped)
    assert diffs == []


def test_verify_shipped(shipped):
    rep = cp.verify_corpus(shipped)
    assert rep.passed and rep.span_rank == 20


def test_new_conjugate_gives_one_diff(shipped):
    phi = cp.conjugate_by(("a1", "b2"), cp.seed_endo())
    extra = cp.CorpusEntry("conj_a1.b2", phi, f"relaxed {cp.SEED_DEGREE}", None, "derived; test")
    updated, diffs = cp.regenerate_expected(list(shipped) + [extra])
    assert [d.id for d in diffs] == ["conj_a1.b2"] and diffs[0].old is None
    assert updated[-1].expected_tau == diffs[0].new


def test_bracket_sign_mutation_is_caught(shipped, monkeypatch):
    # flip the free Lie bracket convention to [u, v] = vu - uv
    real = free_lie.lyndon_poly

    def flipped(w):
        sign = (-1) ** (len(w) - 1)
        return tuple((m, sign * c) for m, c in real(w))

    monkeypatch.setattr(free_lie, "lyndon_poly", flipped)
    _, diffs = cp.regenerate_expected(shipped)
    nonzero = {e.id for e in shipped if any(e.expected_tau)}
    assert nonzero and {d.id for d in diffs} == nonzero
    assert all(d.new == tuple(-x for x in d.old) for d in diffs)


def test_f_sign_mutation_is_caught(shipped, monkeypatch):
    real = build_standard_maps(3).f
    monkeypatch.setattr(johnson, "f_map", lambda genus: ModuleMap(real.source, real.target, -real.matrix))
    _, diffs = cp.regenerate_expected(shipped)
    assert {d.id for d in diffs} == {e.id for e in shipped if any(e.expected_tau)}


def test_regenerate_refuses_overwrite(shipped, tmp_path):
    target = tmp_path / "c.txt"
    target.write_text("keep")
    with pytest.raises(FileExistsError):
        cp.regenerate_expected(shipped[:2], write=target)
    assert target.read_text() == "keep"
    cp.regenerate_expected(shipped[:2], write=target, overwrite=True)
    assert len(cp.load_corpus(target)) == 2


def test_inner_entries_lie_in_q_wedge_h(shipped):
    i = build_standard_maps(3).i.matrix
    for e in shipped:
        if e.id.startswith("inner_") and e.id.count("_") == 1:
            assert xl.solve_in_image(i, list(e.expected_tau)) is not None


def test_text_roundtrip(shipped):
    text = cp.default_corpus_path().read_text()
    assert cp.format_corpus(cp.parse_corpus(text), cp.CORPUS_HEADER) == text
    assert cp.parse_corpus(cp.format_corpus(shipped)) == shipped


def test_parse_errors():
    with pytest.raises(ParseError):
        cp.parse_corpus("mode: strict\ngenus 3\n")
    with pytest.raises(ParseError):
        cp.parse_corpus("id: x\nmode: loose\ngenus 3\n")
    with pytest.raises(ParseError):
        cp.parse_corpus("id: x\ngenus 3\n---\nid: x\ngenus 3\n")
    with pytest.raises(ParseError):
        cp.parse_corpus("id: x\nexpected_tau: 1 two\ngenus 3\n")


def test_invalid_entry_names_itself():
    (e,) = cp.parse_corpus("id: broken\nmode: strict\ngenus 3\nb1 -> [a2, a3] b1\n")
    with pytest.raises(NotTorelli, match="broken"):
        e.validate()


def test_oracle_hash_is_stable():
    assert cp.oracle_hash() == cp.oracle_hash() and len(cp.oracle_hash()) == 16
