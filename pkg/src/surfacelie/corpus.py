"""Versioned corpus of word-level Torelli endomorphisms with frozen tau values.

File layout: blocks separated by lines consisting of ``---``.  Each block
opens with ``key: value`` metadata lines (``id``, ``mode``, ``provenance``,
``oracle``, ``expected_tau``) followed by an endomorphism in the
``genus g`` / ``a1 -> word`` format.  ``mode`` is ``strict`` or
``relaxed m``; ``expected_tau`` is a space-separated coordinate vector on
the lexicographic basis of wedge^3 H, or ``unfrozen``.

Frozen values are only ever written by :func:`regenerate_expected`, which
stamps them with :func:`oracle_hash`, a digest of the modules that compute
tau.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import exact_linalg as xl
from .errors import NotTorelli, ParseError
from .johnson import (STRICT, TorelliEndo, inner_endo, johnson_tau, symplectic_automorphisms,
                      validate_endo)
from .words import GroupEndo, Word, parse_endo

ORACLE_MODULES = ("exact_linalg", "free_lie", "words", "magnus", "sp_modules", "johnson")
SEED_DEGREE = 3
_HERE = Path(__file__).resolve().parent


def oracle_hash() -> str:
    """Short digest of the sources that determine tau values and sign conventions."""
    h = hashlib.sha256()
    for name in ORACLE_MODULES:
        text = (_HERE / f"{name}.py").read_text(encoding="utf-8").replace("\r\n", "\n")
        h.update(name.encode())
        h.update(text.encode())
    return h.hexdigest()[:16]


def default_corpus_path() -> Path:
    return _HERE / "data" / "g3_corpus.txt"


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    endo: GroupEndo
    mode: str
    expected_tau: tuple | None
    provenance: str
    oracle: str = ""

    @property
    def genus(self) -> int:
        return self.endo.genus

    @property
    def degree(self):
        """Validation mode as accepted by :func:`validate_endo`."""
        if self.mode == STRICT:
            return STRICT
        return int(self.mode.split()[1])

    def validate(self) -> TorelliEndo:
        try:
            return validate_endo(self.endo, self.degree)
        except NotTorelli as exc:
            raise NotTorelli(f"entry {self.id}: {exc}", condition=exc.condition) from None

    def to_text(self) -> str:
        tau = "unfrozen" if self.expected_tau is None else " ".join(str(x) for x in self.expected_tau)
        lines = [f"id: {self.id}", f"mode: {self.mode}", f"provenance: {self.provenance}"]
        if self.oracle:
            lines.append(f"oracle: {self.oracle}")
        lines.append(f"expected_tau: {tau}")
        return "\n".join(lines) + "\n" + self.endo.to_text()


def _parse_mode(text: str, eid: str) -> str:
    parts = text.split()
    if parts == [STRICT]:
        return STRICT
    if len(parts) == 2 and parts[0] == "relaxed" and parts[1].isdigit() and int(parts[1]) >= 1:
        return f"relaxed {int(parts[1])}"
    raise ParseError(f"entry {eid}: bad mode {text!r}")


def parse_corpus(text: str) -> list[CorpusEntry]:
    blocks, cur = [], []
    for ln in text.splitlines():
        if ln.strip() == "---":
            blocks.append(cur)
            cur = []
        else:
            cur.append(ln)
    blocks.append(cur)
    out = []
    seen = set()
    for blk in blocks:
        body = [ln for ln in blk if ln.split("#", 1)[0].strip()]
        if not body:
            continue
        meta = {}
        k = 0
        while k < len(body) and not body[k].strip().startswith("genus"):
            key, sep, val = body[k].partition(":")
            if not sep:
                raise ParseError(f"expected 'key: value', got {body[k]!r}")
            meta[key.strip()] = val.strip()
            k += 1
        eid = meta.get("id")
        if not eid:
            raise ParseError("corpus entry without an id")
        if eid in seen:
            raise ParseError(f"duplicate entry id {eid}")
        seen.add(eid)
        try:
            endo = parse_endo("\n".join(body[k:]))
        except ParseError as exc:
            raise ParseError(f"entry {eid}: {exc}") from None
        tau_text = meta.get("expected_tau", "unfrozen")
        try:
            tau = None if tau_text == "unfrozen" else tuple(int(t) for t in tau_text.split())
        except ValueError:
            raise ParseError(f"entry {eid}: bad expected_tau") from None
        endo = GroupEndo(endo.genus, endo.images, eid)
        out.append(CorpusEntry(eid, endo, _parse_mode(meta.get("mode", STRICT), eid), tau,
                               meta.get("provenance", ""), meta.get("oracle", "")))
    return out


def format_corpus(entries, header: str = "") -> str:
    parts = [header.rstrip("\n") + "\n"] if header else []
    parts += [e.to_text() for e in entries]
    return "---\n".join(parts)


def load_corpus(path=None, validate: bool = True) -> list[CorpusEntry]:
    """Read a corpus file; every entry is validated under its declared mode."""
    path = default_corpus_path() if path is None else Path(path)
    entries = parse_corpus(path.read_text(encoding="utf-8"))
    if validate:
        for e in entries:
            e.validate()
    return entries


def entry_tau(entry: CorpusEntry) -> tuple:
    return tuple(int(x) for x in johnson_tau(entry.validate()))


@dataclass(frozen=True)
class TauDiff:
    id: str
    old: tuple | None
    new: tuple


def regenerate_expected(entries, write=None, overwrite: bool = False, header: str = ""):
    """Recompute every tau; return ``(updated entries, diffs)``.

    With ``write`` set to a path the updated corpus is written there, but
    an existing file is only replaced when ``overwrite`` is true.
    """
    h = oracle_hash()
    updated, diffs = [], []
    for e in entries:
        tau = entry_tau(e)
        if e.expected_tau != tau:
            diffs.append(TauDiff(e.id, e.expected_tau, tau))
        updated.append(replace(e, expected_tau=tau, oracle=h))
    if write is not None:
        path = Path(write)
        if path.exists() and not overwrite:
            raise FileExistsError(f"{path} exists; pass overwrite=True to replace it")
        path.write_text(format_corpus(updated, header), encoding="utf-8")
    return updated, diffs


def tau_span_rank(entries) -> int:
    rows = [list(entry_tau(e)) for e in entries]
    return xl.rank(xl.int_matrix(rows)) if rows else 0


@dataclass
class VerifyReport:
    passed: bool
    entries: int
    mismatches: list
    unfrozen: list
    span_rank: int
    stale_oracle: list

    def to_dict(self) -> dict:
        return {"passed": self.passed, "entries": self.entries, "mismatches": self.mismatches,
                "unfrozen": self.unfrozen, "span_rank": self.span_rank, "stale_oracle": self.stale_oracle}


def verify_corpus(entries) -> VerifyReport:
    """Recompute tau for every entry and compare with the frozen values.

    A differing oracle hash is reported but is not a failure by itself:
    only the values decide.
    """
    h = oracle_hash()
    mism, unfrozen, stale, rows = [], [], [], []
    for e in entries:
        tau = entry_tau(e)
        rows.append(list(tau))
        if e.expected_tau is None:
            unfrozen.append(e.id)
        elif e.expected_tau != tau:
            mism.append(e.id)
        if e.oracle and e.oracle != h:
            stale.append(e.id)
    span = xl.rank(xl.int_matrix(rows)) if rows else 0
    return VerifyReport(not mism and not unfrozen, len(entries), mism, unfrozen, span, stale)


# ---- the shipped genus-3 corpus -------------------------------------------

SEED_IMAGES = {"b1": "[a2, a3] b1", "b2": "[a3, a1] b2", "b3": "[a1, a2] b3"}

# conjugator sequences beyond single transvections, innermost last; chosen so
# the tau values of the corpus span all of wedge^3 H
DEEP_CONJUGATORS = (
    ("b2", "b1"), ("b3", "b1"), ("b2+b3", "b1"), ("b3", "b2"), ("b1+b3", "b2"),
    ("b1+b2", "b3"), ("b3", "b2", "b1"),
)

STRICT_COMMUTATOR = ("a1+a2", "a2+a3")


def seed_endo(genus: int = 3) -> GroupEndo:
    return GroupEndo.from_dict(genus, SEED_IMAGES, "seed")


def strict_commutator(genus: int = 3) -> GroupEndo:
    """[psi_u, psi_v] for transvection lifts along orthogonal u, v; a genuine Torelli element."""
    autos = {a.label: a for a in symplectic_automorphisms(genus)}
    P, Q = (autos[x] for x in STRICT_COMMUTATOR)
    c = P.psi @ Q.psi @ P.inverse @ Q.inverse
    return GroupEndo(genus, c.images, "comm")


def conjugate_by(labels, phi: GroupEndo) -> GroupEndo:
    """``S phi S^-1`` with ``S = psi_labels[0] o psi_labels[1] o ...``."""
    autos = {a.label: a for a in symplectic_automorphisms(phi.genus)}
    for lab in reversed(labels):
        phi = autos[lab].conjugate(phi)
    return phi


def build_g3_corpus() -> list[CorpusEntry]:
    """The shipped corpus, unfrozen: inner generators, the seed and its conjugates, strict entries."""
    g = 3
    relaxed = f"relaxed {SEED_DEGREE}"
    out = []
    for i in range(2 * g):
        w = Word.gen(g, i)
        out.append(CorpusEntry(f"inner_{w}", inner_endo(w), STRICT, None,
                               f"trivial; conjugation by {w}"))
    seed = seed_endo(g)
    out.append(CorpusEntry("seed", seed, relaxed, None,
                           "derived; b_i -> [a_j, a_k] b_i on cyclic (i, j, k), relator kept through degree 3"))
    for a in symplectic_automorphisms(g):
        out.append(CorpusEntry(f"conj_{a.label}", conjugate_by((a.label,), seed), relaxed, None,
                               f"derived; seed conjugated by the transvection lift {a.label}"))
    for seq in DEEP_CONJUGATORS:
        name = ".".join(seq)
        out.append(CorpusEntry(f"conj_{name}", conjugate_by(seq, seed), relaxed, None,
                               f"derived; seed conjugated by the lifts {name} composed left to right"))
    comm = strict_commutator(g)
    lab = ",".join(STRICT_COMMUTATOR)
    out.append(CorpusEntry("comm", comm, STRICT, None,
                           f"derived; commutator of the transvection lifts {lab}"))
    out.append(CorpusEntry("inner_a1_comm", inner_endo(Word.a(g, 1)) @ comm, STRICT, None,
                           "derived; conjugation by a1 after the commutator entry"))
    return [replace(e, endo=GroupEndo(e.endo.genus, e.endo.images, e.id)) for e in out]


CORPUS_HEADER = """\
# Genus-3 Torelli corpus.  expected_tau values were written by the
# library's own regeneration routine; never edit them by hand.
# Coordinates are on the lexicographic basis of wedge^3 H, generators
# ordered a1 a2 a3 b1 b2 b3."""
