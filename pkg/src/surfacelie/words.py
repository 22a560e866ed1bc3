"""Reduced words in the free group on a1..ag, b1..bg and endomorphisms of it.

Letters are signed ints: ``i`` in ``1..g`` is ``a_i``, ``g + i`` is ``b_i``,
and a negative letter is the inverse.  Commutators follow
``[x, y] = x y x^-1 y^-1``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ParseError
from .exact_linalg import int_matrix


def free_reduce(letters) -> tuple:
    out = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def generator_names(genus: int) -> list[str]:
    return [f"a{i}" for i in range(1, genus + 1)] + [f"b{i}" for i in range(1, genus + 1)]


@dataclass(frozen=True)
class Word:
    genus: int
    letters: tuple = ()

    def __post_init__(self):
        if self.genus < 1:
            raise ValueError("genus must be at least 1")
        red = free_reduce(self.letters)
        n = 2 * self.genus
        if red and (max(red) > n or min(red) < -n):
            raise ValueError(f"letter out of range for genus {self.genus}")
        object.__setattr__(self, "letters", red)

    @classmethod
    def identity(cls, genus):
        return cls(genus, ())

    @classmethod
    def a(cls, genus, i):
        return cls(genus, (i,))

    @classmethod
    def b(cls, genus, i):
        return cls(genus, (genus + i,))

    @classmethod
    def gen(cls, genus, index):
        """Generator by 0-based index into ``a1..ag, b1..bg``."""
        return cls(genus, (index + 1,))

    def __mul__(self, other: "Word") -> "Word":
        if self.genus != other.genus:
            raise ValueError("genus mismatch")
        return Word(self.genus, self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(self.genus, tuple(-x for x in reversed(self.letters)))

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(self.genus, base.letters * abs(k))

    def __len__(self):
        return len(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def cyclically_reduced(self) -> tuple:
        w = list(self.letters)
        i, j = 0, len(w) - 1
        while i < j and w[i] == -w[j]:
            i += 1
            j -= 1
        return tuple(w[i:j + 1])

    def is_conjugate_to(self, other: "Word") -> bool:
        """Conjugacy in the free group: cyclic reductions are rotations of each other."""
        s, t = self.cyclically_reduced(), other.cyclically_reduced()
        if len(s) != len(t):
            return False
        if not s:
            return True
        doubled = t + t
        n = len(s)
        return any(doubled[k:k + n] == s for k in range(n))

    def abelianization(self) -> list[int]:
        v = [0] * (2 * self.genus)
        for x in self.letters:
            v[abs(x) - 1] += 1 if x > 0 else -1
        return v

    def __str__(self):
        if not self.letters:
            return "1"
        names = generator_names(self.genus)
        return " ".join(names[x - 1] if x > 0 else names[-x - 1] + "^-1" for x in self.letters)


def commutator(u: Word, v: Word) -> Word:
    return u * v * u.inverse() * v.inverse()


def surface_relator(genus: int) -> Word:
    """The product of [a_j, b_j] over the handles."""
    r = Word.identity(genus)
    for j in range(1, genus + 1):
        r = r * commutator(Word.a(genus, j), Word.b(genus, j))
    return r


_TOKEN = re.compile(r"\s*(?:(\[)|(\])|(,)|([ab])(\d+)(?:\^(-?\d+))?|(1)(?![\d]))")


def parse_word(text: str, genus: int) -> Word:
    """Parse whitespace-separated generators, ``x^k`` powers and nested ``[u, v]``."""
    pos = 0
    text = text.strip()

    def tokens():
        nonlocal pos
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected input at {text[pos:]!r}")
            pos = m.end()
            yield m
            while pos < len(text) and text[pos].isspace():
                pos += 1

    toks = list(tokens())
    k = 0

    def product(stop):
        nonlocal k
        letters: list[int] = []
        while k < len(toks):
            m = toks[k]
            if m.group(2) or m.group(3):
                if stop:
                    return Word(genus, tuple(letters))
                raise ParseError(f"unbalanced {m.group(0).strip()!r} in {text!r}")
            k += 1
            if m.group(1):
                u = product(True)
                if k >= len(toks) or not toks[k].group(3):
                    raise ParseError(f"expected ',' in commutator in {text!r}")
                k += 1
                v = product(True)
                if k >= len(toks) or not toks[k].group(2):
                    raise ParseError(f"expected ']' in {text!r}")
                k += 1
                letters.extend(commutator(u, v).letters)
            elif m.group(4):
                i = int(m.group(5))
                if not 1 <= i <= genus:
                    raise ParseError(f"generator {m.group(4)}{i} out of range for genus {genus}")
                letter = i if m.group(4) == "a" else genus + i
                e = int(m.group(6)) if m.group(6) else 1
                letters.extend([letter if e > 0 else -letter] * abs(e))
        if stop:
            raise ParseError(f"unterminated commutator in {text!r}")
        return Word(genus, tuple(letters))

    return product(False)


@dataclass(frozen=True)
class GroupEndo:
    """Endomorphism of the free group given by the images of a1..ag, b1..bg."""

    genus: int
    images: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.images) != 2 * self.genus:
            raise ValueError(f"need {2 * self.genus} images")
        if any(w.genus != self.genus for w in self.images):
            raise ValueError("genus mismatch in images")

    @classmethod
    def identity(cls, genus):
        return cls(genus, tuple(Word.gen(genus, i) for i in range(2 * genus)), "id")

    @classmethod
    def from_dict(cls, genus, mapping, name=""):
        """Build from ``{index or name: Word}``; missing generators are fixed."""
        names = generator_names(genus)
        imgs = [Word.gen(genus, i) for i in range(2 * genus)]
        for key, w in mapping.items():
            i = names.index(key) if isinstance(key, str) else key
            imgs[i] = w if isinstance(w, Word) else parse_word(w, genus)
        return cls(genus, tuple(imgs), name)

    def __call__(self, w: Word) -> Word:
        letters = []
        for x in w.letters:
            img = self.images[abs(x) - 1]
            letters.extend(img.letters if x > 0 else img.inverse().letters)
        return Word(self.genus, tuple(letters))

    def compose(self, other: "GroupEndo") -> "GroupEndo":
        """``self o other``: apply ``other`` first."""
        return GroupEndo(self.genus, tuple(self(w) for w in other.images))

    __matmul__ = compose

    @cached_property
    def abelianization(self) -> np.ndarray:
        """Matrix of the induced map on H; column j is the image of generator j."""
        cols = [w.abelianization() for w in self.images]
        n = 2 * self.genus
        return int_matrix([[cols[j][i] for j in range(n)] for i in range(n)], (n, n))

    def is_identity(self) -> bool:
        return all(w.letters == (i + 1,) for i, w in enumerate(self.images))

    def to_text(self) -> str:
        names = generator_names(self.genus)
        lines = [f"genus {self.genus}"]
        for i, w in enumerate(self.images):
            if w.letters != (i + 1,):
                lines.append(f"{names[i]} -> {w}")
        return "\n".join(lines) + "\n"


def parse_endo(text: str) -> GroupEndo:
    """Parse ``genus g`` followed by lines ``a1 -> <word>``; '#' starts a comment."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("genus"):
        raise ParseError("endomorphism text must start with 'genus g'")
    try:
        genus = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise ParseError(f"bad genus line {lines[0]!r}") from None
    if genus < 1:
        raise ParseError("genus must be at least 1")
    names = generator_names(genus)
    mapping = {}
    for ln in lines[1:]:
        if "->" not in ln:
            raise ParseError(f"expected 'x -> word', got {ln!r}")
        lhs, rhs = (s.strip() for s in ln.split("->", 1))
        if lhs not in names:
            raise ParseError(f"unknown generator {lhs!r}")
        if lhs in mapping:
            raise ParseError(f"generator {lhs} given twice")
        mapping[lhs] = parse_word(rhs, genus)
    return GroupEndo.from_dict(genus, mapping)
