"""Shuffle Hopf algebra over words on a declared alphabet.

Tensors are finite exact-coefficient combinations of words.  The product is
the commutative shuffle, the coproduct is deconcatenation, the antipode
reverses words with an alternating sign, and the length filtration doubles
as the coradical filtration of the coalgebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from types import MappingProxyType
from typing import Callable, Iterable, Mapping

from .errors import AlphabetError
from .scalars import QI

# Words are plain tuples.  A letter is any hashable object exposing a string
# ``label`` (used for canonical ordering and display) and, optionally, an
# ``alphabet`` tag used to detect accidental mixing of unrelated alphabets.
Word = tuple


@dataclass(frozen=True)
class Letter:
    """Opaque alphabet symbol; identity is the (label, alphabet) pair."""

    label: str
    alphabet: str = "generic"

    def __str__(self):
        return self.label


def _letter_label(letter) -> str:
    lab = getattr(letter, "label", None)
    return lab if lab is not None else str(letter)


def _letter_alphabet(letter):
    return getattr(letter, "alphabet", None)


def word_label(word: Word) -> str:
    return "[" + "|".join(_letter_label(l) for l in word) + "]"


def word_sort_key(word: Word):
    return (len(word), tuple(_letter_label(l) for l in word))


class ShuffleTensor:
    """A finite map from words to exact scalars, no zero entries stored."""

    __slots__ = ("_terms", "alphabet")

    def __init__(self, terms=None, alphabet: str | None = None):
        data: dict = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for word, coeff in items:
                word = tuple(word)
                coeff = QI.of(coeff)
                if coeff.is_zero:
                    continue
                for letter in word:
                    a = _letter_alphabet(letter)
                    if a is None:
                        continue
                    if alphabet is None:
                        alphabet = a
                    elif a != alphabet:
                        raise AlphabetError(
                            f"letter {_letter_label(letter)!r} belongs to "
                            f"{a!r}, tensor is over {alphabet!r}")
                prev = data.get(word)
                total = coeff if prev is None else prev + coeff
                if total.is_zero:
                    data.pop(word, None)
                else:
                    data[word] = total
        self._terms = data
        self.alphabet = alphabet

    @classmethod
    def zero(cls, alphabet=None) -> "ShuffleTensor":
        return cls({}, alphabet)

    @classmethod
    def unit(cls, alphabet=None) -> "ShuffleTensor":
        return cls({(): QI.of(1)}, alphabet)

    @classmethod
    def from_word(cls, word, coeff=1, alphabet=None) -> "ShuffleTensor":
        return cls({tuple(word): QI.of(coeff)}, alphabet)

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: word_sort_key(kv[0]))

    def support(self):
        return sorted(self._terms, key=word_sort_key)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def weight(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    def coeff(self, word) -> QI:
        return self._terms.get(tuple(word), QI.of(0))

    def counit(self) -> QI:
        return self.coeff(())

    def homogeneous(self, n: int) -> "ShuffleTensor":
        return ShuffleTensor({w: c for w, c in self._terms.items() if len(w) == n},
                             self.alphabet)

    def _join_alphabet(self, other) -> str | None:
        a, b = self.alphabet, other.alphabet
        if a is None:
            return b
        if b is None:
            return a
        if a != b:
            raise AlphabetError(f"mixing tensors over {a!r} and {b!r}")
        return a

    def __add__(self, other: "ShuffleTensor") -> "ShuffleTensor":
        alpha = self._join_alphabet(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            total = out.get(w, QI.of(0)) + c
            if total.is_zero:
                out.pop(w, None)
            else:
                out[w] = total
        return ShuffleTensor(out, alpha)

    def __neg__(self) -> "ShuffleTensor":
        return ShuffleTensor({w: -c for w, c in self._terms.items()}, self.alphabet)

    def __sub__(self, other: "ShuffleTensor") -> "ShuffleTensor":
        return self + (-other)

    def scale(self, c) -> "ShuffleTensor":
        c = QI.of(c)
        if c.is_zero:
            return ShuffleTensor.zero(self.alphabet)
        return ShuffleTensor({w: v * c for w, v in self._terms.items()}, self.alphabet)

    def __mul__(self, other):
        if isinstance(other, ShuffleTensor):
            return shuffle(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, ShuffleTensor):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __repr__(self):
        if self.is_zero:
            return "0"
        bits = []
        for w, c in self.items():
            bits.append(f"({c})*{word_label(w)}")
        return " + ".join(bits)


def shuffle_words(u: Word, v: Word) -> dict:
    """Shuffles of two bare words, as a map word -> integer multiplicity."""
    u, v = tuple(u), tuple(v)
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    n, total = len(u), len(u) + len(v)
    acc: dict = {}
    for spots in combinations(range(total), n):
        word = []
        ui = vi = 0
        spotset = set(spots)
        for k in range(total):
            if k in spotset:
                word.append(u[ui])
                ui += 1
            else:
                word.append(v[vi])
                vi += 1
        key = tuple(word)
        acc[key] = acc.get(key, 0) + 1
    return acc


def shuffle(a: ShuffleTensor, b: ShuffleTensor) -> ShuffleTensor:
    alpha = a._join_alphabet(b)
    out: dict = {}
    for u, cu in a._terms.items():
        for v, cv in b._terms.items():
            c = cu * cv
            for w, mult in shuffle_words(u, v).items():
                total = out.get(w, QI.of(0)) + c * mult
                if total.is_zero:
                    out.pop(w, None)
                else:
                    out[w] = total
    return ShuffleTensor(out, alpha)


def shuffle_power(t: ShuffleTensor, k: int) -> ShuffleTensor:
    out = ShuffleTensor.unit(t.alphabet)
    for _ in range(k):
        out = shuffle(out, t)
    return out


def deconcat(a: ShuffleTensor) -> dict:
    """Deconcatenation coproduct, as a map (left word, right word) -> scalar."""
    out: dict = {}
    for w, c in a._terms.items():
        for k in range(len(w) + 1):
            key = (w[:k], w[k:])
            total = out.get(key, QI.of(0)) + c
            if total.is_zero:
                out.pop(key, None)
            else:
                out[key] = total
    return out


def deconcat_multi(a: ShuffleTensor, parts: int) -> dict:
    """Iterated coproduct into ``parts`` ordered (possibly empty) pieces."""
    if parts < 1:
        raise ValueError("need at least one part")
    out: dict = {}
    for w, c in a._terms.items():
        L = len(w)
        for cuts in combinations_with_replacement(range(L + 1), parts - 1):
            bounds = (0,) + cuts + (L,)
            pieces = tuple(w[i:j] for i, j in zip(bounds, bounds[1:]))
            total = out.get(pieces, QI.of(0)) + c
            if total.is_zero:
                out.pop(pieces, None)
            else:
                out[pieces] = total
    return out


def antipode(a: ShuffleTensor) -> ShuffleTensor:
    out = {}
    for w, c in a._terms.items():
        sign = -1 if len(w) % 2 else 1
        out[tuple(reversed(w))] = c * sign
    return ShuffleTensor(out, a.alphabet)


def deriv_right(a: ShuffleTensor) -> dict:
    """Right derivation: strip the last letter.  Map (word, letter) -> scalar."""
    out: dict = {}
    for w, c in a._terms.items():
        if not w:
            continue
        key = (w[:-1], w[-1])
        total = out.get(key, QI.of(0)) + c
        if total.is_zero:
            out.pop(key, None)
        else:
            out[key] = total
    return out


def r_xi(a: ShuffleTensor, xi: Callable) -> ShuffleTensor:
    """Contract the last letter with the functional ``xi`` (letter -> scalar)."""
    out: dict = {}
    for (w, letter), c in deriv_right(a).items():
        val = QI.of(xi(letter))
        if val.is_zero:
            continue
        total = out.get(w, QI.of(0)) + c * val
        if total.is_zero:
            out.pop(w, None)
        else:
            out[w] = total
    return ShuffleTensor(out, a.alphabet)


def coradical_member(t: ShuffleTensor, n: int) -> bool:
    """Exact membership test for coradical degree ``n``.

    The tensor lies in degree n exactly when every (n+1)-fold reduced
    deconcatenation (all parts nonempty) vanishes.  Cuts of distinct words
    are distinct, so the test reduces to checking each word's cuts, but the
    accumulation below keeps the literal definition.
    """
    if n < 0:
        return t.is_zero
    acc: dict = {}
    for w, c in t._terms.items():
        L = len(w)
        if L < n + 1:
            continue
        for cuts in combinations(range(1, L), n):
            bounds = (0,) + cuts + (L,)
            pieces = tuple(w[i:j] for i, j in zip(bounds, bounds[1:]))
            acc[pieces] = acc.get(pieces, QI.of(0)) + c
    return all(v.is_zero for v in acc.values())


def tensor_to_json(t: ShuffleTensor, encode_letter: Callable) -> dict:
    return {"terms": [{"word": [encode_letter(l) for l in w],
                       "coeff": {"re": str(c.re), "im": str(c.im)}}
                      for w, c in t.items()]}


def tensor_from_json(obj, decode_letter: Callable) -> ShuffleTensor:
    terms = []
    for item in obj.get("terms", []):
        word = tuple(decode_letter(e) for e in item.get("word", []))
        c = item.get("coeff", {})
        coeff = QI.of((c.get("re", "0"), c.get("im", "0")))
        terms.append((word, coeff))
    return ShuffleTensor(terms)
