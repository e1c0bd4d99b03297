"""Truncated tensor algebra of a graded bimodule over its base.

Elements are rational combinations of a scalar part (the base itself,
length zero) and canonical words in the bimodule generators.  A word is a
tuple of generator indices written in composition order: the rightmost
letter acts first, so source(word) = source(last letter) and
target(word) = target(first letter).

Canonical word bases are built length by length: level n is the quotient
of (level n-1) (x)_l V by the hop relations at the last junction,
eliminated with lexicographic pivot order (greatest word rewrites into
smaller ones).  Every reduction is cached, so arithmetic stays cheap at
desk scale.  Words longer than the truncation length are discarded and
flagged.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import F0, F1
from .base_field import BaseElement, SemisimpleBase
from .bimodule import GradedBimodule, SparseEliminator

Word = tuple[int, ...]
Key = tuple  # ('s', k) for base basis scalar k, or ('w', g1, g2, ...) for a word


def skey(k: int) -> Key:
    return ("s", k)


def wkey(word: Word) -> Key:
    return ("w",) + tuple(word)


def is_scalar_key(key: Key) -> bool:
    return key[0] == "s"


def key_word(key: Key) -> Word:
    return key[1:]


class WordAlgebra:
    def __init__(self, module: GradedBimodule, l_max: int):
        if l_max < 1:
            raise ValueError("truncation length must be at least 1")
        self.module = module
        self.base: SemisimpleBase = module.base
        self.l_max = l_max
        # level 1 data
        self._words: dict[int, list[Word]] = {1: [(g,) for g in range(module.dim)]}
        self._word_index: dict[int, dict[Word, int]] = {
            1: {(g,): g for g in range(module.dim)}
        }
        # pair reduction at level n: (prefix word, gen) -> {word: coeff}
        self._pair_reduce: dict[int, dict[tuple[Word, int], dict[Word, Fraction]]] = {}
        self._reduce_cache: dict[Word, dict[Word, Fraction]] = {}

    # -- structural helpers -------------------------------------------------
    def gen_name(self, g: int) -> str:
        return self.module.gens[g].name

    def word_name(self, word: Word) -> str:
        return "".join("(%s)" % self.gen_name(g) if len(self.gen_name(g)) > 1 else self.gen_name(g) for g in word)

    def word_degree(self, word: Word) -> int:
        return sum(self.module.gens[g].degree for g in word)

    def word_source(self, word: Word) -> int:
        return self.module.gens[word[-1]].source

    def word_target(self, word: Word) -> int:
        return self.module.gens[word[0]].target

    def word_matches(self, word: Word) -> bool:
        return all(
            self.module.gens[word[i]].source == self.module.gens[word[i + 1]].target
            for i in range(len(word) - 1)
        )

    def word_closed(self, word: Word) -> bool:
        return self.word_source(word) == self.word_target(word)

    def words(self, n: int) -> list[Word]:
        """Canonical words of length n (lexicographically sorted)."""
        if n < 1 or n > self.l_max:
            return []
        self._ensure_level(n)
        return self._words[n]

    # -- level construction --------------------------------------------------
    def _ensure_level(self, n: int):
        if n in self._words:
            return
        self._ensure_level(n - 1)
        prev = self._words[n - 1]
        module = self.module
        base = self.base
        candidates: list[tuple[Word, int]] = []
        for pw in prev:
            src = module.gens[pw[-1]].source
            for g in range(module.dim):
                if module.gens[g].target == src:
                    candidates.append((pw, g))
        col_of = {pair: i for i, pair in enumerate(candidates)}
        elim = SparseEliminator()
        for pw, g in candidates:
            mid = module.gens[g].target
            f = base.factors[mid]
            for p in range(1, f.degree):
                k = base.basis.index((mid, p))
                row: dict[int, Fraction] = {}
                for pw2, c in self._right_action(pw, k).items():
                    key = col_of.get((pw2, g))
                    if key is None:
                        raise AssertionError("right action left the candidate set")
                    row[key] = row.get(key, F0) + c
                col_g = [rr[g] for rr in module.left[k]]
                for g2, c in enumerate(col_g):
                    if c:
                        key = col_of[(pw, g2)]
                        row[key] = row.get(key, F0) - c
                elim.add_row(row)
        elim.finalize()
        pivots = elim.pivots()
        words_n = [pw + (g,) for i, (pw, g) in enumerate(candidates) if i not in pivots]
        table: dict[tuple[Word, int], dict[Word, Fraction]] = {}
        for i, (pw, g) in enumerate(candidates):
            combo = elim.rewrite(i)
            table[(pw, g)] = {
                candidates[c][0] + (candidates[c][1],): v for c, v in combo.items()
            }
        self._words[n] = words_n
        self._word_index[n] = {w: i for i, w in enumerate(words_n)}
        self._pair_reduce[n] = table

    def _right_action(self, word: Word, k: int) -> dict[Word, Fraction]:
        """word . basis_scalar_k as a combination of canonical words."""
        module = self.module
        out: dict[Word, Fraction] = {}
        last = word[-1]
        col = [rr[last] for rr in module.right[k]]
        for g2, c in enumerate(col):
            if c:
                for w2, c2 in self.reduce_word(word[:-1] + (g2,)).items():
                    out[w2] = out.get(w2, F0) + c * c2
        return {w: c for w, c in out.items() if c}

    # -- reduction ------------------------------------------------------------
    def reduce_word(self, word: Word) -> dict[Word, Fraction]:
        """Express an arbitrary composable word in the canonical basis."""
        n = len(word)
        if n == 0:
            raise ValueError("empty words are scalars; handle separately")
        if n > self.l_max:
            raise ValueError("word longer than the truncation length")
        if n == 1:
            return {word: F1}
        cached = self._reduce_cache.get(word)
        if cached is not None:
            return cached
        self._ensure_level(n)
        out: dict[Word, Fraction] = {}
        for pw, c in self.reduce_word(word[:-1]).items():
            for w2, c2 in self._pair_reduce[n][(pw, word[-1])].items():
                out[w2] = out.get(w2, F0) + c * c2
        out = {w: c for w, c in out.items() if c}
        self._reduce_cache[word] = out
        return out


class TensorElement:
    """Finite rational combination of base scalars and canonical words."""

    __slots__ = ("algebra", "terms", "truncated")

    def __init__(self, algebra: WordAlgebra, terms: dict[Key, Fraction] | None = None, truncated: bool = False):
        self.algebra = algebra
        self.terms: dict[Key, Fraction] = {k: v for k, v in (terms or {}).items() if v}
        self.truncated = truncated

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, algebra: WordAlgebra) -> "TensorElement":
        return cls(algebra, {})

    @classmethod
    def unit(cls, algebra: WordAlgebra) -> "TensorElement":
        one = algebra.base.one()
        return cls.from_scalar(algebra, one)

    @classmethod
    def from_scalar(cls, algebra: WordAlgebra, lam: BaseElement) -> "TensorElement":
        coords = algebra.base.coords(lam)
        return cls(algebra, {skey(k): c for k, c in enumerate(coords) if c})

    @classmethod
    def from_word(cls, algebra: WordAlgebra, word: Sequence[int], coeff: Fraction = F1) -> "TensorElement":
        word = tuple(word)
        if not algebra.word_matches(word):
            return cls.zero(algebra)
        if len(word) > algebra.l_max:
            return cls(algebra, {}, truncated=True)
        return cls(algebra, {wkey(w): coeff * c for w, c in algebra.reduce_word(word).items()})

    @classmethod
    def from_words(cls, algebra: WordAlgebra, items: Iterable[tuple[Sequence[int], Fraction]]) -> "TensorElement":
        acc = cls.zero(algebra)
        for word, c in items:
            acc = acc.add(cls.from_word(algebra, word, c))
        return acc

    # -- basic arithmetic -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def add(self, other: "TensorElement") -> "TensorElement":
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, F0) + v
        return TensorElement(self.algebra, terms, self.truncated or other.truncated)

    def sub(self, other: "TensorElement") -> "TensorElement":
        return self.add(other.scale(Fraction(-1)))

    def scale(self, c: Fraction) -> "TensorElement":
        if not c:
            return TensorElement(self.algebra, {}, self.truncated)
        return TensorElement(self.algebra, {k: c * v for k, v in self.terms.items()}, self.truncated)

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- algebra structure --------------------------------------------------------
    def mul(self, other: "TensorElement") -> "TensorElement":
        alg = self.algebra
        base = alg.base
        out: dict[Key, Fraction] = {}
        truncated = self.truncated or other.truncated

        def bump(key: Key, c: Fraction):
            out[key] = out.get(key, F0) + c

        for kx, cx in self.terms.items():
            for ky, cy in other.terms.items():
                c = cx * cy
                if is_scalar_key(kx) and is_scalar_key(ky):
                    prod = base.mul(base.basis_element(kx[1]), base.basis_element(ky[1]))
                    for k, cc in enumerate(base.coords(prod)):
                        if cc:
                            bump(skey(k), c * cc)
                elif is_scalar_key(kx):
                    word = key_word(ky)
                    col = [rr[word[0]] for rr in alg.module.left[kx[1]]]
                    for g2, cc in enumerate(col):
                        if cc:
                            for w2, c2 in alg.reduce_word((g2,) + word[1:]).items():
                                bump(wkey(w2), c * cc * c2)
                elif is_scalar_key(ky):
                    word = key_word(kx)
                    for w2, c2 in alg._right_action(word, ky[1]).items():
                        bump(wkey(w2), c * c2)
                else:
                    wx, wy = key_word(kx), key_word(ky)
                    if alg.module.gens[wx[-1]].source != alg.module.gens[wy[0]].target:
                        continue
                    if len(wx) + len(wy) > alg.l_max:
                        truncated = True
                        continue
                    for w2, c2 in alg.reduce_word(wx + wy).items():
                        bump(wkey(w2), c * c2)
        return TensorElement(self.algebra, out, truncated)

    def act_scalar_left(self, lam: BaseElement) -> "TensorElement":
        return TensorElement.from_scalar(self.algebra, lam).mul(self)

    def act_scalar_right(self, lam: BaseElement) -> "TensorElement":
        return self.mul(TensorElement.from_scalar(self.algebra, lam))

    # -- inspection -----------------------------------------------------------------
    def degrees(self) -> set[int]:
        out = set()
        for k in self.terms:
            out.add(0 if is_scalar_key(k) else self.algebra.word_degree(key_word(k)))
        return out

    def homogeneous_degree(self) -> int | None:
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError("element is not homogeneous")
        return ds.pop()

    def max_length(self) -> int:
        return max((len(key_word(k)) for k in self.terms if not is_scalar_key(k)), default=0)

    def word_part(self) -> dict[Word, Fraction]:
        return {key_word(k): v for k, v in self.terms.items() if not is_scalar_key(k)}

    def scalar_part(self) -> BaseElement:
        base = self.algebra.base
        coords = [F0] * base.dim
        for k, v in self.terms.items():
            if is_scalar_key(k):
                coords[k[1]] = v
        return base.from_coords(coords)

    def truncate(self, l_new: int) -> "TensorElement":
        terms = {}
        truncated = self.truncated
        for k, v in self.terms.items():
            if is_scalar_key(k) or len(key_word(k)) <= l_new:
                terms[k] = v
            else:
                truncated = True
        return TensorElement(self.algebra, terms, truncated)

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            v = self.terms[k]
            if is_scalar_key(k):
                fi, p = self.algebra.base.basis[k[1]]
                label = "e%d" % (fi + 1) if p == 0 else "e%d:x^%d" % (fi + 1, p)
            else:
                label = self.algebra.word_name(key_word(k))
            if v == 1:
                parts.append("+ %s" % label)
            elif v == -1:
                parts.append("- %s" % label)
            elif v > 0:
                parts.append("+ %s %s" % (v, label))
            else:
                parts.append("- %s %s" % (-v, label))
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else text

    def __repr__(self):
        return "<TensorElement %s>" % self.pretty()


def mul(x: TensorElement, y: TensorElement) -> TensorElement:
    if x.algebra is not y.algebra:
        raise ValueError("elements live in different algebras")
    return x.mul(y)
