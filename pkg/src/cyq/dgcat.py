"""Finite dg categories with explicit tables, and Drinfeld quotients.

A category is a finite object list with finite graded hom bases, sparse
differential matrices and sparse composition tables.  Construction checks
every axiom exhaustively over the bases: degrees, d^2 = 0, the graded
Leibniz rule, associativity and unitality.

The Drinfeld quotient formally adjoins h_B of degree -1 with d(h_B) = 1_B
for each contracted object B.  Quotient morphisms are rational combinations
of words  f_n h f_{n-1} ... h f_0  (rightmost letter acts first) whose
interior letters pass through contracted objects; composition concatenates
and splices, the differential follows the Leibniz rule where d(h) glues the
two neighbouring letters by ambient composition.  Words are graded by
(cohomological degree, h-letter count); the h-count filtration is stable
under d, which drives the stabilisation reporting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .linalg import F0, F1

Vec = dict[int, Fraction]


class DgCatAxiomError(ValueError):
    pass


def _vadd(a: Vec, b: Vec, c: Fraction = F1) -> Vec:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, F0) + c * v
        if not out[k]:
            del out[k]
    return out


def _vscale(a: Vec, c: Fraction) -> Vec:
    return {k: c * v for k, v in a.items()} if c else {}


@dataclass
class HomSpace:
    labels: list[str]
    degrees: list[int]

    @property
    def dim(self) -> int:
        return len(self.labels)


class FiniteDgCategory:
    def __init__(
        self,
        objects: Sequence[str],
        homs: dict[tuple[str, str], HomSpace],
        diffs: dict[tuple[str, str], dict[tuple[int, int], Fraction]],
        comps: dict[tuple[str, str, str], dict[tuple[int, int], Vec]],
        identities: dict[str, Vec],
        check: bool = True,
    ):
        self.objects = list(objects)
        self.homs = homs
        self.diffs = diffs
        self.comps = comps
        self.identities = identities
        for pair in list(homs):
            self.diffs.setdefault(pair, {})
        if check:
            self._verify()

    # -- access -------------------------------------------------------------
    def hom(self, X: str, Y: str) -> HomSpace:
        return self.homs.get((X, Y), HomSpace([], []))

    def degree(self, X: str, Y: str, i: int) -> int:
        return self.hom(X, Y).degrees[i]

    def d_vec(self, X: str, Y: str, v: Vec) -> Vec:
        table = self.diffs.get((X, Y), {})
        out: Vec = {}
        for (i, j), c in table.items():
            if j in v:
                out[i] = out.get(i, F0) + c * v[j]
    # prune zeros
        return {k: x for k, x in out.items() if x}

    def compose_basis(self, X: str, Y: str, Z: str, k: int, j: int) -> Vec:
        """(basis k of hom(Y,Z)) after (basis j of hom(X,Y))."""
        return dict(self.comps.get((X, Y, Z), {}).get((k, j), {}))

    def compose(self, X: str, Y: str, Z: str, g: Vec, f: Vec) -> Vec:
        out: Vec = {}
        for k, cg in g.items():
            for j, cf in f.items():
                for i, c in self.compose_basis(X, Y, Z, k, j).items():
                    out[i] = out.get(i, F0) + cg * cf * c
        return {k: x for k, x in out.items() if x}

    def identity(self, X: str) -> Vec:
        return dict(self.identities[X])

    # -- verification ---------------------------------------------------------
    def _verify(self):
        for (X, Y), hs in self.homs.items():
            if X not in self.objects or Y not in self.objects:
                raise DgCatAxiomError("hom space over unknown objects (%s, %s)" % (X, Y))
            table = self.diffs.get((X, Y), {})
            for (i, j), c in table.items():
                if c and hs.degrees[i] != hs.degrees[j] + 1:
                    raise DgCatAxiomError(
                        "differential entry %s <- %s in hom(%s,%s) is not degree +1"
                        % (hs.labels[i], hs.labels[j], X, Y)
                    )
            for j in range(hs.dim):
                dd = self.d_vec(X, Y, self.d_vec(X, Y, {j: F1}))
                if dd:
                    raise DgCatAxiomError(
                        "d^2 is nonzero on %s in hom(%s,%s)" % (hs.labels[j], X, Y)
                    )
        for X in self.objects:
            one = self.identities.get(X)
            if one is None:
                raise DgCatAxiomError("missing identity for %s" % X)
            hs = self.hom(X, X)
            for i in one:
                if hs.degrees[i] != 0:
                    raise DgCatAxiomError("identity of %s is not degree 0" % X)
            if self.d_vec(X, X, one):
                raise DgCatAxiomError("identity of %s is not a cycle" % X)
        # composition: degrees, Leibniz, units, associativity
        for (X, Y, Z), table in self.comps.items():
            hXY, hYZ, hXZ = self.hom(X, Y), self.hom(Y, Z), self.hom(X, Z)
            for (k, j), out in table.items():
                dk, dj = hYZ.degrees[k], hXY.degrees[j]
                for i, c in out.items():
                    if c and hXZ.degrees[i] != dk + dj:
                        raise DgCatAxiomError(
                            "composition in (%s,%s,%s) is not degree additive" % (X, Y, Z)
                        )
        for (X, Y) in self.homs:
            hXY = self.hom(X, Y)
            for j in range(hXY.dim):
                f = {j: F1}
                lhs = self.compose(X, Y, Y, self.identity(Y), f)
                if lhs != f:
                    raise DgCatAxiomError("left unit fails on %s in hom(%s,%s)" % (hXY.labels[j], X, Y))
                rhs = self.compose(X, X, Y, f, self.identity(X))
                if rhs != f:
                    raise DgCatAxiomError("right unit fails on %s in hom(%s,%s)" % (hXY.labels[j], X, Y))
        for (X, Y) in self.homs:
            for (Y2, Z) in self.homs:
                if Y2 != Y:
                    continue
                hXY, hYZ = self.hom(X, Y), self.hom(Y, Z)
                for j in range(hXY.dim):
                    for k in range(hYZ.dim):
                        g, f = {k: F1}, {j: F1}
                        gf = self.compose(X, Y, Z, g, f)
                        # Leibniz
                        lhs = self.d_vec(X, Z, gf)
                        rhs = self.compose(X, Y, Z, self.d_vec(Y, Z, g), f)
                        sign = F1 if hYZ.degrees[k] % 2 == 0 else Fraction(-1)
                        rhs = _vadd(rhs, self.compose(X, Y, Z, g, self.d_vec(X, Y, f)), sign)
                        if lhs != rhs:
                            raise DgCatAxiomError(
                                "Leibniz fails on (%s, %s) in (%s,%s,%s)"
                                % (hYZ.labels[k], hXY.labels[j], X, Y, Z)
                            )
                        for (Z2, W) in self.homs:
                            if Z2 != Z:
                                continue
                            hZW = self.hom(Z, W)
                            for m in range(hZW.dim):
                                h = {m: F1}
                                a = self.compose(X, Z, W, h, gf)
                                hg = self.compose(Y, Z, W, h, g)
                                b = self.compose(X, Y, W, hg, f)
                                if a != b:
                                    raise DgCatAxiomError(
                                        "associativity fails at (%s,%s,%s) -> %s"
                                        % (X, Y, Z, W)
                                    )


def make_dgcat(
    objects: Sequence[str],
    homs: dict[tuple[str, str], HomSpace],
    diffs: dict[tuple[str, str], dict[tuple[int, int], Fraction]],
    comps: dict[tuple[str, str, str], dict[tuple[int, int], Vec]],
    identities: dict[str, Vec],
) -> FiniteDgCategory:
    return FiniteDgCategory(objects, homs, diffs, comps, identities)


def unit_category() -> FiniteDgCategory:
    homs = {("*", "*"): HomSpace(["1"], [0])}
    comps = {("*", "*", "*"): {(0, 0): {0: F1}}}
    return FiniteDgCategory(["*"], homs, {}, comps, {"*": {0: F1}})


def one_object_algebra(labels: list[str], degrees: list[int], mult: dict[tuple[int, int], Vec], unit_index: int = 0, diffs: dict[tuple[int, int], Fraction] | None = None) -> FiniteDgCategory:
    homs = {("*", "*"): HomSpace(labels, degrees)}
    comps = {("*", "*", "*"): mult}
    return FiniteDgCategory(["*"], homs, {("*", "*"): diffs or {}}, comps, {"*": {unit_index: F1}})


# ---------------------------------------------------------------------------
# graded homology tables (H^0 and friends)


def homology_basis(cat, X: str, Y: str, degree: int) -> tuple[int, list[Vec]]:
    """Dimension and representative cycles of H^degree(hom(X,Y))."""
    hs = cat.hom(X, Y)
    idx = [i for i in range(hs.dim) if hs.degrees[i] == degree]
    above = [i for i in range(hs.dim) if hs.degrees[i] == degree + 1]
    below = [i for i in range(hs.dim) if hs.degrees[i] == degree - 1]
    if not idx:
        return 0, []
    pos = {i: p for p, i in enumerate(idx)}
    # kernel of d restricted to this degree
    rows = []
    for p, i in enumerate(idx):
        dv = cat.d_vec(X, Y, {i: F1})
        rows.append([dv.get(a, F0) for a in above])
    ker = linalg.nullspace(linalg.transpose(rows), len(idx)) if above else [
        linalg.unit_vector(len(idx), p) for p in range(len(idx))
    ]
    img_rows = []
    for b in below:
        dv = cat.d_vec(X, Y, {b: F1})
        img_rows.append([dv.get(i, F0) for i in idx])
    img = linalg.row_space_reduce(img_rows) if img_rows else []
    dim = len(ker) - linalg.rank(list(img)) if not img else len(ker) - linalg.rank(img)
    # representatives: kernel vectors modulo image
    span = [r[:] for r in img]
    reps = []
    for v in ker:
        if not linalg.in_span(linalg.row_space_reduce(span) if span else [], v):
            reps.append({idx[p]: c for p, c in enumerate(v) if c})
            span.append(list(v))
    return len(reps), reps


def h_zero_cat(cat, degree: int = 0) -> dict:
    """Hom dimensions of H^degree for each object pair, with representatives."""
    table = {}
    for X in cat.objects:
        for Y in cat.objects:
            dim, reps = homology_basis(cat, X, Y, degree)
            table[(X, Y)] = {"dim": dim, "reps": reps}
    return table


# ---------------------------------------------------------------------------
# Drinfeld quotient

# a word is a tuple of letters, display order, rightmost acts first:
#   ('f', src, tgt, basis_index)  ambient basis morphism
#   ('h', obj)                    adjoined contracting homotopy
# words alternate f h f h ... f (odd length, >= 1)

Letter = tuple
QWord = tuple


class DrinfeldQuotientCat:
    def __init__(self, ambient: FiniteDgCategory, contracted: Sequence[str], h_trunc: int):
        for B in contracted:
            if B not in ambient.objects:
                raise ValueError("contracted object %s is not in the category" % B)
        self.ambient = ambient
        self.contracted = list(contracted)
        self.h_trunc = h_trunc
        self.objects = list(ambient.objects)
        self.truncation_events = 0
        self._bases: dict[tuple[str, str], list[QWord]] = {}
        self._index: dict[tuple[str, str], dict[QWord, int]] = {}
        self._build_bases()

    # -- word helpers -----------------------------------------------------
    def word_degree(self, word: QWord) -> int:
        deg = 0
        for let in word:
            if let[0] == "f":
                deg += self.ambient.hom(let[1], let[2]).degrees[let[3]]
            else:
                deg -= 1
        return deg

    def word_h_count(self, word: QWord) -> int:
        return sum(1 for let in word if let[0] == "h")

    def word_label(self, word: QWord) -> str:
        parts = []
        for let in word:
            if let[0] == "f":
                parts.append(self.ambient.hom(let[1], let[2]).labels[let[3]])
            else:
                parts.append("h[%s]" % let[1])
        return "*".join(parts)

    def _build_bases(self):
        amb = self.ambient
        for X in self.objects:
            for Y in self.objects:
                words: list[QWord] = []
                # n h-letters pass through contracted objects B_1 ... B_n
                # word: f_n h[B_n] f_{n-1} ... h[B_1] f_0 with
                # f_0 in hom(X, B_1), f_k in hom(B_k, B_{k+1}), f_n in hom(B_n, Y)
                def rec(prefix: list[Letter], cur_src: str, h_left: int):
                    # extend towards X; prefix holds letters from the Y end
                    for i in range(amb.hom(X, cur_src).dim):
                        words.append(tuple(prefix + [("f", X, cur_src, i)]))
                    if h_left > 0:
                        for B in self.contracted:
                            for i in range(amb.hom(B, cur_src).dim):
                                rec(prefix + [("f", B, cur_src, i), ("h", B)], B, h_left - 1)

                rec([], Y, self.h_trunc)
                words.sort()
                self._bases[(X, Y)] = words
                self._index[(X, Y)] = {w: i for i, w in enumerate(words)}

    # -- category interface -------------------------------------------------
    def hom(self, X: str, Y: str) -> HomSpace:
        words = self._bases[(X, Y)]
        return HomSpace([self.word_label(w) for w in words], [self.word_degree(w) for w in words])

    def word_basis(self, X: str, Y: str) -> list[QWord]:
        return self._bases[(X, Y)]

    def include(self, X: str, Y: str, v: Vec) -> Vec:
        """Canonical functor on morphisms: ambient basis -> one-letter words."""
        out: Vec = {}
        for j, c in v.items():
            w = (("f", X, Y, j),)
            out[self._index[(X, Y)][w]] = c
        return out

    def identity(self, X: str) -> Vec:
        return self.include(X, X, self.ambient.identity(X))

    def _word_compose(self, X: str, Y: str, Z: str, w2: QWord, w1: QWord) -> Vec:
        """w2 (Y -> Z) after w1 (X -> Y), as a vector in hom(X, Z)."""
        amb = self.ambient
        if self.word_h_count(w1) + self.word_h_count(w2) > self.h_trunc:
            self.truncation_events += 1
            return {}
        # splice: last letter of w2 is ('f', A, ?, j2), first letter of w1 is ('f', ?, A?, ...)
        f2 = w2[-1]
        f1 = w1[0]
        assert f2[0] == "f" and f1[0] == "f"
        mid_from, mid_to = f1[1], f2[2]
        glue = amb.compose(f1[1], f1[2], f2[2], {f2[3]: F1}, {f1[3]: F1})
        out: Vec = {}
        for i, c in glue.items():
            word = w2[:-1] + (("f", f1[1], f2[2], i),) + w1[1:]
            out[self._index[(X, Z)][word]] = out.get(self._index[(X, Z)][word], F0) + c
        return {k: v for k, v in out.items() if v}

    def compose(self, X: str, Y: str, Z: str, g: Vec, f: Vec) -> Vec:
        words_g = self._bases[(Y, Z)]
        words_f = self._bases[(X, Y)]
        out: Vec = {}
        for k, cg in g.items():
            for j, cf in f.items():
                piece = self._word_compose(X, Y, Z, words_g[k], words_f[j])
                for i, c in piece.items():
                    out[i] = out.get(i, F0) + cg * cf * c
        return {k: v for k, v in out.items() if v}

    def compose_basis(self, X: str, Y: str, Z: str, k: int, j: int) -> Vec:
        return self._word_compose(X, Y, Z, self._bases[(Y, Z)][k], self._bases[(X, Y)][j])

    def d_word(self, X: str, Y: str, word: QWord) -> Vec:
        """Leibniz differential; d(h) = 1 splices the two neighbours."""
        amb = self.ambient
        out: Vec = {}
        sign = F1
        for p, let in enumerate(word):
            if let[0] == "f":
                src, tgt, j = let[1], let[2], let[3]
                dv = amb.d_vec(src, tgt, {j: F1})
                for i, c in dv.items():
                    w2 = word[:p] + (("f", src, tgt, i),) + word[p + 1 :]
                    idx = self._index[(X, Y)][w2]
                    out[idx] = out.get(idx, F0) + sign * c
                deg = amb.hom(src, tgt).degrees[j]
                if deg % 2:
                    sign = -sign
            else:
                # d(h_B) = 1_B: splice word[p-1] (left) with word[p+1] (right)
                left = word[p - 1]
                right = word[p + 1]
                B = let[1]
                glue = amb.compose(right[1], B, left[2], {left[3]: F1}, {right[3]: F1})
                for i, c in glue.items():
                    w2 = word[: p - 1] + (("f", right[1], left[2], i),) + word[p + 2 :]
                    idx = self._index[(X, Y)][w2]
                    out[idx] = out.get(idx, F0) + sign * c
                sign = -sign  # |h| = -1
        return {k: v for k, v in out.items() if v}

    def d_vec(self, X: str, Y: str, v: Vec) -> Vec:
        out: Vec = {}
        words = self._bases[(X, Y)]
        for j, c in v.items():
            for i, c2 in self.d_word(X, Y, words[j]).items():
                out[i] = out.get(i, F0) + c * c2
        return {k: v2 for k, v2 in out.items() if v2}

    # -- filtered homology ----------------------------------------------------
    def restricted_view(self, h_budget: int) -> "QuotientView":
        return QuotientView(self, h_budget)


class QuotientView:
    """The quotient with words of at most h_budget h-letters (a subcomplex)."""

    def __init__(self, quotient: DrinfeldQuotientCat, h_budget: int):
        self.quotient = quotient
        self.h_budget = h_budget
        self.objects = quotient.objects
        self._keep: dict[tuple[str, str], list[int]] = {}
        self._homs: dict[tuple[str, str], HomSpace] = {}
        for X in self.objects:
            for Y in self.objects:
                words = quotient.word_basis(X, Y)
                keep = [i for i, w in enumerate(words) if quotient.word_h_count(w) <= h_budget]
                self._keep[(X, Y)] = keep
                hs = quotient.hom(X, Y)
                self._homs[(X, Y)] = HomSpace(
                    [hs.labels[i] for i in keep], [hs.degrees[i] for i in keep]
                )

    def hom(self, X: str, Y: str) -> HomSpace:
        return self._homs[(X, Y)]

    def identity(self, X: str) -> Vec:
        full = self.quotient.identity(X)
        keep = self._keep[(X, X)]
        pos = {i: p for p, i in enumerate(keep)}
        return {pos[i]: c for i, c in full.items()}

    def d_vec(self, X: str, Y: str, v: Vec) -> Vec:
        keep = self._keep[(X, Y)]
        pos = {i: p for p, i in enumerate(keep)}
        full = self.quotient.d_vec(X, Y, {keep[j]: c for j, c in v.items()})
        return {pos[i]: c for i, c in full.items()}

    def compose(self, X: str, Y: str, Z: str, g: Vec, f: Vec) -> Vec:
        keepg = self._keep[(Y, Z)]
        keepf = self._keep[(X, Y)]
        keep_out = self._keep[(X, Z)]
        pos = {i: p for p, i in enumerate(keep_out)}
        full = self.quotient.compose(
            X, Y, Z, {keepg[k]: c for k, c in g.items()}, {keepf[j]: c for j, c in f.items()}
        )
        out = {}
        for i, c in full.items():
            if i in pos:
                out[pos[i]] = c
            # words beyond the budget cannot appear: composition adds h-counts
        return out

    def compose_basis(self, X: str, Y: str, Z: str, k: int, j: int) -> Vec:
        return self.compose(X, Y, Z, {k: F1}, {j: F1})


def drinfeld_quotient(cat: FiniteDgCategory, contracted: Sequence[str], h_trunc: int) -> DrinfeldQuotientCat:
    return DrinfeldQuotientCat(cat, contracted, h_trunc)


def h_zero_quotient_table(q: DrinfeldQuotientCat, degree: int = 0) -> dict:
    """H^degree dims per h-count budget with a stabilisation flag."""
    dims_by_budget = {}
    for budget in range(q.h_trunc + 1):
        view = q.restricted_view(budget)
        dims_by_budget[budget] = {
            (X, Y): homology_basis(view, X, Y, degree)[0]
            for X in q.objects
            for Y in q.objects
        }
    stabilized = (
        q.h_trunc >= 1
        and dims_by_budget[q.h_trunc] == dims_by_budget[q.h_trunc - 1]
    )
    return {"dims_by_budget": dims_by_budget, "stabilized": stabilized}


# ---------------------------------------------------------------------------
# formal shift closure (used to build fixtures with shifted objects)


def shift_closure(cat: FiniteDgCategory, lo: int, hi: int) -> FiniteDgCategory:
    """Category with objects X@k (k in [lo, hi]) modelling shifts of X.

    hom(X@j, Y@k) carries the basis of hom(X, Y) with degrees offset by
    j - k; differentials pick up the sign (-1)^k of the target shift.
    """
    objects = ["%s@%d" % (X, k) for X in cat.objects for k in range(lo, hi + 1)]
    homs: dict[tuple[str, str], HomSpace] = {}
    diffs: dict[tuple[str, str], dict[tuple[int, int], Fraction]] = {}
    comps: dict[tuple[str, str, str], dict[tuple[int, int], Vec]] = {}
    identities: dict[str, Vec] = {}
    for X in cat.objects:
        for j in range(lo, hi + 1):
            for Y in cat.objects:
                for k in range(lo, hi + 1):
                    hs = cat.hom(X, Y)
                    homs[("%s@%d" % (X, j), "%s@%d" % (Y, k))] = HomSpace(
                        list(hs.labels), [d + j - k for d in hs.degrees]
                    )
                    sign = F1 if k % 2 == 0 else Fraction(-1)
                    diffs[("%s@%d" % (X, j), "%s@%d" % (Y, k))] = {
                        key: sign * c for key, c in cat.diffs.get((X, Y), {}).items()
                    }
    for (X, Y, Z), table in cat.comps.items():
        for j in range(lo, hi + 1):
            for k in range(lo, hi + 1):
                for m in range(lo, hi + 1):
                    comps[
                        ("%s@%d" % (X, j), "%s@%d" % (Y, k), "%s@%d" % (Z, m))
                    ] = {key: dict(v) for key, v in table.items()}
    for X in cat.objects:
        for j in range(lo, hi + 1):
            identities["%s@%d" % (X, j)] = cat.identity(X)
    return FiniteDgCategory(objects, homs, diffs, comps, identities)


# ---------------------------------------------------------------------------
# bounded complexes over a finite dg category (with degree-zero homs)


def complexes_category(base: FiniteDgCategory, specs: dict[str, dict]) -> FiniteDgCategory:
    """Dg category of bounded complexes with components in ``base``.

    Each spec: {"components": [(complex_degree, base_object), ...],
    "diff": {(i, j): Vec}} where entry (i, j) is a base morphism from
    component j to component i raising the complex degree by one.  Hom
    complexes are componentwise, with d(f) = d_N f - (-1)^{|f|} f d_M and
    plain matrix composition.  The construction is verified like any other
    category, so d^2 = 0 of the specs is enforced.
    """
    for nm, spec in specs.items():
        for (i, j), vec in spec.get("diff", {}).items():
            ci, cj = spec["components"][i], spec["components"][j]
            if ci[0] != cj[0] + 1:
                raise DgCatAxiomError("differential entry (%d, %d) of %s is not degree +1" % (i, j, nm))

    names = list(specs)
    homs: dict[tuple[str, str], HomSpace] = {}
    diffs: dict[tuple[str, str], dict[tuple[int, int], Fraction]] = {}
    comps: dict[tuple[str, str, str], dict[tuple[int, int], Vec]] = {}
    identities: dict[str, Vec] = {}

    slot_basis: dict[tuple[str, str], list[tuple[int, int, int]]] = {}
    for M in names:
        for N in names:
            basis = []
            labels = []
            degrees = []
            for i_m, (dm, om) in enumerate(specs[M]["components"]):
                for j_n, (dn, on) in enumerate(specs[N]["components"]):
                    hs = base.hom(om, on)
                    for k in range(hs.dim):
                        basis.append((i_m, j_n, k))
                        labels.append("%s[%d->%d]" % (hs.labels[k], i_m, j_n))
                        degrees.append(dn - dm + hs.degrees[k])
            slot_basis[(M, N)] = basis
            homs[(M, N)] = HomSpace(labels, degrees)

    def slot_index(M, N, i_m, j_n, k):
        return slot_basis[(M, N)].index((i_m, j_n, k))

    for M in names:
        for N in names:
            table: dict[tuple[int, int], Fraction] = {}
            basis = slot_basis[(M, N)]
            degrees = homs[(M, N)].degrees
            for col, (i_m, j_n, k) in enumerate(basis):
                om = specs[M]["components"][i_m][1]
                on = specs[N]["components"][j_n][1]
                # d_N o f
                for (j2, j1), vec in specs[N].get("diff", {}).items():
                    if j1 != j_n:
                        continue
                    on2 = specs[N]["components"][j2][1]
                    out = base.compose(om, on, on2, vec, {k: F1})
                    for k2, c in out.items():
                        table[(slot_index(M, N, i_m, j2, k2), col)] = (
                            table.get((slot_index(M, N, i_m, j2, k2), col), F0) + c
                        )
                # -(-1)^{|f|} f o d_M
                sgn = Fraction(-1) if degrees[col] % 2 == 0 else F1
                for (i2, i1), vec in specs[M].get("diff", {}).items():
                    if i2 != i_m:
                        continue
                    om1 = specs[M]["components"][i1][1]
                    out = base.compose(om1, om, on, {k: F1}, vec)
                    for k2, c in out.items():
                        table[(slot_index(M, N, i1, j_n, k2), col)] = (
                            table.get((slot_index(M, N, i1, j_n, k2), col), F0) + sgn * c
                        )
                # internal base differential (zero for stalk bases, kept general)
                dk = base.d_vec(om, on, {k: F1})
                for k2, c in dk.items():
                    table[(slot_index(M, N, i_m, j_n, k2), col)] = (
                        table.get((slot_index(M, N, i_m, j_n, k2), col), F0) + c
                    )
            diffs[(M, N)] = {kk: v for kk, v in table.items() if v}

    for M in names:
        for N in names:
            for O in names:
                table: dict[tuple[int, int], Vec] = {}
                for kg, (j_n, l_o, kk) in enumerate(slot_basis[(N, O)]):
                    for jf, (i_m, j_n2, k) in enumerate(slot_basis[(M, N)]):
                        if j_n2 != j_n:
                            table[(kg, jf)] = table.get((kg, jf), {})
                            continue
                        om = specs[M]["components"][i_m][1]
                        on = specs[N]["components"][j_n][1]
                        oo = specs[O]["components"][l_o][1]
                        out = base.compose(om, on, oo, {kk: F1}, {k: F1})
                        acc = table.get((kg, jf), {})
                        for k2, c in out.items():
                            idx = slot_index(M, O, i_m, l_o, k2)
                            acc[idx] = acc.get(idx, F0) + c
                        table[(kg, jf)] = {a: b for a, b in acc.items() if b}
                comps[(M, N, O)] = table

    for M in names:
        vec: Vec = {}
        for i_m, (dm, om) in enumerate(specs[M]["components"]):
            for k, c in base.identity(om).items():
                vec[slot_index(M, M, i_m, i_m, k)] = c
        identities[M] = vec

    return FiniteDgCategory(names, homs, diffs, comps, identities)


def rebase_identity(cat: FiniteDgCategory) -> FiniteDgCategory:
    """Change endomorphism bases so each identity is a basis element.

    Needed by the normalised Hochschild machinery.  Only hom(X, X) spaces
    whose identity is a combination are touched: the lowest-index degree
    zero basis vector carrying a nonzero identity coefficient is replaced
    by the identity itself, and all tables are conjugated accordingly.
    """
    S: dict[tuple[str, str], linalg.Matrix] = {}
    Sinv: dict[tuple[str, str], linalg.Matrix] = {}
    new_homs: dict[tuple[str, str], HomSpace] = {}
    for (X, Y), hs in cat.homs.items():
        n = hs.dim
        mat = linalg.identity(n)
        labels = list(hs.labels)
        if X == Y:
            ident = cat.identity(X)
            keys = sorted(ident)
            if not (len(ident) == 1 and ident[keys[0]] == Fraction(1)):
                k = next(i for i in sorted(ident) if hs.degrees[i] == 0 and ident[i])
                for i in range(n):
                    mat[i][k] = ident.get(i, F0)
                labels[k] = "1[%s]" % X
        S[(X, Y)] = mat
        inv = linalg.inverse(mat)
        if inv is None:
            raise DgCatAxiomError("identity basis change is singular at %s" % X)
        Sinv[(X, Y)] = inv
        new_homs[(X, Y)] = HomSpace(labels, list(hs.degrees))

    def to_new(X, Y, vec: Vec) -> Vec:
        inv = Sinv[(X, Y)]
        out: Vec = {}
        for j, c in vec.items():
            for i in range(len(inv)):
                if inv[i][j]:
                    out[i] = out.get(i, F0) + inv[i][j] * c
        return {i: c for i, c in out.items() if c}

    def from_new(X, Y, j: int) -> Vec:
        mat = S[(X, Y)]
        return {i: mat[i][j] for i in range(len(mat)) if mat[i][j]}

    new_diffs = {}
    for (X, Y), hs in cat.homs.items():
        table = {}
        for j in range(hs.dim):
            img = to_new(X, Y, cat.d_vec(X, Y, from_new(X, Y, j)))
            for i, c in img.items():
                table[(i, j)] = c
        new_diffs[(X, Y)] = table
    new_comps = {}
    for (X, Y, Z), _ in cat.comps.items():
        table = {}
        nYZ = cat.hom(Y, Z).dim
        nXY = cat.hom(X, Y).dim
        for k in range(nYZ):
            for j in range(nXY):
                out = cat.compose(X, Y, Z, from_new(Y, Z, k), from_new(X, Y, j))
                table[(k, j)] = to_new(X, Z, out)
        new_comps[(X, Y, Z)] = table
    new_ids = {X: to_new(X, X, cat.identity(X)) for X in cat.objects}
    return FiniteDgCategory(cat.objects, new_homs, new_diffs, new_comps, new_ids)
