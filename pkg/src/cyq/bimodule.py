"""Finite graded bimodules over a semisimple base.

A bimodule is a finite list of generators, each supported at a single
(source factor, target factor) pair and a single degree, together with
structure-constant tables for the left action of each Q-basis scalar of
the base (through the target factor) and the right action (through the
source factor).  Construction verifies the axioms exhaustively over the
finite bases: supports, degree preservation, commuting actions, unitality
and multiplicativity.

``tensor_over_base`` realises M (x)_l N as the quotient of the rational
tensor product by the middle-scalar hop relations m.b (x) n - m (x) b.n,
eliminated by Gaussian reduction with lexicographic pivot order, so the
resulting basis is deterministic.  The convention throughout: in a product
the right factor acts first, so source(M (x) N) comes from N and
target comes from M.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .linalg import F0, F1
from .base_field import SemisimpleBase


class BimoduleAxiomError(ValueError):
    pass


class GradingError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    source: int  # factor index
    target: int  # factor index
    degree: int


class GradedBimodule:
    """Verified graded bimodule with explicit action tables.

    left[k] / right[k] are dim x dim matrices over the generator basis for
    the action of base basis scalar k (column j holds the image of gen j).
    """

    def __init__(
        self,
        base: SemisimpleBase,
        gens: Sequence[Generator],
        left: Sequence[linalg.Matrix],
        right: Sequence[linalg.Matrix],
        check: bool = True,
    ):
        self.base = base
        self.gens = list(gens)
        self.left = [linalg.copy(m) for m in left]
        self.right = [linalg.copy(m) for m in right]
        self._name_index = {g.name: i for i, g in enumerate(self.gens)}
        if len(self._name_index) != len(self.gens):
            raise BimoduleAxiomError("duplicate generator names")
        if check:
            self._verify()

    @property
    def dim(self) -> int:
        return len(self.gens)

    def index(self, name: str) -> int:
        return self._name_index[name]

    def degrees(self) -> set[int]:
        return {g.degree for g in self.gens}

    def concentrated_in(self, lo: int, hi: int) -> bool:
        return all(lo <= g.degree <= hi for g in self.gens)

    # -- actions ----------------------------------------------------------
    def act_left_basis(self, k: int, vec: Sequence[Fraction]) -> list[Fraction]:
        return linalg.matvec(self.left[k], vec)

    def act_right_basis(self, k: int, vec: Sequence[Fraction]) -> list[Fraction]:
        return linalg.matvec(self.right[k], vec)

    def act_left(self, lam, vec: Sequence[Fraction]) -> list[Fraction]:
        coords = self.base.coords(lam)
        out = [F0] * self.dim
        for k, c in enumerate(coords):
            if c:
                img = self.act_left_basis(k, vec)
                out = [o + c * x for o, x in zip(out, img)]
        return out

    def act_right(self, lam, vec: Sequence[Fraction]) -> list[Fraction]:
        coords = self.base.coords(lam)
        out = [F0] * self.dim
        for k, c in enumerate(coords):
            if c:
                img = self.act_right_basis(k, vec)
                out = [o + c * x for o, x in zip(out, img)]
        return out

    # -- verification -----------------------------------------------------
    def _verify(self):
        base = self.base
        n = self.dim
        if len(self.left) != base.dim or len(self.right) != base.dim:
            raise BimoduleAxiomError("need one action matrix per base basis scalar")
        for k in range(base.dim):
            fi, _ = base.basis[k]
            for i in range(n):
                for j in range(n):
                    if self.left[k][i][j]:
                        if self.gens[i].degree != self.gens[j].degree:
                            raise GradingError(
                                "left action of scalar %d mixes degrees (%s <- %s)"
                                % (k, self.gens[i].name, self.gens[j].name)
                            )
                        if self.gens[i].target != fi or self.gens[j].target != fi:
                            raise BimoduleAxiomError(
                                "left action of factor %d scalar touches generator outside its support" % fi
                            )
                        if self.gens[i].source != self.gens[j].source:
                            raise BimoduleAxiomError("left action must preserve the source factor")
                    if self.right[k][i][j]:
                        if self.gens[i].degree != self.gens[j].degree:
                            raise GradingError(
                                "right action of scalar %d mixes degrees (%s <- %s)"
                                % (k, self.gens[i].name, self.gens[j].name)
                            )
                        if self.gens[i].source != fi or self.gens[j].source != fi:
                            raise BimoduleAxiomError(
                                "right action of factor %d scalar touches generator outside its support" % fi
                            )
                        if self.gens[i].target != self.gens[j].target:
                            raise BimoduleAxiomError("right action must preserve the target factor")
        # unit decomposition: sum of idempotent actions is the identity
        for side, tables in (("left", self.left), ("right", self.right)):
            acc = linalg.zeros(n, n)
            for i in range(base.n_factors):
                k = base.basis.index((i, 0))
                mat = tables[k]
                for r in range(n):
                    for c in range(n):
                        acc[r][c] += mat[r][c]
            if acc != linalg.identity(n):
                raise BimoduleAxiomError("%s idempotent actions do not sum to the identity" % side)
        # idempotent actions are the support projections
        for i in range(base.n_factors):
            k = base.basis.index((i, 0))
            for j, g in enumerate(self.gens):
                expect_l = [F1 if (r == j and g.target == i) else F0 for r in range(n)]
                if [row[j] for row in self.left[k]] != expect_l:
                    raise BimoduleAxiomError("left unit action is not the target projection")
                expect_r = [F1 if (r == j and g.source == i) else F0 for r in range(n)]
                if [row[j] for row in self.right[k]] != expect_r:
                    raise BimoduleAxiomError("right unit action is not the source projection")
        # multiplicativity on each factor and commutation of the two sides
        for k1 in range(base.dim):
            b1 = base.basis_element(k1)
            for k2 in range(base.dim):
                b2 = base.basis_element(k2)
                prod = base.coords(base.mul(b1, b2))
                lhs = linalg.matmul(self.left[k1], self.left[k2])
                rhs = linalg.zeros(n, n)
                for k, c in enumerate(prod):
                    if c:
                        for r in range(n):
                            for cc in range(n):
                                rhs[r][cc] += c * self.left[k][r][cc]
                if lhs != rhs:
                    raise BimoduleAxiomError("left action is not multiplicative")
                # right action reverses composition order: m.(b1 b2) = (m.b1).b2
                lhs_r = linalg.matmul(self.right[k2], self.right[k1])
                rhs_r = linalg.zeros(n, n)
                for k, c in enumerate(prod):
                    if c:
                        for r in range(n):
                            for cc in range(n):
                                rhs_r[r][cc] += c * self.right[k][r][cc]
                if lhs_r != rhs_r:
                    raise BimoduleAxiomError("right action is not multiplicative")
                comm1 = linalg.matmul(self.left[k1], self.right[k2])
                comm2 = linalg.matmul(self.right[k2], self.left[k1])
                if comm1 != comm2:
                    raise BimoduleAxiomError("left and right actions do not commute")


@dataclass
class BimoduleElement:
    module: GradedBimodule
    coeffs: list[Fraction]

    def __post_init__(self):
        if len(self.coeffs) != self.module.dim:
            raise ValueError("coefficient vector length must equal basis size")


def make_bimodule(
    base: SemisimpleBase,
    gens: Sequence[Generator],
    left: Sequence[linalg.Matrix],
    right: Sequence[linalg.Matrix],
) -> GradedBimodule:
    return GradedBimodule(base, gens, left, right)


# ---------------------------------------------------------------------------
# convenience builder: generator groups that are free of rank one over the
# field acting on the declared side(s)


def bimodule_from_groups(base: SemisimpleBase, groups: Sequence[dict]) -> GradedBimodule:
    """Each group: {names, source, target, degree, action: none|left|right|central}.

    A group of d names is free of rank one over the acting degree-d factor:
    the primitive element acts by the companion matrix of its minimal
    polynomial on the group, mirroring multiplication in the factor itself.
    'central' requires source == target and installs the same matrices on
    both sides.
    """
    gens: list[Generator] = []
    group_of: list[int] = []
    for gi, grp in enumerate(groups):
        for nm in grp["names"]:
            gens.append(Generator(nm, grp["source"], grp["target"], grp["degree"]))
            group_of.append(gi)
    n = len(gens)
    left = [linalg.zeros(n, n) for _ in range(base.dim)]
    right = [linalg.zeros(n, n) for _ in range(base.dim)]

    offset = 0
    for grp in groups:
        names = grp["names"]
        src, tgt, mode = grp["source"], grp["target"], grp.get("action", "none")
        d = len(names)
        if mode == "none":
            if d != 1:
                raise BimoduleAxiomError("a group without field action must be a single generator")
        elif mode in ("left", "central"):
            if base.factors[tgt].degree != d:
                raise BimoduleAxiomError("group size must match the acting factor degree")
        if mode in ("right",):
            if base.factors[src].degree != d:
                raise BimoduleAxiomError("group size must match the acting factor degree")
        if mode == "central" and src != tgt:
            raise BimoduleAxiomError("central groups need equal source and target")
        # every side governed by a nontrivial extension needs its action
        if base.factors[tgt].degree > 1 and mode not in ("left", "central"):
            raise BimoduleAxiomError("target factor is a nontrivial extension: need a left action")
        if base.factors[src].degree > 1 and mode not in ("right", "central"):
            raise BimoduleAxiomError("source factor is a nontrivial extension: need a right action")

        # unit actions (projections) for every group
        kl = base.basis.index((tgt, 0))
        kr = base.basis.index((src, 0))
        for j in range(d):
            left[kl][offset + j][offset + j] = F1
            right[kr][offset + j][offset + j] = F1

        def install(tables, factor_idx):
            f = base.factors[factor_idx]
            # matrix of multiplication by x^p on the power basis = companion^p
            comp = f.mul_matrix(f.gen())
            power = linalg.identity(d)
            for p in range(1, f.degree):
                power = linalg.matmul(comp, power)
                k = base.basis.index((factor_idx, p))
                for i in range(d):
                    for j in range(d):
                        tables[k][offset + i][offset + j] = power[i][j]

        if mode in ("left", "central"):
            install(left, tgt)
        if mode in ("right", "central"):
            install(right, src)
        if mode == "central":
            pass  # both sides installed above via two calls
        offset += d
    return GradedBimodule(base, gens, left, right)


# ---------------------------------------------------------------------------
# sparse elimination shared by tensor products and the word algebra


class SparseEliminator:
    """Incremental Gaussian elimination of sparse rational rows.

    The pivot of each row is its greatest column index, so the canonical
    (non-pivot) basis consists of the lexicographically smallest columns.
    """

    def __init__(self):
        self.pivot_rows: dict[int, dict[int, Fraction]] = {}

    def add_row(self, row: dict[int, Fraction]):
        row = {c: v for c, v in row.items() if v}
        while row:
            p = max(row)
            if p in self.pivot_rows:
                f = row[p]
                for c, v in self.pivot_rows[p].items():
                    row[c] = row.get(c, F0) - f * v
                    if not row[c]:
                        del row[c]
            else:
                pv = row[p]
                self.pivot_rows[p] = {c: v / pv for c, v in row.items()}
                return

    def finalize(self):
        """Back-substitute so pivot rows reference only non-pivot columns."""
        for p in sorted(self.pivot_rows, reverse=False):
            row = self.pivot_rows[p]
            changed = True
            while changed:
                changed = False
                for c in sorted(row):
                    if c != p and c in self.pivot_rows:
                        f = row[c]
                        del row[c]
                        for c2, v in self.pivot_rows[c].items():
                            if c2 != c:
                                row[c2] = row.get(c2, F0) - f * v
                                if not row[c2]:
                                    del row[c2]
                        changed = True
                        break

    def pivots(self) -> set[int]:
        return set(self.pivot_rows)

    def rewrite(self, col: int) -> dict[int, Fraction]:
        """Express column as a combination of non-pivot columns."""
        if col not in self.pivot_rows:
            return {col: F1}
        row = self.pivot_rows[col]
        return {c: -v for c, v in row.items() if c != col}


class TensorProduct:
    """Result of M (x)_l N: a bimodule plus the pair-reduction data."""

    def __init__(self, module: GradedBimodule, pairs: list[tuple[int, int]], reducer: dict):
        self.module = module
        self.pairs = pairs  # canonical basis labels (index in M, index in N)
        self._reduce = reducer  # (mi, nj) -> dict canonical index -> coeff

    def reduce_pair(self, mi: int, nj: int) -> dict[int, Fraction]:
        return self._reduce.get((mi, nj), {})


def tensor_over_base(M: GradedBimodule, N: GradedBimodule) -> TensorProduct:
    if M.base is not N.base and M.base.describe() != N.base.describe():
        raise ValueError("tensor factors must share the base")
    base = M.base
    matching = [
        (mi, nj)
        for mi in range(M.dim)
        for nj in range(N.dim)
        if M.gens[mi].source == N.gens[nj].target
    ]
    col_of = {pair: k for k, pair in enumerate(matching)}
    elim = SparseEliminator()
    for mi, nj in matching:
        mid = M.gens[mi].source
        f = base.factors[mid]
        for p in range(1, f.degree):
            k = base.basis.index((mid, p))
            row: dict[int, Fraction] = {}
            img_m = [row_[mi] for row_ in M.right[k]]  # column mi of right action
            for mi2, c in enumerate(img_m):
                if c:
                    row[col_of[(mi2, nj)]] = row.get(col_of[(mi2, nj)], F0) + c
            img_n = [row_[nj] for row_ in N.left[k]]
            for nj2, c in enumerate(img_n):
                if c:
                    key = col_of[(mi, nj2)]
                    row[key] = row.get(key, F0) - c
            elim.add_row({c: v for c, v in row.items() if v})
    elim.finalize()
    pivots = elim.pivots()
    canonical = [pair for k, pair in enumerate(matching) if k not in pivots]
    canon_index = {pair: i for i, pair in enumerate(canonical)}

    reducer: dict[tuple[int, int], dict[int, Fraction]] = {}
    for k, pair in enumerate(matching):
        combo = elim.rewrite(k)
        reducer[pair] = {canon_index[matching[c]]: v for c, v in combo.items()}

    gens = [
        Generator(
            "(%s.%s)" % (M.gens[mi].name, N.gens[nj].name),
            N.gens[nj].source,
            M.gens[mi].target,
            M.gens[mi].degree + N.gens[nj].degree,
        )
        for mi, nj in canonical
    ]
    dim = len(gens)
    left = [linalg.zeros(dim, dim) for _ in range(base.dim)]
    right = [linalg.zeros(dim, dim) for _ in range(base.dim)]
    for j, (mi, nj) in enumerate(canonical):
        for k in range(base.dim):
            img_m = [row_[mi] for row_ in M.left[k]]
            for mi2, c in enumerate(img_m):
                if c:
                    for ci, cv in reducer.get((mi2, nj), {}).items():
                        left[k][ci][j] += c * cv
            img_n = [row_[nj] for row_ in N.right[k]]
            for nj2, c in enumerate(img_n):
                if c:
                    for ci, cv in reducer.get((mi, nj2), {}).items():
                        right[k][ci][j] += c * cv
    module = GradedBimodule(base, gens, left, right)
    return TensorProduct(module, canonical, reducer)


def zero_bimodule(base: SemisimpleBase) -> GradedBimodule:
    empty = [linalg.zeros(0, 0) for _ in range(base.dim)]
    return GradedBimodule(base, [], empty, empty)
