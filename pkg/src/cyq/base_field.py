"""Semisimple coefficient rings with exact arithmetic.

A base is a finite product of simple extensions Q[x]/(p) of the rationals,
together with one nonzero rational weight per factor.  The weight w_i scales
the regular trace of the factor, giving the linear functional

    Tr(l_1, ..., l_n) = sum_i w_i * tr_i(l_i),

where tr_i(a) is the trace of multiplication by a on the power basis.  The
pairing (x, y) |-> Tr(xy) is required to be nondegenerate; its dual bases
produce the Casimir tensor used by the dg constructions downstream.

Elements of a factor are coefficient tuples on the power basis; elements of
the base are tuples of factor elements.  Everything is immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .linalg import F0, F1, Fraction as _Fr, frac

FactorElement = tuple[Fraction, ...]
BaseElement = tuple[FactorElement, ...]


class ReducibilityError(ArithmeticError):
    """A zero divisor was hit while inverting: the minimal polynomial splits."""


class NondegenerateTraceError(ValueError):
    """The chosen trace weights give a degenerate pairing on the base."""


@dataclass(frozen=True)
class FieldExt:
    """Simple extension Q[x]/(min_poly), min_poly monic of degree >= 1."""

    min_poly: tuple[Fraction, ...]  # coefficients, low to high, monic

    def __post_init__(self):
        if len(self.min_poly) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        if self.min_poly[-1] != F1:
            raise ValueError("minimal polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    def zero(self) -> FactorElement:
        return (F0,) * self.degree

    def one(self) -> FactorElement:
        return (F1,) + (F0,) * (self.degree - 1)

    def gen(self) -> FactorElement:
        if self.degree == 1:
            # x is congruent to -min_poly[0]
            return (-self.min_poly[0],)
        return tuple(F1 if i == 1 else F0 for i in range(self.degree))

    def element(self, coeffs: Sequence) -> FactorElement:
        cs = [frac(c) for c in coeffs]
        if len(cs) > self.degree:
            cs = self._reduce(cs)
        cs += [F0] * (self.degree - len(cs))
        return tuple(cs)

    def _reduce(self, coeffs: list[Fraction]) -> list[Fraction]:
        cs = coeffs[:]
        d = self.degree
        for i in range(len(cs) - 1, d - 1, -1):
            c = cs[i]
            if c:
                for j in range(d + 1):
                    cs[i - d + j] -= c * self.min_poly[j]
            cs.pop()
        return cs

    def add(self, a: FactorElement, b: FactorElement) -> FactorElement:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: FactorElement, b: FactorElement) -> FactorElement:
        return tuple(x - y for x, y in zip(a, b))

    def scale(self, c: Fraction, a: FactorElement) -> FactorElement:
        return tuple(c * x for x in a)

    def mul(self, a: FactorElement, b: FactorElement) -> FactorElement:
        d = self.degree
        prod = [F0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return tuple(self._reduce(prod) + [F0] * max(0, d - len(prod)))

    def inv(self, a: FactorElement) -> FactorElement:
        """Inverse by the extended Euclidean algorithm on polynomials."""
        if not any(a):
            raise ZeroDivisionError("inverting zero")
        # gcd(a, min_poly) with Bezout coefficient for a
        r0, r1 = list(self.min_poly), list(a)
        s0, s1 = [F0], [F1]
        while any(r1):
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        r0 = _poly_trim(r0)
        if len(r0) != 1:
            raise ReducibilityError(
                "minimal polynomial is reducible: gcd of degree %d found" % (len(r0) - 1)
            )
        c = r0[0]
        inv = [x / c for x in s0]
        return self.element(inv)

    def mul_matrix(self, a: FactorElement) -> linalg.Matrix:
        """Matrix of multiplication by a on the power basis (columns = images)."""
        d = self.degree
        cols = []
        for j in range(d):
            basis_j = tuple(F1 if i == j else F0 for i in range(d))
            cols.append(list(self.mul(a, basis_j)))
        return linalg.transpose(cols)

    def regular_trace(self, a: FactorElement) -> Fraction:
        m = self.mul_matrix(a)
        return sum((m[i][i] for i in range(self.degree)), F0)

    def describe(self) -> str:
        return "Q[x]/(" + _poly_str(self.min_poly) + ")"


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    q = p[:]
    while q and not q[-1]:
        q.pop()
    return q


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    return _poly_trim([(a[i] if i < len(a) else F0) - (b[i] if i < len(b) else F0) for i in range(n)])


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [F0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _poly_trim(out)


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = _poly_trim(a)
    b = _poly_trim(b)
    if not b:
        raise ZeroDivisionError
    q = [F0] * max(0, len(a) - len(b) + 1)
    r = a[:]
    while len(r) >= len(b) and any(r):
        r = _poly_trim(r)
        if len(r) < len(b):
            break
        c = r[-1] / b[-1]
        k = len(r) - len(b)
        q[k] = c
        for i in range(len(b)):
            r[k + i] -= c * b[i]
        r = _poly_trim(r)
    return _poly_trim(q), _poly_trim(r)


def _poly_str(p: Sequence[Fraction]) -> str:
    parts = []
    for i, c in enumerate(p):
        if not c:
            continue
        if i == 0:
            parts.append(str(c))
        elif i == 1:
            parts.append("%s*x" % c if c != 1 else "x")
        else:
            parts.append("%s*x^%d" % (c, i) if c != 1 else "x^%d" % i)
    return " + ".join(parts) if parts else "0"


def make_field_ext(min_poly: Sequence) -> FieldExt:
    coeffs = tuple(frac(c) for c in min_poly)
    return FieldExt(coeffs)


QQ = make_field_ext([0, 1])  # the prime field itself
GAUSS = make_field_ext([1, 0, 1])  # Q(i), the rational model of C


class SemisimpleBase:
    """Product of simple extensions with a weighted-regular trace form."""

    def __init__(self, factors: Sequence[FieldExt], trace_weights: Sequence):
        factors = list(factors)
        weights = [frac(w) for w in trace_weights]
        if len(factors) != len(weights) or not factors:
            raise ValueError("factors and trace weights must align and be nonempty")
        if any(w == 0 for w in weights):
            raise ValueError("trace weights must be nonzero")
        self.factors: list[FieldExt] = factors
        self.trace_weights: list[Fraction] = weights
        # global Q-basis: (factor index, power) in declaration order
        self.basis: list[tuple[int, int]] = []
        for fi, f in enumerate(factors):
            for p in range(f.degree):
                self.basis.append((fi, p))
        self._basis_index = {bp: i for i, bp in enumerate(self.basis)}
        self._check_nondegenerate()

    # -- element constructors -------------------------------------------
    @property
    def n_factors(self) -> int:
        return len(self.factors)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def zero(self) -> BaseElement:
        return tuple(f.zero() for f in self.factors)

    def one(self) -> BaseElement:
        return tuple(f.one() for f in self.factors)

    def idempotent(self, i: int) -> BaseElement:
        return tuple(f.one() if j == i else f.zero() for j, f in enumerate(self.factors))

    def basis_element(self, k: int) -> BaseElement:
        fi, p = self.basis[k]
        comp = tuple(F1 if q == p else F0 for q in range(self.factors[fi].degree))
        return tuple(comp if j == fi else f.zero() for j, f in enumerate(self.factors))

    def from_factor(self, i: int, elem: Sequence) -> BaseElement:
        comp = self.factors[i].element(elem)
        return tuple(comp if j == i else f.zero() for j, f in enumerate(self.factors))

    def coords(self, x: BaseElement) -> list[Fraction]:
        out: list[Fraction] = []
        for fi, f in enumerate(self.factors):
            out.extend(x[fi])
        return out

    def from_coords(self, v: Sequence[Fraction]) -> BaseElement:
        comps = []
        k = 0
        for f in self.factors:
            comps.append(tuple(frac(c) for c in v[k : k + f.degree]))
            k += f.degree
        return tuple(comps)

    # -- arithmetic ------------------------------------------------------
    def add(self, a: BaseElement, b: BaseElement) -> BaseElement:
        return tuple(f.add(x, y) for f, x, y in zip(self.factors, a, b))

    def mul(self, a: BaseElement, b: BaseElement) -> BaseElement:
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def scale(self, c: Fraction, a: BaseElement) -> BaseElement:
        return tuple(f.scale(c, x) for f, x in zip(self.factors, a))

    def inv(self, a: BaseElement) -> BaseElement:
        return tuple(f.inv(x) for f, x in zip(self.factors, a))

    def is_zero(self, a: BaseElement) -> bool:
        return not any(any(c) for c in a)

    def trace(self, a: BaseElement) -> Fraction:
        return sum(
            (w * f.regular_trace(x) for f, w, x in zip(self.factors, self.trace_weights, a)),
            F0,
        )

    # -- structure -------------------------------------------------------
    def gram(self) -> linalg.Matrix:
        n = self.dim
        g = linalg.zeros(n, n)
        for i in range(n):
            bi = self.basis_element(i)
            for j in range(n):
                g[i][j] = self.trace(self.mul(bi, self.basis_element(j)))
        return g

    def _check_nondegenerate(self):
        if linalg.det(self.gram()) == 0:
            raise NondegenerateTraceError("trace pairing on the base is degenerate")

    def describe(self) -> str:
        return " x ".join(f.describe() for f in self.factors)


def make_base(factors: Sequence[FieldExt], trace_weights: Sequence) -> SemisimpleBase:
    return SemisimpleBase(factors, trace_weights)


class CasimirElement:
    """sum_k b_k (x) b_k* on dual bases of the trace pairing.

    Stored as a dim x dim rational matrix over the base's Q-basis:
    sigma = sum_{jk} M[j][k] basis_j (x) basis_k.
    """

    def __init__(self, base: SemisimpleBase, matrix: linalg.Matrix):
        self.base = base
        self.matrix = matrix

    def pairs(self) -> list[tuple[BaseElement, BaseElement, Fraction]]:
        out = []
        for j, row in enumerate(self.matrix):
            for k, c in enumerate(row):
                if c:
                    out.append((self.base.basis_element(j), self.base.basis_element(k), c))
        return out

    def contract_trace(self, x: BaseElement) -> BaseElement:
        """sum_k Tr(x b_k) b_k*, which must reproduce x."""
        acc = self.base.zero()
        for bj, bk, c in self.pairs():
            acc = self.base.add(acc, self.base.scale(c * self.base.trace(self.base.mul(x, bj)), bk))
        return acc

    def symmetry_defect(self, x: BaseElement) -> list[Fraction]:
        """Coordinates of (x (x) 1) sigma - sigma (1 (x) x); zero for a Casimir."""
        n = self.base.dim
        defect = linalg.zeros(n, n)
        for j in range(n):
            for k in range(n):
                c = self.matrix[j][k]
                if not c:
                    continue
                x_bj = self.base.coords(self.base.mul(x, self.base.basis_element(j)))
                bk_x = self.base.coords(self.base.mul(self.base.basis_element(k), x))
                for t in range(n):
                    defect[t][k] += c * x_bj[t]
                    defect[j][t] -= c * bk_x[t]
        return [c for row in defect for c in row]


def casimir(base: SemisimpleBase) -> CasimirElement:
    """Dual-basis tensor of the trace pairing, solved per factor."""
    g = base.gram()
    ginv = linalg.inverse(g)
    if ginv is None:  # unreachable after construction check
        raise NondegenerateTraceError("trace pairing on the base is degenerate")
    # sigma = sum_j basis_j (x) dual_j, dual_j = sum_k (g^-1)[k][j] basis_k
    n = base.dim
    mat = linalg.zeros(n, n)
    for j in range(n):
        for k in range(n):
            mat[j][k] = ginv[k][j]
    return CasimirElement(base, mat)
