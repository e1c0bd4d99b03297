"""Random homotopy short exact sequences over Q for the snake lemma tests.

Complexes are direct sums of stalks and two-term identity pieces, base
changed by random invertible degree-zero maps so matrices look generic
while homology stays known.  Sequences come in two families:

  * genuine short exact sequences A = B (+) C with a twist tau: C -> B[1]
    (any chain-anticommuting tau gives d_A(b, c) = (d_B b + tau c, d_C c)),
    homotopy h = 0;
  * the same with h perturbed by a boundary d(xi) = d xi - xi d of a random
    degree -2 map xi: B -> C, which keeps d(h) = p i = 0 and acyclicity.
"""

from __future__ import annotations

import random
from fractions import Fraction

from cyq import linalg
from cyq.homology import ChainMap, Complex, HomotopySes

F0 = Fraction(0)
F1 = Fraction(1)


def random_complex(rng: random.Random, max_dim=6, amplitude=4) -> Complex:
    lo = rng.randint(-2, 0)
    hi = lo + rng.randint(1, amplitude)
    dims = {q: 0 for q in range(lo, hi + 1)}
    pieces = []  # (kind, degree)
    total = 0
    while total < rng.randint(1, max_dim):
        q = rng.randint(lo, hi)
        if q < hi and rng.random() < 0.6:
            pieces.append(("pair", q))
            total += 2
        else:
            pieces.append(("stalk", q))
            total += 1
    diffs_entries: dict[int, dict[tuple[int, int], Fraction]] = {}
    offsets: dict[int, int] = {q: 0 for q in range(lo, hi + 1)}
    for kind, q in pieces:
        if kind == "stalk":
            dims[q] += 1
            offsets[q] += 1
        else:
            i0 = offsets[q]
            i1 = offsets.get(q + 1, 0)
            dims[q] += 1
            dims[q + 1] = dims.get(q + 1, 0) + 1
            diffs_entries.setdefault(q, {})[(i1, i0)] = F1
            offsets[q] += 1
            offsets[q + 1] = i1 + 1
    # random base change per degree
    change: dict[int, linalg.Matrix] = {}
    inv: dict[int, linalg.Matrix] = {}
    for q, n in dims.items():
        if n == 0:
            continue
        while True:
            g = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
            for k in range(n):
                g[k][k] += F1
            gi = linalg.inverse(g)
            if gi is not None:
                change[q], inv[q] = g, gi
                break
    diffs: dict[int, dict[tuple[int, int], Fraction]] = {}
    for q, table in diffs_entries.items():
        n, m = dims.get(q, 0), dims.get(q + 1, 0)
        if not n or not m:
            continue
        mat = linalg.zeros(m, n)
        for (i, j), c in table.items():
            mat[i][j] = c
        mat = linalg.matmul(change[q + 1], linalg.matmul(mat, inv[q]))
        entries = {}
        for i in range(m):
            for j in range(n):
                if mat[i][j]:
                    entries[(i, j)] = mat[i][j]
        if entries:
            diffs[q] = entries
    return Complex({q: n for q, n in dims.items() if n}, diffs)


def _map_vars(B: Complex, C: Complex, degree: int):
    """Variable layout for maps B -> C of the given degree."""
    layout = []
    for q in B.degrees():
        for j in range(B.dim(q)):
            for i in range(C.dim(q + degree)):
                layout.append((q, i, j))
    return layout


def random_chain_anticommuting(rng, C: Complex, B: Complex):
    """Random tau: C -> B of degree +1 with d_B tau + tau d_C = 0."""
    layout = _map_vars(C, B, 1)
    if not layout:
        return {}
    rows = []
    # constraint per (q, target in B^{q+2}, source in C^q)
    for q in C.degrees():
        for r in range(B.dim(q + 2)):
            for j in range(C.dim(q)):
                row = [F0] * len(layout)
                for k, (q2, i2, j2) in enumerate(layout):
                    # d_B tau component: tau at (q, i', j), then d_B
                    if q2 == q and j2 == j:
                        row[k] += B.diffs.get(q + 1, {}).get((r, i2), F0)
                    # tau d_C component: d_C at (i'', j), tau at (q+1, r?, i'')
                    if q2 == q + 1 and i2 == r:
                        row[k] += C.diffs.get(q, {}).get((j2, j), F0)
                if any(row):
                    rows.append(row)
    basis = linalg.nullspace(rows, len(layout)) if rows else [
        linalg.unit_vector(len(layout), k) for k in range(len(layout))
    ]
    tau: dict[int, dict[tuple[int, int], Fraction]] = {}
    if basis:
        coeffs = [Fraction(rng.randint(-2, 2)) for _ in basis]
        vec = [sum((c * b[k] for c, b in zip(coeffs, basis)), F0) for k in range(len(layout))]
        for k, (q, i, j) in enumerate(layout):
            if vec[k]:
                tau.setdefault(q, {})[(i, j)] = vec[k]
    return tau


def make_hses(rng: random.Random, with_h: bool) -> HomotopySes:
    B = random_complex(rng)
    C = random_complex(rng)
    tau = random_chain_anticommuting(rng, C, B)
    # A = B (+) C with the twist
    dims = {}
    for q in set(B.degrees()) | set(C.degrees()):
        dims[q] = B.dim(q) + C.dim(q)
    diffs: dict[int, dict[tuple[int, int], Fraction]] = {}
    for q in dims:
        entries = {}
        for (i, j), c in B.diffs.get(q, {}).items():
            entries[(i, j)] = c
        for (i, j), c in C.diffs.get(q, {}).items():
            entries[(B.dim(q + 1) + i, B.dim(q) + j)] = c
        for (i, j), c in tau.get(q, {}).items():
            # tau: C^q -> B^{q+1}
            entries[(i, B.dim(q) + j)] = c
        if entries:
            diffs[q] = entries
    A = Complex({q: n for q, n in dims.items() if n}, diffs)
    i_mats = {
        q: {(i, i): F1 for i in range(B.dim(q))} for q in B.degrees()
    }
    p_mats = {
        q: {(j, B.dim(q) + j): F1 for j in range(C.dim(q))} for q in C.degrees()
    }
    i_map = ChainMap(B, A, 0, i_mats)
    p_map = ChainMap(A, C, 0, p_mats)
    h_mats: dict[int, dict[tuple[int, int], Fraction]] = {}
    if with_h:
        # h = d(xi) for a random degree -2 map xi: B -> C
        layout = _map_vars(B, C, -2)
        xi: dict[int, dict[tuple[int, int], Fraction]] = {}
        for (q, i, j) in layout:
            c = Fraction(rng.randint(-1, 1))
            if c:
                xi.setdefault(q, {})[(i, j)] = c
        for q in B.degrees():
            entries = {}
            # (d_C xi)_q : B^q -> C^{q-1}
            for (i, j), c in xi.get(q, {}).items():
                for (i2, j2), c2 in C.diffs.get(q - 2, {}).items():
                    if j2 == i:
                        entries[(i2, j)] = entries.get((i2, j), F0) + c2 * c
            # (xi d_B)_q with the even-map sign: minus
            for (i2, j2), c2 in B.diffs.get(q, {}).items():
                for (i, j), c in xi.get(q + 1, {}).items():
                    if j == i2:
                        entries[(i, j2)] = entries.get((i, j2), F0) - c * c2
            entries = {k: v for k, v in entries.items() if v}
            if entries:
                h_mats[q] = entries
    h_map = ChainMap(B, C, -1, h_mats)
    return HomotopySes(B=B, A=A, C=C, i=i_map, p=p_map, h=h_map)


def classical_snake(ses: HomotopySes, q: int, c: dict) -> dict:
    """Zig-zag for the split-graded family: lift c by the canonical section."""
    B, A, C = ses.B, ses.A, ses.C
    nB = B.dim(q)
    a = {nB + j: v for j, v in c.items()}
    da = A.d_apply(q, a)
    # d(a) = i(b~): read off the B-block
    b = {i: v for i, v in da.items() if i < B.dim(q + 1)}
    rest = {i: v for i, v in da.items() if i >= B.dim(q + 1)}
    assert not rest, "lift failed: projection of d(lift) should vanish"
    return b
