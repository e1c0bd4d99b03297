import random
from fractions import Fraction

import pytest

from cyq import linalg
from cyq.base_field import GAUSS, QQ, make_base
from cyq.bimodule import (
    BimoduleAxiomError,
    Generator,
    GradedBimodule,
    bimodule_from_groups,
    tensor_over_base,
    zero_bimodule,
)


def paper_base():
    return make_base([QQ, QQ, GAUSS], [1, 1, Fraction(1, 2)])


def paper_vc():
    base = paper_base()
    groups = [
        {"names": ["a"], "source": 0, "target": 1, "degree": 0, "action": "none"},
        {"names": ["b", "bi"], "source": 2, "target": 0, "degree": 0, "action": "right"},
        {"names": ["c", "ic"], "source": 1, "target": 2, "degree": 0, "action": "left"},
        {"names": ["a*"], "source": 1, "target": 0, "degree": -1, "action": "none"},
        {"names": ["b*", "ib*"], "source": 0, "target": 2, "degree": -1, "action": "left"},
        {"names": ["c*", "c*i"], "source": 2, "target": 1, "degree": -1, "action": "right"},
    ]
    return bimodule_from_groups(base, groups)


def test_paper_bimodule_builds_and_verifies():
    V = paper_vc()
    assert V.dim == 10
    assert V.concentrated_in(-1, 0)
    # i acting on the right of b gives bi, and on bi gives -b
    base = V.base
    k_i = base.basis.index((2, 1))
    col_b = [row[V.index("b")] for row in V.right[k_i]]
    assert col_b[V.index("bi")] == 1 and sum(1 for x in col_b if x) == 1
    col_bi = [row[V.index("bi")] for row in V.right[k_i]]
    assert col_bi[V.index("b")] == -1 and sum(1 for x in col_bi if x) == 1


def test_zero_bimodule():
    base = paper_base()
    Z = zero_bimodule(base)
    assert Z.dim == 0
    T = tensor_over_base(Z, Z)
    assert T.module.dim == 0


def test_one_loop_bimodule():
    base = make_base([QQ], [1])
    V = bimodule_from_groups(
        base, [{"names": ["x"], "source": 0, "target": 0, "degree": 0, "action": "none"}]
    )
    T = tensor_over_base(V, V)
    assert T.module.dim == 1
    assert T.module.gens[0].degree == 0


def test_axiom_failure_noncommuting():
    base = make_base([GAUSS], [Fraction(1, 2)])
    gens = [Generator("u", 0, 0, 0), Generator("v", 0, 0, 0)]
    ident = linalg.identity(2)
    swap = [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]]
    rot = [[Fraction(0), Fraction(-1)], [Fraction(1), Fraction(0)]]
    # left i acts by rotation, right i by swap: these do not commute
    left = [ident, rot]
    right = [ident, swap]
    with pytest.raises(BimoduleAxiomError):
        GradedBimodule(base, gens, left, right)


def test_gauss_tensor_collapses():
    # C (x)_C C is 2-dimensional over Q, not 4
    base = make_base([GAUSS], [Fraction(1, 2)])
    V = bimodule_from_groups(
        base, [{"names": ["u", "iu"], "source": 0, "target": 0, "degree": 0, "action": "central"}]
    )
    T = tensor_over_base(V, V)
    assert T.module.dim == 2


def test_paper_tensor_b_block():
    # (Rb + Rbi) (x)_l (Rc + Ric) is 2-dimensional: tensoring over the C factor
    V = paper_vc()
    T = tensor_over_base(V, V)
    block = [
        g
        for (mi, nj), g in zip(T.pairs, T.module.gens)
        if V.gens[mi].name in ("b", "bi") and V.gens[nj].name in ("c", "ic")
    ]
    assert len(block) == 2


def test_dimension_bound_and_associativity_random():
    rng = random.Random(5)
    base = make_base([QQ, GAUSS], [1, Fraction(1, 2)])
    for _ in range(5):
        groups = []
        for gi in range(rng.randint(1, 3)):
            src = rng.randint(0, 1)
            tgt = rng.randint(0, 1)
            deg = rng.choice([-1, 0])
            if src == 1 and tgt == 1:
                mode = "central"
            elif tgt == 1:
                mode = "left"
            elif src == 1:
                mode = "right"
            else:
                mode = "none"
            size = 1 if mode == "none" else 2
            groups.append(
                {
                    "names": ["g%d_%d" % (gi, t) for t in range(size)],
                    "source": src,
                    "target": tgt,
                    "degree": deg,
                    "action": mode,
                }
            )
        M = bimodule_from_groups(base, groups)
        T2 = tensor_over_base(M, M)
        assert T2.module.dim <= M.dim * M.dim
        left_first = tensor_over_base(T2.module, M)
        right_first = tensor_over_base(M, tensor_over_base(M, M).module)
        # compare dimensions per (source, target, degree)
        def profile(mod):
            out = {}
            for g in mod.gens:
                key = (g.source, g.target, g.degree)
                out[key] = out.get(key, 0) + 1
            return out

        assert profile(left_first.module) == profile(right_first.module)


def test_tensor_with_zero():
    V = paper_vc()
    Z = zero_bimodule(V.base)
    assert tensor_over_base(V, Z).module.dim == 0
    assert tensor_over_base(Z, V).module.dim == 0
