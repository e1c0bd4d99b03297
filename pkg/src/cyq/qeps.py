"""Fixture models over the dual numbers Q[e]/(e^2).

``stalk_category`` is the two-object category of the simple module X and
the free module P, as stalk complexes in degree zero.  The comparison
square works over ``roof_category``: the honest dg category of bounded
complexes on the stalks with four objects

    X0   = X in degree 0            P0  = P in degree 0
    Pm1  = P in degree +1 (= P[-1]) Qm1 = [X -> P] in degrees 0, 1

where Qm1 is the desuspended cone of the socle embedding.  Rotating the
cone triangle twice gives the fraction presenting the stable degree -1
endomorphism of the simple module:

    Pm1 --a--> Qm1 --s--> X0 --b--> P0,

with a = minus the shifted inclusion of P, s = minus the shifted
projection onto X, b the socle embedding, and f the class projecting Qm1
onto its P-slot in degree -1.  All of this is explicit table data; the
category axioms are machine-verified on construction.
"""

from __future__ import annotations

from fractions import Fraction

from .dgcat import FiniteDgCategory, HomSpace, complexes_category, rebase_identity
from .cyform import RoofFraction

F1 = Fraction(1)


def stalk_category() -> FiniteDgCategory:
    homs = {
        ("X", "X"): HomSpace(["1x"], [0]),
        ("X", "P"): HomSpace(["iota"], [0]),
        ("P", "X"): HomSpace(["pi"], [0]),
        ("P", "P"): HomSpace(["1p", "eps"], [0, 0]),
    }
    comps = {
        ("X", "X", "X"): {(0, 0): {0: F1}},
        ("X", "X", "P"): {(0, 0): {0: F1}},
        ("X", "P", "X"): {(0, 0): {}},
        ("X", "P", "P"): {(0, 0): {0: F1}, (1, 0): {}},
        ("P", "X", "X"): {(0, 0): {0: F1}},
        ("P", "X", "P"): {(0, 0): {1: F1}},
        ("P", "P", "X"): {(0, 0): {0: F1}, (0, 1): {}},
        ("P", "P", "P"): {
            (0, 0): {0: F1},
            (0, 1): {1: F1},
            (1, 0): {1: F1},
            (1, 1): {},
        },
    }
    identities = {"X": {0: F1}, "P": {0: F1}}
    return FiniteDgCategory(["X", "P"], homs, {}, comps, identities)


def roof_category() -> FiniteDgCategory:
    base = stalk_category()
    specs = {
        "X0": {"components": [(0, "X")], "diff": {}},
        "P0": {"components": [(0, "P")], "diff": {}},
        "Pm1": {"components": [(1, "P")], "diff": {}},
        # desuspended cone of iota: X in degree 0, P in degree 1, d = -iota
        "Qm1": {
            "components": [(0, "X"), (1, "P")],
            "diff": {(1, 0): {0: Fraction(-1)}},
        },
    }
    return rebase_identity(complexes_category(base, specs))


def contracted_objects() -> list[str]:
    return ["P0", "Pm1"]


def standard_roof(cat_graded) -> RoofFraction:
    def unit(X, Y, k, coeff=F1):
        n = cat_graded.dim(X, Y, k)
        if n != 1:
            raise ValueError("expected a one dimensional space at %s" % ((X, Y, k),))
        return [coeff]

    return RoofFraction(
        N="Pm1",
        Xp="Qm1",
        X="X0",
        a=unit("Pm1", "Qm1", 0, -F1),
        s=unit("Qm1", "X0", 0, -F1),
        b=unit("X0", "Pm1", 1),
        f=unit("Qm1", "X0", -1),
    )
