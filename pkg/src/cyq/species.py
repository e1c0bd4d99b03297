"""The worked three-vertex species over R x R x C, modeled exactly over Q.

Vertices 1 and 2 carry Q, vertex 3 carries Q(i); the trace form is
Tr(l1, l2, l3) = l1 + l2 + Re(l3).  The arrow bimodule has the ten-element
rational basis a, b, bi, c, ic, a*, b*, ib*, c*, c*i, with the Q(i) factor
acting by rotation on each two-element group.

The shipped pairing element eta was reverse engineered so that the induced
differential reproduces the documented formulas for d(t1), d(t2), d(t3)
and d(a*); it was not read off from any source and is pinned down by the
tests.  See notes in the repository README on the exact shape of d(b*)
and d(c*) that a square-zero differential then forces.
"""

from __future__ import annotations

from fractions import Fraction

from .base_field import GAUSS, QQ, SemisimpleBase, make_base
from .bimodule import GradedBimodule, bimodule_from_groups
from .necklace import EtaElement

F1 = Fraction(1)
FM1 = Fraction(-1)


def species_base() -> SemisimpleBase:
    return make_base([QQ, QQ, GAUSS], [1, 1, Fraction(1, 2)])


def species_bimodule(base: SemisimpleBase | None = None) -> GradedBimodule:
    base = base or species_base()
    groups = [
        {"names": ["a"], "source": 0, "target": 1, "degree": 0, "action": "none"},
        {"names": ["b", "bi"], "source": 2, "target": 0, "degree": 0, "action": "right"},
        {"names": ["c", "ic"], "source": 1, "target": 2, "degree": 0, "action": "left"},
        {"names": ["a*"], "source": 1, "target": 0, "degree": -1, "action": "none"},
        {"names": ["b*", "ib*"], "source": 0, "target": 2, "degree": -1, "action": "left"},
        {"names": ["c*", "c*i"], "source": 2, "target": 1, "degree": -1, "action": "right"},
    ]
    return bimodule_from_groups(base, groups)


def species_eta(module: GradedBimodule) -> EtaElement:
    """Golden pairing element for the three-vertex example."""
    ix = module.index
    entries = {
        (ix("b"), ix("b*")): F1,
        (ix("bi"), ix("b*")): F1,
        (ix("a*"), ix("a")): FM1,
        (ix("a"), ix("a*")): F1,
        (ix("c*"), ix("c")): FM1,
        (ix("c*"), ix("ic")): FM1,
        (ix("c"), ix("c*")): F1,
        (ix("c"), ix("c*i")): F1,
        (ix("b*"), ix("b")): FM1,
        (ix("b*"), ix("bi")): FM1,
    }
    return EtaElement(module, entries)


def species_potential_word(module: GradedBimodule) -> tuple[int, int, int]:
    """The cycle a b c (c acts first: 2 -> 3 -> 1 -> 2)."""
    return (module.index("a"), module.index("b"), module.index("c"))
