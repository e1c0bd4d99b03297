import random
from fractions import Fraction

import pytest

from cyq.base_field import (
    GAUSS,
    QQ,
    NondegenerateTraceError,
    ReducibilityError,
    casimir,
    make_base,
    make_field_ext,
)


def test_prime_field_construction():
    k = make_field_ext([0, 1])
    assert k.degree == 1
    assert k.one() == (Fraction(1),)
    assert k.mul(k.element([3]), k.element([Fraction(1, 3)])) == k.one()


def test_non_monic_rejected():
    with pytest.raises(ValueError):
        make_field_ext([1, 2])
    with pytest.raises(ValueError):
        make_field_ext([1])


def test_gauss_model_arithmetic():
    k = GAUSS
    i = k.gen()
    assert k.mul(i, i) == k.element([-1])
    # (1+i)(1-i) = 2
    assert k.mul(k.element([1, 1]), k.element([1, -1])) == k.element([2])


def test_sqrt2_inversion_euclid_oracle():
    k = make_field_ext([-2, 0, 1])
    a = k.element([1, 1])  # 1 + sqrt(2)
    assert k.inv(a) == k.element([-1, 1])  # -1 + sqrt(2)
    assert k.mul(a, k.inv(a)) == k.one()


def test_reducible_detected_lazily():
    k = make_field_ext([-1, 0, 1])  # x^2 - 1 splits
    x_minus = k.element([-1, 1])
    with pytest.raises(ReducibilityError):
        k.inv(x_minus)


def test_field_axioms_random():
    rng = random.Random(7)
    for k in (QQ, GAUSS, make_field_ext([-2, 0, 1]), make_field_ext([1, 1, 0, 1])):
        for _ in range(40):
            a = k.element([Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(k.degree)])
            b = k.element([rng.randint(-4, 4) for _ in range(k.degree)])
            c = k.element([rng.randint(-4, 4) for _ in range(k.degree)])
            assert k.mul(k.mul(a, b), c) == k.mul(a, k.mul(b, c))
            if any(a):
                assert k.mul(a, k.inv(a)) == k.one()


def paper_base():
    return make_base([QQ, QQ, GAUSS], [1, 1, Fraction(1, 2)])


def test_make_base_paper_example():
    base = paper_base()
    # Tr(l1, l2, l3) = l1 + l2 + Re(l3)
    x = (QQ.element([3]), QQ.element([5]), GAUSS.element([7, 11]))
    assert base.trace(x) == 3 + 5 + 7


def test_make_base_rejects_zero_weight():
    with pytest.raises(ValueError):
        make_base([GAUSS], [0])


def test_make_base_rejects_length_mismatch():
    with pytest.raises(ValueError):
        make_base([QQ, QQ], [1])


def test_trivial_base():
    base = make_base([QQ], [1])
    assert base.trace(base.one()) == 1
    assert base.dim == 1


def test_casimir_trivial():
    base = make_base([QQ], [1])
    sig = casimir(base)
    assert sig.matrix == [[Fraction(1)]]


def test_casimir_gauss_re():
    base = make_base([GAUSS], [Fraction(1, 2)])  # Tr = Re
    sig = casimir(base)
    # sigma = 1 (x) 1 - i (x) i
    assert sig.matrix[0][0] == 1
    assert sig.matrix[1][1] == -1
    assert sig.matrix[0][1] == 0 and sig.matrix[1][0] == 0


def test_casimir_paper_base():
    base = paper_base()
    sig = casimir(base)
    # e1 (x) e1 + e2 (x) e2 + (1 (x) 1 - i (x) i) in the complex block
    expected_diag = [1, 1, 1, -1]
    for k in range(4):
        assert sig.matrix[k][k] == expected_diag[k]
    offdiag = [sig.matrix[j][k] for j in range(4) for k in range(4) if j != k]
    assert not any(offdiag)


def test_casimir_invariants_random_elements():
    rng = random.Random(11)
    for base in (paper_base(), make_base([GAUSS, make_field_ext([-2, 0, 1])], [Fraction(1, 2), 3])):
        sig = casimir(base)
        for _ in range(100):
            v = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(base.dim)]
            x = base.from_coords(v)
            assert sig.contract_trace(x) == x
        for k in range(base.dim):
            assert not any(sig.symmetry_defect(base.basis_element(k)))


def test_degenerate_trace_error():
    # weights cannot be zero, but a degenerate pairing can come from a
    # non-squarefree modulus: Q[x]/(x^2) has nilpotents, trace pairing degenerate
    with pytest.raises(NondegenerateTraceError):
        make_base([make_field_ext([0, 0, 1])], [1])
