"""Tensor core: contraction, raising/lowering, symmetrizers, metrics."""

import random
from fractions import Fraction

import pytest

from nordenlab.errors import (
    MetricDegenerate,
    SlotOutOfRange,
    SymmetryPreconditionFailed,
    VarianceMismatch,
)
from nordenlab.scalars import Scalar
from nordenlab.tensors import (
    LOWER,
    UPPER,
    MetricData,
    Tensor,
    antisymmetrize,
    cyclic_sum,
    inner_product,
    kulkarni_nomizu,
    raise_lower,
    rational_signature,
)

SYMS = ()


def const(v):
    return Scalar.const(SYMS, v)


def diag_metric(entries):
    dim = len(entries)
    g = Tensor.build(dim, (LOWER, LOWER), SYMS,
                     lambda idx: const(entries[idx[0]])
                     if idx[0] == idx[1] else const(0))
    return MetricData.from_tensor(g)


def random_tensor(dim, variance, rng):
    return Tensor.build(dim, variance, SYMS,
                        lambda idx: const(Fraction(rng.randint(-6, 6),
                                                   rng.randint(1, 3))))


def test_identity_self_contraction_gives_dim():
    dim = 5
    ident = Tensor.build(dim, (UPPER, LOWER), SYMS,
                         lambda idx: const(1 if idx[0] == idx[1] else 0))
    out = ident.contract(0, 1)
    assert out.rank == 0
    assert out.get(()) == const(dim)


def test_metric_against_inverse_gives_identity():
    m = diag_metric([1, 1, -1, -1])
    prod = m.g_inv.contract_with(m.g, 1, 0)
    for i in range(4):
        for j in range(4):
            assert prod.get((i, j)) == const(1 if i == j else 0)


def test_contraction_requires_mixed_variance():
    m = diag_metric([1, -1])
    with pytest.raises(VarianceMismatch):
        m.g.contract(0, 1)
    with pytest.raises(SlotOutOfRange):
        m.g.contract(0, 2)


def test_lowering_the_reeb_vector_gives_eta():
    # g = diag(1,1,-1) with xi = e_1 of unit length: eta = xi-flat
    m = diag_metric([1, 1, -1])
    xi = Tensor.build(3, (UPPER,), SYMS, lambda idx: const(1 if idx[0] == 0 else 0))
    eta = raise_lower(xi, 0, m)
    assert eta.variance == (LOWER,)
    assert [eta.get((i,)) for i in range(3)] == [const(1), const(0), const(0)]


def test_raise_then_lower_roundtrip():
    rng = random.Random(7)
    m = diag_metric([1, 2, -1, -3])
    t = random_tensor(4, (LOWER, LOWER, LOWER), rng)
    for slot in range(3):
        back = raise_lower(raise_lower(t, slot, m), slot, m)
        assert back == t


def test_sharp_of_one_form_by_exhaustive_pairing():
    rng = random.Random(3)
    m = diag_metric([1, 1, -1, -1, -1])
    omega = random_tensor(5, (LOWER,), rng)
    sharp = raise_lower(omega, 0, m)
    # oracle: g(omega-sharp, z) = omega(z) for every basis z
    for z in range(5):
        paired = const(0)
        for i in range(5):
            paired = paired + sharp.get((i,)) * m.g.get((i, z))
        assert paired == omega.get((z,))


def test_cyclic_sum_of_symmetric_tensor():
    rng = random.Random(1)
    raw = random_tensor(3, (LOWER, LOWER, LOWER), rng)
    sym = Tensor.zeros(3, (LOWER,) * 3, SYMS)
    import itertools
    for perm in itertools.permutations(range(3)):
        sym = sym + raw.permute(list(perm))
    out = cyclic_sum(sym, (0, 1, 2))
    assert out == sym.scale(3)


def test_kulkarni_nomizu_two_dim_oracle():
    m = diag_metric([1, -1])
    kn = kulkarni_nomizu(m.g, m.g)

    # oracle: expand the defining identity by hand for every index tuple
    def hand(x, y, z, w):
        def g(a, b):
            return m.g.get((a, b))
        return (g(x, z) * g(y, w) - g(y, z) * g(x, w)
                + g(y, w) * g(x, z) - g(x, w) * g(y, z))

    for idx in kn.indices():
        assert kn.get(idx) == hand(*idx)
    # the (1,2,2,1) component in 1-based labels: -g22*g11 - g11*g22 = +2
    assert kn.comp(1, 2, 2, 1) == const(2)


def test_kulkarni_nomizu_rejects_asymmetric_input():
    skew = Tensor.build(2, (LOWER, LOWER), SYMS,
                        lambda idx: const(idx[1] - idx[0]))
    m = diag_metric([1, -1])
    with pytest.raises(SymmetryPreconditionFailed):
        kulkarni_nomizu(m.g, skew)


def test_kulkarni_nomizu_of_symmetric_pair_is_curvature_like():
    rng = random.Random(5)
    m = diag_metric([1, 1, -1, -1])
    raw = random_tensor(4, (LOWER, LOWER), rng)
    rho = raw + raw.permute([1, 0])
    kn = kulkarni_nomizu(m.g, rho)
    for x, y, z, w in kn.indices():
        assert kn.get((x, y, z, w)) == -kn.get((y, x, z, w))
        assert kn.get((x, y, z, w)) == -kn.get((x, y, w, z))
    bianchi = cyclic_sum(kn, (0, 1, 2))
    assert bianchi.is_zero()


def test_contract_is_linear():
    rng = random.Random(11)
    a = random_tensor(3, (UPPER, LOWER, LOWER), rng)
    b = random_tensor(3, (UPPER, LOWER, LOWER), rng)
    lam = const(Fraction(3, 7))
    lhs = (a.scale(lam) + b).contract(0, 2)
    rhs = a.contract(0, 2).scale(lam) + b.contract(0, 2)
    assert lhs == rhs


def test_antisymmetrize_is_a_projector():
    rng = random.Random(13)
    t = random_tensor(3, (LOWER, LOWER, LOWER), rng)
    alt = antisymmetrize(t, (0, 1, 2))
    assert antisymmetrize(alt, (0, 1, 2)) == alt
    for x, y, z in alt.indices():
        assert alt.get((x, y, z)) == -alt.get((y, x, z))
        assert alt.get((x, y, z)) == -alt.get((x, z, y))


def test_signature_and_degeneracy():
    assert rational_signature([[2, 0], [0, -3]]) == (1, 1)
    # zero diagonal handled through congruence moves
    assert rational_signature([[0, 1], [1, 0]]) == (1, 1)
    assert rational_signature([[0, 1, 0], [1, 0, 0], [0, 0, 5]]) == (2, 1)
    with pytest.raises(MetricDegenerate):
        rational_signature([[1, 0], [0, 0]])
    g = Tensor.build(2, (LOWER, LOWER), SYMS,
                     lambda idx: const(1 if idx == (0, 0) else 0))
    with pytest.raises(MetricDegenerate):
        MetricData.from_tensor(g)


def test_neutral_metric_signature_detected():
    m = diag_metric([1, 1, -1, -1])
    assert m.signature == (2, 2)


def test_inner_product_diagonal_metric():
    m = diag_metric([1, -1])
    t1 = Tensor.from_rows((LOWER,), SYMS, [const(2), const(3)])
    t2 = Tensor.from_rows((LOWER,), SYMS, [const(5), const(7)])
    # <t1,t2> = g^11 2*5 + g^22 3*7 = 10 - 21
    assert inner_product(m, t1, t2) == const(-11)
