"""Dense tensors of exact Scalars over an n-dimensional frame.

Components are stored row-major by the leftmost index; the public component
accessor `comp` uses 1-based indices to match the tables this package
reproduces, everything internal is 0-based.  Slot positions in operations
are 0-based.  Tensors are immutable and do not carry their frame; operations
check dimensional compatibility only.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product

from .errors import (
    MetricDegenerate,
    SlotOutOfRange,
    SymmetryPreconditionFailed,
    VarianceMismatch,
)
from .scalars import Scalar

LOWER = "l"
UPPER = "u"


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class Tensor:
    __slots__ = ("dim", "variance", "syms", "comps")

    def __init__(self, dim, variance, syms, comps):
        self.dim = dim
        self.variance = tuple(variance)
        self.syms = syms
        self.comps = tuple(comps)
        if len(self.comps) != dim ** len(self.variance):
            raise VarianceMismatch("component count does not match rank")

    # -- construction -------------------------------------------------------

    @classmethod
    def build(cls, dim, variance, syms, fn):
        comps = [fn(idx) for idx in product(range(dim), repeat=len(variance))]
        return cls(dim, variance, syms, comps)

    @classmethod
    def zeros(cls, dim, variance, syms):
        zero = Scalar.const(syms, 0)
        return cls(dim, variance, syms, [zero] * dim ** len(variance))

    @classmethod
    def from_rows(cls, variance, syms, rows):
        """Nested lists (depth = rank >= 1), leftmost index outermost."""
        comps = []
        rank = len(variance)

        def walk(node, depth):
            if depth == rank:
                comps.append(node)
                return
            for child in node:
                walk(child, depth + 1)

        walk(rows, 0)
        return cls(len(rows), variance, syms, comps)

    # -- indexing -------------------------------------------------------------

    @property
    def rank(self):
        return len(self.variance)

    def _offset(self, idx):
        off = 0
        for i in idx:
            off = off * self.dim + i
        return off

    def get(self, idx):
        if len(idx) != len(self.variance):
            raise SlotOutOfRange(
                f"index {idx} has wrong rank for {self!r}")
        return self.comps[self._offset(idx)]

    def comp(self, *idx):
        """1-based component accessor (paper-table convention)."""
        return self.comps[self._offset(tuple(i - 1 for i in idx))]

    def indices(self):
        return product(range(self.dim), repeat=self.rank)

    def nonzero(self):
        for idx in self.indices():
            c = self.get(idx)
            if not c.is_zero():
                yield idx, c

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)

    def __eq__(self, other):
        return (isinstance(other, Tensor) and self.dim == other.dim
                and self.variance == other.variance
                and self.comps == other.comps)

    def __hash__(self):
        return hash((self.dim, self.variance, self.comps))

    def __repr__(self):
        return f"<Tensor dim={self.dim} variance={''.join(self.variance)}>"

    # -- pointwise algebra ------------------------------------------------------

    def _like(self, other):
        if not isinstance(other, Tensor):
            raise TypeError("expected a Tensor")
        if self.dim != other.dim or self.variance != other.variance:
            raise VarianceMismatch("tensor shapes differ")

    def __add__(self, other):
        self._like(other)
        return Tensor(self.dim, self.variance, self.syms,
                      [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        self._like(other)
        return Tensor(self.dim, self.variance, self.syms,
                      [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return Tensor(self.dim, self.variance, self.syms,
                      [-a for a in self.comps])

    def scale(self, factor):
        if isinstance(factor, Scalar):
            return Tensor(self.dim, self.variance, self.syms,
                          [a * factor for a in self.comps])
        factor = Fraction(factor)
        return Tensor(self.dim, self.variance, self.syms,
                      [a.scale(factor) for a in self.comps])

    def outer(self, other):
        if self.dim != other.dim:
            raise VarianceMismatch("tensor dimensions differ")
        comps = [a * b for a in self.comps for b in other.comps]
        return Tensor(self.dim, self.variance + other.variance,
                      self.syms, comps)

    def permute(self, perm):
        """Slot permutation: result slot p gets the old slot perm[p]."""
        if sorted(perm) != list(range(self.rank)):
            raise SlotOutOfRange(f"bad slot permutation {perm}")
        variance = tuple(self.variance[p] for p in perm)

        def fn(idx):
            old = [0] * self.rank
            for p, i in zip(perm, idx):
                old[p] = i
            return self.get(tuple(old))

        return Tensor.build(self.dim, variance, self.syms, fn)

    # -- contraction ----------------------------------------------------------

    def contract(self, slot_a, slot_b):
        r = self.rank
        if not (0 <= slot_a < r and 0 <= slot_b < r) or slot_a == slot_b:
            raise SlotOutOfRange(f"slots ({slot_a}, {slot_b}) out of range")
        if self.variance[slot_a] == self.variance[slot_b]:
            raise VarianceMismatch(
                "contraction needs one lower and one upper slot")
        a, b = min(slot_a, slot_b), max(slot_a, slot_b)
        keep = [s for s in range(r) if s not in (a, b)]
        variance = tuple(self.variance[s] for s in keep)
        zero = Scalar.const(self.syms, 0)

        def fn(idx):
            total = zero
            full = [0] * r
            for s, i in zip(keep, idx):
                full[s] = i
            for k in range(self.dim):
                full[a] = full[b] = k
                total = total + self.get(tuple(full))
            return total

        return Tensor.build(self.dim, variance, self.syms, fn)

    def contract_with(self, other, slot_self, slot_other):
        """Pairwise contraction of one slot of self with one of other."""
        return self.outer(other).contract(slot_self, self.rank + slot_other)


class MetricData:
    """A nondegenerate symmetric metric with its exact inverse.

    The signature is the eigen-sign multiset when the components are
    parameter-free; for symbolic metrics it may be declared and is then
    checked at any requested specialization.
    """

    __slots__ = ("g", "g_inv", "signature")

    def __init__(self, g, g_inv, signature):
        self.g = g
        self.g_inv = g_inv
        self.signature = signature

    @classmethod
    def from_tensor(cls, g, declared_signature=None):
        dim = g.dim
        if g.variance != (LOWER, LOWER):
            raise VarianceMismatch("metric must be a rank-2 lower tensor")
        for i in range(dim):
            for j in range(i):
                if g.get((i, j)) != g.get((j, i)):
                    raise SymmetryPreconditionFailed(
                        f"metric not symmetric at ({i + 1},{j + 1})")
        rows = [[g.get((i, j)) for j in range(dim)] for i in range(dim)]
        inv_rows = invert_matrix(rows, g.syms)
        g_inv = Tensor.build(dim, (UPPER, UPPER), g.syms,
                             lambda idx: inv_rows[idx[0]][idx[1]])
        signature = declared_signature
        if all(c.is_const() for c in g.comps):
            signature = rational_signature(
                [[c.const_value() for c in row]
                 for row in [[g.get((i, j)) for j in range(dim)]
                             for i in range(dim)]])
        return cls(g, g_inv, signature)

    @property
    def dim(self):
        return self.g.dim

    @property
    def syms(self):
        return self.g.syms


def invert_matrix(rows, syms):
    """Exact inverse by Gauss-Jordan over the Scalar field."""
    n = len(rows)
    zero = Scalar.const(syms, 0)
    one = Scalar.const(syms, 1)
    work = [list(row) for row in rows]
    inv = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not work[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            raise MetricDegenerate("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        p = work[col][col]
        work[col] = [x / p for x in work[col]]
        inv[col] = [x / p for x in inv[col]]
        for r in range(n):
            if r == col or work[r][col].is_zero():
                continue
            f = work[r][col]
            work[r] = [x - f * y for x, y in zip(work[r], work[col])]
            inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return inv


def rational_signature(rows):
    """Sign multiset (#positive, #negative) of a rational symmetric matrix.

    Congruence reduction; Sylvester's law keeps the signs invariant.
    Degenerate input raises, matching the nondegeneracy invariant.
    """
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    pos = neg = 0
    idx = list(range(n))
    del idx
    for step in range(n):
        if m[step][step] == 0:
            swap = None
            for j in range(step + 1, n):
                if m[j][j] != 0:
                    swap = j
                    break
            if swap is not None:
                m[step], m[swap] = m[swap], m[step]
                for row in m:
                    row[step], row[swap] = row[swap], row[step]
            else:
                off = None
                for j in range(step + 1, n):
                    if m[step][j] != 0:
                        off = j
                        break
                if off is None:
                    raise MetricDegenerate("metric has a null direction")
                for k in range(n):
                    m[step][k] += m[off][k]
                for k in range(n):
                    m[k][step] += m[k][off]
        d = m[step][step]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for r in range(step + 1, n):
            f = m[r][step] / d
            if f == 0:
                continue
            for k in range(n):
                m[r][k] -= f * m[step][k]
            for k in range(n):
                m[k][r] -= f * m[k][step]
    return (pos, neg)


# -- metric raising / lowering ---------------------------------------------------

def raise_lower(t, slot, metric):
    """Flip the variance of one slot with the metric or its inverse."""
    if not 0 <= slot < t.rank:
        raise SlotOutOfRange(f"slot {slot} out of range")
    pairing = metric.g_inv if t.variance[slot] == LOWER else metric.g
    # contract t's slot against the second slot of the pairing tensor,
    # then move the new index back into place
    moved = pairing.contract_with(t, 1, slot)
    # moved slots: [pairing slot 0, then t's slots with `slot` removed]
    perm = list(range(1, slot + 1)) + [0] + list(range(slot + 1, t.rank))
    return moved.permute(perm)


# -- symmetrizers -----------------------------------------------------------------

def antisymmetrize(t, slots):
    """Alternation over the given slots, including the 1/k! factor."""
    slots = tuple(slots)
    if len(set(slots)) != len(slots) or not all(0 <= s < t.rank for s in slots):
        raise SlotOutOfRange(f"bad slots {slots}")
    if len({t.variance[s] for s in slots}) != 1:
        raise VarianceMismatch("alternated slots must share variance")
    total = Tensor.zeros(t.dim, t.variance, t.syms)
    for perm in permutations(range(len(slots))):
        full = list(range(t.rank))
        for target, source in zip(slots, perm):
            full[target] = slots[source]
        term = t.permute(full)
        if _perm_sign(perm) < 0:
            term = -term
        total = total + term
    k = len(slots)
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    return total.scale(Fraction(1, fact))


def cyclic_sum(t, slots):
    """Plain three-term cyclic sum over three slots (no normalization)."""
    a, b, c = slots
    if len({t.variance[s] for s in slots}) != 1:
        raise VarianceMismatch("cycled slots must share variance")
    id_perm = list(range(t.rank))
    p1 = list(id_perm)
    p1[a], p1[b], p1[c] = b, c, a
    p2 = list(id_perm)
    p2[a], p2[b], p2[c] = c, a, b
    return t + t.permute(p1) + t.permute(p2)


def kulkarni_nomizu(a, b):
    """(a ^ b)(x,y,z,w) = a(x,z)b(y,w) - a(y,z)b(x,w)
                        + a(y,w)b(x,z) - a(x,w)b(y,z)."""
    for m in (a, b):
        if m.variance != (LOWER, LOWER):
            raise SymmetryPreconditionFailed(
                "Kulkarni-Nomizu needs rank-2 lower tensors")
        for i in range(m.dim):
            for j in range(i):
                if m.get((i, j)) != m.get((j, i)):
                    raise SymmetryPreconditionFailed(
                        "Kulkarni-Nomizu needs symmetric factors")

    def fn(idx):
        x, y, z, w = idx
        return (a.get((x, z)) * b.get((y, w)) - a.get((y, z)) * b.get((x, w))
                + a.get((y, w)) * b.get((x, z)) - a.get((x, w)) * b.get((y, z)))

    return Tensor.build(a.dim, (LOWER,) * 4, a.syms, fn)


def inner_product(metric, t1, t2):
    """Full metric contraction <T1,T2> of two same-shape lower tensors."""
    t1._like(t2)
    lifted = t1
    for slot in range(t1.rank):
        lifted = raise_lower(lifted, slot, metric)
    total = Scalar.const(t1.syms, 0)
    for idx, c in lifted.nonzero():
        total = total + c * t2.get(idx)
    return total
