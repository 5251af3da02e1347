"""Small shared operations on structure tensors over a frame.

These are index-level conveniences used by all structure modules: inserting
an endomorphism into a slot of a covariant tensor, metric traces, lowering
the upper slot of connection-like tensors, and symmetric braces.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import Scalar
from .tensors import LOWER, UPPER, Tensor


def endo_compose(a, b):
    """(a o b)^i_j = a^i_m b^m_j."""
    return a.contract_with(b, 1, 0)


def endo_apply(a, v):
    """(a v)^i = a^i_m v^m."""
    return a.contract_with(v, 1, 0)


def form_after(w, a):
    """(w o a)_j = w_m a^m_j."""
    return w.contract_with(a, 0, 0)


def identity_endo(dim, syms):
    one = Scalar.const(syms, 1)
    zero = Scalar.const(syms, 0)
    return Tensor.build(dim, (UPPER, LOWER), syms,
                        lambda idx: one if idx[0] == idx[1] else zero)


def j_insert(t, endo, slot):
    """Insert an endomorphism into one lower slot:
    out(..., x at slot, ...) = t(..., endo x, ...)."""
    dim = t.dim
    zero = Scalar.const(t.syms, 0)

    def fn(idx):
        total = zero
        for m in range(dim):
            e = endo.get((m, idx[slot]))
            if not e.is_zero():
                total = total + e * t.get(idx[:slot] + (m,) + idx[slot + 1:])
        return total

    return Tensor.build(dim, t.variance, t.syms, fn)


def lower_first(frame, t):
    """(1,k) tensor with leading upper slot -> (0,k+1) tensor via g,
    the new slot appended last: out(i..., z) = g(t(i...), z)."""
    dim = frame.dim
    zero = frame.zero()
    rank = t.rank

    def fn(idx):
        rest = idx[:-1]
        z = idx[-1]
        total = zero
        for m in range(dim):
            c = t.get((m,) + rest)
            if not c.is_zero():
                total = total + c * frame.g.get((m, z))
        return total

    return Tensor.build(dim, (LOWER,) * rank, t.syms, fn)


def metric_trace(frame, t, slot_a, slot_b, metric=None):
    """Contract g^{ab} against two lower slots of t."""
    g_inv = (metric or frame.metric).g_inv
    lifted = g_inv.contract_with(t, 1, slot_a)
    # lifted slots: [g_inv slot 0 (upper), t-slots minus slot_a]
    other = slot_b if slot_b < slot_a else slot_b - 1
    return lifted.contract(0, 1 + other)


def one_form_trace(frame, t3, metric=None):
    """theta(z) = g^{ij} t(e_i, e_j, z) for a (0,3)-tensor."""
    return metric_trace(frame, t3, 0, 1, metric)


def braces_tensor(frame, conn):
    """{e_i, e_j} = nabla_i e_j + nabla_j e_i, component order (k, i, j)."""
    dim = frame.dim

    def fn(idx):
        k, i, j = idx
        return conn.gamma.get((k, i, j)) + conn.gamma.get((k, j, i))

    return Tensor.build(dim, (UPPER, LOWER, LOWER), frame.syms, fn)


def sym_pair_bracket(frame, braces, a, b):
    """Associated Nijenhuis tensor {A,B} of two endomorphisms, using the
    symmetric braces of the Levi-Civita connection:

      2{A,B}(x,y) = (AB+BA){x,y} + {Ax,By} - A{Bx,y} - A{x,By}
                                 + {Bx,Ay} - B{Ax,y} - B{x,Ay}.

    braces: (1,2)-tensor (k,i,j) for {e_i, e_j}; returns (1,2) (k,i,j)."""
    dim = frame.dim
    syms = frame.syms
    zero = frame.zero()
    ab = endo_compose(a, b)
    ba = endo_compose(b, a)
    abba = ab + ba

    def braces_vec(u, v):
        # {u, v} for component lists
        out = [zero] * dim
        for i in range(dim):
            if u[i].is_zero():
                continue
            for j in range(dim):
                if v[j].is_zero():
                    continue
                f = u[i] * v[j]
                for k in range(dim):
                    c = braces.get((k, i, j))
                    if not c.is_zero():
                        out[k] = out[k] + f * c
        return out

    def col(endo, i):
        return [endo.get((m, i)) for m in range(dim)]

    def basis(i):
        one = Scalar.const(syms, 1)
        return [one if m == i else zero for m in range(dim)]

    def fn(idx):
        k, i, j = idx
        ei, ej = basis(i), basis(j)
        total = zero
        # (AB+BA){x,y}
        for m in range(dim):
            c = braces.get((m, i, j))
            if not c.is_zero():
                total = total + abba.get((k, m)) * c
        # {Ax,By} + {Bx,Ay}
        total = total + braces_vec(col(a, i), col(b, j))[k]
        total = total + braces_vec(col(b, i), col(a, j))[k]
        # -A{Bx,y} - A{x,By}
        for vec in (braces_vec(col(b, i), ej), braces_vec(ei, col(b, j))):
            for m in range(dim):
                if not vec[m].is_zero():
                    total = total - a.get((k, m)) * vec[m]
        # -B{Ax,y} - B{x,Ay}
        for vec in (braces_vec(col(a, i), ej), braces_vec(ei, col(a, j))):
            for m in range(dim):
                if not vec[m].is_zero():
                    total = total - b.get((k, m)) * vec[m]
        return total.scale(Fraction(1, 2))

    return Tensor.build(dim, (UPPER, LOWER, LOWER), syms, fn)


def reorder(t, spec):
    """Argument shuffle: result(x_0,...,x_{r-1}) = t(x_spec[0],...,x_spec[r-1]).

    All shuffled slots must share a variance (the use case is covariant
    tensors transcribed from index formulas)."""
    if len({t.variance[s] for s in range(t.rank)}) > 1:
        raise ValueError("reorder expects uniform variance")

    def fn(idx):
        return t.get(tuple(idx[s] for s in spec))

    return Tensor.build(t.dim, t.variance, t.syms, fn)


def first_nonzero(t):
    """(1-based index tuple, canonical value) of the first nonzero
    component, or None."""
    for idx, c in t.nonzero():
        return tuple(i + 1 for i in idx), c.canonical()
    return None
