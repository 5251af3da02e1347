"""Shared builders for the example frames used across the test suite."""

from fractions import Fraction

from nordenlab.frames import build_frame
from nordenlab.scalars import Scalar, scalar_parse
from nordenlab.tensors import LOWER, UPPER, MetricData, Tensor

L4 = ("l1", "l2", "l3", "l4")


def S(text, syms=()):
    if isinstance(text, str):
        return scalar_parse(text, syms)
    return Scalar.const(syms, text)


def brackets_tensor(dim, syms, table):
    """table: {(i, j): {k: expr}} with 1-based i < j; antisymmetric fill."""
    zero = Scalar.const(syms, 0)
    comps = {}
    for (i, j), out in table.items():
        assert i < j
        for k, expr in out.items():
            s = S(expr, syms)
            comps[(k - 1, i - 1, j - 1)] = s
            comps[(k - 1, j - 1, i - 1)] = -s
    return Tensor.build(dim, (UPPER, LOWER, LOWER), syms,
                        lambda idx: comps.get(idx, zero))


def diag_metric_tensor(syms, entries):
    dim = len(entries)
    zero = Scalar.const(syms, 0)
    return Tensor.build(
        dim, (LOWER, LOWER), syms,
        lambda idx: S(entries[idx[0]], syms) if idx[0] == idx[1] else zero)


def endo_tensor(dim, syms, images):
    """images: {j: {i: coeff}} (1-based): e_j maps to sum coeff * e_i."""
    zero = Scalar.const(syms, 0)
    comps = {}
    for j, col in images.items():
        for i, coeff in col.items():
            comps[(i - 1, j - 1)] = S(coeff, syms)
    return Tensor.build(dim, (UPPER, LOWER), syms,
                        lambda idx: comps.get(idx, zero))


def vector(dim, syms, entries):
    """entries: {i: coeff} 1-based."""
    zero = Scalar.const(syms, 0)
    return Tensor.build(dim, (UPPER,), syms,
                        lambda idx: S(entries.get(idx[0] + 1, 0), syms)
                        if idx[0] + 1 in entries else zero)


def one_form(dim, syms, entries):
    zero = Scalar.const(syms, 0)
    return Tensor.build(dim, (LOWER,), syms,
                        lambda idx: S(entries.get(idx[0] + 1, 0), syms)
                        if idx[0] + 1 in entries else zero)


def abelian_frame(dim, diag, syms=()):
    zero_table = {}
    return build_frame(dim, brackets_tensor(dim, syms, zero_table),
                       diag_metric_tensor(syms, diag), syms)


# -- the 4-dimensional W1 Lie group (paper section 2.2) ------------------------

def w1_frame(syms=L4):
    table = {
        (1, 4): {1: "l1", 2: "l2", 3: "l3", 4: "l4"},
        (2, 3): {1: "l1", 2: "l2", 3: "l3", 4: "l4"},
        (1, 3): {1: "l2", 2: "-l1", 3: "l4", 4: "-l3"},
        (2, 4): {1: "-l2", 2: "l1", 3: "-l4", 4: "l3"},
    }
    return build_frame(4, brackets_tensor(4, syms, table),
                       diag_metric_tensor(syms, [1, 1, -1, -1]), syms)


def w1_J(syms=L4):
    return endo_tensor(4, syms, {1: {3: 1}, 2: {4: 1}, 3: {1: -1}, 4: {2: -1}})


# -- solvable Sasaki-like groups (paper section 8) -----------------------------

def sasaki_example1_frame(n, syms=()):
    """dim 2n+1; basis order (e0, e1..en, e_{n+1}..e_{2n})."""
    dim = 2 * n + 1
    table = {}
    for i in range(1, n + 1):
        table[(1, 1 + i)] = {1 + n + i: 1}
        table[(1, 1 + n + i)] = {1 + i: -1}
    diag = [1] + [1] * n + [-1] * n
    return build_frame(dim, brackets_tensor(dim, syms, table),
                       diag_metric_tensor(syms, diag), syms)


def sasaki_example1_structure_maps(n, syms=()):
    dim = 2 * n + 1
    images = {}
    for i in range(1, n + 1):
        images[1 + i] = {1 + n + i: 1}
        images[1 + n + i] = {1 + i: -1}
    phi = endo_tensor(dim, syms, images)
    xi = vector(dim, syms, {1: 1})
    eta = one_form(dim, syms, {1: 1})
    return phi, xi, eta


def sasaki_example2_frame(syms=("l", "m")):
    """G^5 with parameters lambda, mu (paper section 8.2.2.3)."""
    table = {
        (1, 2): {3: "l", 4: 1, 5: "m"},
        (1, 3): {2: "-l", 4: "-m", 5: 1},
        (1, 4): {2: -1, 3: "-m", 5: "l"},
        (1, 5): {2: "m", 3: -1, 4: "-l"},
    }
    return build_frame(5, brackets_tensor(5, syms, table),
                       diag_metric_tensor(syms, [1, 1, 1, -1, -1]), syms)


# -- the 4-dimensional hypercomplex family (paper section 12.4) ----------------

def hyper_family_frame(syms=L4):
    table = {
        (1, 3): {2: "l2", 4: "l4"},
        (2, 4): {1: "l1", 3: "l3"},
        (2, 3): {1: "-l2", 4: "-l3"},
        (3, 4): {1: "-l4", 2: "l3"},
        (1, 4): {2: "-l1", 3: "-l4"},
        (1, 2): {3: "l2", 4: "-l1"},
    }
    return build_frame(4, brackets_tensor(4, syms, table),
                       diag_metric_tensor(syms, [1, 1, -1, -1]), syms)


def standard_hypercomplex(syms=L4, dim=4):
    """The standard triple (JJJ) on dim 4."""
    j1 = endo_tensor(dim, syms, {1: {2: 1}, 2: {1: -1}, 3: {4: -1}, 4: {3: 1}})
    j2 = endo_tensor(dim, syms, {1: {3: 1}, 2: {4: 1}, 3: {1: -1}, 4: {2: -1}})
    j3 = endo_tensor(dim, syms, {1: {4: -1}, 2: {3: 1}, 3: {2: -1}, 4: {1: 1}})
    return j1, j2, j3


# -- random frames by rational change of basis ---------------------------------

def random_glq(dim, rng, spread=2):
    """Unimodular-ish random rational matrix, guaranteed invertible."""
    while True:
        rows = [[Fraction(rng.randint(-spread, spread)) for _ in range(dim)]
                for _ in range(dim)]
        for i in range(dim):
            rows[i][i] += 1
        if _det(rows) != 0:
            return rows


def _det(rows):
    n = len(rows)
    m = [row[:] for row in rows]
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def _inv(rows):
    n = len(rows)
    m = [row[:] + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i, row in enumerate(rows)]
    for c in range(n):
        pivot = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[pivot] = m[pivot], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def change_basis(frame, p_rows, endos=(), vectors_in=(), forms_in=()):
    """New frame in the basis f_i = sum_j P[j][i] e_j, with transported
    structure tensors.  Jacobi survives the change automatically."""
    dim = frame.dim
    syms = frame.syms
    p = [[Scalar.const(syms, x) for x in row] for row in p_rows]
    q_rows = _inv([[Fraction(x) for x in row] for row in p_rows])
    q = [[Scalar.const(syms, x) for x in row] for row in q_rows]
    zero = frame.zero()

    def new_brackets(idx):
        k, i, j = idx
        total = zero
        for a in range(dim):
            if p[a][i].is_zero():
                continue
            for b in range(dim):
                if p[b][j].is_zero():
                    continue
                f = p[a][i] * p[b][j]
                for c in range(dim):
                    cc = frame.brackets.get((c, a, b))
                    if not cc.is_zero():
                        total = total + f * cc * q[k][c]
        return total

    def new_metric(idx):
        i, j = idx
        total = zero
        for a in range(dim):
            for b in range(dim):
                if not p[a][i].is_zero() and not p[b][j].is_zero():
                    total = total + p[a][i] * p[b][j] * frame.g.get((a, b))
        return total

    from nordenlab.tensors import MetricData as MD
    nf = build_frame(
        dim,
        Tensor.build(dim, (UPPER, LOWER, LOWER), syms, new_brackets),
        Tensor.build(dim, (LOWER, LOWER), syms, new_metric),
        syms)

    def tend(t):
        def fn(idx):
            i, j = idx
            total = zero
            for a in range(dim):
                for b in range(dim):
                    if not q[i][a].is_zero() and not p[b][j].is_zero():
                        total = total + q[i][a] * t.get((a, b)) * p[b][j]
            return total
        return Tensor.build(dim, (UPPER, LOWER), syms, fn)

    def tvec(v):
        def fn(idx):
            total = zero
            for a in range(dim):
                if not v.get((a,)).is_zero():
                    total = total + q[idx[0]][a] * v.get((a,))
            return total
        return Tensor.build(dim, (UPPER,), syms, fn)

    def tform(w):
        def fn(idx):
            total = zero
            for a in range(dim):
                if not w.get((a,)).is_zero():
                    total = total + p[a][idx[0]] * w.get((a,))
            return total
        return Tensor.build(dim, (LOWER,), syms, fn)

    return (nf, [tend(t) for t in endos], [tvec(v) for v in vectors_in],
            [tform(w) for w in forms_in])


# -- the 7-dimensional contact 3-structure example -----------------------------

L1 = ("l",)


def contact3_frame(syms=L1):
    table = {(1, 2): {7: "l"}, (3, 4): {7: "l"}}
    return build_frame(7, brackets_tensor(7, syms, table),
                       diag_metric_tensor(syms, [1, 1, -1, -1, -1, 1, 1]),
                       syms)


def contact3_structures(syms=L1):
    """(phi_a, xi_a, eta_a) for a = 1, 2, 3 on the 7-dim frame."""
    phi1 = endo_tensor(7, syms, {1: {2: 1}, 2: {1: -1}, 3: {4: 1},
                                 4: {3: -1}, 6: {7: 1}, 7: {6: -1}})
    phi2 = endo_tensor(7, syms, {1: {3: 1}, 3: {1: -1}, 4: {2: 1},
                                 2: {4: -1}, 7: {5: 1}, 5: {7: -1}})
    phi3 = endo_tensor(7, syms, {1: {4: 1}, 4: {1: -1}, 2: {3: 1},
                                 3: {2: -1}, 5: {6: 1}, 6: {5: -1}})
    xis = (vector(7, syms, {5: 1}), vector(7, syms, {6: 1}),
           vector(7, syms, {7: 1}))
    etas = (one_form(7, syms, {5: 1}), one_form(7, syms, {6: 1}),
            one_form(7, syms, {7: 1}))
    return (phi1, phi2, phi3), xis, etas


# -- the 4-dim Lie algebras carrying hypercomplex HN structures -----------------

HC_TABLES = {
    "hc2": {(2, 4): {3: 1}, (3, 4): {2: -1}, (2, 3): {4: -1}},
    "hc3_case1": {(2, 3): {2: 1}, (1, 4): {2: 1},
                  (1, 2): {4: -1}, (3, 4): {4: -1}},
    "hc3_case2": {(1, 3): {1: 1}, (2, 4): {1: -1},
                  (1, 4): {2: 1}, (2, 3): {2: 1}},
    "hc4_case1": {(1, 2): {2: 1}, (1, 3): {3: 1}, (1, 4): {4: 1}},
    "hc4_case2": {(1, 4): {1: -1}, (2, 4): {2: -1}, (3, 4): {3: -1}},
    "hc5_case1": {(1, 2): {2: 1}, (1, 3): {3: "1/2"},
                  (1, 4): {4: "1/2"}, (3, 4): {2: "1/2"}},
    "hc5_case2": {(1, 2): {3: "-1/2"}, (1, 4): {1: "-1/2"},
                  (2, 4): {2: "-1/2"}, (3, 4): {3: -1}},
}


def hc_frame(name, syms=()):
    return build_frame(4, brackets_tensor(4, syms, HC_TABLES[name]),
                       diag_metric_tensor(syms, [1, 1, -1, -1]), syms)
