"""Left-invariant Riemannian machinery on a Lie algebra frame.

A Frame packages a Lie algebra (structure constants in a fixed basis) with
a constant-component pseudo-metric.  On such data the Koszul formula loses
its derivative terms and the Levi-Civita connection, curvature, Ricci and
scalar curvature, Weyl tensor and sectional curvatures are all exact
algebraic expressions in the structure constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import (
    BracketNotAntisymmetric,
    DegeneratePlane,
    DimensionTooSmall,
    JacobiViolated,
    VarianceMismatch,
)
from .scalars import Scalar
from .tensors import (
    LOWER,
    UPPER,
    MetricData,
    Tensor,
    kulkarni_nomizu,
)


class Frame:
    """Lie algebra with structure constants c^k_ij and a constant metric."""

    __slots__ = ("dim", "syms", "brackets", "metric")

    def __init__(self, dim, syms, brackets, metric):
        self.dim = dim
        self.syms = syms
        self.brackets = brackets  # Tensor (u,l,l): [e_i,e_j] = c^k_ij e_k
        self.metric = metric

    @property
    def g(self):
        return self.metric.g

    @property
    def g_inv(self):
        return self.metric.g_inv

    def zero(self):
        return Scalar.const(self.syms, 0)

    def bracket(self, i, j):
        """Component list of [e_i, e_j] (0-based basis indices)."""
        return [self.brackets.get((k, i, j)) for k in range(self.dim)]

    def bracket_vectors(self, x, y):
        """[x, y] for constant-component vectors x, y (lists of Scalars)."""
        out = [self.zero()] * self.dim
        for i in range(self.dim):
            if x[i].is_zero():
                continue
            for j in range(self.dim):
                if y[j].is_zero():
                    continue
                f = x[i] * y[j]
                for k in range(self.dim):
                    c = self.brackets.get((k, i, j))
                    if not c.is_zero():
                        out[k] = out[k] + f * c
        return out

    def with_metric(self, metric):
        return Frame(self.dim, self.syms, self.brackets, metric)


def build_frame(dim, brackets, metric, params=()):
    """Validate and assemble a Frame.

    brackets: rank-(1,2) Tensor with component order (k, i, j);
    metric: MetricData or a rank-2 lower Tensor.
    """
    params = tuple(params)
    if brackets.variance != (UPPER, LOWER, LOWER) or brackets.dim != dim:
        raise VarianceMismatch("brackets must be a dim^3 (1,2)-tensor")
    if isinstance(metric, Tensor):
        metric = MetricData.from_tensor(metric)
    if metric.dim != dim:
        raise VarianceMismatch("metric dimension does not match the frame")
    for k in range(dim):
        for i in range(dim):
            for j in range(i + 1):
                if brackets.get((k, i, j)) != -brackets.get((k, j, i)):
                    raise BracketNotAntisymmetric(
                        f"c^{k + 1}_{i + 1}{j + 1} != -c^{k + 1}_{j + 1}{i + 1}")
    frame = Frame(dim, params, brackets, metric)
    _check_jacobi(frame)
    return frame


def _check_jacobi(frame):
    for i, j, k in combinations(range(frame.dim), 3):
        defect = [frame.zero()] * frame.dim
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            inner = frame.bracket(a, b)
            outer = frame.bracket_vectors(inner, _basis_vec(frame, c))
            defect = [d + o for d, o in zip(defect, outer)]
        for m, d in enumerate(defect):
            if not d.is_zero():
                raise JacobiViolated((i + 1, j + 1, k + 1), m + 1,
                                     d.canonical())


def _basis_vec(frame, i):
    one = Scalar.const(frame.syms, 1)
    return [one if j == i else frame.zero() for j in range(frame.dim)]


@dataclass(frozen=True)
class Connection:
    """Affine connection by its Christoffel tensor, nabla_i e_j = G^k_ij e_k."""

    gamma: Tensor  # variance (u,l,l), component order (k, i, j)
    label: str

    def nabla_endo(self, endo):
        """(nabla_i A)^l_j for a constant-component (1,1)-tensor A."""
        dim = self.gamma.dim
        syms = self.gamma.syms
        zero = Scalar.const(syms, 0)

        def fn(idx):
            l, i, j = idx
            total = zero
            for m in range(dim):
                total = (total
                         + self.gamma.get((l, i, m)) * endo.get((m, j))
                         - endo.get((l, m)) * self.gamma.get((m, i, j)))
            return total

        return Tensor.build(dim, (UPPER, LOWER, LOWER), syms, fn)

    def nabla_vector(self, vec):
        """(nabla_i v)^l for a constant-component vector (slots (l, i))."""
        dim = self.gamma.dim
        zero = Scalar.const(self.gamma.syms, 0)

        def fn(idx):
            l, i = idx
            total = zero
            for m in range(dim):
                total = total + self.gamma.get((l, i, m)) * vec.get((m,))
            return total

        return Tensor.build(dim, (UPPER, LOWER), self.gamma.syms, fn)

    def nabla_lower(self, t):
        """Covariant derivative of a constant all-lower tensor.

        Result slot order: (i, j_1 .. j_q) for (nabla_i T)(j_1 .. j_q).
        """
        dim = self.gamma.dim
        zero = Scalar.const(self.gamma.syms, 0)
        rank = t.rank

        def fn(idx):
            i = idx[0]
            js = idx[1:]
            total = zero
            for a in range(rank):
                for m in range(dim):
                    gm = self.gamma.get((m, i, js[a]))
                    if gm.is_zero():
                        continue
                    total = total - gm * t.get(js[:a] + (m,) + js[a + 1:])
            return total

        return Tensor.build(dim, (LOWER,) * (rank + 1), t.syms, fn)


def levi_civita(frame):
    """Koszul formula, constant-coefficient reduction:
    2 g(nabla_x y, z) = g([x,y],z) - g([y,z],x) + g([z,x],y)."""
    dim = frame.dim
    g = frame.g
    half = Fraction(1, 2)

    def b(i, j, k):  # g([e_i, e_j], e_k)
        total = frame.zero()
        for m in range(dim):
            c = frame.brackets.get((m, i, j))
            if not c.is_zero():
                total = total + c * g.get((m, k))
        return total

    w = {}
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                w[i, j, k] = (b(i, j, k) - b(j, k, i) + b(k, i, j)).scale(half)

    def fn(idx):
        l, i, j = idx
        total = frame.zero()
        for k in range(dim):
            gi = frame.g_inv.get((l, k))
            if not gi.is_zero():
                total = total + gi * w[i, j, k]
        return total

    gamma = Tensor.build(dim, (UPPER, LOWER, LOWER), frame.syms, fn)
    return Connection(gamma, "levi_civita")


@dataclass(frozen=True)
class CurvaturePack:
    """Curvature (0,4) and (1,3), Ricci and scalar curvature."""

    r4: Tensor
    r13: Tensor
    ricci: Tensor
    scal: Scalar


def curvature(frame, conn):
    """R(x,y)z = nabla_x nabla_y z - nabla_y nabla_x z - nabla_[x,y] z,
    with rho(y,z) = g^ij R(e_i,y,z,e_j) and tau = g^ij rho_ij."""
    dim = frame.dim
    gamma = conn.gamma

    def r13_fn(idx):
        l, i, j, k = idx
        total = frame.zero()
        for m in range(dim):
            a = gamma.get((m, j, k))
            if not a.is_zero():
                total = total + a * gamma.get((l, i, m))
            b = gamma.get((m, i, k))
            if not b.is_zero():
                total = total - b * gamma.get((l, j, m))
            c = frame.brackets.get((m, i, j))
            if not c.is_zero():
                total = total - c * gamma.get((l, m, k))
        return total

    r13 = Tensor.build(dim, (UPPER, LOWER, LOWER, LOWER), frame.syms, r13_fn)

    def r4_fn(idx):
        i, j, k, l = idx
        total = frame.zero()
        for m in range(dim):
            a = r13.get((m, i, j, k))
            if not a.is_zero():
                total = total + a * frame.g.get((m, l))
        return total

    r4 = Tensor.build(dim, (LOWER,) * 4, frame.syms, r4_fn)

    def ricci_fn(idx):
        y, z = idx
        total = frame.zero()
        for i in range(dim):
            for j in range(dim):
                gi = frame.g_inv.get((i, j))
                if not gi.is_zero():
                    total = total + gi * r4.get((i, y, z, j))
        return total

    ricci = Tensor.build(dim, (LOWER, LOWER), frame.syms, ricci_fn)
    scal = frame.zero()
    for i in range(dim):
        for j in range(dim):
            gi = frame.g_inv.get((i, j))
            if not gi.is_zero():
                scal = scal + gi * ricci.get((i, j))
    return CurvaturePack(r4, r13, ricci, scal)


def pack_from_r4(frame, r4):
    """CurvaturePack with Ricci and scalar traces of a given (0,4)-tensor."""
    dim = frame.dim

    def r13_fn(idx):
        l, i, j, k = idx
        total = frame.zero()
        for m in range(dim):
            gi = frame.g_inv.get((l, m))
            if not gi.is_zero():
                total = total + gi * r4.get((i, j, k, m))
        return total

    r13 = Tensor.build(dim, (UPPER, LOWER, LOWER, LOWER), frame.syms, r13_fn)

    def ricci_fn(idx):
        y, z = idx
        total = frame.zero()
        for i in range(dim):
            for j in range(dim):
                gi = frame.g_inv.get((i, j))
                if not gi.is_zero():
                    total = total + gi * r4.get((i, y, z, j))
        return total

    ricci = Tensor.build(dim, (LOWER, LOWER), frame.syms, ricci_fn)
    scal = frame.zero()
    for i in range(dim):
        for j in range(dim):
            gi = frame.g_inv.get((i, j))
            if not gi.is_zero():
                scal = scal + gi * ricci.get((i, j))
    return CurvaturePack(r4, r13, ricci, scal)


def weyl(frame, pack):
    """Weyl tensor; the 2n of the even-dimensional formula is replaced by
    dim, which reduces to the standard normalization."""
    m = frame.dim
    if m < 4:
        raise DimensionTooSmall("Weyl tensor needs dim >= 4")
    g = frame.g
    term_rho = kulkarni_nomizu(g, pack.ricci).scale(Fraction(1, m - 2))
    term_g = kulkarni_nomizu(g, g).scale(
        Fraction(1, 2 * (m - 1) * (m - 2)))
    return pack.r4 + term_rho - term_g.scale(pack.scal)


def plane_pi1(frame, x, y):
    """pi_1(x,y,y,x) = g(y,y) g(x,x) - g(x,y)^2 for component vectors."""
    def pair(u, v):
        total = frame.zero()
        for i in range(frame.dim):
            if u.get((i,)).is_zero():
                continue
            for j in range(frame.dim):
                total = total + u.get((i,)) * v.get((j,)) * frame.g.get((i, j))
        return total

    return pair(y, y) * pair(x, x) - pair(x, y) ** 2


def sectional(frame, pack, x, y):
    """k = R(x,y,y,x) / pi_1(x,y,y,x), exact; the plane must be
    nondegenerate."""
    denom = plane_pi1(frame, x, y)
    if denom.is_zero():
        raise DegeneratePlane("pi_1(x,y,y,x) = 0")
    num = frame.zero()
    for i in range(frame.dim):
        if x.get((i,)).is_zero():
            continue
        for j in range(frame.dim):
            if y.get((j,)).is_zero():
                continue
            for k in range(frame.dim):
                if y.get((k,)).is_zero():
                    continue
                for l in range(frame.dim):
                    if x.get((l,)).is_zero():
                        continue
                    num = num + (x.get((i,)) * y.get((j,)) * y.get((k,))
                                 * x.get((l,)) * pack.r4.get((i, j, k, l)))
    return num / denom


@dataclass(frozen=True)
class ConnectionReport:
    metric_compatible: bool
    torsion: Tensor         # (0,3): T(x,y,z) = g(T(x,y), z)
    torsion13: Tensor       # (1,2): component order (k, i, j)
    totally_skew: bool
    witness: tuple | None   # first nonzero component of nabla g, if any


def torsion_of(frame, conn):
    """T^k_ij = G^k_ij - G^k_ji - c^k_ij and its (0,3) lowering."""
    dim = frame.dim

    def t13_fn(idx):
        k, i, j = idx
        return (conn.gamma.get((k, i, j)) - conn.gamma.get((k, j, i))
                - frame.brackets.get((k, i, j)))

    t13 = Tensor.build(dim, (UPPER, LOWER, LOWER), frame.syms, t13_fn)

    def t3_fn(idx):
        i, j, k = idx
        total = frame.zero()
        for m in range(dim):
            c = t13.get((m, i, j))
            if not c.is_zero():
                total = total + c * frame.g.get((m, k))
        return total

    return t13, Tensor.build(dim, (LOWER,) * 3, frame.syms, t3_fn)


def connection_predicates(frame, conn):
    nabla_g = conn.nabla_lower(frame.g)
    witness = None
    for idx, value in nabla_g.nonzero():
        witness = (tuple(i + 1 for i in idx), value.canonical())
        break
    t13, t3 = torsion_of(frame, conn)
    skew = True
    for i in range(frame.dim):
        for j in range(frame.dim):
            for k in range(frame.dim):
                v = t3.get((i, j, k))
                if v != -t3.get((j, i, k)) or v != -t3.get((i, k, j)):
                    skew = False
                    break
            if not skew:
                break
        if not skew:
            break
    return ConnectionReport(
        metric_compatible=witness is None,
        torsion=t3,
        torsion13=t13,
        totally_skew=skew,
        witness=witness,
    )


def is_natural_for(frame, conn, tensors_11=(), vectors=(), one_forms=()):
    """True when the connection annihilates the metric and every listed
    structure tensor, exactly."""
    if not conn.nabla_lower(frame.g).is_zero():
        return False
    for endo in tensors_11:
        if not conn.nabla_endo(endo).is_zero():
            return False
    for vec in vectors:
        if not conn.nabla_vector(vec).is_zero():
            return False
    for form in one_forms:
        if not conn.nabla_lower(form).is_zero():
            return False
    return True


def specialize_frame(frame, assignment):
    """Evaluate every component at a rational assignment; params become ()."""
    def ev(t):
        return Tensor.build(
            t.dim, t.variance, (),
            lambda idx: Scalar.const((), t.get(idx).eval(assignment)))

    brackets = ev(frame.brackets)
    metric = MetricData.from_tensor(ev(frame.g))
    return Frame(frame.dim, (), brackets, metric)
