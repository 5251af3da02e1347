"""Almost hypercomplex structures with one Hermitian and two Norden metrics.

Per-structure fundamental tensors and Lee forms, the six associated
Nijenhuis tensors with their algebraic identities, classification (a
Gray-Hervella-style lattice for the Hermitian structure, Norden lattices
for the other two), connections with totally skew-symmetric torsion and the
unified connection, the quaternionic-Kaehler recovery of the local 1-forms,
pointwise tangent-bundle lifts of the fundamental tensors, the closed-form
h-sphere curvature, and the Kaehler-like vanishing theorem as an exact
linear-system check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DimensionMismatch,
    InternalInvariantViolation,
    StructureInvalid,
    ZeroParameters,
)
from .frames import (
    Connection,
    CurvaturePack,
    Frame,
    curvature,
    levi_civita,
    pack_from_r4,
)
from .norden import (
    connection_from_torsion,
    fundamental_tensor,
    square_norm,
    twin_metric_tensor,
    _cyc,
    _pair_term,
)
from .ops import (
    braces_tensor,
    endo_apply,
    endo_compose,
    first_nonzero,
    form_after,
    identity_endo,
    j_insert,
    lower_first,
    metric_trace,
    one_form_trace,
    reorder,
    sym_pair_bracket,
)
from .scalars import Scalar
from .tensors import LOWER, MetricData, Tensor, UPPER, raise_lower

EPS = (1, -1, -1)
CYCLES = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


class HyperHNStructure:
    """(J1, J2, J3) with J1 an isometry and J2, J3 anti-isometries of g."""

    __slots__ = ("frame", "J")

    def __init__(self, frame, j_triple):
        if frame.dim % 4 != 0:
            raise StructureInvalid("almost hypercomplex needs dim = 4n")
        j1, j2, j3 = j_triple
        minus_id = identity_endo(frame.dim, frame.syms).scale(-1)
        for a, ja in enumerate(j_triple):
            if endo_compose(ja, ja) != minus_id:
                raise StructureInvalid(f"J{a + 1}^2 != -I")
        for alpha, beta, gamma in CYCLES:
            jb_jc = endo_compose(j_triple[beta], j_triple[gamma])
            if jb_jc != j_triple[alpha]:
                raise StructureInvalid(
                    f"J{alpha + 1} != J{beta + 1} J{gamma + 1}")
            if endo_compose(j_triple[gamma], j_triple[beta]) != \
                    j_triple[alpha].scale(-1):
                raise StructureInvalid(
                    f"J{alpha + 1} != -J{gamma + 1} J{beta + 1}")
        for a, ja in enumerate(j_triple):
            pulled = _pullback_g(frame, ja)
            if pulled != frame.g.scale(EPS[a]):
                raise StructureInvalid(
                    f"g(J{a + 1} x, J{a + 1} y) != {EPS[a]} g(x, y)")
        self.frame = frame
        self.J = (j1, j2, j3)

    @property
    def dim(self):
        return self.frame.dim


def _pullback_g(frame, endo):
    dim = frame.dim

    def fn(idx):
        i, j = idx
        total = frame.zero()
        for a in range(dim):
            ea = endo.get((a, i))
            if ea.is_zero():
                continue
            for b in range(dim):
                eb = endo.get((b, j))
                if not eb.is_zero():
                    total = total + ea * eb * frame.g.get((a, b))
        return total

    return Tensor.build(dim, (LOWER, LOWER), frame.syms, fn)


@dataclass(frozen=True)
class HyperHNAnalysis:
    F: tuple                 # three (0,3)-tensors
    theta: tuple             # three 1-forms
    square_norms: tuple      # three Scalars
    N: tuple                 # three antisymmetric (0,3)-tensors
    N_assoc: dict            # {(a,b): (0,3)} for 1 <= a <= b <= 3
    N_assoc13: dict          # same keys, (1,2)-tensors
    conn: Connection


def _nabla_j_square_norm(frame, nabla_j):
    """g^{ij} g^{kl} g((nabla_i J) e_k, (nabla_j J) e_l)."""
    dim = frame.dim
    lowered = lower_first(frame, nabla_j)       # (i, k, m) -> g(.., e_m)
    lifted = lowered
    for slot in range(3):
        lifted = raise_lower(lifted, slot, frame.metric)
    total = frame.zero()
    for idx, c in lifted.nonzero():
        total = total + c * lowered.get(idx)
    return total


def analyze_hyper(structure):
    frame = structure.frame
    conn = levi_civita(frame)
    f_list, theta_list, norms = [], [], []
    n_list = []
    for a, ja in enumerate(structure.J):
        eps = EPS[a]
        f3 = fundamental_tensor(frame, conn, ja)
        if reorder(f3, (0, 2, 1)).scale(-eps) != f3:
            raise InternalInvariantViolation(f"F{a + 1}(x,z,y) symmetry fails")
        if j_insert(j_insert(f3, ja, 1), ja, 2).scale(-eps) != f3:
            raise InternalInvariantViolation(f"F{a + 1} J-insert symmetry fails")
        f_list.append(f3)
        theta_list.append(one_form_trace(frame, f3))
        norms.append(_nabla_j_square_norm(frame, conn.nabla_endo(ja)))
        # Nijenhuis tensor through F
        f_jx = j_insert(f3, ja, 0)
        f_jz = j_insert(f3, ja, 2)
        n3 = (f_jx + f_jz.scale(eps) - reorder(f_jx, (1, 0, 2))
              - reorder(f_jz, (1, 0, 2)).scale(eps))
        n_list.append(n3)

    # relations between the three fundamental tensors
    j1, j2, j3 = structure.J
    f1, f2, f3t = f_list
    rel1 = j_insert(f2, j3, 1) + j_insert(f3t, j2, 2) - f1
    rel2 = j_insert(f3t, j1, 1) + j_insert(f1, j3, 2) - f2
    rel3 = j_insert(f1, j2, 1) - j_insert(f2, j1, 2) - f3t
    for a, rel in enumerate((rel1, rel2, rel3)):
        if not rel.is_zero():
            raise InternalInvariantViolation(
                f"relation between fundamental tensors fails at {a + 1}")

    # six associated Nijenhuis tensors from the symmetric braces
    braces = braces_tensor(frame, conn)
    pairs13 = {}
    pairs = {}
    for a in range(3):
        for b in range(a, 3):
            t13 = sym_pair_bracket(frame, braces, structure.J[a],
                                   structure.J[b])
            pairs13[(a + 1, b + 1)] = t13
            pairs[(a + 1, b + 1)] = lower_first(frame, t13)
    # the diagonal ones must agree with the F-expressed route
    for a in range(3):
        eps = EPS[a]
        f3 = f_list[a]
        ja = structure.J[a]
        f_jx = j_insert(f3, ja, 0)
        f_jz = j_insert(f3, ja, 2)
        nhat = (f_jx + f_jz.scale(eps) + reorder(f_jx, (1, 0, 2))
                + reorder(f_jz, (1, 0, 2)).scale(eps))
        if pairs[(a + 1, a + 1)] != nhat:
            raise InternalInvariantViolation(
                f"braces route for {{J{a + 1},J{a + 1}}} disagrees with F")

    _check_pair_identities(structure, pairs13)
    _check_vanishing_propagation(pairs13)

    return HyperHNAnalysis(
        F=tuple(f_list), theta=tuple(theta_list),
        square_norms=tuple(norms), N=tuple(n_list),
        N_assoc=pairs, N_assoc13=pairs13, conn=conn)


def _barwedge_sl(s13, endo):
    """(S barwedge L)(x,y) = S(Lx, y) + S(x, Ly) for a (1,2)-tensor S."""
    return j_insert(s13, endo, 1) + j_insert(s13, endo, 2)


def _barwedge_ls(endo, s13):
    """(L barwedge S)(x,y) = L(S(x,y))."""
    return endo.contract_with(s13, 1, 0)


def _check_pair_identities(structure, pairs13):
    """The algebraic identities interlocking the six associated tensors."""
    j1, j2, j3 = structure.J

    def p(a, b):
        key = (min(a, b), max(a, b))
        return pairs13[key]

    half = Fraction(1, 2)
    checks = [
        # {J3,J1} = (1/2){J1,J1} bw J2 + J1 bw {J1,J2}
        p(3, 1) - (_barwedge_sl(p(1, 1), j2).scale(half)
                   + _barwedge_ls(j1, p(1, 2))),
        # {J3,J1} = -{J1,J2} bw J1 - J1 bw {J1,J2} - J2 bw {J1,J1}
        p(3, 1) + _barwedge_sl(p(1, 2), j1) + _barwedge_ls(j1, p(1, 2))
        + _barwedge_ls(j2, p(1, 1)),
        # J2 bw {J1,J1} + (1/2){J1,J1} bw J2 + 2 J1 bw {J1,J2}
        #   + {J1,J2} bw J1 = 0
        _barwedge_ls(j2, p(1, 1)) + _barwedge_sl(p(1, 1), j2).scale(half)
        + _barwedge_ls(j1, p(1, 2)).scale(2) + _barwedge_sl(p(1, 2), j1),
        # {J2,J3} = -(1/2){J2,J2} bw J1 - J2 bw {J1,J2}
        p(2, 3) + _barwedge_sl(p(2, 2), j1).scale(half)
        + _barwedge_ls(j2, p(1, 2)),
        # {J2,J3} = J1 bw {J2,J2} + {J1,J2} bw J2 + J2 bw {J1,J2}
        p(2, 3) - (_barwedge_ls(j1, p(2, 2)) + _barwedge_sl(p(1, 2), j2)
                   + _barwedge_ls(j2, p(1, 2))),
        # J1 bw {J2,J2} + (1/2){J2,J2} bw J1 + {J1,J2} bw J2
        #   + 2 J2 bw {J1,J2} = 0
        _barwedge_ls(j1, p(2, 2)) + _barwedge_sl(p(2, 2), j1).scale(half)
        + _barwedge_sl(p(1, 2), j2) + _barwedge_ls(j2, p(1, 2)).scale(2),
        # {J3,J3} - {J1,J1} = {J3,J1} bw J2 + J3 bw {J1,J2} + J1 bw {J2,J3}
        p(3, 3) - p(1, 1) - (_barwedge_sl(p(3, 1), j2)
                             + _barwedge_ls(j3, p(1, 2))
                             + _barwedge_ls(j1, p(2, 3))),
        # {J3,J3} = (1/2)({J1,J1} + {J3,J1} bw J2 - J2 bw {J3,J1}
        #                 - {J2,J3} bw J1 + J1 bw {J2,J3})
        p(3, 3) - (p(1, 1) + _barwedge_sl(p(3, 1), j2)
                   - _barwedge_ls(j2, p(3, 1))
                   - _barwedge_sl(p(2, 3), j1)
                   + _barwedge_ls(j1, p(2, 3))).scale(half),
        # {J1,J1} - {J2,J2} + {J3,J1} bw J2 + J2 bw {J3,J1}
        #   + 2 J3 bw {J1,J2} + {J2,J3} bw J1 + J1 bw {J2,J3} = 0
        p(1, 1) - p(2, 2) + _barwedge_sl(p(3, 1), j2)
        + _barwedge_ls(j2, p(3, 1)) + _barwedge_ls(j3, p(1, 2)).scale(2)
        + _barwedge_sl(p(2, 3), j1) + _barwedge_ls(j1, p(2, 3)),
        # {J2,J2} bw J2 = -2 J2 bw {J2,J2}
        _barwedge_sl(p(2, 2), j2) + _barwedge_ls(j2, p(2, 2)).scale(2),
    ]
    for k, c in enumerate(checks):
        if not c.is_zero():
            raise InternalInvariantViolation(
                f"associated-pair identity {k + 1} fails")


def _check_vanishing_propagation(pairs13):
    zero_count = sum(1 for t in pairs13.values() if t.is_zero())
    if zero_count >= 2 and zero_count != 6:
        raise InternalInvariantViolation(
            "two associated Nijenhuis tensors vanish but not all six")


# -- classification ----------------------------------------------------------------


@dataclass(frozen=True)
class HyperClassReport:
    per_structure: tuple          # three dicts of verdicts
    hypercomplex: bool
    hyper_kaehler: bool
    in_w_class: bool              # W4(J1) & W1(J2) & W1(J3)
    lee_relation_holds: bool      # theta_2 o J2 = theta_3 o J3 = -2 theta_1 o J1
    g1_j1: bool                   # {J1,J1} = 0, with a dim-4 caveat
    dim_note: str


def _hermitian_verdicts(structure, f3, theta):
    frame = structure.frame
    j1 = structure.J[0]
    dim = frame.dim
    sw = reorder(f3, (1, 0, 2))
    w4_shape = (_pair_term(frame.g, theta)
                - reorder(_pair_term(frame.g, theta), (0, 2, 1))
                - _pair_term(_gxjy(frame, j1), form_after(theta, j1))
                + reorder(_pair_term(_gxjy(frame, j1),
                                     form_after(theta, j1)), (0, 2, 1))
                ).scale(Fraction(1, dim - 2))
    conditions = {
        "W0": [f3],
        "W1": [f3 + sw],
        "W2": [_cyc(f3)],
        "W3": [f3 - j_insert(j_insert(f3, j1, 0), j1, 1), theta],
        "W4": [f3 - w4_shape],
    }
    return {name: all(t.is_zero() for t in ts)
            for name, ts in conditions.items()}


def _gxjy(frame, endo):
    dim = frame.dim

    def fn(idx):
        i, j = idx
        total = frame.zero()
        for m in range(dim):
            e = endo.get((m, j))
            if not e.is_zero():
                total = total + frame.g.get((i, m)) * e
        return total

    return Tensor.build(dim, (LOWER, LOWER), frame.syms, fn)


def _norden_verdicts(structure, alpha, f3, theta):
    frame = structure.frame
    ja = structure.J[alpha]
    dim = frame.dim
    g_twin = _gxjy(frame, ja)
    theta_j = form_after(theta, ja)
    w1_shape = (_pair_term(frame.g, theta) + _pair_term(g_twin, theta_j)
                + reorder(_pair_term(frame.g, theta), (0, 2, 1))
                + reorder(_pair_term(g_twin, theta_j), (0, 2, 1))
                ).scale(Fraction(1, dim))
    conditions = {
        "W0": [f3],
        "W1": [f3 - w1_shape],
        "W2": [_cyc(j_insert(f3, ja, 2)), theta],
        "W3": [_cyc(f3)],
        "W1+W2": [_cyc(j_insert(f3, ja, 2))],
    }
    return {name: all(t.is_zero() for t in ts)
            for name, ts in conditions.items()}


def classify_hyper(structure, analysis):
    frame = structure.frame
    dim = frame.dim
    v1 = _hermitian_verdicts(structure, analysis.F[0], analysis.theta[0])
    v2 = _norden_verdicts(structure, 1, analysis.F[1], analysis.theta[1])
    v3 = _norden_verdicts(structure, 2, analysis.F[2], analysis.theta[2])

    hypercomplex = sum(1 for n in analysis.N if n.is_zero()) >= 2
    if hypercomplex and not all(n.is_zero() for n in analysis.N):
        raise InternalInvariantViolation(
            "two Nijenhuis tensors vanish but not the third")
    hyper_kaehler = all(f.is_zero() for f in analysis.F)

    in_w = v1["W4"] and v2["W1"] and v3["W1"]
    t1j = form_after(analysis.theta[0], structure.J[0])
    t2j = form_after(analysis.theta[1], structure.J[1])
    t3j = form_after(analysis.theta[2], structure.J[2])
    lee_rel = (t2j == t3j and t2j == t1j.scale(-2))

    g1 = analysis.N_assoc[(1, 1)].is_zero()
    note = ""
    if dim == 4:
        note = ("dim 4: the Hermitian lattice reduces to W2 and W4, and "
                "the {J1,J1} = 0 condition collapses toward W4-type "
                "constraints")
    return HyperClassReport(
        per_structure=(v1, v2, v3),
        hypercomplex=hypercomplex,
        hyper_kaehler=hyper_kaehler,
        in_w_class=in_w,
        lee_relation_holds=lee_rel,
        g1_j1=g1,
        dim_note=note,
    )


# -- skew-torsion connections --------------------------------------------------------


@dataclass(frozen=True)
class SkewTorsionReport:
    torsions: tuple               # per alpha: (0,3)-tensor or None
    connections: tuple            # per alpha: Connection or None
    absent_witness: tuple         # per alpha: witness or None
    unified: Connection | None
    unified_torsion: Tensor | None


def skew_torsion_connections(structure, analysis):
    frame = structure.frame
    conn = analysis.conn
    torsions, conns, witnesses = [], [], []
    for a in range(3):
        ja = structure.J[a]
        wit = first_nonzero(analysis.N_assoc[(a + 1, a + 1)])
        if wit is not None:
            torsions.append(None)
            conns.append(None)
            witnesses.append(wit)
            continue
        f3 = analysis.F[a]
        if a == 0:
            f_j3 = j_insert(f3, ja, 2)
            t3 = (f_j3 - reorder(f_j3, (1, 0, 2))
                  - reorder(j_insert(f3, ja, 0), (2, 0, 1)))
            # last term: F(J z, x, y) as a function of (x, y, z)
        else:
            t3 = _cyc(j_insert(f3, ja, 2)).scale(Fraction(-1, 2))
        if (t3 != -reorder(t3, (1, 0, 2)) or t3 != -reorder(t3, (0, 2, 1))):
            raise InternalInvariantViolation(
                f"torsion {a + 1} is not totally skew")
        c = connection_from_torsion(frame, conn, t3, f"skew_torsion_{a + 1}")
        if not c.nabla_endo(ja).is_zero() or \
                not c.nabla_lower(frame.g).is_zero():
            raise InternalInvariantViolation(
                f"skew-torsion connection {a + 1} is not natural")
        torsions.append(t3)
        conns.append(c)
        witnesses.append(None)

    unified = unified_t = None
    present = [t for t in torsions if t is not None]
    if len(present) == 3 and present[0] == present[1] == present[2]:
        unified = conns[0]
        unified_t = torsions[0]
        for ja in structure.J:
            if not unified.nabla_endo(ja).is_zero():
                raise InternalInvariantViolation(
                    "unified connection does not preserve the triple")
    return SkewTorsionReport(
        torsions=tuple(torsions), connections=tuple(conns),
        absent_witness=tuple(witnesses), unified=unified,
        unified_torsion=unified_t)


# -- quaternionic Kaehler check --------------------------------------------------------


@dataclass(frozen=True)
class QKReport:
    is_qk: bool
    witness: tuple | None
    omegas: tuple | None          # three 1-forms
    psi1: Tensor | None
    psi23_vanish: bool | None
    ricci_relation_holds: bool | None
    square_norm_relation_holds: bool | None
    flat: bool | None
    flat_iff_psi1_zero: bool | None
    einstein: bool | None


def _trace_endo_product(frame, a, b):
    """Tr(a b) for (1,1)-tensors."""
    total = frame.zero()
    for i in range(frame.dim):
        for m in range(frame.dim):
            x = a.get((i, m))
            if not x.is_zero():
                total = total + x * b.get((m, i))
    return total


def qk_solve(frame, j_triple, nabla_js):
    """Recover the local 1-forms of the quaternionic condition, or report
    the first inconsistent component.

    nabla_js: three (1,2)-tensors (l, i, j) = (nabla_i J_a)^l_j."""
    dim = frame.dim
    j1, j2, j3 = j_triple
    omegas = []
    for column, (sign, left, source) in enumerate((
            (-1, j3, 1),     # omega_1 from nabla J_2
            (1, j3, 0),      # omega_2 from nabla J_1
            (-1, j2, 0))):   # omega_3 from nabla J_1
        comps = []
        for i in range(dim):
            m_a = Tensor.build(dim, (UPPER, LOWER), frame.syms,
                               lambda idx: nabla_js[source].get(
                                   (idx[0], i, idx[1])))
            tr = _trace_endo_product(frame, left, m_a)
            comps.append(tr.scale(Fraction(sign, dim)))
        omegas.append(Tensor(dim, (LOWER,), frame.syms, comps))
    om1, om2, om3 = omegas

    # verify the full system (nabla_x J_a) y = om_c(x) J_b y - om_b(x) J_c y
    for alpha, beta, gamma in CYCLES:
        jb, jc = j_triple[beta], j_triple[gamma]
        ob, oc = omegas[beta], omegas[gamma]

        def rhs(idx):
            l, i, j = idx
            return (oc.get((i,)) * jb.get((l, j))
                    - ob.get((i,)) * jc.get((l, j)))

        expect = Tensor.build(dim, (UPPER, LOWER, LOWER), frame.syms, rhs)
        defect = nabla_js[alpha] - expect
        wit = first_nonzero(defect)
        if wit is not None:
            return None, (alpha + 1,) + wit[0], wit[1]
    return (om1, om2, om3), None, None


def _d_form(frame, w):
    """d w (x, y) = -w([x, y]) for constant-component 1-forms."""
    dim = frame.dim

    def fn(idx):
        i, j = idx
        total = frame.zero()
        for m in range(dim):
            c = frame.brackets.get((m, i, j))
            if not c.is_zero():
                total = total - c * w.get((m,))
        return total

    return Tensor.build(dim, (LOWER, LOWER), frame.syms, fn)


def quaternionic_kahler_check(structure, analysis=None):
    frame = structure.frame
    if analysis is None:
        analysis = analyze_hyper(structure)
    conn = analysis.conn
    nabla_js = tuple(conn.nabla_endo(ja) for ja in structure.J)
    omegas, where, value = qk_solve(frame, structure.J, nabla_js)
    if omegas is None:
        return QKReport(False, (where, value), None, None, None, None,
                        None, None, None, None)

    om = {i + 1: w for i, w in enumerate(omegas)}

    def psi(beta, alpha, gamma):
        dw = _d_form(frame, om[beta])

        def fn(idx):
            i, j = idx
            return (dw.get((i, j))
                    + om[gamma].get((i,)) * om[alpha].get((j,))
                    - om[alpha].get((i,)) * om[gamma].get((j,)))

        return Tensor.build(frame.dim, (LOWER, LOWER), frame.syms, fn)

    psi1 = psi(1, 3, 2)
    psi2 = psi(2, 1, 3)
    psi3 = psi(3, 2, 1)
    psi23 = psi2.is_zero() and psi3.is_zero()

    pack = curvature(frame, conn)
    n = frame.dim // 4
    # rho(x, y) = n Psi_1(J_1 x, y)
    ricci_rel = pack.ricci == j_insert(psi1, structure.J[0], 0).scale(n)

    # square norms against the omega expression
    norm_ok = True
    for alpha, beta, gamma in CYCLES:
        ob, og = om[beta + 1], om[gamma + 1]
        ob_sq = _form_square_norm(frame, ob)
        og_sq = _form_square_norm(frame, og)
        expect = (og_sq.scale(EPS[beta]) + ob_sq.scale(EPS[gamma])
                  ).scale(4 * n)
        if analysis.square_norms[alpha] != expect:
            norm_ok = False

    flat = pack.r4.is_zero()
    flat_iff = flat == psi1.is_zero()
    einstein = None
    if frame.dim >= 8:
        einstein = pack.ricci == frame.g.scale(
            pack.scal.scale(Fraction(1, frame.dim)))
    return QKReport(
        is_qk=True, witness=None, omegas=omegas, psi1=psi1,
        psi23_vanish=psi23, ricci_relation_holds=ricci_rel,
        square_norm_relation_holds=norm_ok, flat=flat,
        flat_iff_psi1_zero=flat_iff, einstein=einstein)


def _form_square_norm(frame, w):
    """w(w-sharp) = g^{ij} w_i w_j."""
    sharp = raise_lower(w, 0, frame.metric)
    total = frame.zero()
    for i in range(frame.dim):
        v = sharp.get((i,))
        if not v.is_zero():
            total = total + v * w.get((i,))
    return total


# -- pointwise tangent-bundle lift ------------------------------------------------------


@dataclass(frozen=True)
class TangentLift:
    F: tuple                 # lifted F_1, F_2, F_3 on the doubled space
    theta: tuple             # their Lee forms w.r.t. the lifted metric
    lift_metric: MetricData


def tangent_lift_point(base_frame, base_j, base_f, base_pack, u):
    """Fiber-point lift of the fundamental tensors: basis order is
    (e_1', ..., e_m', e_1'', ..., e_m'') for m = dim of the base."""
    m = base_frame.dim
    if u.dim != m or u.variance != (UPPER,):
        raise DimensionMismatch("the fiber vector must live on the base")
    dim = 2 * m
    syms = base_frame.syms
    zero = Scalar.const(syms, 0)

    r_u = contract_form_vec(base_pack.r4, u, 0)      # R(u, x, y, z)
    r_u_jy = j_insert(r_u, base_j, 1)                # R(u, x, J y, z)
    r_u_jz = j_insert(r_u, base_j, 2)                # R(u, x, y, J z)

    def horiz(i):
        return i < m

    def f1_fn(idx):
        i, j, k = idx
        if horiz(i) and horiz(j) and horiz(k):
            return -r_u_jy.get((i, j, k)) - r_u_jz.get((i, j, k))
        if horiz(i) and horiz(j) and not horiz(k):
            return -base_f.get((i, j, k - m))
        if horiz(i) and not horiz(j) and horiz(k):
            return base_f.get((i, j - m, k))
        return zero

    def f2_fn(idx):
        i, j, k = idx
        if horiz(i) and horiz(j) and not horiz(k):
            return r_u.get((i, j, k - m))
        if horiz(i) and not horiz(j) and horiz(k):
            return -r_u.get((i, j - m, k))
        return zero

    def f3_fn(idx):
        i, j, k = idx
        if horiz(i) and horiz(j) and horiz(k):
            return base_f.get((i, j, k))
        if horiz(i) and not horiz(j) and not horiz(k):
            return base_f.get((i, j - m, k - m))
        if horiz(i) and horiz(j) and not horiz(k):
            return -r_u_jz.get((i, j, k - m))
        if horiz(i) and not horiz(j) and horiz(k):
            return r_u_jy.get((i, j - m, k))
        return zero

    lifts = tuple(Tensor.build(dim, (LOWER,) * 3, syms, fn)
                  for fn in (f1_fn, f2_fn, f3_fn))

    def metric_fn(idx):
        i, j = idx
        if horiz(i) != horiz(j):
            return base_frame.g.get((i % m, j % m))
        return zero

    lift_md = MetricData.from_tensor(
        Tensor.build(dim, (LOWER, LOWER), syms, metric_fn))
    lift_frame = Frame(dim, syms,
                       Tensor.zeros(dim, (UPPER, LOWER, LOWER), syms),
                       lift_md)
    thetas = tuple(one_form_trace(lift_frame, f) for f in lifts)

    # the trace identities against the base data
    theta_base = one_form_trace(base_frame, base_f)
    rho_u = contract_form_vec(base_pack.ricci, u, 0)
    rho_star = Tensor.build(
        m, (LOWER, LOWER), syms,
        lambda idx: _rho_star_entry(base_frame, base_j, base_pack.r4, idx))
    rho_star_u = contract_form_vec(rho_star, u, 0)
    for z in range(m):
        if thetas[0].get((z,)) != theta_base.get((z,)):
            raise InternalInvariantViolation("theta_1(Z') != theta(Z)")
        if not thetas[0].get((z + m,)).is_zero():
            raise InternalInvariantViolation("theta_1(Z'') != 0")
        if thetas[1].get((z,)) != -rho_u.get((z,)):
            raise InternalInvariantViolation("theta_2(Z') != -rho(u, Z)")
        if thetas[2].get((z,)) != rho_star_u.get((z,)):
            raise InternalInvariantViolation("theta_3(Z') != rho*(u, Z)")
        if thetas[2].get((z + m,)) != theta_base.get((z,)):
            raise InternalInvariantViolation("theta_3(Z'') != theta(Z)")
    return TangentLift(F=lifts, theta=thetas, lift_metric=lift_md)


def contract_form_vec(t, vec, slot):
    dim = t.dim
    zero = Scalar.const(t.syms, 0)

    def fn(idx):
        total = zero
        for mm in range(dim):
            v = vec.get((mm,))
            if not v.is_zero():
                total = total + v * t.get(idx[:slot] + (mm,) + idx[slot:])
        return total

    variance = t.variance[:slot] + t.variance[slot + 1:]
    return Tensor.build(dim, variance, t.syms, fn)


def _rho_star_entry(frame, endo, r4, idx):
    """rho*(x, z) = g^{ij} R(x, e_i, J e_j, z)."""
    x, z = idx
    total = frame.zero()
    for i in range(frame.dim):
        for j in range(frame.dim):
            gi = frame.g_inv.get((i, j))
            if gi.is_zero():
                continue
            for mm in range(frame.dim):
                jm = endo.get((mm, j))
                if not jm.is_zero():
                    total = total + gi * jm * r4.get((x, i, mm, z))
    return total


# -- the h-sphere model --------------------------------------------------------------


def h_sphere_curvature(n, a, b):
    """Closed-form curvature of the complex hypersurface model on the flat
    Norden space of dimension 2n: R = nu (pi_1 - pi_2) + nu* pi_3 with
    nu = a/(a^2+b^2) and nu* = -b/(a^2+b^2)."""
    a = Fraction(a)
    b = Fraction(b)
    if a == 0 and b == 0:
        raise ZeroParameters("(a, b) must not be (0, 0)")
    if n < 2:
        raise ZeroParameters("the model needs n >= 2")
    dim = 2 * n
    syms = ()
    zero = Scalar.const(syms, 0)
    one = Scalar.const(syms, 1)

    def metric_fn(idx):
        i, j = idx
        if i != j:
            return zero
        return one if i < n else -one

    def j_fn(idx):
        i, j = idx
        if j < n and i == j + n:
            return one
        if j >= n and i == j - n:
            return -one
        return zero

    g = Tensor.build(dim, (LOWER, LOWER), syms, metric_fn)
    j_std = Tensor.build(dim, (UPPER, LOWER), syms, j_fn)
    md = MetricData.from_tensor(g)
    frame = Frame(dim, syms, Tensor.zeros(dim, (UPPER, LOWER, LOWER), syms),
                  md)
    g_twin = twin_metric_tensor(frame, j_std)
    from .tensors import kulkarni_nomizu
    pi1 = kulkarni_nomizu(g, g).scale(Fraction(-1, 2))
    pi2 = kulkarni_nomizu(g_twin, g_twin).scale(Fraction(-1, 2))
    pi3 = kulkarni_nomizu(g, g_twin)
    nu = a / (a * a + b * b)
    nu_star = -b / (a * a + b * b)
    r4 = (pi1 - pi2).scale(nu) + pi3.scale(nu_star)
    pack = pack_from_r4(frame, r4)
    # trace identities of the model
    expect_ricci = (g.scale(nu) - g_twin.scale(nu_star)).scale(2 * (n - 1))
    if pack.ricci != expect_ricci:
        raise InternalInvariantViolation("h-sphere Ricci form fails")
    if pack.scal != Scalar.const(syms, 4 * n * (n - 1) * nu):
        raise InternalInvariantViolation("h-sphere scalar curvature fails")
    return frame, j_std, pack


# -- Kaehler-like vanishing ------------------------------------------------------------


def _signed_column(endo, j):
    """(i, sign) with endo e_j = sign e_i, or None for a zero column;
    requires signed-permutation columns."""
    dim = endo.dim
    hits = []
    for i in range(dim):
        c = endo.get((i, j))
        if c.is_zero():
            continue
        v = c.const_value() if c.is_const() else None
        if v not in (1, -1):
            return "general"
        hits.append((i, 1 if v == 1 else -1))
    if not hits:
        return None
    if len(hits) > 1:
        return "general"
    return hits[0]


class _SignedUnionFind:
    """Union-find over component slots with signs in {+1, -1} and a
    forced-zero flag per class."""

    def __init__(self, size):
        self.parent = list(range(size))
        self.sign = [1] * size
        self.zero = [False] * size

    def relate(self, i, j, s):
        """impose x_i = s x_j."""
        ri, si = self._find_full(i)
        rj, sj = self._find_full(j)
        if ri == rj:
            if si != s * sj:
                self.zero[ri] = True
            return
        # x_ri = si^-1 ... attach rj under ri: x_rj = (sj)^-1 s^-1 si x_ri
        self.parent[rj] = ri
        self.sign[rj] = si * s * sj
        if self.zero[rj]:
            self.zero[ri] = True

    def _find_full(self, i):
        s = 1
        while self.parent[i] != i:
            s *= self.sign[i]
            i = self.parent[i]
        return i, s

    def set_zero(self, i):
        r, _ = self._find_full(i)
        self.zero[r] = True


def kahler_like_only_zero(frame, endos, eps_list):
    """True when the linear system

        L curvature-like,  L(x,y,z,w) = eps_a L(x,y,E_a z, E_a w)
                           L(x,y,z,w) = eps_a L(E_a x, E_a y, z, w)

    admits only the zero tensor.  Endomorphisms must act as signed
    permutations (possibly with kernel) on the basis."""
    dim = frame.dim
    size = dim ** 4

    def off(i, j, k, l):
        return ((i * dim + j) * dim + k) * dim + l

    cols = []
    for e in endos:
        col = [_signed_column(e, j) for j in range(dim)]
        if any(c == "general" for c in col):
            raise InternalInvariantViolation(
                "Kaehler-like solver needs signed-permutation structures")
        cols.append(col)

    uf = _SignedUnionFind(size)
    idx_range = range(dim)
    for i in idx_range:
        for j in idx_range:
            for k in idx_range:
                for l in idx_range:
                    o = off(i, j, k, l)
                    uf.relate(o, off(j, i, k, l), -1)
                    uf.relate(o, off(i, j, l, k), -1)
                    uf.relate(o, off(k, l, i, j), 1)   # pair symmetry
                    for e_cols, eps in zip(cols, eps_list):
                        ck, cl = e_cols[k], e_cols[l]
                        ci, cj = e_cols[i], e_cols[j]
                        if ck is not None and cl is not None:
                            kk, sk = ck
                            ll, sl = cl
                            uf.relate(o, off(i, j, kk, ll), eps * sk * sl)
                        else:
                            uf.set_zero(o)
                        if ci is not None and cj is not None:
                            ii, si = ci
                            jj, sj = cj
                            uf.relate(o, off(ii, jj, k, l), eps * si * sj)
                        else:
                            uf.set_zero(o)

    # name the surviving classes
    roots = {}
    for o in range(size):
        r, _ = uf._find_full(o)
        if not uf.zero[r] and r not in roots:
            roots[r] = len(roots)
    if not roots:
        return True

    # first Bianchi rows over the surviving classes
    rows = {}

    def add_row(entries):
        combined = {}
        for o, coeff in entries:
            r, s = uf._find_full(o)
            if uf.zero[r]:
                continue
            var = roots.get(r)
            if var is None:
                continue
            combined[var] = combined.get(var, 0) + coeff * s
        combined = {v: c for v, c in combined.items() if c}
        if not combined:
            return
        # reduce against stored rows (sparse elimination over Q)
        while combined:
            lead = min(combined)
            row = rows.get(lead)
            if row is None:
                lc = combined[lead]
                rows[lead] = {v: Fraction(c, lc)
                              for v, c in combined.items()}
                return
            factor = combined[lead]
            combined = {v: combined.get(v, 0) - factor * row.get(v, 0)
                        for v in set(combined) | set(row)}
            combined = {v: c for v, c in combined.items() if c}

    for i in idx_range:
        for j in idx_range:
            for k in idx_range:
                for l in idx_range:
                    add_row([(off(i, j, k, l), 1), (off(j, k, i, l), 1),
                             (off(k, i, j, l), 1)])
    return len(rows) == len(roots)
