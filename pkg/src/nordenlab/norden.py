"""Almost Norden manifolds on Lie-algebra frames.

Covers the fundamental tensor F and its Lee forms, the Nijenhuis pair,
classification into the eight classes over {W1, W2, W3}, the twin
interchange apparatus (potential, average connection, invariant tensors),
the B-/canonical/KT natural connections and the four-component torsion
decomposition, plus constant homothetic transformations of the metric pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DimensionTooSmall,
    InternalInvariantViolation,
    InvalidRotationPair,
    MetricDegenerate,
    StructureInvalid,
    TwinMetricDegenerate,
)
from .frames import Connection, CurvaturePack, curvature, levi_civita, torsion_of
from .ops import (
    endo_compose,
    first_nonzero,
    form_after,
    identity_endo,
    j_insert,
    lower_first,
    metric_trace,
    one_form_trace,
    reorder,
)
from .scalars import Scalar
from .tensors import (
    LOWER,
    MetricData,
    Tensor,
    UPPER,
    inner_product,
)


class NordenStructure:
    """Almost complex structure J acting as an anti-isometry of g."""

    __slots__ = ("frame", "J")

    def __init__(self, frame, J):
        if frame.dim % 2 != 0:
            raise StructureInvalid("almost Norden structures need even dim")
        jj = endo_compose(J, J)
        if jj != identity_endo(frame.dim, frame.syms).scale(-1):
            raise StructureInvalid("J^2 = -I fails")
        gj = _pullback_metric(frame, J)
        if gj != frame.g.scale(-1):
            raise StructureInvalid("g(Jx,Jy) = -g(x,y) fails")
        self.frame = frame
        self.J = J

    @property
    def dim(self):
        return self.frame.dim


def _pullback_metric(frame, endo):
    """g(Ax, Ay) componentwise."""
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


def twin_metric_tensor(frame, J):
    """g~(x,y) = g(Jx, y)."""
    dim = frame.dim

    def fn(idx):
        i, j = idx
        total = frame.zero()
        for m in range(dim):
            jm = J.get((m, i))
            if not jm.is_zero():
                total = total + jm * frame.g.get((m, j))
        return total

    return Tensor.build(dim, (LOWER, LOWER), frame.syms, fn)


def fundamental_tensor(frame, conn, J):
    """F(x,y,z) = g((nabla_x J) y, z)."""
    return lower_first(frame, conn.nabla_endo(J))


@dataclass(frozen=True)
class NordenAnalysis:
    F: Tensor
    theta: Tensor
    theta_tilde: Tensor
    theta_star: Tensor
    N: Tensor
    N_assoc: Tensor
    Phi: Tensor
    square_norm_DJ: Scalar


def square_norm(frame, f3):
    """g^{ij} g^{kl} g^{st} F_{iks} F_{jlt}."""
    lifted = f3
    from .tensors import raise_lower
    for slot in range(3):
        lifted = raise_lower(lifted, slot, frame.metric)
    total = frame.zero()
    for idx, c in lifted.nonzero():
        total = total + c * f3.get(idx)
    return total


def nijenhuis_pair_from_f(f3, J):
    """[J,J] and {J,J} as (0,3)-tensors expressed through F."""
    f_jx = j_insert(f3, J, 0)   # F(Jx, y, z)
    f_jy = j_insert(f3, J, 1)   # F(x, Jy, z)
    f_jx_sw = reorder(f_jx, (1, 0, 2))   # F(Jy, x, z)
    f_jy_sw = reorder(f_jy, (1, 0, 2))   # F(y, Jx, z)
    n = f_jy - f_jy_sw + f_jx - f_jx_sw
    n_hat = f_jy + f_jy_sw + f_jx + f_jx_sw
    return n, n_hat


def analyze_norden(structure):
    """Everything derived from the Levi-Civita connection, with the
    reconstruction of F from the Nijenhuis pair cross-checked."""
    frame = structure.frame
    J = structure.J
    conn = levi_civita(frame)
    f3 = fundamental_tensor(frame, conn, J)

    # basic symmetries F(x,y,z) = F(x,z,y) = F(x,Jy,Jz)
    if reorder(f3, (0, 2, 1)) != f3:
        raise InternalInvariantViolation("F(x,y,z) = F(x,z,y) fails")
    if j_insert(j_insert(f3, J, 1), J, 2) != f3:
        raise InternalInvariantViolation("F(x,y,z) = F(x,Jy,Jz) fails")

    theta = one_form_trace(frame, f3)
    theta_tilde = form_after(theta, J)
    theta_star = -theta_tilde
    # direct definitions as traces
    if metric_trace(frame, j_insert(f3, J, 1), 0, 1) != theta_star:
        raise InternalInvariantViolation("theta* trace identity fails")

    n, n_hat = nijenhuis_pair_from_f(f3, J)

    # Phi(x,y,z) = (F(Jz,x,y) - F(x,y,Jz) - F(y,x,Jz)) / 2
    f_jz = j_insert(f3, J, 2)
    phi = (reorder(j_insert(f3, J, 0), (2, 0, 1))
           - f_jz - reorder(f_jz, (1, 0, 2))).scale(Fraction(1, 2))

    # reconstruction: F(x,y,z) = -1/4 {N(Jx,y,z) + N(Jx,z,y)
    #                                 + N^(Jx,y,z) + N^(Jx,z,y)}
    n_j = j_insert(n, J, 0)
    nh_j = j_insert(n_hat, J, 0)
    rebuilt = (n_j + reorder(n_j, (0, 2, 1)) + nh_j
               + reorder(nh_j, (0, 2, 1))).scale(Fraction(-1, 4))
    if rebuilt != f3:
        raise InternalInvariantViolation(
            "F is not reproduced by the Nijenhuis pair")

    return NordenAnalysis(
        F=f3,
        theta=theta,
        theta_tilde=theta_tilde,
        theta_star=theta_star,
        N=n,
        N_assoc=n_hat,
        Phi=phi,
        square_norm_DJ=square_norm(frame, f3),
    )


# -- classification -------------------------------------------------------------

NORDEN_CLASSES = ("W0", "W1", "W2", "W3", "W1+W2", "W1+W3", "W2+W3",
                  "W1+W2+W3")


@dataclass(frozen=True)
class ClassReport:
    verdicts: dict
    witnesses: dict
    minimal: str


def _pair_term(metric_tensor, form):
    """(0,3)-tensor m(x,y) w(z)."""
    dim = metric_tensor.dim

    def fn(idx):
        i, j, k = idx
        return metric_tensor.get((i, j)) * form.get((k,))

    return Tensor.build(dim, (LOWER,) * 3, metric_tensor.syms, fn)


def _cyc(t):
    return t + reorder(t, (1, 2, 0)) + reorder(t, (2, 0, 1))


def classify_norden(structure, analysis):
    """Verdicts for the eight classes via F, cross-checked against the
    characterizations by Phi and by the Nijenhuis pair."""
    frame = structure.frame
    if frame.dim < 4:
        raise DimensionTooSmall("classification needs dim >= 4")
    J = structure.J
    g_twin = twin_metric_tensor(frame, J)
    n2 = frame.dim  # 2n
    f3, theta, theta_t = analysis.F, analysis.theta, analysis.theta_tilde

    # --- conditions in terms of F
    w1_shape = (_pair_term(frame.g, theta) + _pair_term(g_twin, theta_t)
                + reorder(_pair_term(frame.g, theta), (0, 2, 1))
                + reorder(_pair_term(g_twin, theta_t), (0, 2, 1))
                ).scale(Fraction(1, n2))
    sf = _cyc(f3)
    sfj = _cyc(j_insert(f3, J, 2))
    f_conditions = {
        "W0": f3,
        "W1": f3 - w1_shape,
        "W2": [sfj, theta],
        "W3": sf,
        "W1+W2": sfj,
        "W1+W3": sf - _cyc(_pair_term(frame.g, theta)
                           + _pair_term(g_twin, theta_t)).scale(
                               Fraction(2, n2)),
        "W2+W3": theta,
        "W1+W2+W3": None,
    }

    # --- conditions in terms of Phi
    phi = analysis.Phi
    f_form = one_form_trace(frame, phi)
    f_j = form_after(f_form, J)
    phi_jxjy = j_insert(j_insert(phi, J, 0), J, 1)
    # the W1 shape needs g(x,Jy) f(Jz)
    gxjy = Tensor.build(
        frame.dim, (LOWER,) * 2, frame.syms,
        lambda idx: _dot_j(frame, J, idx))
    phi_w1 = (_pair_term(frame.g, f_form)
              + _pair_term(gxjy, f_j)).scale(Fraction(1, n2))
    phi_jx = j_insert(phi, J, 0)
    phi_jz = j_insert(phi, J, 2)
    phi_conditions = {
        "W0": phi,
        "W1": phi - phi_w1,
        "W2": [phi + phi_jxjy, f_form],
        "W3": phi - phi_jxjy,
        "W1+W2": [phi + phi_jxjy, phi_jx + phi_jz],
        "W1+W3": phi - phi_jxjy - phi_w1.scale(2),
        "W2+W3": f_form,
        "W1+W2+W3": None,
    }

    # --- conditions in terms of the Nijenhuis pair
    n, n_hat = analysis.N, analysis.N_assoc
    vt = one_form_trace(frame, n_hat)                     # vartheta
    twin_md = _twin_metric_data(frame, J)
    vt_tilde = one_form_trace(frame, n_hat, metric=twin_md)
    nhat_w1 = (_pair_term(frame.g, vt)
               + _pair_term(g_twin, vt_tilde)).scale(Fraction(1, n2))
    nij_conditions = {
        "W0": [n, n_hat],
        "W1": [n, n_hat - nhat_w1],
        "W2": [n, vt],
        "W3": n_hat,
        "W1+W2": n,
        "W1+W3": _cyc(n_hat) - _cyc(nhat_w1),
        "W2+W3": vt,
        "W1+W2+W3": None,
    }

    # trace chain: theta = 1/4 vartheta o J, vartheta~ = 4 theta
    if form_after(vt, J).scale(Fraction(1, 4)) != theta:
        raise InternalInvariantViolation("theta = (vartheta o J)/4 fails")
    if vt_tilde != theta.scale(4):
        raise InternalInvariantViolation("vartheta~ = 4 theta fails")

    verdicts, witnesses = {}, {}
    for name in NORDEN_CLASSES:
        routes = []
        for conditions in (f_conditions, phi_conditions, nij_conditions):
            cond = conditions[name]
            if cond is None:
                routes.append((True, None))
                continue
            tensors = cond if isinstance(cond, list) else [cond]
            wit = None
            for t in tensors:
                wit = first_nonzero(t)
                if wit is not None:
                    break
            routes.append((wit is None, wit))
        flags = {ok for ok, _ in routes}
        if len(flags) != 1:
            raise InternalInvariantViolation(
                f"classification routes disagree on {name}: {routes}")
        verdicts[name] = routes[0][0]
        if not verdicts[name]:
            witnesses[name] = routes[0][1]
    minimal = next(name for name in NORDEN_CLASSES if verdicts[name])
    return ClassReport(verdicts=verdicts, witnesses=witnesses, minimal=minimal)


def _dot_j(frame, J, idx):
    i, j = idx
    total = frame.zero()
    for m in range(frame.dim):
        jm = J.get((m, j))
        if not jm.is_zero():
            total = total + frame.g.get((i, m)) * jm
    return total


def _twin_metric_data(frame, J):
    try:
        return MetricData.from_tensor(twin_metric_tensor(frame, J))
    except MetricDegenerate as err:
        raise TwinMetricDegenerate(str(err)) from err


# -- twin interchange -------------------------------------------------------------


@dataclass(frozen=True)
class TwinReport:
    twin_metric: MetricData
    conn: Connection            # Levi-Civita of g
    conn_twin: Connection       # Levi-Civita of g~
    Phi13: Tensor
    Phi: Tensor                 # (0,3) via g
    f: Tensor
    f_star: Tensor
    avg_connection: Connection
    P: Tensor                   # (1,3), order (l,i,j,k)
    A: Tensor
    B: Tensor                   # (1,3)
    B4: Tensor                  # (0,4) via g
    r_diamond: Tensor           # (1,3) curvature of the average connection
    r_diamond4: Tensor          # (0,4) via g
    twin_curvature4: Tensor     # (0,4) of conn_twin via g~
    invariances: dict


def _lower_13(frame, t13, metric=None):
    """(1,3) (l,i,j,k) -> (0,4) (i,j,k,l) via the chosen metric."""
    g = (metric or frame.metric).g
    dim = frame.dim

    def fn(idx):
        i, j, k, l = idx
        total = frame.zero()
        for m in range(dim):
            c = t13.get((m, i, j, k))
            if not c.is_zero():
                total = total + c * g.get((m, l))
        return total

    return Tensor.build(dim, (LOWER,) * 4, frame.syms, fn)


def _nabla_12tensor(frame, conn, t):
    """(nabla_i S)(j,k)^l for a constant (1,2)-tensor S (order (l,i,j,k))."""
    dim = frame.dim

    def fn(idx):
        l, i, j, k = idx
        total = frame.zero()
        for m in range(dim):
            s = t.get((m, j, k))
            if not s.is_zero():
                total = total + conn.gamma.get((l, i, m)) * s
            gm = conn.gamma.get((m, i, j))
            if not gm.is_zero():
                total = total - gm * t.get((l, m, k))
            gm = conn.gamma.get((m, i, k))
            if not gm.is_zero():
                total = total - gm * t.get((l, j, m))
        return total

    return Tensor.build(dim, (UPPER,) + (LOWER,) * 3, frame.syms, fn)


def _pa_tensors(frame, conn, phi13):
    """P(x,y)z and its quadratic part A(x,y)z for a potential Phi."""
    dim = frame.dim
    nphi = _nabla_12tensor(frame, conn, phi13)

    def a_fn(idx):
        l, i, j, k = idx
        total = frame.zero()
        for m in range(dim):
            p = phi13.get((m, j, k))
            if not p.is_zero():
                total = total + phi13.get((l, i, m)) * p
            q = phi13.get((m, i, k))
            if not q.is_zero():
                total = total - phi13.get((l, j, m)) * q
        return total

    a13 = Tensor.build(dim, (UPPER,) + (LOWER,) * 3, frame.syms, a_fn)

    def p_fn(idx):
        l, i, j, k = idx
        return (nphi.get((l, i, j, k)) - nphi.get((l, j, i, k))
                + a13.get((l, i, j, k)))

    p13 = Tensor.build(dim, (UPPER,) + (LOWER,) * 3, frame.syms, p_fn)
    return p13, a13


def twin_interchange(structure):
    """The full invariant apparatus of the metric pair (g, g~), with every
    claimed (anti-)invariance re-verified by recomputation on the twin."""
    frame = structure.frame
    J = structure.J
    twin_md = _twin_metric_data(frame, J)
    twin_frame = frame.with_metric(twin_md)

    conn = levi_civita(frame)
    conn_twin = levi_civita(twin_frame)
    phi13 = conn_twin.gamma - conn.gamma
    phi3 = _lower_12(frame, phi13)

    f_form = one_form_trace(frame, phi3)
    f_star = metric_trace(frame, j_insert(phi3, J, 1), 0, 1)

    avg = Connection(conn.gamma + phi13.scale(Fraction(1, 2)),
                     "norden_average")

    p13, a13 = _pa_tensors(frame, conn, phi13)
    r_pack = curvature(frame, conn)
    b13 = r_pack.r13 + p13.scale(Fraction(1, 2))
    # B is the average of the two curvatures; R~ = R + P must close that
    twin_r13 = curvature(frame.with_metric(twin_md), conn_twin).r13
    if (r_pack.r13 + twin_r13).scale(Fraction(1, 2)) != b13:
        raise InternalInvariantViolation("B != (R + R~)/2, so P is wrong")
    b4 = _lower_13(frame, b13)

    rd_pack = curvature(frame, avg)
    rd13 = rd_pack.r13
    rd4 = _lower_13(frame, rd13)
    if b13 - a13.scale(Fraction(1, 4)) != rd13:
        raise InternalInvariantViolation(
            "R-diamond != B - A/4 on the average connection")

    # twin recomputation: the twin of (J, g~) carries the metric pair
    # (g~, -g), whose Levi-Civita connections are (conn_twin, conn)
    twin_twin_g = twin_metric_tensor(twin_frame, J)
    if twin_twin_g != frame.g.scale(-1):
        raise InternalInvariantViolation("twin of the twin metric is not -g")
    phi13_twin = conn.gamma - conn_twin.gamma
    phi_anti = phi13_twin == -phi13

    phi3_twin = _lower_12(twin_frame, phi13_twin)
    f_twin = one_form_trace(twin_frame, phi3_twin, metric=twin_md)
    f_star_twin = metric_trace(twin_frame, j_insert(phi3_twin, J, 1), 0, 1,
                               metric=twin_md)
    f_inv = f_twin == f_form
    f_star_inv = f_star_twin == f_star

    p13_twin, a13_twin = _pa_tensors(twin_frame, conn_twin, phi13_twin)
    r_twin_pack = curvature(twin_frame, conn_twin)
    b13_twin = r_twin_pack.r13 + p13_twin.scale(Fraction(1, 2))
    b_inv = b13_twin == b13
    a_inv = a13_twin == a13
    p_anti = p13_twin == -p13

    avg_twin = Connection(conn_twin.gamma + phi13_twin.scale(Fraction(1, 2)),
                          "norden_average_twin")
    rd_inv = avg_twin.gamma == avg.gamma and curvature(
        twin_frame, avg_twin).r13 == rd13

    invariances = {
        "Phi_anti_invariant": phi_anti,
        "P_anti_invariant": p_anti,
        "A_invariant": a_inv,
        "f_invariant": f_inv,
        "f_star_invariant": f_star_inv,
        "B_invariant": b_inv,
        "R_diamond_invariant": rd_inv,
    }
    if not all(invariances.values()):
        raise InternalInvariantViolation(f"twin invariances fail: {invariances}")

    return TwinReport(
        twin_metric=twin_md,
        conn=conn,
        conn_twin=conn_twin,
        Phi13=phi13,
        Phi=phi3,
        f=f_form,
        f_star=f_star,
        avg_connection=avg,
        P=p13,
        A=a13,
        B=b13,
        B4=b4,
        r_diamond=rd13,
        r_diamond4=rd4,
        twin_curvature4=_lower_13(frame, r_twin_pack.r13, metric=twin_md),
        invariances=invariances,
    )


def _lower_12(frame, t13, metric=None):
    """(1,2) (l,i,j) -> (0,3) (i,j,z) via the chosen metric."""
    g = (metric or frame.metric).g
    dim = frame.dim

    def fn(idx):
        i, j, z = idx
        total = frame.zero()
        for m in range(dim):
            c = t13.get((m, i, j))
            if not c.is_zero():
                total = total + c * g.get((m, z))
        return total

    return Tensor.build(dim, (LOWER,) * 3, frame.syms, fn)


# -- natural connections -----------------------------------------------------------


@dataclass(frozen=True)
class NotInW3:
    """Typed absence of the KT-connection, with the violating component."""

    witness: tuple


@dataclass(frozen=True)
class NordenConnectionsReport:
    b_conn: Connection
    canonical: Connection
    kt: Connection | None
    kt_absent: NotInW3 | None
    torsion_b: Tensor
    torsion_canonical: Tensor
    torsion_kt: Tensor | None
    decomposition_canonical: tuple


def _potential_from_torsion(frame, t3):
    """2Q(x,y,z) = T(x,y,z) - T(y,z,x) + T(z,x,y)."""
    return (t3 - reorder(t3, (1, 2, 0))
            + reorder(t3, (2, 0, 1))).scale(Fraction(1, 2))


def connection_from_torsion(frame, base_conn, t3, label):
    """Metric connection with the given torsion (Hayden construction)."""
    q3 = _potential_from_torsion(frame, t3)
    dim = frame.dim

    def fn(idx):
        l, i, j = idx
        total = base_conn.gamma.get((l, i, j))
        for k in range(dim):
            gi = frame.g_inv.get((l, k))
            if not gi.is_zero():
                total = total + gi * q3.get((i, j, k))
        return total

    return Connection(Tensor.build(dim, (UPPER, LOWER, LOWER), frame.syms,
                                   fn), label)


def _check_natural(frame, conn, J, what):
    if not conn.nabla_endo(J).is_zero():
        raise InternalInvariantViolation(f"{what}: J is not parallel")
    if not conn.nabla_lower(frame.g).is_zero():
        raise InternalInvariantViolation(f"{what}: g is not parallel")


def natural_connections_norden(structure, analysis=None):
    frame = structure.frame
    J = structure.J
    if analysis is None:
        analysis = analyze_norden(structure)
    conn = levi_civita(frame)
    n, n_hat = analysis.N, analysis.N_assoc

    # B-connection: nabla'_x y = nabla_x y - (1/2) J (nabla_x J) y
    nablaj = conn.nabla_endo(J)
    dim = frame.dim

    def b_fn(idx):
        l, i, j = idx
        total = conn.gamma.get((l, i, j))
        for m in range(dim):
            nj = nablaj.get((m, i, j))
            if not nj.is_zero():
                total = total - J.get((l, m)) * nj.scale(Fraction(1, 2))
        return total

    b_conn = Connection(Tensor.build(dim, (UPPER, LOWER, LOWER), frame.syms,
                                     b_fn), "norden_b")
    _check_natural(frame, b_conn, J, "B-connection")
    _, t_b = torsion_of(frame, b_conn)

    # torsion of the B-connection through the Nijenhuis pair
    nhat_zyx = reorder(n_hat, (2, 1, 0))
    nhat_zxy = reorder(n_hat, (2, 0, 1))
    t_b_expected = (n + _cyc(n) + nhat_zyx - nhat_zxy).scale(Fraction(1, 8))
    if t_b != t_b_expected:
        raise InternalInvariantViolation("B-connection torsion formula fails")

    # canonical connection through its torsion
    t_c = n.scale(Fraction(1, 4)) + (nhat_zyx - nhat_zxy).scale(Fraction(1, 8))
    canonical = connection_from_torsion(frame, conn, t_c, "norden_canonical")
    _check_natural(frame, canonical, J, "canonical connection")
    _, t_c_back = torsion_of(frame, canonical)
    if t_c_back != t_c:
        raise InternalInvariantViolation("canonical torsion roundtrip fails")
    # defining identity of the canonical type:
    # T(x,y,z) + T(y,z,x) - T(Jx,y,Jz) - T(y,Jz,Jx) = 0
    ident = (t_c + reorder(t_c, (1, 2, 0))
             - j_insert(j_insert(t_c, J, 0), J, 2)
             - reorder(j_insert(j_insert(t_c, J, 1), J, 2), (1, 2, 0)))
    if not ident.is_zero():
        raise InternalInvariantViolation("canonical-type identity fails")

    # canonical torsion sits in T2+T3
    comps = decompose_torsion_norden(structure, t_c)
    if not comps[0].is_zero() or not comps[3].is_zero():
        raise InternalInvariantViolation("canonical torsion leaves T2+T3")

    # the two coincide exactly on complex Norden manifolds ([J,J] = 0)
    if n.is_zero() and b_conn.gamma != canonical.gamma:
        raise InternalInvariantViolation("D' != D'' although [J,J] = 0")

    # KT-connection, only in the quasi-Kaehler class
    kt = kt_absent = t_kt = None
    sf = _cyc(analysis.F)
    wit = first_nonzero(sf)
    if wit is not None:
        kt_absent = NotInW3(witness=wit)
    else:
        q_kt = _cyc(j_insert(analysis.F, J, 2)).scale(Fraction(-1, 4))
        t_kt = q_kt - reorder(q_kt, (1, 0, 2))
        direct = _cyc(j_insert(analysis.F, J, 2)).scale(Fraction(-1, 2))
        if t_kt != direct:
            raise InternalInvariantViolation("KT torsion mismatch")
        if t_kt != _cyc(n).scale(Fraction(1, 4)):
            raise InternalInvariantViolation("KT torsion != (1/4) cyc [J,J]")
        kt = connection_from_torsion(frame, conn, t_kt, "norden_kt")
        _check_natural(frame, kt, J, "KT-connection")
        # totally skew
        if (t_kt != -reorder(t_kt, (1, 0, 2))
                or t_kt != -reorder(t_kt, (0, 2, 1))):
            raise InternalInvariantViolation("KT torsion is not a 3-form")
        if t_b.scale(2) != t_c + t_kt:
            raise InternalInvariantViolation("2T' != T'' + T''' on W3")

    return NordenConnectionsReport(
        b_conn=b_conn,
        canonical=canonical,
        kt=kt,
        kt_absent=kt_absent,
        torsion_b=t_b,
        torsion_canonical=t_c,
        torsion_kt=t_kt,
        decomposition_canonical=comps,
    )


# -- torsion decomposition ----------------------------------------------------------

def decompose_torsion_norden(structure, t3):
    """The four components of an antisymmetric-in-(1,2) (0,3)-tensor."""
    from .errors import NotATorsion

    if reorder(t3, (1, 0, 2)) != -t3:
        raise NotATorsion("T(x,y,z) != -T(y,x,z)")
    J = structure.J

    def tj(spec, jslots):
        out = t3
        for s in jslots:
            out = j_insert(out, J, s)
        return reorder(out, spec)

    txyz = t3
    t_jxjy = tj((0, 1, 2), (0, 1))
    t_jxyjz = tj((0, 1, 2), (0, 2))
    t_xjyjz = tj((0, 1, 2), (1, 2))
    t1 = (txyz - t_jxjy - t_jxyjz - t_xjyjz).scale(Fraction(1, 4))
    t2 = (txyz - t_jxjy + t_jxyjz + t_xjyjz).scale(Fraction(1, 4))
    tyzx = reorder(t3, (1, 2, 0))
    tzxy = reorder(t3, (2, 0, 1))
    t_jyzjx = tj((1, 2, 0), (0, 2))     # T(Jy, z, Jx)
    t_zjxjy = tj((2, 0, 1), (1, 2))     # T(z, Jx, Jy)
    t_jyjzx = tj((1, 2, 0), (0, 1))     # T(Jy, Jz, x)
    t_jzjxy = tj((2, 0, 1), (0, 1))     # T(Jz, Jx, y)
    t_yjzjx = tj((1, 2, 0), (1, 2))     # T(y, Jz, Jx)
    t_jzxjy = tj((2, 0, 1), (0, 2))     # T(Jz, x, Jy)
    t3c = (txyz.scale(2) - tyzx - tzxy + t_jxjy.scale(2)
           - t_jyzjx - t_zjxjy - t_jyjzx - t_jzjxy
           + t_yjzjx + t_jzxjy).scale(Fraction(1, 8))
    t4c = (txyz.scale(2) + tyzx + tzxy + t_jxjy.scale(2)
           + t_jyzjx + t_zjxjy + t_jyjzx + t_jzjxy
           - t_yjzjx - t_jzxjy).scale(Fraction(1, 8))
    comps = (t1, t2, t3c, t4c)
    if t1 + t2 + t3c + t4c != t3:
        raise InternalInvariantViolation("torsion components do not sum back")
    return comps


# -- homothetic transformations -------------------------------------------------------

def homothetic_transform_norden(structure, scale_factor, cos2v, sin2v):
    """g-bar = r (c g + s g~) for exact rationals with c^2 + s^2 = 1, r > 0."""
    r = Fraction(scale_factor)
    c = Fraction(cos2v)
    s = Fraction(sin2v)
    if c * c + s * s != 1:
        raise InvalidRotationPair(f"({c}, {s}) is not on the unit circle")
    if r <= 0:
        raise InvalidRotationPair("the homothetic scale must be positive")
    frame = structure.frame
    g_twin = twin_metric_tensor(frame, structure.J)
    g_bar = (frame.g.scale(c) + g_twin.scale(s)).scale(r)
    new_frame = frame.with_metric(MetricData.from_tensor(g_bar))
    return NordenStructure(new_frame, structure.J)
