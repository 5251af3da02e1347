"""Almost contact metric / B-metric structures on Lie-algebra frames.

Implements the fundamental tensor with its Lee forms and component
projections, the Nijenhuis pair, classification (eleven F-classes for the
B-metric flavor, twelve definitional P-classes for the metric flavor), the
phi-B / phi-canonical / phi-KT connections with their torsion forms, the
fifteen-subspace torsion decomposition with connection classes, the
Schouten-van Kampen pair, the Sasaki-like test and constant contact
homothetic transformations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    FlavorMismatch,
    InternalInvariantViolation,
    InvalidRotationPair,
    MetricDegenerate,
    NotATorsion,
    StructureInvalid,
    TwinMetricDegenerate,
)
from .frames import Connection, curvature, levi_civita, torsion_of
from .norden import connection_from_torsion, fundamental_tensor, _pair_term
from .ops import (
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
)
from .scalars import Scalar
from .tensors import LOWER, MetricData, Tensor, UPPER, inner_product

B_METRIC = "b_metric"
METRIC = "metric"


class ContactBStructure:
    """(phi, xi, eta, g) with the chosen compatibility flavor."""

    __slots__ = ("frame", "phi", "xi", "eta", "flavor")

    def __init__(self, frame, phi, xi, eta, flavor=B_METRIC):
        if flavor not in (B_METRIC, METRIC):
            raise FlavorMismatch(f"unknown flavor {flavor!r}")
        if frame.dim % 2 != 1:
            raise StructureInvalid("almost contact structures need odd dim")
        dim, syms = frame.dim, frame.syms
        zero = frame.zero()
        # phi xi = 0
        if not endo_apply(phi, xi).is_zero():
            raise StructureInvalid("phi xi != 0")
        # eta o phi = 0
        if not form_after(eta, phi).is_zero():
            raise StructureInvalid("eta o phi != 0")
        # eta(xi) = 1
        pairing = zero
        for i in range(dim):
            pairing = pairing + eta.get((i,)) * xi.get((i,))
        if pairing != Scalar.const(syms, 1):
            raise StructureInvalid("eta(xi) != 1")
        # phi^2 = -I + xi (x) eta
        expect = Tensor.build(
            dim, (UPPER, LOWER), syms,
            lambda idx: xi.get((idx[0],)) * eta.get((idx[1],))
            - (Scalar.const(syms, 1) if idx[0] == idx[1] else zero))
        if endo_compose(phi, phi) != expect:
            raise StructureInvalid("phi^2 != -I + eta (x) xi")
        # metric compatibility
        gff = _pullback(frame, phi)
        ee = _form_square(frame, eta)
        sign = -1 if flavor == B_METRIC else 1
        if gff != frame.g.scale(sign) + ee:
            raise StructureInvalid(
                "g(phi x, phi y) != %s g(x,y) + eta(x) eta(y)"
                % ("-" if sign < 0 else "+"))
        # eta is the metric dual of (sign) xi
        flat = Tensor.build(
            dim, (LOWER,), syms,
            lambda idx: _dot_vec(frame, xi, idx[0]))
        if flat != eta.scale(sign * (-1)) and flat != eta.scale(1 if sign < 0 else -1):
            raise StructureInvalid("eta is not the metric dual of xi")
        self.frame = frame
        self.phi = phi
        self.xi = xi
        self.eta = eta
        self.flavor = flavor

    @property
    def dim(self):
        return self.frame.dim

    def require_b_metric(self):
        if self.flavor != B_METRIC:
            raise FlavorMismatch("operation needs the B-metric flavor")


def _dot_vec(frame, vec, j):
    total = frame.zero()
    for m in range(frame.dim):
        v = vec.get((m,))
        if not v.is_zero():
            total = total + v * frame.g.get((m, j))
    return total


def _pullback(frame, endo):
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


def _form_square(frame, eta):
    return Tensor.build(frame.dim, (LOWER, LOWER), frame.syms,
                        lambda idx: eta.get((idx[0],)) * eta.get((idx[1],)))


def _mixed_metric(frame, phi):
    """The symmetric tensor g(x, phi y)."""
    dim = frame.dim

    def fn(idx):
        i, j = idx
        total = frame.zero()
        for m in range(dim):
            p = phi.get((m, j))
            if not p.is_zero():
                total = total + frame.g.get((i, m)) * p
        return total

    return Tensor.build(dim, (LOWER, LOWER), frame.syms, fn)


def twin_b_metric_tensor(structure):
    """g~(x,y) = g(x, phi y) + eta(x) eta(y)."""
    frame = structure.frame
    return (_mixed_metric(frame, structure.phi)
            + _form_square(frame, structure.eta))


def contract_form(t, vec, slot):
    """Insert a fixed vector into one lower slot of t."""
    dim = t.dim
    zero = Scalar.const(t.syms, 0)

    def fn(idx):
        total = zero
        for m in range(dim):
            v = vec.get((m,))
            if not v.is_zero():
                total = total + v * t.get(idx[:slot] + (m,) + idx[slot:])
        return total

    variance = t.variance[:slot] + t.variance[slot + 1:]
    return Tensor.build(dim, variance, t.syms, fn)


@dataclass(frozen=True)
class ContactBAnalysis:
    F: Tensor
    theta: Tensor
    theta_star: Tensor
    omega: Tensor
    components: tuple | None      # the eleven F^i (B-metric flavor)
    N: Tensor
    N_hat: Tensor
    nabla_xi: Tensor              # (1,1), order (l, i) for nabla_i xi
    conn: Connection = field(compare=False)


def analyze_contactb(structure):
    frame = structure.frame
    phi, xi, eta = structure.phi, structure.xi, structure.eta
    conn = levi_civita(frame)
    f3 = fundamental_tensor(frame, conn, phi)
    dim = frame.dim

    sign = -1 if structure.flavor == METRIC else 1
    # F(x,y,z) = sign F(x,z,y)
    if reorder(f3, (0, 2, 1)).scale(sign) != f3:
        raise InternalInvariantViolation("F symmetry in (y,z) fails")
    # F(x,y,z) = sign F(x,phi y, phi z) + eta(y) F(x,xi,z) + eta(z) F(x,y,xi)
    f_xi_mid = contract_form(f3, xi, 1)    # F(x, xi, z)
    f_xi_end = contract_form(f3, xi, 2)    # F(x, y, xi)
    prop = (j_insert(j_insert(f3, phi, 1), phi, 2).scale(sign)
            + _eta_times(frame, eta, f_xi_mid, 1)
            + _eta_times(frame, eta, f_xi_end, 2))
    if prop != f3:
        raise InternalInvariantViolation("F phi-phi property fails")

    theta = one_form_trace(frame, f3)
    theta_star = metric_trace(frame, j_insert(f3, phi, 1), 0, 1)
    omega = contract_form(contract_form(f3, xi, 0), xi, 0)
    if not contract_form(omega, xi, 0).get(()).is_zero():
        raise InternalInvariantViolation("omega(xi) != 0")

    nabla_xi = conn.nabla_vector(xi)
    # (nabla_x eta)(y) = sign' F(x, phi y, xi), lowered covariant derivative
    nabla_eta = conn.nabla_lower(eta)
    rhs = contract_form(j_insert(f3, phi, 1), xi, 2)
    if structure.flavor == B_METRIC:
        if nabla_eta != rhs:
            raise InternalInvariantViolation("nabla eta identity fails")
        # theta* o phi = -theta o phi^2
        phi2 = endo_compose(phi, phi)
        if form_after(theta_star, phi) != -form_after(theta, phi2):
            raise InternalInvariantViolation("Lee-form chain fails")
    else:
        if nabla_eta != -rhs:
            raise InternalInvariantViolation("nabla eta identity fails")

    if structure.flavor == B_METRIC:
        n3, nhat3 = _nijenhuis_pair_b(frame, f3, phi, xi, eta)
        comps = f_components(structure, f3, theta, theta_star)
        total = comps[0]
        for c in comps[1:]:
            total = total + c
        if total != f3:
            raise InternalInvariantViolation("sum of F^i components != F")
        _check_reconstruction(structure, f3, n3, nhat3)
        _check_divergences(structure, conn, theta, theta_star, nabla_eta)
    else:
        n3, nhat3 = _nijenhuis_pair_metric(frame, f3, phi, xi, eta)
        comps = None

    return ContactBAnalysis(
        F=f3, theta=theta, theta_star=theta_star, omega=omega,
        components=comps, N=n3, N_hat=nhat3, nabla_xi=nabla_xi, conn=conn)


def _eta_times(frame, eta, t2, slot):
    """eta inserted back as a factor: slot=1 -> eta(y) T(x,z) etc."""
    dim = frame.dim

    def fn(idx):
        i, j, k = idx
        if slot == 1:
            return eta.get((j,)) * t2.get((i, k))
        return eta.get((k,)) * t2.get((i, j))

    return Tensor.build(dim, (LOWER,) * 3, frame.syms, fn)


def _nijenhuis_pair_b(frame, f3, phi, xi, eta):
    """N and N-hat of the B-metric structure, through F."""
    f_fx = j_insert(f3, phi, 0)          # F(phi x, y, z)
    f_fz = j_insert(f3, phi, 2)          # F(x, y, phi z)
    f_fy_xi = contract_form(j_insert(f3, phi, 1), xi, 2)   # F(x, phi y, xi)
    sw = (1, 0, 2)
    n3 = (f_fx - f_fz - reorder(f_fx, sw) + reorder(f_fz, sw)
          + _eta_times(frame, eta, f_fy_xi - reorder(f_fy_xi, (1, 0)), 2))
    nhat3 = (f_fx - f_fz + reorder(f_fx, sw) - reorder(f_fz, sw)
             + _eta_times(frame, eta,
                              f_fy_xi + reorder(f_fy_xi, (1, 0)), 2))
    return n3, nhat3


def _nijenhuis_pair_metric(frame, f3, phi, xi, eta):
    """N_1 and N-hat_1 of the metric flavor, through F_1."""
    f_fx = j_insert(f3, phi, 0)
    f_fz = j_insert(f3, phi, 2)
    f_fy_xi = contract_form(j_insert(f3, phi, 1), xi, 2)
    sw = (1, 0, 2)
    n3 = (f_fx - reorder(f_fx, sw) + f_fz - reorder(f_fz, sw)
          + _eta_times(frame, eta,
                           f_fy_xi - reorder(f_fy_xi, (1, 0)), 2))
    nhat3 = (f_fx + reorder(f_fx, sw) + f_fz + reorder(f_fz, sw)
             + _eta_times(frame, eta,
                              f_fy_xi + reorder(f_fy_xi, (1, 0)), 2))
    return n3, nhat3


def _check_reconstruction(structure, f3, n3, nhat3):
    """F from the Nijenhuis pair (B-metric flavor)."""
    frame = structure.frame
    phi, xi, eta = structure.phi, structure.xi, structure.eta
    n_f = j_insert(n3, phi, 0)
    nh_f = j_insert(nhat3, phi, 0)
    main = (n_f + reorder(n_f, (0, 2, 1)) + nh_f
            + reorder(nh_f, (0, 2, 1))).scale(Fraction(-1, 4))
    n_xi = contract_form(n3, xi, 0)       # N(xi, y, z)
    nh_xi = contract_form(nhat3, xi, 0)
    n_xi_f = j_insert(n_xi, phi, 1)       # N(xi, y, phi z)
    nh_xi_f = j_insert(nh_xi, phi, 1)
    # N^(xi, xi, phi y): contract xi into the middle slot, compose with phi
    nh_xixi_f = form_after(contract_form(nh_xi, xi, 0), phi)
    dim = frame.dim

    def corr_fn(idx):
        i, j, k = idx
        inner = (n_xi_f.get((j, k)) + nh_xi_f.get((j, k))
                 + eta.get((k,)) * nh_xixi_f.get((j,)))
        return eta.get((i,)) * inner

    corr = Tensor.build(dim, (LOWER,) * 3, frame.syms,
                        lambda idx: corr_fn(idx)).scale(Fraction(1, 2))
    if main + corr != f3:
        raise InternalInvariantViolation(
            "F is not reproduced by the contact Nijenhuis pair")


def _check_divergences(structure, conn, theta, theta_star, nabla_eta):
    frame = structure.frame
    twin = twin_metric_data(structure)
    div = metric_trace(frame, nabla_eta, 0, 1)
    div_star = metric_trace(frame, nabla_eta, 0, 1, metric=twin)
    theta_xi = contract_form(theta, structure.xi, 0).get(())
    theta_star_xi = contract_form(theta_star, structure.xi, 0).get(())
    if theta_xi != div_star.get(()) or theta_star_xi != div.get(()):
        raise InternalInvariantViolation("divergence identities fail")


def twin_metric_data(structure):
    try:
        return MetricData.from_tensor(twin_b_metric_tensor(structure))
    except MetricDegenerate as err:
        raise TwinMetricDegenerate(str(err)) from err


# -- the eleven component projections ------------------------------------------

def f_components(structure, f3, theta, theta_star):
    """F^1 ... F^11 of the B-metric flavor."""
    frame = structure.frame
    phi, xi, eta = structure.phi, structure.xi, structure.eta
    dim = frame.dim
    n2 = dim - 1                      # 2n
    phi2 = endo_compose(phi, phi)
    g_ff = _pullback(frame, phi)      # g(phi x, phi y)
    g_xf = _mixed_metric(frame, phi)  # g(x, phi y)
    th_f = form_after(theta, phi)
    th_f2 = form_after(theta, phi2)

    def pair(metric2, form):
        return _pair_term(metric2, form)

    f1 = (pair(g_ff, th_f2) + pair(g_xf, th_f)
          + reorder(pair(g_ff, th_f2), (0, 2, 1))
          + reorder(pair(g_xf, th_f), (0, 2, 1))).scale(Fraction(1, n2))

    def ins(t, marks):
        out = t
        for slot, endo in marks:
            out = j_insert(out, endo, slot)
        return out

    fff = ins(f3, [(0, phi2), (1, phi2), (2, phi2)])   # F(f2x, f2y, f2z)
    f_b = ins(f3, [(0, phi), (2, phi)])                # F(fx, y, fz) base
    # F(phi y, phi^2 z, phi x): build from F with marks then reorder
    t1 = reorder(fff, (1, 2, 0))                       # F(f2y, f2z, f2x)
    t2 = reorder(ins(f3, [(0, phi), (1, phi2), (2, phi)]), (1, 2, 0))
    # t2 = F(phi y, phi^2 z, phi x)
    t3 = reorder(fff, (0, 2, 1))                       # F(f2x, f2z, f2y)
    t4 = reorder(fff, (2, 1, 0))                       # F(f2z, f2y, f2x)
    t5 = reorder(ins(f3, [(0, phi), (1, phi2), (2, phi)]), (2, 1, 0))
    # t5 = F(phi z, phi^2 y, phi x)
    f2 = (fff + t1 - t2 + t3 + t4 - t5).scale(Fraction(-1, 4)) - f1
    f3c = (fff - t1 + t2 + t3 - t4 + t5).scale(Fraction(-1, 4))

    theta_xi = contract_form(theta, xi, 0).get(())
    theta_star_xi = contract_form(theta_star, xi, 0).get(())
    ee_gff = pair(g_ff, eta) + reorder(pair(g_ff, eta), (0, 2, 1))
    ee_gxf = pair(g_xf, eta) + reorder(pair(g_xf, eta), (0, 2, 1))
    f4 = _scale_by(ee_gff, theta_xi).scale(Fraction(-1, n2))
    f5 = _scale_by(ee_gxf, theta_star_xi).scale(Fraction(-1, n2))

    fxi = contract_form(f3, xi, 2)        # F(., ., xi) as (0,2)
    a_22 = ins2(fxi, phi2, phi2)          # F(f2 ., f2 ., xi)
    b_11 = ins2(fxi, phi, phi)            # F(f ., f ., xi)
    sym_a = a_22 + reorder2(a_22)
    sym_b = b_11 + reorder2(b_11)
    alt_a = a_22 - reorder2(a_22)
    alt_b = b_11 - reorder2(b_11)

    def eta_block(t2t):
        """t2t(x,y) eta(z) + t2t(x,z) eta(y)."""
        def fn(idx):
            i, j, k = idx
            return (t2t.get((i, j)) * eta.get((k,))
                    + t2t.get((i, k)) * eta.get((j,)))
        return Tensor.build(dim, (LOWER,) * 3, frame.syms, fn)

    f6 = (-f4 - f5 + eta_block((sym_a - sym_b).scale(Fraction(1, 4))))
    f7 = eta_block((alt_a - alt_b).scale(Fraction(1, 4)))
    f8 = eta_block((sym_a + sym_b).scale(Fraction(1, 4)))
    f9 = eta_block((alt_a + alt_b).scale(Fraction(1, 4)))

    f_xi0 = contract_form(f3, xi, 0)      # F(xi, ., .)
    c_22 = ins2(f_xi0, phi2, phi2)        # F(xi, f2 y, f2 z)

    def f10_fn(idx):
        i, j, k = idx
        return eta.get((i,)) * c_22.get((j, k))

    f10 = Tensor.build(dim, (LOWER,) * 3, frame.syms, f10_fn)

    om_f2 = form_after(contract_form(f_xi0, xi, 0), phi2)  # F(xi,xi,f2 z)

    def f11_fn(idx):
        i, j, k = idx
        return -eta.get((i,)) * (eta.get((j,)) * om_f2.get((k,))
                                 + eta.get((k,)) * om_f2.get((j,)))

    f11 = Tensor.build(dim, (LOWER,) * 3, frame.syms, f11_fn)
    return (f1, f2, f3c, f4, f5, f6, f7, f8, f9, f10, f11)


def _scale_by(t, scalar):
    return Tensor(t.dim, t.variance, t.syms, [c * scalar for c in t.comps])


def ins2(t2, e0, e1):
    return j_insert(j_insert(t2, e0, 0), e1, 1)


def reorder2(t2):
    return t2.permute([1, 0])


# -- classification ---------------------------------------------------------------

F_CLASS_NAMES = tuple(f"F{i}" for i in range(1, 12))
P_CLASS_NAMES = tuple(f"P{i}" for i in range(1, 13))


@dataclass(frozen=True)
class ContactClassReport:
    flavor: str
    verdicts: dict
    witnesses: dict
    membership: tuple | None     # indices i with F^i != 0 (B-metric flavor)
    minimal: str
    note: str = ""


def _eta_wedge_pair(frame, eta, t2, minus=True):
    """t2(x,y) eta(z) - t2(x,z) eta(y)  (metric-flavor shape)."""
    def fn(idx):
        i, j, k = idx
        second = t2.get((i, k)) * eta.get((j,))
        return (t2.get((i, j)) * eta.get((k,))
                - second if minus else t2.get((i, j)) * eta.get((k,)) + second)

    return Tensor.build(frame.dim, (LOWER,) * 3, frame.syms, fn)


def _cyc3(t):
    return t + reorder(t, (1, 2, 0)) + reorder(t, (2, 0, 1))


def classify_contactb(structure, analysis):
    frame = structure.frame
    phi, xi, eta = structure.phi, structure.xi, structure.eta
    f3, theta, theta_star = analysis.F, analysis.theta, analysis.theta_star
    if structure.flavor == B_METRIC:
        return _classify_b(structure, analysis)
    return _classify_metric(structure, analysis)


def _classify_b(structure, analysis):
    frame = structure.frame
    phi, xi, eta = structure.phi, structure.xi, structure.eta
    f3, theta, theta_star = analysis.F, analysis.theta, analysis.theta_star
    comps = analysis.components
    membership = tuple(i + 1 for i, c in enumerate(comps)
                       if not c.is_zero())

    f_xi0 = contract_form(f3, xi, 0)
    f_ximid = contract_form(f3, xi, 1)
    fxi = contract_form(f3, xi, 2)
    b_11 = ins2(fxi, phi, phi)
    sfj = _cyc3(j_insert(f3, phi, 2))
    sf = _cyc3(f3)
    eta_shape = _eta_wedge_pair(frame, eta, fxi, minus=False)

    conditions = {
        "F1": f3 - comps[0],
        "F2": [f_xi0, f_ximid, sfj, theta],
        "F3": [f_xi0, f_ximid, sf],
        "F4": f3 - comps[3],
        "F5": f3 - comps[4],
        "F6": [f3 - eta_shape, fxi - reorder2(fxi), fxi + b_11,
               theta, theta_star],
        "F7": [f3 - eta_shape, fxi + reorder2(fxi), fxi + b_11],
        "F8": [f3 - eta_shape, fxi - reorder2(fxi), fxi - b_11],
        "F9": [f3 - eta_shape, fxi + reorder2(fxi), fxi - b_11],
        "F10": f3 - _scale_eta_left(frame, eta, ins2(f_xi0, phi, phi)),
        "F11": f3 - comps[10],
    }
    verdicts, witnesses = {}, {}
    for name in F_CLASS_NAMES:
        cond = conditions[name]
        tensors = cond if isinstance(cond, list) else [cond]
        wit = None
        for t in tensors:
            wit = first_nonzero(t)
            if wit is not None:
                break
        verdicts[name] = wit is None
        if wit is not None:
            witnesses[name] = wit
    verdicts["F0"] = f3.is_zero()
    minimal = "F0" if not membership else "+".join(
        f"F{i}" for i in membership)
    return ContactClassReport(
        flavor=B_METRIC, verdicts=verdicts, witnesses=witnesses,
        membership=membership, minimal=minimal,
        note="membership by nonzero components; symbolic parameters are "
             "nonzero when not identically zero")


def _scale_eta_left(frame, eta, t2):
    def fn(idx):
        i, j, k = idx
        return eta.get((i,)) * t2.get((j, k))

    return Tensor.build(frame.dim, (LOWER,) * 3, frame.syms, fn)


def _classify_metric(structure, analysis):
    frame = structure.frame
    phi, xi, eta = structure.phi, structure.xi, structure.eta
    f3, theta, theta_star = analysis.F, analysis.theta, analysis.theta_star
    dim = frame.dim
    phi2 = endo_compose(phi, phi)
    omega = analysis.omega

    fxi = contract_form(f3, xi, 2)          # F(x, y, xi)
    f_xi0 = contract_form(f3, xi, 0)        # F(xi, y, z)
    b_11 = ins2(fxi, phi, phi)
    eta_shape = _eta_wedge_pair(frame, eta, fxi, minus=True)
    theta_xi = contract_form(theta, xi, 0).get(())
    theta_star_xi = contract_form(theta_star, xi, 0).get(())

    def pair_minus(m2, form):
        t = _pair_term(m2, form)
        return t - reorder(t, (0, 2, 1))

    g_xf = _mixed_metric(frame, phi)
    gfx_y = reorder2(g_xf)                 # g(phi x, y)
    p1_shape = Tensor.build(
        dim, (LOWER,) * 3, frame.syms,
        lambda idx: eta.get((idx[0],)) * (
            eta.get((idx[1],)) * omega.get((idx[2],))
            - eta.get((idx[2],)) * omega.get((idx[1],))))
    p2_shape = _scale_by(pair_minus(frame.g, eta),
                         theta_xi).scale(Fraction(1, dim - 1))
    p3_shape = _scale_by(pair_minus(gfx_y, eta),
                         theta_star_xi).scale(Fraction(1, dim - 1))
    g_ff = _pullback(frame, phi)
    th_f = form_after(theta, phi)
    th_f2 = form_after(theta, phi2)
    p9_shape = (pair_minus(gfx_y, th_f)
                - pair_minus(_scale_by(g_ff, Scalar.const(frame.syms, 1)),
                             th_f2)).scale(Fraction(1, dim - 3))

    conditions = {
        "P1": f3 - p1_shape,
        "P2": f3 - p2_shape,
        "P3": f3 - p3_shape,
        "P4": [f3 - eta_shape, fxi - reorder2(fxi), fxi - b_11, theta],
        "P5": [f3 - eta_shape, fxi + reorder2(fxi), fxi - b_11, theta_star],
        "P6": [f3 - eta_shape, fxi - reorder2(fxi), fxi + b_11],
        "P7": [f3 - eta_shape, fxi + reorder2(fxi), fxi + b_11],
        "P8": f3 + _scale_eta_left(frame, eta, ins2(f_xi0, phi, phi)),
        "P9": f3 - p9_shape,
        "P10": [f_xi0, fxi,
                f3 - j_insert(j_insert(f3, phi, 0), phi, 1), theta],
        "P11": [f_xi0, fxi, f3 + reorder(f3, (1, 0, 2))],
        "P12": [f_xi0, fxi, _cyc3(f3)],
    }
    verdicts, witnesses = {}, {}
    for name in P_CLASS_NAMES:
        cond = conditions[name]
        tensors = cond if isinstance(cond, list) else [cond]
        wit = None
        for t in tensors:
            wit = first_nonzero(t)
            if wit is not None:
                break
        verdicts[name] = wit is None
        if wit is not None:
            witnesses[name] = wit
    verdicts["P0"] = f3.is_zero()
    sat = [n for n in P_CLASS_NAMES if verdicts[n]]
    minimal = "P0" if verdicts["P0"] else ("|".join(sat) if sat else "mixed")
    return ContactClassReport(
        flavor=METRIC, verdicts=verdicts, witnesses=witnesses,
        membership=None, minimal=minimal,
        note="definitional-condition booleans only; the component "
             "projections of this classification are external")


# -- the phi-connections -----------------------------------------------------------


@dataclass(frozen=True)
class PhiConnectionsReport:
    phi_b: Connection
    phi_canonical: Connection
    phi_kt: Connection | None
    kt_absent_witness: tuple | None
    torsion_b: Tensor
    torsion_canonical: Tensor
    torsion_kt: Tensor | None
    torsion_forms: dict
    coincide_b_canonical: bool


def _check_natural_contact(structure, conn, what):
    frame = structure.frame
    checks = (
        conn.nabla_endo(structure.phi).is_zero(),
        conn.nabla_vector(structure.xi).is_zero(),
        conn.nabla_lower(structure.eta).is_zero(),
        conn.nabla_lower(frame.g).is_zero(),
    )
    if not all(checks):
        raise InternalInvariantViolation(f"{what} is not natural: {checks}")


def torsion_forms(structure, t3):
    """t, t* and t-hat of a torsion tensor."""
    frame = structure.frame
    t_form = metric_trace(frame, t3, 1, 2)
    t_star = metric_trace(frame, j_insert(t3, structure.phi, 2), 1, 2)
    t_hat = contract_form(contract_form(t3, structure.xi, 1),
                          structure.xi, 1)
    return t_form, t_star, t_hat


def phi_connections(structure, analysis=None):
    structure.require_b_metric()
    frame = structure.frame
    phi, xi, eta = structure.phi, structure.xi, structure.eta
    if analysis is None:
        analysis = analyze_contactb(structure)
    f3 = analysis.F
    conn = analysis.conn
    n3 = analysis.N

    # phi-B potential: Q'(x,y,z) = {F(x,phi y,z) + eta(z) F(x,phi y,xi)
    #                               - 2 eta(y) F(x,phi z,xi)} / 2
    f_fy = j_insert(f3, phi, 1)
    f_fy_xi = contract_form(f_fy, xi, 2)

    def q_b_fn(idx):
        i, j, k = idx
        return (f_fy.get((i, j, k)) + eta.get((k,)) * f_fy_xi.get((i, j))
                - eta.get((j,)) * f_fy_xi.get((i, k)).scale(2)
                ).scale(Fraction(1, 2))

    q_b = Tensor.build(frame.dim, (LOWER,) * 3, frame.syms, q_b_fn)
    phi_b = _conn_from_potential(frame, conn, q_b, "phi_b")
    _check_natural_contact(structure, phi_b, "phi-B connection")
    _, t_b = torsion_of(frame, phi_b)

    # torsion through F, as an independent route
    phi2 = endo_compose(phi, phi)
    f_fy_f2z = j_insert(f_fy, phi2, 2)
    f_fz_xi = contract_form(j_insert(f3, phi, 2), xi, 2)
    # careful: F(x, phi z, xi) is f_fy_xi with (x, z) slots
    t_b_expected = Tensor.build(
        frame.dim, (LOWER,) * 3, frame.syms,
        lambda idx: _phib_torsion_term(idx, f_fy_f2z, f_fy_xi, eta))
    if t_b != t_b_expected:
        raise InternalInvariantViolation("phi-B torsion formula fails")

    t_form, t_star, t_hat = torsion_forms(structure, t_b)
    theta, theta_star = analysis.theta, analysis.theta_star
    theta_xi = contract_form(theta, xi, 0).get(())
    theta_star_xi = contract_form(theta_star, xi, 0).get(())
    if t_form != (theta_star
                  + _scale_by(eta, theta_star_xi)).scale(Fraction(1, 2)):
        raise InternalInvariantViolation("t' != (theta* + theta*(xi) eta)/2")
    if t_star != (theta + _scale_by(eta, theta_xi)).scale(Fraction(-1, 2)):
        raise InternalInvariantViolation("t'* != -(theta + theta(xi) eta)/2")
    if t_hat != -form_after(analysis.omega, phi):
        raise InternalInvariantViolation("t-hat' != -omega o phi")

    # phi-canonical: Q'' = Q' - {N(f2z, f2y, f2x) + 2 eta(x) N(fz, fy, xi)}/8
    n_222 = reorder(_ins3(n3, phi2, phi2, phi2), (2, 1, 0))
    n_ff_xi = ins2(contract_form(n3, xi, 2), phi, phi)   # N(f a, f b, xi)

    def q_can_fn(idx):
        i, j, k = idx
        return (q_b.get((i, j, k))
                - (n_222.get((i, j, k))
                   + eta.get((i,)) * n_ff_xi.get((k, j)).scale(2)
                   ).scale(Fraction(1, 8)))

    q_can = Tensor.build(frame.dim, (LOWER,) * 3, frame.syms, q_can_fn)
    phi_can = _conn_from_potential(frame, conn, q_can, "phi_canonical")
    _check_natural_contact(structure, phi_can, "phi-canonical connection")
    _, t_can = torsion_of(frame, phi_can)

    # (T-can-F): T'' = T' - {N(f2z,f2y,f2x) - N(f2z,f2x,f2y)}/8
    #                - {eta(x) N(fz,fy,xi) - eta(y) N(fz,fx,xi)}/4
    n222_sw = reorder(_ins3(n3, phi2, phi2, phi2), (2, 0, 1))

    def t_can_fn(idx):
        i, j, k = idx
        return (t_b.get((i, j, k))
                - (n_222.get((i, j, k)) - n222_sw.get((i, j, k))
                   ).scale(Fraction(1, 8))
                - (eta.get((i,)) * n_ff_xi.get((k, j))
                   - eta.get((j,)) * n_ff_xi.get((k, i))
                   ).scale(Fraction(1, 4)))

    if t_can != Tensor.build(frame.dim, (LOWER,) * 3, frame.syms, t_can_fn):
        raise InternalInvariantViolation("phi-canonical torsion formula fails")
    _check_canonical_identity(structure, t_can)
    forms_can = torsion_forms(structure, t_can)
    if forms_can != (t_form, t_star, t_hat):
        raise InternalInvariantViolation(
            "phi-canonical torsion forms differ from the phi-B ones")

    # coincidence on U0 <-> N(phi ., phi .) = 0
    u0 = j_insert(j_insert(n3, phi, 0), phi, 1).is_zero()
    coincide = phi_b.gamma == phi_can.gamma
    if u0 != coincide:
        raise InternalInvariantViolation("U0 test disagrees with D' == D''")

    # phi-KT exists exactly when N-hat vanishes
    kt = t_kt = None
    wit = first_nonzero(analysis.N_hat)
    if wit is None:
        f_fz = j_insert(f3, phi, 2)
        # sum term: F(x,y,fz) - 3 eta(x) F(y, fz, xi)
        def kt_term(idx):
            i, j, k = idx
            return (f_fz.get((i, j, k))
                    - eta.get((i,)) * f_fy_xi.get((j, k)).scale(3))

        raw = Tensor.build(frame.dim, (LOWER,) * 3, frame.syms, kt_term)
        t_kt = _cyc3(raw).scale(Fraction(-1, 2))
        kt = connection_from_torsion(frame, conn, t_kt, "phi_kt")
        _check_natural_contact(structure, kt, "phi-KT connection")
        if (t_kt != -reorder(t_kt, (1, 0, 2))
                or t_kt != -reorder(t_kt, (0, 2, 1))):
            raise InternalInvariantViolation("phi-KT torsion is not a 3-form")
        kt_forms = torsion_forms(structure, t_kt)
        if not all(f.is_zero() for f in kt_forms):
            raise InternalInvariantViolation("phi-KT torsion forms != 0")
        avg = (phi_b.gamma.scale(2) - phi_can.gamma - kt.gamma)
        if not avg.is_zero():
            raise InternalInvariantViolation(
                "phi-B != average of phi-canonical and phi-KT")

    return PhiConnectionsReport(
        phi_b=phi_b,
        phi_canonical=phi_can,
        phi_kt=kt,
        kt_absent_witness=wit,
        torsion_b=t_b,
        torsion_canonical=t_can,
        torsion_kt=t_kt,
        torsion_forms={"t": t_form, "t_star": t_star, "t_hat": t_hat},
        coincide_b_canonical=coincide,
    )


def _ins3(t3, e0, e1, e2):
    return j_insert(j_insert(j_insert(t3, e0, 0), e1, 1), e2, 2)


def _phib_torsion_term(idx, f_fy_f2z, f_fy_xi, eta):
    i, j, k = idx
    return (f_fy_f2z.get((i, j, k)).scale(Fraction(-1, 2))
            + f_fy_f2z.get((j, i, k)).scale(Fraction(1, 2))
            + eta.get((i,)) * f_fy_xi.get((j, k))
            - eta.get((j,)) * f_fy_xi.get((i, k))
            + eta.get((k,)) * (f_fy_xi.get((i, j)) - f_fy_xi.get((j, i))))


def _conn_from_potential(frame, base, q3, label):
    dim = frame.dim

    def fn(idx):
        l, i, j = idx
        total = base.gamma.get((l, i, j))
        for k in range(dim):
            gi = frame.g_inv.get((l, k))
            if not gi.is_zero():
                total = total + gi * q3.get((i, j, k))
        return total

    return Connection(Tensor.build(dim, (UPPER, LOWER, LOWER), frame.syms,
                                   fn), label)


def _check_canonical_identity(structure, t3):
    """The defining identity of the phi-canonical type."""
    phi, xi, eta = structure.phi, structure.xi, structure.eta
    frame = structure.frame
    tff = j_insert(j_insert(t3, phi, 1), phi, 2)     # T(x, fy, fz)
    base = t3 - tff - reorder(t3, (0, 2, 1)) + reorder(tff, (0, 2, 1))
    t_xi0 = contract_form(t3, xi, 0)                 # T(xi, y, z)
    tff_xi0 = contract_form(tff, xi, 0)              # T(xi, fy, fz)
    inner = (t_xi0 - tff_xi0 - reorder2(t_xi0) + reorder2(tff_xi0))
    t_ximid = contract_form(t3, xi, 1)               # T(x, xi, z)
    t_xiend = contract_form(t3, xi, 2)               # T(x, y, xi)
    t_hat = contract_form(t_ximid, xi, 1)            # T(x, xi, xi)

    def fn(idx):
        i, j, k = idx
        total = base.get((i, j, k)) - eta.get((i,)) * inner.get((j, k))
        total = total - eta.get((j,)) * (
            t_ximid.get((i, k)) - t_xiend.get((i, k))
            - eta.get((i,)) * t_hat.get((k,)))
        total = total + eta.get((k,)) * (
            t_ximid.get((i, j)) - t_xiend.get((i, j))
            - eta.get((i,)) * t_hat.get((j,)))
        return total

    out = Tensor.build(frame.dim, (LOWER,) * 3, frame.syms, fn)
    if not out.is_zero():
        raise InternalInvariantViolation("phi-canonical identity fails")


# -- fifteen-subspace torsion decomposition -------------------------------------

SUBSPACE_NAMES = tuple(f"T{i}" for i in range(1, 16))


@dataclass(frozen=True)
class TorsionDecomposition:
    components: tuple            # fifteen (0,3)-tensors, T1 ... T15
    class_label: str             # "C0" or "C3+C6" style
    indices: tuple               # sorted indices with nonzero component
    note: str


def _projector_terms(structure, t3):
    """The eleven orthogonal projections p_{i,j}(T)."""
    frame = structure.frame
    phi, xi, eta = structure.phi, structure.xi, structure.eta
    dim = frame.dim
    phi2 = endo_compose(phi, phi)

    def mk(marks, spec=(0, 1, 2)):
        out = t3
        for slot, endo in marks:
            out = j_insert(out, endo, slot)
        return out if spec == (0, 1, 2) else reorder(out, spec)

    t_222 = mk([(0, phi2), (1, phi2), (2, phi2)])
    t_112 = mk([(0, phi), (1, phi), (2, phi2)])
    t_121 = mk([(0, phi), (1, phi2), (2, phi)])
    t_211 = mk([(0, phi2), (1, phi), (2, phi)])
    p11 = (t_222 - t_112 - t_121 - t_211).scale(Fraction(-1, 4))
    p12 = (t_222 - t_112 + t_121 + t_211).scale(Fraction(-1, 4))

    bracket = (mk([(0, phi2), (1, phi2), (2, phi2)], (2, 0, 1))
               + mk([(0, phi2), (1, phi), (2, phi)], (2, 0, 1))
               + mk([(0, phi), (1, phi), (2, phi2)], (2, 0, 1))
               - mk([(0, phi), (1, phi2), (2, phi)], (2, 0, 1))
               - mk([(0, phi2), (1, phi2), (2, phi2)], (2, 1, 0))
               - mk([(0, phi2), (1, phi), (2, phi)], (2, 1, 0))
               - mk([(0, phi), (1, phi), (2, phi2)], (2, 1, 0))
               + mk([(0, phi), (1, phi2), (2, phi)], (2, 1, 0)))
    head = (t_222 + t_112).scale(Fraction(-1, 4))
    p13 = head + bracket.scale(Fraction(1, 8))
    p14 = head - bracket.scale(Fraction(1, 8))

    t_xi = contract_form(t3, xi, 2)            # T(., ., xi)
    a_22 = ins2(t_xi, phi2, phi2)
    b_11 = ins2(t_xi, phi, phi)

    def eta_right(t2t):
        def fn(idx):
            i, j, k = idx
            return eta.get((k,)) * t2t.get((i, j))
        return Tensor.build(dim, (LOWER,) * 3, frame.syms, fn)

    p21 = eta_right((a_22 - b_11).scale(Fraction(1, 2)))
    p22 = eta_right((a_22 + b_11).scale(Fraction(1, 2)))

    t_0 = contract_form(t3, xi, 0)             # T(xi, ., .)
    c_22 = ins2(t_0, phi2, phi2)
    c_11 = ins2(t_0, phi, phi)
    a31 = c_22 + reorder2(c_22) - c_11 - reorder2(c_11)
    a32 = c_22 - reorder2(c_22) - c_11 + reorder2(c_11)
    a33 = c_22 + reorder2(c_22) + c_11 + reorder2(c_11)
    a34 = c_22 - reorder2(c_22) + c_11 - reorder2(c_11)

    def eta_left_pair(a2):
        def fn(idx):
            i, j, k = idx
            return (eta.get((i,)) * a2.get((j, k))
                    - eta.get((j,)) * a2.get((i, k)))
        return Tensor.build(dim, (LOWER,) * 3, frame.syms,
                            fn).scale(Fraction(1, 4))

    p31, p32, p33, p34 = (eta_left_pair(a) for a in (a31, a32, a33, a34))

    t_hat = contract_form(contract_form(t3, xi, 1), xi, 1)

    def p41_fn(idx):
        i, j, k = idx
        return eta.get((k,)) * (eta.get((j,)) * t_hat.get((i,))
                                - eta.get((i,)) * t_hat.get((j,)))

    p41 = Tensor.build(dim, (LOWER,) * 3, frame.syms, p41_fn)
    return {
        (1, 1): p11, (1, 2): p12, (1, 3): p13, (1, 4): p14,
        (2, 1): p21, (2, 2): p22,
        (3, 1): p31, (3, 2): p32, (3, 3): p33, (3, 4): p34,
        (4, 1): p41,
    }


def _vector_model(structure, form, kind):
    """The pure-trace model elements of P_{1,1}, P_{1,3} and P_{3,1}.

    kind "p11"/"p13": generated by a 1-form w as combinations of
    w(phi^a x) g(phi^b y, z) - (x <-> y); kind "p31_t"/"p31_tstar": generated
    by the scalar w = t(xi) against eta ^ g(phi^a ., .)."""
    frame = structure.frame
    phi, xi, eta = structure.phi, structure.xi, structure.eta
    dim = frame.dim
    phi2 = endo_compose(phi, phi)
    g_f2 = _pullback_mixed(frame, phi2)      # g(phi^2 a, b)
    g_f = _pullback_mixed(frame, phi)        # g(phi a, b)
    n2 = dim - 1

    if kind in ("p11", "p13"):
        w2 = form_after(form, phi2)
        w1 = form_after(form, phi)
        sign = 1 if kind == "p13" else -1
        # the trace of the model is w for p13 and ((n-1)/n) w for p11;
        # at n = 1 the trace part of P_{1,1} is empty
        if kind == "p11":
            if n2 == 2:
                return Tensor.zeros(dim, (LOWER,) * 3, frame.syms)
            factor = Fraction(1, n2 - 2)
        else:
            factor = Fraction(1, n2)

        def fn(idx):
            i, j, k = idx
            main = (w2.get((i,)) * g_f2.get((j, k))
                    - w2.get((j,)) * g_f2.get((i, k)))
            extra = (w1.get((i,)) * g_f.get((j, k))
                     - w1.get((j,)) * g_f.get((i, k)))
            return main + (extra if sign > 0 else -extra)

        return Tensor.build(dim, (LOWER,) * 3, frame.syms,
                            fn).scale(factor)

    scalar = form  # a Scalar: t(xi) or t*(xi)
    g_mix = g_f2 if kind == "p31_t" else g_f

    def fn(idx):
        i, j, k = idx
        return (eta.get((j,)) * g_mix.get((i, k))
                - eta.get((i,)) * g_mix.get((j, k))) * scalar

    return Tensor.build(dim, (LOWER,) * 3, frame.syms,
                        fn).scale(Fraction(1, n2))


def _pullback_mixed(frame, endo):
    """g(endo a, b) componentwise."""
    dim = frame.dim

    def fn(idx):
        i, j = idx
        total = frame.zero()
        for m in range(dim):
            e = endo.get((m, i))
            if not e.is_zero():
                total = total + e * frame.g.get((m, j))
        return total

    return Tensor.build(dim, (LOWER, LOWER), frame.syms, fn)


def decompose_torsion_contact(structure, t3):
    """Fifteen components and the connection-class label of a torsion."""
    structure.require_b_metric()
    frame = structure.frame
    if reorder(t3, (1, 0, 2)) != -t3:
        raise NotATorsion("T(x,y,z) != -T(y,x,z)")
    proj = _projector_terms(structure, t3)
    total = None
    for p in proj.values():
        total = p if total is None else total + p
    if total != t3:
        raise InternalInvariantViolation("projections do not sum back to T")

    # trace splits
    t_of = lambda t: metric_trace(frame, t, 1, 2)
    t11 = proj[(1, 1)]
    m1 = _vector_model(structure, t_of(t11), "p11")
    t13 = proj[(1, 3)]
    m4 = _vector_model(structure, t_of(t13), "p13")
    t31 = proj[(3, 1)]
    t31_t = t_of(t31)
    t31_star = metric_trace(frame, j_insert(t31, structure.phi, 2), 1, 2)
    m9 = _vector_model(
        structure, contract_form(t31_t, structure.xi, 0).get(()), "p31_t")
    m10 = _vector_model(
        structure, contract_form(t31_star, structure.xi, 0).get(()),
        "p31_tstar")

    comps = (
        m1,                    # T1
        t11 - m1,              # T2
        proj[(1, 2)],          # T3
        m4,                    # T4
        t13 - m4,              # T5
        proj[(1, 4)],          # T6
        proj[(2, 1)],          # T7
        proj[(2, 2)],          # T8
        m9,                    # T9
        m10,                   # T10
        t31 - m9 - m10,        # T11
        proj[(3, 2)],          # T12
        proj[(3, 3)],          # T13
        proj[(3, 4)],          # T14
        proj[(4, 1)],          # T15
    )
    check = None
    for c in comps:
        check = c if check is None else check + c
    if check != t3:
        raise InternalInvariantViolation("fifteen components do not sum back")
    indices = tuple(i + 1 for i, c in enumerate(comps) if not c.is_zero())
    label = "C0" if not indices else "+".join(f"C{i}" for i in indices)
    return TorsionDecomposition(
        components=comps, class_label=label, indices=indices,
        note="symbolic components are nonzero when not identically zero")


# -- Schouten-van Kampen pair ------------------------------------------------------


@dataclass(frozen=True)
class SvKReport:
    svk: Connection
    svk_twin: Connection
    potential: Tensor            # (0,3) of the g-side connection
    torsion: Tensor
    potential_twin: Tensor
    torsion_twin: Tensor
    shape_op: Tensor             # S = -nabla xi, order (l, i)
    shape_op_twin: Tensor
    in_u1: bool
    coincides_with_lc: bool
    in_u2: bool
    natural: bool
    curvature_relation_holds: bool
    twin_curvature_relation_holds: bool


def _svk_connection(frame, conn, xi, eta, label):
    nabla_xi = conn.nabla_vector(xi)
    nabla_eta = conn.nabla_lower(eta)
    dim = frame.dim

    def fn(idx):
        l, i, j = idx
        return (conn.gamma.get((l, i, j))
                - eta.get((j,)) * nabla_xi.get((l, i))
                + nabla_eta.get((i, j)) * xi.get((l,)))

    return Connection(Tensor.build(dim, (UPPER, LOWER, LOWER), frame.syms,
                                   fn), label)


def _curvature_relation(frame, phi2, svk_pack, base_pack, sflat):
    """R0(x,y,z,w) = R(x,y,phi^2 z, phi^2 w) + pi_1(Sx, Sy, z, w)."""
    rhs_r = j_insert(j_insert(base_pack.r4, phi2, 2), phi2, 3)

    def pi1_fn(idx):
        i, j, k, l = idx
        return (sflat.get((j, k)) * sflat.get((i, l))
                - sflat.get((i, k)) * sflat.get((j, l)))

    pi1 = Tensor.build(frame.dim, (LOWER,) * 4, frame.syms, pi1_fn)
    return svk_pack.r4 == rhs_r + pi1


def schouten_van_kampen(structure, analysis=None):
    structure.require_b_metric()
    frame = structure.frame
    phi, xi, eta = structure.phi, structure.xi, structure.eta
    if analysis is None:
        analysis = analyze_contactb(structure)
    conn = analysis.conn
    phi2 = endo_compose(phi, phi)

    svk = _svk_connection(frame, conn, xi, eta, "svk")
    for check, what in (
            (svk.nabla_vector(xi).is_zero(), "xi"),
            (svk.nabla_lower(eta).is_zero(), "eta"),
            (svk.nabla_lower(frame.g).is_zero(), "g")):
        if not check:
            raise InternalInvariantViolation(
                f"Schouten-van Kampen does not annihilate {what}")
    _, t_svk = torsion_of(frame, svk)
    q_svk = _lower_conn_diff(frame, svk, conn)

    twin_md = twin_metric_data(structure)
    twin_frame = frame.with_metric(twin_md)
    conn_twin = levi_civita(twin_frame)
    svk_twin = _svk_connection(twin_frame, conn_twin, xi, eta, "svk_twin")
    for check, what in (
            (svk_twin.nabla_vector(xi).is_zero(), "xi"),
            (svk_twin.nabla_lower(eta).is_zero(), "eta"),
            (svk_twin.nabla_lower(twin_md.g).is_zero(), "g~")):
        if not check:
            raise InternalInvariantViolation(
                f"twin Schouten-van Kampen does not annihilate {what}")
    _, t_svk_twin = torsion_of(twin_frame, svk_twin)
    q_svk_twin = _lower_conn_diff(twin_frame, svk_twin, conn_twin)

    nabla_xi = conn.nabla_vector(xi)
    s_op = -nabla_xi
    s_twin = -conn_twin.nabla_vector(xi)
    sflat = _lower_shape(frame, s_op)
    sflat_twin = _lower_shape(twin_frame, s_twin, metric=twin_md)

    in_u1 = nabla_xi.is_zero()
    coincides = svk.gamma == conn.gamma
    if in_u1 != coincides:
        raise InternalInvariantViolation("U1 test disagrees with SvK == LC")
    # U2: F(x,y,z) = F(x,y,xi) eta(z) + F(x,z,xi) eta(y)
    fxi = contract_form(analysis.F, xi, 2)
    u2_shape = _eta_wedge_pair(frame, eta, fxi, minus=False)
    in_u2 = analysis.F == u2_shape
    natural = svk.nabla_endo(phi).is_zero()
    if in_u2 != natural:
        raise InternalInvariantViolation("U2 test disagrees with naturality")

    base_pack = curvature(frame, conn)
    svk_pack = curvature(frame, svk)
    rel = _curvature_relation(frame, phi2, svk_pack, base_pack, sflat)
    base_twin_pack = curvature(twin_frame, conn_twin)
    svk_twin_pack = curvature(twin_frame, svk_twin)
    rel_twin = _curvature_relation(twin_frame, phi2, svk_twin_pack,
                                   base_twin_pack, sflat_twin)
    if not rel or not rel_twin:
        raise InternalInvariantViolation("SvK curvature relation fails")

    return SvKReport(
        svk=svk, svk_twin=svk_twin,
        potential=q_svk, torsion=t_svk,
        potential_twin=q_svk_twin, torsion_twin=t_svk_twin,
        shape_op=s_op, shape_op_twin=s_twin,
        in_u1=in_u1, coincides_with_lc=coincides,
        in_u2=in_u2, natural=natural,
        curvature_relation_holds=rel,
        twin_curvature_relation_holds=rel_twin,
    )


def _lower_conn_diff(frame, conn_a, conn_b):
    """(0,3) potential of conn_a relative to conn_b via the frame metric."""
    diff = conn_a.gamma - conn_b.gamma
    dim = frame.dim

    def fn(idx):
        i, j, k = idx
        total = frame.zero()
        for m in range(dim):
            d = diff.get((m, i, j))
            if not d.is_zero():
                total = total + d * frame.g.get((m, k))
        return total

    return Tensor.build(dim, (LOWER,) * 3, frame.syms, fn)


def _lower_shape(frame, s_op, metric=None):
    g = (metric or frame.metric).g
    dim = frame.dim

    def fn(idx):
        i, k = idx
        total = frame.zero()
        for m in range(dim):
            v = s_op.get((m, i))
            if not v.is_zero():
                total = total + v * g.get((m, k))
        return total

    return Tensor.build(dim, (LOWER, LOWER), frame.syms, fn)


# -- the Sasaki-like test ------------------------------------------------------------


@dataclass(frozen=True)
class SasakiLikeReport:
    is_sasaki_like: bool
    witness: tuple | None
    curvature_identities: bool | None


def sasaki_like_check(structure, analysis=None):
    structure.require_b_metric()
    frame = structure.frame
    phi, xi, eta = structure.phi, structure.xi, structure.eta
    if analysis is None:
        analysis = analyze_contactb(structure)
    conn = analysis.conn
    dim = frame.dim
    nabla_phi = conn.nabla_endo(phi)

    def expect_fn(idx):
        l, i, j = idx
        one = Scalar.const(frame.syms, 1)
        out = -frame.g.get((i, j)) * xi.get((l,))
        out = out - (eta.get((j,)) * one if l == i else frame.zero())
        out = out + eta.get((i,)) * eta.get((j,)) * xi.get((l,)).scale(2)
        return out

    expect = Tensor.build(dim, (UPPER, LOWER, LOWER), frame.syms, expect_fn)
    defect = nabla_phi - expect
    wit = first_nonzero(defect)
    if wit is not None:
        return SasakiLikeReport(False, wit, None)

    pack = curvature(frame, conn)
    ok = True
    # R(x,y)xi = eta(y) x - eta(x) y
    r_xi = contract_form(pack.r13, xi, 3)

    def rxi_expect(idx):
        l, i, j = idx
        one = Scalar.const(frame.syms, 1)
        out = (eta.get((j,)) * one if l == i else frame.zero())
        out = out - (eta.get((i,)) * one if l == j else frame.zero())
        return out

    ok &= r_xi == Tensor.build(dim, (UPPER, LOWER, LOWER), frame.syms,
                               rxi_expect)
    # Ric(xi, xi) = 2n and Ric(y, xi) = 2n eta(y)
    n2 = Scalar.const(frame.syms, dim - 1)
    ric_xi = contract_form(pack.ricci, xi, 1)
    ok &= ric_xi == Tensor.build(dim, (LOWER,), frame.syms,
                                 lambda idx: eta.get(idx) * n2)
    # R(xi, x) xi = -(x - eta(x) xi)
    r_xi_x_xi = contract_form(contract_form(pack.r13, xi, 1), xi, 2)

    def hx_expect(idx):
        l, i = idx
        one = Scalar.const(frame.syms, 1)
        return eta.get((i,)) * xi.get((l,)) - (one if l == i
                                               else frame.zero())

    ok &= r_xi_x_xi == Tensor.build(dim, (UPPER, LOWER), frame.syms,
                                    hx_expect)
    # d eta = 0
    nabla_eta = conn.nabla_lower(eta)
    ok &= nabla_eta == nabla_eta.permute([1, 0])
    return SasakiLikeReport(True, None, bool(ok))


# -- contact homothetic transformations ----------------------------------------------


@dataclass(frozen=True)
class HomotheticReport:
    transformed: ContactBStructure
    ricci_invariant: bool
    scal_relations_hold: bool
    canonical_torsion_invariant: bool | None   # checked when r_w == 1
    sasaki_like_preserved: bool | None


def homothetic_transform_contact(structure, r_g, rotation, r_w,
                                 analysis=None):
    structure.require_b_metric()
    c, s = (Fraction(rotation[0]), Fraction(rotation[1]))
    r_g = Fraction(r_g)
    r_w = Fraction(r_w)
    if c * c + s * s != 1:
        raise InvalidRotationPair(f"({c}, {s}) is not on the unit circle")
    if r_g <= 0 or r_w <= 0:
        raise InvalidRotationPair("scales must be positive rationals")
    frame = structure.frame
    phi, xi, eta = structure.phi, structure.xi, structure.eta
    alpha = r_g * c
    beta = r_g * s
    gamma = r_w * r_w

    g_bar = (frame.g.scale(alpha)
             + _mixed_metric(frame, phi).scale(beta)
             + _form_square(frame, eta).scale(gamma - alpha))
    new_frame = frame.with_metric(MetricData.from_tensor(g_bar))
    new_s = ContactBStructure(new_frame, phi, xi.scale(Fraction(1, r_w)),
                              eta.scale(r_w), flavor=B_METRIC)

    if analysis is None:
        analysis = analyze_contactb(structure)
    base_pack = curvature(frame, analysis.conn)
    new_analysis = analyze_contactb(new_s)
    new_pack = curvature(new_frame, new_analysis.conn)
    ricci_inv = new_pack.ricci == base_pack.ricci

    # scalar-curvature relations of the homothetic change
    scal_star = _star_scal_with(frame, base_pack, phi)
    new_scal_star = _star_scal_with(new_frame, new_pack, phi)
    ric_xi_xi = contract_form(contract_form(base_pack.ricci, xi, 0),
                              xi, 0).get(())
    ca = Fraction(1, 1) / r_g * c
    sa = Fraction(1, 1) / r_g * s
    scal_ok = (
        new_pack.scal == (base_pack.scal.scale(ca) - scal_star.scale(sa)
                          + ric_xi_xi.scale(Fraction(1, gamma) - ca))
        and new_scal_star == (base_pack.scal.scale(sa)
                              + scal_star.scale(ca) - ric_xi_xi.scale(sa)))

    torsion_inv = None
    if r_w == 1:
        t_old = phi_connections(structure, analysis)
        t_new = phi_connections(new_s, new_analysis)
        old13, _ = torsion_of(frame, t_old.phi_canonical)
        new13, _ = torsion_of(new_frame, t_new.phi_canonical)
        torsion_inv = old13 == new13

    sasaki_old = sasaki_like_check(structure, analysis)
    sasaki_preserved = None
    if sasaki_old.is_sasaki_like:
        sasaki_preserved = sasaki_like_check(new_s,
                                             new_analysis).is_sasaki_like

    return HomotheticReport(
        transformed=new_s,
        ricci_invariant=ricci_inv,
        scal_relations_hold=scal_ok,
        canonical_torsion_invariant=torsion_inv,
        sasaki_like_preserved=sasaki_preserved,
    )


def _star_scal_with(frame, pack, phi):
    """tau* = g^{ij} rho(e_i, phi e_j)."""
    lifted = metric_trace(frame, j_insert(pack.ricci, phi, 1), 0, 1)
    return lifted.get(())
