"""Lifting through the Koszul complex and the corona-type solver.

Given ``W`` with ``T_f W = 0`` the constructions here produce ``Y`` of one
higher Koszul degree with either ``T_f Y = W`` (a lift), ``T_f dbar Y = W``
(the descent used for the approximation pipeline), or ``T_f Y = W`` with
``dbar Y = 0`` (a holomorphic lift, which for ``W = 1`` is a corona
solution).  Each step records the defects it can measure.

On a grid, ``T_f`` and ``dbar`` commute only up to a defect of order
``h^2`` (the difference stencil does not satisfy the product rule).
Identities that the continuum argument gets from this commutation are
therefore checked against discretisation-sized tolerances, while purely
algebraic identities are checked to rounding.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .dbar import closed_tolerance, solve_dbar_form
from .errors import CertificateError, HypothesisError
from .forms import KoszulForm, dbar_apply, erode, koszul_contract, wedge
from .grid import cutoff_from_distance

__all__ = [
    "DescentStage",
    "DescentTrace",
    "CoronaResult",
    "denominator_floor",
    "build_section_cutoff",
    "build_section_global",
    "global_section_dbar_bound",
    "support_cutoff",
    "lift_lemma1",
    "descent_lemma2",
    "lift_prop1",
    "corona_solve",
    "descent_tolerance",
    "relation_defect",
]

SECTION_FLOOR = 1e-8
ZERO_SET_FLOOR = 1e-6
ALGEBRA_TOL = 1e-10


def descent_tolerance(h, depth, section_sup, w_sup):
    """``depth * 20 h (1 + ||X||)^depth * ||W||``."""
    return depth * 20.0 * h * (1.0 + section_sup) ** depth * w_sup


def _norm_sq(f, domain):
    return np.sum(np.abs(f.samples(domain)) ** 2, axis=0)


def denominator_floor(f, domain, mask):
    """Minimum of ``sum |f_l|^2`` over ``mask`` (``inf`` for an empty mask)."""
    vals = _norm_sq(f, domain)[mask]
    return float(vals.min()) if vals.size else float("inf")


def _section(f, domain, weight, where):
    fs = f.samples(domain)
    S = np.sum(np.abs(fs) ** 2, axis=0)
    safe = np.where(where, S, 1.0)
    g = np.where(where, weight * np.conj(fs) / safe, 0.0)
    return KoszulForm(domain, f.m, 1, 0, g[:, None])


def build_section_cutoff(f, chi, domain):
    """``X = sum_j e_j (x) chi conj(f_j) / sum |f_l|^2``.

    ``T_f X = chi`` nodewise, so ``T_f X = 1`` wherever ``chi = 1``.
    """
    delta = denominator_floor(f, domain, chi.support & domain.inside_mask)
    if delta < SECTION_FLOOR:
        raise HypothesisError(
            "section-floor", f"sum |f|^2 drops to {delta:.3e} on the cut-off support")
    return _section(f, domain, chi.values, chi.support)


def build_section_global(f, domain, eps0):
    """``X = sum_j e_j (x) conj(f_j) / sum |f_l|^2`` on the whole domain."""
    floor = denominator_floor(f, domain, domain.inside_mask)
    if not floor > eps0:
        raise HypothesisError(
            "bounded-below", f"min sum |f|^2 = {floor:.3e} does not exceed eps0 = {eps0:.3e}")
    return _section(f, domain, 1.0, domain.inside_mask)


def global_section_dbar_bound(f, domain):
    """Bound on ``||dbar X||`` for the global section from sampled sup norms.

    Uses ``|dbar g_j| <= |df_j| / S + |f_j| sum_l |f_l| |df_l| / S^2`` with
    each factor replaced by its sup (or, for ``S``, its inf) over the grid.
    """
    inside = domain.inside_mask
    fs = np.abs(f.samples(domain))[:, inside]
    jac = f.jacobian(domain.points[inside])
    dnorm = np.sqrt(np.sum(np.abs(jac) ** 2, axis=-1)).T  # (m, nodes)
    S = float(np.min(np.sum(fs ** 2, axis=0)))
    fsup = fs.max(axis=1)
    dsup = dnorm.max(axis=1)
    cross = float(np.sum(fsup * dsup))
    return float(np.max(dsup / S + fsup * cross / S ** 2))


def support_cutoff(domain, support, r_inner, r_outer):
    """Cut-off equal to 1 within ``r_inner`` of ``support``, 0 beyond ``r_outer``."""
    if not support.any():
        return cutoff_from_distance(domain, np.full(domain.shape, np.inf), r_inner, r_outer)
    dist = ndimage.distance_transform_edt(~support, sampling=domain.h)
    return cutoff_from_distance(domain, dist, r_inner, r_outer)


def _contract_defect(f, W):
    return koszul_contract(f, W).sup_norm()


def lift_lemma1(f, W, chi, tol=None):
    """``Y = X ^ W`` with ``X`` the cut-off section; ``T_f Y = W``.

    Requires ``T_f W = 0`` (within ``tol``, default ``1e-10 * scale``) and
    ``chi = 1`` on the support of ``W``.
    """
    dom = W.domain
    scale = max(1.0, f.sup(dom)) * max(W.sup_norm(), 1e-300)
    tol = ALGEBRA_TOL * scale if tol is None else tol
    if W.is_zero():
        return KoszulForm.zero(dom, W.m, W.r + 1, W.s, valid=W.valid)
    if W.r == W.m:
        if W.sup_norm() > tol:
            raise HypothesisError(
                "top-degree", f"a form of top Koszul degree with T_f W = 0 must vanish, "
                f"got ||W|| = {W.sup_norm():.3e}")
        return KoszulForm.zero(dom, W.m, W.r + 1, W.s, valid=W.valid)
    defect = _contract_defect(f, W)
    if defect > tol:
        raise HypothesisError("contraction-zero", f"||T_f W|| = {defect:.3e} exceeds {tol:.3e}")
    supp = W.support() & W.valid
    outside = supp & ~chi.inner
    if outside.any():
        raise HypothesisError(
            "support", f"{int(outside.sum())} support nodes of W lie where the cut-off is not 1")
    if denominator_floor(f, dom, supp) <= ZERO_SET_FLOOR:
        raise HypothesisError("zero-set", "support of W meets the zero set of f")
    X = build_section_cutoff(f, chi, dom)
    return wedge(X, W)


@dataclass
class DescentStage:
    level: int
    name: str
    degree: tuple
    residuals: dict


@dataclass
class DescentTrace:
    """Record of one run of the descending induction."""

    stages: list = field(default_factory=list)
    depth: int = 0
    section_sup: float = 0.0
    final_residual: float = float("nan")
    tolerance: float = float("nan")
    # data of the outermost dbar solve; stage forms are not kept, to bound memory
    last_solver_input: KoszulForm = field(default=None, repr=False)

    def add(self, level, name, form, **residuals):
        self.depth = max(self.depth, level)
        self.stages.append(DescentStage(level, name, form.degree, residuals))

    def report(self):
        lines = [f"depth {self.depth}, sup|X| = {self.section_sup:.6g}"]
        for st in self.stages:
            res = ", ".join(f"{k}={v:.3e}" for k, v in st.residuals.items())
            lines.append(f"  level {st.level} {st.name:<10} degree {st.degree}  {res}")
        lines.append(f"final ||T_f dbar Y - W|| = {self.final_residual:.3e} "
                     f"(tolerance {self.tolerance:.3e})")
        return "\n".join(lines)


def _descend(f, W, level, chi, opts, trace):
    dom = W.domain
    h = dom.h
    zero = KoszulForm.zero(dom, W.m, W.r + 1, W.s - 1, valid=erode(W.valid))
    wsup = W.sup_norm()
    if W.is_zero() or (level > 1 and wsup <= opts["top_tol"]):
        trace.add(level, "zero", zero, input_sup=wsup)
        return zero
    if W.r == W.m:
        if level == 1 or wsup > opts["top_tol"]:
            raise HypothesisError(
                "top-degree", f"form of top Koszul degree with ||W|| = {wsup:.3e} cannot be lifted")
        trace.add(level, "zero", zero, input_sup=wsup)
        return zero
    supp = W.support() & W.valid
    if chi is None:
        chi = support_cutoff(dom, supp, opts["inner"], opts["inner"] + opts["margin"])
    # deeper levels carry the commutation defect of T_f and dbar in T_f W
    lift_tol = None if level == 1 else opts["commute_tol"] * max(wsup, 1.0)
    X = build_section_cutoff(f, chi, dom)
    trace.section_sup = max(trace.section_sup, X.sup_norm())
    Y1 = lift_lemma1(f, W, chi, tol=lift_tol)
    trace.add(level, "lift", Y1, lift_defect=(koszul_contract(f, Y1) - W).sup_norm(),
              chi_grad=chi.grad_bound)
    if W.s == W.n:
        target = Y1
    else:
        dY1 = dbar_apply(Y1)
        Y2 = _descend(f, dY1, level + 1, None, opts, trace)
        Y3 = Y1 - koszul_contract(f, Y2)
        closed = dbar_apply(Y3).sup_norm()
        tol = closed_tolerance(h, max(Y3.sup_norm(), 1.0))
        trace.add(level, "correct", Y3, closedness=closed)
        if closed > tol:
            raise CertificateError("closedness", f"||dbar Y3|| = {closed:.3e} exceeds {tol:.3e}")
        target = Y3
    trace.last_solver_input = target
    sol = solve_dbar_form(target, check_closed=False)
    trace.add(level, "solve", sol.solution, solver_residual=sol.residual_sup)
    return sol.solution


def descent_lemma2(f, W, chi=None, margin=0.1, inner=None):
    """Solve ``T_f dbar Y = W`` for closed ``W`` with ``T_f W = 0``.

    Parameters
    ----------
    f : HoloMap
    W : KoszulForm of degree (r, s), s >= 1, supported away from f^{-1}(0)
    chi : CutOff equal to 1 on the support of W; built from ``margin`` if None
    margin : transition width of the cut-offs built at each level
    inner : radius around the support where those cut-offs equal 1
        (default ``2h``)

    Returns
    -------
    Y : KoszulForm of degree (r + 1, s - 1)
    trace : DescentTrace
    """
    if W.s < 1:
        raise ValueError("descent needs a form of antiholomorphic degree >= 1")
    dom = W.domain
    h = dom.h
    opts = {
        "margin": margin,
        "inner": 2 * h if inner is None else inner,
        "commute_tol": 10.0 * h,
        "top_tol": 10.0 * h * max(W.sup_norm(), 1.0),
    }
    supp = W.support() & W.valid
    if supp.any() and denominator_floor(f, dom, supp) <= ZERO_SET_FLOOR:
        raise HypothesisError("zero-set", "support of W meets the zero set of f")
    if not W.is_zero() and W.s < W.n:
        dW = dbar_apply(W).sup_norm()
        tol = closed_tolerance(h, W.sup_norm())
        if dW > tol:
            raise HypothesisError("input-closed", f"||dbar W|| = {dW:.3e} exceeds {tol:.3e}")
    trace = DescentTrace()
    Y = _descend(f, W, 1, chi, opts, trace)
    final = koszul_contract(f, dbar_apply(Y)) - W
    trace.final_residual = final.sup_norm()
    trace.tolerance = descent_tolerance(h, max(trace.depth, 1), trace.section_sup, W.sup_norm())
    return Y, trace


def _prop(f, W, X, level, trace):
    dom = W.domain
    if W.is_zero():
        Z = KoszulForm.zero(dom, W.m, W.r + 1, W.s, valid=W.valid)
        trace.add(level, "zero", Z)
        return Z
    Yt = wedge(X, W)
    trace.add(level, "lift", Yt, lift_defect=(koszul_contract(f, Yt) - W).sup_norm())
    if W.s == W.n or W.r + 1 > W.m:
        return Yt
    dYt = dbar_apply(Yt)
    Y1 = _prop(f, dYt, X, level + 1, trace)
    trace.last_solver_input = Y1
    sol = solve_dbar_form(Y1, check_closed=False)
    trace.add(level, "solve", sol.solution, solver_residual=sol.residual_sup)
    Y = Yt - koszul_contract(f, sol.solution)
    trace.add(level, "correct", Y, closedness=dbar_apply(Y).sup_norm())
    return Y


def lift_prop1(f, W, eps0):
    """Holomorphic lift: ``dbar Y = 0`` and ``T_f Y = W`` for ``sum |f|^2 > eps0``.

    Returns ``(Y, trace)``; ``trace.final_residual`` is the larger of
    ``||dbar Y||`` and ``||T_f Y - W||``.
    """
    dom = W.domain
    X = build_section_global(f, dom, eps0)
    if not W.is_zero():
        if W.s < W.n:
            dW = dbar_apply(W).sup_norm()
            tol = closed_tolerance(dom.h, W.sup_norm())
            if dW > tol:
                raise HypothesisError("input-closed", f"||dbar W|| = {dW:.3e} exceeds {tol:.3e}")
        scale = max(1.0, f.sup(dom)) * W.sup_norm()
        defect = _contract_defect(f, W)
        if defect > ALGEBRA_TOL * scale:
            raise HypothesisError("contraction-zero", f"||T_f W|| = {defect:.3e}")
    trace = DescentTrace(section_sup=X.sup_norm())
    Y = _prop(f, W, X, 1, trace)
    ident = (koszul_contract(f, Y) - W).sup_norm()
    hol = dbar_apply(Y).sup_norm() if Y.s < Y.n else 0.0
    trace.final_residual = max(ident, hol)
    trace.tolerance = descent_tolerance(dom.h, max(trace.depth, 1), trace.section_sup,
                                        max(W.sup_norm(), 0.0))
    return Y, trace


@dataclass
class CoronaResult:
    """Fields ``g_j`` with ``sum f_j g_j = 1`` and their certificates."""

    g: list
    identity_residual: float
    holomorphy_residuals: list
    sup_norms: list
    tolerance: float
    trace: DescentTrace = field(repr=False)
    valid: np.ndarray = field(repr=False)


def corona_solve(f, domain, eps0, certify=True):
    """Corona-type solution on ``domain`` for ``sum |f_j|^2 > eps0``."""
    W = KoszulForm.scalar(domain, f.m, 1.0)
    Y, trace = lift_prop1(f, W, eps0)
    valid = Y.valid
    g = [np.where(valid, Y.coeffs[j, 0], 0.0) for j in range(f.m)]
    fs = f.samples(domain)
    ident = np.abs(sum(fs[j] * g[j] for j in range(f.m)) - 1.0)[valid]
    ident = float(ident.max()) if ident.size else 0.0
    dY = dbar_apply(Y)
    hol = [float(np.abs(dY.coeffs[j]).max(axis=0)[dY.valid].max(initial=0.0)) for j in range(f.m)]
    sups = [float(np.abs(gj[valid]).max(initial=0.0)) for gj in g]
    result = CoronaResult(g, ident, hol, sups, trace.tolerance, trace, valid)
    if certify:
        if ident > 1e-12:
            raise CertificateError("corona-identity", f"max |sum f_j g_j - 1| = {ident:.3e}")
        worst = max(hol, default=0.0)
        if worst > trace.tolerance:
            raise CertificateError(
                "corona-holomorphy", f"max ||dbar g_j|| = {worst:.3e} exceeds {trace.tolerance:.3e}")
    return result


def relation_defect(result, domain):
    """Module check for ``f = (z, 1 - z)``.

    ``(1, 1)`` solves ``z g1 + (1 - z) g2 = 1``, so the difference
    ``(g1 - 1, g2 - 1)`` must equal ``(-(1 - z) q, z q)`` for one function
    ``q``.  Computes ``q`` from the first slot and returns the sup of
    ``|(g2 - 1) - z q|`` over the valid nodes.
    """
    if len(result.g) != 2:
        raise ValueError("the relation check is for two-component maps")
    z = domain.z(0)
    valid = result.valid
    q = np.where(valid, (result.g[0] - 1) / np.where(valid, -(1 - z), 1.0), 0.0)
    diff = np.abs((result.g[1] - 1) - z * q)[valid]
    return float(diff.max(initial=0.0))
