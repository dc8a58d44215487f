"""Uniform approximation by the algebra generated by H^infty and conj(f_j).

For continuous ``g`` vanishing on the boundary and on the rank-deficient
set of ``f``, the pipeline builds

    h = sum_j G_j * chi_j(f),

where each ``G_j`` is a (numerically) holomorphic function that agrees
with ``g`` to first order in ``|f - lambda_j|`` and the ``chi_j`` form a
partition of unity on the image of ``f`` subordinate to balls of radius
``eps / M_j``.  Then ``|h - g| <= 2 eps``.

Per centre ``lambda``:

1. ``g`` is damped to 0 near the boundary and frozen to a constant on each
   component of a small neighbourhood of the fiber ``f = lambda``
   (:func:`smooth_vanishing_data`), so that ``dbar g^lambda`` vanishes
   there.
2. The descent solves ``T_{f-lambda} dbar Y = dbar g^lambda`` and
   ``G = g^lambda - sum_l (f_l - lambda_l) H_l`` with ``Y = sum e_l H_l``
   (:func:`per_lambda_solve`).

The full pipeline is implemented for one complex variable.  Errors are
measured on a grid twice as fine as the one used for the solves.
"""

import csv
import time
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from .dbar import cauchy_transform
from .errors import CertificateError, HypothesisError
from .forms import KoszulForm, dbar_apply, erode
from .grid import CutOff, refine, smooth_step
from .holomap import jacobian_rank_mask
from .koszul import descent_lemma2

__all__ = [
    "SmoothedData",
    "LambdaSolve",
    "LambdaNet",
    "Approximant",
    "check_vanishing_hypotheses",
    "check_boundary_vanishing",
    "soft_threshold",
    "smooth_vanishing_data",
    "per_lambda_solve",
    "build_lambda_net",
    "assemble",
    "approximate",
    "partition_weights",
    "stone_weierstrass_fit",
    "TARGETS",
    "write_lambda_table",
]

COLLAR_FRACTION = 0.75   # sup |g| on the collar must stay below this times eps
PARTITION_FLOOR = 1e-8
FREEZE_RATIO = 0.9
FREEZE_STEPS = 40
FREEZE_INNER = 0.25
FREEZE_STENCIL = 1.1
CORE_FACTOR = 0.9
MAX_ROUNDS = 5

TARGETS = {
    "zero": lambda p: np.zeros(p.shape[:-1], dtype=complex),
    "one": lambda p: np.ones(p.shape[:-1], dtype=complex),
    "1-|z|^2": lambda p: (1 - np.sum(np.abs(p) ** 2, axis=-1)).astype(complex),
    "(1-|z|^2)|z|^2": lambda p: ((1 - np.abs(p[..., 0]) ** 2) * np.abs(p[..., 0]) ** 2).astype(complex),
}


def _lam_vec(lam, m):
    return np.asarray(lam, dtype=complex).reshape(m)


def _dist_to_lambda(f, domain, lam):
    fs = f.samples(domain)
    return np.sqrt(np.sum(np.abs(fs - lam.reshape(-1, *[1] * fs[0].ndim)) ** 2, axis=0))


def check_vanishing_hypotheses(f, g, domain, eps, tol_svd=None, dilate=2):
    """Certify that ``g`` is small on a neighbourhood of the rank-deficient set.

    Returns the dilated rank-deficiency mask.  Raises ``HypothesisError``
    when ``sup |g|`` there reaches ``COLLAR_FRACTION * eps``.
    """
    if tol_svd is None:
        tol_svd = 2 * domain.h
    mask = jacobian_rank_mask(f, domain, tol_svd)
    if mask.any():
        mask = ndimage.binary_dilation(mask, iterations=dilate) & domain.inside_mask
        worst = float(np.abs(g(domain.points))[mask].max())
        if worst >= COLLAR_FRACTION * eps:
            raise HypothesisError(
                "vanishing-rank-set",
                f"sup |g| = {worst:.3e} near the rank-deficient set exceeds {COLLAR_FRACTION * eps:.3e}")
    return mask


@dataclass
class SmoothedData:
    """``g^lambda`` and the regions where its dbar is certified to vanish.

    ``evaluate(domain)`` rebuilds the field on any grid over the same box
    (the solve grid or its refinement).
    """

    lam: np.ndarray
    eps: float
    threshold: float
    a1: float
    a2: float
    values: np.ndarray = field(repr=False)
    sup_error: float = 0.0
    collar: np.ndarray = field(repr=False, default=None)
    fiber_zone: np.ndarray = field(repr=False, default=None)
    constants: np.ndarray = field(repr=False, default=None)
    _g: object = field(repr=False, default=None)
    _f: object = field(repr=False, default=None)
    _labels: np.ndarray = field(repr=False, default=None)
    _domain: object = field(repr=False, default=None)

    def evaluate(self, domain, index=None):
        return _g_lambda(self._f, self._g, domain, self.lam, self.threshold, self.a1, self.a2,
                         self._labels, self._domain, self.constants, index)[0]


def soft_threshold(values, tau):
    """``g * S(|g| / tau)`` with ``S = 0`` below 1 and ``S = 1`` above 2.

    The result vanishes wherever ``|g| <= tau``, differs from ``g`` by at
    most ``2 tau``, and its gradient is at most ``5 |grad g|``.
    """
    if tau <= 0:
        return np.array(values, dtype=complex)
    return values * smooth_step(2.0 - np.abs(values) / tau)


def _g_lambda(f, g, domain, lam, tau, a1, a2, labels, base, constants, index=None):
    """Field ``(1 - b) g_hat + b c`` on ``domain`` (optionally at ``index``)."""
    pts = domain.points if index is None else domain.points[index]
    inside = domain.inside_mask if index is None else domain.inside_mask[index]
    ghat = np.where(inside, soft_threshold(g(pts), tau), 0.0)
    fl = f(pts) - lam.reshape(-1, *[1] * (pts.ndim - 1))
    dist = np.sqrt(np.sum(np.abs(fl) ** 2, axis=0))
    b = np.where(inside, smooth_step((dist - a1) / (a2 - a1)), 0.0)
    if constants is None or not constants.size or not np.any(b > 0):
        return (1 - b) * ghat, b
    # component constant of the nearest node of the base grid
    if domain is base:
        lab = labels if index is None else labels[index]
    else:
        ratio = int(round(base.h / domain.h))
        idx = np.indices(domain.shape) if index is None else np.asarray(index)
        coarse = tuple(np.clip(np.rint(i / ratio).astype(int), 0, s - 1)
                       for i, s in zip(idx, base.shape))
        lab = labels[coarse]
    c = np.where(lab > 0, constants[np.maximum(lab, 1) - 1], 0.0)
    return (1 - b) * ghat + b * c, b


def check_boundary_vanishing(g, domain, eps, fine=None, width=2):
    """``sup |g| < COLLAR_FRACTION * eps`` within ``width * h`` of the boundary."""
    band = width * domain.h
    worst = 0.0
    for dom in (domain, fine):
        if dom is None:
            continue
        zone = dom.inside_mask & (dom.boundary_dist < band)
        if zone.any():
            worst = max(worst, float(np.abs(g(dom.points[zone])).max()))
    if worst >= COLLAR_FRACTION * eps:
        raise HypothesisError(
            "boundary-vanishing",
            f"sup |g| = {worst:.3e} within {band:.3g} of the boundary is not below "
            f"{COLLAR_FRACTION * eps:.3e}")
    return worst


def smooth_vanishing_data(f, g, lam, eps, domain, fine=None, _cache=None):
    """Build ``g^lambda`` with ``sup |g - g^lambda| < eps`` and dbar-free zones.

    ``g`` is soft-thresholded at ``COLLAR_FRACTION * eps / 2``, which makes
    it vanish on a neighbourhood of the boundary, and then frozen to a
    constant on each component of ``{|f - lambda| < a2}``.  The freeze
    radius ``a2`` shrinks geometrically until the error certificate holds;
    the inner radius ``a1`` never drops below the image of one grid step.

    Parameters
    ----------
    f : HoloMap on one complex variable
    g : callable on complex points ``(..., n)``
    lam : point of C^m
    eps : target accuracy
    domain : solve grid
    fine : optional verification grid; the error certificate covers both
    """
    lam = _lam_vec(lam, f.m)
    if _cache is None:
        _cache = {}
    if "g" not in _cache:
        check_boundary_vanishing(g, domain, eps, fine)
        _cache["g"] = g(domain.points)
        _cache["g_fine"] = None if fine is None else g(fine.points)
    tau = COLLAR_FRACTION * eps / 2
    gvals = _cache["g"]
    inside = domain.inside_mask
    ghat = np.where(inside, soft_threshold(gvals, tau), 0.0)
    collar = erode(inside & (ghat == 0)) & (domain.boundary_dist < 2 * domain.h)
    dist = _dist_to_lambda(f, domain, lam)
    if "slope" not in _cache:
        J = f.jacobian(domain.points[inside])
        _cache["slope"] = float(np.sqrt(np.sum(np.abs(J) ** 2, axis=(-2, -1))).max(initial=0.0))
    # the frozen zone must swallow the difference stencil of every fiber node
    a1_floor = FREEZE_STENCIL * domain.h * _cache["slope"]
    for k in range(FREEZE_STEPS):
        a2 = eps * FREEZE_RATIO ** k
        a1 = max(a2 * FREEZE_INNER, a1_floor)
        if a1 > 0.5 * a2:
            break
        near = inside & (dist < a2)
        labels, count = ndimage.label(near)
        constants = np.zeros(count, dtype=complex)
        for c in range(count):
            comp = labels == c + 1
            if (comp & collar).any():
                continue
            flat = np.flatnonzero(comp)
            anchor = flat[np.argmin(dist.ravel()[flat])]
            constants[c] = ghat.ravel()[anchor]
        if count:
            # every node carries the label of its nearest labelled node, so
            # that finer grids can look constants up from the nearest node
            _, near_idx = ndimage.distance_transform_edt(labels == 0, return_indices=True)
            labels = labels[tuple(near_idx)]
        vals, b = _g_lambda(f, g, domain, lam, tau, a1, a2, labels, domain, constants)
        err = float(np.abs(vals - gvals)[inside].max(initial=0.0))
        if fine is not None:
            fvals, _ = _g_lambda(f, g, fine, lam, tau, a1, a2, labels, domain, constants)
            err = max(err, float(np.abs(fvals - _cache["g_fine"])[fine.inside_mask].max(initial=0.0)))
        if err < eps:
            return SmoothedData(
                lam, eps, tau, a1, a2, vals, err,
                collar=collar,
                fiber_zone=erode(b == 1.0) & inside,
                constants=constants, _g=g, _f=f, _labels=labels, _domain=domain)
    raise HypothesisError(
        "freeze", f"no freeze radius keeps sup |g - g^lambda| below eps at lambda = {lam}")


@dataclass
class LambdaSolve:
    """Result of the per-centre solve; fine-grid fields kept on ``fine_index``."""

    lam: np.ndarray
    M: float
    radius: float
    dbar_G: float
    tolerance: float
    division_margin: float
    data: SmoothedData = field(repr=False)
    G: np.ndarray = field(repr=False, default=None)
    H: np.ndarray = field(repr=False, default=None)
    fine_index: tuple = field(repr=False, default=None)
    G_fine: np.ndarray = field(repr=False, default=None)
    g_lambda_fine: np.ndarray = field(repr=False, default=None)
    seconds: float = 0.0

    def compact(self):
        """Drop full-grid fields that assembly does not read; returns self.

        ``H`` is always dropped.  When fine-grid values are stored, ``G``
        and the grid arrays of ``data`` go as well, since assembly then
        reads only ``G_fine`` and ``g_lambda_fine``.
        """
        self.H = None
        if self.fine_index is not None:
            self.G = None
            self.data = replace(self.data, values=None, collar=None, fiber_zone=None,
                                _labels=None)
        return self


def _section_cutoff_for(dist, supp, domain):
    """Cut-off vanishing near the fiber and equal to 1 on the support of W."""
    mw = float(dist[supp].min())
    lo, hi = 0.45 * mw, 0.9 * mw
    chi = smooth_step((hi - dist) / (hi - lo))
    chi = np.where(domain.inside_mask, chi, 0.0)
    return CutOff(chi, chi == 1.0, chi > 0, lo, hi, float("nan"))


def per_lambda_solve(f, data, domain, fine=None, radius_cap=None):
    """Holomorphic ``G_lambda`` with ``|G - g^lambda| <= M |f - lambda|``.

    Returns a :class:`LambdaSolve`.  ``M`` is the sum over ``l`` of the sup
    of ``|H_l|`` over the solve grid and, when given, the fine grid.
    """
    t0 = time.perf_counter()
    lam = data.lam
    fl = f.shifted(lam)
    gl = KoszulForm.scalar(domain, f.m, data.values)
    W = dbar_apply(gl)
    dist = _dist_to_lambda(f, domain, lam)
    dist_fine = None if fine is None else _dist_to_lambda(f, fine, lam)
    if W.is_zero():
        H = np.zeros((f.m, *domain.shape), dtype=complex)
        H_fine = None if fine is None else np.zeros((f.m, *fine.shape), dtype=complex)
        tol = 0.0
    else:
        supp = W.support() & W.valid
        chi = _section_cutoff_for(dist, supp, domain)
        Y, trace = descent_lemma2(fl, W, chi=chi)
        H = np.asarray(Y.coeffs[:, 0])
        tol = trace.tolerance
        H_fine = None
        if fine is not None:
            src = trace.last_solver_input
            H_fine = cauchy_transform(src.coeffs[:, 0], src.valid, domain.h,
                                      min(domain.radii), refine=2)
    fs = f.samples(domain) - lam.reshape(-1, *[1] * domain.n * 2)
    G = data.values - np.sum(fs * H, axis=0)
    Gform = KoszulForm.scalar(domain, f.m, G, valid=W.valid)
    dG = dbar_apply(Gform).sup_norm()
    inside = domain.inside_mask
    M = float(sum(np.abs(H[l])[inside].max(initial=0.0) for l in range(f.m)))
    if H_fine is not None:
        Mf = float(sum(np.abs(H_fine[l])[fine.inside_mask].max(initial=0.0) for l in range(f.m)))
        M = max(M, Mf)
    radius = np.inf if M == 0 else data.eps / M
    if radius_cap is not None:
        radius = min(radius, radius_cap)
    # division bound |G - g^lambda| <= M |f - lambda|, checked nodewise
    lhs = np.abs(G - data.values)[inside]
    margin = float(np.max(lhs - M * dist[inside], initial=-np.inf))
    fine_index = G_fine = glf = None
    if fine is not None:
        keep = fine.inside_mask & (dist_fine < radius)
        fine_index = np.nonzero(keep)
        glf = data.evaluate(fine, fine_index)
        ff = f(fine.points[fine_index]) - lam.reshape(-1, 1)
        G_fine = glf - np.sum(ff * H_fine[(slice(None), *fine_index)], axis=0)
        lhs_f = np.abs(G_fine - glf)
        margin = max(margin, float(np.max(lhs_f - M * dist_fine[fine_index], initial=-np.inf)))
    scale = 1e-12 * max(1.0, M)
    if margin > scale:
        raise CertificateError("division-bound", f"|G - g^lambda| exceeds M |f - lambda| by {margin:.3e}")
    if dG > max(tol, 1e-12):
        raise CertificateError("holomorphy", f"||dbar G|| = {dG:.3e} exceeds {tol:.3e} at lambda {lam}")
    return LambdaSolve(lam, M, radius, dG, tol, margin, data, G, H, fine_index, G_fine, glf,
                       time.perf_counter() - t0)


def partition_weights(centers, radii, cloud):
    """Normalised bump weights on ``cloud`` for balls ``B(centers[j], radii[j])``.

    Returns ``(weights, total)`` where ``weights[j] = (index, values)`` are
    the cloud points in ball ``j`` and their partition values, and
    ``total`` is the unnormalised sum ``sum_j beta_j`` per point.
    """
    pts = _real(cloud)
    tree = cKDTree(pts)
    raw = []
    total = np.zeros(len(pts))
    for c, rho in zip(centers, radii):
        idx = np.asarray(tree.query_ball_point(_real(c[None])[0], min(rho, 1e6)), dtype=int)
        idx.sort()
        t2 = np.sum((pts[idx] - _real(c[None])[0]) ** 2, axis=1) / rho ** 2
        inside = t2 < 1
        idx, t2 = idx[inside], t2[inside]
        beta = np.exp(-1.0 / (1.0 - t2))
        raw.append((idx, beta))
        np.add.at(total, idx, beta)
    safe = np.where(total > 0, total, 1.0)
    weights = [(idx, beta / safe[idx]) for idx, beta in raw]
    return weights, total


def _real(w):
    w = np.asarray(w, dtype=complex)
    return np.concatenate([w.real, w.imag], axis=-1)


@dataclass
class LambdaNet:
    """Centres, radii ``eps / M`` and per-centre solves covering ``f(Omega)``."""

    centers: np.ndarray
    radii: np.ndarray
    M: np.ndarray
    solves: list = field(repr=False)
    rounds: int = 1
    cover_floor: float = 0.0

    def __len__(self):
        return len(self.centers)

    def partition(self, cloud):
        return partition_weights(self.centers, self.radii, cloud)


def _image_cloud(f, dom):
    return np.moveaxis(f.samples(dom), 0, -1)[dom.inside_mask]


def build_lambda_net(f, g, eps, domain, fine=None, max_rounds=MAX_ROUNDS, progress=None):
    """Cover the image of ``f`` by balls ``B(lambda_j, eps / M_j)``.

    Image points are swept in a fixed order. Each point not yet covered
    becomes a centre; once solved, its ball of radius ``eps / M_j`` marks
    neighbours within ``CORE_FACTOR`` of that radius as covered. Points
    where the partition of unity still vanishes are swept again in
    later rounds.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    cover_dom = fine if fine is not None else domain
    cloud = _image_cloud(f, cover_dom)
    pts = _real(cloud)
    span = float(np.ptp(pts, axis=0).max()) if len(pts) else 0.0
    radius_cap = max(2.0 * span, eps)
    tree = cKDTree(pts)
    cache = {}
    solved = {}
    order = np.lexsort(pts.T[::-1])
    covered = np.zeros(len(pts), dtype=bool)
    chosen = []
    for rnd in range(1, max_rounds + 1):
        for i in order:
            if covered[i]:
                continue
            i = int(i)
            data = smooth_vanishing_data(f, g, cloud[i], eps, domain, fine, _cache=cache)
            solved[i] = per_lambda_solve(f, data, domain, fine, radius_cap).compact()
            chosen.append(i)
            if progress is not None:
                progress(len(chosen), solved[i])
            covered[tree.query_ball_point(pts[i], CORE_FACTOR * solved[i].radius)] = True
        centers = cloud[chosen]
        radii = np.array([solved[i].radius for i in chosen])
        _, total = partition_weights(centers, radii, cloud)
        covered = total >= PARTITION_FLOOR
        if covered.all():
            Ms = np.array([solved[i].M for i in chosen])
            return LambdaNet(centers, radii, Ms, [solved[i] for i in chosen], rnd,
                             float(total.min()))
    bad = cloud[~covered]
    raise CertificateError(
        "net-stabilize",
        f"{len(bad)} image points stay uncovered after {max_rounds} rounds, "
        f"e.g. near {bad[0]}")


@dataclass
class Approximant:
    """Assembled ``h = sum_j G_j chi_j(f)`` with its error certificates."""

    net: LambdaNet = field(repr=False)
    values: np.ndarray = field(repr=False)
    error: float
    coarse_error: float
    model_term: float
    smoothing_term: float
    eps: float
    passed: bool
    domain: object = field(repr=False, default=None)
    sw_error: float = float("nan")


def assemble(net, f, g, eps, domain, fine=None):
    """Glue the per-centre solutions with the partition of unity.

    Evaluated on ``fine`` when given (otherwise on ``domain``).  Checks at
    every node ``|h - g| <= sum chi_j M_j |f - lambda_j| + sum chi_j
    |g^j - g| <= 2 eps`` term by term.
    """
    dom = fine if fine is not None else domain
    inside = dom.inside_mask
    cloud = _image_cloud(f, dom)
    weights, total = net.partition(cloud)
    if total.min(initial=1.0) < PARTITION_FLOOR:
        raise CertificateError("cover", "some image point has no partition weight")
    node_index = np.nonzero(inside)
    gv = g(dom.points[inside])
    hv = np.zeros(len(cloud), dtype=complex)
    model = np.zeros(len(cloud))
    smooth = np.zeros(len(cloud))
    # map from flat inside position to full node index
    pos = np.full(dom.shape, -1)
    pos[node_index] = np.arange(len(cloud))
    for (idx, chi), sol in zip(weights, net.solves):
        if fine is not None:
            where = pos[sol.fine_index]
            lookup = np.full(len(cloud), -1)
            lookup[where] = np.arange(len(where))
            k = lookup[idx]
            if np.any(k < 0):
                raise CertificateError("cover", "partition support leaves the stored ball")
            G = sol.G_fine[k]
            glam = sol.g_lambda_fine[k]
        else:
            nodes = tuple(a[idx] for a in node_index)
            G = sol.G[nodes]
            glam = sol.data.values[nodes]
        hv[idx] += chi * G
        d = np.sqrt(np.sum(np.abs(cloud[idx] - sol.lam) ** 2, axis=-1))
        model[idx] += chi * sol.M * d
        smooth[idx] += chi * np.abs(glam - gv[idx])
    err_nodes = np.abs(hv - gv)
    if np.any(err_nodes > model + smooth + 1e-12 * (1 + np.abs(gv))):
        raise CertificateError("triangle", "nodewise error exceeds its two-term bound")
    values = np.zeros(dom.shape, dtype=complex)
    values[node_index] = hv
    error = float(err_nodes.max(initial=0.0))
    coarse = error
    if fine is not None:
        coarse = float(np.abs(values[::2, ::2] - g(domain.points))[domain.inside_mask].max(initial=0.0))
    mt = float(model.max(initial=0.0))
    st = float(smooth.max(initial=0.0))
    passed = error <= 2 * eps and mt <= eps and st < eps
    return Approximant(net, values, error, coarse, mt, st, eps, passed, dom)


def approximate(f, g, eps, domain, verify_refined=True, progress=None, certify=True):
    """Full pipeline: hypotheses, net, per-centre solves, assembly."""
    if domain.n != 1:
        raise ValueError("the approximation pipeline is implemented on the disc only")
    check_vanishing_hypotheses(f, g, domain, eps)
    fine = refine(domain) if verify_refined else None
    net = build_lambda_net(f, g, eps, domain, fine, progress=progress)
    approx = assemble(net, f, g, eps, domain, fine)
    if certify and not approx.passed:
        raise CertificateError(
            "two-eps", f"sup |h - g| = {approx.error:.3e} (model term {approx.model_term:.3e}, "
            f"smoothing term {approx.smoothing_term:.3e}) against 2 eps = {2 * eps:.3e}")
    return approx


def stone_weierstrass_fit(net, j, f, domain, degree):
    """Polynomial in ``(f, conj f)`` approximating ``chi_j(f)`` on the image.

    Fits a tensor Chebyshev series in ``(Re w, Im w)`` by least squares on
    the image cloud (m = 1).  Returns ``(coefficients, max_error)``; the
    series is a polynomial in ``w`` and ``conj w`` of total degree at most
    ``2 * degree``.
    """
    if f.m != 1:
        raise ValueError("the polynomial fit is implemented for m = 1")
    cloud = _image_cloud(f, domain)[:, 0]
    weights, _ = net.partition(cloud[:, None])
    target = np.zeros(len(cloud))
    idx, vals = weights[j]
    target[idx] = vals
    x, y = cloud.real, cloud.imag
    lo = np.array([x.min(), y.min()])
    hi = np.array([x.max(), y.max()])
    span = np.where(hi > lo, hi - lo, 1.0)
    u = 2 * (x - lo[0]) / span[0] - 1
    v = 2 * (y - lo[1]) / span[1] - 1
    V = np.polynomial.chebyshev.chebvander2d(u, v, [degree, degree])
    coef, *_ = np.linalg.lstsq(V, target, rcond=None)
    err = float(np.abs(V @ coef - target).max())
    return coef.reshape(degree + 1, degree + 1), err


def write_lambda_table(net, path):
    """CSV of the per-centre table: lambda, radius, M, ||dbar G||, tolerance."""
    m = net.centers.shape[1]
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["j", *[f"re_lambda{l + 1}" for l in range(m)],
                      *[f"im_lambda{l + 1}" for l in range(m)],
                      "radius", "M", "dbar_G", "tolerance"])
        for j, s in enumerate(net.solves):
            out.writerow([j, *[repr(float(c.real)) for c in s.lam],
                          *[repr(float(c.imag)) for c in s.lam],
                          repr(float(s.radius)), repr(float(s.M)),
                          repr(float(s.dbar_G)), repr(float(s.tolerance))])
