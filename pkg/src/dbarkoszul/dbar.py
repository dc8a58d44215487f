"""Bounded solutions of the dbar equation on the disc and the bidisc.

The one-variable solver is the Cauchy transform

    u(z) = -(1/pi) * integral w(zeta) / (zeta - z) dA(zeta),

discretised with the exact integral of the kernel over each grid cell, so
the singular cell needs no special treatment.  The sum over cells is a
discrete convolution, evaluated by FFT.

Data is only trusted on its ``valid`` mask.  Before transforming, it is
continued past the mask by a first-order Taylor extension tapered to zero.
Inside the mask this changes ``u`` by a holomorphic function only, and it
removes the jump that a zero extension would put at the edge of the mask.

On the bidisc a (0,1)-form is solved one variable at a time: first
``u = T_1 w_1`` along z_1, then the remainder ``w_2 - dbar_2 u``, which is
holomorphic in z_1, is solved along z_2.
"""

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy import fft, ndimage

from .errors import HypothesisError
from .forms import KoszulForm, dbar_apply, erode, wirtinger_dbar, _fmt_index
from .grid import smooth_step

__all__ = [
    "DbarSolution",
    "cell_kernel",
    "cauchy_transform",
    "solve_dbar_1d",
    "solve_dbar_compact_2d",
    "solve_dbar_form",
    "closed_tolerance",
    "write_solution_csv",
]

_CHUNK_BYTES = 64 * 2 ** 20


def _F(s, t):
    # antiderivative of s / (s^2 + t^2) in both variables, up to terms
    # that cancel in the rectangle difference
    r2 = s * s + t * t
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(r2 > 0, 0.5 * t * np.log(np.where(r2 > 0, r2, 1.0)), 0.0)
        b = np.where(s != 0, s * np.arctan(t / np.where(s != 0, s, 1.0)), 0.0)
    return a + b


def _rect(F, s0, s1, t0, t1):
    return F(s1, t1) - F(s0, t1) - F(s1, t0) + F(s0, t0)


def cell_kernel(s0, s1, t0, t1):
    """Exact ``integral of 1/xi dA(xi)`` over ``[s0, s1] x [t0, t1]``."""
    re = _rect(_F, s0, s1, t0, t1)
    im = _rect(lambda s, t: _F(t, s), s0, s1, t0, t1)
    return re - 1j * im


class _Transform:
    """FFT plan for the cell-kernel convolution on a fixed (Mx, My) box."""

    _plans = {}

    def __init__(self, Mx, My, h, offset):
        self.shape = (Mx, My)
        self.fshape = (fft.next_fast_len(2 * Mx - 1), fft.next_fast_len(2 * My - 1))
        dx = np.arange(-(Mx - 1), Mx) * h - offset[0]
        dy = np.arange(-(My - 1), My) * h - offset[1]
        # kernel at source - target = d: cell [d - h/2, d + h/2]
        K = cell_kernel(dx[:, None] - h / 2, dx[:, None] + h / 2,
                        dy[None, :] - h / 2, dy[None, :] + h / 2)
        # convolution form: u[p] = sum_q a[q] K[q - p] = sum_q a[q] Kf[p - q]
        Kf = K[::-1, ::-1]
        circ = np.zeros(self.fshape, dtype=complex)
        ix = np.arange(-(Mx - 1), Mx) % self.fshape[0]
        iy = np.arange(-(My - 1), My) % self.fshape[1]
        circ[np.ix_(ix, iy)] = Kf
        self.kernel_hat = fft.fft2(circ)

    @classmethod
    def get(cls, Mx, My, h, offset=(0.0, 0.0)):
        key = (Mx, My, float(h), tuple(float(o) for o in offset))
        plan = cls._plans.get(key)
        if plan is None:
            if len(cls._plans) > 32:
                cls._plans.clear()
            plan = cls._plans[key] = cls(Mx, My, h, offset)
        return plan

    def __call__(self, data):
        Mx, My = self.shape
        out = np.empty(data.shape, dtype=complex)
        per = 16 * self.fshape[0] * self.fshape[1]
        step = max(1, _CHUNK_BYTES // per)
        for i in range(0, data.shape[0], step):
            hat = fft.fft2(data[i:i + step], s=self.fshape, axes=(-2, -1))
            conv = fft.ifft2(hat * self.kernel_hat, axes=(-2, -1))
            out[i:i + step] = conv[:, :Mx, :My]
        return out * (-1.0 / np.pi)


class _Extension:
    """Nearest-node Taylor extension of data past a 2-D mask, with taper."""

    _cache = {}

    def __init__(self, mask, h, width):
        self.pad = int(np.ceil(width / h)) + 2
        P = self.pad
        big = np.pad(mask, P)
        core = erode(big)
        if not core.any():
            core = big
        self.mask = big
        _, (qx, qy) = ndimage.distance_transform_edt(~core, return_indices=True)
        dist_out = ndimage.distance_transform_edt(~big) * h
        self.outside = ~big
        self.qx = qx[self.outside]
        self.qy = qy[self.outside]
        ix, iy = np.nonzero(self.outside)
        self.ix, self.iy = ix, iy
        self.dx = (ix - self.qx) * h
        self.dy = (iy - self.qy) * h
        self.taper = smooth_step(dist_out[self.outside] / width)
        self.has_grad = core is not big

    @classmethod
    def get(cls, mask, h, width):
        key = (mask.shape, mask.tobytes(), float(h), float(width))
        ext = cls._cache.get(key)
        if ext is None:
            if len(cls._cache) > 64:
                cls._cache.clear()
            ext = cls._cache[key] = cls(mask, h, width)
        return ext

    def __call__(self, data, h):
        """``data`` has shape (batch, Mx, My); returns the padded extension."""
        P = self.pad
        big = np.pad(data, ((0, 0), (P, P), (P, P)))
        big[:, self.outside] = 0.0
        if self.outside.any():
            base = big[:, self.qx, self.qy]
            if self.has_grad:
                gx = (big[:, self.qx + 1, self.qy] - big[:, self.qx - 1, self.qy]) / (2 * h)
                gy = (big[:, self.qx, self.qy + 1] - big[:, self.qx, self.qy - 1]) / (2 * h)
                base = base + gx * self.dx + gy * self.dy
            big[:, self.ix, self.iy] = base * self.taper
        return big


def _taper_width(h, radius):
    return max(4 * h, 0.25 * radius)


def cauchy_transform(data, valid, h, radius, refine=1):
    """Cauchy transform of a batch of 2-D fields.

    Parameters
    ----------
    data : complex array (batch, Mx, My)
    valid : bool array (Mx, My), where ``data`` is trusted
    h : grid spacing
    radius : length scale of the domain, sets the taper width
    refine : 1 for values at the nodes, 2 for values on the grid with
        spacing h/2 over the same box

    Returns
    -------
    complex array (batch, Mx, My) or (batch, 2Mx-1, 2My-1)
    """
    data = np.asarray(data, dtype=complex)
    batch, Mx, My = data.shape
    if not valid.any():
        shape = (batch, Mx, My) if refine == 1 else (batch, 2 * Mx - 1, 2 * My - 1)
        return np.zeros(shape, dtype=complex)
    ext = _Extension.get(valid, h, _taper_width(h, radius))
    P = ext.pad
    bx, by = Mx + 2 * P, My + 2 * P
    shape = (batch, Mx, My) if refine == 1 else (batch, 2 * Mx - 1, 2 * My - 1)
    out = np.empty(shape, dtype=complex)
    # bound the padded temporaries by processing the batch in chunks
    step = max(1, _CHUNK_BYTES // (16 * bx * by))
    for i in range(0, batch, step):
        big = ext(data[i:i + step], h)
        if refine == 1:
            out[i:i + step] = _Transform.get(bx, by, h)(big)[:, P:P + Mx, P:P + My]
            continue
        for a in (0, 1):
            for b in (0, 1):
                u = _Transform.get(bx, by, h, (a * h / 2, b * h / 2))(big)
                out[i:i + step, a::2, b::2] = u[:, P:P + Mx - a, P:P + My - b]
    return out


def closed_tolerance(h, w_sup):
    """``20 h ||w||``: allowed discrete dbar of data called closed."""
    return 20.0 * h * w_sup


@dataclass
class DbarSolution:
    """A solution ``u`` of ``dbar u = w`` with its certified residual."""

    solution: KoszulForm
    data: KoszulForm
    residual_sup: float
    input_sup: float
    component_residuals: dict = field(default_factory=dict)

    @property
    def bound_constant(self):
        """Empirical ``||u|| / ||w||``."""
        if self.input_sup == 0:
            return 0.0
        return self.solution.sup_norm() / self.input_sup

    def residual_form(self):
        return dbar_apply(self.solution) - self.data

    def recompute_residual(self):
        return self.residual_form().sup_norm()


def _certify(u, w):
    res = dbar_apply(u) - w
    per = {}
    amax = np.abs(res.coeffs).max(axis=1) if res.coeffs.size else None
    for i, J in enumerate(w.Js):
        vals = amax[i][res.valid]
        per[J] = float(vals.max()) if vals.size else 0.0
    return DbarSolution(u, w, res.sup_norm(), w.sup_norm(), per)


def _check_closed(w):
    if w.s >= w.n or w.is_zero():
        return
    dw = dbar_apply(w).sup_norm()
    tol = closed_tolerance(w.domain.h, w.sup_norm())
    if dw > tol:
        raise HypothesisError("input-closed", f"||dbar w|| = {dw:.3e} exceeds {tol:.3e}")


def _transform_axes(arr, valid, dom, k, refine=1):
    """Cauchy transform in the variable z_k of ``arr`` (batch, *dom.shape)."""
    h, R = dom.h, dom.radii[k]
    if dom.n == 1:
        return cauchy_transform(arr, valid, h, R, refine)
    batch = arr.shape[0]
    # move the z_k axes last, treat everything else as a batch of slices
    ax = (1 + 2 * k, 2 + 2 * k)
    moved = np.moveaxis(arr, ax, (-2, -1))
    vmoved = np.moveaxis(valid, (ax[0] - 1, ax[1] - 1), (-2, -1))
    out = np.zeros(moved.shape, dtype=complex)
    flat_valid = vmoved.reshape(-1, *vmoved.shape[2:])
    flat_data = moved.reshape(batch, -1, *moved.shape[3:])
    flat_out = out.reshape(batch, -1, *moved.shape[3:])
    groups = {}
    for i in range(flat_valid.shape[0]):
        if flat_valid[i].any():
            groups.setdefault(flat_valid[i].tobytes(), []).append(i)
    for idx in groups.values():
        mask = flat_valid[idx[0]]
        sl = flat_data[:, idx].reshape(-1, *mask.shape)
        res = cauchy_transform(sl, mask, h, R)
        flat_out[:, idx] = res.reshape(batch, len(idx), *mask.shape)
    out = flat_out.reshape(moved.shape)
    return np.moveaxis(out, (-2, -1), ax)


def solve_dbar_1d(w, domain, valid=None):
    """Solve ``du/dzbar = w`` on a disc grid for a scalar field ``w``."""
    if domain.n != 1:
        raise ValueError("solve_dbar_1d needs a grid in one complex variable")
    wf = KoszulForm(domain, 1, 0, 1, np.asarray(w)[None, None], valid)
    return solve_dbar_form(wf)


def solve_dbar_compact_2d(w):
    """Solve ``dbar Y = w`` for a closed (0,1)- or (0,2)-form on the bidisc."""
    if w.n != 2 or w.s not in (1, 2):
        raise ValueError("solve_dbar_compact_2d needs a (0,1)- or (0,2)-form on a bidisc grid")
    return solve_dbar_form(w)


def _solve_coeffs(w):
    """Coefficients of the solution for every J at once."""
    dom = w.domain
    valid = w.valid
    if dom.n == 1:
        u = _transform_axes(w.coeffs[:, 0], valid, dom, 0)
        return u[:, None]
    if w.s == 2:
        u1 = _transform_axes(w.coeffs[:, 0], valid, dom, 0)
        return u1[:, None]
    # s == 1 on the bidisc
    u = _transform_axes(w.coeffs[:, 0], valid, dom, 0)
    rem = w.coeffs[:, 1] - wirtinger_dbar(u, 1, dom.h, dom.n)
    rvalid = erode(valid, axes=(2, 3))
    rem = np.where(rvalid, rem, 0.0)
    v = _transform_axes(rem, rvalid, dom, 1)
    out = u + v
    return out[:, None]


def solve_dbar_form(w, check_closed=True):
    """Solve ``dbar Y = w`` one Koszul component ``e_J`` at a time.

    ``w`` has degree ``(r, s)`` with ``s >= 1``; the solution has degree
    ``(r, s - 1)``.  For ``s = 2`` on the bidisc the solution is
    ``u dzbar_2`` with ``du/dzbar_1 = w_12``.
    """
    if w.s < 1 or w.s > w.n:
        raise ValueError(f"cannot solve dbar for data of form degree {w.s}")
    if check_closed:
        _check_closed(w)
    dom = w.domain
    if not w.Js or w.is_zero():
        u = KoszulForm.zero(dom, w.m, w.r, w.s - 1, valid=w.valid)
        return _certify(u, w)
    coeffs = _solve_coeffs(w)
    if dom.n == 2 and w.s == 2:
        # u dzbar_2 among the (0,1) basis ((0,), (1,))
        full = np.zeros((len(w.Js), 2, *dom.shape), dtype=complex)
        full[:, 1] = coeffs[:, 0]
        coeffs = full
    u = KoszulForm(dom, w.m, w.r, w.s - 1, coeffs, w.valid)
    return _certify(u, w)


def write_solution_csv(sol, path):
    """Rows ``part, J, K, node..., re, im`` for input, solution and residual."""
    parts = [("input", sol.data), ("solution", sol.solution), ("residual", sol.residual_form())]
    nax = len(sol.data.domain.shape)
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["part", "J", "K", *[f"i{a}" for a in range(nax)], "re", "im"])
        for name, form in parts:
            nodes = np.argwhere(form.valid)
            for a, J in enumerate(form.Js):
                for b, K in enumerate(form.Ks):
                    vals = form.coeffs[a, b][form.valid]
                    for node, v in zip(nodes, vals):
                        out.writerow([name, _fmt_index(J), _fmt_index(K), *node.tolist(),
                                      repr(float(v.real)), repr(float(v.imag))])
