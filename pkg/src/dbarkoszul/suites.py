"""Seeded verification suites for the form algebra and the dbar solver.

Both suites draw every random quantity from one ``numpy`` generator, so a
seed fixes the whole run.  Results are rows of plain numbers that the
command-line front end writes to CSV.
"""

import csv
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .dbar import solve_dbar_form
from .forms import KoszulForm, dbar_apply, erode, index_list, koszul_contract, wedge
from .grid import GridDomain, build_domain, smooth_step, window
from .holomap import HoloMap, preset_map

__all__ = [
    "SmoothField",
    "random_field",
    "random_form",
    "suite_map",
    "CheckRow",
    "AlgebraReport",
    "algebra_suite",
    "commutation_order",
    "SolverCase",
    "solver_corpus",
    "SolverReport",
    "solver_suite",
    "disc_indicator_check",
]

PRODUCT_TOL = 1e-12     # T_f T_f and Leibniz, relative to the natural scale
DD_TOL = 1e-12          # dbar dbar, relative to max(sup |W|, 1)
COMMUTE_FACTOR = 10.0   # T_f dbar - dbar T_f <= factor h^2 scale
COMMUTE_ORDER = 1.5
WINDOW_SIZE = 9
WINDOWS_PER_FORM = 2
POINT_SAMPLE = 512


# ---------------------------------------------------------------- random data


@dataclass(frozen=True)
class SmoothField:
    """``sum_q c_q exp(i <k_q, x>)`` over the 2n real coordinates.

    Closed form, so the same field can be sampled on any grid, window or
    node set.  Integer frequencies with ``|k| <= 2`` keep every derivative
    of order ``j`` below ``2^j`` times the coefficient sum.
    """

    freqs: np.ndarray     # (terms, 2n) integers
    coeffs: np.ndarray    # (terms,) complex

    def on_grid(self, domain):
        out = np.zeros(domain.shape, dtype=complex)
        nax = len(domain.axes)
        for k, c in zip(self.freqs, self.coeffs):
            term = np.array(c, dtype=complex)
            for a, coords in enumerate(domain.axes):
                shape = [1] * nax
                shape[a] = len(coords)
                term = term * np.exp(1j * k[a] * coords).reshape(shape)
            out += term
        return out

    def on_points(self, points):
        pts = np.asarray(points, dtype=complex)
        x = np.stack([pts.real, pts.imag], axis=-1).reshape(*pts.shape[:-1], -1)
        return np.exp(1j * x @ self.freqs.T.astype(float)) @ self.coeffs

    def sample(self, domain):
        if isinstance(domain, GridDomain):
            return self.on_grid(domain)
        return self.on_points(domain.points)


def random_field(rng, n, terms=3, max_freq=2):
    freqs = rng.integers(-max_freq, max_freq + 1, size=(terms, 2 * n))
    coeffs = (rng.normal(size=terms) + 1j * rng.normal(size=terms)) / terms
    return SmoothField(freqs, coeffs)


def random_form(domain, m, r, s, rng):
    """Form of degree ``(r, s)`` whose coefficients are independent smooth fields.

    Returns ``(form, fields)`` so the same form can be resampled elsewhere.
    """
    fields = _random_fields(domain.n, m, r, s, rng)
    return _sample_form(domain, m, r, s, fields), fields


def _random_fields(n, m, r, s, rng):
    return [[random_field(rng, n) for _ in index_list(n, s)] for _ in index_list(m, r)]


def _sample_form(domain, m, r, s, fields):
    Js, Ks = index_list(m, r), index_list(domain.n, s)
    coeffs = np.zeros((len(Js), len(Ks), *domain.shape), dtype=complex)
    for a in range(len(Js)):
        for b in range(len(Ks)):
            coeffs[a, b] = fields[a][b].sample(domain)
    return KoszulForm(domain, m, r, s, coeffs)


def _exp_map(n):
    comps = (lambda p: np.exp(p[..., 0]),)
    jac = lambda p: np.stack([np.exp(p[..., 0])] + [np.zeros(p.shape[:-1], complex)] * (n - 1),
                             axis=-1)[..., None, :]
    return comps, jac


def suite_map(n, m):
    """Holomorphic map with ``m`` components used by the algebra suite."""
    if n == 1:
        if m == 1:
            return preset_map("z^2")
        if m == 2:
            return preset_map("z,1-z")
        if m == 3:
            ez, _ = _exp_map(1)
            comps = (lambda p: p[..., 0], lambda p: p[..., 0] ** 2, ez[0])
            jac = lambda p: np.stack([np.ones(p.shape[:-1], complex), 2 * p[..., 0],
                                      np.exp(p[..., 0])], axis=-1)[..., None]
            return HoloMap("z,z^2,exp(z)", 1, comps, jac)
    if n == 2:
        if m == 1:
            comps = (lambda p: p[..., 0] * p[..., 1],)
            jac = lambda p: np.stack([p[..., 1], p[..., 0]], axis=-1)[..., None, :]
            return HoloMap("z1*z2", 2, comps, jac)
        if m == 2:
            return preset_map("z1,z2")
        if m == 3:
            comps = (lambda p: p[..., 0], lambda p: p[..., 1], lambda p: p[..., 0] * p[..., 1])
            zero = lambda p: np.zeros(p.shape[:-1], complex)
            one = lambda p: np.ones(p.shape[:-1], complex)
            jac = lambda p: np.stack([
                np.stack([one(p), zero(p)], axis=-1),
                np.stack([zero(p), one(p)], axis=-1),
                np.stack([p[..., 1], p[..., 0]], axis=-1)], axis=-2)
            return HoloMap("z1,z2,z1*z2", 2, comps, jac)
    raise ValueError(f"no suite map for n={n}, m={m}")


# ------------------------------------------------------------- algebra suite


@dataclass
class CheckRow:
    """Worst case of one identity over the forms of one degree."""

    domain: str
    h: float
    m: int
    r: int
    s: int
    identity: str
    forms: int
    worst: float          # largest defect divided by its scale
    bound: float          # allowed value of ``worst``
    node: tuple = ()      # complex coordinates of the worst node

    @property
    def passed(self):
        return self.worst <= self.bound


@dataclass
class AlgebraReport:
    rows: list = field(default_factory=list)
    orders: dict = field(default_factory=dict)   # m -> (hs, defects, fitted order)
    seconds: float = 0.0

    @property
    def passed(self):
        return all(r.passed for r in self.rows) and all(
            o[2] >= COMMUTE_ORDER for o in self.orders.values())

    def failures(self):
        return [r for r in self.rows if not r.passed]

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["domain", "h", "m", "r", "s", "identity", "forms", "worst", "bound",
                        "passed", "node"])
            for r in self.rows:
                node = " ".join(f"{complex(z).real:.6g}{complex(z).imag:+.6g}j" for z in r.node)
                w.writerow([r.domain, f"{r.h:.17g}", r.m, r.r, r.s, r.identity, r.forms,
                            f"{r.worst:.6e}", f"{r.bound:.6e}", int(r.passed), node])

    def write_order_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["m", "h", "defect", "fitted_order"])
            for m in sorted(self.orders):
                hs, ds, order = self.orders[m]
                for hv, dv in zip(hs, ds):
                    w.writerow([m, f"{hv:.17g}", f"{dv:.6e}", f"{order:.6f}"])


class _Worst:
    def __init__(self):
        self.value = 0.0
        self.node = ()

    def update(self, defect_field, mask, scale, domain):
        vals = np.where(mask, defect_field, 0.0)
        if not vals.size:
            return
        i = int(np.argmax(vals))
        v = float(vals.ravel()[i]) / scale
        if v > self.value:
            idx = np.unravel_index(i, vals.shape)
            self.value = v
            self.node = tuple(np.atleast_1d(domain.points[idx]))


def _degrees(m, n):
    return [(r, s) for r in range(m + 1) for s in range(n + 1)]


def _pointwise_domain(domain, rng):
    if domain.n == 1:
        return domain
    return domain.sample_nodes(POINT_SAMPLE, rng)


def _check_products(domain, f, m, forms, rng, alternating, rows):
    """``T_f T_f = 0`` and Leibniz at every node of ``domain``."""
    n = domain.n
    sf = max(f.sup(domain), 1.0)
    label = "disc" if n == 1 else "bidisc"
    h = domain.h
    degs = _degrees(m, n)
    for r, s in degs:
        tt, lb = _Worst(), _Worst()
        for _ in range(forms):
            A, _ = random_form(domain, m, r, s, rng)
            sA = max(A.sup_norm(), 1e-300)
            if r >= 2:
                TT = koszul_contract(f, koszul_contract(f, A, alternating), alternating)
                tt.update(TT.abs_max(), TT.valid, sf ** 2 * sA, domain)
            partners = [(rb, sb) for rb, sb in degs if r + rb <= m and s + sb <= n]
            rb, sb = partners[rng.integers(len(partners))]
            B, _ = random_form(domain, m, rb, sb, rng)
            lhs = koszul_contract(f, wedge(A, B), alternating)
            rhs = wedge(koszul_contract(f, A, alternating), B)
            second = wedge(A, koszul_contract(f, B, alternating))
            rhs = rhs + (second if r % 2 == 0 else -second)
            D = lhs - rhs
            scale = sf * sA * max(B.sup_norm(), 1e-300)
            lb.update(D.abs_max(), D.valid, scale, domain)
        if r >= 2:
            rows.append(CheckRow(label, h, m, r, s, "TfTf", forms, tt.value, PRODUCT_TOL, tt.node))
        rows.append(CheckRow(label, h, m, r, s, "leibniz", forms, lb.value, PRODUCT_TOL, lb.node))


def _grid_defects(dom, f, m, r, s, fields, alternating):
    """``(dbar dbar W, T_f dbar W - dbar T_f W, sup |W|)`` on one grid."""
    W = _sample_form(dom, m, r, s, fields)
    out = {}
    dW = dbar_apply(W) if s < dom.n else None
    if dW is not None and s + 2 <= dom.n:
        out["dbar-dbar"] = dbar_apply(dW)
    if dW is not None and r >= 1:
        lhs = koszul_contract(f, dW, alternating)
        rhs = dbar_apply(koszul_contract(f, W, alternating))
        out["commutation"] = (lhs - rhs).with_valid(erode(W.valid))
    return out, W.sup_norm()


def _grid_pieces(domain, rng):
    """The grid itself (disc) or random windows around masked-in nodes (bidisc)."""
    if domain.n == 1:
        return [domain]
    pieces = []
    inside = np.flatnonzero(domain.inside_mask)
    for _ in range(WINDOWS_PER_FORM):
        centre = np.unravel_index(inside[rng.integers(inside.size)], domain.shape)
        start = [min(max(c - WINDOW_SIZE // 2, 0), len(a) - WINDOW_SIZE)
                 for c, a in zip(centre, domain.axes)]
        pieces.append(window(domain, start, WINDOW_SIZE))
    return pieces


def _commute_scale(f, domain, w_sup):
    return max(f.sup(domain), 1.0) * w_sup


def _check_dbar(domain, f, m, forms, rng, alternating, rows):
    n = domain.n
    label = "disc" if n == 1 else "bidisc"
    h = domain.h
    for r, s in _degrees(m, n):
        need_dd = s + 2 <= n
        need_cm = r >= 1 and s < n
        if not (need_dd or need_cm):
            continue
        dd, cm = _Worst(), _Worst()
        for _ in range(forms):
            fields = _random_fields(n, m, r, s, rng)
            for piece in _grid_pieces(domain, rng):
                defects, w_sup = _grid_defects(piece, f, m, r, s, fields, alternating)
                w_sup = max(w_sup, 1e-300)
                if "dbar-dbar" in defects:
                    D = defects["dbar-dbar"]
                    dd.update(D.abs_max(), D.valid, max(w_sup, 1.0), piece)
                if "commutation" in defects:
                    D = defects["commutation"]
                    cm.update(D.abs_max(), D.valid, h ** 2 * _commute_scale(f, domain, w_sup), piece)
        if need_dd:
            rows.append(CheckRow(label, h, m, r, s, "dbar-dbar", forms, dd.value, DD_TOL, dd.node))
        if need_cm:
            rows.append(CheckRow(label, h, m, r, s, "commutation", forms, cm.value,
                                 COMMUTE_FACTOR, cm.node))


def commutation_order(f, m, hs, rng, forms=5, alternating=True):
    """Sup commutation defect on the disc for fixed forms at each spacing.

    Returns ``(defects, fitted order)``; the order is the least-squares
    slope of ``log defect`` against ``log h``.
    """
    fields = [random_form(build_domain("disc", 1.0, hs[0]), m, 1, 0, rng)[1]
              for _ in range(forms)]
    defects = []
    for h in hs:
        dom = build_domain("disc", 1.0, h)
        worst = 0.0
        for fl in fields:
            D, _ = _grid_defects(dom, f, m, 1, 0, fl, alternating)
            worst = max(worst, D["commutation"].sup_norm())
        defects.append(worst)
    d = np.asarray(defects)
    if np.any(d <= 0):
        return defects, math.inf
    slope = np.polyfit(np.log(hs), np.log(d), 1)[0]
    return defects, float(slope)


def algebra_suite(seed=0, forms=50, disc_h=1 / 32, bidisc_h=1 / 16,
                  order_hs=(1 / 16, 1 / 32, 1 / 64), ms=(1, 2, 3), alternating=True,
                  progress=None):
    """Run the form-algebra identities with seeded random forms.

    Pointwise identities (``T_f T_f = 0``, Leibniz) are checked at every
    disc node and at ``POINT_SAMPLE`` random bidisc nodes.  Difference
    identities (``dbar dbar = 0``, ``T_f dbar = dbar T_f``) are checked on
    the whole disc grid and on random ``WINDOW_SIZE^4`` windows of the
    bidisc grid; a stencil operator gives identical values on a window.
    ``alternating=False`` corrupts the contraction sign to exercise the
    failure path.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    report = AlgebraReport()
    for kind, h in (("disc", disc_h), ("polydisc", bidisc_h)):
        domain = build_domain(kind, 1.0 if kind == "disc" else (1.0, 1.0), h)
        for m in ms:
            f = suite_map(domain.n, m)
            pts = _pointwise_domain(domain, rng)
            _check_products(pts, f, m, forms, rng, alternating, report.rows)
            _check_dbar(domain, f, m, forms, rng, alternating, report.rows)
            if progress is not None:
                progress(kind, m)
    for m in ms:
        f = suite_map(1, m)
        defects, order = commutation_order(f, m, order_hs, rng, alternating=alternating)
        report.orders[m] = (tuple(order_hs), tuple(defects), order)
    report.seconds = time.perf_counter() - t0
    return report


# --------------------------------------------------------------- solver suite


@dataclass(frozen=True)
class SolverCase:
    """Manufactured data ``w = dbar phi`` (or any top-degree form) in closed form."""

    name: str
    kind: str
    m: int
    r: int
    s: int
    components: object   # points (..., n) -> {(J, K): values}

    def form(self, domain):
        vals = self.components(domain.points)
        return KoszulForm.from_components(domain, self.m, self.r, self.s, vals)


def _gauss(p, a=4.0):
    return np.exp(-a * np.sum(np.abs(p) ** 2, axis=-1))


def _bump1(p, r=0.7):
    return smooth_step((np.abs(p[..., 0]) - 0.3 * r) / (0.7 * r))


def solver_corpus():
    """Ten manufactured right-hand sides on the disc and the bidisc."""
    z = lambda p: p[..., 0]
    z1 = lambda p: p[..., 0]
    z2 = lambda p: p[..., 1]
    cases = [
        # d/dzbar of zbar, |z|^2, zbar^2 z, exp(-4|z|^2), sin(x)
        SolverCase("one", "disc", 1, 0, 1, lambda p: {((), (0,)): np.ones(p.shape[:-1])}),
        SolverCase("z", "disc", 1, 0, 1, lambda p: {((), (0,)): z(p)}),
        SolverCase("2|z|^2", "disc", 1, 0, 1, lambda p: {((), (0,)): 2 * np.abs(z(p)) ** 2}),
        SolverCase("gauss", "disc", 1, 0, 1,
                   lambda p: {((), (0,)): -4 * z(p) * _gauss(p)}),
        SolverCase("cos", "disc", 1, 0, 1, lambda p: {((), (0,)): 0.5 * np.cos(z(p).real)}),
        SolverCase("two-component", "disc", 2, 1, 1, lambda p: {
            ((0,), (0,)): z(p),
            ((1,), (0,)): np.exp(z(p)) * _bump1(p)}),
        # bidisc (0,1): dbar(zbar1 zbar2), dbar(|z1|^2 z2), dbar exp(-4|z|^2)
        SolverCase("zbar1zbar2", "polydisc", 1, 0, 1, lambda p: {
            ((), (0,)): np.conj(z2(p)), ((), (1,)): np.conj(z1(p))}),
        SolverCase("|z1|^2z2", "polydisc", 1, 0, 1, lambda p: {((), (0,)): z1(p) * z2(p)}),
        SolverCase("gauss2", "polydisc", 1, 0, 1, lambda p: {
            ((), (0,)): -4 * z1(p) * _gauss(p), ((), (1,)): -4 * z2(p) * _gauss(p)}),
        # bidisc (0,2): every top-degree form is closed
        SolverCase("top", "polydisc", 1, 0, 2, lambda p: {((), (0, 1)): _gauss(p, 2.0)}),
    ]
    return cases


@dataclass
class SolverReport:
    rows: list = field(default_factory=list)   # (case, h, residual, input_sup, bound)
    orders: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self):
        return (all(res <= bound for _, _, res, _, bound in self.rows)
                and all(o >= 1.0 for o in self.orders.values()))

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["case", "h", "residual", "input_sup", "bound", "order"])
            for name, h, res, wsup, bound in self.rows:
                w.writerow([name, f"{h:.17g}", f"{res:.6e}", f"{wsup:.6e}", f"{bound:.6e}",
                            f"{self.orders.get(name, float('nan')):.6f}"])


SOLVER_SPACINGS = {"disc": (1 / 16, 1 / 32, 1 / 64), "polydisc": (1 / 12, 1 / 16, 1 / 24)}


def solver_suite(cases=None, spacings=None, factor=10.0):
    """Residual ``||dbar u - w||`` against ``factor h ||w||`` on every case.

    The order is the least-squares slope of ``log residual`` in ``log h``
    over the spacings of the case's domain.
    """
    t0 = time.perf_counter()
    cases = solver_corpus() if cases is None else cases
    spacings = SOLVER_SPACINGS if spacings is None else spacings
    report = SolverReport()
    for case in cases:
        hs = spacings[case.kind]
        res = []
        for h in hs:
            radii = 1.0 if case.kind == "disc" else (1.0, 1.0)
            dom = build_domain(case.kind, radii, h)
            sol = solve_dbar_form(case.form(dom))
            res.append(sol.residual_sup)
            report.rows.append((case.name, h, sol.residual_sup, sol.input_sup,
                                factor * h * sol.input_sup))
        r = np.asarray(res)
        report.orders[case.name] = (math.inf if np.any(r <= 0)
                                    else float(np.polyfit(np.log(hs), np.log(r), 1)[0]))
    report.seconds = time.perf_counter() - t0
    return report


def disc_indicator_check(h=1 / 64, rho=0.5):
    """Sup error of the Cauchy transform of the indicator of ``|z| < rho``.

    The closed form is ``zbar`` inside and ``rho^2 / z`` outside.  Returns
    ``(error, solution)``.
    """
    dom = build_domain("disc", 1.0, h)
    z = dom.z(0)
    w = (np.abs(z) < rho).astype(complex)
    sol = solve_dbar_form(KoszulForm(dom, 1, 0, 1, w[None, None]), check_closed=False)
    u = sol.solution.coeffs[0, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        exact = np.where(np.abs(z) < rho, np.conj(z), rho ** 2 / z)
    err = float(np.abs(u - exact)[dom.inside_mask].max())
    return err, sol
