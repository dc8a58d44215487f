"""Truncated Bergman-space models on the disc and bidisc.

Functions are sampled on a polar product quadrature: Gauss-Legendre in the
radius (with the ``r dr`` weight folded in) times equispaced angles.  With
``nr`` radial and ``nt`` angular nodes per factor disc the rule integrates
``z^a conj(z)^b`` exactly whenever ``a + b <= 2 nr - 2`` and ``|a - b| < nt``.
Inner products use plain Lebesgue measure, so ``||z^k||^2 = pi R^(2k+2)/(k+1)``
on a disc of radius ``R``.
"""

import csv
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import CertificateError, HypothesisError
from .grid import build_domain
from .holomap import jacobian_rank_mask

__all__ = [
    "PolarQuadrature",
    "polar_quadrature",
    "monomial_norm_sq",
    "BergmanBasis",
    "ToeplitzMatrix",
    "toeplitz_matrix",
    "commutator_norm",
    "ACRReport",
    "acr_residual",
    "DensityCurve",
    "lp_density_residual",
    "mollifier_bump",
    "SYMBOLS",
    "symbol_from_name",
    "write_curve_csv",
]

GRAM_TOL = 1e-6
PIVOT_FLOOR = 1e-12     # squared Cholesky pivot relative to the column norm
CHUNK_POINTS = 8192


@dataclass(frozen=True)
class PolarQuadrature:
    """Product polar rule on a disc (n = 1) or bidisc (n = 2)."""

    radii: tuple
    nr: int
    nt: int
    points: np.ndarray = field(repr=False)   # (Q, n) complex
    weights: np.ndarray = field(repr=False)  # (Q,)

    @property
    def n(self):
        return len(self.radii)

    def __len__(self):
        return len(self.weights)

    def chunks(self, size=CHUNK_POINTS):
        for start in range(0, len(self), size):
            yield self.points[start:start + size], self.weights[start:start + size]

    def integrate(self, values):
        return complex(np.sum(self.weights * values))

    def l2_norm(self, fn):
        """``L^2`` norm of a callable on points, accumulated chunkwise."""
        total = 0.0
        for pts, w in self.chunks():
            total += float(np.sum(w * np.abs(fn(pts)) ** 2))
        return float(np.sqrt(total))


def _disc_rule(R, nr, nt):
    x, wx = np.polynomial.legendre.leggauss(nr)
    r = 0.5 * R * (x + 1)
    wr = 0.5 * R * wx * r
    theta = 2 * np.pi * np.arange(nt) / nt
    pts = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    w = (wr[:, None] * np.full(nt, 2 * np.pi / nt)[None, :]).ravel()
    return pts, w


def polar_quadrature(radii, nr, nt):
    """Tensor product of one polar rule per factor disc."""
    radii = tuple(float(r) for r in np.atleast_1d(radii))
    if len(radii) not in (1, 2):
        raise ValueError("only the disc and the bidisc are supported")
    if nr < 1 or nt < 1:
        raise ValueError("need at least one radial and one angular node")
    rules = [_disc_rule(R, nr, nt) for R in radii]
    if len(rules) == 1:
        pts, w = rules[0][0][:, None], rules[0][1]
    else:
        (p1, w1), (p2, w2) = rules
        pts = np.stack(np.broadcast_arrays(p1[:, None], p2[None, :]), axis=-1).reshape(-1, 2)
        w = (w1[:, None] * w2[None, :]).ravel()
    pts.setflags(write=False)
    w.setflags(write=False)
    return PolarQuadrature(radii, nr, nt, pts, w)


def monomial_norm_sq(alpha, radii):
    """Closed form ``||z^alpha||^2`` on the product of discs."""
    out = 1.0
    for a, R in zip(alpha, radii):
        out *= np.pi * R ** (2 * a + 2) / (a + 1)
    return out


def _multi_indices(n, N):
    """Exponents with total degree at most ``N``, graded then lexicographic."""
    out = [a for a in product(range(N + 1), repeat=n) if sum(a) <= N]
    return sorted(out, key=lambda a: (sum(a), tuple(-x for x in a)))


def _powers(values, top):
    """``values ** p`` for ``p = 0..top``, shape ``(top + 1, *values.shape)``."""
    out = np.empty((top + 1, *values.shape), dtype=complex)
    out[0] = 1.0
    for p in range(1, top + 1):
        out[p] = out[p - 1] * values
    return out


class BergmanBasis:
    """Orthonormal monomials ``z^alpha / ||z^alpha||`` with ``|alpha| <= N``.

    The Gram matrix is recomputed by quadrature and must be within
    ``GRAM_TOL`` of the identity; otherwise ``CertificateError("gram")``.
    """

    def __init__(self, N, radii=(1.0,), nr=None, nt=None, gram_tol=GRAM_TOL):
        if N < 0:
            raise ValueError("truncation degree must be non-negative")
        self.N = int(N)
        self.radii = tuple(float(r) for r in np.atleast_1d(radii))
        self.n = len(self.radii)
        self.indices = _multi_indices(self.n, self.N)
        self.degrees = np.array([sum(a) for a in self.indices])
        self.norms = np.sqrt([monomial_norm_sq(a, self.radii) for a in self.indices])
        nr = self.N + 16 if nr is None else nr
        nt = 2 * self.N + 32 if nt is None else nt
        self.quad = polar_quadrature(self.radii, nr, nt)
        self.gram_residual = float(np.abs(self.gram() - np.eye(self.dim)).max())
        if self.gram_residual > gram_tol:
            raise CertificateError(
                "gram", f"quadrature Gram matrix is {self.gram_residual:.3e} from the identity")

    @property
    def dim(self):
        return len(self.indices)

    def evaluate(self, points):
        """Basis values at complex points ``(Q, n)``, shape ``(Q, dim)``."""
        points = np.asarray(points, dtype=complex).reshape(-1, self.n)
        pw = [_powers(points[:, k], self.N) for k in range(self.n)]
        out = np.ones((len(points), self.dim), dtype=complex)
        for col, a in enumerate(self.indices):
            for k, ak in enumerate(a):
                if ak:
                    out[:, col] *= pw[k][ak]
        return out / self.norms

    def weighted_gram(self, weight=None):
        """``<weight e_beta, e_alpha>`` for all pairs, shape ``(dim, dim)``."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for pts, w in self.quad.chunks():
            E = self.evaluate(pts)
            ww = w if weight is None else w * np.asarray(weight(pts), dtype=complex)
            out += E.conj().T @ (ww[:, None] * E)
        return out

    def gram(self):
        return self.weighted_gram()

    def synthesize(self, coeffs, points):
        """Function ``sum_alpha c_alpha e_alpha`` at ``points``."""
        return self.evaluate(points) @ np.asarray(coeffs, dtype=complex)

    def interior(self, degree):
        """Boolean mask of basis elements with total degree at most ``degree``."""
        return self.degrees <= degree


_BASES = {}


def _basis(N, radii, nr=None, nt=None):
    key = (N, tuple(np.atleast_1d(radii).astype(float)), nr, nt)
    if key not in _BASES:
        _BASES[key] = BergmanBasis(N, radii, nr, nt)
    return _BASES[key]


@dataclass
class ToeplitzMatrix:
    """Matrix of ``T_g u = P(g u)`` in an orthonormal monomial basis.

    ``matrix[alpha, beta] = <g e_beta, e_alpha>``.
    """

    symbol: str
    N: int
    matrix: np.ndarray = field(repr=False)
    basis: BergmanBasis = field(repr=False)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def apply(self, coeffs):
        return self.matrix @ np.asarray(coeffs, dtype=complex)

    def degree_leak(self):
        """Largest entry that would break lower-triangularity in degree.

        For a holomorphic polynomial symbol ``T_g`` maps degree ``k`` into
        degrees ``>= k``; entries with ``deg alpha < deg beta`` vanish.
        """
        d = self.basis.degrees
        upper = d[:, None] < d[None, :]
        return float(np.abs(self.matrix[upper]).max(initial=0.0))


def _symbol_callable(symbol):
    if isinstance(symbol, str):
        return symbol, symbol_from_name(symbol)
    if callable(symbol):
        return getattr(symbol, "__name__", "symbol"), symbol
    c = complex(symbol)
    return f"{c:g}", lambda p: np.full(len(p), c)


def toeplitz_matrix(symbol, N, radii=(1.0,), nr=None, nt=None):
    """Truncated Toeplitz matrix of ``symbol`` on the disc or bidisc.

    Parameters
    ----------
    symbol : name in :data:`SYMBOLS`, constant, or callable on points ``(Q, n)``
    N : truncation degree
    radii : factor disc radii; one entry for the disc, two for the bidisc
    nr, nt : radial and angular nodes per factor disc

    Raises
    ------
    CertificateError
        ``gram`` when the quadrature cannot reproduce the orthonormal basis.
    """
    name, fn = _symbol_callable(symbol)
    basis = _basis(N, radii, nr, nt)
    sup = max(float(np.abs(fn(pts)).max(initial=0.0)) for pts, _ in basis.quad.chunks())
    if not np.isfinite(sup):
        raise HypothesisError("bounded-symbol", f"symbol {name} is not bounded on the quadrature nodes")
    values = basis.weighted_gram(fn)
    return ToeplitzMatrix(name, N, values, basis)


def commutator_norm(A, B, interior_degree=None):
    """Spectral norm of ``[A, B]`` restricted to degrees ``<= interior_degree``.

    The product is formed on the full truncation, so the interior block is
    exact as long as ``interior_degree`` plus the symbol degrees stays
    below ``N``.  The default is ``N // 2``.
    """
    if A.N != B.N or A.basis is not B.basis:
        raise ValueError("commutator needs matrices on the same basis")
    d = A.N // 2 if interior_degree is None else interior_degree
    if not 0 <= d < A.N:
        raise ValueError(f"interior degree must lie in [0, {A.N})")
    C = A.matrix @ B.matrix - B.matrix @ A.matrix
    keep = A.basis.interior(d)
    return float(np.linalg.norm(C[np.ix_(keep, keep)], 2))


@dataclass
class ACRReport:
    """Commutators ``[T_g, T_{f_j}]`` next to ``||T_g(1) - g||``."""

    commutator_norms: list
    tg1_minus_g: float
    g_norm: float
    N: int
    interior_degree: int


def _constant_one_coeffs(basis):
    c = np.zeros(basis.dim, dtype=complex)
    c[0] = basis.norms[0]
    return c


def acr_residual(f, g_symbol, N, radii=None, interior_degree=None, nr=None, nt=None,
                 rank_h=0.125):
    """Quantities linked by the commuting-Toeplitz criterion for holomorphy.

    Raises ``HypothesisError("jacobian-rank")`` when the Jacobian of ``f``
    has rank below ``n`` on every node of a coarse grid, since the
    criterion says nothing in that case.
    """
    radii = (1.0,) * f.n if radii is None else tuple(np.atleast_1d(radii))
    kind = "disc" if f.n == 1 else "polydisc"
    coarse = build_domain(kind, radii[0] if f.n == 1 else radii, rank_h)
    if f.m < f.n or jacobian_rank_mask(f, coarse, 1e-8)[coarse.inside_mask].all():
        raise HypothesisError("jacobian-rank", f"the Jacobian of {f.name} has rank < {f.n} everywhere")
    Tg = toeplitz_matrix(g_symbol, N, radii, nr, nt)
    d = N // 2 if interior_degree is None else interior_degree
    norms = []
    for j in range(f.m):
        comp = f.components[j]
        Tf = toeplitz_matrix(lambda p, comp=comp: comp(p), N, radii, nr, nt)
        norms.append(commutator_norm(Tg, Tf, d))
    basis = Tg.basis
    coeffs = Tg.apply(_constant_one_coeffs(basis))
    _, g = _symbol_callable(g_symbol)
    resid = basis.quad.l2_norm(lambda p: basis.synthesize(coeffs, p) - g(p))
    return ACRReport(norms, resid, basis.quad.l2_norm(g), N, d)


@dataclass
class DensityCurve:
    """Least-squares distance from a field to the spans of ``z^alpha conj(f)^beta``."""

    degrees: np.ndarray
    residuals: np.ndarray
    field_norm: float
    span_sizes: np.ndarray
    truncated_at: int = None   # first degree whose Gram system broke down

    def relative(self):
        return self.residuals / self.field_norm if self.field_norm else self.residuals


def _span_columns(n, m, d):
    """Exponent pairs ``(alpha, beta)`` with ``|alpha| + |beta| <= d``, graded."""
    cols = [(a[:n], a[n:]) for a in product(range(d + 1), repeat=n + m) if sum(a) <= d]
    return sorted(cols, key=lambda c: (sum(c[0]) + sum(c[1]), c))


def _span_values(f, cols, pts, d):
    zp = [_powers(pts[:, k], d) for k in range(f.n)]
    fp = [_powers(np.conj(v), d) for v in f(pts)]
    out = np.ones((len(pts), len(cols)), dtype=complex)
    for i, (a, b) in enumerate(cols):
        for k, ak in enumerate(a):
            if ak:
                out[:, i] *= zp[k][ak]
        for j, bj in enumerate(b):
            if bj:
                out[:, i] *= fp[j][bj]
    return out


def lp_density_residual(f, test_field, max_degree, radii=None, nr=None, nt=None):
    """``L^2`` distance from ``test_field`` to ``span{z^alpha conj(f)^beta}``.

    The span at degree ``d`` uses ``|alpha| + |beta| <= d``.  Columns are
    ordered by degree, so a single Cholesky factorisation of the
    quadrature Gram matrix serves every degree and the curve is
    non-increasing by construction.  A pivot below ``PIVOT_FLOOR`` (relative
    to its column) truncates the curve at the previous degree.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    radii = (1.0,) * f.n if radii is None else tuple(np.atleast_1d(radii))
    if nr is None:
        nr, nt = (64, 128) if f.n == 1 else (max_degree + 4, 2 * max_degree + 8)
    quad = polar_quadrature(radii, nr, nt)
    cols = _span_columns(f.n, f.m, max_degree)
    K = len(cols)
    G = np.zeros((K, K), dtype=complex)
    v = np.zeros(K, dtype=complex)
    bnorm2 = 0.0
    for pts, w in quad.chunks():
        A = _span_values(f, cols, pts, max_degree)
        b = np.asarray(test_field(pts), dtype=complex)
        G += A.conj().T @ (w[:, None] * A)
        v += A.conj().T @ (w * b)
        bnorm2 += float(np.sum(w * np.abs(b) ** 2))
    col_deg = np.array([sum(a) + sum(b) for a, b in cols])
    L = np.zeros_like(G)
    y = np.zeros(K, dtype=complex)
    done = K
    for k in range(K):
        lk = L[k, :k]
        piv = G[k, k].real - float(np.sum(np.abs(lk) ** 2))
        if piv <= PIVOT_FLOOR * G[k, k].real:
            done = k
            break
        L[k, k] = np.sqrt(piv)
        L[k + 1:, k] = (G[k + 1:, k] - L[k + 1:, :k] @ lk.conj()) / L[k, k]
        y[k] = (v[k] - lk @ y[:k]) / L[k, k]
    truncated = None
    if done < K:
        truncated = int(col_deg[done])
    degrees, residuals, sizes = [], [], []
    for d in range(max_degree + 1):
        size = int(np.sum(col_deg <= d))
        if size > done:
            break
        r2 = bnorm2 - float(np.sum(np.abs(y[:size]) ** 2))
        degrees.append(d)
        residuals.append(np.sqrt(max(r2, 0.0)))
        sizes.append(size)
    # guard the monotone envelope against rounding in the subtraction
    residuals = np.minimum.accumulate(np.array(residuals))
    return DensityCurve(np.array(degrees), residuals, float(np.sqrt(bnorm2)),
                        np.array(sizes), truncated)


def mollifier_bump(center=0.0, radius=0.8):
    """``exp(-1 / (1 - t^2))`` with ``t = |z - center| / radius``, zero for ``t >= 1``."""
    c = np.atleast_1d(np.asarray(center, dtype=complex))

    def fn(p):
        p = np.asarray(p, dtype=complex).reshape(len(p), -1)
        t2 = np.sum(np.abs(p - c) ** 2, axis=-1) / radius ** 2
        out = np.zeros(len(p))
        inside = t2 < 1
        out[inside] = np.exp(-1.0 / (1.0 - t2[inside]))
        return out

    return fn


SYMBOLS = {
    "1": lambda p: np.ones(len(p), dtype=complex),
    "z": lambda p: p[:, 0],
    "z^2": lambda p: p[:, 0] ** 2,
    "zbar": lambda p: np.conj(p[:, 0]),
    "|z|^2": lambda p: np.abs(p[:, 0]) ** 2 + 0j,
    "z1": lambda p: p[:, 0],
    "z2": lambda p: p[:, 1],
    "z2bar": lambda p: np.conj(p[:, 1]),
    "bump": mollifier_bump(0.1, 0.8),
    "z2bar(1+z1)+|z1|^2": lambda p: np.conj(p[:, 1]) * (1 + p[:, 0]) + np.abs(p[:, 0]) ** 2,
}


def symbol_from_name(name):
    try:
        return SYMBOLS[name]
    except KeyError:
        raise ValueError(f"unknown symbol {name!r}; choose from {sorted(SYMBOLS)}") from None


def write_curve_csv(path, header, rows):
    """Two or more columns, fixed 17-significant-digit formatting."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, (int, np.integer, str)) else f"{float(v):.17g}"
                        for v in row])
