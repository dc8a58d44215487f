"""Exterior-algebra valued (0,s)-forms on a grid.

A ``KoszulForm`` of bidegree ``(r, s)`` stores one complex field per pair
``(J, K)``, where ``J`` runs over increasing ``r``-tuples from ``range(m)``
(the basis ``e_J`` of the r-th exterior power) and ``K`` over increasing
``s``-tuples from ``range(n)`` (the basis ``dzbar_K``).  Indices are 0-based
in code and 1-based in the CSV format.

Sign conventions
----------------
* ``(e_J x a dzbar_K) ^ (e_L x b dzbar_M)`` is ``a b (e_J ^ e_L) x
  (dzbar_K ^ dzbar_M)``; each factor is brought to increasing order with the
  sign of the sorting permutation.  No sign is picked up when ``dzbar_K``
  passes ``e_L``.
* The contraction sends ``e_J`` to ``sum_p (-1)^p f_{J[p]} e_{J without J[p]}``.
* ``dbar`` sends ``w dzbar_K`` to ``sum_k (dw/dzbar_k) dzbar_k ^ dzbar_K``.

With these, ``T(A ^ B) = T(A) ^ B + (-1)^r_A A ^ T(B)``, ``T T = 0`` and
``dbar dbar = 0`` hold identically.
"""

import csv
from functools import lru_cache
from itertools import combinations

import numpy as np

from .grid import GridDomain

__all__ = [
    "KoszulForm",
    "index_list",
    "wedge",
    "koszul_contract",
    "dbar_apply",
    "wirtinger_dbar",
    "erode",
    "write_form_csv",
    "read_form_csv",
]


@lru_cache(maxsize=None)
def index_list(dim, length):
    """Increasing ``length``-tuples from ``range(dim)``; empty when out of range."""
    if length < 0 or length > dim:
        return ()
    return tuple(combinations(range(dim), length))


def _perm_sign(seq):
    inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def _wedge_table(dim, a, b):
    target = {idx: t for t, idx in enumerate(index_list(dim, a + b))}
    table = []
    for ia, A in enumerate(index_list(dim, a)):
        for ib, B in enumerate(index_list(dim, b)):
            if set(A) & set(B):
                continue
            table.append((ia, ib, target[tuple(sorted(A + B))], _perm_sign(A + B)))
    return tuple(table)


@lru_cache(maxsize=None)
def _contract_table(m, r, alternating=True):
    # rows: (target J', source J, j, sign) with J = J' plus j
    source = {idx: i for i, idx in enumerate(index_list(m, r))}
    table = []
    for t, Jp in enumerate(index_list(m, r - 1)):
        for j in range(m):
            if j in Jp:
                continue
            J = tuple(sorted(Jp + (j,)))
            sign = (-1) ** J.index(j) if alternating else 1
            table.append((t, source[J], j, sign))
    return tuple(table)


@lru_cache(maxsize=None)
def _dbar_table(n, s):
    # rows: (source K, direction k, target K', sign)
    target = {idx: t for t, idx in enumerate(index_list(n, s + 1))}
    table = []
    for a, K in enumerate(index_list(n, s)):
        for k in range(n):
            if k in K:
                continue
            Kp = tuple(sorted(K + (k,)))
            table.append((a, k, target[Kp], (-1) ** Kp.index(k)))
    return tuple(table)


class KoszulForm:
    """Element of Lambda^r V (x) (0,s)-forms, sampled on a grid.

    ``coeffs`` has shape ``(len(Js), len(Ks), *domain.shape)``.  ``valid``
    marks the nodes where the samples are meaningful; values elsewhere are
    stored as zero and ignored by norms.  Instances are immutable.
    """

    def __init__(self, domain, m, r, s, coeffs=None, valid=None):
        self.domain = domain
        self.m = int(m)
        self.r = int(r)
        self.s = int(s)
        self.Js = index_list(self.m, self.r)
        self.Ks = index_list(domain.n, self.s)
        shape = (len(self.Js), len(self.Ks), *domain.shape)
        if valid is None:
            valid = domain.inside_mask
        self.valid = np.asarray(valid, dtype=bool)
        if coeffs is None:
            coeffs = np.zeros(shape, dtype=complex)
        else:
            coeffs = np.asarray(coeffs, dtype=complex)
            if coeffs.shape != shape:
                raise ValueError(f"coefficient array has shape {coeffs.shape}, expected {shape}")
            coeffs = np.where(self.valid, coeffs, 0.0)
        coeffs.setflags(write=False)
        self.coeffs = coeffs

    @classmethod
    def zero(cls, domain, m, r, s, valid=None):
        return cls(domain, m, r, s, valid=valid)

    @classmethod
    def from_components(cls, domain, m, r, s, components, valid=None):
        """Build from a mapping ``{(J, K): field}``; missing pairs are zero."""
        Js = {J: i for i, J in enumerate(index_list(m, r))}
        Ks = {K: i for i, K in enumerate(index_list(domain.n, s))}
        coeffs = np.zeros((len(Js), len(Ks), *domain.shape), dtype=complex)
        for (J, K), field in components.items():
            J, K = tuple(J), tuple(K)
            if J not in Js or K not in Ks:
                raise KeyError(f"({J}, {K}) is not a basis index of degree ({r}, {s})")
            coeffs[Js[J], Ks[K]] = field
        return cls(domain, m, r, s, coeffs, valid)

    @classmethod
    def scalar(cls, domain, m, field, valid=None):
        field = np.broadcast_to(np.asarray(field, dtype=complex), domain.shape)
        return cls(domain, m, 0, 0, field[None, None], valid)

    @property
    def degree(self):
        return (self.r, self.s)

    @property
    def n(self):
        return self.domain.n

    def coeff(self, J, K):
        """Coefficient field of ``e_J x dzbar_K``; zero for non-basis pairs."""
        J, K = tuple(J), tuple(K)
        if J in self.Js and K in self.Ks:
            return self.coeffs[self.Js.index(J), self.Ks.index(K)]
        return np.zeros(self.domain.shape, dtype=complex)

    def abs_max(self):
        """Nodewise max of coefficient moduli."""
        if self.coeffs.size == 0:
            return np.zeros(self.domain.shape)
        return np.abs(self.coeffs).max(axis=(0, 1))

    def sup_norm(self, mask=None):
        mask = self.valid if mask is None else (self.valid & mask)
        if self.coeffs.size == 0 or not mask.any():
            return 0.0
        return float(self.abs_max()[mask].max())

    def support(self):
        return self.abs_max() > 0

    def is_zero(self):
        return not np.any(self.coeffs)

    def _check(self, other):
        if other.domain is not self.domain or other.m != self.m:
            raise ValueError("forms live on different domains or exterior algebras")
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch {self.degree} vs {other.degree}")

    def __add__(self, other):
        self._check(other)
        return KoszulForm(self.domain, self.m, self.r, self.s,
                          self.coeffs + other.coeffs, self.valid & other.valid)

    def __sub__(self, other):
        self._check(other)
        return KoszulForm(self.domain, self.m, self.r, self.s,
                          self.coeffs - other.coeffs, self.valid & other.valid)

    def __neg__(self):
        return KoszulForm(self.domain, self.m, self.r, self.s, -self.coeffs, self.valid)

    def scale(self, factor):
        """Multiply by a scalar or by a scalar field on the grid."""
        return KoszulForm(self.domain, self.m, self.r, self.s,
                          self.coeffs * np.asarray(factor), self.valid)

    __mul__ = scale
    __rmul__ = scale

    def with_valid(self, mask):
        """Same samples, restricted to ``valid & mask``."""
        return KoszulForm(self.domain, self.m, self.r, self.s, self.coeffs, self.valid & mask)

    def __repr__(self):
        return f"KoszulForm(m={self.m}, n={self.n}, degree={self.degree}, sup={self.sup_norm():.3g})"


def _same_space(A, B):
    if A.domain is not B.domain:
        raise ValueError("forms live on different domains")
    if A.m != B.m:
        raise ValueError(f"exterior algebras differ: m={A.m} vs m={B.m}")


def wedge(A, B):
    """Exterior product, degree ``(r_A + r_B, s_A + s_B)``."""
    _same_space(A, B)
    out = KoszulForm.zero(A.domain, A.m, A.r + B.r, A.s + B.s)
    if not out.Js or not out.Ks or A.r < 0 or B.r < 0:
        return KoszulForm(A.domain, A.m, A.r + B.r, A.s + B.s, valid=A.valid & B.valid)
    coeffs = np.zeros(out.coeffs.shape, dtype=complex)
    jt = _wedge_table(A.m, A.r, B.r)
    kt = _wedge_table(A.n, A.s, B.s)
    for aj, bj, tj, sj in jt:
        for ak, bk, tk, sk in kt:
            prod = A.coeffs[aj, ak] * B.coeffs[bj, bk]
            if sj * sk > 0:
                coeffs[tj, tk] += prod
            else:
                coeffs[tj, tk] -= prod
    return KoszulForm(A.domain, A.m, out.r, out.s, coeffs, A.valid & B.valid)


def koszul_contract(f, W, alternating=True):
    """Contraction with the holomorphic map ``f``: degree ``(r - 1, s)``.

    ``alternating=False`` drops the ``(-1)^position`` sign; it exists only
    as a fault-injection hook for the verification suite.
    """
    if f.m != W.m:
        raise ValueError(f"map has {f.m} components but the form uses m={W.m}")
    if W.r <= 0:
        return KoszulForm.zero(W.domain, W.m, W.r - 1, W.s, valid=W.valid)
    fs = f.samples(W.domain)
    coeffs = np.zeros((len(index_list(W.m, W.r - 1)), len(W.Ks), *W.domain.shape), dtype=complex)
    for t, src, j, sign in _contract_table(W.m, W.r, alternating):
        if sign > 0:
            coeffs[t] += fs[j] * W.coeffs[src]
        else:
            coeffs[t] -= fs[j] * W.coeffs[src]
    return KoszulForm(W.domain, W.m, W.r - 1, W.s, coeffs, W.valid)


def wirtinger_dbar(field, k, h, n):
    """Centred ``d/dzbar_k = (d/dx_k + i d/dy_k) / 2`` over the trailing 2n axes.

    Leading axes are treated as a batch.  Along each real axis the
    outermost layer gets no contribution from that axis.
    """
    field = np.asarray(field)
    ax = field.ndim - 2 * n + 2 * k
    out = np.zeros(field.shape, dtype=np.result_type(field, 1j))

    def sl(axis, part):
        idx = [slice(None)] * field.ndim
        idx[axis] = part
        return tuple(idx)

    m = field.shape[ax]
    np.subtract(field[sl(ax, slice(2, m))], field[sl(ax, slice(0, m - 2))],
                out=out[sl(ax, slice(1, m - 1))])
    m = field.shape[ax + 1]
    dy = np.asarray(field[sl(ax + 1, slice(2, m))] - field[sl(ax + 1, slice(0, m - 2))],
                    dtype=out.dtype)
    mid = out[sl(ax + 1, slice(1, m - 1))]
    # mid += 1j * dy without the temporary
    mid.real -= dy.imag
    mid.imag += dy.real
    out *= 0.25 / h
    return out


def erode(mask, axes=None):
    """Nodes of ``mask`` whose neighbours along ``axes`` are all in ``mask``."""
    mask = np.asarray(mask, dtype=bool)
    axes = range(mask.ndim) if axes is None else axes
    out = mask.copy()
    for ax in axes:
        n = mask.shape[ax]
        sl = [slice(None)] * mask.ndim
        sl[ax] = slice(0, 1)
        out[tuple(sl)] = False
        sl[ax] = slice(n - 1, n)
        out[tuple(sl)] = False
        mid = [slice(None)] * mask.ndim
        hi = [slice(None)] * mask.ndim
        lo = [slice(None)] * mask.ndim
        mid[ax], hi[ax], lo[ax] = slice(1, n - 1), slice(2, n), slice(0, n - 2)
        out[tuple(mid)] &= mask[tuple(hi)] & mask[tuple(lo)]
    return out


def dbar_apply(W):
    """Discrete dbar: degree ``(r, s + 1)``, valid one node inside ``W.valid``."""
    dom = W.domain
    if not isinstance(dom, GridDomain):
        raise TypeError("dbar needs a grid domain with neighbour structure")
    n = dom.n
    valid = erode(W.valid)
    Ks = index_list(n, W.s + 1)
    coeffs = np.zeros((len(W.Js), len(Ks), *dom.shape), dtype=complex)
    if W.Js and Ks:
        for a, k, t, sign in _dbar_table(n, W.s):
            coeffs[:, t] += sign * wirtinger_dbar(W.coeffs[:, a], k, dom.h, n)
    return KoszulForm(dom, W.m, W.r, W.s + 1, coeffs, valid)


def _fmt_index(idx):
    return "-".join(str(i + 1) for i in idx)


def _parse_index(text):
    return tuple(int(t) - 1 for t in text.split("-")) if text else ()


def write_form_csv(form, path):
    """Rows ``J, K, node index..., re, im`` over the valid nodes."""
    nodes = np.argwhere(form.valid)
    nax = len(form.domain.shape)
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["J", "K", *[f"i{a}" for a in range(nax)], "re", "im"])
        for a, J in enumerate(form.Js):
            for b, K in enumerate(form.Ks):
                vals = form.coeffs[a, b]
                for node in nodes:
                    v = vals[tuple(node)]
                    out.writerow([_fmt_index(J), _fmt_index(K), *node.tolist(),
                                  repr(float(v.real)), repr(float(v.imag))])


def read_form_csv(path, domain, m, r, s):
    """Inverse of :func:`write_form_csv`; nodes absent from the file are invalid."""
    form = KoszulForm.zero(domain, m, r, s)
    coeffs = np.zeros(form.coeffs.shape, dtype=complex)
    valid = np.zeros(domain.shape, dtype=bool)
    with open(path, newline="") as fh:
        rows = csv.reader(fh)
        next(rows)
        for row in rows:
            J, K = _parse_index(row[0]), _parse_index(row[1])
            node = tuple(int(v) for v in row[2:-2])
            coeffs[(form.Js.index(J), form.Ks.index(K), *node)] = complex(float(row[-2]), float(row[-1]))
            valid[node] = True
    return KoszulForm(domain, m, r, s, coeffs, valid)
