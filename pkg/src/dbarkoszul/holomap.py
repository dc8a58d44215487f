"""Holomorphic maps f = (f_1, ..., f_m) given in closed form."""

import weakref
from dataclasses import dataclass, field

import numpy as np

from .forms import wirtinger_dbar, erode

__all__ = ["HoloMap", "preset_map", "constant_map", "PRESETS", "jacobian_rank_mask"]


@dataclass(frozen=True, eq=False)
class HoloMap:
    """Closed-form holomorphic map from C^n to C^m.

    ``components[j]`` and ``jacobian_fn`` take complex points of shape
    ``(..., n)``; a component returns shape ``(...)`` and the Jacobian
    ``(..., m, n)``.
    """

    name: str
    n: int
    components: tuple
    jacobian_fn: object
    _cache: object = field(default_factory=weakref.WeakKeyDictionary, repr=False)

    @property
    def m(self):
        return len(self.components)

    def __call__(self, points):
        points = np.asarray(points, dtype=complex)
        out = np.empty((self.m, *points.shape[:-1]), dtype=complex)
        for j, fj in enumerate(self.components):
            out[j] = fj(points)
        return out

    def samples(self, domain):
        """Values at every grid node, shape ``(m, *domain.shape)`` (cached, read-only)."""
        try:
            return self._cache[domain]
        except KeyError:
            vals = self(domain.points)
            vals.setflags(write=False)
            self._cache[domain] = vals
            return vals

    def jacobian(self, points):
        points = np.asarray(points, dtype=complex)
        J = np.asarray(self.jacobian_fn(points), dtype=complex)
        return np.broadcast_to(J, (*points.shape[:-1], self.m, self.n))

    def sup_bounds(self, domain):
        """Per-component sup over the masked-in nodes."""
        vals = np.abs(self.samples(domain))[:, domain.inside_mask]
        return vals.max(axis=1) if vals.size else np.zeros(self.m)

    def sup(self, domain):
        return float(np.max(self.sup_bounds(domain), initial=0.0))

    def shifted(self, lam):
        """The map ``f - lam``."""
        lam = np.asarray(lam, dtype=complex).reshape(self.m)
        comps = tuple(_shift(fj, c) for fj, c in zip(self.components, lam))
        label = ", ".join(f"{c:.4g}" for c in lam)
        return HoloMap(f"{self.name} - ({label})", self.n, comps, self.jacobian_fn)

    def holomorphy_tolerance(self, domain):
        """``10 h^2 sup|f| / R^3``: centred-difference truncation scale."""
        R = min(domain.radii)
        return 10.0 * domain.h ** 2 * max(self.sup(domain), 1.0) / R ** 3

    def holomorphy_defect(self, domain):
        """Sup of the discrete dbar of the samples over interior nodes."""
        interior = erode(domain.inside_mask)
        vals = self.samples(domain)
        worst = 0.0
        for k in range(domain.n):
            d = np.abs(wirtinger_dbar(vals, k, domain.h, domain.n))[:, interior]
            if d.size:
                worst = max(worst, float(d.max()))
        return worst


def _shift(fj, c):
    return lambda p: fj(p) - c


def _coord(k):
    return lambda p: p[..., k]


def constant_map(values, n):
    values = tuple(complex(v) for v in np.atleast_1d(values))
    comps = tuple((lambda c: (lambda p: np.full(p.shape[:-1], c)))(c) for c in values)
    jac = lambda p: np.zeros((*p.shape[:-1], len(values), n), dtype=complex)
    return HoloMap("const(" + ", ".join(f"{c:g}" for c in values) + ")", n, comps, jac)


def _jac_from(rows, n):
    # rows: list over j of list over k of callables
    def jac(p):
        out = np.zeros((*p.shape[:-1], len(rows), n), dtype=complex)
        for j, row in enumerate(rows):
            for k, d in enumerate(row):
                out[..., j, k] = d(p)
        return out
    return jac


_one = lambda p: np.ones(p.shape[:-1], dtype=complex)
_zero = lambda p: np.zeros(p.shape[:-1], dtype=complex)

PRESETS = {
    "z": (1, [_coord(0)], [[_one]]),
    "z^2": (1, [lambda p: p[..., 0] ** 2], [[lambda p: 2 * p[..., 0]]]),
    "z,1-z": (1, [_coord(0), lambda p: 1 - p[..., 0]], [[_one], [lambda p: -_one(p)]]),
    "z-2": (1, [lambda p: p[..., 0] - 2], [[_one]]),
    "z1": (2, [_coord(0)], [[_one, _zero]]),
    "z1,z2": (2, [_coord(0), _coord(1)], [[_one, _zero], [_zero, _one]]),
    "z1^2,z2": (2, [lambda p: p[..., 0] ** 2, _coord(1)],
                [[lambda p: 2 * p[..., 0], _zero], [_zero, _one]]),
}


def preset_map(name):
    """Named map; ``const:c1,c2,...`` builds a constant map on the disc."""
    if name.startswith("const:"):
        return constant_map([complex(t) for t in name[6:].split(",")], 1)
    try:
        n, comps, jac = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown map preset {name!r}; choose from {sorted(PRESETS)}") from None
    return HoloMap(name, n, tuple(comps), _jac_from(jac, n))


def jacobian_rank_mask(f, domain, tol_svd):
    """Nodes where the smallest singular value of the Jacobian is below ``tol_svd``."""
    if f.m < f.n:
        raise ValueError(f"rank {f.n} is impossible for a map with m={f.m} < n={f.n}")
    inside = domain.inside_mask
    J = f.jacobian(domain.points[inside])
    if f.n == 1:
        smin = np.sqrt(np.sum(np.abs(J[..., 0]) ** 2, axis=-1))
    else:
        smin = np.linalg.svd(J, compute_uv=False)[..., -1]
    mask = np.zeros(domain.shape, dtype=bool)
    mask[inside] = smin < tol_svd
    return mask
