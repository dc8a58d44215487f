"""Tensor-grid discretisation of the model domains (disc, bidisc).

Node arrays are laid out with one array axis per real coordinate, in the
order ``x1, y1, x2, y2``.  A field on a domain is an array of shape
``domain.shape``; values at nodes outside the domain are ignored by every
reduction in the package.
"""

import csv
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import ndimage

__all__ = [
    "GridDomain",
    "NodeSample",
    "CutOff",
    "build_domain",
    "refine",
    "window",
    "smooth_step",
    "bump",
    "cutoff_from_distance",
    "level_cutoff",
    "integrate",
    "integrate_box",
    "write_grid_csv",
]

MIN_INTERIOR_NODES = 8


def _psi(t):
    out = np.zeros_like(t, dtype=float)
    pos = t > 1e-3  # exp(-1000) underflows to zero anyway
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smooth_step(t):
    """C-infinity step: 1 for ``t <= 0``, 0 for ``t >= 1``.

    Built from the mollifier piece ``exp(-1/t)`` so that every derivative
    vanishes at both ends of the transition.
    """
    t = np.asarray(t, dtype=float)
    a = _psi(1.0 - t)
    b = _psi(t)
    return a / (a + b)


# max |d/dt smooth_step|, attained at t = 1/2
STEP_SLOPE = 2.0


def _quadrant_area(R, x, y):
    """Area of the disc of radius R intersected with ``{u <= x, v <= y}``."""
    x = np.clip(x, -R, R)
    ystar = np.sqrt(np.maximum(R * R - y * y, 0.0))
    sgn = np.sign(y)

    def S(u):  # antiderivative of sqrt(R^2 - u^2)
        return 0.5 * (u * np.sqrt(np.maximum(R * R - u * u, 0.0)) + R * R * np.arcsin(np.clip(u / R, -1, 1)))

    clip_part = (sgn * (S(np.minimum(x, -ystar)) - S(-R))
                 + np.clip(y, -R, R) * (np.clip(x, -ystar, ystar) + ystar)
                 + sgn * (S(np.maximum(x, ystar)) - S(ystar)))
    return clip_part + S(x) - S(-R)


def _disc_rect_area(R, x0, x1, y0, y1):
    Q = _quadrant_area
    return Q(R, x1, y1) - Q(R, x0, y1) - Q(R, x1, y0) + Q(R, x0, y0)


@dataclass(frozen=True, eq=False)
class GridDomain:
    """Regular grid on a disc (n = 1) or polydisc (n = 2) centred at 0."""

    kind: str
    radii: tuple
    h: float
    axes: tuple

    @property
    def n(self):
        return len(self.radii)

    @property
    def shape(self):
        return tuple(len(a) for a in self.axes)

    @property
    def diameter(self):
        return 2.0 * math.sqrt(sum(r * r for r in self.radii))

    @cached_property
    def factor_axes(self):
        """Per complex variable, the pair ``(x, y)`` of 1-D coordinate axes."""
        return tuple((self.axes[2 * k], self.axes[2 * k + 1]) for k in range(self.n))

    @cached_property
    def factor_points(self):
        """Per complex variable, the 2-D array of complex node coordinates."""
        return tuple(x[:, None] + 1j * y[None, :] for x, y in self.factor_axes)

    @cached_property
    def factor_inside(self):
        return tuple(np.abs(zk) < r for zk, r in zip(self.factor_points, self.radii))

    def z(self, k):
        """Coordinate ``z_k`` broadcast to the full grid shape."""
        zk = self.factor_points[k]
        shape = [1] * (2 * self.n)
        shape[2 * k] = zk.shape[0]
        shape[2 * k + 1] = zk.shape[1]
        return np.broadcast_to(zk.reshape(shape), self.shape)

    @cached_property
    def points(self):
        """Complex node coordinates, shape ``(*shape, n)``."""
        return np.stack([self.z(k) for k in range(self.n)], axis=-1)

    @cached_property
    def boundary_dist(self):
        gaps = [r - np.abs(self.z(k)) for k, r in enumerate(self.radii)]
        if self.n == 1:
            return np.abs(gaps[0])
        inside = np.minimum(gaps[0], gaps[1])
        outside = np.sqrt(sum(np.maximum(-g, 0.0) ** 2 for g in gaps))
        return np.where(inside > 0, inside, np.maximum(outside, -inside))

    @cached_property
    def inside_mask(self):
        mask = self._outer(self.factor_inside)
        mask.setflags(write=False)
        return mask

    @cached_property
    def quad_weights(self):
        # exact area of each dual cell inside the disc; the area of cells whose
        # node lies outside is moved to the nearest inside node
        fracs = []
        h = self.h
        for (x, y), inside, r in zip(self.factor_axes, self.factor_inside, self.radii):
            X, Y = x[:, None], y[None, :]
            area = _disc_rect_area(r, X - h / 2, X + h / 2, Y - h / 2, Y + h / 2)
            w = np.where(inside, area, 0.0)
            spill = (~inside) & (area > 0)
            _, (ix, iy) = ndimage.distance_transform_edt(~inside, return_indices=True)
            np.add.at(w, (ix[spill], iy[spill]), area[spill])
            fracs.append(w)
        w = self._outer(fracs)
        w.setflags(write=False)
        return w

    @cached_property
    def box_weights(self):
        """Trapezoid weights on the full bounding box (mask ignored)."""
        w = np.ones(self.shape)
        for ax, coords in enumerate(self.axes):
            wa = np.full(len(coords), self.h)
            wa[0] = wa[-1] = self.h / 2
            shape = [1] * len(self.axes)
            shape[ax] = len(coords)
            w = w * wa.reshape(shape)
        return w

    def _outer(self, per_factor):
        if self.n == 1:
            return np.array(per_factor[0])
        a, b = per_factor
        return a[:, :, None, None] * b[None, None, :, :]

    def node_count(self):
        return int(self.inside_mask.sum())

    def sample_nodes(self, count, rng):
        """Random subset of masked-in nodes, for pointwise algebra checks."""
        flat = np.flatnonzero(self.inside_mask)
        pick = np.sort(rng.choice(flat, size=min(count, flat.size), replace=False))
        return NodeSample(self, np.unravel_index(pick, self.shape))


@dataclass(frozen=True, eq=False)
class NodeSample:
    """A set of nodes of a parent grid, without neighbour structure.

    Pointwise operations (wedge, contraction) accept it in place of a
    ``GridDomain``; finite differences do not.
    """

    parent: GridDomain
    index: tuple

    @property
    def n(self):
        return self.parent.n

    @property
    def h(self):
        return self.parent.h

    @property
    def shape(self):
        return (len(self.index[0]),)

    @cached_property
    def points(self):
        return self.parent.points[self.index]

    @cached_property
    def inside_mask(self):
        return np.ones(self.shape, dtype=bool)

    def restrict(self, field):
        return np.asarray(field)[self.index]


def build_domain(kind, radii, h):
    """Build the grid for ``kind`` in {"disc", "polydisc"}.

    ``radii`` is a float for the disc and a pair for the polydisc.  The
    grid is ``h * (-K..K)`` along every real axis with ``K = ceil(R / h)``.
    """
    if not h > 0:
        raise ValueError(f"grid spacing must be positive, got {h!r}")
    if kind == "disc":
        radii = (float(np.atleast_1d(radii)[0]),)
    elif kind == "polydisc":
        radii = tuple(float(r) for r in radii)
        if len(radii) != 2:
            raise ValueError("polydisc needs two radii")
    else:
        raise ValueError(f"unknown domain kind {kind!r}")
    axes = []
    for r in radii:
        if r <= 0:
            raise ValueError(f"radius must be positive, got {r}")
        K = int(math.ceil(r / h - 1e-9))
        coords = h * np.arange(-K, K + 1)
        interior = int(np.sum(np.abs(coords) < r))
        if interior < MIN_INTERIOR_NODES or h >= r / 4:
            raise ValueError(
                f"grid too coarse: h={h} gives {interior} interior nodes per axis "
                f"on radius {r} (need >= {MIN_INTERIOR_NODES} and h < r/4)"
            )
        axes += [coords, coords.copy()]
    for a in axes:
        a.setflags(write=False)
    return GridDomain(kind, radii, float(h), tuple(axes))


def refine(domain):
    """Grid with spacing ``h/2`` on the same bounding box; node ``i`` of
    ``domain`` is node ``2i`` of the result."""
    axes = []
    for coords in domain.axes:
        K = (len(coords) - 1) // 2
        fine = (domain.h / 2) * np.arange(-2 * K, 2 * K + 1)
        fine.setflags(write=False)
        axes.append(fine)
    return GridDomain(domain.kind, domain.radii, domain.h / 2, tuple(axes))


def window(domain, start, size):
    """Sub-box of ``domain``: ``size`` consecutive nodes per axis from ``start``.

    The result is a grid with the same spacing and node coordinates, so
    any stencil operator gives the parent's values at the window's inner
    nodes.  Index ``i`` of the window is index ``start + i`` of the parent.
    """
    start = np.broadcast_to(np.asarray(start, dtype=int), (len(domain.axes),))
    axes = []
    for a, s0 in zip(domain.axes, start):
        if not 0 <= s0 <= len(a) - size:
            raise ValueError(f"window [{s0}, {s0 + size}) leaves an axis of length {len(a)}")
        w = a[s0:s0 + size].copy()
        w.setflags(write=False)
        axes.append(w)
    return GridDomain(domain.kind, domain.radii, domain.h, tuple(axes))


def integrate(domain, field):
    """Quadrature sum of ``field`` over the masked-in nodes."""
    field = np.asarray(field)
    return np.sum(np.where(domain.inside_mask, field * domain.quad_weights, 0.0))


def integrate_box(domain, field):
    """Trapezoid rule over the whole bounding box; exact for affine fields."""
    return np.sum(np.asarray(field) * domain.box_weights)


@dataclass(frozen=True)
class CutOff:
    """A sampled cut-off function with its declared regions.

    ``inner`` marks nodes where the value is exactly 1 and ``support``
    nodes where it is nonzero.
    """

    values: np.ndarray
    inner: np.ndarray
    support: np.ndarray
    r_inner: float
    r_outer: float
    grad_bound: float


def cutoff_from_distance(domain, dist, r_inner, r_outer, compact=False):
    """Cut-off equal to 1 where ``dist <= r_inner`` and 0 where ``dist >= r_outer``.

    ``dist`` is any distance-like field on the grid (distance to a point
    set, or a sublevel function such as ``|f - lambda|``).
    """
    if not 0 < r_inner < r_outer:
        raise ValueError(f"need 0 < r_inner < r_outer, got {r_inner}, {r_outer}")
    dist = np.asarray(dist, dtype=float)
    chi = smooth_step((dist - r_inner) / (r_outer - r_inner))
    chi = np.where(domain.inside_mask, chi, 0.0)
    support = chi > 0
    if compact and np.any(support & (domain.boundary_dist <= domain.h)):
        raise ValueError("cut-off support reaches the boundary of the domain")
    grads = np.gradient(chi, domain.h)
    gnorm = np.sqrt(sum(g * g for g in grads))
    grad_bound = float(np.max(np.where(domain.inside_mask, gnorm, 0.0)))
    return CutOff(chi, chi == 1.0, support, float(r_inner), float(r_outer), grad_bound)


def level_cutoff(domain, field, lo, hi):
    """Cut-off equal to 0 where ``field <= lo`` and 1 where ``field >= hi``.

    The sublevel-set counterpart of :func:`bump`, e.g. with
    ``field = |f - lambda|`` it vanishes near a fiber of ``f``.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got {lo}, {hi}")
    field = np.asarray(field, dtype=float)
    chi = smooth_step((hi - field) / (hi - lo))
    chi = np.where(domain.inside_mask, chi, 0.0)
    grads = np.gradient(chi, domain.h)
    gnorm = np.sqrt(sum(g * g for g in grads))
    grad_bound = float(np.max(np.where(domain.inside_mask, gnorm, 0.0)))
    return CutOff(chi, chi == 1.0, chi > 0, float(lo), float(hi), grad_bound)


def bump(domain, center_set, r_inner, r_outer, compact=False):
    """Cut-off around a finite point set in C^n.

    With ``compact=True`` the ``r_outer``-neighbourhood of every centre
    must lie inside the domain.
    """
    if not 0 < r_inner < r_outer:
        raise ValueError(f"need 0 < r_inner < r_outer, got {r_inner}, {r_outer}")
    centers = np.asarray(center_set, dtype=complex).reshape(-1, domain.n)
    if compact:
        for c in centers:
            gap = min(r - abs(ck) for r, ck in zip(domain.radii, c))
            if gap <= r_outer:
                raise ValueError(
                    f"support of radius {r_outer} around {tuple(c)} escapes the domain"
                )
    pts = domain.points
    dist = np.full(domain.shape, np.inf)
    for c in centers:
        d = np.sqrt(np.sum(np.abs(pts - c) ** 2, axis=-1))
        dist = np.minimum(dist, d)
    return cutoff_from_distance(domain, dist, r_inner, r_outer, compact=False)


def write_grid_csv(domain, path):
    """One row per node: index tuple, real coordinates, inside flag, weight."""
    n2 = 2 * domain.n
    header = [f"i{a}" for a in range(n2)]
    header += [f"{c}{k + 1}" for k in range(domain.n) for c in "xy"]
    header += ["inside", "weight"]
    inside = domain.inside_mask
    w = domain.quad_weights
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(header)
        for idx in np.ndindex(*domain.shape):
            coords = [repr(float(domain.axes[a][idx[a]])) for a in range(n2)]
            out.writerow([*idx, *coords, int(inside[idx]), repr(float(w[idx]))])
