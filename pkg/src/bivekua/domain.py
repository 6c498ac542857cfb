"""Bounded planar domains and their uniform cell-centre grids."""

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigError, DegenerateDomain, NodeNotOnGrid

MIN_N = 8


@dataclass(frozen=True)
class Domain:
    """A disk or an axis-aligned rectangle.

    Only the fields belonging to ``kind`` are meaningful.
    """

    kind: str
    center: complex = 0j
    radius: float = 1.0
    x0: float = 0.0
    x1: float = 1.0
    y0: float = 0.0
    y1: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if self.kind == "disk":
            if not self.radius > 0:
                raise DegenerateDomain("disk radius must be positive")
        elif self.kind == "rectangle":
            if not (self.x1 > self.x0 and self.y1 > self.y0):
                raise DegenerateDomain("degenerate rectangle")
        else:
            raise ValueError(f"unknown domain kind {self.kind!r}")

    @classmethod
    def disk(cls, center=0j, radius=1.0):
        return cls("disk", center=complex(center), radius=float(radius))

    @classmethod
    def rectangle(cls, x0, x1, y0, y1):
        return cls("rectangle", x0=float(x0), x1=float(x1), y0=float(y0), y1=float(y1))

    @property
    def star_shaped_at_origin(self):
        # convex domains are star-shaped about every interior point
        return bool(self.contains(0j))

    @property
    def bbox(self):
        if self.kind == "disk":
            c, r = self.center, self.radius
            return c.real - r, c.real + r, c.imag - r, c.imag + r
        return self.x0, self.x1, self.y0, self.y1

    @property
    def area(self):
        if self.kind == "disk":
            return np.pi * self.radius ** 2
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    @property
    def diameter(self):
        if self.kind == "disk":
            return 2 * self.radius
        return float(np.hypot(self.x1 - self.x0, self.y1 - self.y0))

    def contains(self, z):
        """Strict interior test."""
        z = np.asarray(z, dtype=complex)
        if self.kind == "disk":
            return np.abs(z - self.center) < self.radius
        return ((z.real > self.x0) & (z.real < self.x1)
                & (z.imag > self.y0) & (z.imag < self.y1))

    def distance_to_boundary(self, z):
        """Distance to the boundary curve, positive inside, negative outside."""
        z = np.asarray(z, dtype=complex)
        if self.kind == "disk":
            return self.radius - np.abs(z - self.center)
        dx = np.minimum(z.real - self.x0, self.x1 - z.real)
        dy = np.minimum(z.imag - self.y0, self.y1 - z.imag)
        inside = np.minimum(dx, dy)
        ox = np.maximum(np.maximum(self.x0 - z.real, z.real - self.x1), 0.0)
        oy = np.maximum(np.maximum(self.y0 - z.imag, z.imag - self.y1), 0.0)
        return np.where(inside >= 0, inside, -np.hypot(ox, oy))

    def exit_distance(self, z, direction):
        """Distance from interior points ``z`` to the boundary along the unit
        vector ``direction`` (a complex number)."""
        z = np.asarray(z, dtype=complex)
        d = complex(direction)
        if self.kind == "disk":
            w = z - self.center
            # |w + t d|^2 = r^2 with |d| = 1
            bq = (w * np.conj(d)).real
            cq = np.abs(w) ** 2 - self.radius ** 2
            return -bq + np.sqrt(bq ** 2 - cq)
        t = np.full(z.shape, np.inf)
        # directions nearly parallel to a side never reach it
        if abs(d.real) > 1e-15:
            edge = self.x1 if d.real > 0 else self.x0
            t = np.minimum(t, (edge - z.real) / d.real)
        if abs(d.imag) > 1e-15:
            edge = self.y1 if d.imag > 0 else self.y0
            t = np.minimum(t, (edge - z.imag) / d.imag)
        return t

    def boundary_samples(self, m):
        """Counterclockwise boundary quadrature: points, unit tangents, arc weights."""
        if self.kind == "disk":
            theta = 2 * np.pi * np.arange(m) / m
            e = np.exp(1j * theta)
            return (self.center + self.radius * e, 1j * e,
                    np.full(m, 2 * np.pi * self.radius / m))
        corners = [complex(self.x0, self.y0), complex(self.x1, self.y0),
                   complex(self.x1, self.y1), complex(self.x0, self.y1)]
        lengths = [self.x1 - self.x0, self.y1 - self.y0] * 2
        perim = sum(lengths)
        counts = [max(1, int(round(m * L / perim))) for L in lengths]
        pts, tans, wts = [], [], []
        for k in range(4):
            a, b = corners[k], corners[(k + 1) % 4]
            c = counts[k]
            s = (np.arange(c) + 0.5) / c
            pts.append(a + (b - a) * s)
            tans.append(np.full(c, (b - a) / abs(b - a)))
            wts.append(np.full(c, abs(b - a) / c))
        return np.concatenate(pts), np.concatenate(tans), np.concatenate(wts)

    def boundary_parameter(self, points):
        """Angle (disk) or counterclockwise arc length from (x0, y0) (rectangle)."""
        points = np.asarray(points, dtype=complex)
        if self.kind == "disk":
            return np.mod(np.angle(points - self.center), 2 * np.pi)
        w, hgt = self.x1 - self.x0, self.y1 - self.y0
        x, y = points.real - self.x0, points.imag - self.y0
        s = np.where(np.isclose(y, 0), x, 0.0)
        s = np.where(np.isclose(x, w) & ~np.isclose(y, 0), w + y, s)
        s = np.where(np.isclose(y, hgt) & ~np.isclose(x, w), w + hgt + (w - x), s)
        s = np.where(np.isclose(x, 0) & ~np.isclose(y, 0) & ~np.isclose(y, hgt),
                     2 * w + hgt + (hgt - y), s)
        return s

    def boundary_point(self, param):
        """Inverse of :meth:`boundary_parameter`."""
        param = np.asarray(param, dtype=float)
        if self.kind == "disk":
            return self.center + self.radius * np.exp(1j * param)
        w, hgt = self.x1 - self.x0, self.y1 - self.y0
        s = np.mod(param, 2 * (w + hgt))
        z = np.where(s < w, s + 0j,
            np.where(s < w + hgt, w + 1j * (s - w),
            np.where(s < 2 * w + hgt, (2 * w + hgt - s) + 1j * hgt,
                     1j * (2 * (w + hgt) - s))))
        return complex(self.x0, self.y0) + z

    def to_dict(self):
        if self.kind == "disk":
            return {"kind": "disk", "center": [self.center.real, self.center.imag],
                    "radius": self.radius}
        return {"kind": "rectangle", "x0": self.x0, "x1": self.x1,
                "y0": self.y0, "y1": self.y1}

    @classmethod
    def from_dict(cls, d):
        try:
            kind = d["kind"]
            if kind == "disk":
                cx, cy = d.get("center", [0.0, 0.0])
                return cls.disk(complex(cx, cy), d.get("radius", 1.0))
            if kind == "rectangle":
                return cls.rectangle(d["x0"], d["x1"], d["y0"], d["y1"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad domain spec {d!r}: {exc}") from exc
        raise ConfigError(f"unknown domain kind {d.get('kind')!r}")


class Grid:
    """Uniform n x n cell-centre lattice over the bounding box of a domain.

    A lattice cell belongs to the grid when its centre lies inside the
    domain.  Nodes are ordered lexicographically by (ix, iy).  The boundary
    is sampled from the exact parametrization, counterclockwise.
    """

    def __init__(self, domain, n, n_boundary=None):
        if n < MIN_N:
            raise ValueError(f"grid resolution n={n} below minimum {MIN_N}")
        self.domain = domain
        self.n = int(n)
        bx0, bx1, by0, by1 = domain.bbox
        self.hx = (bx1 - bx0) / n
        self.hy = (by1 - by0) / n
        self.origin = complex(bx0, by0)
        cx = bx0 + (np.arange(n) + 0.5) * self.hx
        cy = by0 + (np.arange(n) + 0.5) * self.hy
        X, Y = np.meshgrid(cx, cy, indexing="ij")
        mask = domain.contains(X + 1j * Y)
        if not mask.any():
            raise DegenerateDomain("no grid cell centre lies inside the domain")
        self.mask = mask
        self.ix, self.iy = np.nonzero(mask)
        self.nodes = (X + 1j * Y)[mask]
        self.index_map = np.full((n, n), -1, dtype=np.intp)
        self.index_map[self.ix, self.iy] = np.arange(self.ix.size)
        self.n_boundary = int(n_boundary) if n_boundary else 8 * self.n
        pts, tans, wts = domain.boundary_samples(self.n_boundary)
        self.boundary_points = pts
        self.boundary_tangents = tans
        self.boundary_weights = wts
        self.key = (domain, self.n, self.n_boundary)

    def __repr__(self):
        return f"Grid({self.domain.kind}, n={self.n}, nodes={self.size})"

    @property
    def size(self):
        return self.nodes.size

    @property
    def cell_area(self):
        return self.hx * self.hy

    @property
    def h(self):
        return max(self.hx, self.hy)

    @property
    def inside_index(self):
        """Map (ix, iy) -> node index."""
        return {(int(i), int(j)): k for k, (i, j) in enumerate(zip(self.ix, self.iy))}

    def same_as(self, other):
        return self is other or self.key == other.key

    def neighbor(self, dx, dy):
        """Index of the (ix+dx, iy+dy) neighbour of every node, -1 if absent."""
        i, j = self.ix + dx, self.iy + dy
        ok = (i >= 0) & (i < self.n) & (j >= 0) & (j < self.n)
        out = np.full(self.size, -1, dtype=np.intp)
        out[ok] = self.index_map[i[ok], j[ok]]
        return out

    @cached_property
    def interior(self):
        """Nodes whose full centred five-point stencil lies on the grid."""
        ok = np.ones(self.size, dtype=bool)
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            ok &= self.neighbor(dx, dy) >= 0
        return ok

    @cached_property
    def distance(self):
        return self.domain.distance_to_boundary(self.nodes)

    def safe(self, margin=2.0):
        """Interior nodes at distance at least ``margin * h`` from the boundary."""
        return self.interior & (self.distance >= margin * self.h)

    def node_index(self, z, tol=None):
        z = complex(z)
        tol = 1e-9 * self.h if tol is None else tol
        fx = (z.real - self.origin.real) / self.hx - 0.5
        fy = (z.imag - self.origin.imag) / self.hy - 0.5
        i, j = int(round(fx)), int(round(fy))
        if 0 <= i < self.n and 0 <= j < self.n:
            k = self.index_map[i, j]
            if k >= 0 and abs(self.nodes[k] - z) <= tol:
                return int(k)
        raise NodeNotOnGrid(z)

    def nearest_node(self, z):
        return int(np.argmin(np.abs(self.nodes - complex(z))))

    def winding_number(self, z0):
        d = self.boundary_points - z0
        steps = np.angle(np.roll(d, -1) / d)
        return float(np.sum(steps) / (2 * np.pi))

    def to_dict(self):
        d = self.domain.to_dict()
        d["n"] = self.n
        return d


def build_grid(domain, n, n_boundary=None):
    return Grid(domain, n, n_boundary)


def domain_from_json(text):
    """Parse ``{"kind": "disk", "center": [0, 0], "radius": 1.0, "n": 64}``."""
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: "
                          f"{exc.msg}") from exc
    return Domain.from_dict(d), d.get("n")
