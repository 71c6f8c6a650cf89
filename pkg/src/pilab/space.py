"""Finite metric measure spaces with a shortest-path metric.

A space is a connected edge-weighted graph together with a positive vertex
measure.  The metric is the shortest-path distance, so every space is
graph-geodesic by construction.  Queries (balls, annuli, ball masses) are
pure and cheap; distances are precomputed for small spaces and computed
per-source on demand (with caching) for large ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse import csgraph

from .errors import (
    DisconnectedGraph,
    EmptySample,
    NonPositiveLength,
    NonPositiveMass,
    NotAhlfors,
)

# Above this vertex count, all-pairs distances are not materialized and
# per-source rows are cached instead.  Results are identical either way.
FULL_DIST_LIMIT = 20_000


class FiniteMetricMeasureSpace:
    """Vertex set with shortest-path metric and positive vertex measure.

    Attributes
    ----------
    n : int
        Vertex count.
    coords : (n, 2) ndarray or None
        Optional planar positions, used only for rendering.
    edges : (m, 2) int ndarray
    lengths : (m,) float ndarray
    measure : (n,) float ndarray
    resolution : float
        Length of the shortest edge (1.0 for a single isolated vertex).
    """

    def __init__(self, n, edges, lengths, measure, coords=None):
        self.n = int(n)
        self.edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        self.lengths = np.asarray(lengths, dtype=float).reshape(-1)
        self.measure = np.asarray(measure, dtype=float).reshape(-1)
        self.coords = None if coords is None else np.asarray(coords, dtype=float)
        self._validate()
        self.resolution = float(self.lengths.min()) if len(self.lengths) else 1.0
        self.total_mass = float(self.measure.sum())

        rows = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        cols = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        vals = np.concatenate([self.lengths, self.lengths])
        self.adjacency = csr_matrix((vals, (rows, cols)), shape=(self.n, self.n))

        self._dist = None
        self._dist_cache: dict[int, np.ndarray] = {}
        if self.n <= FULL_DIST_LIMIT:
            self._dist = csgraph.shortest_path(self.adjacency, method="D", directed=False)
        for arr in (self.edges, self.lengths, self.measure):
            arr.setflags(write=False)
        if self.coords is not None:
            self.coords.setflags(write=False)

    def _validate(self):
        if self.n < 1:
            raise NonPositiveMass("space needs at least one vertex")
        if np.any(self.lengths <= 0):
            raise NonPositiveLength("all edge lengths must be > 0")
        if np.any(self.measure <= 0) or not np.all(np.isfinite(self.measure)):
            raise NonPositiveMass("all vertex masses must be > 0 and finite")
        if len(self.measure) != self.n:
            raise NonPositiveMass("measure length does not match vertex count")
        if len(self.edges) and (self.edges.min() < 0 or self.edges.max() >= self.n):
            raise DisconnectedGraph("edge endpoint out of range")
        if self.n > 1:
            rows = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
            cols = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
            adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(self.n, self.n))
            ncomp, _ = csgraph.connected_components(adj, directed=False)
            if ncomp != 1:
                raise DisconnectedGraph(f"{ncomp} components")

    # -- metric queries ----------------------------------------------------

    def dist_from(self, x):
        """Distance row from vertex x to every vertex."""
        if self._dist is not None:
            return self._dist[x]
        row = self._dist_cache.get(x)
        if row is None:
            row = csgraph.dijkstra(self.adjacency, directed=False, indices=x)
            row.setflags(write=False)
            self._dist_cache[x] = row
        return row

    def dist(self, x, y):
        return float(self.dist_from(x)[y])

    def eccentricity(self, x):
        return float(self.dist_from(x).max())

    def diameter(self):
        """Exact when all-pairs distances are materialized, otherwise a
        double-sweep lower bound (exact on all gallery spaces)."""
        if self._dist is not None:
            return float(self._dist.max())
        far = int(np.argmax(self.dist_from(0)))
        return self.eccentricity(far)

    def ball(self, x, r):
        """Open ball {y : d(x, y) < r} as an index array."""
        if r <= 0:
            return np.empty(0, dtype=np.int64)
        return np.flatnonzero(self.dist_from(x) < r)

    def annulus(self, o, r, R):
        """Half-open shell {y : r <= d(o, y) < R}.

        Half-open so that shells at consecutive radii partition the space;
        discrete spheres carry mass, unlike in the continuum.
        """
        d = self.dist_from(o)
        return np.flatnonzero((d >= r) & (d < R))

    def ball_mass(self, x, r):
        if r <= 0:
            return 0.0
        return float(self.measure[self.dist_from(x) < r].sum())

    def vertex_degree_neighbors(self, v):
        return self.adjacency.indices[self.adjacency.indptr[v]:self.adjacency.indptr[v + 1]]


def build_space(vertices, edges, measure, coords=None):
    """Build and validate a space from raw vertex/edge/measure data.

    `vertices` is the vertex count; `edges` is a list of (u, v, length).
    A single vertex with no edges is a valid (degenerate) space.
    """
    edges = list(edges)
    if edges:
        e = np.array([(u, v) for u, v, _ in edges], dtype=np.int64)
        lens = np.array([l for _, _, l in edges], dtype=float)
    else:
        if vertices > 1:
            raise DisconnectedGraph("multiple vertices but no edges")
        e = np.empty((0, 2), dtype=np.int64)
        lens = np.empty(0)
    return FiniteMetricMeasureSpace(vertices, e, lens, measure, coords)


@dataclass(frozen=True)
class SpaceProfile:
    """Doubling estimate: C_D = sup m(B_2r)/m(B_r) over the sample grid."""

    C_D: float
    Q: float
    sample_spec: tuple = field(default=())

    def __post_init__(self):
        assert self.C_D >= 1.0 and self.Q >= 0.0


@dataclass(frozen=True)
class PIParams:
    p: float
    C_P: float
    lam: float

    def __post_init__(self):
        assert self.p >= 1 and self.lam >= 1 and self.C_P > 0


@dataclass(frozen=True)
class ReverseDoublingParams:
    o: int
    eta: float
    C_o: float


@dataclass(frozen=True)
class AhlforsParams:
    Q: float
    C_A: float

    def __post_init__(self):
        assert self.C_A >= 1.0


def default_profile_samples(space, max_centers=64):
    """(center, radius) grid for profile estimation.

    Radii run dyadically from 4x the resolution (smaller radii alias the
    lattice) up to a quarter of the diameter, so the doubled ball stays
    below diameter/2.
    """
    diam = space.diameter()
    if diam <= 0:
        return [(0, space.resolution)]
    stride = max(1, space.n // max_centers)
    centers = range(0, space.n, stride)
    samples = []
    r = 4.0 * space.resolution
    radii = []
    while r <= diam / 4 + 1e-12:
        radii.append(r)
        r *= 2.0
    if not radii:
        radii = [max(space.resolution, diam / 4)]
    for x in centers:
        for r in radii:
            samples.append((int(x), float(r)))
    return samples


def doubling_profile(space, samples=None):
    """Estimate the doubling constant C_D and dimension Q = log2 C_D."""
    if samples is None:
        samples = default_profile_samples(space)
    samples = list(samples)
    if not samples:
        raise EmptySample("no (center, radius) samples")
    if space.n == 1:
        return SpaceProfile(1.0, 0.0, tuple(samples))
    best = 1.0
    for x, r in samples:
        small = space.ball_mass(x, r)
        if small <= 0:
            raise EmptySample(f"empty ball at ({x}, {r})")
        big = space.ball_mass(x, 2 * r)
        best = max(best, big / small)
    return SpaceProfile(float(best), math.log2(best), tuple(samples))


def default_radial_samples(space, o):
    """Dyadic radii from the resolution up to the eccentricity of o."""
    rmax = space.eccentricity(o)
    radii = []
    r = space.resolution
    while r <= rmax:
        radii.append(r)
        r *= 2.0
    if radii and radii[-1] < rmax:
        radii.append(rmax)
    return radii


def reverse_doubling_fit(space, o, eta, radii=None):
    """Largest C_o with m(B_R(o))/m(B_r(o)) >= C_o (R/r)^eta on the sample.

    Returns the raw infimum, which honestly approaches 0 when reverse
    doubling with exponent eta fails.
    """
    if radii is None:
        radii = default_radial_samples(space, o)
    radii = sorted(set(float(r) for r in radii))
    masses = [space.ball_mass(o, r) for r in radii]
    best = math.inf
    for i, (r, mr) in enumerate(zip(radii, masses)):
        if mr <= 0:
            continue
        for R, mR in zip(radii[i:], masses[i:]):
            best = min(best, (mR / mr) * (r / R) ** eta)
    return best if best < math.inf else 0.0


def ahlfors_fit(space, samples=None, cap=100.0):
    """Least-squares Ahlfors exponent Q and regularity constant C_A.

    Raises NotAhlfors when the fitted C_A exceeds `cap` or the sample grid
    is degenerate (fewer than two usable radii).
    """
    if samples is None:
        samples = default_profile_samples(space)
    pts = [(r, space.ball_mass(x, r)) for x, r in samples]
    pts = [(r, m) for r, m in pts if m > 0 and r > 0]
    if len(pts) < 2 or len({r for r, _ in pts}) < 2:
        raise NotAhlfors("degenerate sample set")
    logr = np.log([r for r, _ in pts])
    logm = np.log([m for _, m in pts])
    Q = float(np.polyfit(logr, logm, 1)[0])
    ratios = [max(m / r**Q, r**Q / m) for r, m in pts]
    C_A = max(1.0, float(max(ratios)))
    if C_A > cap:
        raise NotAhlfors(f"C_A={C_A:.3g} exceeds cap {cap}")
    return AhlforsParams(Q=Q, C_A=C_A)
