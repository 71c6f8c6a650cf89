"""Benchmark space generators and space-file I/O.

Four families: a unit grid quadrant (planar, volume growth ~ r^2), a planar
union of circular sectors glued through the unit ball (the stress test for
annulus decompositions), a measured half-line realizing growth ~ r^eta
through vertex masses, and a cone-like radial/angular grid that keeps every
annulus connected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec, SchemaError
from .space import FiniteMetricMeasureSpace, build_space

GALLERY_KINDS = ("grid_quadrant", "sector_union", "radial_profile", "cone_grid")


@dataclass(frozen=True)
class GallerySpec:
    kind: str
    size: int = 64
    eta: float = 2.0
    resolution: float = 0.25
    r_max: float = 40.0  # sector_union radial truncation

    def __post_init__(self):
        if self.kind not in GALLERY_KINDS:
            raise InvalidSpec(f"unknown kind {self.kind!r}")
        if self.size < 2 and self.kind != "sector_union":
            raise InvalidSpec("size must be >= 2")
        if self.eta < 1:
            raise InvalidSpec("eta must be >= 1")
        if self.resolution <= 0:
            raise InvalidSpec("resolution must be > 0")


def grid_quadrant(n):
    """(n+1)^2 unit-grid quadrant with unit edges and unit masses."""
    side = n + 1
    idx = lambda i, j: i * side + j
    edges = []
    for i in range(side):
        for j in range(side):
            if i + 1 < side:
                edges.append((idx(i, j), idx(i + 1, j), 1.0))
            if j + 1 < side:
                edges.append((idx(i, j), idx(i, j + 1), 1.0))
    coords = [(i, j) for i in range(side) for j in range(side)]
    return build_space(side * side, edges, np.ones(side * side), coords)


def _in_sector_union(x, y, r_max):
    """Membership in the closed sector-union region.

    Three sectors glued to the closed unit ball: an unbounded 90-degree
    sector around the positive x-axis (truncated at r_max), a thin
    second-quadrant sector of radius 20, and a third-quadrant sector of
    radius 17 with an open radial block removed.  Boundary points are
    included (closure convention).
    """
    r = math.hypot(x, y)
    if r <= 1.0:
        return True
    theta = math.atan2(y, x) % (2 * math.pi)
    tol = 1e-9
    # A1: theta in [-pi/4, pi/4], unbounded (truncated at r_max)
    if r <= r_max + tol:
        t = theta if theta <= math.pi else theta - 2 * math.pi
        if -math.pi / 4 - tol <= t <= math.pi / 4 + tol:
            return True
    # A2: theta in [pi/2, 3pi/4], r <= 20
    if r <= 20.0 + tol and math.pi / 2 - tol <= theta <= 3 * math.pi / 4 + tol:
        return True
    # A3: theta in [pi, 3pi/2], r <= 17, minus open block
    if r <= 17.0 + tol and math.pi - tol <= theta <= 3 * math.pi / 2 + tol:
        in_block = (3.0 + tol < r < 15.0 - tol) and (
            5 * math.pi / 4 + tol < theta < 7 * math.pi / 4 - tol
        )
        if not in_block:
            return True
    return False


def sector_union(resolution, r_max=40.0):
    """Grid discretization of the three-sector region at step `resolution`.

    Vertices are grid points whose continuum coordinates lie in the closed
    region; edges join axis-neighbors at distance `resolution`.
    """
    h = float(resolution)
    span = int(math.ceil(max(r_max, 20.0) / h)) + 1
    pts = {}
    coords = []
    for i in range(-span, span + 1):
        for j in range(-span, span + 1):
            x, y = i * h, j * h
            if _in_sector_union(x, y, r_max):
                pts[(i, j)] = len(coords)
                coords.append((x, y))
    edges = []
    for (i, j), u in pts.items():
        for di, dj in ((1, 0), (0, 1)):
            v = pts.get((i + di, j + dj))
            if v is not None:
                edges.append((u, v, h))
    # Sector boundaries can strand isolated grid points; keep the component
    # of the origin.
    from scipy.sparse import csr_matrix
    from scipy.sparse import csgraph

    m = len(coords)
    if edges:
        rows = [u for u, _, _ in edges] + [v for _, v, _ in edges]
        cols = [v for _, v, _ in edges] + [u for u, _, _ in edges]
        adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(m, m))
        _, labels = csgraph.connected_components(adj, directed=False)
        keep = labels == labels[pts[(0, 0)]]
    else:
        keep = np.ones(m, dtype=bool)
    remap = -np.ones(m, dtype=np.int64)
    remap[keep] = np.arange(int(keep.sum()))
    coords = [c for c, k in zip(coords, keep) if k]
    edges = [(int(remap[u]), int(remap[v]), l) for u, v, l in edges if keep[u] and keep[v]]
    return build_space(len(coords), edges, np.ones(len(coords)), coords)


def sector_union_origin(space):
    """Index of the grid point at the origin."""
    d = np.einsum("ij,ij->i", space.coords, space.coords)
    return int(np.argmin(d))


def radial_profile(n, eta):
    """Path 1..n with mass(k) = k^(eta-1), so m(B_r(1)) grows like r^eta."""
    masses = np.arange(1, n + 1, dtype=float) ** (eta - 1.0)
    edges = [(k, k + 1, 1.0) for k in range(n - 1)]
    coords = [(k, 0.0) for k in range(n)]
    return build_space(n, edges, masses, coords)


def cone_grid(n, eta, c=4):
    """Radial/angular grid with ceil(c * r^(eta-1)) points on ring r.

    Unit masses; ring vertices sit on a cycle (arc-length edges) and each
    connects radially to the angularly nearest vertex one ring in.  The
    angular density keeps every annulus connected, so the relatively
    connected annuli property holds by construction.
    """
    counts = [max(1, int(math.ceil(c * r ** (eta - 1.0)))) for r in range(1, n + 1)]
    coords = [(0.0, 0.0)]
    ring_start = []
    for r, cnt in enumerate(counts, start=1):
        ring_start.append(len(coords))
        for k in range(cnt):
            ang = 2 * math.pi * k / cnt
            coords.append((r * math.cos(ang), r * math.sin(ang)))
    edges = []
    for r, cnt in enumerate(counts, start=1):
        s = ring_start[r - 1]
        if cnt > 1:
            arc = 2 * math.pi * r / cnt
            for k in range(cnt):
                edges.append((s + k, s + (k + 1) % cnt, arc))
        if r == 1:
            for k in range(cnt):
                edges.append((0, s + k, 1.0))
        else:
            prev_s, prev_cnt = ring_start[r - 2], counts[r - 2]
            for k in range(cnt):
                frac = k / cnt
                nearest = int(round(frac * prev_cnt)) % prev_cnt
                edges.append((s + k, prev_s + nearest, 1.0))
    # dedupe cycle edges for cnt == 2 (both directions coincide)
    seen = set()
    uniq = []
    for u, v, l in edges:
        key = (min(u, v), max(u, v))
        if key not in seen:
            seen.add(key)
            uniq.append((u, v, l))
    return build_space(len(coords), uniq, np.ones(len(coords)), coords)


def path_space(n, step=1.0, x0=0.0, masses=None):
    """Uniform path of n vertices at spacing `step` (utility for tests/demos)."""
    if masses is None:
        masses = np.ones(n)
    edges = [(k, k + 1, step) for k in range(n - 1)]
    coords = [(x0 + k * step, 0.0) for k in range(n)]
    return build_space(n, edges, masses, coords)


def generate(spec):
    """Generate the space described by a GallerySpec."""
    if spec.kind == "grid_quadrant":
        return grid_quadrant(spec.size)
    if spec.kind == "sector_union":
        return sector_union(spec.resolution, spec.r_max)
    if spec.kind == "radial_profile":
        return radial_profile(spec.size, spec.eta)
    if spec.kind == "cone_grid":
        return cone_grid(spec.size, spec.eta)
    raise InvalidSpec(spec.kind)


def save_space(space, path):
    """Write a space to the JSON schema shared with the loader."""
    doc = {
        "vertices": space.n,
        "edges": [[int(u), int(v), float(l)] for (u, v), l in zip(space.edges, space.lengths)],
        "measure": [float(m) for m in space.measure],
    }
    if space.coords is not None:
        doc["coords"] = [[float(x), float(y)] for x, y in space.coords]
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_space(path):
    """Load and validate a space file; raises SchemaError with the bad field."""
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("json", str(exc)) from exc
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise SchemaError("vertices", "missing")
    n = doc["vertices"]
    if not isinstance(n, int) or n < 1:
        raise SchemaError("vertices", "must be a positive integer")
    edges = doc.get("edges", [])
    for k, e in enumerate(edges):
        if len(e) != 3:
            raise SchemaError("edges", f"entry {k} is not (u, v, length)")
        u, v, l = e
        if not (0 <= u < n and 0 <= v < n):
            raise SchemaError("edges", f"entry {k} references a missing vertex")
        if l <= 0:
            raise SchemaError("edges", f"entry {k} has non-positive length")
    measure = doc.get("measure")
    if measure is None or len(measure) != n:
        raise SchemaError("measure", "missing or wrong length")
    if any(m <= 0 for m in measure):
        raise SchemaError("measure", "masses must be positive")
    coords = doc.get("coords")
    if coords is not None and len(coords) != n:
        raise SchemaError("coords", "wrong length")
    return build_space(n, [tuple(e) for e in edges], np.array(measure, dtype=float), coords)


def spaces_equal(a, b):
    """Field-identical comparison used by round-trip tests."""
    if a.n != b.n or len(a.edges) != len(b.edges):
        return False
    if not (np.array_equal(a.edges, b.edges) and np.array_equal(a.lengths, b.lengths)):
        return False
    if not np.array_equal(a.measure, b.measure):
        return False
    if (a.coords is None) != (b.coords is None):
        return False
    if a.coords is not None and not np.array_equal(a.coords, b.coords):
        return False
    return True
