"""Conforming P1 triangulations of slit-square domains.

Meshes are generated on a balanced quadtree over the square [0, 2a]^2:
cells intersecting the refinement band (or a slit) are split to the fine
size target, everything else to the coarse target, neighbor levels are
balanced 2:1, and each leaf is triangulated either by its parity diagonal
(no hanging nodes) or by a fan from its center (hanging mid-side nodes).
Every triangle is a right isosceles half-square, so the minimum angle is
45 degrees and the mesh is conforming by construction.  Slits must lie on
mesh lines; their nodes are duplicated into seam pairs so the two sides
are topologically disconnected except at interior slit tips.

Cell sizes are quantized to side/2^L.  The level for a size target h is
the smallest one with cell size <= 1.4 h, which keeps the longest element
edge within [0.7 h, 1.4 h] and therefore inside the contractual
[0.5 h, 1.5 h] band.
"""

from __future__ import annotations

import enum
import math
from collections import Counter, deque
from dataclasses import dataclass
from typing import Optional, Sequence, TextIO

import numpy as np

__all__ = [
    "BoundaryTag",
    "TriMesh",
    "DomainSpec",
    "MeshFormatError",
    "build_slit_domain",
    "boundary_nodes",
    "write_mesh",
    "read_mesh",
    "single_slit",
    "example1",
    "example2",
    "example3",
    "PRESETS",
]

MIN_ANGLE_DEG = 20.0

Point = tuple[float, float]
Segment = tuple[Point, Point]


class BoundaryTag(enum.Enum):
    DIRICHLET_MINUS = "DirichletMinus"
    DIRICHLET_PLUS = "DirichletPlus"
    FREE = "Free"


class MeshFormatError(ValueError):
    """Raised when a mesh file cannot be parsed; carries the line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


@dataclass
class TriMesh:
    """P1 triangulation with boundary tags and slit seam bookkeeping.

    Attributes
    ----------
    vertices : (n, 2) float array
    triangles : (m, 3) int array, CCW orientation
    boundary_edges : (b, 2) int array, edges owned by exactly one triangle
    boundary_tags : list of BoundaryTag, parallel to boundary_edges
    seam_pairs : (s, 2) int array of (node, twin) duplicated slit nodes
    """

    vertices: np.ndarray
    triangles: np.ndarray
    boundary_edges: np.ndarray
    boundary_tags: list
    seam_pairs: np.ndarray

    def __post_init__(self):
        self.vertices = np.ascontiguousarray(self.vertices, dtype=float)
        self.triangles = np.ascontiguousarray(self.triangles, dtype=np.int64)
        self.boundary_edges = np.asarray(self.boundary_edges, dtype=np.int64).reshape(-1, 2)
        self.seam_pairs = np.asarray(self.seam_pairs, dtype=np.int64).reshape(-1, 2)
        for arr in (self.vertices, self.triangles, self.boundary_edges, self.seam_pairs):
            arr.setflags(write=False)

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    def signed_areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        return 0.5 * (
            (p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
            - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1])
        )

    def min_angle_deg(self) -> float:
        p = self.vertices[self.triangles]
        angles = []
        for i in range(3):
            u = p[:, (i + 1) % 3] - p[:, i]
            v = p[:, (i + 2) % 3] - p[:, i]
            cosang = np.einsum("ij,ij->i", u, v) / (
                np.linalg.norm(u, axis=1) * np.linalg.norm(v, axis=1)
            )
            angles.append(np.degrees(np.arccos(np.clip(cosang, -1.0, 1.0))))
        return float(np.min(angles))

    def edge_lengths(self) -> np.ndarray:
        edges = set()
        for tri in self.triangles:
            for i in range(3):
                a, b = int(tri[i]), int(tri[(i + 1) % 3])
                edges.add((a, b) if a < b else (b, a))
        idx = np.array(sorted(edges))
        return np.linalg.norm(self.vertices[idx[:, 0]] - self.vertices[idx[:, 1]], axis=1)

    def validate(self) -> None:
        """Check the structural invariants; raises ValueError on violation."""
        if np.any(self.signed_areas() <= 0):
            raise ValueError("mesh contains non-positively-oriented triangles")
        counts = Counter()
        for tri in self.triangles:
            for i in range(3):
                a, b = int(tri[i]), int(tri[(i + 1) % 3])
                counts[(a, b) if a < b else (b, a)] += 1
        if any(c > 2 for c in counts.values()):
            raise ValueError("non-manifold edge (shared by more than two triangles)")
        boundary = {tuple(sorted(e)) for e in self.boundary_edges.tolist()}
        actual = {e for e, c in counts.items() if c == 1}
        if boundary != actual:
            raise ValueError("boundary_edges inconsistent with single-owner triangle edges")
        if self.min_angle_deg() < MIN_ANGLE_DEG - 1.0e-9:
            raise ValueError(f"minimum angle below {MIN_ANGLE_DEG} degrees")
        for a, b in self.seam_pairs:
            if counts.get((min(a, b), max(a, b))):
                raise ValueError("seam twins share an edge; slit is not a topological cut")


@dataclass(frozen=True)
class DomainSpec:
    """Geometry and sizing description of a slit-square domain.

    Slits are axis-aligned segments whose coordinates must sit on the
    quadtree lattice (binary fractions of the side length); all presets
    use multiples of a/2.  ``dirichlet_segments`` are (tag, segment)
    pairs lying on the outer boundary; untagged boundary stays Free.
    ``refinement_band`` is a convex CCW polygon meshed at ``h_min``;
    presets widen it by 4*ell around the expected crack paths.
    """

    a: float
    h_min: float
    h_max: float
    slits: tuple = ()
    refinement_band: Optional[tuple] = None
    dirichlet_segments: tuple = ()

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("half-side length a must be positive")
        if not (0 < self.h_min <= self.h_max):
            raise ValueError("need 0 < h_min <= h_max")
        side = 2.0 * self.a
        corners = {(0.0, 0.0), (side, 0.0), (side, side), (0.0, side)}
        for (p0, p1) in self.slits:
            (x0, y0), (x1, y1) = p0, p1
            if not (x0 == x1 or y0 == y1):
                raise ValueError(f"slit {p0}-{p1} is not axis-aligned")
            length = abs(x1 - x0) + abs(y1 - y0)
            if length == 0:
                raise ValueError("zero-length slit")
            if self.h_min >= length:
                raise ValueError(f"h_min={self.h_min} must be smaller than the slit length {length}")
            for p in (p0, p1):
                if not (0 <= p[0] <= side and 0 <= p[1] <= side):
                    raise ValueError(f"slit endpoint {p} outside the domain")
                if p in corners:
                    raise ValueError(f"slit endpoint {p} lies on a domain corner")
            if x0 == x1 and not (0 < x0 < side):
                raise ValueError("vertical slit lies on the domain boundary")
            if y0 == y1 and not (0 < y0 < side):
                raise ValueError("horizontal slit lies on the domain boundary")
        for tag, (p0, p1) in self.dirichlet_segments:
            if not isinstance(tag, BoundaryTag):
                raise ValueError(f"unknown boundary tag {tag!r}")
            on_side = (
                (p0[0] == p1[0] and p0[0] in (0.0, side))
                or (p0[1] == p1[1] and p0[1] in (0.0, side))
            )
            if not on_side:
                raise ValueError(f"dirichlet segment {p0}-{p1} is not on the outer boundary")

    @property
    def side(self) -> float:
        return 2.0 * self.a


# ----------------------------------------------------------------------
# small planar geometry helpers
# ----------------------------------------------------------------------

def _point_in_polygon(x: float, y: float, poly: Sequence[Point]) -> bool:
    inside = False
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        if (y0 > y) != (y1 > y):
            t = (y - y0) / (y1 - y0)
            if x < x0 + t * (x1 - x0):
                inside = not inside
    return inside


def _dist_to_segment(px, py, ax, ay, bx, by) -> float:
    vx, vy = bx - ax, by - ay
    denom = vx * vx + vy * vy
    t = 0.0 if denom == 0 else max(0.0, min(1.0, ((px - ax) * vx + (py - ay) * vy) / denom))
    dx, dy = px - (ax + t * vx), py - (ay + t * vy)
    return math.hypot(dx, dy)


def _dist_to_polygon(x: float, y: float, poly: Sequence[Point]) -> float:
    if _point_in_polygon(x, y, poly):
        return 0.0
    n = len(poly)
    return min(
        _dist_to_segment(x, y, *poly[i], *poly[(i + 1) % n]) for i in range(n)
    )


def _offset_convex(poly: Sequence[Point], d: float) -> tuple:
    """Offset a convex CCW polygon outward by distance d."""
    n = len(poly)
    lines = []
    for i in range(n):
        (x0, y0), (x1, y1) = poly[i], poly[(i + 1) % n]
        ex, ey = x1 - x0, y1 - y0
        length = math.hypot(ex, ey)
        nx, ny = ey / length, -ex / length  # outward for CCW
        lines.append((x0 + d * nx, y0 + d * ny, ex, ey))
    out = []
    for i in range(n):
        px, py, ux, uy = lines[i - 1]
        qx, qy, vx, vy = lines[i]
        det = ux * vy - uy * vx
        t = ((qx - px) * vy - (qy - py) * vx) / det
        out.append((px + t * ux, py + t * uy))
    return tuple(out)


# ----------------------------------------------------------------------
# quadtree mesher
# ----------------------------------------------------------------------

def _size_level(side: float, h: float) -> int:
    """Smallest level whose cell size side/2^L does not exceed 1.4 h."""
    level = 0
    while side / (1 << level) > 1.4 * h:
        level += 1
        if level > 24:
            raise ValueError(f"size target h={h} is too small for side={side}")
    return level


def build_slit_domain(spec: DomainSpec) -> TriMesh:
    """Generate the conforming triangulation described by ``spec``.

    Sizing contract: inside the refinement band every element's longest
    edge lies in [0.5 h_min, 1.5 h_min]; outside it never exceeds
    1.5 h_max.  Generation is fully deterministic.
    """
    side = spec.side
    fine = _size_level(side, spec.h_min)
    coarse = _size_level(side, spec.h_max)

    band = spec.refinement_band
    slits = list(spec.slits)

    def target_level(level: int, i: int, j: int) -> int:
        cs = side / (1 << level)
        cx, cy = (i + 0.5) * cs, (j + 0.5) * cs
        reach = 0.5 * cs * math.sqrt(2.0) + 1.0e-12 * side
        if band is not None and _dist_to_polygon(cx, cy, band) <= reach:
            return fine
        for (p0, p1) in slits:
            if _dist_to_segment(cx, cy, p0[0], p0[1], p1[0], p1[1]) <= reach:
                return fine
        return coarse

    leaves: set[tuple[int, int, int]] = set()
    stack = [(0, 0, 0)]
    while stack:
        level, i, j = stack.pop()
        if level < target_level(level, i, j):
            for di in (0, 1):
                for dj in (0, 1):
                    stack.append((level + 1, 2 * i + di, 2 * j + dj))
        else:
            leaves.add((level, i, j))

    def covering_leaf(level, i, j):
        for lv in range(level, -1, -1):
            key = (lv, i >> (level - lv), j >> (level - lv))
            if key in leaves:
                return key
        return None

    # 2:1 balancing: split any leaf more than one level coarser than a neighbor.
    queue = deque(leaves)
    while queue:
        cell = queue.popleft()
        if cell not in leaves:
            continue
        level, i, j = cell
        n_cells = 1 << level
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            ni, nj = i + di, j + dj
            if not (0 <= ni < n_cells and 0 <= nj < n_cells):
                continue
            cover = covering_leaf(level, ni, nj)
            if cover is not None and level - cover[0] > 1:
                leaves.remove(cover)
                cl, ci, cj = cover
                for ddi in (0, 1):
                    for ddj in (0, 1):
                        child = (cl + 1, 2 * ci + ddi, 2 * cj + ddj)
                        leaves.add(child)
                        queue.append(child)
                queue.append(cell)

    max_level = max(lv for lv, _, _ in leaves)
    res = 1 << (max_level + 1)  # lattice resolution holding midpoints and centers
    unit = side / res

    node_ids: dict[tuple[int, int], int] = {}
    coords: list[tuple[int, int]] = []

    def node(ix: int, iy: int) -> int:
        key = (ix, iy)
        nid = node_ids.get(key)
        if nid is None:
            nid = len(coords)
            node_ids[key] = nid
            coords.append(key)
        return nid

    def neighbor_is_finer(level, i, j) -> bool:
        n_cells = 1 << level
        if not (0 <= i < n_cells and 0 <= j < n_cells):
            return False
        return covering_leaf(level, i, j) is None

    triangles: list[tuple[int, int, int]] = []
    for (level, i, j) in sorted(leaves):
        cs = res >> level
        half = cs >> 1
        x0, y0 = i * cs, j * cs
        mids = {
            "S": neighbor_is_finer(level, i, j - 1),
            "E": neighbor_is_finer(level, i + 1, j),
            "N": neighbor_is_finer(level, i, j + 1),
            "W": neighbor_is_finer(level, i - 1, j),
        }
        if not any(mids.values()):
            c00 = node(x0, y0)
            c10 = node(x0 + cs, y0)
            c11 = node(x0 + cs, y0 + cs)
            c01 = node(x0, y0 + cs)
            if (i + j) % 2 == 0:
                triangles.append((c00, c10, c11))
                triangles.append((c00, c11, c01))
            else:
                triangles.append((c00, c10, c01))
                triangles.append((c10, c11, c01))
            continue
        loop = [(x0, y0)]
        if mids["S"]:
            loop.append((x0 + half, y0))
        loop.append((x0 + cs, y0))
        if mids["E"]:
            loop.append((x0 + cs, y0 + half))
        loop.append((x0 + cs, y0 + cs))
        if mids["N"]:
            loop.append((x0 + half, y0 + cs))
        loop.append((x0, y0 + cs))
        if mids["W"]:
            loop.append((x0, y0 + half))
        center = node(x0 + half, y0 + half)
        ids = [node(*p) for p in loop]
        for t in range(len(ids)):
            triangles.append((center, ids[t], ids[(t + 1) % len(ids)]))

    vertices = np.array(coords, dtype=float) * unit
    tri = np.array(triangles, dtype=np.int64)

    # ------------------------------------------------------------------
    # slit seams: duplicate nodes so the two sides are disconnected
    # ------------------------------------------------------------------
    vert_list = [tuple(v) for v in coords]
    seam_pairs: list[tuple[int, int]] = []
    tri_work = tri.copy()

    def lattice(value: float, what: str) -> int:
        raw = value / unit
        snapped = round(raw)
        if abs(raw - snapped) > 1.0e-9:
            raise ValueError(f"{what} = {value} does not sit on the mesh lattice (unit {unit})")
        return int(snapped)

    for (p0, p1) in slits:
        vertical = p0[0] == p1[0]
        if vertical:
            axis_pos = lattice(p0[0], "slit x")
            lo, hi = sorted((lattice(p0[1], "slit y0"), lattice(p1[1], "slit y1")))
            lo_open = lo == 0
            hi_open = hi == res
        else:
            axis_pos = lattice(p0[1], "slit y")
            lo, hi = sorted((lattice(p0[0], "slit x0"), lattice(p1[0], "slit x1")))
            lo_open = lo == 0
            hi_open = hi == res

        dup: list[int] = []
        for nid, (ix, iy) in enumerate(vert_list):
            along, across = (iy, ix) if vertical else (ix, iy)
            if across != axis_pos or not (lo <= along <= hi):
                continue
            interior = lo < along < hi
            mouth = (along == lo and lo_open) or (along == hi and hi_open)
            if interior or mouth:
                dup.append(nid)
        if not dup:
            raise ValueError(f"slit {p0}-{p1} has no interior mesh nodes; refine h_min")

        centroids = vertices[tri_work].mean(axis=1)
        plus_side = (centroids[:, 0] if vertical else centroids[:, 1]) > axis_pos * unit
        twin_of = {}
        for nid in dup:
            twin = len(vert_list)
            vert_list.append(vert_list[nid])
            twin_of[nid] = twin
            seam_pairs.append((nid, twin))
        for e in np.nonzero(plus_side)[0]:
            for loc in range(3):
                twin = twin_of.get(int(tri_work[e, loc]))
                if twin is not None:
                    tri_work[e, loc] = twin
        vertices = np.array(vert_list, dtype=float) * unit

    # ------------------------------------------------------------------
    # boundary edges (single-owner triangle edges) and their tags
    # ------------------------------------------------------------------
    owner = Counter()
    directed = {}
    for tri_ids in tri_work:
        for loc in range(3):
            a, b = int(tri_ids[loc]), int(tri_ids[(loc + 1) % 3])
            key = (a, b) if a < b else (b, a)
            owner[key] += 1
            directed[key] = (a, b)
    b_edges = sorted(key for key, c in owner.items() if c == 1)

    def classify(a: int, b: int) -> BoundaryTag:
        mx = 0.5 * (vertices[a, 0] + vertices[b, 0])
        my = 0.5 * (vertices[a, 1] + vertices[b, 1])
        tol = 1.0e-9 * side
        for tag, (q0, q1) in spec.dirichlet_segments:
            if _dist_to_segment(mx, my, q0[0], q0[1], q1[0], q1[1]) <= tol:
                return tag
        return BoundaryTag.FREE

    boundary_edges = np.array([directed[key] for key in b_edges], dtype=np.int64).reshape(-1, 2)
    boundary_tags = [classify(a, b) for a, b in boundary_edges]

    mesh = TriMesh(
        vertices=vertices,
        triangles=tri_work,
        boundary_edges=boundary_edges,
        boundary_tags=boundary_tags,
        seam_pairs=np.array(seam_pairs, dtype=np.int64).reshape(-1, 2),
    )
    mesh.validate()
    return mesh


def boundary_nodes(mesh: TriMesh, tag: BoundaryTag) -> set[int]:
    """Nodes lying on boundary edges carrying ``tag``.

    Seam-pair nodes (slit mouths) and nodes shared between the two
    Dirichlet tags are excluded from the Dirichlet sets: the imposed datum
    is discontinuous across the slit, so the junction belongs to neither
    side.
    """
    if not isinstance(tag, BoundaryTag):
        raise KeyError(f"unknown boundary tag {tag!r}")
    per_tag: dict[BoundaryTag, set[int]] = {t: set() for t in BoundaryTag}
    for (a, b), t in zip(mesh.boundary_edges, mesh.boundary_tags):
        per_tag[t].add(int(a))
        per_tag[t].add(int(b))
    if tag is BoundaryTag.FREE:
        return per_tag[tag]
    other = (
        BoundaryTag.DIRICHLET_PLUS if tag is BoundaryTag.DIRICHLET_MINUS else BoundaryTag.DIRICHLET_MINUS
    )
    seam = set(mesh.seam_pairs.ravel().tolist())
    return per_tag[tag] - per_tag[other] - seam


# ----------------------------------------------------------------------
# plain-text mesh format
# ----------------------------------------------------------------------

def write_mesh(mesh: TriMesh, stream: TextIO) -> None:
    """Write the sectioned plain-text format (17 significant digits)."""
    stream.write("$Vertices\n")
    for idx, (x, y) in enumerate(mesh.vertices):
        stream.write(f"{idx} {x:.17g} {y:.17g}\n")
    stream.write("$EndVertices\n$Triangles\n")
    for i, j, k in mesh.triangles:
        stream.write(f"{i} {j} {k}\n")
    stream.write("$EndTriangles\n$BoundaryEdges\n")
    for (i, j), tag in zip(mesh.boundary_edges, mesh.boundary_tags):
        stream.write(f"{i} {j} {tag.value}\n")
    stream.write("$EndBoundaryEdges\n$SeamPairs\n")
    for i, j in mesh.seam_pairs:
        stream.write(f"{i} {j}\n")
    stream.write("$EndSeamPairs\n")


_SECTIONS = ("Vertices", "Triangles", "BoundaryEdges", "SeamPairs")


def read_mesh(stream: TextIO) -> TriMesh:
    """Parse the sectioned format; round-trips :func:`write_mesh` bit-exactly."""
    data: dict[str, list] = {}
    current: Optional[str] = None
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("$"):
            name = line[1:]
            if name.startswith("End"):
                if current is None or name != "End" + current:
                    raise MeshFormatError(f"unexpected terminator {line!r}", lineno)
                current = None
            else:
                if current is not None:
                    raise MeshFormatError(f"section {current!r} not terminated", lineno)
                if name not in _SECTIONS:
                    raise MeshFormatError(f"unknown section {line!r}", lineno)
                if name in data:
                    raise MeshFormatError(f"duplicate section {line!r}", lineno)
                current = name
                data[name] = []
            continue
        if current is None:
            raise MeshFormatError(f"content outside any section: {line!r}", lineno)
        data[current].append((lineno, line))
    if current is not None:
        raise MeshFormatError(f"section {current!r} not terminated (truncated file?)")
    for name in _SECTIONS:
        if name not in data:
            raise MeshFormatError(f"missing section ${name}")

    try:
        verts_raw = sorted(
            ((int(t[0]), float(t[1]), float(t[2])) for _, line in data["Vertices"] for t in [line.split()]),
        )
    except (ValueError, IndexError):
        bad = next(
            (ln for ln, line in data["Vertices"] if len(line.split()) != 3), data["Vertices"][0][0]
        )
        raise MeshFormatError("malformed vertex line", bad) from None
    vertices = np.array([[x, y] for _, x, y in verts_raw], dtype=float)

    def parse_ints(section: str, width: int):
        rows = []
        for lineno, line in data[section]:
            parts = line.split()
            if len(parts) != width:
                raise MeshFormatError(f"expected {width} fields in ${section}", lineno)
            try:
                rows.append([int(p) for p in parts])
            except ValueError:
                raise MeshFormatError(f"malformed integer in ${section}", lineno) from None
        return rows

    triangles = np.array(parse_ints("Triangles", 3), dtype=np.int64).reshape(-1, 3)
    be, tags = [], []
    for lineno, line in data["BoundaryEdges"]:
        parts = line.split()
        if len(parts) != 3:
            raise MeshFormatError("expected 'i j tag' in $BoundaryEdges", lineno)
        try:
            be.append((int(parts[0]), int(parts[1])))
            tags.append(BoundaryTag(parts[2]))
        except ValueError:
            raise MeshFormatError(f"malformed boundary edge {line!r}", lineno) from None
    seams = np.array(parse_ints("SeamPairs", 2), dtype=np.int64).reshape(-1, 2)
    return TriMesh(
        vertices=vertices,
        triangles=triangles,
        boundary_edges=np.array(be, dtype=np.int64).reshape(-1, 2),
        boundary_tags=tags,
        seam_pairs=seams,
    )


# ----------------------------------------------------------------------
# presets mirroring the anti-plane shear experiments
# ----------------------------------------------------------------------

def _top_edge_split(a: float) -> tuple:
    side = 2.0 * a
    return (
        (BoundaryTag.DIRICHLET_MINUS, ((0.0, side), (a, side))),
        (BoundaryTag.DIRICHLET_PLUS, ((a, side), (side, side))),
    )


def single_slit(a: float = 1.0, ell: float = 0.04, h_min: Optional[float] = None, h_max: Optional[float] = None) -> DomainSpec:
    """Square with one slit {a} x (3a/2, 2a), loaded on the split top edge.

    The band fans out from the slit tip over all propagation directions
    between vertical and -45 degrees, widened by 4*ell.
    """
    side = 2.0 * a
    fan = ((a, side), (a, 0.0), (side, 0.0), (side, a / 2.0))
    return DomainSpec(
        a=a,
        h_min=h_min if h_min is not None else ell / 5.0,
        h_max=h_max if h_max is not None else ell,
        slits=(((a, 1.5 * a), (a, side)),),
        refinement_band=_offset_convex(fan, 4.0 * ell),
        dirichlet_segments=_top_edge_split(a),
    )


def example1(a: float = 1.0, ell: float = 0.04, h_min: Optional[float] = None, h_max: Optional[float] = None) -> DomainSpec:
    """Single top slit with the band covering the central strip.

    Geometry of the bi-material strip test; the heterogeneous toughness of
    that test is outside the homogeneous material model, so only geometry
    and sizing are provided here.
    """
    side = 2.0 * a
    strip = ((a / 2.0, 0.0), (1.5 * a, 0.0), (1.5 * a, side), (a / 2.0, side))
    return DomainSpec(
        a=a,
        h_min=h_min if h_min is not None else ell / 5.0,
        h_max=h_max if h_max is not None else ell,
        slits=(((a, 1.5 * a), (a, side)),),
        refinement_band=_offset_convex(strip, 4.0 * ell),
        dirichlet_segments=_top_edge_split(a),
    )


def example2(a: float = 1.0, ell: float = 0.04, h_min: Optional[float] = None, h_max: Optional[float] = None) -> DomainSpec:
    """Two parallel slits from the top edge at x = a/2 and x = 3a/2.

    The middle third of the top edge is driven against the outer thirds so
    both slits are torn; the cracks are expected to join mid-specimen.
    """
    side = 2.0 * a
    box = ((a / 4.0, a / 2.0), (1.75 * a, a / 2.0), (1.75 * a, side), (a / 4.0, side))
    return DomainSpec(
        a=a,
        h_min=h_min if h_min is not None else ell / 5.0,
        h_max=h_max if h_max is not None else ell,
        slits=(
            ((a / 2.0, 1.5 * a), (a / 2.0, side)),
            ((1.5 * a, 1.5 * a), (1.5 * a, side)),
        ),
        refinement_band=_offset_convex(box, 4.0 * ell),
        dirichlet_segments=(
            (BoundaryTag.DIRICHLET_MINUS, ((0.0, side), (a / 2.0, side))),
            (BoundaryTag.DIRICHLET_PLUS, ((a / 2.0, side), (1.5 * a, side))),
            (BoundaryTag.DIRICHLET_MINUS, ((1.5 * a, side), (side, side))),
        ),
    )


def example3(a: float = 1.0, ell: float = 0.04, h_min: Optional[float] = None, h_max: Optional[float] = None) -> DomainSpec:
    """Two slits entering at mid-height from opposite lateral sides.

    Loaded bottom against top; the cracks approach each other and merge in
    the interior.
    """
    side = 2.0 * a
    box = ((0.0, a / 2.0), (side, a / 2.0), (side, 1.5 * a), (0.0, 1.5 * a))
    return DomainSpec(
        a=a,
        h_min=h_min if h_min is not None else ell / 5.0,
        h_max=h_max if h_max is not None else ell,
        slits=(
            ((0.0, a), (a / 2.0, a)),
            ((1.5 * a, a), (side, a)),
        ),
        refinement_band=_offset_convex(box, 4.0 * ell),
        dirichlet_segments=(
            (BoundaryTag.DIRICHLET_MINUS, ((0.0, 0.0), (side, 0.0))),
            (BoundaryTag.DIRICHLET_PLUS, ((0.0, side), (side, side))),
        ),
    )


PRESETS = {
    "single_slit": single_slit,
    "example1": example1,
    "example2": example2,
    "example3": example3,
}
