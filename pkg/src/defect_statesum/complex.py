"""Oriented triangulated surfaces carrying an oriented defect curve.

Edges get a kind and a direction from the vertex data alone:

* ``C`` -- both ends on the curve and the pair is a curve edge; directed along the curve,
* ``B`` -- exactly one end on the curve; directed away from the curve,
* ``A`` -- no end on the curve; directed from lower to higher ``off_curve_order`` rank.

Triangles are stored as vertex triples listed counterclockwise, i.e. in the
boundary orientation induced by the surface.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence

Edge = tuple[int, int]  # unordered, stored as (min, max)
Triangle = tuple[int, int, int]

TAGS = {(0, "+"): "a", (0, "-"): "abar", (1, "+"): "b", (1, "-"): "bbar", (2, "+"): "c", (2, "-"): "cbar"}
KIND_SPACE = {"A": "A", "B": "B", "C": "C"}


class ComplexError(ValueError):
    pass


class InvalidSurface(ComplexError):
    pass


class OrientationContradiction(ComplexError):
    pass


class UnknownSeed(KeyError):
    pass


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def canonical_triangle(tri: Sequence[int]) -> Triangle:
    """Rotate an oriented triple so that its smallest vertex comes first."""
    i = min(range(3), key=lambda k: tri[k])
    return (tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3])


def directed_edges(tri: Sequence[int]) -> list[tuple[int, int]]:
    return [(tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])]


class TriangleClass(NamedTuple):
    k: int
    sign: str

    @property
    def tag(self) -> str:
        return TAGS[(self.k, self.sign)]


@dataclass(frozen=True, eq=False)
class CurveSurfaceComplex:
    vertices: tuple[tuple[int, bool], ...]
    off_curve_order: tuple[int, ...]
    triangles: tuple[Triangle, ...]
    curve_cycles: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple((int(v), bool(c)) for v, c in self.vertices))
        object.__setattr__(self, "off_curve_order", tuple(int(v) for v in self.off_curve_order))
        object.__setattr__(self, "triangles", tuple(canonical_triangle(tuple(map(int, t))) for t in self.triangles))
        object.__setattr__(self, "curve_cycles", tuple(tuple(int(v) for v in c) for c in self.curve_cycles))

    # -- basic lookups ---------------------------------------------------
    @cached_property
    def on_curve(self) -> dict[int, bool]:
        return dict(self.vertices)

    @cached_property
    def vertex_ids(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.vertices)

    @cached_property
    def rank(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.off_curve_order)}

    @cached_property
    def curve_successor(self) -> dict[int, int]:
        succ = {}
        for cycle in self.curve_cycles:
            for i, v in enumerate(cycle):
                succ[v] = cycle[(i + 1) % len(cycle)]
        return succ

    @cached_property
    def curve_edges(self) -> dict[Edge, tuple[int, int]]:
        """Curve edges with their direction along the curve."""
        return {edge_key(u, v): (u, v) for u, v in self.curve_successor.items()}

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        found = set()
        for tri in self.triangles:
            for u, v in directed_edges(tri):
                found.add(edge_key(u, v))
        return tuple(sorted(found))

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def edge_triangles(self) -> dict[Edge, list[int]]:
        out: dict[Edge, list[int]] = defaultdict(list)
        for i, tri in enumerate(self.triangles):
            for u, v in directed_edges(tri):
                out[edge_key(u, v)].append(i)
        return dict(out)

    @cached_property
    def vertex_triangles(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = defaultdict(list)
        for i, tri in enumerate(self.triangles):
            for v in tri:
                out[v].append(i)
        return dict(out)

    @cached_property
    def neighbors(self) -> dict[int, set[int]]:
        out: dict[int, set[int]] = defaultdict(set)
        for u, v in self.edges:
            out[u].add(v)
            out[v].add(u)
        return dict(out)

    def degree(self, v: int) -> int:
        return len(self.neighbors.get(v, ()))

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edge_index

    # -- edge kinds and directions ----------------------------------------
    def edge_kind(self, edge: Edge) -> str:
        u, v = edge
        n_on = self.on_curve[u] + self.on_curve[v]
        if n_on == 0:
            return "A"
        if n_on == 1:
            return "B"
        if edge in self.curve_edges:
            return "C"
        raise ComplexError(f"edge {edge} joins two curve vertices but is not a curve edge")

    def edge_direction(self, edge: Edge) -> tuple[int, int]:
        u, v = edge
        kind = self.edge_kind(edge)
        if kind == "C":
            return self.curve_edges[edge]
        if kind == "B":
            return (u, v) if self.on_curve[u] else (v, u)
        return (u, v) if self.rank[u] < self.rank[v] else (v, u)

    @cached_property
    def edge_kinds(self) -> dict[Edge, str]:
        return {e: self.edge_kind(e) for e in self.edges}

    @cached_property
    def n_off_vertices(self) -> int:
        return sum(1 for _, c in self.vertices if not c)

    @cached_property
    def n_on_vertices(self) -> int:
        return sum(1 for _, c in self.vertices if c)

    def with_order(self, order: Sequence[int]) -> "CurveSurfaceComplex":
        return CurveSurfaceComplex(self.vertices, tuple(order), self.triangles, self.curve_cycles)

    def __repr__(self) -> str:
        return (
            f"CurveSurfaceComplex(V={len(self.vertices)}, E={len(self.edges)}, F={len(self.triangles)}, "
            f"curve={[len(c) for c in self.curve_cycles]})"
        )


def classify_triangle(
    complex: CurveSurfaceComplex, triangle: Sequence[int], barred_order: str = "path"
) -> tuple[TriangleClass, tuple[Edge, Edge, Edge]]:
    """Return the triangle's coefficient class and the argument order of its edges.

    With the boundary traversed counterclockwise, a ``+`` triangle has two
    agreeing edges x->y, y->z and a disagreeing x->z; the arguments are
    (xy, yz, xz).  A ``-`` triangle has one agreeing edge x->y and the two
    others directed x->z, z->y; the arguments are (xy, xz, zy), the two
    superscripts listed as a directed path from x to y.

    ``barred_order="encounter"`` is a deliberately wrong convention kept for
    the falsification harness: it swaps the superscripts of ``abar`` (the only
    barred tensor whose superscripts share a colour space).
    """
    tri = tuple(triangle)
    boundary = directed_edges(tri)
    agree = [complex.edge_direction(edge_key(u, v)) == (u, v) for u, v in boundary]
    n_agree = sum(agree)
    k = sum(complex.on_curve[v] for v in tri)
    if n_agree == 2:
        i = agree.index(False)
        x, z = boundary[i][1], boundary[i][0]
        y = tri[(tri.index(x) + 1) % 3]
        return TriangleClass(k, "+"), (edge_key(x, y), edge_key(y, z), edge_key(x, z))
    if n_agree == 1:
        i = agree.index(True)
        x, y = boundary[i]
        z = tri[(tri.index(y) + 1) % 3]
        first, second = edge_key(x, z), edge_key(z, y)
        if barred_order == "encounter" and k == 0:
            first, second = second, first
        return TriangleClass(k, "-"), (edge_key(x, y), first, second)
    raise OrientationContradiction(f"triangle {tri} has {n_agree} edges agreeing with its boundary")


def validate(complex: CurveSurfaceComplex, require_flag_like: bool = True) -> list[str]:
    """List everything that keeps ``complex`` from being a valid flag-like curve-surface pair.

    An empty list means: a closed oriented simplicial surface, the curve a
    disjoint union of embedded cycles in its 1-skeleton, and (when
    ``require_flag_like``) every simplex meets the curve in a face.
    """
    problems: list[str] = []
    ids = [v for v, _ in complex.vertices]
    if len(set(ids)) != len(ids):
        problems.append("duplicate vertex ids")
    on = complex.on_curve
    off_ids = sorted(v for v, c in complex.vertices if not c)
    if sorted(complex.off_curve_order) != off_ids:
        problems.append("off_curve_order is not a permutation of the off-curve vertices")

    seen_sets = Counter()
    for tri in complex.triangles:
        if len(set(tri)) != 3:
            problems.append(f"degenerate triangle {tri}")
            continue
        missing = [v for v in tri if v not in on]
        if missing:
            problems.append(f"triangle {tri} uses unknown vertices {missing}")
            continue
        seen_sets[frozenset(tri)] += 1
    for s, n in seen_sets.items():
        if n > 1:
            problems.append(f"triangle on vertices {sorted(s)} appears {n} times")
    if problems:
        return problems

    directed = Counter()
    for tri in complex.triangles:
        for u, v in directed_edges(tri):
            directed[(u, v)] += 1
    for e, tris in complex.edge_triangles.items():
        u, v = e
        if len(tris) != 2 or directed[(u, v)] != 1 or directed[(v, u)] != 1:
            problems.append(f"edge {e} is not shared by exactly two oppositely oriented triangles")

    for v in ids:
        tris = complex.vertex_triangles.get(v)
        if not tris:
            problems.append(f"vertex {v} lies in no triangle")
            continue
        link = {}
        for i in tris:
            tri = complex.triangles[i]
            j = tri.index(v)
            link[tri[(j + 1) % 3]] = tri[(j + 2) % 3]
        start = next(iter(link))
        cur, steps = start, 0
        while True:
            cur = link.get(cur)
            steps += 1
            if cur is None or cur == start or steps > len(link):
                break
        if cur != start or steps != len(link) or len(link) != len(tris):
            problems.append(f"link of vertex {v} is not a single cycle")
    if problems:
        return problems

    curve_vertices = [v for cycle in complex.curve_cycles for v in cycle]
    if len(set(curve_vertices)) != len(curve_vertices):
        problems.append("curve cycles are not disjoint simple cycles")
    for cycle in complex.curve_cycles:
        if len(cycle) < 3:
            problems.append(f"curve cycle {list(cycle)} is shorter than 3")
        for i, u in enumerate(cycle):
            w = cycle[(i + 1) % len(cycle)]
            if not complex.has_edge(u, w):
                problems.append(f"curve step {u}->{w} is not an edge")
    for v, c in complex.vertices:
        if c != (v in set(curve_vertices)):
            problems.append(f"vertex {v} on_curve flag disagrees with the curve cycles")
    if problems or not require_flag_like:
        return problems

    for e in complex.edges:
        if on[e[0]] and on[e[1]] and e not in complex.curve_edges:
            problems.append(f"edge {e} meets the curve in its two endpoints only (not flag-like)")
    for tri in complex.triangles:
        if all(on[v] for v in tri):
            problems.append(f"triangle {tri} meets the curve in its whole boundary (not flag-like)")
    if problems:
        return problems
    for tri in complex.triangles:
        try:
            classify_triangle(complex, tri)
        except OrientationContradiction as exc:
            problems.append(str(exc))
    return problems


def is_valid(complex: CurveSurfaceComplex) -> bool:
    return not validate(complex)


def euler_characteristic(complex: CurveSurfaceComplex) -> int:
    return len(complex.vertices) - len(complex.edges) + len(complex.triangles)


def curve_components(complex: CurveSurfaceComplex) -> int:
    return len(complex.curve_cycles)


def class_counts(complex: CurveSurfaceComplex) -> dict[str, int]:
    counts = Counter(classify_triangle(complex, t)[0].tag for t in complex.triangles)
    return {tag: counts.get(tag, 0) for tag in TAGS.values()}


def barycentric_subdivide(complex: CurveSurfaceComplex) -> CurveSurfaceComplex:
    """Barycentric subdivision; curve-edge midpoints join the curve, the rest rank last."""
    problems = validate(complex, require_flag_like=False)
    if problems:
        raise InvalidSurface("; ".join(problems))
    next_id = max(complex.vertex_ids) + 1
    mid: dict[Edge, int] = {}
    for e in complex.edges:
        mid[e] = next_id
        next_id += 1
    center: list[int] = []
    for _ in complex.triangles:
        center.append(next_id)
        next_id += 1

    vertices = list(complex.vertices)
    vertices += [(mid[e], e in complex.curve_edges) for e in complex.edges]
    vertices += [(c, False) for c in center]
    order = list(complex.off_curve_order)
    order += [mid[e] for e in complex.edges if e not in complex.curve_edges]
    order += center

    triangles = []
    for tri, b in zip(complex.triangles, center):
        for u, v in directed_edges(tri):
            m = mid[edge_key(u, v)]
            triangles.append((u, m, b))
            triangles.append((m, v, b))
    cycles = []
    for cycle in complex.curve_cycles:
        new = []
        for i, u in enumerate(cycle):
            new.append(u)
            new.append(mid[edge_key(u, cycle[(i + 1) % len(cycle)])])
        cycles.append(tuple(new))
    return CurveSurfaceComplex(tuple(vertices), tuple(order), tuple(triangles), tuple(cycles))


def canonical_form(complex: CurveSurfaceComplex) -> tuple:
    """Invariant of oriented isomorphism type, including the oriented curve.

    Tries every directed edge as a root, relabels vertices in breadth-first
    order through the rotation system, and keeps the smallest signature.
    ``off_curve_order`` is deliberately ignored.
    """
    # next vertex counterclockwise around u after v: triangle (u, v, w)
    rotation: dict[tuple[int, int], int] = {}
    for tri in complex.triangles:
        for i in range(3):
            rotation[(tri[i], tri[(i + 1) % 3])] = tri[(i + 2) % 3]
    best = None
    succ = complex.curve_successor
    for root in sorted(rotation):
        label = {root[0]: 0, root[1]: 1}
        queue = [root]
        head = 0
        while head < len(queue):
            u, v = queue[head]
            head += 1
            # walk around u starting from v
            w = v
            while True:
                w = rotation[(u, w)]
                if w == v:
                    break
                if w not in label:
                    label[w] = len(label)
                    queue.append((w, u))
            if len(label) == len(complex.vertices):
                break
        if len(label) != len(complex.vertices):
            continue  # disconnected; fall back to the union below
        tris = tuple(sorted(canonical_triangle([label[x] for x in t]) for t in complex.triangles))
        curve = tuple(sorted((label[u], label[v]) for u, v in succ.items()))
        sig = (tris, curve)
        if best is None or sig < best:
            best = sig
    if best is None:
        raise InvalidSurface("canonical_form needs a connected surface")
    return best


def isomorphic(x: CurveSurfaceComplex, y: CurveSurfaceComplex) -> bool:
    if (len(x.vertices), len(x.edges), len(x.triangles)) != (len(y.vertices), len(y.edges), len(y.triangles)):
        return False
    return canonical_form(x) == canonical_form(y)


# -- seeds -------------------------------------------------------------------

def build(
    triangles: Iterable[Sequence[int]],
    curve_cycles: Iterable[Sequence[int]] = (),
    order: Optional[Sequence[int]] = None,
) -> CurveSurfaceComplex:
    """Assemble a complex from triangles and curve cycles; off-curve order defaults to id order."""
    triangles = [tuple(t) for t in triangles]
    cycles = [tuple(c) for c in curve_cycles]
    on = {v for c in cycles for v in c}
    ids = sorted({v for t in triangles for v in t})
    vertices = tuple((v, v in on) for v in ids)
    if order is None:
        order = [v for v in ids if v not in on]
    return CurveSurfaceComplex(vertices, tuple(order), tuple(triangles), tuple(cycles))


TETRAHEDRON = [(0, 2, 1), (0, 1, 3), (1, 2, 3), (0, 3, 2)]


def octahedron_triangles() -> list[Triangle]:
    # poles 4 (north) and 5 (south), equator 0-1-2-3 counterclockwise seen from the north
    tris = []
    for i in range(4):
        j = (i + 1) % 4
        tris.append((4, i, j))
        tris.append((5, j, i))
    return tris


def bipyramid_triangles(n: int = 5) -> list[Triangle]:
    north, south = n, n + 1
    tris = []
    for i in range(n):
        j = (i + 1) % n
        tris.append((north, i, j))
        tris.append((south, j, i))
    return tris


def lattice_torus_triangles(n: int, step: int) -> list[Triangle]:
    """Quotient of the triangular lattice by the kernel of (x, y) -> x + step*y mod n."""
    tris = []
    for i in range(n):
        tris.append((i, (i + 1) % n, (i + step) % n))
        tris.append(((i + 1) % n, (i + 1 + step) % n, (i + step) % n))
    return tris


def _subdivided(triangles, cycles) -> CurveSurfaceComplex:
    return barycentric_subdivide(build(triangles, cycles))


SEEDS = {
    "plain_sphere": lambda: build(TETRAHEDRON),
    "plain_torus": lambda: build(lattice_torus_triangles(7, 3)),
    "sphere_equator": lambda: _subdivided(TETRAHEDRON, [(0, 1, 2)]),
    "torus_meridian": lambda: _subdivided(lattice_torus_triangles(7, 3), [tuple(range(7))]),
    # small extra fixtures (brute-force sized) and second triangulations
    "plain_octahedron": lambda: build(octahedron_triangles()),
    "octahedron_equator": lambda: build(octahedron_triangles(), [(0, 1, 2, 3)]),
    "bipyramid_equator": lambda: build(bipyramid_triangles(5), [(0, 1, 2, 3, 4)]),
    "plain_torus8": lambda: build(lattice_torus_triangles(8, 3)),
}


def seed_complex(name: str) -> CurveSurfaceComplex:
    try:
        factory = SEEDS[name]
    except KeyError:
        raise UnknownSeed(name) from None
    cx = factory()
    problems = validate(cx)
    if problems:
        raise InvalidSurface(f"seed {name}: {problems}")
    return cx
