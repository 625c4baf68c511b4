"""Flag-like Pachner moves and a seeded random walk through them.

Five move kinds:

``flip22``       replace a non-curve edge by the other diagonal of its quadrilateral
``subdivide13``  insert an off-curve vertex inside a triangle
``merge31``      remove an off-curve vertex of degree 3 (inverse of ``subdivide13``)
``split24``      insert a curve vertex in the middle of a curve edge
``merge42``      remove a curve vertex of degree 4 (inverse of ``split24``)
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .complex import (
    CurveSurfaceComplex,
    canonical_triangle,
    edge_key,
    validate,
)

GENERATOR = "random.Random (Mersenne Twister MT19937), draws via randrange"
GROWTH_MOVES = ("subdivide13", "split24")
INVERSE = {
    "flip22": "flip22",
    "subdivide13": "merge31",
    "merge31": "subdivide13",
    "split24": "merge42",
    "merge42": "split24",
}

Target = tuple[int, ...]


class MoveError(ValueError):
    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


class NotFlippable(MoveError):
    pass


class NotMergeable(MoveError):
    pass


class NotSplittable(MoveError):
    pass


class NotSubdividable(MoveError):
    pass


@dataclass(frozen=True)
class MoveRecord:
    kind: str
    target: Target
    created: tuple[tuple[int, ...], ...]
    deleted: tuple[tuple[int, ...], ...]
    inverse_target: Target

    @property
    def inverse_kind(self) -> str:
        return INVERSE[self.kind]

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "target": list(self.target),
            "created": [list(s) for s in self.created],
            "deleted": [list(s) for s in self.deleted],
            "inverse": [self.inverse_kind, list(self.inverse_target)],
        }


def _replace(
    cx: CurveSurfaceComplex,
    remove: Sequence[tuple[int, int, int]],
    add: Sequence[tuple[int, int, int]],
    vertices=None,
    order=None,
    cycles=None,
) -> CurveSurfaceComplex:
    gone = {canonical_triangle(t) for t in remove}
    triangles = [t for t in cx.triangles if t not in gone] + [canonical_triangle(t) for t in add]
    return CurveSurfaceComplex(
        cx.vertices if vertices is None else tuple(vertices),
        cx.off_curve_order if order is None else tuple(order),
        tuple(triangles),
        cx.curve_cycles if cycles is None else tuple(cycles),
    )


def _link_cycle(cx: CurveSurfaceComplex, w: int) -> list[int]:
    link = {}
    for i in cx.vertex_triangles[w]:
        tri = cx.triangles[i]
        j = tri.index(w)
        link[tri[(j + 1) % 3]] = tri[(j + 2) % 3]
    start = min(link)
    cycle = [start]
    while link[cycle[-1]] != start:
        cycle.append(link[cycle[-1]])
    return cycle


def _new_vertex_id(cx: CurveSurfaceComplex) -> int:
    return max(cx.vertex_ids) + 1


# -- 2-2 -----------------------------------------------------------------------

def _flip_geometry(cx: CurveSurfaceComplex, edge: Sequence[int]):
    u, v = edge_key(*edge)
    if (u, v) not in cx.edge_index:
        raise NotFlippable("no such edge", f"{(u, v)}")
    if (u, v) in cx.curve_edges:
        raise NotFlippable("curve edge", f"{(u, v)}")
    t1, t2 = (cx.triangles[i] for i in cx.edge_triangles[(u, v)])
    # orient so that (u, v, x) and (v, u, y) are counterclockwise
    if (u, v) not in ((t1[0], t1[1]), (t1[1], t1[2]), (t1[2], t1[0])):
        t1, t2 = t2, t1
    x = next(p for p in t1 if p not in (u, v))
    y = next(p for p in t2 if p not in (u, v))
    if x == y:
        raise NotFlippable("degenerate quad", f"{(u, v)}")
    if cx.has_edge(x, y):
        raise NotFlippable("diagonal exists", f"{edge_key(x, y)}")
    if cx.on_curve[x] and cx.on_curve[y]:
        raise NotFlippable("flag-likeness violation", f"new diagonal {edge_key(x, y)} would join two curve vertices")
    return u, v, x, y, t1, t2


def flip22(cx: CurveSurfaceComplex, edge: Sequence[int]) -> tuple[CurveSurfaceComplex, MoveRecord]:
    u, v, x, y, t1, t2 = _flip_geometry(cx, edge)
    new = [(u, y, x), (y, v, x)]
    record = MoveRecord(
        "flip22",
        (u, v),
        created=(edge_key(x, y),) + tuple(canonical_triangle(t) for t in new),
        deleted=((u, v), t1, t2),
        inverse_target=edge_key(x, y),
    )
    return _replace(cx, [t1, t2], new), record


# -- 1-3 -----------------------------------------------------------------------

def _find_triangle(cx: CurveSurfaceComplex, triangle: Sequence[int]) -> tuple[int, int, int]:
    tri = canonical_triangle(tuple(triangle))
    if tri not in set(cx.triangles):
        raise NotSubdividable("no such triangle", f"{tuple(triangle)}")
    return tri


def subdivide13(cx: CurveSurfaceComplex, triangle: Sequence[int]) -> tuple[CurveSurfaceComplex, MoveRecord]:
    x, y, z = _find_triangle(cx, triangle)
    w = _new_vertex_id(cx)
    new = [(x, y, w), (y, z, w), (z, x, w)]
    out = _replace(
        cx, [(x, y, z)], new, vertices=cx.vertices + ((w, False),), order=cx.off_curve_order + (w,)
    )
    record = MoveRecord(
        "subdivide13",
        (x, y, z),
        created=((w,),) + tuple(edge_key(p, w) for p in (x, y, z)) + tuple(canonical_triangle(t) for t in new),
        deleted=((x, y, z),),
        inverse_target=(w,),
    )
    return out, record


def _merge31_geometry(cx: CurveSurfaceComplex, w: int):
    if w not in cx.on_curve:
        raise NotMergeable("no such vertex", f"{w}")
    if cx.on_curve[w]:
        raise NotMergeable("on-curve vertex", f"{w}")
    if cx.degree(w) != 3:
        raise NotMergeable("wrong degree", f"vertex {w} has degree {cx.degree(w)}")
    p = _link_cycle(cx, w)
    if frozenset(p) in {frozenset(t) for t in cx.triangles}:
        raise NotMergeable("non-simplicial result", f"triangle {tuple(p)} already exists")
    if all(cx.on_curve[q] for q in p):
        raise NotMergeable("flag-likeness violation", f"triangle {tuple(p)} would lie on the curve")
    return p


def merge31(cx: CurveSurfaceComplex, vertex: Union[int, Sequence[int]]) -> tuple[CurveSurfaceComplex, MoveRecord]:
    w = vertex if isinstance(vertex, int) else vertex[0]
    p = _merge31_geometry(cx, w)
    old = [cx.triangles[i] for i in cx.vertex_triangles[w]]
    new = tuple(p)
    out = _replace(
        cx,
        old,
        [new],
        vertices=[vc for vc in cx.vertices if vc[0] != w],
        order=[q for q in cx.off_curve_order if q != w],
    )
    record = MoveRecord(
        "merge31",
        (w,),
        created=(canonical_triangle(new),),
        deleted=((w,),) + tuple(edge_key(q, w) for q in p) + tuple(old),
        inverse_target=canonical_triangle(new),
    )
    return out, record


# -- 2-4 -----------------------------------------------------------------------

def split24(cx: CurveSurfaceComplex, edge: Sequence[int]) -> tuple[CurveSurfaceComplex, MoveRecord]:
    key = edge_key(*edge)
    if key not in cx.curve_edges:
        raise NotSplittable("not a curve edge", f"{key}")
    u, v = cx.curve_edges[key]
    t1, t2 = (cx.triangles[i] for i in cx.edge_triangles[key])
    if (u, v) not in ((t1[0], t1[1]), (t1[1], t1[2]), (t1[2], t1[0])):
        t1, t2 = t2, t1
    x = next(p for p in t1 if p not in (u, v))
    y = next(p for p in t2 if p not in (u, v))
    w = _new_vertex_id(cx)
    new = [(u, w, x), (w, v, x), (v, w, y), (w, u, y)]
    cycles = []
    for cycle in cx.curve_cycles:
        if u in cycle:
            i = cycle.index(u)
            cycle = cycle[: i + 1] + (w,) + cycle[i + 1 :]
        cycles.append(cycle)
    out = _replace(cx, [t1, t2], new, vertices=cx.vertices + ((w, True),), cycles=cycles)
    record = MoveRecord(
        "split24",
        (u, v),
        created=((w,),) + tuple(edge_key(w, p) for p in (u, v, x, y)) + tuple(canonical_triangle(t) for t in new),
        deleted=(key, t1, t2),
        inverse_target=(w,),
    )
    return out, record


def _merge42_geometry(cx: CurveSurfaceComplex, w: int):
    if w not in cx.on_curve:
        raise NotMergeable("no such vertex", f"{w}")
    if not cx.on_curve[w]:
        raise NotMergeable("off-curve vertex", f"{w}")
    if cx.degree(w) != 4:
        raise NotMergeable("wrong degree", f"vertex {w} has degree {cx.degree(w)}")
    v = cx.curve_successor[w]
    u = next(p for p, q in cx.curve_successor.items() if q == w)
    if cx.has_edge(u, v):
        raise NotMergeable("duplicate edge", f"{edge_key(u, v)} already exists")
    cycle = _link_cycle(cx, w)
    i = cycle.index(u)
    cycle = cycle[i:] + cycle[:i]
    if cycle[2] != v:
        raise NotMergeable("non-simplicial result", f"curve neighbours of {w} are adjacent in its link")
    return u, v, cycle


def merge42(cx: CurveSurfaceComplex, vertex: Union[int, Sequence[int]]) -> tuple[CurveSurfaceComplex, MoveRecord]:
    w = vertex if isinstance(vertex, int) else vertex[0]
    u, v, p = _merge42_geometry(cx, w)
    old = [cx.triangles[i] for i in cx.vertex_triangles[w]]
    new = [(p[0], p[1], p[2]), (p[2], p[3], p[0])]
    cycles = [tuple(q for q in cycle if q != w) for cycle in cx.curve_cycles]
    out = _replace(cx, old, new, vertices=[vc for vc in cx.vertices if vc[0] != w], cycles=cycles)
    record = MoveRecord(
        "merge42",
        (w,),
        created=(edge_key(u, v),) + tuple(canonical_triangle(t) for t in new),
        deleted=((w,),) + tuple(edge_key(w, q) for q in p) + tuple(old),
        inverse_target=(u, v),
    )
    return out, record


MOVES = {
    "flip22": flip22,
    "subdivide13": subdivide13,
    "merge31": merge31,
    "split24": split24,
    "merge42": merge42,
}


def apply_move(cx: CurveSurfaceComplex, kind: str, target: Sequence[int]) -> tuple[CurveSurfaceComplex, MoveRecord]:
    if kind not in MOVES:
        raise ValueError(f"unknown move kind {kind!r}")
    target = tuple(target)
    if kind in ("merge31", "merge42"):
        return MOVES[kind](cx, target[0])
    return MOVES[kind](cx, target)


def invert(cx: CurveSurfaceComplex, record: MoveRecord) -> tuple[CurveSurfaceComplex, MoveRecord]:
    """Apply the inverse of ``record`` to the complex it produced."""
    return apply_move(cx, record.inverse_kind, record.inverse_target)


def _ok(check, *args) -> bool:
    try:
        check(*args)
    except MoveError:
        return False
    return True


def candidate_targets(cx: CurveSurfaceComplex) -> list[tuple[str, Target]]:
    """Every (kind, target) pair a move could be attempted on."""
    out: list[tuple[str, Target]] = [("flip22", e) for e in cx.edges]
    out += [("subdivide13", t) for t in cx.triangles]
    out += [("merge31", (v,)) for v in cx.vertex_ids if not cx.on_curve[v]]
    out += [("split24", e) for e in sorted(cx.curve_edges)]
    out += [("merge42", (v,)) for v in cx.vertex_ids if cx.on_curve[v]]
    return out


def applicable_moves(cx: CurveSurfaceComplex, max_edges: Optional[int] = None) -> list[tuple[str, Target]]:
    """Applicable moves in a fixed order; growth moves are dropped if they would push E past ``max_edges``."""
    grow = max_edges is None or len(cx.edges) + 3 <= max_edges
    out = []
    for kind, target in candidate_targets(cx):
        if kind == "flip22":
            ok = _ok(_flip_geometry, cx, target)
        elif kind == "merge31":
            ok = _ok(_merge31_geometry, cx, target[0])
        elif kind == "merge42":
            ok = _ok(_merge42_geometry, cx, target[0])
        else:
            ok = grow
        if ok:
            out.append((kind, target))
    return out


def random_walk(
    cx: CurveSurfaceComplex,
    seed: int,
    steps: int,
    max_edges: Optional[int] = None,
    check: bool = True,
    callback=None,
) -> tuple[CurveSurfaceComplex, list[MoveRecord]]:
    """Apply ``steps`` moves drawn uniformly from the applicable list at each step.

    The draw sequence is fully determined by ``seed`` (``random.Random``).
    ``max_edges`` defaults to the starting edge count plus 60.  ``callback``
    is called as ``callback(step, complex, record)`` after every move.
    """
    rng = random.Random(seed)
    if max_edges is None:
        max_edges = len(cx.edges) + 60
    records: list[MoveRecord] = []
    for step in range(1, steps + 1):
        choices = applicable_moves(cx, max_edges)
        kind, target = choices[rng.randrange(len(choices))]
        cx, record = apply_move(cx, kind, target)
        if check:
            problems = validate(cx)
            if problems:
                raise AssertionError(f"move {record} produced an invalid complex: {problems}")
        records.append(record)
        if callback is not None:
            callback(step, cx, record)
    return cx, records
