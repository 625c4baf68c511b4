"""Evaluation of the state-sum: brute-force enumeration and exact tensor contraction."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple, Optional

import numpy as np

from .complex import (
    KIND_SPACE,
    CurveSurfaceComplex,
    Edge,
    classify_triangle,
    class_counts,
    validate,
)
from .frobenius_data import DataError, SystemData

DEFAULT_BRUTE_FORCE_CAP = 10**8
DEFAULT_MEMORY_BUDGET = 2**22  # entries per intermediate; a Python dict entry costs ~150 bytes


class TooLarge(RuntimeError):
    pass


class OutOfMemoryBudget(RuntimeError):
    pass


class InvalidSystem(DataError):
    pass


class InvalidComplex(ValueError):
    pass


class TriangleTensor(NamedTuple):
    triangle: int
    tag: str
    edges: tuple[Edge, Edge, Edge]
    table: np.ndarray


@dataclass(frozen=True)
class InvariantValue:
    unnormalized: Fraction
    n_off_vertices: int
    n_on_vertices: int
    normalized: Fraction


def triangle_tensors(system: SystemData, complex: CurveSurfaceComplex, barred_order: str = "path") -> list[TriangleTensor]:
    out = []
    for i, tri in enumerate(complex.triangles):
        cls, edges = classify_triangle(complex, tri, barred_order)
        out.append(TriangleTensor(i, cls.tag, edges, system.tensor(cls.tag)))
    return out


def edge_dims(system: SystemData, complex: CurveSurfaceComplex) -> dict[Edge, int]:
    return {e: system.space_dim(KIND_SPACE[k]) for e, k in complex.edge_kinds.items()}


def local_weight(
    system: SystemData,
    complex: CurveSurfaceComplex,
    triangle,
    coloring: Mapping[Edge, int],
    barred_order: str = "path",
) -> Fraction:
    """Coefficient of the triangle's class at its argument-ordered edge labels."""
    cls, edges = classify_triangle(complex, triangle, barred_order)
    return system.tensor(cls.tag)[tuple(coloring[e] for e in edges)]


def coloring_count(system: SystemData, complex: CurveSurfaceComplex) -> int:
    return math.prod(edge_dims(system, complex).values())


def evaluate_bruteforce(
    system: SystemData,
    complex: CurveSurfaceComplex,
    cap: Optional[int] = DEFAULT_BRUTE_FORCE_CAP,
    barred_order: str = "path",
) -> Fraction:
    """Sum over every kind-respecting colouring of the product of local weights.

    Colourings are enumerated depth-first, edge by edge; a triangle's weight
    is multiplied in as soon as its last edge is coloured, and a branch whose
    partial product is already zero contributes nothing and is skipped.
    """
    total = coloring_count(system, complex)
    if cap is not None and total > cap:
        raise TooLarge(f"{total} colourings exceed the brute-force cap {cap}")
    tensors = triangle_tensors(system, complex, barred_order)
    dims = edge_dims(system, complex)
    # colour edges in order of first appearance among the triangles
    order: list[Edge] = []
    position: dict[Edge, int] = {}
    for t in tensors:
        for e in t.edges:
            if e not in position:
                position[e] = len(order)
                order.append(e)
    closing: list[list[TriangleTensor]] = [[] for _ in order]
    for t in tensors:
        closing[max(position[e] for e in t.edges)].append(t)
    closing_slots = [[(t.table, tuple(position[e] for e in t.edges)) for t in group] for group in closing]
    ranges = [range(dims[e]) for e in order]
    colour = [0] * len(order)
    n = len(order)

    def walk(depth: int, weight: Fraction) -> Fraction:
        if depth == n:
            return weight
        acc = Fraction(0)
        for value in ranges[depth]:
            colour[depth] = value
            w = weight
            for table, slots in closing_slots[depth]:
                w = w * table[colour[slots[0]], colour[slots[1]], colour[slots[2]]]
                if not w:
                    break
            if w:
                acc += walk(depth + 1, w)
        return acc

    if n == 0:
        return Fraction(1)
    return Fraction(walk(0, Fraction(1)))


# --- exact sparse tensor network ---------------------------------------------

class _Node:
    __slots__ = ("ident", "indices", "data")

    def __init__(self, ident: int, indices: tuple[Edge, ...], data: dict):
        self.ident = ident
        self.indices = indices
        self.data = data


def _as_exact(value):
    # integral entries are kept as int for speed; the final result is a Fraction
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def _leaf(t: TriangleTensor) -> _Node:
    data = {}
    table = t.table
    for idx in np.ndindex(table.shape):
        v = table[idx]
        if v:
            data[idx] = _as_exact(v)
    indices = list(t.edges)
    # an index that repeats inside one triangle cannot occur in a simplicial complex
    assert len(set(indices)) == 3
    return _Node(t.triangle, tuple(indices), data)


def _contract_pair(x: _Node, y: _Node, budget: Optional[int]) -> _Node:
    shared = [e for e in x.indices if e in y.indices]
    x_shared = [x.indices.index(e) for e in shared]
    y_shared = [y.indices.index(e) for e in shared]
    x_keep = [i for i, e in enumerate(x.indices) if e not in shared]
    y_keep = [i for i, e in enumerate(y.indices) if e not in shared]
    groups: dict[tuple, list] = {}
    for key, value in y.data.items():
        groups.setdefault(tuple(key[i] for i in y_shared), []).append((tuple(key[i] for i in y_keep), value))
    out: dict[tuple, object] = {}
    for key, value in x.data.items():
        partners = groups.get(tuple(key[i] for i in x_shared))
        if not partners:
            continue
        head = tuple(key[i] for i in x_keep)
        for tail, other in partners:
            k = head + tail
            out[k] = out.get(k, 0) + value * other
        if budget is not None and len(out) > budget:
            raise OutOfMemoryBudget(f"intermediate tensor exceeds {budget} entries")
    out = {k: v for k, v in out.items() if v}
    indices = tuple(x.indices[i] for i in x_keep) + tuple(y.indices[i] for i in y_keep)
    return _Node(min(x.ident, y.ident), indices, out)


def _dense_size(indices, dims) -> int:
    return math.prod(dims[e] for e in indices)


def contract_network(
    tensors: list[TriangleTensor],
    dims: Mapping[Edge, int],
    order: str = "greedy",
    budget: Optional[int] = DEFAULT_MEMORY_BUDGET,
) -> Fraction:
    """Contract a closed network (every edge index shared by two tensors).

    ``order="greedy"`` repeatedly contracts the pair of index-sharing nodes
    whose result has the fewest dense entries, ties broken by the lowest
    triangle ids; ``order="sequential"`` folds nodes left to right.
    """
    nodes = {t.triangle: _leaf(t) for t in tensors}
    if not nodes:
        return Fraction(1)
    if order == "sequential":
        items = [nodes[k] for k in sorted(nodes)]
        acc = items[0]
        for node in items[1:]:
            acc = _contract_pair(acc, node, budget)
        return _final(acc)
    if order != "greedy":
        raise ValueError(f"unknown contraction order {order!r}")

    def cost(x: _Node, y: _Node) -> int:
        return _dense_size(set(x.indices) ^ set(y.indices), dims)

    holders: dict[Edge, set[int]] = {}
    for ident, node in nodes.items():
        for e in node.indices:
            holders.setdefault(e, set()).add(ident)
    while len(nodes) > 1:
        best = None
        for ident, node in nodes.items():
            for e in node.indices:
                for other in holders[e]:
                    if other <= ident:
                        continue
                    key = (cost(node, nodes[other]), ident, other)
                    if best is None or key < best:
                        best = key
        if best is None:
            # disconnected pieces: take the outer product of the two lowest
            a, b = sorted(nodes)[:2]
        else:
            _, a, b = best
        x, y = nodes.pop(a), nodes.pop(b)
        merged = _contract_pair(x, y, budget)
        for e in x.indices:
            holders[e].discard(a)
        for e in y.indices:
            holders[e].discard(b)
        for e in merged.indices:
            holders[e].add(merged.ident)
        nodes[merged.ident] = merged
    (last,) = nodes.values()
    return _final(last)


def _final(node: _Node) -> Fraction:
    if node.indices:
        raise ValueError(f"network is not closed; dangling indices {node.indices}")
    return Fraction(node.data.get((), 0))


def evaluate_contraction(
    system: SystemData,
    complex: CurveSurfaceComplex,
    order: str = "greedy",
    budget: Optional[int] = DEFAULT_MEMORY_BUDGET,
    barred_order: str = "path",
) -> Fraction:
    return contract_network(
        triangle_tensors(system, complex, barred_order), edge_dims(system, complex), order=order, budget=budget
    )


def normalize(system: SystemData, complex: CurveSurfaceComplex, unnormalized: Fraction) -> InvariantValue:
    n_off, n_on = complex.n_off_vertices, complex.n_on_vertices
    factor = system.rho ** (-n_off)
    if n_on:
        factor *= system.lam ** (-n_on)
    return InvariantValue(Fraction(unnormalized), n_off, n_on, factor * unnormalized)


def normalized_invariant(
    system: SystemData,
    complex: CurveSurfaceComplex,
    method: str = "auto",
    barred_order: str = "path",
    check: bool = True,
    cap: Optional[int] = DEFAULT_BRUTE_FORCE_CAP,
    budget: Optional[int] = DEFAULT_MEMORY_BUDGET,
) -> InvariantValue:
    """rho^-(#off-curve vertices) * lambda^-(#on-curve vertices) * Z.

    ``method`` is ``"contract"``, ``"brute"`` or ``"auto"`` (contraction,
    falling back to brute force if the memory budget is exceeded).
    """
    if check:
        if not system.is_valid:
            failed = [r.equation_id for r in system.checks if not r.passed]
            raise InvalidSystem(f"system fails checks {failed}")
        problems = validate(complex)
        if problems:
            raise InvalidComplex("; ".join(problems))
    if method == "brute":
        z = evaluate_bruteforce(system, complex, cap=cap, barred_order=barred_order)
    elif method == "contract":
        z = evaluate_contraction(system, complex, budget=budget, barred_order=barred_order)
    elif method == "auto":
        try:
            z = evaluate_contraction(system, complex, budget=budget, barred_order=barred_order)
        except OutOfMemoryBudget:
            z = evaluate_bruteforce(system, complex, cap=cap, barred_order=barred_order)
    else:
        raise ValueError(f"unknown method {method!r}")
    return normalize(system, complex, z)


def describe(value: InvariantValue, complex: CurveSurfaceComplex) -> dict:
    return {
        "unnormalized": str(value.unnormalized),
        "normalized": str(value.normalized),
        "n_off_vertices": value.n_off_vertices,
        "n_on_vertices": value.n_on_vertices,
        "class_counts": class_counts(complex),
    }
