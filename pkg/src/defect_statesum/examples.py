"""Builders for the standard families of initial data.

* :func:`gset_system` -- group algebras acting on a biset by translation,
* :func:`twisted_system` -- the same twisted by rational-valued cocycle tables,
* :func:`matrix_system` -- matrix algebras acting on rectangular matrices,
* :func:`trivial_defect_system` -- any algebra/module pair with C the ground field.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .frobenius_data import (
    AlgebraData,
    DataError,
    DefectData,
    ModuleData,
    SystemData,
    as_scalar,
    check_system,
    counit_from_comult,
    dense,
    unit_from_mult,
)


class InvalidGroupTable(DataError):
    pass


class InvalidActionTable(DataError):
    pass


class ZeroCocycleValue(DataError):
    pass


class SizeOutOfRange(DataError):
    pass


class InvalidModule(DataError):
    pass


@dataclass(frozen=True)
class GroupTable:
    labels: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "table", tuple(tuple(row) for row in self.table))
        n = len(self.labels)
        if n == 0:
            raise InvalidGroupTable("empty group")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise InvalidGroupTable("multiplication table is not square")
        if any(not (0 <= x < n) for row in self.table for x in row):
            raise InvalidGroupTable("table entry out of range")
        e = self.identity
        if any(self.table[e][g] != g or self.table[g][e] != g for g in range(n)):
            raise InvalidGroupTable(f"{self.labels[e]} is not an identity")
        for g, h, k in itertools.product(range(n), repeat=3):
            if self.table[self.table[g][h]][k] != self.table[g][self.table[h][k]]:
                raise InvalidGroupTable(f"not associative at {self.labels[g]}, {self.labels[h]}, {self.labels[k]}")
        for g in range(n):
            if e not in self.table[g]:
                raise InvalidGroupTable(f"{self.labels[g]} has no inverse")

    @property
    def order(self) -> int:
        return len(self.labels)

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inverse(self, g: int) -> int:
        return self.table[g].index(self.identity)

    @classmethod
    def from_function(cls, labels: Sequence[str], elements: Sequence, op: Callable, identity) -> "GroupTable":
        index = {x: i for i, x in enumerate(elements)}
        table = [[index[op(x, y)] for y in elements] for x in elements]
        return cls(tuple(labels), tuple(map(tuple, table)), index[identity])


def cyclic_group(n: int) -> GroupTable:
    return GroupTable.from_function([f"g{i}" if i else "e" for i in range(n)], range(n), lambda x, y: (x + y) % n, 0)


def trivial_group() -> GroupTable:
    return cyclic_group(1)


def symmetric_group_3() -> GroupTable:
    # permutations of (0, 1, 2) as tuples; (p*q)(i) = p(q(i))
    perms = sorted(itertools.permutations(range(3)))
    labels = ["".join(map(str, p)) for p in perms]
    return GroupTable.from_function(labels, perms, lambda p, q: tuple(p[q[i]] for i in range(3)), (0, 1, 2))


NAMED_GROUPS: dict[str, Callable[[], GroupTable]] = {
    "trivial": trivial_group,
    "z2": lambda: cyclic_group(2),
    "z3": lambda: cyclic_group(3),
    "z4": lambda: cyclic_group(4),
    "s3": symmetric_group_3,
}


@dataclass(frozen=True)
class ActionTable:
    """A set X with a right G-action ``right[x][g]`` and left H-action ``left[h][x]``."""

    labels: tuple[str, ...]
    right: tuple[tuple[int, ...], ...]
    left: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "right", tuple(tuple(row) for row in self.right))
        object.__setattr__(self, "left", tuple(tuple(row) for row in self.left))

    def validate(self, G: GroupTable, H: GroupTable) -> None:
        n = len(self.labels)
        if len(self.right) != n or any(len(row) != G.order for row in self.right):
            raise InvalidActionTable("right action table has the wrong shape")
        if len(self.left) != H.order or any(len(row) != n for row in self.left):
            raise InvalidActionTable("left action table has the wrong shape")
        if any(not (0 <= y < n) for row in self.right + self.left for y in row):
            raise InvalidActionTable("action table entry out of range")
        for x in range(n):
            if self.right[x][G.identity] != x or self.left[H.identity][x] != x:
                raise InvalidActionTable(f"identity does not act trivially on {self.labels[x]}")
            for g, h in itertools.product(range(G.order), repeat=2):
                if self.right[self.right[x][g]][h] != self.right[x][G.mul(g, h)]:
                    raise InvalidActionTable("right action is not compatible with the group law")
            for g, h in itertools.product(range(H.order), repeat=2):
                if self.left[g][self.left[h][x]] != self.left[H.mul(g, h)][x]:
                    raise InvalidActionTable("left action is not compatible with the group law")
            for h, g in itertools.product(range(H.order), range(G.order)):
                if self.left[h][self.right[x][g]] != self.right[self.left[h][x]][g]:
                    raise InvalidActionTable("left and right actions do not commute")


def regular_biset(G: GroupTable, H: GroupTable, embedding: Optional[Sequence[int]] = None) -> ActionTable:
    """X = G with G acting by right and H by left multiplication through ``embedding``."""
    if embedding is None:
        if H.order != 1:
            raise InvalidActionTable("an embedding of H into G is required")
        embedding = [G.identity]
    right = [[G.mul(x, g) for g in range(G.order)] for x in range(G.order)]
    left = [[G.mul(embedding[h], x) for x in range(G.order)] for h in range(H.order)]
    return ActionTable(G.labels, right, left)


def group_algebra(G: GroupTable) -> AlgebraData:
    n = G.order
    mult = dense((n, n, n), [(s, t, G.mul(s, t), 1) for s in range(n) for t in range(n)])
    comult = dense((n, n, n), [(G.mul(y, z), y, z, 1) for y in range(n) for z in range(n)])
    unit = dense((n,), [(G.identity, 1)])
    return AlgebraData(G.labels, mult, comult, unit, unit)


def gset_system(G: GroupTable, H: GroupTable, X: ActionTable, name: str = "") -> SystemData:
    X.validate(G, H)
    nb = len(X.labels)
    act = dense((nb, G.order, nb), [(x, g, X.right[x][g], 1) for x in range(nb) for g in range(G.order)])
    coact = dense((nb, nb, G.order), [(X.right[y][g], y, g, 1) for y in range(nb) for g in range(G.order)])
    c = dense((H.order, nb, nb), [(h, x, X.left[h][x], 1) for h in range(H.order) for x in range(nb)])
    cbar = dense((nb, H.order, nb), [(X.left[h][y], h, y, 1) for h in range(H.order) for y in range(nb)])
    module = ModuleData(X.labels, act, coact)
    defect = DefectData(H.labels, c, cbar, algebra=group_algebra(H))
    return SystemData(group_algebra(G), module, defect, name=name)


def _cocycle_value(table, key) -> Fraction:
    if isinstance(table, Mapping):
        value = table.get(key, 1)
    else:
        value = table[key[0]][key[1]]
    value = as_scalar(value)
    if value == 0:
        raise ZeroCocycleValue(f"cocycle vanishes at {key}")
    return value


def twisted_system(G: GroupTable, H: GroupTable, X: ActionTable, alpha, beta, gamma, name: str = "") -> SystemData:
    """Twist the biset data by cocycle tables.

    Each table is either a nested list indexed by element indices or a mapping
    from index pairs to values (missing pairs default to 1).  Whether the
    tables actually form a cocycle is left to :func:`check_system`.  C is
    given no algebra structure here; its loop constant is supplied as |H|.
    """
    X.validate(G, H)
    nb = len(X.labels)
    al = {(g, f): _cocycle_value(alpha, (g, f)) for g in range(G.order) for f in range(G.order)}
    be = {(x, g): _cocycle_value(beta, (x, g)) for x in range(nb) for g in range(G.order)}
    ga = {(h, x): _cocycle_value(gamma, (h, x)) for h in range(H.order) for x in range(nb)}
    n = G.order
    mult = dense((n, n, n), [(g, f, G.mul(g, f), al[g, f]) for g in range(n) for f in range(n)])
    comult = dense((n, n, n), [(G.mul(l, m), l, m, 1 / al[l, m]) for l in range(n) for m in range(n)])
    algebra = AlgebraData(G.labels, mult, comult, unit_from_mult(mult), counit_from_comult(comult))
    act = dense((nb, n, nb), [(x, g, X.right[x][g], be[x, g]) for x in range(nb) for g in range(n)])
    coact = dense((nb, nb, n), [(X.right[y][g], y, g, 1 / be[y, g]) for y in range(nb) for g in range(n)])
    c = dense((H.order, nb, nb), [(h, x, X.left[h][x], ga[h, x]) for h in range(H.order) for x in range(nb)])
    cbar = dense((nb, H.order, nb), [(X.left[h][y], h, y, 1 / ga[h, y]) for h in range(H.order) for y in range(nb)])
    defect = DefectData(H.labels, c, cbar, loop_constant=Fraction(H.order))
    return SystemData(algebra, ModuleData(X.labels, act, coact), defect, name=name)


MAX_MATRIX_SIZE = 6


def _elementary_labels(rows: int, cols: int) -> list[str]:
    return [f"E{i + 1}{j + 1}" for i in range(rows) for j in range(cols)]


def matrix_system(n: int, m: int, name: str = "") -> SystemData:
    """A = Mat(n), B = Mat(m x n), C = Mat(m); products and the E_ij -> sum_k E_ik (x) E_kj coproducts."""
    if not (1 <= n <= MAX_MATRIX_SIZE and 1 <= m <= MAX_MATRIX_SIZE):
        raise SizeOutOfRange(f"matrix sizes must lie in 1..{MAX_MATRIX_SIZE}, got n={n}, m={m}")

    def idx(i, j, cols):
        return i * cols + j

    rng_n, rng_m = range(n), range(m)
    da, db, dc = n * n, m * n, m * m
    # E_ij E_jl = E_il in every case
    a = dense((da, da, da), [(idx(i, j, n), idx(j, l, n), idx(i, l, n), 1) for i in rng_n for j in rng_n for l in rng_n])
    abar = dense((da, da, da), [(idx(i, j, n), idx(i, k, n), idx(k, j, n), 1) for i in rng_n for j in rng_n for k in rng_n])
    b = dense((db, da, db), [(idx(i, j, n), idx(j, l, n), idx(i, l, n), 1) for i in rng_m for j in rng_n for l in rng_n])
    bbar = dense((db, db, da), [(idx(i, j, n), idx(i, k, n), idx(k, j, n), 1) for i in rng_m for j in rng_n for k in rng_n])
    c = dense((dc, db, db), [(idx(i, j, m), idx(j, l, n), idx(i, l, n), 1) for i in rng_m for j in rng_m for l in rng_n])
    cbar = dense((db, dc, db), [(idx(i, j, n), idx(i, k, m), idx(k, j, n), 1) for i in rng_m for j in rng_n for k in rng_m])
    c_mult = dense((dc, dc, dc), [(idx(i, j, m), idx(j, l, m), idx(i, l, m), 1) for i in rng_m for j in rng_m for l in rng_m])
    c_comult = dense((dc, dc, dc), [(idx(i, j, m), idx(i, k, m), idx(k, j, m), 1) for i in rng_m for j in rng_m for k in rng_m])

    algebra = AlgebraData(_elementary_labels(n, n), a, abar, unit_from_mult(a), counit_from_comult(abar))
    c_labels = _elementary_labels(m, m)
    c_alg = AlgebraData(c_labels, c_mult, c_comult, unit_from_mult(c_mult), counit_from_comult(c_comult))
    module = ModuleData(_elementary_labels(m, n), b, bbar)
    return SystemData(algebra, module, DefectData(c_labels, c, cbar, algebra=c_alg), name=name)


def ground_field_algebra() -> AlgebraData:
    one = dense((1, 1, 1), [(0, 0, 0, 1)])
    vec = dense((1,), [(0, 1)])
    return AlgebraData(("1",), one, one, vec, vec)


def regular_module(algebra: AlgebraData) -> ModuleData:
    return ModuleData(algebra.basis, algebra.mult, algebra.comult)


_NON_DEFECT_EQUATIONS = set(range(2, 14)) | set(range(18, 32))


def trivial_defect_system(algebra: AlgebraData, module: ModuleData, name: str = "") -> SystemData:
    """Pair (A, B) with C = K acting by scalar multiplication and its inverse."""
    nb = module.dim
    c = dense((1, nb, nb), [(0, q, q, 1) for q in range(nb)])
    cbar = dense((nb, 1, nb), [(q, 0, q, 1) for q in range(nb)])
    system = SystemData(algebra, module, DefectData(("1",), c, cbar, algebra=ground_field_algebra()), name=name)
    failed = [
        r.equation_id
        for r in check_system(system)
        if not r.passed and (r.equation_id in _NON_DEFECT_EQUATIONS or isinstance(r.equation_id, str))
    ]
    if failed:
        raise InvalidModule(f"algebra/module pair fails checks {failed}")
    return system


def s3_biset_system() -> SystemData:
    """G = S3 acting on X = S3 on the right; H = Z/2 on the left through a transposition."""
    G, H = symmetric_group_3(), cyclic_group(2)
    transposition = G.labels.index("102")
    return gset_system(G, H, regular_biset(G, H, [G.identity, transposition]), name="example1_s3")


def shipped_systems() -> dict[str, Callable[[], SystemData]]:
    """The reference systems used by the acceptance suite and shipped as files."""
    z2 = cyclic_group(2)
    return {
        "example1_z2": lambda: gset_system(z2, z2, regular_biset(z2, z2, [0, 1]), name="example1_z2"),
        "example1_s3": s3_biset_system,
        "example3_1_1": lambda: matrix_system(1, 1, name="example3_1_1"),
        "example3_2_2": lambda: matrix_system(2, 2, name="example3_2_2"),
        "example3_2_3": lambda: matrix_system(2, 3, name="example3_2_3"),
        "example4_z2": lambda: trivial_defect_system(
            group_algebra(z2), regular_module(group_algebra(z2)), name="example4_z2"
        ),
    }


def closed_surface_system(algebra: AlgebraData, name: str = "") -> SystemData:
    """Example-4 packaging of an algebra alone, for surfaces without a curve."""
    return trivial_defect_system(algebra, regular_module(algebra), name=name)


def perturbed(system: SystemData, tag: str, index: tuple[int, ...], delta=1) -> SystemData:
    """Copy of ``system`` with one structure constant shifted by ``delta``."""
    arr = np.array(system.tensor(tag), dtype=object)
    arr[index] = arr[index] + as_scalar(delta)
    algebra, module, defect = system.algebra, system.module, system.defect
    if tag in ("a", "abar"):
        fields = {"mult": arr} if tag == "a" else {"comult": arr}
        algebra = AlgebraData(
            algebra.basis,
            fields.get("mult", algebra.mult),
            fields.get("comult", algebra.comult),
            algebra.unit,
            algebra.counit,
        )
    elif tag in ("b", "bbar"):
        module = ModuleData(module.basis, arr if tag == "b" else module.act, arr if tag == "bbar" else module.coact)
    else:
        defect = DefectData(
            defect.basis,
            arr if tag == "c" else defect.act,
            arr if tag == "cbar" else defect.coact,
            algebra=defect.algebra,
            loop_constant=defect.loop_constant,
        )
    return SystemData(algebra, module, defect, name=f"{system.name}+{tag}{list(index)}")
