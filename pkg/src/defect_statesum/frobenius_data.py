"""Algebraic initial data for the defect state-sum and its equational checks.

Structure constants are dense ``numpy`` object arrays of :class:`fractions.Fraction`.
Index conventions (subscripts first, then superscripts):

=========  ===========  ======================================
tensor     shape        meaning
=========  ===========  ======================================
``a``      (A, A, A)    ``a[s, t, u]``: coefficient of u in s*t
``abar``   (A, A, A)    ``abar[q, r, s]``: coefficient of r(x)s in delta(q)
``b``      (B, A, B)    ``b[q, u, r]``: coefficient of r in q.u
``bbar``   (B, B, A)    ``bbar[t, r, s]``: coefficient of r(x)s in delta_B(t)
``c``      (C, B, B)    ``c[r, q, u]``: coefficient of u in r.q
``cbar``   (B, C, B)    ``cbar[q, r, u]``: coefficient of r(x)u in d(q)
=========  ===========  ======================================
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

Scalar = Fraction
ScalarLike = Union[int, Fraction, str]


class DataError(ValueError):
    pass


class DimensionMismatch(DataError):
    pass


class UnknownEquationId(KeyError):
    pass


class NotProjectivelySpecial(ArithmeticError):
    pass


class ZeroLoopConstant(NotProjectivelySpecial):
    pass


class MissingLoopConstant(DataError):
    pass


_FRACTION_RE = re.compile(r"^\s*[+-]?\d+\s*(/\s*\d+\s*)?$")


def as_scalar(value: ScalarLike) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to an exact Fraction.

    Floats and decimal strings are rejected so that no rounding can sneak in.
    """
    if isinstance(value, bool):
        raise DataError(f"not a scalar: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        if not _FRACTION_RE.match(value):
            raise DataError(f"scalar must be an integer or 'p/q' fraction: {value!r}")
        result = Fraction(value.replace(" ", ""))
        return result
    raise DataError(f"not an exact scalar: {value!r}")


def zeros(shape: Sequence[int]) -> np.ndarray:
    arr = np.empty(tuple(shape), dtype=object)
    arr.fill(Fraction(0))
    return arr


def dense(shape: Sequence[int], entries) -> np.ndarray:
    """Build a read-only dense tensor from ``(i, j, ..., value)`` entries."""
    arr = zeros(shape)
    for entry in entries:
        *idx, value = entry
        if len(idx) != len(shape):
            raise DimensionMismatch(f"entry {entry!r} does not match rank {len(shape)}")
        for i, n in zip(idx, shape):
            if not (isinstance(i, int) and 0 <= i < n):
                raise DimensionMismatch(f"entry {entry!r} out of range for shape {tuple(shape)}")
        arr[tuple(idx)] += as_scalar(value)
    return freeze(arr)


def freeze(arr) -> np.ndarray:
    out = np.array(arr, dtype=object)
    for idx in np.ndindex(out.shape):
        out[idx] = as_scalar(out[idx])
    out.setflags(write=False)
    return out


def entries(arr: np.ndarray) -> list[tuple]:
    """Nonzero entries of a tensor in lexicographic index order."""
    return [(*idx, arr[idx]) for idx in np.ndindex(arr.shape) if arr[idx] != 0]


def _expect_shape(name: str, arr: np.ndarray, shape: tuple[int, ...]) -> None:
    if arr.shape != shape:
        raise DimensionMismatch(f"{name} has shape {arr.shape}, expected {shape}")


@dataclass(frozen=True, eq=False)
class AlgebraData:
    basis: tuple[str, ...]
    mult: np.ndarray
    comult: np.ndarray
    unit: np.ndarray
    counit: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        n = len(self.basis)
        for name in ("mult", "comult", "unit", "counit"):
            arr = getattr(self, name)
            if arr is None:
                raise DataError(f"algebra is missing its {name}")
            object.__setattr__(self, name, freeze(arr))
        _expect_shape("mult", self.mult, (n, n, n))
        _expect_shape("comult", self.comult, (n, n, n))
        _expect_shape("unit", self.unit, (n,))
        _expect_shape("counit", self.counit, (n,))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def loop_constant(self) -> Fraction:
        return compute_loop_constant(self)


@dataclass(frozen=True, eq=False)
class ModuleData:
    basis: tuple[str, ...]
    act: np.ndarray
    coact: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "act", freeze(self.act))
        object.__setattr__(self, "coact", freeze(self.coact))

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True, eq=False)
class DefectData:
    """The colour set C together with its "action" and "coaction" on B.

    ``algebra`` optionally carries a Frobenius algebra structure on C; when it
    is present the loop constant is read off it, otherwise ``loop_constant``
    must be supplied.
    """

    basis: tuple[str, ...]
    act: np.ndarray
    coact: np.ndarray
    algebra: Optional[AlgebraData] = None
    loop_constant: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "act", freeze(self.act))
        object.__setattr__(self, "coact", freeze(self.coact))
        if self.loop_constant is not None:
            object.__setattr__(self, "loop_constant", as_scalar(self.loop_constant))
        if self.algebra is not None and self.algebra.basis != self.basis:
            raise DimensionMismatch("defect algebra basis differs from defect basis")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def lam(self) -> Fraction:
        if self.algebra is not None:
            return self.algebra.loop_constant
        if self.loop_constant is None:
            raise MissingLoopConstant("defect data has neither an algebra structure nor a loop constant")
        if self.loop_constant == 0:
            raise ZeroLoopConstant("defect loop constant is zero")
        return self.loop_constant


@dataclass(frozen=True, eq=False)
class SystemData:
    algebra: AlgebraData
    module: ModuleData
    defect: DefectData
    name: str = field(default="", compare=False)

    def __post_init__(self):
        na, nb, nc = self.algebra.dim, self.module.dim, self.defect.dim
        _expect_shape("module act", self.module.act, (nb, na, nb))
        _expect_shape("module coact", self.module.coact, (nb, nb, na))
        _expect_shape("defect act", self.defect.act, (nc, nb, nb))
        _expect_shape("defect coact", self.defect.coact, (nb, nc, nb))

    @property
    def rho(self) -> Fraction:
        return self.algebra.loop_constant

    @property
    def lam(self) -> Fraction:
        return self.defect.lam

    def tensor(self, tag: str) -> np.ndarray:
        return {
            "a": self.algebra.mult,
            "abar": self.algebra.comult,
            "b": self.module.act,
            "bbar": self.module.coact,
            "c": self.defect.act,
            "cbar": self.defect.coact,
        }[tag]

    def space_dim(self, space: str) -> int:
        return {"A": self.algebra.dim, "B": self.module.dim, "C": self.defect.dim}[space]

    @cached_property
    def checks(self) -> list[CheckResult]:
        return check_system(self)

    @cached_property
    def is_valid(self) -> bool:
        return all(r.passed for r in self.checks)


class Witness(NamedTuple):
    indices: tuple[tuple[str, int], ...]
    lhs: Fraction
    rhs: Fraction


class CheckResult(NamedTuple):
    equation_id: Union[int, str]
    passed: bool
    witness: Optional[Witness] = None

    def describe(self) -> str:
        status = "ok" if self.passed else "FAIL"
        line = f"{str(self.equation_id):>24}  {status}"
        if self.witness is not None:
            idx = ", ".join(f"{k}={v}" for k, v in self.witness.indices)
            line += f"  at ({idx}): lhs={self.witness.lhs} rhs={self.witness.rhs}"
        return line


# --- invariance equations -------------------------------------------------

SIGNATURES = {
    "a": ("A", "A", "A"),
    "abar": ("A", "A", "A"),
    "b": ("B", "A", "B"),
    "bbar": ("B", "B", "A"),
    "c": ("C", "B", "B"),
    "cbar": ("B", "C", "B"),
}

# id -> (lhs, rhs, factor on lhs). 2-17: 2-2 moves; 18-35: 1-3 moves, which
# hold up to the loop constant of A; 36: the 2-4 move, up to that of C.
EQUATIONS: dict[int, tuple[str, str, Optional[str]]] = {
    2: ("a[q,u,r] a[t,s,u]", "a[v,s,r] a[q,t,v]", None),
    3: ("abar[q,r,u] abar[u,s,t]", "abar[v,r,s] abar[q,v,t]", None),
    4: ("a[q,u,r] abar[t,u,s]", "abar[v,r,s] a[q,t,v]", None),
    5: ("abar[q,r,u] a[u,t,s]", "abar[v,r,s] a[q,t,v]", None),
    6: ("abar[q,r,u] a[s,u,t]", "a[v,s,r] abar[q,v,t]", None),
    7: ("a[q,u,r] abar[s,t,u]", "a[v,s,r] abar[q,v,t]", None),
    8: ("b[q,u,r] a[t,s,u]", "b[v,s,r] b[q,t,v]", None),
    9: ("bbar[q,r,u] abar[u,s,t]", "bbar[v,r,s] bbar[q,v,t]", None),
    10: ("b[q,u,r] abar[t,u,s]", "bbar[v,r,s] b[q,t,v]", None),
    11: ("bbar[q,r,u] a[u,t,s]", "bbar[v,r,s] b[q,t,v]", None),
    12: ("bbar[q,r,u] a[s,u,t]", "b[v,s,r] bbar[q,v,t]", None),
    13: ("b[q,u,r] abar[s,t,u]", "b[v,s,r] bbar[q,v,t]", None),
    14: ("c[r,q,u] b[u,t,s]", "c[r,v,s] b[q,t,v]", None),
    15: ("cbar[q,r,u] bbar[u,s,t]", "cbar[v,r,s] bbar[q,v,t]", None),
    16: ("cbar[q,r,v] b[v,t,s]", "cbar[u,r,s] b[q,t,u]", None),
    17: ("c[r,q,u] bbar[u,s,t]", "c[r,v,s] bbar[q,v,t]", None),
    18: ("a[t,s,r]", "abar[sig,r,tau] a[s,tau,rho] a[t,rho,sig]", "rho"),
    19: ("a[t,s,r]", "a[sig,tau,r] a[rho,s,tau] abar[t,sig,rho]", "rho"),
    20: ("a[t,s,r]", "a[t,rho,sig] abar[s,rho,tau] a[sig,tau,r]", "rho"),
    21: ("a[t,s,r]", "a[sig,t,rho] a[rho,s,tau] abar[tau,sig,r]", "rho"),
    22: ("abar[t,r,s]", "abar[sig,r,tau] abar[tau,s,rho] a[t,rho,sig]", "rho"),
    23: ("abar[t,r,s]", "abar[tau,sig,r] abar[rho,tau,s] a[sig,t,rho]", "rho"),
    24: ("abar[t,r,s]", "a[sig,tau,r] abar[rho,tau,s] abar[t,sig,rho]", "rho"),
    25: ("abar[t,r,s]", "abar[sig,r,tau] a[tau,rho,s] abar[t,sig,rho]", "rho"),
    26: ("bbar[t,r,s]", "bbar[sig,r,tau] abar[tau,s,rho] b[t,rho,sig]", "rho"),
    27: ("bbar[t,r,s]", "b[sig,tau,r] abar[rho,tau,s] bbar[t,sig,rho]", "rho"),
    28: ("bbar[t,r,s]", "bbar[sig,r,tau] a[tau,rho,s] bbar[t,sig,rho]", "rho"),
    29: ("b[t,s,r]", "bbar[sig,r,tau] a[s,tau,rho] b[t,rho,sig]", "rho"),
    30: ("b[t,s,r]", "b[sig,tau,r] a[rho,s,tau] bbar[t,sig,rho]", "rho"),
    31: ("b[t,s,r]", "b[t,rho,sig] abar[s,rho,tau] b[sig,tau,r]", "rho"),
    32: ("cbar[t,r,s]", "cbar[sig,r,tau] bbar[tau,s,rho] b[t,rho,sig]", "rho"),
    33: ("c[r,t,s]", "c[r,sig,tau] bbar[tau,s,rho] b[t,rho,sig]", "rho"),
    34: ("cbar[t,r,s]", "cbar[sig,r,tau] b[tau,rho,s] bbar[t,sig,rho]", "rho"),
    35: ("c[r,t,s]", "c[r,sig,tau] b[tau,rho,s] bbar[t,sig,rho]", "rho"),
    36: ("c[f,r,q] cbar[t,f,s]", "c[k,r,g] cbar[j,k,s] cbar[t,h,j] c[h,g,q]", "lam"),
}

_TERM_RE = re.compile(r"(\w+)\[([\w,]+)\]")


def parse_side(text: str) -> list[tuple[str, tuple[str, ...]]]:
    return [(m.group(1), tuple(m.group(2).split(","))) for m in _TERM_RE.finditer(text)]


def index_spaces(equation_id: int) -> dict[str, str]:
    """Map every index of an equation to the colour space it ranges over."""
    lhs, rhs, _ = EQUATIONS[equation_id]
    spaces: dict[str, str] = {}
    for tag, idx in parse_side(lhs) + parse_side(rhs):
        for name, space in zip(idx, SIGNATURES[tag]):
            if spaces.setdefault(name, space) != space:
                raise DimensionMismatch(
                    f"equation {equation_id}: index {name} used in spaces {spaces[name]} and {space}"
                )
    return spaces


def free_indices(equation_id: int) -> tuple[str, ...]:
    lhs, rhs, _ = EQUATIONS[equation_id]
    left = {n for _, idx in parse_side(lhs) for n in idx if _count(lhs, n) == 1}
    right = {n for _, idx in parse_side(rhs) for n in idx if _count(rhs, n) == 1}
    if left != right:
        raise DimensionMismatch(f"equation {equation_id}: free indices differ ({sorted(left)} vs {sorted(right)})")
    return tuple(sorted(left))


def _count(side: str, name: str) -> int:
    return sum(idx.count(name) for _, idx in parse_side(side))


def _sparse(arr: np.ndarray) -> dict[tuple[int, ...], Fraction]:
    return {idx: arr[idx] for idx in np.ndindex(arr.shape) if arr[idx] != 0}


def _evaluate_side(system: SystemData, text: str, free: tuple[str, ...]) -> dict[tuple[int, ...], Fraction]:
    """Sum a product of structure constants over its bound indices.

    Returns the nonzero values keyed by the free-index tuple (ordered as ``free``).
    """
    # partial assignments: dict index-name -> value, accumulated coefficient
    partial: list[tuple[dict[str, int], Fraction]] = [({}, Fraction(1))]
    for tag, idx in parse_side(text):
        table = _sparse(system.tensor(tag))
        grown = []
        for assign, coeff in partial:
            for key, value in table.items():
                new = dict(assign)
                ok = True
                for name, i in zip(idx, key):
                    if new.setdefault(name, i) != i:
                        ok = False
                        break
                if ok:
                    grown.append((new, coeff * value))
        partial = grown
    out: dict[tuple[int, ...], Fraction] = {}
    for assign, coeff in partial:
        key = tuple(assign[n] for n in free)
        out[key] = out.get(key, Fraction(0)) + coeff
    return {k: v for k, v in out.items() if v != 0}


def _projective_factor(system: SystemData, name: Optional[str]) -> Fraction:
    if name is None:
        return Fraction(1)
    if name == "rho":
        try:
            return system.rho
        except NotProjectivelySpecial:
            return _trace_ratio(system.algebra)
    if system.defect.algebra is not None:
        try:
            return system.defect.algebra.loop_constant
        except NotProjectivelySpecial:
            return _trace_ratio(system.defect.algebra)
    return system.lam


def check_equation(system: SystemData, equation_id: int) -> CheckResult:
    """Check one scalar invariance equation for every free-index assignment.

    The 1-3 and 2-4 equations are checked in their projective form
    ``factor * lhs == rhs``.  The witness is the lexicographically first
    free-index tuple (indices ordered by name) where the two sides differ.
    """
    if equation_id not in EQUATIONS:
        raise UnknownEquationId(equation_id)
    spaces = index_spaces(equation_id)
    free = free_indices(equation_id)
    lhs_text, rhs_text, factor_name = EQUATIONS[equation_id]
    factor = _projective_factor(system, factor_name)
    lhs = _evaluate_side(system, lhs_text, free)
    rhs = _evaluate_side(system, rhs_text, free)
    bad = [
        key
        for key in set(lhs) | set(rhs)
        if factor * lhs.get(key, Fraction(0)) != rhs.get(key, Fraction(0))
    ]
    if not bad:
        return CheckResult(equation_id, True)
    key = min(bad)
    for name, i in zip(free, key):
        assert i < system.space_dim(spaces[name])
    witness = Witness(tuple(zip(free, key)), factor * lhs.get(key, Fraction(0)), rhs.get(key, Fraction(0)))
    return CheckResult(equation_id, False, witness)


# --- named laws -----------------------------------------------------------

def _endomorphism(alg: AlgebraData) -> np.ndarray:
    n = alg.dim
    out = zeros((n, n))
    for t, r, s in np.ndindex(alg.comult.shape):
        coeff = alg.comult[t, r, s]
        if coeff:
            for u in range(n):
                out[t, u] += coeff * alg.mult[r, s, u]
    return out


def _trace_ratio(alg: AlgebraData) -> Fraction:
    m = _endomorphism(alg)
    return sum((m[i, i] for i in range(alg.dim)), Fraction(0)) / alg.dim


def compute_loop_constant(algebra: AlgebraData) -> Fraction:
    """Return rho with mult(comult(x)) == rho * x for all x.

    Raises NotProjectivelySpecial when the composite is not a scalar
    multiple of the identity, ZeroLoopConstant when the scalar is 0.
    """
    m = _endomorphism(algebra)
    rho = m[0, 0]
    for t, u in np.ndindex(m.shape):
        expected = rho if t == u else 0
        if m[t, u] != expected:
            raise NotProjectivelySpecial(
                f"mult o comult is not scalar: entry ({algebra.basis[t]}, {algebra.basis[u]}) = {m[t, u]}"
            )
    if rho == 0:
        raise ZeroLoopConstant("mult o comult vanishes")
    return rho


def _first_mismatch(pairs) -> Optional[Witness]:
    for indices, lhs, rhs in pairs:
        if lhs != rhs:
            return Witness(indices, lhs, rhs)
    return None


def _result(name: str, witness: Optional[Witness]) -> CheckResult:
    return CheckResult(name, witness is None, witness)


def check_unit(algebra: AlgebraData, name: str = "unit") -> CheckResult:
    """unit*x == x == x*unit on every basis vector."""
    n = algebra.dim

    def pairs():
        for x, u in itertools.product(range(n), repeat=2):
            want = Fraction(int(x == u))
            left = sum((algebra.unit[e] * algebra.mult[e, x, u] for e in range(n)), Fraction(0))
            right = sum((algebra.unit[e] * algebra.mult[x, e, u] for e in range(n)), Fraction(0))
            yield (("x", x), ("u", u), ("side", 0)), left, want
            yield (("x", x), ("u", u), ("side", 1)), right, want

    return _result(name, _first_mismatch(pairs()))


def check_counit(algebra: AlgebraData, name: str = "counit") -> CheckResult:
    n = algebra.dim

    def pairs():
        for x, u in itertools.product(range(n), repeat=2):
            want = Fraction(int(x == u))
            left = sum((algebra.counit[e] * algebra.comult[x, e, u] for e in range(n)), Fraction(0))
            right = sum((algebra.counit[e] * algebra.comult[x, u, e] for e in range(n)), Fraction(0))
            yield (("x", x), ("u", u), ("side", 0)), left, want
            yield (("x", x), ("u", u), ("side", 1)), right, want

    return _result(name, _first_mismatch(pairs()))


def check_symmetric(algebra: AlgebraData) -> CheckResult:
    """Check that the Frobenius pairing eps(x*y) is symmetric on basis pairs."""
    n = algebra.dim

    def pairing(x, y):
        return sum((algebra.mult[x, y, u] * algebra.counit[u] for u in range(n)), Fraction(0))

    pairs = (
        ((("x", x), ("y", y)), pairing(x, y), pairing(y, x))
        for x, y in itertools.product(range(n), repeat=2)
    )
    return _result("symmetric", _first_mismatch(pairs))


def check_projectively_special(algebra: AlgebraData, name: str = "projectively_special") -> CheckResult:
    m = _endomorphism(algebra)
    rho = m[0, 0]
    pairs = (
        ((("t", t), ("u", u)), m[t, u], rho if t == u else Fraction(0))
        for t, u in np.ndindex(m.shape)
    )
    witness = _first_mismatch(pairs)
    if witness is None and rho == 0:
        witness = Witness((("t", 0), ("u", 0)), rho, Fraction(1))
    return _result(name, witness)


def verify_module_loop(system: SystemData) -> CheckResult:
    """act(coact(x)) == rho * x on the module."""
    mod = system.module
    try:
        rho = system.rho
    except NotProjectivelySpecial:
        rho = _trace_ratio(system.algebra)
    n = mod.dim

    def pairs():
        for t, u in itertools.product(range(n), repeat=2):
            value = Fraction(0)
            for r in range(n):
                for s in range(system.algebra.dim):
                    coeff = mod.coact[t, r, s]
                    if coeff:
                        value += coeff * mod.act[r, s, u]
            yield (("t", t), ("u", u)), value, rho if t == u else Fraction(0)

    return _result("module_loop", _first_mismatch(pairs()))


def _identity_check(name: str, n: int, m: int, value) -> CheckResult:
    # value(x, u, k) is the k-th term of a sum over range(m) that should equal delta(x, u)
    pairs = (
        ((("x", x), ("u", u)), sum((value(x, u, k) for k in range(m)), Fraction(0)), Fraction(int(x == u)))
        for x, u in itertools.product(range(n), repeat=2)
    )
    return _result(name, _first_mismatch(pairs))


def check_module_unit(system: SystemData) -> list[CheckResult]:
    """The unit of A acts as the identity on B and the counit undoes the coaction."""
    b, bbar = system.module.act, system.module.coact
    unit, counit = system.algebra.unit, system.algebra.counit
    n, m = system.module.dim, system.algebra.dim
    return [
        _identity_check("module_unit", n, m, lambda x, u, k: unit[k] * b[x, k, u]),
        _identity_check("module_counit", n, m, lambda x, u, k: bbar[x, u, k] * counit[k]),
    ]


def check_defect_unit(system: SystemData) -> list[CheckResult]:
    """Same for the left action and coaction of C, when C is an algebra."""
    c, cbar = system.defect.act, system.defect.coact
    alg = system.defect.algebra
    n, m = system.module.dim, system.defect.dim
    return [
        _identity_check("defect_action_unit", n, m, lambda x, u, k: alg.unit[k] * c[k, x, u]),
        _identity_check("defect_coaction_counit", n, m, lambda x, u, k: alg.counit[k] * cbar[x, k, u]),
    ]


def check_system(system: SystemData) -> list[CheckResult]:
    """Run equations 2-36 and the auxiliary laws; failures are returned as data."""
    results = [check_equation(system, eq) for eq in sorted(EQUATIONS)]
    results.append(check_unit(system.algebra))
    results.append(check_counit(system.algebra))
    results.append(check_symmetric(system.algebra))
    results.append(check_projectively_special(system.algebra))
    results.append(verify_module_loop(system))
    results.extend(check_module_unit(system))
    defect_alg = system.defect.algebra
    if defect_alg is not None:
        results.append(check_unit(defect_alg, "defect_unit"))
        results.append(check_counit(defect_alg, "defect_counit"))
        results.extend(check_defect_unit(system))
        special = check_projectively_special(defect_alg, "defect_projectively_special")
        results.append(special)
        if special.passed and system.defect.loop_constant is not None:
            lam = defect_alg.loop_constant
            ok = lam == system.defect.loop_constant
            results.append(
                CheckResult(
                    "defect_loop_constant",
                    ok,
                    None if ok else Witness((), system.defect.loop_constant, lam),
                )
            )
    else:
        lam = system.defect.loop_constant
        ok = lam is not None and lam != 0
        results.append(CheckResult("defect_loop_constant", ok, None if ok else Witness((), Fraction(0), Fraction(0))))
    return results


def equations_passed(results: Sequence[CheckResult]) -> int:
    return sum(1 for r in results if isinstance(r.equation_id, int) and r.passed)


# --- helpers for deriving units ------------------------------------------

def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> Optional[list[Fraction]]:
    import sympy

    matrix = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in rows])
    vector = sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in rhs])
    try:
        solution, params = matrix.gauss_jordan_solve(vector)
    except ValueError:
        return None
    if params.shape[0]:
        return None
    return [Fraction(int(x.p), int(x.q)) for x in solution]


def unit_from_mult(mult: np.ndarray) -> np.ndarray:
    """Solve for the two-sided unit of a multiplication table."""
    n = mult.shape[0]
    rows, rhs = [], []
    for x, u in itertools.product(range(n), repeat=2):
        rows.append([Fraction(mult[e, x, u]) for e in range(n)])
        rhs.append(Fraction(int(x == u)))
        rows.append([Fraction(mult[x, e, u]) for e in range(n)])
        rhs.append(Fraction(int(x == u)))
    solution = _solve_exact(rows, rhs)
    if solution is None:
        raise DataError("multiplication has no unique two-sided unit")
    return freeze(solution)


def counit_from_comult(comult: np.ndarray) -> np.ndarray:
    n = comult.shape[0]
    rows, rhs = [], []
    for x, u in itertools.product(range(n), repeat=2):
        rows.append([Fraction(comult[x, e, u]) for e in range(n)])
        rhs.append(Fraction(int(x == u)))
        rows.append([Fraction(comult[x, u, e]) for e in range(n)])
        rhs.append(Fraction(int(x == u)))
    solution = _solve_exact(rows, rhs)
    if solution is None:
        raise DataError("comultiplication has no unique two-sided counit")
    return freeze(solution)
