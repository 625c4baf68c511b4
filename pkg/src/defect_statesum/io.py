"""Reading and writing systems, complexes, group tables and results.

System files are JSON objects with three blocks::

    {
      "name": "example1_z2",                 (optional)
      "algebra": {"basis": [...], "mult": E, "comult": E, "unit": E, "counit": E},
      "module":  {"basis": [...], "act": E, "coact": E},
      "defect":  {"basis": [...], "act": E, "coact": E,
                  "mult": E, "comult": E, "unit": E, "counit": E,   (optional, all or none)
                  "loop_constant": S}                                (optional)
    }

where ``E`` is a list of entries ``[i, j, ..., S]`` (zero entries may be
omitted, repeated indices are summed) and ``S`` is an integer or a
``"p/q"`` string.  Index order per tensor is documented in
:mod:`defect_statesum.frobenius_data`.  Saving sorts keys and entries, writes
integral scalars as integers and everything else as ``"p/q"``, so
load/save round trips are byte-stable.

Complex files are JSON objects with ``vertices`` (``[id, on_curve]`` pairs),
``off_curve_order``, ``triangles`` (counterclockwise triples) and
``curve_cycles``.

Group tables (``.tbl``) are plain text: the first non-comment line lists the
element labels, identity first, and each following line is
``label: product-with-each-label``::

    # Z/2
    e g
    e: e g
    g: g e
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from .complex import CurveSurfaceComplex
from .examples import GroupTable
from .frobenius_data import (
    AlgebraData,
    DataError,
    DefectData,
    ModuleData,
    SystemData,
    as_scalar,
    dense,
    entries,
)
from .statesum import describe

PathLike = Union[str, Path]


class FormatError(DataError):
    pass


# -- JSON emission ---------------------------------------------------------------

def scalar_out(value: Fraction) -> Union[int, str]:
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _emit(obj: Any, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        body = ",\n".join(f"{inner}{json.dumps(k)}: {_emit(obj[k], indent + 1)}" for k in sorted(obj))
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(x, (list, tuple, dict)) for x in obj):
            return "[" + ", ".join(json.dumps(x) for x in obj) + "]"
        body = ",\n".join(inner + _emit(x, indent + 1) for x in obj)
        return "[\n" + body + "\n" + pad + "]"
    return json.dumps(obj)


def dumps(obj: Any) -> str:
    """Deterministic JSON: sorted keys, flat lists on one line, trailing newline."""
    return _emit(obj, 0) + "\n"


def _write(path: PathLike, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _read_json(source: Union[PathLike, dict]) -> dict:
    if isinstance(source, dict):
        return source
    try:
        doc = json.loads(Path(source).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {source}: {exc}") from exc
    if not isinstance(doc, dict):
        raise FormatError(f"{source}: top level must be a JSON object")
    return doc


# -- systems -----------------------------------------------------------------------

def _entries_out(arr) -> list[list]:
    return [[*map(int, e[:-1]), scalar_out(e[-1])] for e in entries(arr)]


def _tensor_in(block: dict, key: str, shape: tuple[int, ...], where: str):
    raw = block.get(key)
    if not isinstance(raw, list):
        raise FormatError(f"{where}.{key} must be a list of entries")
    rows = []
    for entry in raw:
        if not isinstance(entry, list) or len(entry) != len(shape) + 1:
            raise FormatError(f"{where}.{key}: entry {entry!r} should have {len(shape)} indices and a value")
        *idx, value = entry
        if any(isinstance(i, bool) or not isinstance(i, int) for i in idx):
            raise FormatError(f"{where}.{key}: indices must be integers in {entry!r}")
        if isinstance(value, float):
            raise FormatError(f"{where}.{key}: floating-point value in {entry!r}")
        rows.append((*idx, as_scalar(value)))
    return dense(shape, rows)


def _basis_in(block: dict, where: str) -> tuple[str, ...]:
    basis = block.get("basis")
    if not isinstance(basis, list) or not basis or not all(isinstance(b, str) for b in basis):
        raise FormatError(f"{where}.basis must be a non-empty list of strings")
    if len(set(basis)) != len(basis):
        raise FormatError(f"{where}.basis has repeated labels")
    return tuple(basis)


def _block(doc: dict, key: str) -> dict:
    block = doc.get(key)
    if not isinstance(block, dict):
        raise FormatError(f"missing or malformed '{key}' block")
    return block


_ALGEBRA_KEYS = ("mult", "comult", "unit", "counit")


def _algebra_in(block: dict, where: str, basis=None) -> AlgebraData:
    basis = _basis_in(block, where) if basis is None else basis
    n = len(basis)
    missing = [k for k in _ALGEBRA_KEYS if k not in block]
    if missing:
        raise FormatError(f"{where} is missing {', '.join(missing)}")
    return AlgebraData(
        basis,
        _tensor_in(block, "mult", (n, n, n), where),
        _tensor_in(block, "comult", (n, n, n), where),
        _tensor_in(block, "unit", (n,), where),
        _tensor_in(block, "counit", (n,), where),
    )


def system_from_dict(doc: dict, name: str = "") -> SystemData:
    try:
        alg = _algebra_in(_block(doc, "algebra"), "algebra")
        mod_block, def_block = _block(doc, "module"), _block(doc, "defect")
        nb_basis = _basis_in(mod_block, "module")
        nc_basis = _basis_in(def_block, "defect")
        na, nb, nc = alg.dim, len(nb_basis), len(nc_basis)
        module = ModuleData(
            nb_basis,
            _tensor_in(mod_block, "act", (nb, na, nb), "module"),
            _tensor_in(mod_block, "coact", (nb, nb, na), "module"),
        )
        present = [k for k in _ALGEBRA_KEYS if k in def_block]
        c_alg = _algebra_in(def_block, "defect", nc_basis) if present else None
        loop = def_block.get("loop_constant")
        if isinstance(loop, float):
            raise FormatError("defect.loop_constant must be exact")
        defect = DefectData(
            nc_basis,
            _tensor_in(def_block, "act", (nc, nb, nb), "defect"),
            _tensor_in(def_block, "coact", (nb, nc, nb), "defect"),
            algebra=c_alg,
            loop_constant=None if loop is None else as_scalar(loop),
        )
        label = doc.get("name", name)
        return SystemData(alg, module, defect, name=label if isinstance(label, str) else name)
    except FormatError:
        raise
    except DataError as exc:
        raise FormatError(str(exc)) from exc


def load_system(path: PathLike) -> SystemData:
    return system_from_dict(_read_json(path), name=Path(path).stem)


def _algebra_out(alg: AlgebraData) -> dict:
    return {
        "basis": list(alg.basis),
        "mult": _entries_out(alg.mult),
        "comult": _entries_out(alg.comult),
        "unit": _entries_out(alg.unit),
        "counit": _entries_out(alg.counit),
    }


def system_to_dict(system: SystemData) -> dict:
    defect: dict = {
        "basis": list(system.defect.basis),
        "act": _entries_out(system.defect.act),
        "coact": _entries_out(system.defect.coact),
    }
    if system.defect.algebra is not None:
        c = _algebra_out(system.defect.algebra)
        del c["basis"]
        defect.update(c)
    if system.defect.loop_constant is not None:
        defect["loop_constant"] = scalar_out(system.defect.loop_constant)
    doc = {
        "algebra": _algebra_out(system.algebra),
        "module": {
            "basis": list(system.module.basis),
            "act": _entries_out(system.module.act),
            "coact": _entries_out(system.module.coact),
        },
        "defect": defect,
    }
    if system.name:
        doc["name"] = system.name
    return doc


def save_system(system: SystemData, path: PathLike) -> None:
    _write(path, dumps(system_to_dict(system)))


# -- complexes -----------------------------------------------------------------------

def _int_list(value, where: str) -> list[int]:
    if not isinstance(value, list) or any(isinstance(v, bool) or not isinstance(v, int) for v in value):
        raise FormatError(f"{where} must be a list of integers")
    return value


def complex_from_dict(doc: dict) -> CurveSurfaceComplex:
    for key in ("vertices", "off_curve_order", "triangles"):
        if key not in doc:
            raise FormatError(f"complex is missing '{key}'")
    vertices = []
    for v in doc["vertices"] if isinstance(doc["vertices"], list) else [None]:
        if not (isinstance(v, list) and len(v) == 2 and isinstance(v[0], int) and isinstance(v[1], bool)):
            raise FormatError(f"vertex entries must be [id, on_curve]; got {v!r}")
        vertices.append((v[0], v[1]))
    order = _int_list(doc["off_curve_order"], "off_curve_order")
    if not isinstance(doc["triangles"], list):
        raise FormatError("triangles must be a list")
    triangles = []
    for t in doc["triangles"]:
        t = _int_list(t, "triangle")
        if len(t) != 3:
            raise FormatError(f"triangle {t!r} does not have three vertices")
        triangles.append(tuple(t))
    cycles = doc.get("curve_cycles", [])
    if not isinstance(cycles, list):
        raise FormatError("curve_cycles must be a list")
    cycles = [tuple(_int_list(c, "curve cycle")) for c in cycles]
    return CurveSurfaceComplex(tuple(vertices), tuple(order), tuple(triangles), tuple(cycles))


def load_complex(path: PathLike) -> CurveSurfaceComplex:
    return complex_from_dict(_read_json(path))


def complex_to_dict(cx: CurveSurfaceComplex) -> dict:
    return {
        "vertices": [[v, c] for v, c in sorted(cx.vertices)],
        "off_curve_order": list(cx.off_curve_order),
        "triangles": [list(t) for t in sorted(cx.triangles)],
        "curve_cycles": [list(c) for c in cx.curve_cycles],
    }


def save_complex(cx: CurveSurfaceComplex, path: PathLike) -> None:
    _write(path, dumps(complex_to_dict(cx)))


# -- group tables ------------------------------------------------------------------

def parse_group_table(text: str) -> GroupTable:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise FormatError("empty group table")
    labels = lines[0].split()
    index = {x: i for i, x in enumerate(labels)}
    if len(index) != len(labels):
        raise FormatError("repeated element labels")
    rows: dict[int, list[int]] = {}
    for ln in lines[1:]:
        head, sep, tail = ln.partition(":")
        if not sep or head.strip() not in index:
            raise FormatError(f"bad table row {ln!r}")
        try:
            row = [index[x] for x in tail.split()]
        except KeyError as exc:
            raise FormatError(f"unknown element {exc.args[0]!r} in row {ln!r}") from None
        rows[index[head.strip()]] = row
    if sorted(rows) != list(range(len(labels))):
        raise FormatError("table needs exactly one row per element")
    return GroupTable(tuple(labels), tuple(tuple(rows[i]) for i in range(len(labels))), 0)


def load_group_table(path: PathLike) -> GroupTable:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    return parse_group_table(text)


def format_group_table(G: GroupTable) -> str:
    # the identity must come first in the file
    order = [G.identity] + [g for g in range(G.order) if g != G.identity]
    lines = [" ".join(G.labels[g] for g in order)]
    for g in order:
        lines.append(f"{G.labels[g]}: " + " ".join(G.labels[G.mul(g, h)] for h in order))
    return "\n".join(lines) + "\n"


# -- results -------------------------------------------------------------------------

def result_to_dict(value, cx: CurveSurfaceComplex, method: str = "") -> dict:
    doc = describe(value, cx)
    if method:
        doc["method"] = method
    return doc
