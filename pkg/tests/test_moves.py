import pytest
from hypothesis import given, settings, strategies as st

from conftest import system
from defect_statesum.complex import (
    build,
    canonical_triangle,
    curve_components,
    edge_key,
    euler_characteristic,
    seed_complex,
    validate,
)
from defect_statesum.moves import (
    NotFlippable,
    NotMergeable,
    NotSplittable,
    NotSubdividable,
    MoveError,
    applicable_moves,
    apply_move,
    candidate_targets,
    flip22,
    invert,
    merge31,
    merge42,
    random_walk,
    split24,
    subdivide13,
)
from defect_statesum.statesum import evaluate_contraction


def _first_failure(cx, kind, reason):
    for k, target in candidate_targets(cx):
        if k != kind:
            continue
        try:
            apply_move(cx, k, target)
        except MoveError as exc:
            if exc.reason == reason:
                return target
    return None


def test_flip_and_flip_back():
    cx = seed_complex("sphere_equator")
    kind, edge = next(m for m in applicable_moves(cx) if m[0] == "flip22")
    flipped, rec = flip22(cx, edge)
    assert validate(flipped) == []
    assert not flipped.has_edge(*edge)
    back, _ = invert(flipped, rec)
    assert sorted(back.triangles) == sorted(cx.triangles)


def test_subdivide_and_merge():
    cx = seed_complex("plain_torus")
    tri = cx.triangles[3]
    sub, rec = subdivide13(cx, tri)
    w = rec.inverse_target[0]
    assert w == max(cx.vertex_ids) + 1
    assert sub.off_curve_order[-1] == w and sub.degree(w) == 3
    back, _ = merge31(sub, w)
    assert sorted(back.triangles) == sorted(cx.triangles)
    assert back.off_curve_order == cx.off_curve_order


def test_split_and_merge_on_the_curve():
    cx = seed_complex("sphere_equator")
    edge = sorted(cx.curve_edges)[0]
    u, v = cx.curve_edges[edge]
    split, rec = split24(cx, edge)
    w = rec.inverse_target[0]
    assert split.on_curve[w] and split.degree(w) == 4
    assert split.curve_successor[u] == w and split.curve_successor[w] == v
    assert validate(split) == []
    back, _ = merge42(split, w)
    assert sorted(back.triangles) == sorted(cx.triangles)
    assert back.curve_successor == cx.curve_successor


def test_flip_reasons():
    cx = seed_complex("sphere_equator")
    with pytest.raises(NotFlippable) as err:
        flip22(cx, sorted(cx.curve_edges)[0])
    assert err.value.reason == "curve edge"
    with pytest.raises(NotFlippable) as err:
        flip22(seed_complex("plain_sphere"), (0, 1))
    assert err.value.reason == "diagonal exists"
    with pytest.raises(NotFlippable) as err:
        flip22(cx, (998, 999))
    assert err.value.reason == "no such edge"
    for name in ("sphere_equator", "octahedron_equator"):
        assert _first_failure(seed_complex(name), "flip22", "flag-likeness violation") is not None


def test_merge31_reasons():
    with pytest.raises(NotMergeable) as err:
        merge31(seed_complex("plain_sphere"), 0)
    assert err.value.reason == "non-simplicial result"
    cx = seed_complex("sphere_equator")
    on = next(v for v in cx.vertex_ids if cx.on_curve[v])
    with pytest.raises(NotMergeable) as err:
        merge31(cx, on)
    assert err.value.reason == "on-curve vertex"
    off = next(v for v in cx.vertex_ids if not cx.on_curve[v] and cx.degree(v) != 3)
    with pytest.raises(NotMergeable) as err:
        merge31(cx, off)
    assert err.value.reason == "wrong degree"


def test_merge42_reasons():
    cx = seed_complex("octahedron_equator")
    with pytest.raises(NotMergeable) as err:
        merge42(cx, 4)
    assert err.value.reason == "off-curve vertex"
    merged, _ = merge42(cx, 0)
    assert validate(merged) == []
    # the curve is now the triangle 1-2-3; removing 2 would double the edge 1-3
    assert merged.curve_cycles == ((1, 2, 3),) and merged.degree(2) == 4
    with pytest.raises(NotMergeable) as err:
        merge42(merged, 2)
    assert err.value.reason == "duplicate edge"
    with pytest.raises(NotMergeable) as err:
        merge42(seed_complex("sphere_equator"), 0)
    assert err.value.reason == "wrong degree"


def test_split_and_subdivide_reasons():
    cx = seed_complex("sphere_equator")
    a_edge = next(e for e, k in cx.edge_kinds.items() if k != "C")
    with pytest.raises(NotSplittable) as err:
        split24(cx, a_edge)
    assert err.value.reason == "not a curve edge"
    with pytest.raises(NotSubdividable):
        subdivide13(cx, (0, 1, 99))


def test_growth_bound():
    cx = seed_complex("sphere_equator")
    kinds = {k for k, _ in applicable_moves(cx, max_edges=len(cx.edges))}
    assert "subdivide13" not in kinds and "split24" not in kinds
    final, _ = random_walk(cx, seed=3, steps=60, max_edges=len(cx.edges) + 9)
    assert len(final.edges) <= len(cx.edges) + 9


def test_walk_is_deterministic():
    cx = seed_complex("torus_meridian")
    a = random_walk(cx, seed=11, steps=40)
    b = random_walk(cx, seed=11, steps=40)
    assert [r.as_dict() for r in a[1]] == [r.as_dict() for r in b[1]]
    assert sorted(a[0].triangles) == sorted(b[0].triangles)
    c = random_walk(cx, seed=12, steps=40)
    assert [r.as_dict() for r in a[1]] != [r.as_dict() for r in c[1]]


def test_long_walk_on_the_equator_sphere():
    final, records = random_walk(seed_complex("sphere_equator"), seed=42, steps=100)
    assert len(records) == 100 and validate(final) == []
    assert euler_characteristic(final) == 2 and curve_components(final) == 1


def _same(back, cx, back_rec, rec):
    """Equality up to the id of a vertex that a merge removed and its inverse recreated."""
    rename = {}
    if rec.kind in ("merge31", "merge42"):
        rename[back_rec.inverse_target[0]] = rec.target[0]
    tris = (tuple(rename.get(v, v) for v in t) for t in back.triangles)
    return sorted(canonical_triangle(t) for t in tris) == sorted(cx.triangles) and {
        rename.get(u, u): rename.get(v, v) for u, v in back.curve_successor.items()
    } == cx.curve_successor


@settings(max_examples=15)
@given(
    name=st.sampled_from(["sphere_equator", "torus_meridian", "octahedron_equator", "plain_torus"]),
    seed=st.integers(0, 10**6),
    steps=st.integers(0, 25),
)
def test_applicable_moves_are_exactly_the_legal_ones(name, seed, steps):
    cx, _ = random_walk(seed_complex(name), seed, steps)
    listed = set(applicable_moves(cx))
    for kind, target in candidate_targets(cx):
        try:
            out, rec = apply_move(cx, kind, target)
        except MoveError:
            assert (kind, target) not in listed
            continue
        assert (kind, target) in listed
        assert validate(out) == []
        back, back_rec = invert(out, rec)
        assert _same(back, cx, back_rec, rec)


def test_flip_count_on_the_tetrahedron_is_zero():
    # every edge of the tetrahedron already has its opposite diagonal
    assert [m for m in applicable_moves(build([(0, 2, 1), (0, 1, 3), (1, 2, 3), (0, 3, 2)])) if m[0] == "flip22"] == []


@pytest.mark.parametrize("name", ["example1_z2", "example4_z2", "example3_2_3"])
def test_single_move_factors(name):
    s = system(name)
    cx = seed_complex("sphere_equator")
    z = evaluate_contraction(s, cx)
    tri = cx.triangles[0]
    assert evaluate_contraction(s, subdivide13(cx, tri)[0]) == s.rho * z
    edge = sorted(cx.curve_edges)[0]
    assert evaluate_contraction(s, split24(cx, edge)[0]) == s.lam * z
    flip = next(t for k, t in applicable_moves(cx) if k == "flip22")
    assert evaluate_contraction(s, flip22(cx, flip)[0]) == z
    assert edge_key(*flip) == flip
