import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import SHIPPED, system
from defect_statesum.complex import SEEDS, TETRAHEDRON, build, seed_complex
from defect_statesum.examples import closed_surface_system, group_algebra, perturbed, symmetric_group_3
from defect_statesum.statesum import (
    InvalidComplex,
    InvalidSystem,
    OutOfMemoryBudget,
    TooLarge,
    TriangleTensor,
    contract_network,
    coloring_count,
    describe,
    edge_dims,
    evaluate_bruteforce,
    evaluate_contraction,
    local_weight,
    normalize,
    normalized_invariant,
    triangle_tensors,
)

# normalized invariants, frozen from contraction runs and cross-checked by brute force where feasible
EXPECTED = {
    "example1_z2": {"plain_sphere": "1/2", "plain_torus": "2", "sphere_equator": "1/2", "torus_meridian": "2",
                    "plain_octahedron": "1/2", "octahedron_equator": "1/2", "bipyramid_equator": "1/2",
                    "plain_torus8": "2"},
    "example1_s3": {"plain_sphere": "1/6", "plain_torus": "3", "sphere_equator": "1/2", "plain_octahedron": "1/6",
                    "octahedron_equator": "1/2", "bipyramid_equator": "1/2"},
    "example3_1_1": {name: "1" for name in SEEDS},
    "example3_2_2": {name: "1" for name in SEEDS},
    "example3_2_3": {name: "1" for name in SEEDS},
    "example4_z2": {"plain_sphere": "1/2", "plain_torus": "2", "sphere_equator": "1", "torus_meridian": "2",
                    "plain_octahedron": "1/2", "octahedron_equator": "1", "bipyramid_equator": "1",
                    "plain_torus8": "2"},
}

SMALL = [name for name in SEEDS if len(seed_complex(name).edges) <= 20]


@pytest.mark.parametrize("sys_name, cx_name", [(s, c) for s in EXPECTED for c in EXPECTED[s]])
def test_frozen_values(sys_name, cx_name):
    value = normalized_invariant(system(sys_name), seed_complex(cx_name), method="contract")
    assert value.normalized == Fraction(EXPECTED[sys_name][cx_name])


@pytest.mark.parametrize("sys_name", SHIPPED)
@pytest.mark.parametrize("cx_name", SMALL)
def test_brute_force_matches_contraction(sys_name, cx_name):
    s, cx = system(sys_name), seed_complex(cx_name)
    assert evaluate_bruteforce(s, cx, cap=None) == evaluate_contraction(s, cx)


def test_closed_surface_group_algebra_values():
    s3 = closed_surface_system(group_algebra(symmetric_group_3()))
    # 1/|G| on the sphere and the number of conjugacy classes on the torus
    assert normalized_invariant(s3, seed_complex("plain_sphere"), method="brute").normalized == Fraction(1, 6)
    assert normalized_invariant(s3, seed_complex("plain_torus")).normalized == 3


def test_unnormalized_tetrahedron_by_hand():
    # Z/2: all colourings with a group-law constraint per triangle; 2^3 of 2^6 survive
    assert evaluate_bruteforce(system("example4_z2"), build(TETRAHEDRON)) == 8


def test_local_weight_reads_the_right_entry():
    s = system("example1_s3")
    cx = seed_complex("sphere_equator")
    rng = random.Random(5)
    dims = {"A": 6, "B": 6, "C": 2}
    for tensor in triangle_tensors(s, cx):
        colouring = {e: rng.randrange(dims[cx.edge_kind(e)]) for e in tensor.edges}
        expected = tensor.table[tuple(colouring[e] for e in tensor.edges)]
        assert local_weight(s, cx, cx.triangles[tensor.triangle], colouring) == expected


def test_too_large():
    s, cx = system("example1_s3"), seed_complex("plain_torus")
    assert coloring_count(s, cx) == 6**21
    with pytest.raises(TooLarge):
        evaluate_bruteforce(s, cx)


def test_memory_budget_and_auto_fallback():
    s, cx = system("example1_s3"), seed_complex("plain_sphere")
    with pytest.raises(OutOfMemoryBudget):
        evaluate_contraction(s, cx, budget=4)
    value = normalized_invariant(s, cx, method="auto", budget=4)
    assert value.normalized == Fraction(1, 6)


@pytest.mark.parametrize("cx_name", ["plain_torus", "sphere_equator", "octahedron_equator"])
def test_sequential_and_greedy_orders_agree(cx_name):
    s, cx = system("example3_2_2"), seed_complex(cx_name)
    tensors, dims = triangle_tensors(s, cx), edge_dims(s, cx)
    assert contract_network(tensors, dims, order="sequential", budget=None) == contract_network(tensors, dims)


def test_contract_network_small_cases():
    t = np.array([[[Fraction(1), Fraction(2)], [Fraction(3), Fraction(4)]]] * 2, dtype=object)
    # two copies of t sharing all three indices: sum of squares
    a = TriangleTensor(0, "a", ((0, 1), (1, 2), (0, 2)), t)
    b = TriangleTensor(1, "a", ((0, 1), (1, 2), (0, 2)), t)
    dims = {(0, 1): 2, (1, 2): 2, (0, 2): 2}
    assert contract_network([a, b], dims) == 2 * (1 + 4 + 9 + 16)
    with pytest.raises(ValueError):
        contract_network([a], dims)
    with pytest.raises(ValueError):
        contract_network([a, b], dims, order="optimal")


def test_normalize_and_describe():
    s, cx = system("example1_z2"), seed_complex("sphere_equator")
    value = normalize(s, cx, Fraction(64))
    assert (value.n_off_vertices, value.n_on_vertices) == (8, 6)
    assert value.normalized == Fraction(64, 2**8 * 2**6)
    doc = describe(value, cx)
    assert doc["normalized"] == "1/256" and doc["class_counts"]["c"] == 6


def test_invalid_inputs_rejected():
    s = system("example1_z2")
    with pytest.raises(InvalidSystem):
        normalized_invariant(perturbed(s, "a", (0, 1, 1), 1), seed_complex("plain_sphere"))
    flipped = build([TETRAHEDRON[0][::-1]] + TETRAHEDRON[1:])
    with pytest.raises(InvalidComplex):
        normalized_invariant(s, flipped)
    with pytest.raises(ValueError):
        normalized_invariant(s, seed_complex("plain_sphere"), method="magic")


@settings(max_examples=10)
@given(seed=st.integers(0, 10**6), cx_name=st.sampled_from(["plain_torus", "sphere_equator", "torus_meridian"]))
def test_off_curve_order_does_not_matter(seed, cx_name):
    s, cx = system("example1_z2"), seed_complex(cx_name)
    order = list(cx.off_curve_order)
    random.Random(seed).shuffle(order)
    base = normalized_invariant(s, cx, method="contract").normalized
    assert normalized_invariant(s, cx.with_order(order), method="contract").normalized == base
