import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rmf.clustering import build_clusters, cluster_geometry, default_pairs
from rmf.errors import DegeneratePairError, DomainError
from rmf.geometry import CurvatureClass, ReferenceSet


def brute_force_membership(pop, ref_pts, pairs):
    """Plain-Python first-match ball assignment; -1 means unclustered."""
    out = []
    for p in pop:
        label = -1
        for k, (i, j) in enumerate(pairs):
            a, b = ref_pts[i], ref_pts[j]
            centre = [(x + y) / 2 for x, y in zip(a, b)]
            if math.dist(p, centre) <= math.dist(a, b) / 2 + 1e-12:
                label = k
                break
        out.append(label)
    return out


def perturbed_front(seed=7, n=200, noise=0.001):
    rng = np.random.default_rng(seed)
    x = rng.uniform(0, 1, n)
    ang = rng.uniform(0, 2 * math.pi, n)
    rad = rng.uniform(0, noise, n)
    return np.column_stack([x + rad * np.cos(ang), 1 - np.sqrt(x) + rad * np.sin(ang)])


def test_cluster_geometry_2d():
    g = cluster_geometry((0, 1), (1, 0))
    assert g.center.tolist() == [0.5, 0.5]
    assert g.radius == math.sqrt(2) / 2


def test_cluster_geometry_3d():
    g = cluster_geometry((0, 0, 1), (0, 0, 0))
    assert g.center.tolist() == [0, 0, 0.5]
    assert g.radius == 0.5


def test_cluster_geometry_degenerate():
    with pytest.raises(DegeneratePairError):
        cluster_geometry((0.2, 0.8), (0.2, 0.8))


@pytest.mark.parametrize(
    "m, expected",
    [
        (3, [(0, 2)]),
        (4, [(0, 2), (1, 3)]),
        (5, [(0, 2), (2, 4)]),
        (6, [(0, 2), (2, 4), (3, 5)]),
    ],
)
def test_default_pairs(m, expected):
    assert default_pairs(m) == expected


def test_default_pairs_cover_every_reference_point():
    for m in range(3, 40):
        covered = set()
        for i, j in default_pairs(m):
            covered.update(range(i, j + 1))
        assert covered == set(range(m))


def test_default_pairing_needs_three_points():
    with pytest.raises(DomainError):
        build_clusters([(0.5, 0.5)], ReferenceSet([(0, 1), (1, 0)]))


def test_centre_lands_in_first_cluster(convex_ref):
    part = build_clusters([ (convex_ref[0] + convex_ref[2]) / 2 ], convex_ref)
    assert part.clusters[0].members.tolist() == [0]
    assert len(part.unclustered) == 0


def test_far_point_is_unclustered(convex_ref):
    part = build_clusters([(10.0, 10.0)], convex_ref)
    assert all(c.size == 0 for c in part.clusters)
    assert part.unclustered.tolist() == [0]


def test_perturbed_front_matches_brute_force(convex_ref):
    pop = perturbed_front()
    part = build_clusters(pop, convex_ref)
    pairs = default_pairs(len(convex_ref))
    assert part.assignment.tolist() == brute_force_membership(pop.tolist(), convex_ref.points.tolist(), pairs)
    # Frozen from the brute-force oracle above.
    assert len(part.unclustered) == 0
    assert [c.size for c in part.clusters] == [
        5, 8, 4, 2, 2, 2, 3, 6, 2, 6, 5, 3, 6, 3, 0, 5, 3, 4, 6, 2, 5, 3, 3, 5, 1,
        9, 4, 4, 4, 6, 3, 9, 3, 5, 2, 1, 2, 4, 3, 3, 6, 3, 2, 7, 4, 6, 4, 4, 5, 3,
    ]


def test_cluster_layout(convex_ref):
    part = build_clusters(np.empty((0, 2)), convex_ref)
    assert len(part.clusters) == 50
    for k, c in enumerate(part.clusters):
        assert c.geometry.span == range(2 * k, 2 * k + 3)
        assert np.array_equal(c.local_curve[0], c.geometry.anchor_a)
        assert np.array_equal(c.local_curve[-1], c.geometry.anchor_b)
        assert np.all(np.diff(c.local_curve[:, 0]) > 0)
        assert c.curvature is CurvatureClass.CONVEX
        assert np.array_equal(c.geometry.center, (c.geometry.anchor_a + c.geometry.anchor_b) / 2)


def test_explicit_pairing(convex_ref):
    part = build_clusters([(0.02, 0.86)], convex_ref, pairing=[(4, 0), (10, 11)])
    first = part.clusters[0]
    assert first.geometry.span == range(0, 5)
    assert first.geometry.anchor_a[0] == 0.0
    # Two-point spans have no curvature to measure.
    assert part.clusters[1].curvature is CurvatureClass.LINEAR
    with pytest.raises(DomainError):
        build_clusters([(0.5, 0.5)], convex_ref, pairing=[(0, 101)])


def test_three_dimensional_requires_pairing():
    ref = ReferenceSet([(0, 0, 1), (0, 1, 0), (1, 0, 0)])
    with pytest.raises(DomainError):
        build_clusters([(0.3, 0.3, 0.4)], ref)
    part = build_clusters([(0.0, 0.5, 0.5), (5.0, 5.0, 5.0)], ref, pairing=[(0, 1), (1, 2)])
    assert part.assignment.tolist() == [0, -1]


def test_dimension_mismatch(convex_ref):
    with pytest.raises(DomainError):
        build_clusters([(0.1, 0.2, 0.3)], convex_ref)


def test_members_inside_ball(convex_ref, rng):
    pop = rng.uniform(-0.1, 1.1, size=(2000, 2))
    part = build_clusters(pop, convex_ref)
    for c in part.clusters:
        if c.size:
            dist = np.linalg.norm(pop[c.members] - c.geometry.center, axis=1)
            assert np.all(dist <= c.geometry.radius + 1e-12)


populations = arrays(
    np.float64, st.tuples(st.integers(0, 60), st.just(2)),
    elements=st.floats(-0.2, 1.2, allow_nan=False, allow_infinity=False),
)


@settings(max_examples=60, deadline=None)
@given(populations, st.randoms(use_true_random=False))
def test_partition_exhaustive_disjoint_and_order_free(pop, rnd):
    ref = ReferenceSet(np.column_stack([np.linspace(0, 1, 21), 1 - np.sqrt(np.linspace(0, 1, 21))]))
    part = build_clusters(pop, ref)
    seen = np.concatenate([c.members for c in part.clusters] + [part.unclustered])
    assert sorted(seen.tolist()) == list(range(len(pop)))
    assert sum(c.size for c in part.clusters) + len(part.unclustered) == len(pop)

    perm = list(range(len(pop)))
    rnd.shuffle(perm)
    shuffled = build_clusters(pop[perm], ref)
    assert shuffled.assignment.tolist() == part.assignment[perm].tolist()
