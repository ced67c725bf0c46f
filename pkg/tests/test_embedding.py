import math

import numpy as np
import pytest

from drugatlas.embedding import (
    DistanceMatrix,
    Embedding,
    classical_mds,
    embed_distances,
    pairwise_distances,
    smacof_refine,
    stress,
)
from drugatlas.errors import (
    DimensionMismatch,
    NonFiniteInput,
    SpanMismatch,
    TooFewPoints,
)
from drugatlas.ingest import CountryRef, DrugKind
from drugatlas.transform import DenseSeries

from oracles import exact_distances, random_planar_points, random_symmetric_distances

MOR = DrugKind("morphine")


def keys_for(n):
    # Synthetic-but-valid registry keys: AAA, AAB, ... keep key order == input order.
    return tuple(
        (CountryRef("A" + chr(65 + i // 26) + chr(65 + i % 26), f"Land {i}", "Europe"), MOR)
        for i in range(n)
    )


def dmatrix(d):
    return DistanceMatrix(keys=keys_for(d.shape[0]), d=d)


def dense(values, first_year=2000):
    return DenseSeries(key=keys_for(1)[0], first_year=first_year, values=np.asarray(values, float))


def reproduced(coords):
    diff = coords[:, None, :] - coords[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


class TestPairwiseDistances:
    def test_two_term_euclidean(self):
        a = dense([0.0, 2.0])
        b = DenseSeries(key=keys_for(2)[1], first_year=2000, values=np.array([2.0, 0.0]))
        d = pairwise_distances([a, b]).d
        assert d[0, 1] == pytest.approx(math.sqrt(8.0), abs=1e-12)

    def test_identical_series_distance_zero(self):
        a = dense([1.0, 2.0, 3.0])
        b = DenseSeries(key=keys_for(2)[1], first_year=2000, values=np.array([1.0, 2.0, 3.0]))
        assert pairwise_distances([a, b]).d[0, 1] == 0.0

    def test_three_series(self):
        ks = keys_for(3)
        series = [
            DenseSeries(key=ks[0], first_year=2000, values=np.array([1.0, 1.0, 1.0])),
            DenseSeries(key=ks[1], first_year=2000, values=np.array([1.0, 1.0, 1.0])),
            DenseSeries(key=ks[2], first_year=2000, values=np.array([4.0, 1.0, 1.0])),
        ]
        d = pairwise_distances(series).d
        assert d[0, 1] == 0.0
        assert d[0, 2] == 3.0
        assert d[1, 2] == 3.0

    def test_span_mismatch(self):
        a = dense([1.0, 2.0])
        b = DenseSeries(key=keys_for(2)[1], first_year=2001, values=np.array([1.0, 2.0]))
        with pytest.raises(SpanMismatch):
            pairwise_distances([a, b])

    def test_metric_axioms(self):
        rng = np.random.default_rng(11)
        ks = keys_for(12)
        series = [
            DenseSeries(key=ks[i], first_year=1989, values=rng.uniform(0, 5, size=25))
            for i in range(12)
        ]
        d = pairwise_distances(series).d
        assert np.array_equal(d, d.T)
        assert np.all(np.diagonal(d) == 0.0)
        n = d.shape[0]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    assert d[i, j] <= d[i, k] + d[k, j] + 1e-9


class TestDistanceMatrix:
    def test_rejects_asymmetry(self):
        d = np.array([[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(ValueError):
            dmatrix(d)

    def test_rejects_nonzero_diagonal(self):
        d = np.array([[0.5, 1.0], [1.0, 0.0]])
        with pytest.raises(ValueError):
            dmatrix(d)

    def test_rejects_non_finite(self):
        d = np.array([[0.0, np.nan], [np.nan, 0.0]])
        with pytest.raises(NonFiniteInput):
            dmatrix(d)


class TestClassicalMds:
    def test_equilateral_triangle(self):
        d = np.ones((3, 3)) - np.eye(3)
        emb = classical_mds(dmatrix(d))
        rec = reproduced(emb.coords)
        iu = np.triu_indices(3, 1)
        np.testing.assert_allclose(rec[iu], 1.0, atol=1e-9)

    def test_collinear_points(self):
        positions = np.array([0.0, 1.0, 3.0])
        d = np.abs(positions[:, None] - positions[None, :])
        emb = classical_mds(dmatrix(d))
        rec = reproduced(emb.coords)
        np.testing.assert_allclose(rec, d, atol=1e-9)
        assert np.all(np.abs(emb.coords[:, 1]) < 1e-9)

    def test_random_planar_recovery(self):
        rng = np.random.default_rng(42)
        pts = random_planar_points(rng, 50)
        d = exact_distances(pts)
        emb = classical_mds(dmatrix(d))
        rec = reproduced(emb.coords)
        iu = np.triu_indices(50, 1)
        rel = np.abs(rec[iu] - d[iu]) / d[iu]
        assert rel.max() < 1e-6

    def test_too_few_points(self):
        with pytest.raises(TooFewPoints):
            classical_mds(dmatrix(np.zeros((2, 2))))

    def test_centroid_at_origin(self):
        rng = np.random.default_rng(1)
        d = exact_distances(random_planar_points(rng, 10))
        emb = classical_mds(dmatrix(d))
        np.testing.assert_allclose(emb.coords.mean(axis=0), 0.0, atol=1e-9)

    def test_sign_convention(self):
        rng = np.random.default_rng(2)
        d = exact_distances(random_planar_points(rng, 10))
        emb = classical_mds(dmatrix(d))
        for j in range(2):
            col = emb.coords[:, j]
            nonzero = np.nonzero(np.abs(col) > 1e-12 * np.abs(col).max())[0]
            assert col[nonzero[0]] >= 0

    def test_coincident_points_all_zero(self):
        emb = classical_mds(dmatrix(np.zeros((4, 4))))
        assert np.all(emb.coords == 0.0)
        assert emb.stress == 0.0


class TestStress:
    def test_single_pair_half(self):
        d = np.array([[0.0, 2.0], [2.0, 0.0]])
        coords = np.array([[0.0, 0.0], [1.0, 0.0]])
        assert stress(dmatrix(d), coords) == 0.5

    def test_exact_configuration_zero(self):
        rng = np.random.default_rng(3)
        pts = random_planar_points(rng, 20)
        d = exact_distances(pts)
        assert stress(dmatrix(d), pts) < 1e-12

    def test_coincident_points_total_misfit(self):
        d = np.array([[0.0, 1.0], [1.0, 0.0]])
        coords = np.zeros((2, 2))
        assert stress(dmatrix(d), coords) == 1.0

    def test_all_zero_targets_coincident(self):
        assert stress(dmatrix(np.zeros((3, 3))), np.zeros((3, 2))) == 0.0

    def test_rigid_motion_invariance(self):
        rng = np.random.default_rng(4)
        pts = random_planar_points(rng, 15)
        d = random_symmetric_distances(rng, 15)
        dm = dmatrix(d)
        base = stress(dm, pts)
        for _ in range(20):
            theta = rng.uniform(0, 2 * math.pi)
            rot = np.array(
                [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]]
            )
            shift = rng.uniform(-100, 100, size=2)
            moved = pts @ rot.T + shift
            assert abs(stress(dm, moved) - base) < 1e-9

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            stress(dmatrix(np.zeros((3, 3))), np.zeros((4, 2)))


class TestSmacof:
    def test_fixed_point_returns_immediately(self):
        rng = np.random.default_rng(5)
        pts = random_planar_points(rng, 12)
        d = exact_distances(pts)
        dm = dmatrix(d)
        init = classical_mds(dm)
        refined = smacof_refine(dm, init)
        assert refined.iterations <= 1
        assert refined.stress < 1e-10

    def test_monotone_trace_on_random_inputs(self):
        rng = np.random.default_rng(6)
        for _ in range(25):
            dm = dmatrix(random_symmetric_distances(rng, 15))
            init = Embedding(
                keys=dm.keys,
                coords=rng.normal(size=(15, 2)),
                stress=0.0,
                iterations=0,
            )
            refined = smacof_refine(dm, init, max_iter=200)
            trace = np.array(refined.stress_trace)
            assert np.all(np.diff(trace) <= 1e-12)
            assert refined.stress <= trace[0] + 1e-12

    def test_unit_square(self):
        corners = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
        d = exact_distances(corners)
        dm = dmatrix(d)
        refined = smacof_refine(dm, classical_mds(dm))
        rec = reproduced(refined.coords)
        np.testing.assert_allclose(rec, d, rtol=1e-6, atol=1e-9)

    def test_key_mismatch(self):
        dm = dmatrix(np.zeros((3, 3)))
        other = DistanceMatrix(keys=keys_for(4)[1:], d=np.zeros((3, 3)))
        init = classical_mds(other)
        with pytest.raises(DimensionMismatch):
            smacof_refine(dm, init)

    def test_tol_must_be_positive(self):
        dm = dmatrix(np.zeros((3, 3)))
        with pytest.raises(ValueError):
            smacof_refine(dm, classical_mds(dm), tol=0.0)


def test_planar_recovery_at_desk_scale():
    rng = np.random.default_rng(200)
    pts = random_planar_points(rng, 200)
    d = exact_distances(pts)
    emb = embed_distances(dmatrix(d))
    rec = reproduced(emb.coords)
    iu = np.triu_indices(200, 1)
    assert (np.abs(rec[iu] - d[iu]) / d[iu]).max() < 1e-6
    np.testing.assert_allclose(emb.coords.mean(axis=0), 0.0, atol=1e-9)


class TestDeterminism:
    def test_bit_identical_embeddings(self):
        rng = np.random.default_rng(12)
        d = random_symmetric_distances(rng, 30)
        dm = dmatrix(d)
        first = embed_distances(dm)
        second = embed_distances(DistanceMatrix(keys=dm.keys, d=d.copy()))
        assert first.coords.tobytes() == second.coords.tobytes()
        assert first.stress == second.stress
        assert first.iterations == second.iterations
