import numpy as np
import pytest

from gpkn.core import KSet, ResourceCapError
from gpkn.kneser import (
    KneserParams,
    KneserUniverse,
    MatrixCache,
    adjacent,
    all_pairs_distances,
    diam3_threshold,
    diameter,
    distance_closed_form_2k1,
)


class TestParams:
    def test_rejects_disconnected_regime(self):
        with pytest.raises(ValueError):
            KneserParams(4, 2)
        KneserParams(5, 2)

    def test_order(self):
        assert KneserParams(10, 4).order == 210


class TestAdjacent:
    def test_examples(self):
        a = KSet.from_elements([1, 2], 5)
        b = KSet.from_elements([3, 4], 5)
        c = KSet.from_elements([2, 3], 5)
        assert adjacent(a, b)
        assert not adjacent(a, c)
        assert not adjacent(a, a)

    def test_mismatched_parameters(self):
        with pytest.raises(ValueError):
            adjacent(KSet.from_elements([1, 2], 5), KSet.from_elements([1, 2], 6))


class TestClosedForm:
    def test_examples(self):
        assert distance_closed_form_2k1(2, 1) == 2
        assert distance_closed_form_2k1(2, 0) == 1
        assert distance_closed_form_2k1(5, 2) == 5

    def test_range_error(self):
        with pytest.raises(ValueError):
            distance_closed_form_2k1(3, 4)
        with pytest.raises(ValueError):
            distance_closed_form_2k1(3, -1)


class TestAllPairs:
    def test_petersen(self, cache):
        dm = cache.get(KneserParams(5, 2))
        assert dm.order == 10
        assert dm.max_distance() == 2

    def test_kn73_kn94(self, cache):
        assert cache.get(KneserParams(7, 3)).max_distance() == 3
        assert cache.get(KneserParams(9, 4)).max_distance() == 4

    def test_metric_axioms(self, cache):
        for n, k in ((5, 2), (7, 3), (6, 2)):
            d = cache.get(KneserParams(n, k)).d.astype(np.int32)
            assert (np.diag(d) == 0).all()
            assert (d == d.T).all()
            v = d.shape[0]
            for mid in range(v):
                assert (d <= d[:, mid][:, None] + d[mid, :][None, :]).all()

    def test_adjacency_iff_distance_one(self, cache):
        p = KneserParams(6, 2)
        dm = cache.get(p)
        uni = KneserUniverse(p)
        for i in range(p.order):
            for j in range(p.order):
                expect = i != j and adjacent(uni.vertex(i), uni.vertex(j))
                assert (dm.dist(i, j) == 1) == expect

    def test_cap(self):
        with pytest.raises(ResourceCapError):
            all_pairs_distances(KneserParams(20, 6), cap=1000)

    def test_closed_form_matches_bfs_small(self, cache):
        for k in (2, 3):
            p = KneserParams(2 * k + 1, k)
            dm = cache.get(p)
            uni = KneserUniverse(p)
            for i in range(p.order):
                for j in range(p.order):
                    s = uni.vertex(i).intersection_size(uni.vertex(j))
                    want = 0 if i == j else distance_closed_form_2k1(k, s)
                    assert dm.dist(i, j) == want


class TestUniverse:
    def test_neighbor_ranks_match_definition(self):
        p = KneserParams(7, 3)
        uni = KneserUniverse(p)
        for v in (0, 5, 17, 34):
            mask = uni.masks[v]
            expected = sorted(r for r, m in enumerate(uni.masks) if m & mask == 0)
            got = sorted(uni.neighbor_ranks(v).tolist())
            assert got == expected

    def test_single_source_matches_matrix(self, cache):
        for n, k in ((5, 2), (7, 3), (9, 4)):
            p = KneserParams(n, k)
            dm = cache.get(p)
            uni = KneserUniverse(p)
            for src in (0, p.order // 2, p.order - 1):
                row = uni.bfs_distances(src)
                assert (row == dm.d[src]).all()


class TestDiameter:
    def test_examples(self, cache):
        assert diameter(KneserParams(5, 2), cache) == 2
        assert diameter(KneserParams(7, 3), cache) == 3
        assert diameter(KneserParams(9, 4), cache) == 4

    def test_single_source_equals_matrix_max(self, cache):
        # the vertex-transitivity shortcut agrees with the full matrix
        for n, k in ((6, 2), (8, 3), (10, 4), (11, 5)):
            p = KneserParams(n, k)
            assert diameter(p) == cache.get(p).max_distance()

    def test_cap(self):
        with pytest.raises(ResourceCapError):
            diameter(KneserParams(20, 6), cap=100)


class TestThreshold:
    def test_examples(self):
        assert diam3_threshold(4) == 10
        assert diam3_threshold(6, verify=False) == 15
        assert diam3_threshold(2) == 5

    def test_verification_runs(self):
        # k=5: threshold 12, and Kn_{11,5} must have diameter > 3
        assert diam3_threshold(5) == 12

    def test_k_range(self):
        with pytest.raises(ValueError):
            diam3_threshold(1)


class TestCacheFile:
    def test_round_trip_and_layout(self, tmp_path):
        c = MatrixCache(tmp_path)
        p = KneserParams(5, 2)
        dm = c.get(p)
        path = tmp_path / "kn-5-2.gpkn"
        blob = path.read_bytes()
        assert blob[:5] == b"GPKN1"
        assert blob[5:9] == (5).to_bytes(2, "little") + (2).to_bytes(2, "little")
        assert len(blob) == 5 + 4 + 100
        fresh = MatrixCache(tmp_path)
        dm2 = fresh.get(p)
        assert (dm2.d == dm.d).all()

    def test_corrupt_cache_recomputed(self, tmp_path):
        c = MatrixCache(tmp_path)
        p = KneserParams(5, 2)
        c.get(p)
        (tmp_path / "kn-5-2.gpkn").write_bytes(b"GPKN1junk")
        fresh = MatrixCache(tmp_path)
        dm = fresh.get(p)
        assert dm.max_distance() == 2
        assert len((tmp_path / "kn-5-2.gpkn").read_bytes()) == 109
