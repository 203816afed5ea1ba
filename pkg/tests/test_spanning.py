from __future__ import annotations

import itertools

import numpy as np
import pytest

from krnn import (
    Instance,
    InvalidInstanceError,
    PreconditionError,
    RootedTree,
    SpanningTree,
    Tour,
    prim_mst,
    random_instance,
    tour_spanning_trees,
    tree4,
)


def exhaustive_mst_weight(inst):
    """Minimum spanning-tree weight by trying every (n-1)-edge subset."""
    n = inst.n
    all_edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    best = None
    for subset in itertools.combinations(all_edges, n - 1):
        try:
            tree = SpanningTree.from_edges(inst, subset)
        except InvalidInstanceError:
            continue
        if best is None or tree.total_weight < best:
            best = tree.total_weight
    return best


class TestSpanningTreeType:
    def test_from_edges_canonicalizes(self, square):
        tree = SpanningTree.from_edges(square, [(1, 0), (2, 1), (3, 2)])
        assert tree.edges == ((0, 1), (1, 2), (2, 3))
        assert tree.total_weight == 3.0
        assert tree.degree == (1, 2, 2, 1)
        assert tree.max_degree == 2

    def test_rejects_cycle(self, square):
        with pytest.raises(InvalidInstanceError):
            SpanningTree.from_edges(square, [(0, 1), (1, 2), (0, 2)])

    def test_rejects_wrong_count(self, square):
        with pytest.raises(InvalidInstanceError):
            SpanningTree.from_edges(square, [(0, 1), (1, 2)])

    def test_rejects_duplicate_edge(self, square):
        with pytest.raises(InvalidInstanceError):
            SpanningTree.from_edges(square, [(0, 1), (1, 0), (2, 3)])

    def test_rejects_disconnected(self):
        inst = random_instance("arbitrary-nonnegative", 5, 0)
        # right edge count, but a cycle on one side and an island on the other
        with pytest.raises(InvalidInstanceError):
            SpanningTree.from_edges(inst, [(0, 1), (1, 2), (0, 2), (3, 4)])


class TestRootedTree:
    def test_orientation(self, square):
        tree = SpanningTree.from_edges(square, [(0, 1), (1, 2), (2, 3)])
        rooted = RootedTree.from_tree(tree, 0)
        assert rooted.root == 0
        assert rooted.parent == (-1, 0, 1, 2)
        assert rooted.children == ((1,), (2,), (3,), ())

    def test_star_children_sorted(self):
        n = 5
        W = np.full((n, n), 2, dtype=np.int64)
        W[0, 1:] = W[1:, 0] = 1
        np.fill_diagonal(W, 0)
        inst = Instance.from_matrix("star", W)
        tree = SpanningTree.from_edges(inst, [(0, v) for v in (4, 2, 3, 1)])
        rooted = RootedTree.from_tree(tree, 0)
        assert rooted.children[0] == (1, 2, 3, 4)
        assert all(rooted.parent[v] == 0 for v in range(1, 5))

    def test_every_nonroot_has_parent(self):
        inst = random_instance("euclidean-uniform", 12, 3)
        tree = prim_mst(inst)
        rooted = RootedTree.from_tree(tree, 5)
        assert rooted.parent[5] == -1
        assert all(p >= 0 for v, p in enumerate(rooted.parent) if v != 5)
        # child lists and parent pointers describe the same edges
        pairs = {(min(v, p), max(v, p)) for v, p in enumerate(rooted.parent) if p >= 0}
        assert pairs == set(tree.edges)


class TestPrimMst:
    def test_square(self, square):
        assert prim_mst(square).total_weight == 3.0

    def test_matches_exhaustive_weight(self):
        for kind in ("euclidean-uniform", "arbitrary-nonnegative"):
            for seed in range(3):
                inst = random_instance(kind, 6, seed)
                assert prim_mst(inst).total_weight == exhaustive_mst_weight(inst)

    def test_cycle_property(self):
        # every non-tree edge is at least as heavy as every edge on the
        # tree path it would close
        inst = random_instance("euclidean-uniform", 15, 9)
        tree = prim_mst(inst)
        adj = {v: [] for v in range(inst.n)}
        for u, v in tree.edges:
            adj[u].append(v)
            adj[v].append(u)

        def tree_path(a, b):
            prev = {a: None}
            stack = [a]
            while stack:
                u = stack.pop()
                if u == b:
                    break
                for w in adj[u]:
                    if w not in prev:
                        prev[w] = u
                        stack.append(w)
            path = []
            while b != a:
                path.append((min(b, prev[b]), max(b, prev[b])))
                b = prev[b]
            return path

        tree_edges = set(tree.edges)
        for u in range(inst.n):
            for v in range(u + 1, inst.n):
                if (u, v) in tree_edges:
                    continue
                for e in tree_path(u, v):
                    assert inst.dist(*e) <= inst.dist(u, v)

    def test_collinear_points_chain(self):
        pts = [(float(i), 0.0) for i in range(6)]
        inst = Instance.from_points("line", pts)
        tree = prim_mst(inst)
        assert tree.edges == tuple((i, i + 1) for i in range(5))
        assert tree.total_weight == 5.0


class TestTree4:
    def test_square(self, square):
        mst = prim_mst(square)
        out = tree4(square, mst)
        assert out.max_degree <= 4
        assert out.total_weight <= 1.25 * mst.total_weight

    def test_star_instance_rewired(self):
        # 6-point star: the MST is a degree-5 hub, which TREE-4 must break up
        pts = [(0.0, 0.0)]
        for i in range(5):
            a = 2 * np.pi * i / 5
            pts.append((np.cos(a), np.sin(a)))
        inst = Instance.from_points("star6", pts)
        mst = prim_mst(inst)
        assert mst.max_degree == 5
        out = tree4(inst, mst)
        assert out.max_degree <= 4
        assert out.total_weight <= 1.25 * mst.total_weight

    def test_path_mst_unchanged(self):
        pts = [(float(i), 0.0) for i in range(7)]
        inst = Instance.from_points("line", pts)
        mst = prim_mst(inst)
        out = tree4(inst, mst)
        assert out.edges == mst.edges

    def test_euclidean_weight_bound(self):
        for seed in range(25):
            inst = random_instance("euclidean-uniform", 20, seed)
            mst = prim_mst(inst)
            out = tree4(inst, mst)
            assert out.max_degree <= 4
            assert out.total_weight <= 1.25 * mst.total_weight

    def test_degree6_hub_reduced_by_equal_weight_swap(self):
        # hub-and-ring with spokes and ring edges of equal weight: Prim
        # builds a degree-6 hub, and an equal-weight rotation onto a
        # ring edge brings it back into TREE-4's input range
        n = 7
        W = np.full((n, n), 5, dtype=np.int64)
        W[0, 1:] = W[1:, 0] = 2
        for i in range(1, 7):
            j = 1 + i % 6
            W[i, j] = W[j, i] = 2
        np.fill_diagonal(W, 0)
        inst = Instance.from_matrix("ring7", W)
        mst = prim_mst(inst)
        assert mst.max_degree == 6
        out = tree4(inst, mst)
        assert out.max_degree <= 4

    def test_unswappable_high_degree_star_refused(self):
        # center at 1 from seven leaves that are 10 apart: the MST is a
        # unique degree-7 star with no equal-weight alternative
        n = 8
        W = np.full((n, n), 10, dtype=np.int64)
        W[0, :] = W[:, 0] = 1
        np.fill_diagonal(W, 0)
        inst = Instance.from_matrix("star8", W)
        mst = prim_mst(inst)
        assert mst.max_degree == 7
        with pytest.raises(PreconditionError):
            tree4(inst, mst)

    def test_tie_degenerate_matrix_still_reduces(self):
        # all-equal weights: every spanning tree is minimum, so swaps
        # can always push the degree down
        n = 10
        W = np.ones((n, n), dtype=np.int64)
        np.fill_diagonal(W, 0)
        inst = Instance.from_matrix("uniform10", W)
        mst = prim_mst(inst)
        assert mst.max_degree == n - 1
        out = tree4(inst, mst)
        assert out.max_degree <= 4
        assert out.total_weight == n - 1

    def test_result_spans_all_vertices(self):
        inst = random_instance("euclidean-uniform", 30, 1)
        out = tree4(inst, prim_mst(inst))
        # from_edges already validated tree-ness; double-check the count
        assert len(out.edges) == inst.n - 1
        assert out.n == inst.n


class TestTourTrees:
    def test_square_tour_trees(self, square):
        tour = Tour.from_order(square, [0, 1, 2, 3])
        trees = tour_spanning_trees(square, tour)
        assert len(trees) == 4
        # dropping edge i leaves the tour weight minus that edge
        for i, tree in enumerate(trees):
            u, v = tour.order[i], tour.order[(i + 1) % 4]
            assert tree.total_weight == tour.cost - square.dist(u, v)
            assert tree.max_degree == 2

    def test_weight_identity_integer(self):
        inst = random_instance("arbitrary-nonnegative", 9, 12)
        tour = Tour.from_order(inst, list(range(9)))
        trees = tour_spanning_trees(inst, tour)
        # the n trees together omit each edge exactly once
        assert sum(t.total_weight for t in trees) == (inst.n - 1) * tour.cost

    def test_trees_are_paths(self):
        inst = random_instance("euclidean-uniform", 8, 2)
        tour = Tour.from_order(inst, [3, 1, 4, 0, 7, 6, 2, 5])
        for tree in tour_spanning_trees(inst, tour):
            assert tree.max_degree == 2
            assert sorted(tree.degree).count(1) == 2
