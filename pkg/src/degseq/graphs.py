"""Undirected simple graphs stored as dense boolean adjacency matrices."""
import numpy as np


class SimpleGraph:
    """Undirected simple graph on vertices ``0..n-1``.

    The adjacency matrix is copied, checked (symmetric, empty diagonal) and
    made read-only, so instances can be shared freely.
    """

    __slots__ = ("_adj", "_degrees")

    def __init__(self, adjacency):
        adj = np.array(adjacency, dtype=bool, copy=True)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {adj.shape}")
        if np.any(np.diag(adj)):
            raise ValueError("adjacency has self-loops")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency is not symmetric")
        adj.setflags(write=False)
        degrees = adj.sum(axis=1).astype(np.int64)
        degrees.setflags(write=False)
        self._adj = adj
        self._degrees = degrees

    @classmethod
    def from_edges(cls, n, edges):
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if adj[u, v]:
                raise ValueError(f"duplicate edge ({u}, {v})")
            adj[u, v] = adj[v, u] = True
        return cls(adj)

    @classmethod
    def empty(cls, n):
        return cls(np.zeros((n, n), dtype=bool))

    @property
    def n(self):
        return self._adj.shape[0]

    @property
    def adjacency(self):
        return self._adj

    @property
    def degrees(self):
        return self._degrees

    @property
    def num_edges(self):
        return int(self._degrees.sum()) // 2

    def edges(self):
        """Edges as ``(u, v)`` pairs with ``u < v``, in lexicographic order."""
        iu, ju = np.nonzero(np.triu(self._adj, k=1))
        return list(zip(iu.tolist(), ju.tolist()))

    def __eq__(self, other):
        if not isinstance(other, SimpleGraph):
            return NotImplemented
        return np.array_equal(self._adj, other._adj)

    def __hash__(self):
        return hash((self.n, self._adj.tobytes()))

    def __repr__(self):
        return f"SimpleGraph(n={self.n}, edges={self.num_edges})"
