import numpy as np


class DisjointSet:
    """Union-find over integer ids 0..N-1 with path compression and union by size."""

    def __init__(self, size: int):
        self._parent = np.arange(size, dtype=np.int64)
        self._size = np.ones(size, dtype=np.int64)
        self.sets = size

    def __len__(self):
        return len(self._parent)

    def find(self, x: int) -> int:
        root = x
        while root != self._parent[root]:
            root = self._parent[root]
        # path compression
        while x != root:
            nxt = self._parent[x]
            self._parent[x] = root
            x = nxt
        return int(root)

    def union(self, x: int, y: int) -> int:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return rx
        if self._size[rx] < self._size[ry]:
            rx, ry = ry, rx
        self._parent[ry] = rx
        self._size[rx] += self._size[ry]
        self.sets -= 1
        return rx

    def roots(self) -> np.ndarray:
        """Root of every id, fully compressed."""
        return np.array([self.find(i) for i in range(len(self._parent))], dtype=np.int64)
