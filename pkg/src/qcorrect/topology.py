"""Chimera qubit graphs: construction, broken-element masks, chain extraction.

A Chimera graph is a rows x cols grid of complete-bipartite K(shore, shore)
unit cells.  Within a cell the two shores (side 0 and side 1) are fully
connected to each other.  Side-0 qubits additionally couple to the side-0
qubit at the same offset in the vertically adjacent cells, and side-1 qubits
to the matching side-1 qubits in the horizontally adjacent cells.

Qubit ids are assigned row-major over cells, side-major within a cell:

    id(r, c, side, k) = ((r * cols) + c) * 2 * shore + side * shore + k
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ChimeraTopology",
    "build_chimera",
    "apply_mask",
    "chain_subgraph",
    "coupler_count",
    "read_mask_file",
    "write_mask_file",
]


def coupler_count(rows: int, cols: int, shore: int) -> int:
    """Closed-form coupler count of an unmasked Chimera graph."""
    intra = rows * cols * shore * shore
    vertical = (rows - 1) * cols * shore
    horizontal = rows * (cols - 1) * shore
    return intra + vertical + horizontal


class ChimeraTopology:
    """Immutable qubit/coupler graph, optionally tagged with grid metadata.

    Attributes:
        rows, cols, shore: cell-grid dimensions, or None for graphs built
            from explicit qubit/coupler lists (e.g. loaded from a file).
        active_qubits: sorted int64 array of qubit ids.
        couplers: (m, 2) int64 array of id pairs, each row (low, high),
            sorted lexicographically.  Every coupler joins two distinct
            active qubits.
        adjacency: dict mapping qubit id to a tuple of
            (neighbor id, coupler index) pairs, symmetric by construction.

    Coefficient and spin vectors elsewhere in the package are indexed by
    position in ``active_qubits`` (ascending id order).
    """

    def __init__(
        self,
        active_qubits,
        couplers,
        rows: int | None = None,
        cols: int | None = None,
        shore: int | None = None,
    ):
        qubits = np.asarray(sorted(int(q) for q in active_qubits), dtype=np.int64)
        if qubits.size and qubits.min() < 0:
            raise ValueError("qubit ids must be non-negative")
        if np.unique(qubits).size != qubits.size:
            raise ValueError("duplicate qubit ids")

        pairs = []
        for i, j in couplers:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"coupler ({i},{j}) joins a qubit to itself")
            pairs.append((min(i, j), max(i, j)))
        if len(set(pairs)) != len(pairs):
            raise ValueError("duplicate couplers")
        pairs.sort()
        edges = np.array(pairs, dtype=np.int64).reshape(len(pairs), 2)

        self.rows = rows
        self.cols = cols
        self.shore = shore
        self.active_qubits = qubits
        self.couplers = edges
        self._position = {int(q): p for p, q in enumerate(qubits)}
        for i, j in pairs:
            if i not in self._position or j not in self._position:
                missing = i if i not in self._position else j
                raise ValueError(f"coupler references inactive qubit id {missing}")

        n, m = qubits.size, edges.shape[0]
        # endpoint positions per coupler, then CSR adjacency over positions
        self.coupler_positions = np.empty((m, 2), dtype=np.int64)
        for k in range(m):
            self.coupler_positions[k, 0] = self._position[int(edges[k, 0])]
            self.coupler_positions[k, 1] = self._position[int(edges[k, 1])]

        counts = np.zeros(n, dtype=np.int64)
        for k in range(m):
            counts[self.coupler_positions[k, 0]] += 1
            counts[self.coupler_positions[k, 1]] += 1
        self.adj_offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=self.adj_offsets[1:])
        self.adj_neighbor_pos = np.empty(2 * m, dtype=np.int64)
        self.adj_coupler_index = np.empty(2 * m, dtype=np.int64)
        cursor = self.adj_offsets[:-1].copy()
        for k in range(m):
            pi, pj = self.coupler_positions[k]
            self.adj_neighbor_pos[cursor[pi]] = pj
            self.adj_coupler_index[cursor[pi]] = k
            cursor[pi] += 1
            self.adj_neighbor_pos[cursor[pj]] = pi
            self.adj_coupler_index[cursor[pj]] = k
            cursor[pj] += 1

        adjacency: dict[int, list[tuple[int, int]]] = {int(q): [] for q in qubits}
        for k, (i, j) in enumerate(edges):
            adjacency[int(i)].append((int(j), k))
            adjacency[int(j)].append((int(i), k))
        self.adjacency = {q: tuple(v) for q, v in adjacency.items()}

        for arr in (self.active_qubits, self.couplers, self.coupler_positions,
                    self.adj_offsets, self.adj_neighbor_pos, self.adj_coupler_index):
            arr.setflags(write=False)

    @property
    def num_qubits(self) -> int:
        return int(self.active_qubits.size)

    @property
    def num_couplers(self) -> int:
        return int(self.couplers.shape[0])

    def position_of(self, qubit_id: int) -> int:
        """Index of a qubit id within the active ordering; raises on unknown ids."""
        try:
            return self._position[int(qubit_id)]
        except KeyError:
            raise ValueError(f"qubit id {qubit_id} is not active") from None

    def has_qubit(self, qubit_id: int) -> bool:
        return int(qubit_id) in self._position

    def grid_size(self) -> int | None:
        """Total qubit count of the unmasked grid, or None without metadata."""
        if self.rows is None or self.cols is None or self.shore is None:
            return None
        return self.rows * self.cols * 2 * self.shore

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChimeraTopology):
            return NotImplemented
        return (
            (self.rows, self.cols, self.shore) == (other.rows, other.cols, other.shore)
            and np.array_equal(self.active_qubits, other.active_qubits)
            and np.array_equal(self.couplers, other.couplers)
        )

    def __repr__(self) -> str:
        grid = ""
        if self.rows is not None:
            grid = f" grid={self.rows}x{self.cols}x{self.shore}"
        return (
            f"ChimeraTopology({self.num_qubits} qubits, "
            f"{self.num_couplers} couplers{grid})"
        )


def build_chimera(rows: int, cols: int, shore: int = 4) -> ChimeraTopology:
    """Construct the full Chimera graph for a rows x cols grid of cells.

    Raises ValueError on zero or negative dimensions.
    """
    if rows < 1 or cols < 1 or shore < 1:
        raise ValueError(
            f"grid dimensions must be positive, got rows={rows} cols={cols} shore={shore}"
        )

    def qid(r: int, c: int, side: int, k: int) -> int:
        return ((r * cols) + c) * 2 * shore + side * shore + k

    qubits = range(rows * cols * 2 * shore)
    edges = []
    for r in range(rows):
        for c in range(cols):
            for ka in range(shore):
                for kb in range(shore):
                    edges.append((qid(r, c, 0, ka), qid(r, c, 1, kb)))
            if r + 1 < rows:
                for k in range(shore):
                    edges.append((qid(r, c, 0, k), qid(r + 1, c, 0, k)))
            if c + 1 < cols:
                for k in range(shore):
                    edges.append((qid(r, c, 1, k), qid(r, c + 1, 1, k)))
    return ChimeraTopology(qubits, edges, rows=rows, cols=cols, shore=shore)


def apply_mask(
    topo: ChimeraTopology,
    dead_qubits=(),
    dead_couplers=(),
) -> ChimeraTopology:
    """Remove broken qubits and couplers, returning a new topology.

    Masked qubits are dropped along with every coupler incident to them;
    explicitly masked couplers are dropped as well.  A qubit or coupler that
    is valid for the underlying grid but already absent is ignored, which
    makes masking idempotent.  Ids outside the grid (or, for graphs without
    grid metadata, ids that are not active) are rejected by name.
    """
    grid_size = topo.grid_size()

    def check_id(q: int) -> int:
        q = int(q)
        if grid_size is not None:
            if not (0 <= q < grid_size):
                raise ValueError(f"unknown qubit id {q}")
        elif not topo.has_qubit(q):
            raise ValueError(f"unknown qubit id {q}")
        return q

    dead_q = {check_id(q) for q in dead_qubits}
    dead_c = set()
    for i, j in dead_couplers:
        i, j = check_id(i), check_id(j)
        if i == j:
            raise ValueError(f"unknown coupler ({i},{j})")
        dead_c.add((min(i, j), max(i, j)))

    keep_qubits = [int(q) for q in topo.active_qubits if int(q) not in dead_q]
    keep_edges = [
        (int(i), int(j))
        for i, j in topo.couplers
        if int(i) not in dead_q and int(j) not in dead_q and (int(i), int(j)) not in dead_c
    ]
    return ChimeraTopology(
        keep_qubits, keep_edges, rows=topo.rows, cols=topo.cols, shore=topo.shore
    )


def chain_subgraph(topo: ChimeraTopology, length: int) -> ChimeraTopology:
    """Extract the lexicographically first induced path of `length` qubits.

    The returned topology has exactly `length` qubits and `length - 1`
    couplers: the path is chordless, so inducing on its vertex set yields
    the path edges only.  Raises ValueError when no such path exists.
    """
    if length < 1:
        raise ValueError(f"chain length must be positive, got {length}")
    if length > topo.num_qubits:
        raise ValueError(
            f"no induced path of {length} qubits in a {topo.num_qubits}-qubit graph"
        )

    neighbors = {
        int(q): sorted(j for j, _ in topo.adjacency[int(q)])
        for q in topo.active_qubits
    }

    def search_from(start: int) -> list[int] | None:
        # depth-first over chordless extensions, smallest neighbor first
        path = [start]
        in_path = {start}
        pending = [iter(neighbors[start])]
        while pending:
            if len(path) == length:
                return path
            advanced = False
            for nxt in pending[-1]:
                if nxt in in_path:
                    continue
                if any(p in in_path and p != path[-1] for p in neighbors[nxt]):
                    continue
                path.append(nxt)
                in_path.add(nxt)
                pending.append(iter(neighbors[nxt]))
                advanced = True
                break
            if not advanced:
                pending.pop()
                in_path.remove(path.pop())
        return None

    for start in topo.active_qubits:
        found = search_from(int(start))
        if found is not None:
            edges = [(found[i], found[i + 1]) for i in range(length - 1)]
            return ChimeraTopology(
                found, edges, rows=topo.rows, cols=topo.cols, shore=topo.shore
            )
    raise ValueError(f"no induced path of {length} qubits exists")


def read_mask_file(path) -> tuple[set[int], set[tuple[int, int]]]:
    """Parse a broken-element mask file.

    Format: one record per line, `q <id>` for a dead qubit or `c <id> <id>`
    for a dead coupler; `#` starts a comment; blank lines are ignored.
    """
    dead_qubits: set[int] = set()
    dead_couplers: set[tuple[int, int]] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "q" and len(parts) == 2:
                    dead_qubits.add(int(parts[1]))
                elif parts[0] == "c" and len(parts) == 3:
                    i, j = int(parts[1]), int(parts[2])
                    dead_couplers.add((min(i, j), max(i, j)))
                else:
                    raise ValueError
            except ValueError:
                raise ValueError(
                    f"{path}:{lineno}: expected 'q <id>' or 'c <id> <id>', got {line!r}"
                ) from None
    return dead_qubits, dead_couplers


def write_mask_file(path, dead_qubits=(), dead_couplers=()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for q in sorted(int(q) for q in dead_qubits):
            fh.write(f"q {q}\n")
        for i, j in sorted((min(int(i), int(j)), max(int(i), int(j)))
                           for i, j in dead_couplers):
            fh.write(f"c {i} {j}\n")
