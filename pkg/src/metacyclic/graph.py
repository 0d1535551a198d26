"""Adjacency matrix of the Cayley graph T(m, n, k) with generators x^{+-1}, y^{+-1}.

Two independent constructions are provided:

* :func:`build_bruteforce` multiplies every group element by each generator
  and places the edge through the packet labeling of :mod:`metacyclic.group`.
* :func:`build_structured` writes down the first block row directly: the
  m-cycle on the diagonal block and 0/1 diagonal blocks at the offsets
  ``+-k^(alpha - xi)``.

Both return a :class:`BlockAdjacency`; :func:`expand_dense` turns either into
an ``mn x mn`` 0/1 matrix so the two can be compared entrywise.
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, StructureError
from .group import GroupParams
from .kernels import bfs_two_coloring

MAX_DENSE_ORDER = 10**6

# generator codes used when tagging brute-force edges
GEN_X, GEN_X_INV, GEN_Y, GEN_Y_INV = 0, 1, 2, 3


class Representation(enum.Enum):
    STRUCTURED = "structured"
    DENSE = "dense"


@dataclass(frozen=True, eq=False)
class BlockAdjacency:
    params: GroupParams
    first_block_row: np.ndarray  # (n, m, m) uint8; block j sits at column offset j
    representation: Representation
    dense: np.ndarray | None = None

    def block(self, i: int, j: int) -> np.ndarray:
        """Block ``A_ij``; uses block-circulance ``A_ij = A_0,(j-i)``."""
        if self.dense is not None:
            m = self.params.m
            return self.dense[i * m:(i + 1) * m, j * m:(j + 1) * m]
        return self.first_block_row[(j - i) % self.params.n]


def cycle_adjacency(m: int) -> np.ndarray:
    c = np.zeros((m, m), dtype=np.uint8)
    r = np.arange(m)
    c[r, (r + 1) % m] = 1
    c[(r + 1) % m, r] = 1
    return c


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def label_elements(p: GroupParams) -> tuple[np.ndarray, np.ndarray]:
    """Group element ``(a, b)`` of every vertex index, as two arrays of length mn."""
    idx = np.arange(p.order)
    packet, pos = np.divmod(idx, p.m)
    xi = pos % p.alpha
    k_pow = np.array([pow(p.k, e, p.n) for e in range(p.alpha)], dtype=np.int64)
    return pos, (packet * k_pow[xi]) % p.n


def bruteforce_edges(p: GroupParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Directed edges ``g -> g s`` for every vertex and generator.

    Returns ``(src, dst, gen)`` index arrays; ``gen`` holds the GEN_* codes.
    """
    a, b = label_elements(p)
    index_of = np.full((p.m, p.n), -1, dtype=np.int64)
    index_of[a, b] = np.arange(p.order)
    if (index_of < 0).any():
        raise StructureError(f"packet labeling of {p} is not a bijection")

    k_pow_m = np.array([pow(p.k, c % p.m, p.n) for c in range(p.m)], dtype=np.int64)
    src, dst, gen = [], [], []
    # (x^a y^b)(x^c y^d) = x^(a+c) y^(b k^c + d)
    for code, (c, d) in enumerate([(1, 0), (p.m - 1, 0), (0, 1), (0, p.n - 1)]):
        a2 = (a + c) % p.m
        b2 = (b * k_pow_m[c] + d) % p.n
        src.append(np.arange(p.order))
        dst.append(index_of[a2, b2])
        gen.append(np.full(p.order, code))
    return np.concatenate(src), np.concatenate(dst), np.concatenate(gen)


def _check_order(p: GroupParams):
    if p.order > MAX_DENSE_ORDER:
        raise ParameterError("too-large", f"mn = {p.order} exceeds the dense limit {MAX_DENSE_ORDER}")


def build_bruteforce(p: GroupParams) -> BlockAdjacency:
    """Adjacency from the group law, in the packet ordering of the vertices."""
    _check_order(p)
    src, dst, _ = bruteforce_edges(p)
    counts = np.zeros((p.order, p.order), dtype=np.int32)
    np.add.at(counts, (src, dst), 1)
    if counts.max() > 1:
        raise StructureError(f"{p} has a repeated edge")
    dense = counts.astype(np.uint8)
    m = p.m
    first = dense[:m].reshape(m, p.n, m).transpose(1, 0, 2).copy()
    return BlockAdjacency(p, _frozen(first), Representation.DENSE, _frozen(dense))


def bruteforce_block_row(p: GroupParams) -> np.ndarray:
    """First block row read off the group-law edges, without a dense matrix.

    Every edge ``u -> v`` is mapped to (packet offset, row position, column
    position); the graph is block-circulant exactly when each pattern seen
    in packet 0 recurs once in every packet.
    """
    src, dst, _ = bruteforce_edges(p)
    m, n = p.m, p.n
    offset = (dst // m - src // m) % n
    key = (offset * m + src % m) * m + dst % m
    counts = np.bincount(key, minlength=n * m * m)
    if counts.max() > n:
        raise StructureError(f"{p} has a repeated edge")
    if not np.isin(counts, (0, n)).all():
        raise StructureError(f"{p}: group-law adjacency is not block-circulant")
    return (counts == n).astype(np.uint8).reshape(n, m, m)


def structured_offsets(p: GroupParams) -> list[tuple[int, np.ndarray]]:
    """``(offset j, diagonal positions)`` pairs of the off-diagonal blocks.

    Regular k: ``j = +-k^(alpha-xi)`` for ``0 <= xi < alpha`` with positions
    ``xi, xi+alpha, ...`` (t of them).  Irregular k: ``0 <= xi < alpha/2`` with
    positions ``xi, xi+alpha/2, ...`` (2t of them).
    """
    step = p.alpha if p.regular else p.alpha // 2
    out = []
    for xi in range(step):
        positions = np.arange(xi, p.m, step)
        base = pow(p.k, p.alpha - xi, p.n)
        out.append((base, positions))
        out.append(((-base) % p.n, positions))
    return out


def build_structured(p: GroupParams) -> BlockAdjacency:
    """First block row written down from the block-circulant structure."""
    first = np.zeros((p.n, p.m, p.m), dtype=np.uint8)
    first[0] = cycle_adjacency(p.m)
    for j, positions in structured_offsets(p):
        if j == 0:
            raise StructureError(f"offset 0 produced for {p}")
        diag = first[j, positions, positions]
        if diag.any():
            # union of two patterns must not reuse a slot (that would be a multi-edge)
            raise StructureError(f"diagonal slot of block {j} hit twice for {p}")
        first[j, positions, positions] = 1
    return BlockAdjacency(p, _frozen(first), Representation.STRUCTURED)


def expand_dense(block: BlockAdjacency) -> np.ndarray:
    """Materialize the full ``mn x mn`` 0/1 matrix."""
    p = block.params
    if block.dense is not None:
        return block.dense.copy()
    _check_order(p)
    n, m = p.n, p.m
    offset = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n  # offset[i, j] = j - i
    a4 = block.first_block_row[offset]  # (n, n, m, m) indexed [i, j, r, s]
    return np.ascontiguousarray(a4.transpose(0, 2, 1, 3).reshape(n * m, n * m))


def neighbor_table(block: BlockAdjacency) -> np.ndarray:
    """``(mn, 4)`` table of neighbours of every vertex."""
    p = block.params
    n, m = p.n, p.m
    if block.dense is not None:
        rows, cols = np.nonzero(block.dense)
        deg = np.bincount(rows, minlength=p.order)
        if (deg != 4).any():
            raise StructureError(f"{p}: dense adjacency is not 4-regular")
        return cols.reshape(p.order, 4).astype(np.int64)

    first = block.first_block_row
    if not (first[0] == cycle_adjacency(m)).all():
        raise StructureError("diagonal block is not the m-cycle")
    offs_j, offs_pos = np.nonzero(np.diagonal(first[1:], axis1=1, axis2=2))
    offs_j = offs_j + 1
    per_pos = np.bincount(offs_pos, minlength=m)
    if (per_pos != 2).any():
        raise StructureError(f"{p}: expected two y-neighbours per position, got {per_pos.tolist()}")
    order = np.argsort(offs_pos, kind="stable")
    y_offsets = offs_j[order].reshape(m, 2)  # y_offsets[pos] = the two packet offsets

    packet = np.repeat(np.arange(n), m)
    pos = np.tile(np.arange(m), n)
    table = np.empty((p.order, 4), dtype=np.int64)
    table[:, 0] = packet * m + (pos + 1) % m
    table[:, 1] = packet * m + (pos - 1) % m
    table[:, 2] = ((packet + y_offsets[pos, 0]) % n) * m + pos
    table[:, 3] = ((packet + y_offsets[pos, 1]) % n) * m + pos
    return table


def is_connected(block: BlockAdjacency) -> bool:
    reached, _ = bfs_two_coloring(neighbor_table(block))
    return reached == block.params.order


def is_bipartite(block: BlockAdjacency) -> bool:
    """BFS two-coloring verdict; a disconnected graph is an internal error."""
    reached, bipartite = bfs_two_coloring(neighbor_table(block))
    if reached != block.params.order:
        raise StructureError(f"{block.params} is disconnected ({reached} of {block.params.order} reached)")
    return bipartite


def edge_list(block: BlockAdjacency) -> np.ndarray:
    """Undirected edges as a sorted ``(E, 2)`` array with ``u < v``."""
    table = neighbor_table(block)
    u = np.repeat(np.arange(table.shape[0]), table.shape[1])
    v = table.ravel()
    keep = u < v
    edges = np.unique(np.stack([u[keep], v[keep]], axis=1), axis=0)
    return edges


def write_matrix_market(block: BlockAdjacency, fh: io.TextIOBase):
    """Symmetric coordinate format, lower triangle, 1-based."""
    edges = edge_list(block)
    order = np.lexsort((edges[:, 0], edges[:, 1]))
    N = block.params.order
    fh.write("%%MatrixMarket matrix coordinate integer symmetric\n")
    fh.write(f"% Cayley graph T({block.params.m},{block.params.n},{block.params.k})\n")
    fh.write(f"{N} {N} {len(edges)}\n")
    for u, v in edges[order]:
        fh.write(f"{v + 1} {u + 1} 1\n")


def write_edge_csv(block: BlockAdjacency, fh: io.TextIOBase):
    fh.write("u,v\n")
    for u, v in edge_list(block):
        fh.write(f"{u},{v}\n")


def read_matrix_market(fh: io.TextIOBase) -> np.ndarray:
    """Dense 0/1 matrix from a file written by :func:`write_matrix_market`."""
    lines = [ln for ln in fh.read().splitlines() if ln and not ln.startswith("%")]
    rows, cols, nnz = (int(x) for x in lines[0].split())
    a = np.zeros((rows, cols), dtype=np.uint8)
    for ln in lines[1:1 + nnz]:
        i, j, val = (int(x) for x in ln.split())
        a[i - 1, j - 1] = val
        a[j - 1, i - 1] = val
    return a
