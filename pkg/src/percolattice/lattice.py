"""Deterministic structure of D-dimensional lattice supergraphs.

Nodes are identified with D-tuples (mixed-radix digits); two nodes are
linked when their tuples differ in exactly one position.  The expected
scaled adjacency matrix of the percolated model has at most 2^D distinct
eigenvalues, computed here in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from itertools import product

import numpy as np

# Dense materialization cap; beyond this only the edge stream is exposed.
DENSE_NODE_LIMIT = 10_000

# Node counts must stay addressable as signed 64-bit.
_NODE_COUNT_LIMIT = 2**63 - 1


class SizeLimitError(ValueError):
    """Requested dense materialization exceeds the configured size limit."""


@dataclass(frozen=True)
class LatticeSpec:
    """Lattice model parameters: per-dimension sizes and link probabilities."""

    dims: tuple[int, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(m) for m in self.dims))
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if len(self.dims) < 1:
            raise ValueError("lattice needs at least one dimension")
        if len(self.dims) != len(self.probs):
            raise ValueError(
                f"dims/probs length mismatch: {len(self.dims)} vs {len(self.probs)}"
            )
        if any(m < 2 for m in self.dims):
            raise ValueError(f"every dimension size must be >= 2, got {self.dims}")
        if any(not (0.0 < p <= 1.0) for p in self.probs):
            raise ValueError(f"every link probability must be in (0, 1], got {self.probs}")
        n = 1
        for m in self.dims:
            n *= m
            if n > _NODE_COUNT_LIMIT:
                raise ValueError(
                    f"node count {'x'.join(map(str, self.dims))} overflows 64-bit range"
                )

    @property
    def ndim(self) -> int:
        return len(self.dims)


@dataclass(frozen=True)
class ExpectedSpectrum:
    """Eigenvalues of the expected scaled adjacency, with multiplicities."""

    entries: tuple[tuple[float, int], ...]

    @property
    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.entries])

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([m for _, m in self.entries], dtype=np.int64)


def node_count(spec: LatticeSpec) -> int:
    """Total number of lattice nodes, prod of the dimension sizes."""
    return math.prod(spec.dims)


def decode_index(spec: LatticeSpec, x: int) -> tuple[int, ...]:
    """Mixed-radix digits of node x (1-based), first dimension fastest."""
    n = node_count(spec)
    if not 1 <= x <= n:
        raise ValueError(f"node index {x} outside 1..{n}")
    rem = x - 1
    digits = []
    for m in spec.dims:
        rem, d = divmod(rem, m)
        digits.append(d)
    return tuple(digits)


def encode_index(spec: LatticeSpec, digits) -> int:
    """Node index (1-based) from mixed-radix digits; inverse of decode_index."""
    digits = tuple(digits)
    if len(digits) != spec.ndim:
        raise ValueError(f"expected {spec.ndim} digits, got {len(digits)}")
    x = 0
    stride = 1
    for d, m in zip(digits, spec.dims):
        if not 0 <= d <= m - 1:
            raise ValueError(f"digit {d} outside 0..{m - 1}")
        x += d * stride
        stride *= m
    return x + 1


def are_adjacent(spec: LatticeSpec, i: int, j: int) -> bool:
    """True iff nodes i, j differ in exactly one mixed-radix digit."""
    bi = decode_index(spec, i)
    bj = decode_index(spec, j)
    return sum(a != b for a, b in zip(bi, bj)) == 1


def _complete_graph(m: int) -> np.ndarray:
    return np.ones((m, m)) - np.eye(m)


def _kron_chain(blocks) -> np.ndarray:
    # np.kron varies its right factor fastest; node indexing varies the
    # first lattice dimension fastest, so chain in reversed dimension order.
    return reduce(np.kron, reversed(list(blocks)))


def dimension_adjacency(spec: LatticeSpec, d: int) -> np.ndarray:
    """Adjacency restricted to links along lattice dimension d (0-based)."""
    n = node_count(spec)
    if n > DENSE_NODE_LIMIT:
        raise SizeLimitError(f"dense adjacency refused for N={n} > {DENSE_NODE_LIMIT}")
    blocks = [
        _complete_graph(m) if k == d else np.eye(m) for k, m in enumerate(spec.dims)
    ]
    return _kron_chain(blocks)


def lattice_adjacency(spec: LatticeSpec) -> np.ndarray:
    """Full supergraph adjacency as the Kronecker sum over dimensions."""
    return sum(dimension_adjacency(spec, d) for d in range(spec.ndim))


def supergraph_edges(spec: LatticeSpec) -> np.ndarray:
    """All supergraph links as an (E, 3) array of (i, j, dim), i < j, 1-based.

    Rows are sorted lexicographically by (i, j); this fixed order is the
    canonical edge enumeration used for reproducible sampling and export.
    """
    n = node_count(spec)
    nodes = np.arange(1, n + 1).reshape(spec.dims, order="F")
    rows_i, rows_j, rows_d = [], [], []
    for d, m in enumerate(spec.dims):
        for a in range(m):
            for b in range(a + 1, m):
                i = np.take(nodes, a, axis=d).ravel()
                j = np.take(nodes, b, axis=d).ravel()
                rows_i.append(i)
                rows_j.append(j)
                rows_d.append(np.full(i.shape, d, dtype=np.int64))
    i = np.concatenate(rows_i)
    j = np.concatenate(rows_j)
    dd = np.concatenate(rows_d)
    order = np.lexsort((j, i))
    return np.column_stack([i[order], j[order], dd[order]])


def expected_degree(spec: LatticeSpec) -> float:
    """Expected node degree gamma = sum_d p_d (M_d - 1)."""
    return float(sum(p * (m - 1) for p, m in zip(spec.probs, spec.dims)))


def branch_table(spec: LatticeSpec) -> tuple[np.ndarray, np.ndarray, list]:
    """Unmerged branch values b_j and multiplicities m_j over j in {0,1}^D.

    b_j = (1/gamma) sum_d p_d * (M_d - 1 if j_d = 0 else -1),
    m_j = prod_d (1 if j_d = 0 else M_d - 1).
    Returned in itertools.product order along with the index tuples.
    """
    gamma = expected_degree(spec)
    values, mults, index = [], [], []
    for j in product((0, 1), repeat=spec.ndim):
        b = sum(
            p * ((m - 1) if jd == 0 else -1)
            for p, m, jd in zip(spec.probs, spec.dims, j)
        ) / gamma
        mult = math.prod((1 if jd == 0 else m - 1) for m, jd in zip(spec.dims, j))
        values.append(b)
        mults.append(mult)
        index.append(j)
    return np.array(values), np.array(mults, dtype=np.int64), index


def expected_spectrum(spec: LatticeSpec) -> ExpectedSpectrum:
    """Exact spectrum of the expected scaled adjacency, duplicates merged."""
    values, mults, _ = branch_table(spec)
    merged: dict[float, int] = {}
    for v, m in zip(values, mults):
        merged[float(v)] = merged.get(float(v), 0) + int(m)
    entries = tuple(sorted(merged.items()))
    assert sum(m for _, m in entries) == node_count(spec)
    return ExpectedSpectrum(entries)


def expected_matrix(spec: LatticeSpec) -> np.ndarray:
    """Expected scaled adjacency B = (1/gamma) sum_d p_d A_d, dense."""
    gamma = expected_degree(spec)
    return sum(
        p * dimension_adjacency(spec, d) for d, p in enumerate(spec.probs)
    ) / gamma
