"""Deterministic scatter of symmetric local blocks into a sparse matrix.

scipy's COO-to-CSR conversion sums duplicate entries in an order that
depends on the input layout, so the entries of A[i, j] and A[j, i] can sum
in different orders and disagree in the last bit even when every local
block is exactly symmetric. Here duplicates are summed in an order fixed by
(row, col, block, unordered-local-pair): the accumulation sequences of a
transposed entry pair are then bitwise identical, and the assembled matrix
is symmetric in exact floating point.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


class ScatterPlan:
    """Canonical scatter with the index work precomputed.

    The constrained-dof mask, the duplicate ordering, and the deduplicated
    entry list depend only on the block structure, so assemblies that reuse
    one mesh with fresh values (a fixed-point loop, a time loop) can pay for
    the sort once. apply(vals) returns exactly what scatter_symmetric
    returns for the same index arrays and values.
    """

    def __init__(self, rows, cols, block, pair, ndof, free=None):
        if free is not None:
            keep = free[rows] & free[cols]
            rows, cols, block, pair = (x[keep]
                                       for x in (rows, cols, block, pair))
            src = np.flatnonzero(keep)
        else:
            src = None
        order = np.lexsort((pair, block, cols, rows))
        rows, cols = rows[order], cols[order]
        if len(rows):
            key = rows.astype(np.int64) * ndof + cols
            starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
        else:
            starts = np.empty(0, dtype=np.int64)
        self.ndof = ndof
        self._take = order if src is None else src[order]
        self._starts = starts
        self._rows = rows[starts]
        self._cols = cols[starts]

    def apply(self, vals):
        """Assemble one CSR matrix from flattened local block values."""
        vals = vals[self._take]
        summed = (np.add.reduceat(vals, self._starts)
                  if len(self._starts) else vals)
        A = sp.csr_matrix((summed, (self._rows, self._cols)),
                          shape=(self.ndof, self.ndof))
        A.eliminate_zeros()
        return A


def scatter_symmetric(rows, cols, vals, block, pair, ndof, free=None):
    """Sum duplicate (row, col) contributions in a canonical order.

    rows/cols/vals are the flattened local blocks; block identifies the
    block each entry came from and pair its unordered local index pair.
    Local blocks must already be exactly symmetric. free, when given, masks
    entries touching constrained dofs before summation.
    """
    return ScatterPlan(rows, cols, block, pair, ndof, free).apply(vals)


def block_scatter_indices(n_blocks, block_size, dof_map):
    """Row/col/block/pair index arrays for (n_blocks, block_size, block_size)
    local matrices with global dofs dof_map (n_blocks, block_size)."""
    shape = (n_blocks, block_size, block_size)
    rows = np.broadcast_to(dof_map[:, :, None], shape).ravel()
    cols = np.broadcast_to(dof_map[:, None, :], shape).ravel()
    block = np.repeat(np.arange(n_blocks, dtype=np.int64), block_size * block_size)
    a = np.tile(np.repeat(np.arange(block_size), block_size), n_blocks)
    b = np.tile(np.tile(np.arange(block_size), block_size), n_blocks)
    pair = np.minimum(a, b) * block_size + np.maximum(a, b)
    return rows, cols, block, pair
