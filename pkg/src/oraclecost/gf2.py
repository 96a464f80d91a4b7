"""GF(2) linear algebra on int bitsets (bit j of a row = coefficient of x_j)."""

from __future__ import annotations

__all__ = ["gf2_rank", "gf2_kernel_vector"]


def _reduced_pivots(rows: list[int]) -> dict[int, int]:
    """Fully reduced pivot rows, keyed by pivot column (highest set bit)."""
    pivots: dict[int, int] = {}
    for row in rows:
        for col, prow in pivots.items():
            if (row >> col) & 1:
                row ^= prow
        if row:
            col = row.bit_length() - 1
            for other in list(pivots):
                if (pivots[other] >> col) & 1:
                    pivots[other] ^= row
            pivots[col] = row
    return pivots


def gf2_rank(rows: list[int]) -> int:
    """Rank of the row set over GF(2)."""
    return len(_reduced_pivots(list(rows)))


def gf2_kernel_vector(rows: list[int], n_cols: int) -> int | None:
    """Some nonzero v in {0,1}^n_cols with row . v = 0 (mod 2) for every row.

    Returns None when the rows have full rank n_cols (trivial kernel).
    """
    pivots = _reduced_pivots(list(rows))
    if len(pivots) >= n_cols:
        return None
    free = next(c for c in range(n_cols) if c not in pivots)
    v = 1 << free
    for col, row in pivots.items():
        if (row >> free) & 1:
            v |= 1 << col
    assert all((row & v).bit_count() % 2 == 0 for row in rows)
    return v
