"""Bit-packed Boolean matrices, Boolean matrix product, transitive closure.

Rows are packed into uint64 words, least-significant bit first, so column
j of row i sits in word j >> 6 at bit j & 63.  Trailing padding bits are
always zero.  The product is word-parallel cubic; the multiplication entry
point dispatches on the active backend so a faster implementation can be
substituted without touching callers.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import PreconditionError

_WORD = 64


def _word_count(cols: int) -> int:
    return (cols + _WORD - 1) // _WORD


def pack_bool(dense: np.ndarray) -> np.ndarray:
    """Pack a 2-D boolean array into per-row uint64 words (LSB first)."""
    dense = np.ascontiguousarray(dense, dtype=bool)
    rows, cols = dense.shape
    nbytes = _word_count(cols) * 8
    packed8 = np.packbits(dense, axis=1, bitorder="little")
    if packed8.shape[1] < nbytes:
        pad = np.zeros((rows, nbytes - packed8.shape[1]), dtype=np.uint8)
        packed8 = np.hstack([packed8, pad])
    return packed8.view(np.uint64)


def unpack_bool(words: np.ndarray, cols: int) -> np.ndarray:
    """Inverse of pack_bool, trimmed to the true column count."""
    bytes8 = np.ascontiguousarray(words).view(np.uint8)
    bits = np.unpackbits(bytes8, axis=1, bitorder="little")
    return bits[:, :cols].astype(bool)


class BitMatrix:
    """Immutable rows x cols Boolean matrix in packed form."""

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray):
        if rows < 1 or cols < 1:
            raise PreconditionError("BitMatrix dimensions must be >= 1")
        expected = (rows, _word_count(cols))
        if words.shape != expected or words.dtype != np.uint64:
            raise PreconditionError(
                f"backing words must be uint64 of shape {expected}, got "
                f"{words.dtype} {words.shape}"
            )
        self.rows = rows
        self.cols = cols
        self.words = words
        self.words.setflags(write=False)

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "BitMatrix":
        dense = np.asarray(dense)
        if dense.ndim != 2:
            raise PreconditionError("dense input must be 2-D")
        return cls(dense.shape[0], dense.shape[1], pack_bool(dense != 0))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, np.zeros((rows, _word_count(cols)), np.uint64))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_dense(np.eye(n, dtype=bool))

    def to_dense(self) -> np.ndarray:
        return unpack_bool(self.words, self.cols)

    def get(self, i: int, j: int) -> bool:
        return bool((int(self.words[i, j >> 6]) >> (j & 63)) & 1)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.words, other.words)
        )

    def __or__(self, other: "BitMatrix") -> "BitMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise PreconditionError("shape mismatch in BitMatrix OR")
        return BitMatrix(self.rows, self.cols, self.words | other.words)

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def _multiply_numba(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    out = np.zeros((a.rows, _word_count(b.cols)), np.uint64)
    _kernels.bmm_words(a.words, a.cols, b.words, out)
    return BitMatrix(a.rows, b.cols, out)


def _multiply_numpy(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    # float32 sums stay exact for any inner dimension this package meets.
    da = a.to_dense().astype(np.float32)
    db = b.to_dense().astype(np.float32)
    return BitMatrix.from_dense((da @ db) > 0)


def bool_multiply(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """c[i][j] = OR over k of (a[i][k] AND b[k][j])."""
    if a.cols != b.rows:
        raise PreconditionError(
            f"dimension mismatch: {a.cols} columns vs {b.rows} rows"
        )
    if _kernels.use_numba():
        return _multiply_numba(a, b)
    return _multiply_numpy(a, b)


def transitive_closure(adj: BitMatrix) -> BitMatrix:
    """Reflexive-transitive closure by repeated squaring of (adj OR I)."""
    if adj.rows != adj.cols:
        raise PreconditionError("transitive_closure needs a square matrix")
    n = adj.rows
    reach = adj | BitMatrix.identity(n)
    # (A|I)^(2^t) covers all paths of length <= 2^t; stop early on fixpoint.
    steps = max(n - 1, 1).bit_length()
    for _ in range(steps):
        squared = bool_multiply(reach, reach)
        if squared == reach:
            break
        reach = squared
    return reach
