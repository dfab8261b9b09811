"""Value domain and operators for 2-reachability path composition.

A cell value ("TwoReach") is one of

* ``TOP``   -- two edge-disjoint paths exist (no single edge separates),
* ``BOT``   -- the target is unreachable,
* ``EdgeRef(x, y)`` -- that edge lies on every path.

The serial operator pairs the witnesses of a path prefix and suffix, the
parallel operator merges alternatives component-wise (equal edges survive,
different edges collapse to TOP), and the projection keeps the right-hand
witness when both components carry one.

For matrix work, cells are held as int64 codes: -2 for BOT, -1 for TOP,
``tail * n0 + head`` for an edge of the original n0-vertex graph.  The
path-based matrix product is evaluated either directly (the reference
semiring evaluator, also used below the size threshold) or through the
superimposed bit encoding: each cell becomes an 8k-bit word
(k = ceil(log2(n0+1))), the product is 8k coordinate-wise Boolean matrix
products, and decoding inspects the self-complementary halves.  Edge ids
are encoded 1-based so a real id is never all-zero bits.
"""

from __future__ import annotations

import enum

import numpy as np

from . import _kernels
from .errors import InternalInvariantError, PreconditionError
from .graph import EdgeRef

BOT_CODE = -2
TOP_CODE = -1

_DIRECT_THRESHOLD = 8


class _Top:
    __slots__ = ()

    def __repr__(self) -> str:
        return "TOP"


class _Bot:
    __slots__ = ()

    def __repr__(self) -> str:
        return "BOT"


TOP = _Top()
BOT = _Bot()

TwoReach = _Top | _Bot | EdgeRef
PairValue = tuple


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


def bit_width(n: int) -> int:
    """Bits needed for the 1-based id of any vertex of an n-vertex graph."""
    if n < 1:
        raise PreconditionError("graph size must be >= 1")
    return n.bit_length()


# ---------------------------------------------------------------------------
# Value-level operators


def serial(a: TwoReach, b: TwoReach) -> PairValue:
    """Compose witnesses of consecutive path families."""
    if a is BOT or b is BOT:
        return (BOT, BOT)
    return (a, b)


def _oplus(a: TwoReach, b: TwoReach) -> TwoReach:
    if a is BOT:
        return b
    if b is BOT:
        return a
    if a is TOP or b is TOP:
        return TOP
    return a if a == b else TOP


def parallel(a: PairValue, b: PairValue) -> PairValue:
    """Merge alternative path families, component-wise."""
    return (_oplus(a[0], b[0]), _oplus(a[1], b[1]))


def project(p: PairValue) -> TwoReach:
    """Collapse an accumulated pair to a single witness (right edge wins)."""
    left, right = p
    if left is BOT and right is BOT:
        return BOT
    if left is BOT or right is BOT:
        raise InternalInvariantError(f"inadmissible accumulated pair {p!r}")
    if isinstance(right, EdgeRef):
        return right
    if isinstance(left, EdgeRef):
        return left
    return TOP


# ---------------------------------------------------------------------------
# Codes <-> values


def code_of(v: TwoReach, n0: int) -> int:
    if v is BOT:
        return BOT_CODE
    if v is TOP:
        return TOP_CODE
    return v.tail * n0 + v.head


def value_of(code: int, n0: int) -> TwoReach:
    if code == BOT_CODE:
        return BOT
    if code == TOP_CODE:
        return TOP
    return EdgeRef(int(code) // n0, int(code) % n0)


# ---------------------------------------------------------------------------
# Codeword encoding (reference form: arbitrary-precision ints)


def encode(v: TwoReach, side: Side, k: int) -> int:
    """8k-bit codeword of a cell; bit 1 of the written form is the MSB."""
    total = 8 * k
    if v is BOT:
        return 0
    if v is TOP:
        return (1 << total) - 1
    x = v.tail + 1
    y = v.head + 1
    if x >= (1 << k) or y >= (1 << k):
        raise PreconditionError(f"edge id does not fit in {k} bits: {v!r}")
    mask_k = (1 << k) - 1
    ident = (x << (3 * k)) | (y << (2 * k)) | ((~x & mask_k) << k) | (~y & mask_k)
    ones4 = (1 << (4 * k)) - 1
    if side is Side.LEFT:
        return (ident << (4 * k)) | ones4
    return (ones4 << (4 * k)) | ident


def decode(word: int, k: int, n: int | None = None) -> TwoReach:
    """Invert OR-accumulations of encoded cells.

    Checked in order: all zeros, self-complementary right half,
    self-complementary left half, otherwise TOP."""
    if word == 0:
        return BOT
    mask_k = (1 << k) - 1
    mask_2k = (1 << (2 * k)) - 1

    def try_half(shift: int) -> TwoReach | None:
        hi = (word >> (shift + 2 * k)) & mask_2k
        lo = (word >> shift) & mask_2k
        if hi != (~lo & mask_2k):
            return None
        x = (hi >> k) - 1
        y = (hi & mask_k) - 1
        if x < 0 or y < 0 or (n is not None and (x >= n or y >= n)):
            raise InternalInvariantError(
                f"decoded edge id out of range: ({x}, {y})"
            )
        return EdgeRef(x, y)

    got = try_half(0)  # right half: bits 4k+1..8k
    if got is not None:
        return got
    got = try_half(4 * k)  # left half: bits 1..4k
    if got is not None:
        return got
    return TOP


# ---------------------------------------------------------------------------
# Direct (semiring) evaluation on code matrices


def _oplus_code(a: int, b: int) -> int:
    if a == BOT_CODE:
        return b
    if b == BOT_CODE:
        return a
    if a == TOP_CODE or b == TOP_CODE:
        return TOP_CODE
    return a if a == b else TOP_CODE


def direct_path_product(a: np.ndarray, b: np.ndarray, n0: int) -> np.ndarray:
    """Definitional evaluation: project(sum_k serial(a[i,k], b[k,j]))."""
    rows, inner = a.shape
    cols = b.shape[1]
    out = np.empty((rows, cols), np.int64)
    for i in range(rows):
        for j in range(cols):
            acc_l = BOT_CODE
            acc_r = BOT_CODE
            for t in range(inner):
                av = a[i, t]
                bv = b[t, j]
                if av == BOT_CODE or bv == BOT_CODE:
                    continue
                acc_l = _oplus_code(acc_l, av)
                acc_r = _oplus_code(acc_r, bv)
            if acc_l == BOT_CODE and acc_r == BOT_CODE:
                out[i, j] = BOT_CODE
            elif acc_l == BOT_CODE or acc_r == BOT_CODE:
                raise InternalInvariantError("inadmissible accumulated pair")
            elif acc_r >= 0:
                out[i, j] = acc_r
            elif acc_l >= 0:
                out[i, j] = acc_l
            else:
                out[i, j] = TOP_CODE
    return out


# ---------------------------------------------------------------------------
# Bit-plane route (numpy backend)


def encode_planes(codes: np.ndarray, side: Side, k: int, n0: int) -> np.ndarray:
    """Stack of 8k Boolean planes; plane t holds written-form bit t+1."""
    rows, cols = codes.shape
    planes = np.zeros((8 * k, rows, cols), bool)
    top = codes == TOP_CODE
    edge = codes >= 0
    planes[:, top] = True
    if edge.any():
        x = codes[edge] // n0 + 1
        y = codes[edge] % n0 + 1
        if int(x.max()) >= (1 << k) or int(y.max()) >= (1 << k):
            raise PreconditionError(f"edge id does not fit in {k} bits")
        base = 0 if side is Side.LEFT else 4 * k
        for t in range(k):
            xb = (x >> (k - 1 - t)) & 1
            yb = (y >> (k - 1 - t)) & 1
            planes[base + t, edge] = xb == 1
            planes[base + k + t, edge] = yb == 1
            planes[base + 2 * k + t, edge] = xb == 0
            planes[base + 3 * k + t, edge] = yb == 0
        ones_from = 4 * k if side is Side.LEFT else 0
        planes[ones_from:ones_from + 4 * k, edge] = True
    return planes


def decode_planes(planes: np.ndarray, k: int, n0: int) -> np.ndarray:
    nonzero = planes.any(axis=0)
    right_ok = (planes[4 * k:6 * k] == ~planes[6 * k:8 * k]).all(axis=0)
    left_ok = (planes[0:2 * k] == ~planes[2 * k:4 * k]).all(axis=0)
    powers = 1 << np.arange(k - 1, -1, -1, dtype=np.int64)

    def ids(start: int) -> np.ndarray:
        return np.tensordot(powers, planes[start:start + k].astype(np.int64), axes=1)

    use_right = nonzero & right_ok
    use_left = nonzero & ~right_ok & left_ok
    codes = np.full(planes.shape[1:], TOP_CODE, np.int64)
    codes[~nonzero] = BOT_CODE
    for use, start in ((use_right, 4 * k), (use_left, 0)):
        if not use.any():
            continue
        x = ids(start) - 1
        y = ids(start + k) - 1
        bad = use & ((x < 0) | (x >= n0) | (y < 0) | (y >= n0))
        if bad.any():
            raise InternalInvariantError("decoded edge id out of range")
        codes[use] = (x * n0 + y)[use]
    return codes


def _path_product_numpy(a: np.ndarray, b: np.ndarray, k: int, n0: int) -> np.ndarray:
    left = encode_planes(a, Side.LEFT, k, n0)
    right = encode_planes(b, Side.RIGHT, k, n0)
    out = np.empty((8 * k, a.shape[0], b.shape[1]), bool)
    for t in range(8 * k):
        lf = left[t].astype(np.float32)
        rf = right[t].astype(np.float32)
        out[t] = (lf @ rf) > 0
    return decode_planes(out, k, n0)


# ---------------------------------------------------------------------------
# Packed-word route (numba backend)


def _word_count(k: int) -> int:
    return (8 * k + 63) // 64


def encode_words(codes: np.ndarray, side: Side, k: int, n0: int) -> np.ndarray:
    out = np.zeros((*codes.shape, _word_count(k)), np.uint64)
    _kernels.encode_words(codes, side is Side.LEFT, k, n0, out)
    return out


def decode_words(words: np.ndarray, k: int, n0: int) -> np.ndarray:
    out = np.empty(words.shape[:2], np.int64)
    status = _kernels.decode_words(words, k, n0, out)
    if status != 0:
        raise InternalInvariantError("decoded edge id out of range")
    return out


def _path_product_numba(a: np.ndarray, b: np.ndarray, k: int, n0: int) -> np.ndarray:
    left = encode_words(a, Side.LEFT, k, n0)
    right = encode_words(b, Side.RIGHT, k, n0)
    out = np.zeros((a.shape[0], b.shape[1], _word_count(k)), np.uint64)
    _kernels.path_product_words(left, right, out)
    return decode_words(out, k, n0)


# ---------------------------------------------------------------------------
# Entry point


def path_product(a: np.ndarray, b: np.ndarray, k: int, n0: int) -> np.ndarray:
    """Path-based matrix product on code matrices.

    ``a`` must be left-closure shaped and ``b`` right-closure shaped.
    Below the size threshold the direct evaluator is used; otherwise the
    encoded route on the active backend.  All routes agree exactly."""
    a = np.ascontiguousarray(a, np.int64)
    b = np.ascontiguousarray(b, np.int64)
    if a.shape[1] != b.shape[0]:
        raise PreconditionError(
            f"dimension mismatch: {a.shape} x {b.shape}"
        )
    if max(a.shape[0], a.shape[1], b.shape[1]) < _DIRECT_THRESHOLD:
        return direct_path_product(a, b, n0)
    if _kernels.use_numba():
        return _path_product_numba(a, b, k, n0)
    return _path_product_numpy(a, b, k, n0)
