"""Numba-compiled hot loops with backend selection.

Every kernel here has a pure-numpy (or plain Python) twin in the module
that calls it.  The active backend is chosen through the REACH2_BACKEND
environment variable: "numba", "numpy", or "auto" (default; numba when
importable).  Results are bit-identical across backends.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import Reach2Error

ENV_BACKEND = "REACH2_BACKEND"

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


def active_backend() -> str:
    """Resolve the backend name currently in effect ("numba" or "numpy")."""
    raw = os.environ.get(ENV_BACKEND, "auto").strip().lower()
    if raw in ("", "auto"):
        return "numba" if HAVE_NUMBA else "numpy"
    if raw == "numba":
        if not HAVE_NUMBA:
            raise Reach2Error("REACH2_BACKEND=numba but numba is not importable")
        return "numba"
    if raw == "numpy":
        return "numpy"
    raise Reach2Error(f"unknown REACH2_BACKEND value: {raw!r}")


def use_numba() -> bool:
    return active_backend() == "numba"


_U1 = np.uint64(1)
_U0 = np.uint64(0)


@njit(cache=True)
def bmm_words(aw, n_inner, bw, out):  # pragma: no cover - compiled
    # aw: (R, WA) uint64, row i packs the inner dimension; bw: (K, WB);
    # out: (R, WB) zero-initialised.  out row i = OR of bw rows selected
    # by the set bits of aw row i.
    n_rows, n_words_a = aw.shape
    n_words_b = bw.shape[1]
    for i in range(n_rows):
        for w in range(n_words_a):
            word = aw[i, w]
            if word == _U0:
                continue
            base = w << 6
            bit = 0
            while word != _U0:
                if word & _U1:
                    k = base + bit
                    if k < n_inner:
                        for c in range(n_words_b):
                            out[i, c] |= bw[k, c]
                word >>= _U1
                bit += 1


@njit(cache=True)
def path_product_words(left, right, out):  # pragma: no cover - compiled
    # left: (R, K, W), right: (K, C, W), out: (R, C, W) zeroed uint64.
    # out[i,j] = OR over k of (left[i,k] AND right[k,j]), word by word.
    n_rows, n_inner, n_words = left.shape
    n_cols = right.shape[1]
    for i in range(n_rows):
        for k in range(n_inner):
            nonzero = False
            for w in range(n_words):
                if left[i, k, w] != _U0:
                    nonzero = True
                    break
            if not nonzero:
                continue
            for j in range(n_cols):
                for w in range(n_words):
                    out[i, j, w] |= left[i, k, w] & right[k, j, w]


@njit(cache=True)
def encode_words(codes, left_side, k, n0, out):  # pragma: no cover - compiled
    # codes: (R, C) int64 cell codes (-2 bottom, -1 top, >=0 edge tail*n0+head).
    # out: (R, C, W) zeroed uint64; bit position p lives in word p>>6 at bit p&63.
    n_rows, n_cols = codes.shape
    total_bits = 8 * k
    for i in range(n_rows):
        for j in range(n_cols):
            v = codes[i, j]
            if v == -2:
                continue
            if v == -1:
                for p in range(total_bits):
                    out[i, j, p >> 6] |= _U1 << np.uint64(p & 63)
                continue
            x = v // n0 + 1
            y = v % n0 + 1
            base = 0 if left_side else 4 * k
            for t in range(k):
                xb = (x >> (k - 1 - t)) & 1
                yb = (y >> (k - 1 - t)) & 1
                p = base + t
                if xb:
                    out[i, j, p >> 6] |= _U1 << np.uint64(p & 63)
                p = base + k + t
                if yb:
                    out[i, j, p >> 6] |= _U1 << np.uint64(p & 63)
                p = base + 2 * k + t
                if not xb:
                    out[i, j, p >> 6] |= _U1 << np.uint64(p & 63)
                p = base + 3 * k + t
                if not yb:
                    out[i, j, p >> 6] |= _U1 << np.uint64(p & 63)
            ones_from = 4 * k if left_side else 0
            for p in range(ones_from, ones_from + 4 * k):
                out[i, j, p >> 6] |= _U1 << np.uint64(p & 63)


@njit(cache=True)
def decode_words(words, k, n0, out):  # pragma: no cover - compiled
    # Inverse of the encoding above for OR-accumulated cells.  Returns 0 on
    # success, 1 when a decodable half names an id outside [0, n0).
    n_rows, n_cols, n_words = words.shape
    total_bits = 8 * k
    for i in range(n_rows):
        for j in range(n_cols):
            all_zero = True
            for w in range(n_words):
                if words[i, j, w] != _U0:
                    all_zero = False
                    break
            if all_zero:
                out[i, j] = -2
                continue

            right_ok = True
            for t in range(2 * k):
                p = 4 * k + t
                q = 6 * k + t
                bp = (words[i, j, p >> 6] >> np.uint64(p & 63)) & _U1
                bq = (words[i, j, q >> 6] >> np.uint64(q & 63)) & _U1
                if bp == bq:
                    right_ok = False
                    break
            if right_ok:
                base = 4 * k
            else:
                left_ok = True
                for t in range(2 * k):
                    p = t
                    q = 2 * k + t
                    bp = (words[i, j, p >> 6] >> np.uint64(p & 63)) & _U1
                    bq = (words[i, j, q >> 6] >> np.uint64(q & 63)) & _U1
                    if bp == bq:
                        left_ok = False
                        break
                if not left_ok:
                    out[i, j] = -1
                    continue
                base = 0

            x = 0
            y = 0
            for t in range(k):
                p = base + t
                if (words[i, j, p >> 6] >> np.uint64(p & 63)) & _U1:
                    x |= 1 << (k - 1 - t)
                p = base + k + t
                if (words[i, j, p >> 6] >> np.uint64(p & 63)) & _U1:
                    y |= 1 << (k - 1 - t)
            x -= 1
            y -= 1
            if x < 0 or x >= n0 or y < 0 or y >= n0:
                return 1
            out[i, j] = x * n0 + y
    return 0


@njit(cache=True)
def recover_words(in_codes, pos, n0, left_side, out_codes, state, stack):
    # pragma: no cover - compiled
    # Memoised chain-following for first/last-witness recovery.
    # state: 0 unset, 1 in progress, 2 done.  Returns 0 ok, 1 chain cycle,
    # 2 witness endpoint missing from this matrix.
    n = in_codes.shape[0]
    for a0 in range(n):
        for b0 in range(n):
            if state[a0, b0] == 2:
                continue
            top = 0
            stack[0] = b0 if left_side else a0
            state[a0, b0] = 1
            while True:
                if left_side:
                    u = a0
                    v = stack[top]
                else:
                    u = stack[top]
                    v = b0
                cv = in_codes[u, v]
                if cv == -1 or cv == -2:
                    out_codes[u, v] = cv
                    state[u, v] = 2
                    break
                if left_side:
                    nxt = pos[cv // n0]
                else:
                    nxt = pos[cv % n0]
                if nxt < 0:
                    return 2
                if left_side:
                    anchor = in_codes[a0, nxt]
                else:
                    anchor = in_codes[nxt, b0]
                if anchor == -1:
                    out_codes[u, v] = cv
                    state[u, v] = 2
                    break
                if left_side:
                    st = state[a0, nxt]
                else:
                    st = state[nxt, b0]
                if st == 2:
                    if left_side:
                        out_codes[u, v] = out_codes[a0, nxt]
                    else:
                        out_codes[u, v] = out_codes[nxt, b0]
                    state[u, v] = 2
                    break
                if st == 1:
                    return 1
                top += 1
                stack[top] = nxt
                if left_side:
                    state[a0, nxt] = 1
                else:
                    state[nxt, b0] = 1
            for t in range(top - 1, -1, -1):
                if left_side:
                    out_codes[a0, stack[t]] = out_codes[a0, stack[t + 1]]
                    state[a0, stack[t]] = 2
                else:
                    out_codes[stack[t], b0] = out_codes[stack[t + 1], b0]
                    state[stack[t], b0] = 2
    return 0


@njit(cache=True)
def idom_words(rpo, rpo_num, in_indptr, in_indices, idom):
    # pragma: no cover - compiled
    # Iterative immediate-dominator data-flow over reverse postorder.
    changed = True
    while changed:
        changed = False
        for oi in range(1, rpo.shape[0]):
            v = rpo[oi]
            new_idom = -1
            for e in range(in_indptr[v], in_indptr[v + 1]):
                p = in_indices[e]
                if rpo_num[p] < 0 or idom[p] < 0:
                    continue
                if new_idom < 0:
                    new_idom = p
                    continue
                a = p
                b = new_idom
                while a != b:
                    while rpo_num[a] > rpo_num[b]:
                        a = idom[a]
                    while rpo_num[b] > rpo_num[a]:
                        b = idom[b]
                new_idom = a
            if new_idom >= 0 and idom[v] != new_idom:
                idom[v] = new_idom
                changed = True
