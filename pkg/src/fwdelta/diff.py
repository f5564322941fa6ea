"""Byte-level shortest edit scripts via Myers' O(ND) greedy algorithm.

Every byte is one diff token. The search uses the linear-space
divide-and-conquer refinement: find the middle snake of a segment, emit it
as a matched block, recurse on both sides. In minimal mode the result has
exactly the minimum insert+delete cost. In fast mode any middle-snake
search whose edit cost would exceed the cutoff instead splits at the
furthest-reaching snake seen so far and recurses, trading minimality for
bounded work.

The inner search is compiled with numba when available; the same function
runs as plain Python (over bytes instead of arrays) otherwise, producing
identical scripts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SizeLimitError
from .script import EditScript, EditTriple

try:
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

# Inputs must stay below the 24-bit wire ceiling (see codec).
MAX_INPUT_BYTES = 1 << 24

DEFAULT_FAST_CUTOFF = 1024


@dataclass(frozen=True)
class DiffMode:
    """Edit-script search mode.

    `cutoff` is the maximum edit cost a single middle-snake search may
    explore before splitting heuristically; minimal mode has none.
    """

    name: str
    cutoff: int | None = None

    def __post_init__(self) -> None:
        if self.name not in ("minimal", "fast"):
            raise ValueError(f"unknown diff mode {self.name!r}")
        if self.name == "minimal" and self.cutoff is not None:
            raise ValueError("minimal mode takes no cutoff")
        if self.name == "fast" and (self.cutoff is None or self.cutoff < 2):
            raise ValueError("fast mode needs a cutoff >= 2")


MINIMAL = DiffMode("minimal")
FAST = DiffMode("fast", DEFAULT_FAST_CUTOFF)


def fast_mode(cutoff: int = DEFAULT_FAST_CUTOFF) -> DiffMode:
    return DiffMode("fast", cutoff)


def _middle_snake(a, b, n, m, vf, vb, off, d_limit):
    """Myers middle snake over a[0:n] vs b[0:m].

    vf/vb are furthest-x scratch tables indexed vf[off + k]. Returns
    (found, sx, sy, ex, ey, ses): found == 1 means the snake
    (sx,sy)->(ex,ey) lies on a minimal path whose total cost is `ses`;
    found == 0 means d_limit was exceeded and the returned snake is the
    furthest-reaching one seen in the forward sweep.
    """
    delta = n - m
    odd = (delta & 1) != 0
    vf[off + 1] = 0
    vb[off + 1] = 0
    dmax = (n + m + 2) // 2
    best_prog = -1
    bsx = bsy = bex = bey = 0
    for d in range(dmax + 1):
        if d > d_limit:
            return (0, bsx, bsy, bex, bey, -1)
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and vf[off + k - 1] < vf[off + k + 1]):
                x = vf[off + k + 1]
            else:
                x = vf[off + k - 1] + 1
            y = x - k
            sx = x
            sy = y
            while x < n and y < m and a[x] == b[y]:
                x += 1
                y += 1
            vf[off + k] = x
            if x + y > best_prog:
                best_prog = x + y
                bsx = sx
                bsy = sy
                bex = x
                bey = y
            if odd and (k - delta) >= -(d - 1) and (k - delta) <= (d - 1):
                if x + vb[off + (delta - k)] >= n:
                    return (1, sx, sy, x, y, 2 * d - 1)
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and vb[off + k - 1] < vb[off + k + 1]):
                x = vb[off + k + 1]
            else:
                x = vb[off + k - 1] + 1
            y = x - k
            sx = x
            sy = y
            while x < n and y < m and a[n - 1 - x] == b[m - 1 - y]:
                x += 1
                y += 1
            vb[off + k] = x
            if (not odd) and (delta - k) >= -d and (delta - k) <= d:
                if x + vf[off + (delta - k)] >= n:
                    return (1, n - x, m - (x - k), n - sx, m - sy, 2 * d)
    # Unreachable: the sweeps always meet within dmax.
    return (0, bsx, bsy, bex, bey, -1)


if _HAVE_NUMBA:
    _middle_snake_jit = _njit(cache=True, nogil=True)(_middle_snake)


def _common_prefix_len(a: bytes, b: bytes) -> int:
    n = min(len(a), len(b))
    if n == 0 or a[0] != b[0]:
        return 0
    if n < 256:
        i = 0
        while i < n and a[i] == b[i]:
            i += 1
        return i
    av = np.frombuffer(a, np.uint8, count=n)
    bv = np.frombuffer(b, np.uint8, count=n)
    neq = av != bv
    idx = int(neq.argmax())
    return idx if neq[idx] else n


def _common_suffix_len(a: bytes, b: bytes, max_len: int) -> int:
    n = min(len(a), len(b), max_len)
    if n == 0 or a[-1] != b[-1]:
        return 0
    if n < 256:
        i = 0
        while i < n and a[len(a) - 1 - i] == b[len(b) - 1 - i]:
            i += 1
        return i
    av = np.frombuffer(a, np.uint8)[len(a) - n :][::-1]
    bv = np.frombuffer(b, np.uint8)[len(b) - n :][::-1]
    neq = av != bv
    idx = int(neq.argmax())
    return idx if neq[idx] else n


def _matching_blocks(a: bytes, b: bytes, d_limit: int) -> list[tuple[int, int, int]]:
    """Matched segments (old_pos, new_pos, length) in order, via D&C."""
    if _HAVE_NUMBA:
        kernel = _middle_snake_jit
        ka = np.frombuffer(a, np.uint8)
        kb = np.frombuffer(b, np.uint8)
    else:
        kernel = _middle_snake
        ka = a
        kb = b

    blocks: list[tuple[int, int, int]] = []
    stack: list[tuple] = [(ka, kb, 0, 0)]
    while stack:
        item = stack.pop()
        if len(item) == 3:  # a block already resolved, emitted in order
            blocks.append(item)
            continue
        sa, sb, gx, gy = item
        n, m = len(sa), len(sb)
        if n == 0 or m == 0:
            continue
        off = (n + m + 2) // 2 + 2
        size = 2 * off + 2
        if _HAVE_NUMBA:
            vf = np.empty(size, np.int64)
            vb = np.empty(size, np.int64)
        else:
            vf = [0] * size
            vb = [0] * size
        found, sx, sy, ex, ey, ses = kernel(sa, sb, n, m, vf, vb, off, d_limit)
        if found and ses <= 1:
            # At most one inserted or deleted byte in this segment: the
            # matches are the common prefix plus everything after the edit.
            p = _seg_common_prefix(sa, sb, n, m)
            if p:
                blocks.append((gx, gy, p))
            if n > m:
                if m - p:
                    blocks.append((gx + p + 1, gy + p, m - p))
            elif m > n:
                if n - p:
                    blocks.append((gx + p, gy + p + 1, n - p))
            continue
        # Recurse left, emit the snake, recurse right (stack pops in order).
        stack.append((sa[ex:], sb[ey:], gx + ex, gy + ey))
        if ex > sx:
            stack.append((gx + sx, gy + sy, ex - sx))
        stack.append((sa[:sx], sb[:sy], gx, gy))
    return blocks


def _seg_common_prefix(sa, sb, n: int, m: int) -> int:
    limit = n if n < m else m
    if _HAVE_NUMBA and limit >= 256:
        neq = sa[:limit] != sb[:limit]
        idx = int(neq.argmax())
        return idx if neq[idx] else limit
    i = 0
    while i < limit and sa[i] == sb[i]:
        i += 1
    return i


def _coalesce(blocks: list[tuple[int, int, int]]) -> list[tuple[int, int, int]]:
    out: list[tuple[int, int, int]] = []
    for blk in blocks:
        if out:
            px, py, pl = out[-1]
            if px + pl == blk[0] and py + pl == blk[1]:
                out[-1] = (px, py, pl + blk[2])
                continue
        out.append(blk)
    return out


def _blocks_to_triples(new: bytes, blocks: list[tuple[int, int, int]]) -> tuple[EditTriple, ...]:
    """Pack matched blocks into canonical skip/copy/add triples.

    Literals between two matches attach to the earlier triple's add run;
    skipped old bytes attach to the later triple. Leading literals ride a
    (0, 0) copy.
    """
    m = len(new)
    triples: list[EditTriple] = []
    if not blocks:
        return (EditTriple(0, 0, new),) if m else ()
    if blocks[0][1]:
        triples.append(EditTriple(0, 0, new[: blocks[0][1]]))
    old_pos = 0
    for i, (x, y, length) in enumerate(blocks):
        lit_end = blocks[i + 1][1] if i + 1 < len(blocks) else m
        triples.append(EditTriple(x - old_pos, length, new[y + length : lit_end]))
        old_pos = x + length
    return tuple(triples)


def compute_edit_script(old: bytes, new: bytes, mode: DiffMode = MINIMAL) -> EditScript:
    """Diff two byte sequences into a canonical edit script.

    Minimal mode guarantees the script's inserted+deleted byte count equals
    the minimum insert/delete edit distance; fast mode only guarantees a
    valid script. Identical inputs and mode always yield an identical
    script.
    """
    old = bytes(old)
    new = bytes(new)
    n, m = len(old), len(new)
    if n >= MAX_INPUT_BYTES or m >= MAX_INPUT_BYTES:
        raise SizeLimitError(
            f"inputs of {n} and {m} bytes exceed the {MAX_INPUT_BYTES - 1}-byte ceiling"
        )
    if old == new:
        triples = (EditTriple(0, n, b""),) if n else ()
        return EditScript(triples, n, m)

    pre = _common_prefix_len(old, new)
    suf = _common_suffix_len(old, new, min(n, m) - pre)
    core_old = old[pre : n - suf]
    core_new = new[pre : m - suf]

    if mode.cutoff is None:
        d_limit = len(core_old) + len(core_new) + 2  # never triggers
    else:
        d_limit = max(1, mode.cutoff // 2)

    blocks = [(x + pre, y + pre, L) for x, y, L in _matching_blocks(core_old, core_new, d_limit)]
    if pre:
        blocks.insert(0, (0, 0, pre))
    if suf:
        blocks.append((n - suf, m - suf, suf))
    return EditScript(_blocks_to_triples(new, _coalesce(blocks)), n, m)
