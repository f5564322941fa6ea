"""Synthetic firmware-like corpora: seeded images and mutated version chains.

Real firmware histories are rarely shareable, so the harness can fabricate
version chains with a known mutation budget: scattered byte flips plus
block inserts and deletes, all derived from one seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DEFAULT_OPS = ("flip", "insert", "delete")
DEFAULT_MAX_BLOCK = 4096


@dataclass(frozen=True)
class MutationSpec:
    """How much and how to mutate one version into the next.

    `rate` is the fraction of the image's bytes touched (flipped, inserted,
    or deleted), split evenly across the enabled ops.
    """

    rate: float
    ops: tuple[str, ...] = DEFAULT_OPS
    max_block: int = DEFAULT_MAX_BLOCK

    def __post_init__(self) -> None:
        if not 0 <= self.rate <= 1:
            raise ValueError("rate must be in [0, 1]")
        bad = set(self.ops) - set(DEFAULT_OPS)
        if bad or not self.ops:
            raise ValueError(f"ops must be a non-empty subset of {DEFAULT_OPS}")


def make_image(size: int, seed: int) -> bytes:
    """A pseudo-random base image, stable for a given seed."""
    return random.Random(seed).randbytes(size)


def mutate(data: bytes, spec: MutationSpec, seed: int) -> bytes:
    """Apply `spec` to `data` deterministically."""
    rng = np.random.default_rng(seed)
    n = len(data)
    budget = max(1, round(spec.rate * n)) if n else 1
    share = budget // len(spec.ops)
    extra = budget - share * len(spec.ops)
    out = data
    for i, op in enumerate(spec.ops):
        amount = share + (extra if i == 0 else 0)
        if amount == 0:
            continue
        if op == "flip":
            out = _flip(out, amount, rng)
        elif op == "insert":
            out = _insert_blocks(out, amount, spec.max_block, rng)
        else:
            out = _delete_blocks(out, amount, spec.max_block, rng)
    return out


def _flip(data: bytes, count: int, rng: np.random.Generator) -> bytes:
    n = len(data)
    if n == 0:
        return data
    count = min(count, n)
    arr = np.frombuffer(data, np.uint8).copy()
    pos = rng.choice(n, size=count, replace=False)
    # xor with 1..255 guarantees every chosen byte really changes
    arr[pos] ^= rng.integers(1, 256, size=count, dtype=np.uint8)
    return arr.tobytes()


def _block_sizes(total: int, max_block: int, rng: np.random.Generator) -> list[int]:
    sizes = []
    left = total
    while left:
        hi = min(left, max_block)
        size = int(np.exp(rng.uniform(0.0, np.log(hi + 1))))  # log-uniform 1..hi
        size = max(1, min(size, hi))
        sizes.append(size)
        left -= size
    return sizes


def _insert_blocks(data: bytes, total: int, max_block: int, rng: np.random.Generator) -> bytes:
    inserts = []
    for size in _block_sizes(total, max_block, rng):
        pos = int(rng.integers(0, len(data) + 1))
        inserts.append((pos, rng.integers(0, 256, size=size, dtype=np.uint8).tobytes()))
    inserts.sort(key=lambda item: item[0])
    parts = []
    prev = 0
    for pos, payload in inserts:
        parts.append(data[prev:pos])
        parts.append(payload)
        prev = pos
    parts.append(data[prev:])
    return b"".join(parts)


def _delete_blocks(data: bytes, total: int, max_block: int, rng: np.random.Generator) -> bytes:
    out = data
    for size in _block_sizes(total, max_block, rng):
        if not out:
            break
        size = min(size, len(out))
        pos = int(rng.integers(0, len(out) - size + 1))
        out = out[:pos] + out[pos + size :]
    return out


def make_chain(
    base_size: int,
    steps: list[MutationSpec] | tuple[MutationSpec, ...],
    seed: int,
) -> list[bytes]:
    """Base image plus one mutated successor per step."""
    versions = [make_image(base_size, seed)]
    for i, spec in enumerate(steps):
        versions.append(mutate(versions[-1], spec, seed + 1 + i))
    return versions


def write_corpus(
    out_dir: str | Path,
    name: str,
    base_size: int,
    steps: list[MutationSpec] | tuple[MutationSpec, ...],
    seed: int,
) -> Path:
    """Write a version chain and its manifest; returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = out / f"{name}.manifest"
    lines = []
    for i, image in enumerate(make_chain(base_size, steps, seed)):
        fname = f"{name}-v{i:03d}.bin"
        (out / fname).write_bytes(image)
        lines.append(f"v{i:03d}\t{fname}")
    manifest.write_text("\n".join(lines) + "\n")
    return manifest
