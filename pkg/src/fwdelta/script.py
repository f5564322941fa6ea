"""Structured edit scripts: discard/copy/add triples over byte sequences.

A script transforms an old image into a new one. Each triple means: skip
`nbd` old bytes, copy `nbc` old bytes to the output, then append the
`literals`. Old bytes after the last triple are discarded implicitly and
never encoded.

Canonical form:
  * no triple has both nbc == 0 and an empty literal run,
  * a triple without literals is never followed by one with nbd == 0
    (contiguous copies merge),
  * the script never ends in a pure skip,
  * the triples applied in order produce exactly `new_len` output bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MalformedScriptError

# nbd/nbc/nba must each fit a 32-bit field on the wire.
MAX_FIELD_VALUE = (1 << 32) - 1


@dataclass(frozen=True)
class EditTriple:
    nbd: int  # old bytes discarded before the copy
    nbc: int  # old bytes copied
    literals: bytes  # new bytes appended after the copy

    @property
    def nba(self) -> int:
        return len(self.literals)


@dataclass(frozen=True)
class EditScript:
    triples: tuple[EditTriple, ...]
    old_len: int
    new_len: int


def validate_script(script: EditScript) -> None:
    """Raise MalformedScriptError unless `script` is canonical."""
    consumed = 0
    produced = 0
    prev_nba = None
    for i, t in enumerate(script.triples):
        if t.nbd < 0 or t.nbc < 0:
            raise MalformedScriptError(f"triple {i} has negative field")
        if max(t.nbd, t.nbc, t.nba) > MAX_FIELD_VALUE:
            raise MalformedScriptError(f"triple {i} field exceeds 32 bits")
        if t.nbc == 0 and t.nba == 0:
            raise MalformedScriptError(f"triple {i} neither copies nor adds")
        if prev_nba == 0 and t.nbd == 0:
            raise MalformedScriptError(f"triples {i - 1} and {i} are contiguous copies")
        consumed += t.nbd + t.nbc
        produced += t.nbc + t.nba
        prev_nba = t.nba
    if consumed > script.old_len:
        raise MalformedScriptError(
            f"script consumes {consumed} bytes of a {script.old_len}-byte image"
        )
    if produced != script.new_len:
        raise MalformedScriptError(
            f"script produces {produced} bytes, declared new_len is {script.new_len}"
        )


def canonicalize(
    triples: list[EditTriple] | tuple[EditTriple, ...],
    old_len: int,
    new_len: int,
) -> EditScript:
    """Normalize a triple sequence without changing what it applies to.

    Zero-copy triples dissolve: their literals join the previous add run
    (or a leading add) and their skip defers to the next copy. Contiguous
    copies merge, and a trailing pure skip is dropped.
    """
    leading = bytearray()
    out: list[list] = []  # [nbd, nbc, bytearray(literals)]
    carry_skip = 0
    for t in triples:
        if t.nbd < 0 or t.nbc < 0:
            raise MalformedScriptError("negative field in triple")
        nbd = t.nbd + carry_skip
        carry_skip = 0
        if t.nbc == 0:
            if t.literals:
                if out:
                    out[-1][2] += t.literals
                else:
                    leading += t.literals
            carry_skip = nbd
            continue
        if out and nbd == 0 and not out[-1][2]:
            out[-1][1] += t.nbc
            out[-1][2] = bytearray(t.literals)
        else:
            out.append([nbd, t.nbc, bytearray(t.literals)])
    # carry_skip left over is a trailing discard and is not encoded.

    result = []
    if leading:
        result.append(EditTriple(0, 0, bytes(leading)))
    result.extend(EditTriple(nbd, nbc, bytes(lit)) for nbd, nbc, lit in out)
    script = EditScript(tuple(result), old_len, new_len)
    validate_script(script)
    return script


def apply_script(old: bytes, script: EditScript) -> bytes:
    """Reference in-memory application of a canonical script."""
    if script.old_len != len(old):
        raise MalformedScriptError(
            f"script is for a {script.old_len}-byte image, got {len(old)} bytes"
        )
    validate_script(script)
    out = bytearray()
    pos = 0
    for t in script.triples:
        pos += t.nbd
        out += old[pos : pos + t.nbc]
        pos += t.nbc
        out += t.literals
    return bytes(out)


def script_cost(script: EditScript) -> tuple[int, int]:
    """Return (deleted, inserted) byte counts for a canonical script."""
    validate_script(script)
    copied = sum(t.nbc for t in script.triples)
    inserted = sum(t.nba for t in script.triples)
    return script.old_len - copied, inserted
