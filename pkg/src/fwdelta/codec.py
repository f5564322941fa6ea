"""Bit-packed patch wire format.

Layout (all fields MSB-first, big-endian across byte boundaries):

  header (48 bits): body_bits:24  WNBD:8  WNBC:8  WNBA:8
  body  (body_bits bits, zero-padded to a byte): per triple, in order,
      wnbd:WNBD  nbd:wnbd  wnbc:WNBC  nbc:wnbc     (the copy half)
      wnba:WNBA  nba:wnba  literals:8*nba          (the add half)

Copy and add halves strictly alternate and carry no command tag. Every
numeric field is preceded by its own bit width; the widths of those width
prefixes are the header constants, sized to the largest value of each kind
in the whole script. A zero value has width 0 and occupies no bits at all.
body_bits counts only the body, not the header. Decoders reject trailing
bytes, oversized widths, zero-progress opcodes, reads crossing body_bits,
and nonzero padding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .bitstream import BitReader, BitWriter
from .errors import MalformedPatchError, PatchTooLargeError, TruncatedStreamError
from .script import EditScript, EditTriple, validate_script

PATCH_SUFFIX = ".bpatch"
HEADER_BYTES = 6
BODY_BITS_LIMIT = 1 << 24
_MAX_FIELD_WIDTH = 32


@dataclass(frozen=True)
class PatchHeader:
    body_bits: int
    wnbd_meta: int  # bit width of the per-copy wnbd prefix
    wnbc_meta: int  # bit width of the per-copy wnbc prefix
    wnba_meta: int  # bit width of the per-add wnba prefix


def value_width(value: int) -> int:
    """Bits needed for `value`: 0 for 0, else floor(log2)+1."""
    return value.bit_length()


def compute_header(script: EditScript) -> PatchHeader:
    """Derive the width constants and exact body size for a script."""
    validate_script(script)
    max_nbd = max_nbc = max_nba = 0
    for t in script.triples:
        if t.nbd > max_nbd:
            max_nbd = t.nbd
        if t.nbc > max_nbc:
            max_nbc = t.nbc
        nba = t.nba
        if nba > max_nba:
            max_nba = nba
    wd = value_width(value_width(max_nbd))
    wc = value_width(value_width(max_nbc))
    wa = value_width(value_width(max_nba))
    body = 0
    for t in script.triples:
        body += (
            wd
            + value_width(t.nbd)
            + wc
            + value_width(t.nbc)
            + wa
            + value_width(t.nba)
            + 8 * t.nba
        )
    if body >= BODY_BITS_LIMIT:
        raise PatchTooLargeError(
            f"patch body of {body} bits exceeds the {BODY_BITS_LIMIT - 1}-bit ceiling; "
            "fall back to a full-image update"
        )
    return PatchHeader(body, wd, wc, wa)


def encode_patch(script: EditScript) -> bytes:
    """Serialize a canonical script to patch bytes."""
    hdr = compute_header(script)
    w = BitWriter()
    w.write_bits(hdr.body_bits, 24)
    w.write_bits(hdr.wnbd_meta, 8)
    w.write_bits(hdr.wnbc_meta, 8)
    w.write_bits(hdr.wnba_meta, 8)
    for t in script.triples:
        wnbd = value_width(t.nbd)
        w.write_bits(wnbd, hdr.wnbd_meta)
        w.write_bits(t.nbd, wnbd)
        wnbc = value_width(t.nbc)
        w.write_bits(wnbc, hdr.wnbc_meta)
        w.write_bits(t.nbc, wnbc)
        nba = t.nba
        wnba = value_width(nba)
        w.write_bits(wnba, hdr.wnba_meta)
        w.write_bits(nba, wnba)
        w.write_bytes(t.literals)
    assert w.bit_position == 8 * HEADER_BYTES + hdr.body_bits
    return w.finalize()


def read_header(data: bytes) -> PatchHeader:
    if len(data) < HEADER_BYTES:
        raise TruncatedStreamError(
            f"patch of {len(data)} bytes is shorter than the {HEADER_BYTES}-byte header"
        )
    r = BitReader(data[:HEADER_BYTES])
    return PatchHeader(r.read_bits(24), r.read_bits(8), r.read_bits(8), r.read_bits(8))


def iter_opcodes(data: bytes) -> Iterator[EditTriple]:
    """Decode a patch incrementally, one copy/add pair per triple.

    Validates the envelope and the opcode stream strictly; holds only the
    patch bytes and one literal run at a time.
    """
    hdr = read_header(data)
    if max(hdr.wnbd_meta, hdr.wnbc_meta, hdr.wnba_meta) > _MAX_FIELD_WIDTH:
        raise MalformedPatchError("header width constant exceeds 32 bits")
    expected = HEADER_BYTES + (hdr.body_bits + 7) // 8
    if len(data) < expected:
        raise TruncatedStreamError(
            f"patch is {len(data)} bytes but the header promises {expected}"
        )
    if len(data) > expected:
        raise MalformedPatchError(
            f"{len(data) - expected} trailing bytes after the declared body"
        )
    r = BitReader(data)
    r.read_bits(24)
    r.read_bits(8)
    r.read_bits(8)
    r.read_bits(8)
    end = 8 * HEADER_BYTES + hdr.body_bits

    def take(width: int) -> int:
        if r.bit_position + width > end:
            raise MalformedPatchError("opcode field crosses the declared body end")
        return r.read_bits(width)

    while r.bit_position < end:
        start = r.bit_position
        wnbd = take(hdr.wnbd_meta)
        if wnbd > _MAX_FIELD_WIDTH:
            raise MalformedPatchError(f"nbd width {wnbd} exceeds 32 bits")
        nbd = take(wnbd)
        wnbc = take(hdr.wnbc_meta)
        if wnbc > _MAX_FIELD_WIDTH:
            raise MalformedPatchError(f"nbc width {wnbc} exceeds 32 bits")
        nbc = take(wnbc)
        wnba = take(hdr.wnba_meta)
        if wnba > _MAX_FIELD_WIDTH:
            raise MalformedPatchError(f"nba width {wnba} exceeds 32 bits")
        nba = take(wnba)
        if nba:
            if r.bit_position + 8 * nba > end:
                raise MalformedPatchError("literal run crosses the declared body end")
            literals = r.read_bytes(nba)
        else:
            literals = b""
        if r.bit_position == start:
            raise MalformedPatchError("zero-length opcode pair, stream cannot progress")
        yield EditTriple(nbd, nbc, literals)
    pad = 8 * len(data) - end
    if pad and r.read_bits(pad):
        raise MalformedPatchError("nonzero padding bits")


def decode_patch(data: bytes) -> tuple[PatchHeader, tuple[EditTriple, ...]]:
    """Decode patch bytes into the header and the triple sequence."""
    return read_header(data), tuple(iter_opcodes(data))


@dataclass(frozen=True)
class PatchSummary:
    header: PatchHeader
    patch_bytes: int
    triples: int
    discarded: int  # sum of nbd
    copied: int  # sum of nbc
    added: int  # sum of nba, equal to the literal byte total


def patch_info(data: bytes) -> PatchSummary:
    """Decode a patch and summarize its opcode statistics."""
    hdr, triples = decode_patch(data)
    return PatchSummary(
        header=hdr,
        patch_bytes=len(data),
        triples=len(triples),
        discarded=sum(t.nbd for t in triples),
        copied=sum(t.nbc for t in triples),
        added=sum(t.nba for t in triples),
    )
