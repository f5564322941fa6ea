"""MSB-first bit-level reading and writing over byte buffers.

Patch bodies are bit-packed with no alignment between fields, so all
serialization runs through a bit cursor. Fields are written most significant
bit first and packed big-endian across byte boundaries; the final partial
byte is zero-padded. Single fields are capped at 32 bits.
"""

from __future__ import annotations

from .errors import EncodingRangeError, TruncatedStreamError

MAX_FIELD_WIDTH = 32


class BitWriter:
    """Append-only bit sink backed by a growable byte buffer."""

    __slots__ = ("_buf", "_acc", "_nacc", "bit_position")

    def __init__(self) -> None:
        self._buf = bytearray()
        self._acc = 0  # pending bits; oldest bit is the most significant
        self._nacc = 0  # pending bit count, always < 8 between calls
        self.bit_position = 0

    def write_bits(self, value: int, width: int) -> None:
        """Append the low `width` bits of `value`, MSB first."""
        if width < 0 or width > MAX_FIELD_WIDTH:
            raise ValueError(f"field width must be 0..{MAX_FIELD_WIDTH}, got {width}")
        if value < 0 or value >> width:
            raise EncodingRangeError(f"value {value} does not fit in {width} bits")
        self._acc = (self._acc << width) | value
        self._nacc += width
        while self._nacc >= 8:
            self._nacc -= 8
            self._buf.append((self._acc >> self._nacc) & 0xFF)
        self._acc &= (1 << self._nacc) - 1
        self.bit_position += width

    def write_bytes(self, data: bytes) -> None:
        """Append whole bytes (8 bits each) at the current bit phase."""
        n = len(data)
        if n == 0:
            return
        if self._nacc == 0:
            self._buf += data
        else:
            # Merge through one wide integer so long literals stay cheap.
            acc = (self._acc << (8 * n)) | int.from_bytes(data, "big")
            self._buf += (acc >> self._nacc).to_bytes(n, "big")
            self._acc = acc & ((1 << self._nacc) - 1)
        self.bit_position += 8 * n

    def finalize(self) -> bytes:
        """Zero-pad to a byte boundary and return the buffer.

        `bit_position` keeps counting only the bits actually written, so
        callers can recover the pad width. The writer must not be written
        to afterwards.
        """
        if self._nacc:
            self._buf.append((self._acc << (8 - self._nacc)) & 0xFF)
            self._acc = 0
            self._nacc = 0
        return bytes(self._buf)


class BitReader:
    """Bit cursor over an immutable byte sequence."""

    __slots__ = ("_data", "_nbits", "bit_position")

    def __init__(self, data: bytes) -> None:
        self._data = bytes(data)
        self._nbits = 8 * len(self._data)
        self.bit_position = 0

    def remaining(self) -> int:
        return self._nbits - self.bit_position

    def read_bits(self, width: int) -> int:
        """Return the next `width` bits interpreted MSB-first."""
        if width < 0 or width > MAX_FIELD_WIDTH:
            raise ValueError(f"field width must be 0..{MAX_FIELD_WIDTH}, got {width}")
        if width == 0:
            return 0
        pos = self.bit_position
        if pos + width > self._nbits:
            raise TruncatedStreamError(
                f"need {width} bits at bit {pos}, only {self._nbits - pos} remain"
            )
        data = self._data
        value = 0
        left = width
        while left:
            byte = data[pos >> 3]
            avail = 8 - (pos & 7)
            take = avail if avail < left else left
            value = (value << take) | ((byte >> (avail - take)) & ((1 << take) - 1))
            pos += take
            left -= take
        self.bit_position = pos
        return value

    def read_bytes(self, n: int) -> bytes:
        """Return the next 8*n bits as n bytes."""
        if n < 0:
            raise ValueError("byte count must be non-negative")
        pos = self.bit_position
        if pos + 8 * n > self._nbits:
            raise TruncatedStreamError(
                f"need {8 * n} bits at bit {pos}, only {self._nbits - pos} remain"
            )
        if n == 0:
            return b""
        start = pos >> 3
        shift = pos & 7
        if shift == 0:
            out = self._data[start : start + n]
        else:
            window = int.from_bytes(self._data[start : start + n + 1], "big")
            out = ((window >> (8 - shift)) & ((1 << (8 * n)) - 1)).to_bytes(n, "big")
        self.bit_position = pos + 8 * n
        return out
