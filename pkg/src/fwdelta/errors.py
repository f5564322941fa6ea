"""Exception types shared across the toolkit."""


class DeltaError(Exception):
    """Base class for all fwdelta errors."""


class EncodingRangeError(DeltaError, ValueError):
    """A value does not fit in the requested bit width."""


class TruncatedStreamError(DeltaError):
    """A read ran past the end of the available bits."""


class SizeLimitError(DeltaError):
    """An input image exceeds the format's size ceiling."""


class MalformedScriptError(DeltaError):
    """An edit script is inconsistent with its inputs."""


class PatchTooLargeError(DeltaError):
    """The encoded patch body would exceed the 24-bit size field.

    Callers should fall back to a full-image update.
    """


class MalformedPatchError(DeltaError):
    """A patch fails structural validation during decode or apply."""


class ProfileError(DeltaError, ValueError):
    """A link profile value or profile file is invalid."""


class CorpusError(DeltaError):
    """A benchmark manifest or corpus file is unusable."""


class VerificationError(DeltaError):
    """A generated patch failed to reproduce the target image."""
