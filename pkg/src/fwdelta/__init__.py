"""Bit-packed COPY/ADD delta patches for firmware images.

Generate minimal byte-level edit scripts, serialize them to a compact
bit-packed wire format, rebuild images with bounded memory, and estimate
what an update costs over a duty-cycled LoRaWAN link.
"""

from .bitstream import BitReader, BitWriter
from .codec import (
    PATCH_SUFFIX,
    PatchHeader,
    PatchSummary,
    compute_header,
    decode_patch,
    encode_patch,
    patch_info,
)
from .diff import FAST, MINIMAL, DiffMode, compute_edit_script, fast_mode
from .errors import (
    CorpusError,
    DeltaError,
    EncodingRangeError,
    MalformedPatchError,
    MalformedScriptError,
    PatchTooLargeError,
    ProfileError,
    SizeLimitError,
    TruncatedStreamError,
    VerificationError,
)
from .fuota import (
    DEFAULT_PROFILE,
    LinkProfile,
    ScenarioClass,
    UpdateEstimate,
    UpdateSavings,
    classify_scenario,
    compare_strategies,
    estimate_update,
    fragment_count,
    load_profile,
)
from .reconstruct import apply_patch, verify
from .script import EditScript, EditTriple, apply_script, canonicalize, script_cost

__version__ = "0.1.0"

__all__ = [
    "BitReader",
    "BitWriter",
    "CorpusError",
    "DEFAULT_PROFILE",
    "DeltaError",
    "DiffMode",
    "EditScript",
    "EditTriple",
    "EncodingRangeError",
    "FAST",
    "LinkProfile",
    "MalformedPatchError",
    "MalformedScriptError",
    "MINIMAL",
    "PATCH_SUFFIX",
    "PatchHeader",
    "PatchSummary",
    "PatchTooLargeError",
    "ProfileError",
    "ScenarioClass",
    "SizeLimitError",
    "TruncatedStreamError",
    "UpdateEstimate",
    "UpdateSavings",
    "VerificationError",
    "apply_patch",
    "apply_script",
    "canonicalize",
    "classify_scenario",
    "compare_strategies",
    "compute_edit_script",
    "compute_header",
    "decode_patch",
    "encode_patch",
    "estimate_update",
    "fast_mode",
    "fragment_count",
    "load_profile",
    "patch_info",
    "script_cost",
    "verify",
]
