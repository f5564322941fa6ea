"""Command-line interface: diff, apply, info, estimate, bench."""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .bench import aggregate, emit_report, load_manifest, run_corpus
from .codec import PATCH_SUFFIX, encode_patch, patch_info
from .diff import DEFAULT_FAST_CUTOFF, MINIMAL, compute_edit_script, fast_mode
from .errors import CorpusError, DeltaError, PatchTooLargeError
from .fuota import DEFAULT_PROFILE, classify_scenario, compare_strategies, estimate_update, load_profile
from .reconstruct import apply_patch


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DeltaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:  # bad mode/cutoff combinations and the like
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fwdelta",
        description="Generate, apply, and inspect bit-packed firmware delta patches, "
        "and estimate update cost over a LoRaWAN link.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diff", help="generate a patch from two images")
    p.add_argument("old", type=Path)
    p.add_argument("new", type=Path)
    p.add_argument("patch", type=Path, help=f"output patch ({PATCH_SUFFIX})")
    p.add_argument("--mode", choices=("minimal", "fast"), default="minimal")
    p.add_argument(
        "--cutoff",
        type=int,
        default=DEFAULT_FAST_CUTOFF,
        help="fast-mode edit cost explored before splitting (default %(default)s)",
    )
    p.set_defaults(func=_cmd_diff)

    p = sub.add_parser("apply", help="rebuild the new image from old + patch")
    p.add_argument("old", type=Path)
    p.add_argument("patch", type=Path)
    p.add_argument("out", type=Path)
    p.add_argument("--expect-sha", metavar="HEX", help="require this SHA-256 of the output")
    p.set_defaults(func=_cmd_apply)

    p = sub.add_parser("info", help="print patch header and opcode statistics")
    p.add_argument("patch", type=Path)
    p.set_defaults(func=_cmd_info)

    p = sub.add_parser("estimate", help="estimate update time and energy")
    size = p.add_mutually_exclusive_group(required=True)
    size.add_argument("--image-size", type=int, metavar="BYTES")
    size.add_argument("--image", type=Path)
    p.add_argument("--patch", type=Path, help="compare against an incremental update")
    p.add_argument("--profile", type=Path, help="link profile config file")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("bench", help="patch every consecutive pair of a corpus")
    p.add_argument("manifest", type=Path)
    p.add_argument("--modes", default="minimal,fast", help="comma-separated (default %(default)s)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", type=Path, help="report file (default: stdout)")
    p.add_argument("--timings", action="store_true", help="include diff wall times (non-reproducible)")
    p.set_defaults(func=_cmd_bench)
    return parser


def _parse_mode(name: str, cutoff: int):
    if name == "minimal":
        return MINIMAL
    if name == "fast":
        return fast_mode(cutoff)
    raise ValueError(f"unknown diff mode {name!r} (expected minimal or fast)")


def _cmd_diff(args) -> int:
    old = args.old.read_bytes()
    new = args.new.read_bytes()
    try:
        patch = encode_patch(compute_edit_script(old, new, _parse_mode(args.mode, args.cutoff)))
    except PatchTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    args.patch.write_bytes(patch)
    print(f"patch: {len(patch)} bytes ({args.patch})")
    if new:
        print(f"compression factor: {len(new) / len(patch):.2f}")
        print(f"scenario: {classify_scenario(len(patch), len(new)).value}")
    return 0


class _HashingSink:
    """Write-through sink that also maintains a SHA-256 digest."""

    def __init__(self, fh):
        self._fh = fh
        self._hash = hashlib.sha256()

    def write(self, data) -> int:
        self._hash.update(data)
        return self._fh.write(data)

    def hexdigest(self) -> str:
        return self._hash.hexdigest()


def _cmd_apply(args) -> int:
    patch = args.patch.read_bytes()
    out_dir = args.out.parent if str(args.out.parent) else Path(".")
    fd, tmp_name = tempfile.mkstemp(dir=out_dir, prefix=args.out.name + ".", suffix=".tmp")
    try:
        with open(args.old, "rb") as old, os.fdopen(fd, "wb") as tmp:
            sink = _HashingSink(tmp)
            written = apply_patch(old, patch, sink)
        if args.expect_sha and sink.hexdigest() != args.expect_sha.lower():
            print(
                f"error: output digest {sink.hexdigest()} does not match {args.expect_sha.lower()}",
                file=sys.stderr,
            )
            return 1
        os.replace(tmp_name, args.out)
        tmp_name = None
    finally:
        if tmp_name is not None and os.path.exists(tmp_name):
            os.unlink(tmp_name)
    print(f"wrote {written} bytes to {args.out}")
    return 0


def _cmd_info(args) -> int:
    summary = patch_info(args.patch.read_bytes())
    hdr = summary.header
    print(f"patch: {summary.patch_bytes} bytes ({args.patch})")
    print(f"body: {hdr.body_bits} bits")
    print(f"width constants: wnbd={hdr.wnbd_meta} wnbc={hdr.wnbc_meta} wnba={hdr.wnba_meta}")
    print(f"opcode pairs: {summary.triples}")
    print(f"old bytes discarded: {summary.discarded}")
    print(f"old bytes copied: {summary.copied}")
    print(f"literal bytes added: {summary.added}")
    return 0


def _cmd_estimate(args) -> int:
    profile = load_profile(args.profile) if args.profile else DEFAULT_PROFILE
    image_size = args.image_size if args.image_size is not None else args.image.stat().st_size
    if image_size < 0:
        print("error: image size must be non-negative", file=sys.stderr)
        return 1
    if args.patch is None:
        est = estimate_update(image_size, profile)
        print(f"image: {image_size} bytes")
        _print_estimate("full image", est)
        return 0
    patch_size = args.patch.stat().st_size
    savings = compare_strategies(image_size, patch_size, profile)
    print(f"image: {image_size} bytes, patch: {patch_size} bytes")
    _print_estimate("full image ", savings.full)
    _print_estimate("incremental", savings.incremental)
    print(f"time ratio: {savings.time_ratio:.2f}")
    print(f"energy saved: {savings.energy_saved_mAh:.2f} mAh")
    print(
        f"(on-device reconstruction ~{savings.reconstruction_overhead_mAh:.4f} mAh, "
        "not included)"
    )
    return 0


def _print_estimate(label: str, est) -> None:
    print(
        f"{label}: {est.fragments} fragments, "
        f"{est.duration_s / 60.0:.1f} min, {est.energy_mAh:.2f} mAh"
    )


def _cmd_bench(args) -> int:
    manifest = load_manifest(args.manifest)
    modes = tuple(_parse_mode(name.strip(), DEFAULT_FAST_CUTOFF) for name in args.modes.split(","))
    rows = run_corpus(manifest, modes)
    report = emit_report(rows, aggregate(rows), format=args.format, include_timings=args.timings)
    if args.out:
        args.out.write_text(report)
        print(f"wrote {args.out} ({len(rows)} pairs)", file=sys.stderr)
    else:
        sys.stdout.write(report)
    return 0


if __name__ == "__main__":
    sys.exit(main())
