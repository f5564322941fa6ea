"""Benchmark harness: patch every consecutive pair of a version corpus.

Every generated patch is verified against the streaming reconstructor
before its size is reported; a verification failure aborts the run, since
correctness precedes measurement.
"""

from __future__ import annotations

import csv
import io
import json
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

from .codec import encode_patch
from .diff import FAST, MINIMAL, DiffMode, compute_edit_script
from .errors import CorpusError, DeltaError, VerificationError
from .fuota import ScenarioClass, classify_scenario
from .reconstruct import verify

REPORT_SCHEMA = "fwdelta-bench-report-v1"


@dataclass(frozen=True)
class CorpusManifest:
    name: str
    entries: tuple[tuple[str, Path], ...]  # ordered (label, path)

    def __post_init__(self) -> None:
        if len(self.entries) < 2:
            raise CorpusError(f"corpus {self.name!r} needs at least 2 versions")


def load_manifest(path: str | Path) -> CorpusManifest:
    """Parse a manifest: one `label<TAB>path` per line, '#' comments.

    Relative paths resolve against the manifest's directory; the corpus is
    named after the manifest file.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CorpusError(f"cannot read manifest {path}: {exc}") from exc
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line:
            continue
        label, sep, file_part = line.partition("\t")
        if not sep or not label.strip() or not file_part.strip():
            raise CorpusError(f"{path}:{lineno}: expected 'label<TAB>path', got {raw!r}")
        entries.append((label.strip(), path.parent / file_part.strip()))
    return CorpusManifest(path.stem, tuple(entries))


@dataclass
class BenchRow:
    corpus: str
    pair: str
    old_bytes: int
    new_bytes: int
    scenario: ScenarioClass | None  # None when the new image is empty
    patch_bytes: dict[str, int]  # per mode name
    factors: dict[str, float]  # new_bytes / patch_bytes per mode name
    diff_ms: dict[str, float]  # diff wall time per mode name
    external_bytes: dict[str, int] = field(default_factory=dict)


def run_corpus(
    manifest: CorpusManifest,
    modes: tuple[DiffMode, ...] = (MINIMAL, FAST),
    external_tools: dict[str, str] | None = None,
) -> list[BenchRow]:
    """One row per consecutive version pair, every patch verified.

    `external_tools` optionally maps a column name to a command template
    with {old} {new} {out} placeholders; the resulting file sizes are
    recorded as opaque extra columns, without verification.
    """
    if not modes:
        raise CorpusError("at least one diff mode is required")
    names = [mode.name for mode in modes]
    if len(set(names)) != len(names):
        raise CorpusError("diff modes must have distinct names")
    images = []
    for label, file_path in manifest.entries:
        try:
            images.append((label, Path(file_path).read_bytes()))
        except OSError as exc:
            raise CorpusError(f"cannot read version {label!r}: {exc}") from exc

    rows = []
    for (old_label, old), (new_label, new) in zip(images, images[1:]):
        pair = f"{old_label}->{new_label}"
        patches: dict[str, bytes] = {}
        diff_ms: dict[str, float] = {}
        for mode in modes:
            t0 = time.perf_counter()
            try:
                script = compute_edit_script(old, new, mode)
            except DeltaError as exc:
                raise CorpusError(f"pair {pair}: {exc}") from exc
            diff_ms[mode.name] = (time.perf_counter() - t0) * 1000.0
            try:
                patch = encode_patch(script)
            except DeltaError as exc:
                raise CorpusError(f"pair {pair}: {exc}") from exc
            if not verify(old, new, patch):
                raise VerificationError(f"pair {pair}: patch failed verification in {mode.name} mode")
            patches[mode.name] = patch
        ref = patches["minimal"] if "minimal" in patches else patches[names[0]]
        scenario = classify_scenario(len(ref), len(new)) if new else None
        row = BenchRow(
            corpus=manifest.name,
            pair=pair,
            old_bytes=len(old),
            new_bytes=len(new),
            scenario=scenario,
            patch_bytes={name: len(patches[name]) for name in names},
            factors={name: len(new) / len(patches[name]) for name in names},
            diff_ms=diff_ms,
        )
        for tool, template in (external_tools or {}).items():
            row.external_bytes[tool] = _run_external(template, old, new, pair)
        rows.append(row)
    return rows


def _run_external(template: str, old: bytes, new: bytes, pair: str) -> int:
    with tempfile.TemporaryDirectory(prefix="fwdelta-ext-") as tmp:
        tmp_path = Path(tmp)
        old_file = tmp_path / "old.bin"
        new_file = tmp_path / "new.bin"
        out_file = tmp_path / "patch.out"
        old_file.write_bytes(old)
        new_file.write_bytes(new)
        argv = [
            part.format(old=old_file, new=new_file, out=out_file)
            for part in shlex.split(template)
        ]
        try:
            subprocess.run(argv, check=True, capture_output=True)
            return out_file.stat().st_size
        except (OSError, subprocess.CalledProcessError) as exc:
            raise CorpusError(f"pair {pair}: external tool failed: {exc}") from exc


def aggregate(rows: list[BenchRow]) -> dict[str, dict[str, float]]:
    """Mean compression factor per scenario per mode; empty groups omitted."""
    sums: dict[str, dict[str, list[float]]] = {}
    for row in rows:
        if row.scenario is None:
            continue
        group = sums.setdefault(row.scenario.value, {})
        for name, factor in row.factors.items():
            group.setdefault(name, []).append(factor)
    result: dict[str, dict[str, float]] = {}
    for scenario in ScenarioClass:
        group = sums.get(scenario.value)
        if group:
            result[scenario.value] = {
                name: sum(vals) / len(vals) for name, vals in group.items()
            }
    return result


def _mode_names(rows: list[BenchRow]) -> list[str]:
    ordered = []
    for row in rows:
        for name in row.patch_bytes:
            if name not in ordered:
                ordered.append(name)
    return ordered


def _tool_names(rows: list[BenchRow]) -> list[str]:
    names: set[str] = set()
    for row in rows:
        names.update(row.external_bytes)
    return sorted(names)


def emit_report(
    rows: list[BenchRow],
    aggregates: dict[str, dict[str, float]],
    format: str = "csv",
    include_timings: bool = False,
) -> str:
    """Serialize rows plus aggregates with a fixed layout and key order.

    Timings are excluded by default so repeated runs over the same corpus
    produce byte-identical reports.
    """
    if format == "csv":
        return _emit_csv(rows, aggregates, include_timings)
    if format == "json":
        return _emit_json(rows, aggregates, include_timings)
    raise ValueError(f"unknown report format {format!r}")


def _emit_csv(rows, aggregates, include_timings: bool) -> str:
    modes = _mode_names(rows)
    tools = _tool_names(rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["corpus", "pair", "old_bytes", "new_bytes", "scenario"]
    for name in modes:
        header += [f"patch_bytes_{name}", f"factor_{name}"]
    if include_timings:
        header += [f"diff_ms_{name}" for name in modes]
    header += [f"{tool}_bytes" for tool in tools]
    writer.writerow(header)
    for row in rows:
        record = [
            row.corpus,
            row.pair,
            row.old_bytes,
            row.new_bytes,
            row.scenario.value if row.scenario else "NA",
        ]
        for name in modes:
            record += [row.patch_bytes[name], repr(row.factors[name])]
        if include_timings:
            record += [repr(row.diff_ms[name]) for name in modes]
        record += [row.external_bytes.get(tool, "") for tool in tools]
        writer.writerow(record)
    writer.writerow([])
    writer.writerow(["scenario"] + [f"mean_factor_{name}" for name in modes])
    for scenario, means in aggregates.items():
        writer.writerow([scenario] + [repr(means[name]) for name in modes if name in means])
    return buf.getvalue()


def _emit_json(rows, aggregates, include_timings: bool) -> str:
    modes = _mode_names(rows)
    doc = {
        "schema": REPORT_SCHEMA,
        "modes": modes,
        "rows": [],
        "aggregates": aggregates,
    }
    for row in rows:
        entry = {
            "corpus": row.corpus,
            "pair": row.pair,
            "old_bytes": row.old_bytes,
            "new_bytes": row.new_bytes,
            "scenario": row.scenario.value if row.scenario else None,
            "patches": {
                name: {"bytes": row.patch_bytes[name], "factor": row.factors[name]}
                for name in modes
            },
        }
        if include_timings:
            entry["diff_ms"] = {name: row.diff_ms[name] for name in modes}
        if row.external_bytes:
            entry["external_bytes"] = dict(sorted(row.external_bytes.items()))
        doc["rows"].append(entry)
    return json.dumps(doc, indent=2) + "\n"
