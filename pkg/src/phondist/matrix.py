"""Dense symmetric distance matrices, their PCA, and TSV/SVG export.

A DistanceMatrix holds entries in [0, 1] with an exactly zero diagonal and
exact symmetry (each pair is computed once and mirrored). No metric-space
property beyond that is assumed; in particular the triangle inequality may
fail, since a clamped linear model does not guarantee it.

PCA treats matrix rows as observations: columns are mean-centered and the
sample covariance is eigendecomposed. Component signs are fixed so each
component's largest-magnitude entry is positive, keeping exports reproducible.
"""

import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .errors import InputError, UnknownSegmentError
from .features import Inventory
from .model import LinearModel, predict_distance

_SYMMETRY_TOL = 1e-9


class DistanceMatrix:
    """Symmetric pairwise distances over an ordered segment list."""

    def __init__(self, segments: Iterable[str], values: np.ndarray):
        self.segments = tuple(segments)
        values = np.asarray(values, dtype=float)
        n = len(self.segments)
        if values.shape != (n, n):
            raise InputError(f"matrix shape {values.shape} does not match {n} segments")
        if len(set(self.segments)) != n:
            raise InputError("duplicate graphemes in matrix header")
        if not np.all(np.isfinite(values)):
            raise InputError("matrix contains non-finite entries")
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise InputError("matrix entries must lie in [0, 1]")
        if np.any(np.diagonal(values) != 0.0):
            raise InputError("matrix diagonal must be exactly 0")
        if not np.array_equal(values, values.T):
            raise InputError("matrix is not symmetric")
        self.values = values
        self._index = {g: i for i, g in enumerate(self.segments)}

    def __len__(self) -> int:
        return len(self.segments)

    def __contains__(self, grapheme: str) -> bool:
        return grapheme in self._index

    def index(self, grapheme: str) -> int:
        try:
            return self._index[grapheme]
        except KeyError:
            raise UnknownSegmentError(grapheme, where="matrix") from None

    def get(self, seg_a: str, seg_b: str) -> float:
        return float(self.values[self.index(seg_a), self.index(seg_b)])


@dataclass(frozen=True)
class PcaResult:
    components: np.ndarray  # (k, n), rows orthonormal
    eigenvalues: np.ndarray  # (k,), nonincreasing, nonnegative
    coordinates: np.ndarray  # (n_segments, k)
    segments: tuple[str, ...]


def get(dm: DistanceMatrix, seg_a: str, seg_b: str) -> float:
    return dm.get(seg_a, seg_b)


def build_matrix(m: LinearModel, inv: Inventory, include_null: bool = False) -> DistanceMatrix:
    """Materialize all pairwise model distances over an inventory.

    Each unordered pair is predicted once and mirrored, so symmetry is exact
    regardless of floating-point details.
    """
    segments = [s for s in inv.graphemes if s != inv.null_segment.grapheme]
    if include_null:
        segments.append(inv.null_segment.grapheme)
    n = len(segments)
    values = np.zeros((n, n))
    resolved = [inv.get_segment(g) for g in segments]
    for i in range(n):
        for j in range(i + 1, n):
            d = predict_distance(m, resolved[i], resolved[j])
            values[i, j] = d
            values[j, i] = d
    return DistanceMatrix(segments, values)


def load_reference_matrix(source: str | Path | TextIO) -> DistanceMatrix:
    """Load a matrix TSV (full square or lower-triangular, "#" comments).

    Full matrices must be symmetric to within 1e-9; the stored matrix is
    exactly symmetrized from the lower triangle either way.
    """
    lines = _data_lines(source)
    if not lines:
        raise InputError("matrix file is empty")
    header = lines[0].split("\t")
    if header and header[0].strip() in ("", "segment"):
        header = header[1:]
    names = [unicodedata.normalize("NFC", h.strip()) for h in header]
    if not names or any(not n for n in names):
        raise InputError("matrix header row is malformed")
    n = len(names)
    if len(lines) - 1 != n:
        raise InputError(f"expected {n} matrix rows, found {len(lines) - 1}")

    values = np.zeros((n, n))
    for i, line in enumerate(lines[1:]):
        cells = line.split("\t")
        label = unicodedata.normalize("NFC", cells[0].strip())
        if label != names[i]:
            raise InputError(f"row {i + 1} is labelled {label!r}, expected {names[i]!r}")
        entries = [c.strip() for c in cells[1:] if c.strip() != ""]
        if len(entries) == i + 1:  # lower triangle incl. diagonal
            row = _parse_floats(entries, label)
            values[i, : i + 1] = row
        elif len(entries) == n:
            values[i, :] = _parse_floats(entries, label)
        else:
            raise InputError(
                f"row {label!r} has {len(entries)} entries, expected {i + 1} or {n}"
            )

    upper = np.triu(values, k=1)
    if upper.any():  # full matrix: check symmetry before discarding the upper half
        if np.max(np.abs(values - values.T)) > _SYMMETRY_TOL:
            raise InputError(f"matrix asymmetric beyond {_SYMMETRY_TOL}")
    lower = np.tril(values)
    full = lower + np.tril(lower, k=-1).T
    return DistanceMatrix(names, full)


def pca(dm: DistanceMatrix, k: int) -> PcaResult:
    """Principal components of the matrix rows (mean-centered columns)."""
    n = len(dm)
    if not 1 <= k <= n:
        raise InputError(f"k must be in [1, {n}], got {k}")
    X = dm.values
    centered = X - X.mean(axis=0)
    denom = max(n - 1, 1)
    cov = (centered.T @ centered) / denom
    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = np.clip(eigenvalues[order][:k], 0.0, None)
    components = eigenvectors[:, order][:, :k].T.copy()
    # Sign convention: largest-magnitude entry of each component is positive.
    for row in components:
        pivot = np.argmax(np.abs(row))
        if row[pivot] < 0:
            row *= -1.0
    coordinates = centered @ components.T
    return PcaResult(
        components=components,
        eigenvalues=eigenvalues,
        coordinates=coordinates,
        segments=dm.segments,
    )


def export(
    obj: "DistanceMatrix | PcaResult",
    sink: str | Path | TextIO,
    fmt: str = "tsv",
    header: str = "",
) -> None:
    """Write a matrix or PCA result as "tsv" or (PCA only) "svg-scatter"."""
    if fmt == "tsv":
        if isinstance(obj, DistanceMatrix):
            export_matrix_tsv(obj, sink, header)
        else:
            export_pca_tsv(obj, sink, header)
    elif fmt == "svg-scatter":
        if not isinstance(obj, PcaResult):
            raise InputError("svg-scatter export requires a PCA result")
        export_pca_svg(obj, sink, header)
    else:
        raise InputError(f"unknown export format {fmt!r}")


def export_matrix_tsv(dm: DistanceMatrix, sink: str | Path | TextIO, header: str = "") -> None:
    """Write a full square TSV with 6-decimal entries."""
    out = []
    if header:
        out.append(f"# {header}")
    out.append("segment\t" + "\t".join(dm.segments))
    for grapheme, row in zip(dm.segments, dm.values):
        out.append(grapheme + "\t" + "\t".join(f"{v:.6f}" for v in row))
    _write_text(sink, "\n".join(out) + "\n")


def export_pca_tsv(result: PcaResult, sink: str | Path | TextIO, header: str = "") -> None:
    """Write per-segment component coordinates, 6 decimals."""
    k = result.coordinates.shape[1]
    out = []
    if header:
        out.append(f"# {header}")
    out.append("segment\t" + "\t".join(f"pc{i + 1}" for i in range(k)))
    for grapheme, coords in zip(result.segments, result.coordinates):
        out.append(grapheme + "\t" + "\t".join(f"{c:.6f}" for c in coords))
    _write_text(sink, "\n".join(out) + "\n")


def export_pca_svg(result: PcaResult, sink: str | Path | TextIO, header: str = "") -> None:
    """Static 800x600 scatter of (PC1, PC2) with one label per segment."""
    if result.coordinates.shape[1] < 2:
        raise InputError("SVG scatter needs at least 2 components")
    width, height, margin = 800, 600, 60
    xs = result.coordinates[:, 0]
    ys = result.coordinates[:, 1]

    def scale(v: np.ndarray, lo_px: float, hi_px: float) -> np.ndarray:
        span = v.max() - v.min()
        if span == 0:
            return np.full_like(v, (lo_px + hi_px) / 2.0)
        return lo_px + (v - v.min()) / span * (hi_px - lo_px)

    px = scale(xs, margin, width - margin)
    # SVG y axis grows downward.
    py = scale(ys, height - margin, margin)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
    ]
    if header:
        parts.append(f"<!-- {header} -->")
    parts.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    parts.append(
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="#888"/>'
    )
    parts.append(
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="#888"/>'
    )
    parts.append(
        f'<text x="{width // 2}" y="{height - margin // 4}" font-size="14" '
        'text-anchor="middle">PC1</text>'
    )
    parts.append(
        f'<text x="{margin // 3}" y="{height // 2}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 {margin // 3} {height // 2})">PC2</text>'
    )
    for grapheme, x, y in zip(result.segments, px, py):
        label = _xml_escape(grapheme)
        parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="4" fill="#1f6fb2"/>')
        parts.append(
            f'<text class="seg-label" x="{x + 6:.1f}" y="{y - 6:.1f}" font-size="16">{label}</text>'
        )
    parts.append("</svg>")
    _write_text(sink, "\n".join(parts) + "\n")


def _parse_floats(cells: list[str], label: str) -> list[float]:
    try:
        return [float(c) for c in cells]
    except ValueError as exc:
        raise InputError(f"row {label!r}: {exc}") from None


def _xml_escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _data_lines(source: str | Path | TextIO) -> list[str]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            raw = handle.readlines()
    else:
        raw = source.readlines()
    return [
        line.rstrip("\n")
        for line in raw
        if line.strip() and not line.lstrip().startswith("#")
    ]


def _write_text(sink: str | Path | TextIO, text: str) -> None:
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sink.write(text)
