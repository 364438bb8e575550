"""Transmittance maps: container, PGM/CSV round trips, synthetic objects.

A map is a W x H grid of real transmittance values in [0, 1].  Two file
formats are supported:

* PGM (P2 ASCII or P5 binary, maxval 255), with T = pixel / 255: lossless
  up to the 1/255 quantization and readable by anything;
* headerless CSV float grids written with 17 significant digits: exact.

Synthetic letter objects mimic a cut-out stencil: inside the strokes the
transmittance is 1 at the core and ramps linearly down to 0 at the stroke
boundary over ``edge_softness`` pixels (Euclidean distance transform), and
the opaque background is exactly 0.
"""

import re
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import MapFormatError

PGM_MAXVAL = 255


@dataclass(frozen=True)
class TransmittanceMap:
    """Row-major W x H grid of transmittance values in [0, 1]."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("map must be a 2-D grid with both dimensions >= 1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("map contains non-finite values")
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise ValueError("map values must lie in [0, 1]")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


def rmse(a: TransmittanceMap, b: TransmittanceMap) -> float:
    """Root-mean-square difference between two equally sized maps."""
    if a.values.shape != b.values.shape:
        raise ValueError(f"dimension mismatch: {a.values.shape} vs {b.values.shape}")
    diff = a.values - b.values
    return float(np.sqrt(np.mean(diff * diff)))


# -----------------------------
# PGM / CSV input and output
# -----------------------------

def _parse_pgm_tokens(data: bytes, count: int, what: str):
    """Whitespace/comment-tolerant header tokenizer; returns (tokens, offset)."""
    tokens = []
    pos = 0
    while len(tokens) < count:
        if pos >= len(data):
            raise MapFormatError(f"truncated PGM header while reading {what}")
        ch = data[pos:pos + 1]
        if ch == b"#":
            eol = data.find(b"\n", pos)
            pos = len(data) if eol < 0 else eol + 1
        elif ch.isspace():
            pos += 1
        else:
            end = pos
            while end < len(data) and not data[end:end + 1].isspace():
                end += 1
            tokens.append(data[pos:end])
            pos = end
    return tokens, pos


def _load_pgm(data: bytes, path) -> TransmittanceMap:
    magic = data[:2]
    (w_tok, h_tok, max_tok), pos = _parse_pgm_tokens(data[2:], 3, "dimensions/maxval")
    try:
        width, height, maxval = int(w_tok), int(h_tok), int(max_tok)
    except ValueError:
        raise MapFormatError(f"{path}: malformed PGM header (non-integer fields)") from None
    if width < 1 or height < 1:
        raise MapFormatError(f"{path}: nonpositive PGM dimensions {width}x{height}")
    if width * height > 100_000_000:
        raise MapFormatError(f"{path}: PGM dimensions {width}x{height} overflow the sane limit")
    if maxval != PGM_MAXVAL:
        raise MapFormatError(f"{path}: only maxval {PGM_MAXVAL} PGM is supported, got {maxval}")
    body_start = 2 + pos
    if magic == b"P5":
        # exactly one whitespace byte separates the maxval from pixel data
        if not data[body_start:body_start + 1].isspace():
            raise MapFormatError(f"{path}: malformed PGM header "
                                 "(missing separator before P5 pixel data)")
        body = data[body_start + 1:]
        if len(body) < width * height:
            raise MapFormatError(f"{path}: P5 pixel data truncated "
                                 f"({len(body)} bytes for {width * height} pixels)")
        pixels = np.frombuffer(body[:width * height], dtype=np.uint8).astype(np.float64)
    else:
        text = data[body_start:]
        fields = re.split(rb"\s+", text.strip())
        if len(fields) != width * height or fields == [b""]:
            raise MapFormatError(f"{path}: P2 pixel count {len(fields)} does not match "
                                 f"{width}x{height}")
        try:
            pixels = np.array([int(f) for f in fields], dtype=np.float64)
        except ValueError:
            raise MapFormatError(f"{path}: P2 pixel data contains non-integer tokens") from None
        if np.any(pixels < 0) or np.any(pixels > maxval):
            raise MapFormatError(f"{path}: pixel value outside [0, {maxval}]")
    return TransmittanceMap(pixels.reshape(height, width) / PGM_MAXVAL)


def _load_csv(data: bytes, path) -> TransmittanceMap:
    rows = []
    ncols = None
    for lineno, line in enumerate(data.decode("ascii", errors="replace").splitlines(), 1):
        if not line.strip():
            continue
        fields = line.split(",")
        if ncols is None:
            ncols = len(fields)
        elif len(fields) != ncols:
            raise MapFormatError(f"{path}:{lineno}: ragged CSV row "
                                 f"({len(fields)} fields, expected {ncols})")
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            raise MapFormatError(f"{path}:{lineno}: non-numeric CSV field") from None
    if not rows:
        raise MapFormatError(f"{path}: empty CSV map")
    try:
        return TransmittanceMap(np.array(rows))
    except ValueError as exc:
        raise MapFormatError(f"{path}: {exc}") from None


def load_map(path) -> TransmittanceMap:
    """Read a transmittance map; format sniffed from the PGM magic bytes."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] in (b"P2", b"P5"):
        try:
            return _load_pgm(data, path)
        except MapFormatError:
            raise
        except Exception as exc:
            raise MapFormatError(f"{path}: malformed PGM ({exc})") from None
    return _load_csv(data, path)


def save_map(tmap: TransmittanceMap, path, fmt: str = None) -> None:
    """Write a map as binary PGM (P5), ASCII PGM (P2) or CSV.

    ``fmt`` is one of "pgm", "pgm-ascii", "csv"; by default it follows the
    file extension (.pgm -> binary PGM, anything else -> CSV).
    """
    if fmt is None:
        fmt = "pgm" if str(path).lower().endswith(".pgm") else "csv"
    if fmt == "csv":
        lines = [",".join(f"{v:.17g}" for v in row) for row in tmap.values]
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        return
    quantized = np.rint(tmap.values * PGM_MAXVAL).astype(np.uint8)
    if fmt == "pgm":
        with open(path, "wb") as fh:
            fh.write(f"P5\n{tmap.width} {tmap.height}\n{PGM_MAXVAL}\n".encode("ascii"))
            fh.write(quantized.tobytes())
    elif fmt == "pgm-ascii":
        body = "\n".join(" ".join(str(v) for v in row) for row in quantized)
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(f"P2\n{tmap.width} {tmap.height}\n{PGM_MAXVAL}\n{body}\n")
    else:
        raise ValueError(f"unknown map format {fmt!r}")


# -----------------------------
# Synthetic cut-out objects
# -----------------------------

# 5x7 stencil bitmaps; '#' marks the cut-out (transmitting) strokes
GLYPHS = {
    "S": (".####",
          "#....",
          "#....",
          ".###.",
          "....#",
          "....#",
          "####."),
    "O": (".###.",
          "#...#",
          "#...#",
          "#...#",
          "#...#",
          "#...#",
          ".###."),
    "I": ("#####",
          "..#..",
          "..#..",
          "..#..",
          "..#..",
          "..#..",
          "#####"),
    "T": ("#####",
          "..#..",
          "..#..",
          "..#..",
          "..#..",
          "..#..",
          "..#.."),
    "L": ("#....",
          "#....",
          "#....",
          "#....",
          "#....",
          "#....",
          "#####"),
    "H": ("#...#",
          "#...#",
          "#...#",
          "#####",
          "#...#",
          "#...#",
          "#...#"),
    "E": ("#####",
          "#....",
          "#....",
          "####.",
          "#....",
          "#....",
          "#####"),
    "C": (".####",
          "#....",
          "#....",
          "#....",
          "#....",
          "#....",
          ".####"),
}


def glyph_mask(width: int, height: int, glyph: str) -> np.ndarray:
    """Boolean cut-out mask for a glyph scaled into the grid with a margin."""
    key = glyph.strip().upper()
    if key not in GLYPHS:
        raise ValueError(f"unknown glyph {glyph!r}; available: {sorted(GLYPHS)}")
    rows = GLYPHS[key]
    cells_h, cells_w = len(rows), len(rows[0])
    margin = max(1, round(0.08 * min(width, height)))
    span_w = width - 2 * margin
    span_h = height - 2 * margin
    mask = np.zeros((height, width), dtype=bool)
    for y in range(margin, height - margin):
        row = rows[(y - margin) * cells_h // span_h]
        for x in range(margin, width - margin):
            if row[(x - margin) * cells_w // span_w] == "#":
                mask[y, x] = True
    return mask


def synth_letter_object(width: int, height: int, glyph: str = "S",
                        edge_softness: float = 3.0) -> TransmittanceMap:
    """Cut-out letter with T = 1 cores ramping linearly to 0 at the edges.

    The ramp uses the Euclidean distance to the opaque background, divided
    by ``edge_softness`` and capped at 1, so softness below one pixel gives
    a binary stencil.  Strokes narrower than 2 * edge_softness never reach
    a full-transmission core.
    """
    if width < 16 or height < 16:
        raise ValueError(f"dimensions must be >= 16, got {width}x{height}")
    if not edge_softness > 0:
        raise ValueError(f"edge_softness must be > 0, got {edge_softness}")
    mask = glyph_mask(width, height, glyph)
    dist = ndimage.distance_transform_edt(mask)
    return TransmittanceMap(np.minimum(dist / edge_softness, 1.0))
