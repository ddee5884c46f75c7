"""Pixel-parallel rendering of the parameter plane and of Julia sets.

Work is split into 32x32 tiles handed to a thread pool. Each pixel is a pure
function of its coordinates, so output bytes do not depend on scheduling.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path

import numpy as np

from . import kernels
from .boundary import DEFAULT_ORBIT_N, Verdict, classify_parameter
from .dynamics import MapParams
from .linearization import build_traps
from .rotation import RotationNumber

TILE = 32


class Tag(IntEnum):
    EXTERIOR = 0
    INTERIOR = 1
    ON_GAMMA = 2
    UNDETERMINED = 3
    MASKED = 4
    FATOU_ZERO = 5      # lands in the disk about 0 after an even number of steps
    FATOU_INF = 6
    JULIA = 7


VERDICT_TAG = {
    Verdict.EXTERIOR: Tag.EXTERIOR,
    Verdict.INTERIOR: Tag.INTERIOR,
    Verdict.ON_GAMMA: Tag.ON_GAMMA,
    Verdict.UNDETERMINED: Tag.UNDETERMINED,
}

DEFAULT_PALETTE = {
    Tag.EXTERIOR: (40, 70, 160),
    Tag.INTERIOR: (150, 200, 245),
    Tag.ON_GAMMA: (230, 40, 40),
    Tag.UNDETERMINED: (255, 200, 0),
    Tag.MASKED: (0, 0, 0),
    Tag.FATOU_ZERO: (250, 210, 120),
    Tag.FATOU_INF: (120, 190, 120),
    Tag.JULIA: (0, 0, 0),
}


@dataclass(frozen=True)
class Rect:
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError(f"rectangle is not well ordered: {self}")

    @classmethod
    def parse(cls, text: str) -> "Rect":
        parts = [float(x) for x in text.split(",")]
        if len(parts) != 4:
            raise ValueError("rect needs four comma-separated numbers xmin,xmax,ymin,ymax")
        return cls(*parts)

    def as_list(self) -> list[float]:
        return [self.xmin, self.xmax, self.ymin, self.ymax]


FIGURE1_RECT = Rect(-2.0, 2.0, -2.7, 1.3)


@dataclass
class ImageBuffer:
    """Row-major image; row 0 is the top edge (largest imaginary part)."""

    width: int
    height: int
    rect: Rect
    tags: np.ndarray
    shade: np.ndarray
    meta: dict = field(default_factory=dict)

    @classmethod
    def empty(cls, rect: Rect, width: int, height: int) -> "ImageBuffer":
        if width < 1 or height < 1:
            raise ValueError("image size must be positive")
        return cls(width, height, rect, np.full((height, width), Tag.UNDETERMINED, dtype=np.uint8),
                   np.zeros((height, width), dtype=np.float64))

    @property
    def dx(self) -> float:
        return (self.rect.xmax - self.rect.xmin) / self.width

    @property
    def dy(self) -> float:
        return (self.rect.ymax - self.rect.ymin) / self.height

    def to_plane(self, px, py):
        """Continuous pixel coordinates (0..width, 0..height) to the plane."""
        px = np.asarray(px, dtype=float)
        py = np.asarray(py, dtype=float)
        x = self.rect.xmin + px / self.width * (self.rect.xmax - self.rect.xmin)
        y = self.rect.ymax - py / self.height * (self.rect.ymax - self.rect.ymin)
        return x + 1j * y

    def to_pixel(self, z):
        z = np.asarray(z, dtype=complex)
        px = (z.real - self.rect.xmin) / (self.rect.xmax - self.rect.xmin) * self.width
        py = (self.rect.ymax - z.imag) / (self.rect.ymax - self.rect.ymin) * self.height
        return px, py

    def centers(self, rows: slice, cols: slice) -> np.ndarray:
        j = np.arange(self.height)[rows] + 0.5
        i = np.arange(self.width)[cols] + 0.5
        return self.to_plane(i[None, :], j[:, None])

    def counts(self) -> dict[str, int]:
        vals, cnt = np.unique(self.tags, return_counts=True)
        return {Tag(int(v)).name: int(c) for v, c in zip(vals, cnt)}


def _tiles(h: int, w: int):
    for r in range(0, h, TILE):
        for c in range(0, w, TILE):
            yield slice(r, min(r + TILE, h)), slice(c, min(c + TILE, w))


def _run_tiles(img: ImageBuffer, work, threads: int):
    tiles = list(_tiles(img.height, img.width))
    if threads <= 1:
        for t in tiles:
            work(*t)
    else:
        with ThreadPoolExecutor(threads) as ex:
            list(ex.map(lambda t: work(*t), tiles))


def _shade_steps(step: int | None, budget: int) -> float:
    if step is None:
        return 1.0
    return math.log1p(step) / math.log1p(budget)


def classify_pixel(theta: RotationNumber, alpha: complex, N: int) -> tuple[Tag, float]:
    """Tag and shade for one parameter using the fast classifier (no polyline test)."""
    try:
        c = classify_parameter(MapParams(theta, alpha), N, full=False)
    except (ValueError, ArithmeticError, FloatingPointError):
        return Tag.UNDETERMINED, 0.0
    tag = VERDICT_TAG[c.verdict]
    off = {Tag.EXTERIOR: "c2", Tag.INTERIOR: "c1"}.get(tag)
    if off is None:
        return tag, 1.0 if tag is Tag.ON_GAMMA else 0.0
    te = c.evidence[off].trap_entry
    return tag, _shade_steps(te[0] if te else None, N)


def render_param_plane(theta: RotationNumber, rect: Rect = FIGURE1_RECT, width: int = 200, height: int = 185,
                       N: int = DEFAULT_ORBIT_N, threads: int = 1) -> ImageBuffer:
    """Classify the parameter at every pixel center; the pixel containing 0 is masked."""
    img = ImageBuffer.empty(rect, width, height)

    def work(rows, cols):
        zs = img.centers(rows, cols)
        for a in range(zs.shape[0]):
            for b in range(zs.shape[1]):
                alpha = complex(zs[a, b])
                r, c = rows.start + a, cols.start + b
                if abs(alpha.real) <= img.dx / 2 and abs(alpha.imag) <= img.dy / 2:
                    img.tags[r, c], img.shade[r, c] = Tag.MASKED, 0.0
                    continue
                img.tags[r, c], img.shade[r, c] = classify_pixel(theta, alpha, N)

    _run_tiles(img, work, threads)
    img.meta = {"kind": "param-plane", "theta": float(theta), "theta_label": theta.label(), "N": N}
    return img


def render_julia(p: MapParams, rect: Rect, width: int, height: int, N: int = 5000, threads: int = 1,
                 series_order: int = 128) -> ImageBuffer:
    """Forward-iterate f (single steps, up to 2N) until a trap is hit."""
    r0, rinf = build_traps(p, series_order)
    if not (r0 > 0 and rinf > 0):
        raise RuntimeError(f"trap construction failed (r0={r0}, rinf={rinf})")
    img = ImageBuffer.empty(rect, width, height)
    code = (Tag.FATOU_ZERO, Tag.FATOU_INF, Tag.JULIA)

    def work(rows, cols):
        zs = np.ascontiguousarray(img.centers(rows, cols).ravel())
        tags = np.empty(zs.shape[0], dtype=np.int64)
        steps = np.empty(zs.shape[0], dtype=np.int64)
        kernels.julia_tile(p.alpha, p.lam, zs, 2 * N, r0, rinf, tags, steps)
        shape = (rows.stop - rows.start, cols.stop - cols.start)
        img.tags[rows, cols] = np.array(code, dtype=np.uint8)[tags].reshape(shape)
        img.shade[rows, cols] = (np.log1p(steps) / math.log1p(2 * N)).reshape(shape)

    _run_tiles(img, work, threads)
    img.meta = {"kind": "julia", "theta": float(p.theta), "theta_label": p.theta.label(),
                "alpha": [p.alpha.real, p.alpha.imag], "N": N, "traps": [r0, rinf]}
    return img


def to_rgb(img: ImageBuffer, palette=None, shade_strength: float = 0.6) -> np.ndarray:
    """uint8 (h, w, 3) array; luminance is scaled by 1 - shade_strength * shade."""
    palette = DEFAULT_PALETTE if palette is None else palette
    lut = np.zeros((len(Tag), 3), dtype=np.float64)
    for t in Tag:
        lut[t] = palette.get(t, (255, 0, 255))
    base = lut[img.tags]
    factor = 1.0 - shade_strength * np.clip(img.shade, 0.0, 1.0)
    return np.clip(np.rint(base * factor[..., None]), 0, 255).astype(np.uint8)


def ppm_bytes(img: ImageBuffer, palette=None, shade_strength: float = 0.6) -> bytes:
    rgb = to_rgb(img, palette, shade_strength)
    return f"P6\n{img.width} {img.height}\n255\n".encode("ascii") + rgb.tobytes()


def write_ppm(img: ImageBuffer, path, palette=None, shade_strength: float = 0.6) -> Path:
    path = Path(path)
    data = ppm_bytes(img, palette, shade_strength)
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def write_png(img: ImageBuffer, path, palette=None, shade_strength: float = 0.6) -> Path:
    from PIL import Image

    path = Path(path)
    Image.fromarray(to_rgb(img, palette, shade_strength), "RGB").save(path)
    return path


def sidecar(img: ImageBuffer, extra: dict | None = None) -> dict:
    out = {
        "rect": img.rect.as_list(),
        "resolution": [img.width, img.height],
        "counts": img.counts(),
        **img.meta,
    }
    if extra:
        out.update(extra)
    return out


def write_sidecar(img: ImageBuffer, path, extra: dict | None = None) -> Path:
    path = Path(path)
    path.write_text(json.dumps(sidecar(img, extra), indent=2, sort_keys=True) + "\n")
    return path


def interface_mask(img: ImageBuffer) -> np.ndarray:
    """Pixels on the Interior/Exterior interface: fringe tags, or a 4-neighbour of the opposite region."""
    t = img.tags
    fringe = (t == Tag.ON_GAMMA) | (t == Tag.UNDETERMINED)
    ext, inn = t == Tag.EXTERIOR, t == Tag.INTERIOR
    touch = np.zeros_like(fringe)
    for axis in (0, 1):
        for shift in (1, -1):
            e = np.roll(ext, shift, axis)
            i = np.roll(inn, shift, axis)
            if axis == 0:
                sl = slice(0, 1) if shift == 1 else slice(-1, None)
                e[sl, :] = False
                i[sl, :] = False
            else:
                sl = slice(0, 1) if shift == 1 else slice(-1, None)
                e[:, sl] = False
                i[:, sl] = False
            touch |= (inn & e) | (ext & i)
    return fringe | touch


def interface_distance(img: ImageBuffer, points) -> np.ndarray:
    """Distance in pixels from each plane point to the nearest interface pixel center.

    Points outside the rectangle get NaN.
    """
    mask = interface_mask(img)
    rr, cc = np.nonzero(mask)
    centers = (cc + 0.5) + 1j * (rr + 0.5)
    px, py = img.to_pixel(points)
    out = np.full(len(np.atleast_1d(px)), np.nan)
    for k, (x, y) in enumerate(zip(np.atleast_1d(px), np.atleast_1d(py))):
        if 0 <= x <= img.width and 0 <= y <= img.height and len(centers):
            out[k] = float(np.min(np.abs(centers - (x + 1j * y))))
    return out
