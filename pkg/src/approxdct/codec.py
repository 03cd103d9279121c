"""JPEG-like block compression harness.

Images are split into 8x8 blocks, each block is transformed with
``C_hat @ A @ C_hat.T``, only the first ``r`` coefficients of the zigzag scan
are kept, and the block is reconstructed with the transpose.  Retention is the
only lossy step; there is no quantization table and no level shift.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import pgm
from .errors import CorpusError, DimensionError, RetentionError
from .metrics import psnr, uqi
from .transforms import CATALOG_NAMES, ExactDct, apply_flow, flow_graph, orthogonal_matrix

BLOCK = 8


@dataclass(frozen=True, eq=False)
class ImagePlane:
    """8-bit greyscale raster, row-major ``(height, width)``."""

    samples: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.samples)
        if a.ndim != 2:
            raise DimensionError("image must be 2-D")
        if a.dtype != np.uint8:
            if a.size and (a.min() < 0 or a.max() > 255 or np.any(a != np.round(a))):
                raise ValueError("samples must be integers in [0, 255]")
            a = a.astype(np.uint8)
        else:
            a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "samples", a)

    @property
    def width(self) -> int:
        return self.samples.shape[1]

    @property
    def height(self) -> int:
        return self.samples.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.samples if dtype is None else self.samples.astype(dtype)

    def __eq__(self, other):
        return isinstance(other, ImagePlane) and np.array_equal(self.samples, other.samples)

    __hash__ = None


def load_pgm(path) -> ImagePlane:
    return ImagePlane(pgm.read_pgm(path))


def save_pgm(img: ImagePlane, path) -> None:
    pgm.write_pgm(np.asarray(img), path)


# -- 2-D transform ---------------------------------------------------------


def _rows_then_columns(x, flow):
    """Apply a 1-D flow along axes -1 then -2 of ``x`` (``(..., 8, 8)``)."""
    # rows: move the row-sample axis to the front
    y = apply_flow(flow, np.moveaxis(x, -1, 0))
    y = np.moveaxis(y, 0, -1)
    z = apply_flow(flow, np.moveaxis(y, -2, 0))
    return np.moveaxis(z, 0, -2)


def forward_2d(block, spec) -> np.ndarray:
    """2-D transform ``C_hat @ A @ C_hat.T`` of one block or a stack ``(..., 8, 8)``.

    For catalog approximations the 1-D flow graph runs over rows and then
    columns and the ``D`` scaling is applied afterwards.  The exact DCT and
    specs without a factorization (search candidates) use dense products.
    """
    a = np.asarray(block, dtype=float)
    if a.shape[-2:] != (BLOCK, BLOCK):
        raise DimensionError(f"blocks must be 8x8, got {a.shape}")
    if isinstance(spec, ExactDct):
        return spec.C @ a @ spec.C.T
    c = orthogonal_matrix(spec)
    if spec.name not in CATALOG_NAMES:
        return c @ a @ c.T
    y = _rows_then_columns(a, flow_graph(spec))
    return y * np.outer(spec.D, spec.D)


def inverse_2d(coeffs, spec) -> np.ndarray:
    """Inverse of :func:`forward_2d`: ``C_hat.T @ F @ C_hat``."""
    f = np.asarray(coeffs, dtype=float)
    if f.shape[-2:] != (BLOCK, BLOCK):
        raise DimensionError(f"blocks must be 8x8, got {f.shape}")
    if isinstance(spec, ExactDct):
        return spec.C.T @ f @ spec.C
    c = orthogonal_matrix(spec)
    if spec.name not in CATALOG_NAMES:
        return c.T @ f @ c
    g = f * np.outer(spec.D, spec.D)
    return _rows_then_columns(g, flow_graph(spec).transpose())


# -- zigzag retention ------------------------------------------------------


@lru_cache(maxsize=None)
def zigzag_order(n: int = BLOCK) -> tuple[tuple[int, int], ...]:
    """JPEG zigzag scan: (0,0), (0,1), (1,0), (2,0), (1,1), (0,2), ..."""
    order = []
    for s in range(2 * n - 1):
        diag = [(i, s - i) for i in range(n) if 0 <= s - i < n]
        # even anti-diagonals run bottom-left to top-right
        order.extend(reversed(diag) if s % 2 == 0 else diag)
    return tuple(order)


@lru_cache(maxsize=None)
def retention_mask(r: int) -> np.ndarray:
    if not 1 <= r <= BLOCK * BLOCK:
        raise RetentionError(f"retention count {r} outside 1..64")
    m = np.zeros((BLOCK, BLOCK), dtype=bool)
    for i, j in zigzag_order()[:r]:
        m[i, j] = True
    m.setflags(write=False)
    return m


def zigzag_retain(coeffs, r: int) -> np.ndarray:
    """Zero every coefficient past zigzag position ``r``; works on stacks too."""
    return np.where(retention_mask(r), coeffs, 0.0)


# -- images ------------------------------------------------------------------


def to_blocks(a: np.ndarray) -> np.ndarray:
    h, w = a.shape
    if h % BLOCK or w % BLOCK:
        raise DimensionError(f"image {w}x{h} is not a whole number of 8x8 blocks")
    return a.reshape(h // BLOCK, BLOCK, w // BLOCK, BLOCK).swapaxes(1, 2)


def from_blocks(b: np.ndarray) -> np.ndarray:
    bh, bw = b.shape[:2]
    return b.swapaxes(1, 2).reshape(bh * BLOCK, bw * BLOCK)


def round_clamp(x: np.ndarray) -> np.ndarray:
    """Round half away from zero, clamp to [0, 255].

    Values are snapped to a 1e-9 grid first so that exact ties (common with
    dyadic scalings) round the same way whichever pipeline produced them.
    """
    x = np.round(x, 9)
    r = np.sign(x) * np.floor(np.abs(x) + 0.5)
    return np.clip(r, 0, 255).astype(np.uint8)


@dataclass(frozen=True)
class CompressionResult:
    reconstructed: ImagePlane
    psnr: float
    uqi: float


def reconstruct(img, spec, r: int) -> ImagePlane:
    a = np.asarray(img, dtype=float)
    blocks = to_blocks(a)
    kept = zigzag_retain(forward_2d(blocks, spec), r)
    return ImagePlane(round_clamp(from_blocks(inverse_2d(kept, spec))))


def compress_image(img, spec, r: int) -> CompressionResult:
    """Block transform, keep ``r`` zigzag coefficients, reconstruct and score."""
    if not isinstance(img, ImagePlane):
        img = ImagePlane(img)
    rec = reconstruct(img, spec, r)
    return CompressionResult(rec, psnr(img, rec), uqi(img, rec))


@dataclass(frozen=True)
class CorpusAverage:
    avg_psnr: float
    avg_uqi: float
    n_images: int
    n_psnr_excluded: int


def corpus_average(corpus, spec, r: int, workers: int | None = None) -> CorpusAverage:
    """Mean PSNR and UQI over a corpus.

    Images reconstructed exactly (infinite PSNR) are left out of the PSNR mean
    and counted in ``n_psnr_excluded``; they still count towards UQI.
    """
    corpus = list(corpus)
    if not corpus:
        raise CorpusError("empty corpus")

    def one(img):
        res = compress_image(img, spec, r)
        return res.psnr, res.uqi

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, corpus))
    else:
        results = [one(img) for img in corpus]
    p = np.array([x for x, _ in results])
    q = np.array([y for _, y in results])
    finite = p[np.isfinite(p)]
    avg_psnr = float(np.mean(finite)) if finite.size else math.inf
    return CorpusAverage(avg_psnr, float(np.mean(q)), len(corpus), int(p.size - finite.size))


def read_manifest(path) -> list[Path]:
    """Paths listed in a manifest, one per line, ``#`` comments; relative to the manifest."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise CorpusError(f"cannot read manifest {path}: {e}") from None
    base = path.parent
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            p = Path(line)
            out.append(p if p.is_absolute() else base / p)
    return out


def load_corpus(manifest) -> list[ImagePlane]:
    paths = read_manifest(manifest)
    if not paths:
        raise CorpusError(f"manifest {manifest} lists no images")
    return [load_pgm(p) for p in paths]
