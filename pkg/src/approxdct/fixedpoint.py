"""Bit-true integer evaluation of flow graphs.

Integers are exact and unbounded; growth is reported rather than wrapped.
A coefficient of +-1/2 is an arithmetic right shift; halving an odd value
loses a bit, and every such event is recorded with its stage and lanes.
Flows with halving stages can be given guard bits (the input is shifted left
first) so that every shift is exact and the output is ``2**g * T @ x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InexactShiftError, WordLengthError
from .transforms import N, FlowGraph, Permutation, TransformSpec, flow_graph, flow_to_matrix

WORD_LENGTHS = (4, 8, 12, 16)
DEFAULT_COUNT = 10_000


@dataclass(frozen=True)
class WordLength:
    L: int

    def __post_init__(self):
        if self.L not in WORD_LENGTHS:
            raise WordLengthError(f"word length {self.L} not in {WORD_LENGTHS}")

    @property
    def lo(self) -> int:
        return -(1 << (self.L - 1))

    @property
    def hi(self) -> int:
        return (1 << (self.L - 1)) - 1


@dataclass(frozen=True, eq=False)
class TestVectorBatch:
    """Uniform signed L-bit vectors from PCG64 seeded with ``SeedSequence([seed, L])``."""

    __test__ = False  # not a pytest class

    L: int
    count: int
    seed: int
    vectors: np.ndarray

    @classmethod
    def generate(cls, L: int, count: int = DEFAULT_COUNT, seed: int = 0) -> TestVectorBatch:
        w = WordLength(L)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, L])))
        v = rng.integers(w.lo, w.hi, endpoint=True, size=(count, N), dtype=np.int64)
        v.setflags(write=False)
        return cls(L, count, seed, v)


def two_lane_vectors(L: int) -> np.ndarray:
    """Every vector with two active lanes spanning the full L-bit range, others zero."""
    w = WordLength(L)
    vals = np.arange(w.lo, w.hi + 1, dtype=np.int64)
    a, b = np.meshgrid(vals, vals, indexing="ij")
    a, b = a.ravel(), b.ravel()
    blocks = []
    for i in range(N):
        for j in range(i + 1, N):
            v = np.zeros((a.size, N), dtype=np.int64)
            v[:, i], v[:, j] = a, b
            blocks.append(v)
    return np.concatenate(blocks)


@dataclass(frozen=True)
class InexactShift:
    stage: int
    lane: int
    source_lane: int
    count: int = 1


@dataclass
class IntegerEvaluation:
    outputs: np.ndarray
    stage_max: list[int]
    events: list[InexactShift] = field(default_factory=list)

    @property
    def inexact_shift_events(self) -> int:
        return sum(e.count for e in self.events)


def guard_bits_needed(flow: FlowGraph) -> int:
    """Stages containing a halving; one guard bit each makes every shift exact."""
    return sum(1 for s in flow.stages if any(c.denominator != 1 for _, _, c in s.entries))


def _run(flow: FlowGraph, x: np.ndarray, guard_bits: int, strict: bool) -> IntegerEvaluation:
    """Evaluate lanes on axis 0 of ``x`` (shape ``(8, n)``)."""
    if guard_bits:
        x = x << guard_bits
    stage_max = []
    events = []
    for si, stage in enumerate(flow.stages):
        out = np.zeros_like(x)
        for r, row in enumerate(stage.by_row):
            acc = None
            for c, coef in row:
                v = x[c]
                mag = abs(coef)
                if mag == 2:
                    v = v << 1
                elif mag == Fraction(1, 2):
                    odd = (v & 1) != 0
                    n_odd = int(np.count_nonzero(odd))
                    if n_odd:
                        if strict:
                            raise InexactShiftError(si, r, int(v[odd][0]))
                        events.append(InexactShift(si, r, c, n_odd))
                    v = v >> 1
                if coef < 0:
                    v = -v
                acc = v if acc is None else acc + v
            if acc is not None:
                out[r] = acc
        x = out
        stage_max.append(int(np.max(np.abs(x))) if x.size else 0)
    return IntegerEvaluation(flow.perm.apply(x), stage_max, events)


def eval_integer(flow: FlowGraph, x, guard_bits: int = 0, strict: bool = False) -> IntegerEvaluation:
    """Exact integer evaluation of one 8-vector.

    ``outputs`` equals ``2**guard_bits * T @ x`` unless an inexact shift was
    recorded.  With ``strict=True`` an inexact shift raises
    :class:`InexactShiftError` instead.
    """
    v = np.array([int(t) for t in x], dtype=object)
    if v.shape != (N,):
        raise ValueError(f"expected an 8-vector, got {len(v)} values")
    res = _run(flow, v.reshape(N, 1), guard_bits, strict)
    res.outputs = res.outputs[:, 0]
    return res


def eval_integer_batch(flow: FlowGraph, vectors, guard_bits: int = 0) -> IntegerEvaluation:
    """Evaluate many vectors at once; ``vectors`` is ``(n, 8)``, outputs likewise."""
    v = np.asarray(vectors)
    if v.ndim != 2 or v.shape[1] != N:
        raise ValueError(f"expected shape (n, 8), got {v.shape}")
    peak = int(np.max(np.abs(v))) if v.size else 0
    gain = max(max(sum(abs(c) for c in row) for row in m) for m in _prefix_matrices(flow))
    if peak * gain * (1 << guard_bits) < 2**62:
        v = v.astype(np.int64)
    else:
        v = v.astype(object)
    res = _run(flow, v.T.copy(), guard_bits, strict=False)
    res.outputs = res.outputs.T
    return res


@lru_cache(maxsize=None)
def _prefix_matrices(flow: FlowGraph) -> tuple[np.ndarray, ...]:
    """Exact matrices of the first 1, 2, ... stages (permutation excluded)."""
    return tuple(
        flow_to_matrix(FlowGraph(flow.stages[:k], Permutation.identity())) for k in range(1, len(flow.stages) + 1)
    )


def signed_width(lo: int, hi: int) -> int:
    """Fewest two's-complement bits holding every integer in ``[lo, hi]``."""
    w = 1
    while lo < -(1 << (w - 1)) or hi > (1 << (w - 1)) - 1:
        w += 1
    return w


@dataclass(frozen=True)
class StageGrowth:
    stage: str
    lane_ranges: tuple[tuple[int, int], ...]
    lane_widths: tuple[int, ...]

    @property
    def width(self) -> int:
        return max(self.lane_widths)

    @property
    def peak(self) -> int:
        return max(max(-lo, hi) for lo, hi in self.lane_ranges)


@dataclass(frozen=True)
class GrowthReport:
    L: int
    guard_bits: int
    stages: tuple[StageGrowth, ...]

    @property
    def max_width(self) -> int:
        return max(s.width for s in self.stages)


def word_growth(flow: FlowGraph, L: int, guard_bits: int = 0) -> GrowthReport:
    """Worst-case per-stage, per-lane ranges over the whole L-bit input range.

    Ranges come from the exact prefix matrices: each lane's extreme is the sum
    over inputs of the coefficient times whichever input bound pushes further.
    """
    w = WordLength(L)
    lo_in, hi_in = w.lo << guard_bits, w.hi << guard_bits
    stages = []
    for stage, m in zip(flow.stages, _prefix_matrices(flow)):
        ranges, widths = [], []
        for row in m:
            hi = sum(max(c * lo_in, c * hi_in) for c in row)
            lo = sum(min(c * lo_in, c * hi_in) for c in row)
            lo_i, hi_i = math.floor(lo), math.ceil(hi)
            ranges.append((lo_i, hi_i))
            widths.append(signed_width(lo_i, hi_i))
        stages.append(StageGrowth(stage.name, tuple(ranges), tuple(widths)))
    return GrowthReport(L, guard_bits, tuple(stages))


@dataclass(frozen=True)
class VerificationReport:
    transform: str
    L: int
    n_vectors: int
    mismatches: int
    max_stage_width: int
    inexact_shift_events: int
    guard_bits: int
    bound_ok: bool

    @property
    def ok(self) -> bool:
        return self.mismatches == 0 and self.inexact_shift_events == 0 and self.bound_ok


def integer_oracle(spec: TransformSpec, guard_bits: int = 0) -> np.ndarray:
    """``2**guard_bits * T`` as an int64 matrix; raises if not integral."""
    scaled = np.array(spec.halves, dtype=np.int64) << guard_bits
    if np.any(scaled % 2):
        raise ValueError(f"{spec.label}: 2**{guard_bits} * T is not integral")
    return scaled // 2


def verify(spec: TransformSpec, L: int, count: int = DEFAULT_COUNT, seed: int = 0, vectors=None) -> VerificationReport:
    """Compare the integer flow graph against a dense integer product.

    Uses the seeded batch for ``L`` unless ``vectors`` is given.  Halving
    stages get the guard bits they need, so the comparison is exact.
    """
    flow = flow_graph(spec)
    g = guard_bits_needed(flow)
    if vectors is None:
        vectors = TestVectorBatch.generate(L, count, seed).vectors
    else:
        WordLength(L)
    res = eval_integer_batch(flow, vectors, guard_bits=g)
    oracle = np.asarray(vectors, dtype=np.int64) @ integer_oracle(spec, g).T
    mismatches = int(np.count_nonzero(np.any(res.outputs != oracle, axis=1)))
    growth = word_growth(flow, L, g)
    bound_ok = all(obs <= st.peak for obs, st in zip(res.stage_max, growth.stages))
    return VerificationReport(
        transform=spec.label,
        L=L,
        n_vectors=len(vectors),
        mismatches=mismatches,
        max_stage_width=growth.max_width,
        inexact_shift_events=res.inexact_shift_events,
        guard_bits=g,
        bound_ok=bound_ok,
    )
