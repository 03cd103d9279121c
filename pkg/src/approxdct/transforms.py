"""Exact 8-point DCT, the multiplierless approximations and their fast algorithms.

Every approximation is a pair ``(D, T)``: ``T`` is a low-complexity matrix
with entries in ``{0, +-1/2, +-1, +-2}`` and ``D`` is the diagonal scaling
that makes ``D @ T`` orthonormal.  Each ``T`` also has a factorization into
sparse add/shift stages followed by a free output permutation
(:class:`FlowGraph`), which is what the op counts and the integer datapath
models are computed from.

Matrix entries are held exactly, as integers in units of 1/2, so factorization
checks are done over the rationals with no tolerance.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import CatalogError, OrthogonalityError, ParameterError

N = 8

HALF = Fraction(1, 2)
STAGE_COEFFICIENTS = frozenset(Fraction(c) for c in (-2, -1, -HALF, HALF, 1, 2))

# DCT sign/index template: row k, column n holds sign * value[index].
TEMPLATE_INDEX = np.array(
    [
        [3, 3, 3, 3, 3, 3, 3, 3],
        [0, 2, 4, 6, 6, 4, 2, 0],
        [1, 5, 5, 1, 1, 5, 5, 1],
        [2, 6, 0, 4, 4, 0, 6, 2],
        [3, 3, 3, 3, 3, 3, 3, 3],
        [4, 0, 6, 2, 2, 6, 0, 4],
        [5, 1, 1, 5, 5, 1, 1, 5],
        [6, 4, 2, 0, 0, 2, 4, 6],
    ]
)
TEMPLATE_SIGN = np.array(
    [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, 1, 1, 1, -1, -1, -1, -1],
        [1, 1, -1, -1, -1, -1, 1, 1],
        [1, -1, -1, -1, 1, 1, 1, -1],
        [1, -1, -1, 1, 1, -1, -1, 1],
        [1, -1, 1, 1, -1, -1, 1, -1],
        [1, -1, 1, -1, -1, 1, -1, 1],
        [1, -1, 1, -1, 1, -1, 1, -1],
    ]
)


def dct_template(values: Sequence) -> np.ndarray:
    """Fill the 8x8 DCT sign pattern with seven magnitudes.

    ``values[k]`` plays the role of ``cos(2*pi*(k+1)/32)`` in the exact DCT.
    The dtype follows ``values`` so integers stay integers.
    """
    v = np.asarray(values)
    if v.shape != (7,):
        raise ValueError(f"expected 7 template values, got shape {v.shape}")
    return TEMPLATE_SIGN * v[TEMPLATE_INDEX]


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class OpCount:
    mults: int = 0
    adds: int = 0
    shifts: int = 0

    def __post_init__(self):
        if min(self.mults, self.adds, self.shifts) < 0:
            raise ValueError("operation counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.mults + self.adds + self.shifts

    def __add__(self, other: OpCount) -> OpCount:
        return OpCount(self.mults + other.mults, self.adds + other.adds, self.shifts + other.shifts)


@dataclass(frozen=True, eq=False)
class ExactDct:
    """Orthonormal 8-point DCT-II matrix ``C`` and its cosine constants."""

    C: np.ndarray
    gamma: np.ndarray

    name = "exact-dct"


@lru_cache(maxsize=None)
def exact_dct() -> ExactDct:
    gamma = np.cos(2 * np.pi * np.arange(1, 8) / 32)
    C = dct_template(gamma) / 2
    return ExactDct(C=_readonly(C), gamma=_readonly(gamma))


def _half_units(x) -> int:
    f = Fraction(x)
    h = f * 2
    if h.denominator != 1:
        raise ValueError(f"{x} is not a multiple of 1/2")
    return int(h)


@dataclass(frozen=True)
class TransformSpec:
    """Low-complexity matrix ``T`` with its derived scaling ``D``.

    ``halves`` stores ``2*T`` so every allowed entry is an exact integer.
    """

    name: str
    halves: tuple[tuple[int, ...], ...]
    param: int | None = None

    def __post_init__(self):
        if len(self.halves) != N or any(len(row) != N for row in self.halves):
            raise ValueError("T must be 8x8")
        if any(not -4 <= h <= 4 for row in self.halves for h in row):
            raise ValueError("T entries must lie in {0, +-1/2, +-1, +-2}")

    @classmethod
    def from_rows(cls, name: str, rows: Iterable[Iterable], param: int | None = None) -> TransformSpec:
        return cls(name, tuple(tuple(_half_units(x) for x in row) for row in rows), param)

    @property
    def label(self) -> str:
        return self.name if self.param is None else f"{self.name}-a{self.param}"

    @cached_property
    def T(self) -> np.ndarray:
        return _readonly(np.array(self.halves, dtype=float) / 2)

    @cached_property
    def exact_T(self) -> np.ndarray:
        return _readonly(np.array([[Fraction(h, 2) for h in row] for row in self.halves], dtype=object))

    @cached_property
    def gram(self) -> np.ndarray:
        """``T @ T.T`` as exact Fractions."""
        h = np.array(self.halves, dtype=np.int64)
        g = h @ h.T
        return _readonly(np.array([[Fraction(int(v), 4) for v in row] for row in g], dtype=object))

    @property
    def is_orthogonal(self) -> bool:
        g = self.gram
        off = all(g[i, j] == 0 for i in range(N) for j in range(N) if i != j)
        return off and all(g[i, i] > 0 for i in range(N))

    @cached_property
    def D(self) -> np.ndarray:
        d = np.array([1 / math.sqrt(self.gram[i, i]) if self.gram[i, i] > 0 else math.inf for i in range(N)])
        return _readonly(d)


# -- the catalog ---------------------------------------------------------

H = HALF

_BAS2008 = [
    [1, 1, 1, 1, 1, 1, 1, 1],
    [1, 1, 0, 0, 0, 0, -1, -1],
    [1, H, -H, -1, -1, -H, H, 1],
    [0, 0, -1, 0, 0, 1, 0, 0],
    [1, -1, -1, 1, 1, -1, -1, 1],
    [1, -1, 0, 0, 0, 0, 1, -1],
    [H, -1, 1, -H, -H, 1, -1, H],
    [0, 0, 0, -1, 1, 0, 0, 0],
]

_CB2011 = [
    [1, 1, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 0, 0, -1, -1, -1],
    [1, 0, 0, -1, -1, 0, 0, 1],
    [1, 0, -1, -1, 1, 1, 0, -1],
    [1, -1, -1, 1, 1, -1, -1, 1],
    [1, -1, 0, 1, -1, 0, 1, -1],
    [0, -1, 1, 0, 0, 1, -1, 0],
    [0, -1, 1, -1, 1, -1, 1, 0],
]

_MODCB2011 = [
    [1, 1, 1, 1, 1, 1, 1, 1],
    [1, 0, 0, 0, 0, 0, 0, -1],
    [1, 0, 0, -1, -1, 0, 0, 1],
    [0, 0, -1, 0, 0, 1, 0, 0],
    [1, -1, -1, 1, 1, -1, -1, 1],
    [0, -1, 0, 0, 0, 0, 1, 0],
    [0, -1, 1, 0, 0, 1, -1, 0],
    [0, 0, 0, -1, 1, 0, 0, 0],
]

_MULTIBEAM2012 = [
    [1, 1, 1, 1, 1, 1, 1, 1],
    [2, 1, 1, 0, 0, -1, -1, -2],
    [2, 1, -1, -2, -2, -1, 1, 2],
    [1, 0, -2, -1, 1, 2, 0, -1],
    [1, -1, -1, 1, 1, -1, -1, 1],
    [1, -2, 0, 1, -1, 0, 2, -1],
    [1, -2, 2, -1, -1, 2, -2, 1],
    [0, -1, 1, -2, 2, -1, 1, 0],
]

_PROPOSED = [
    [1, 1, 1, 1, 1, 1, 1, 1],
    [0, 1, 0, 0, 0, 0, -1, 0],
    [1, 0, 0, -1, -1, 0, 0, 1],
    [1, 0, 0, 0, 0, 0, 0, -1],
    [1, -1, -1, 1, 1, -1, -1, 1],
    [0, 0, 0, 1, -1, 0, 0, 0],
    [0, -1, 1, 0, 0, 1, -1, 0],
    [0, 0, 1, 0, 0, -1, 0, 0],
]


def _bas2011_rows(a):
    return [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, 1, 0, 0, 0, 0, -1, -1],
        [1, a, -a, -1, -1, -a, a, 1],
        [0, 0, 1, 0, 0, -1, 0, 0],
        [1, -1, -1, 1, 1, -1, -1, 1],
        [0, 0, 0, 1, -1, 0, 0, 0],
        [1, -1, 0, 0, 0, 0, 1, -1],
        [a, -1, 1, -a, -a, 1, -1, a],
    ]


# Published scalings, as the m in D[i] = 1/sqrt(m).
_PUBLISHED_NORMS = {
    "bas2008": (8, 4, 5, 2, 8, 4, 5, 2),
    "cb2011": (8, 6, 4, 6, 8, 6, 4, 6),
    "modcb2011": (8, 2, 4, 2, 8, 2, 4, 2),
    "multibeam2012": (8, 12, 20, 12, 8, 12, 20, 12),
    "proposed": (8, 2, 4, 2, 8, 2, 4, 2),
}


def _bas2011_norms(a):
    return (8, 4, 4 + 4 * a * a, 2, 8, 2, 4, 4 + 4 * a * a)


CATALOG_NAMES = ("bas2008", "bas2011", "cb2011", "modcb2011", "multibeam2012", "proposed")
BAS2011_PARAMS = (0, 1, 2)


def _check_param(name, param):
    if name != "bas2011":
        if param is not None:
            raise ParameterError(f"{name} takes no parameter")
        return None
    if param is None:
        raise ParameterError("bas2011 requires a parameter a in {0, 1, 2}")
    if not isinstance(param, bool) and param == HALF:
        raise ParameterError("bas2011 with a=1/2 needs a right shift that can lose precision; use a in {0, 1, 2}")
    if isinstance(param, bool) or param not in BAS2011_PARAMS:
        raise ParameterError(f"unsupported bas2011 parameter {param!r}; expected one of {BAS2011_PARAMS}")
    return int(param)


@lru_cache(maxsize=None)
def _catalog(name, param):
    if name == "bas2011":
        rows, norms = _bas2011_rows(param), _bas2011_norms(param)
    else:
        rows = {
            "bas2008": _BAS2008,
            "cb2011": _CB2011,
            "modcb2011": _MODCB2011,
            "multibeam2012": _MULTIBEAM2012,
            "proposed": _PROPOSED,
        }[name]
        norms = _PUBLISHED_NORMS[name]
    spec = TransformSpec.from_rows(name, rows, param)
    # D is derived from T; the published scaling must agree exactly.
    if not spec.is_orthogonal:
        raise AssertionError(f"catalog entry {spec.label} is not orthogonal")
    if tuple(spec.gram[i, i] for i in range(N)) != norms:
        raise AssertionError(f"catalog entry {spec.label} disagrees with its published scaling")
    return spec


def catalog(name: str, param=None) -> TransformSpec:
    """Return a catalogued approximation by name.

    Parameters
    ----------
    name : str
      One of :data:`CATALOG_NAMES`.
    param : int, optional
      The ``a`` parameter, required for ``bas2011`` and rejected otherwise.
    """
    if name not in CATALOG_NAMES:
        raise CatalogError(f"unknown transform {name!r}; valid names: {', '.join(CATALOG_NAMES)}")
    return _catalog(name, _check_param(name, param))


def all_specs() -> list[TransformSpec]:
    """Every catalog transform, with bas2011 expanded over its parameters."""
    out = []
    for name in CATALOG_NAMES:
        if name == "bas2011":
            out.extend(catalog(name, a) for a in BAS2011_PARAMS)
        else:
            out.append(catalog(name))
    return out


def orthogonal_matrix(spec: TransformSpec) -> np.ndarray:
    """Return the orthonormal approximation ``D @ T``."""
    if not spec.is_orthogonal:
        raise OrthogonalityError(f"{spec.label}: T @ T.T is not diagonal")
    return _readonly(spec.D[:, None] * spec.T)


# -- sparse stages, permutations, flow graphs ----------------------------


@dataclass(frozen=True)
class SparseStage:
    """One sparse factor; ``entries`` are ``(row, col, coefficient)`` triples."""

    name: str
    entries: tuple[tuple[int, int, Fraction], ...]

    def __post_init__(self):
        seen = set()
        for r, c, coef in self.entries:
            if not (0 <= r < N and 0 <= c < N):
                raise ValueError(f"{self.name}: index ({r}, {c}) out of range")
            if (r, c) in seen:
                raise ValueError(f"{self.name}: duplicate entry ({r}, {c})")
            if coef not in STAGE_COEFFICIENTS:
                raise ValueError(f"{self.name}: coefficient {coef} is not in {{+-1/2, +-1, +-2}}")
            seen.add((r, c))

    @classmethod
    def from_dense(cls, name: str, rows) -> SparseStage:
        entries = tuple(
            (r, c, Fraction(v)) for r, row in enumerate(rows) for c, v in enumerate(row) if Fraction(v) != 0
        )
        return cls(name, entries)

    @cached_property
    def by_row(self) -> tuple[tuple[tuple[int, Fraction], ...], ...]:
        rows = [[] for _ in range(N)]
        for r, c, coef in sorted(self.entries):
            rows[r].append((c, coef))
        return tuple(tuple(row) for row in rows)

    def matrix(self) -> np.ndarray:
        m = np.full((N, N), Fraction(0), dtype=object)
        for r, c, coef in self.entries:
            m[r, c] = coef
        return m

    def transpose(self, name: str | None = None) -> SparseStage:
        return SparseStage(name or self.name + "^T", tuple((c, r, coef) for r, c, coef in self.entries))


@dataclass(frozen=True)
class Permutation:
    """Lane permutation: the value at position ``i`` moves to ``map[i]``."""

    map: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.map) != list(range(len(self.map))):
            raise ValueError(f"{self.map} is not a bijection")

    @classmethod
    def identity(cls, n: int = N) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: str, n: int = N) -> Permutation:
        """Parse 1-based cycle notation such as ``"(1)(2 5 6 4 8 7)(3)"``.

        A cycle ``(i j k)`` sends the value at ``i`` to ``j``, ``j`` to ``k`` and
        ``k`` back to ``i``.
        """
        mapping = list(range(n))
        for group in re.findall(r"\(([^)]*)\)", cycles):
            idx = [int(t) - 1 for t in group.split()]
            for pos, i in enumerate(idx):
                mapping[i] = idx[(pos + 1) % len(idx)]
        return cls(tuple(mapping))

    def apply(self, x, axis: int = 0):
        x = np.asarray(x)
        y = np.empty_like(x)
        dst = [slice(None)] * x.ndim
        dst[axis] = list(self.map)
        y[tuple(dst)] = x
        return y

    def inverse(self) -> Permutation:
        inv = [0] * len(self.map)
        for i, j in enumerate(self.map):
            inv[j] = i
        return Permutation(tuple(inv))

    def matrix(self) -> np.ndarray:
        m = np.full((len(self.map), len(self.map)), Fraction(0), dtype=object)
        for i, j in enumerate(self.map):
            m[j, i] = Fraction(1)
        return m

    def as_stage(self, name: str = "P") -> SparseStage:
        return SparseStage(name, tuple((j, i, Fraction(1)) for i, j in enumerate(self.map)))


@dataclass(frozen=True)
class FlowGraph:
    """Sparse stages applied in order, then a free output permutation."""

    stages: tuple[SparseStage, ...]
    perm: Permutation
    name: str = ""

    def transpose(self) -> FlowGraph:
        """Flow graph of ``T.T``.

        ``(P S_k ... S_1)^T = (P S_k)^T S_{k-1}^T ... S_1^T``; the permutation is
        folded into the first transposed stage, which stays sparse.
        """
        if not self.stages:
            return FlowGraph((), self.perm.inverse(), self.name + "^T")
        last = self.stages[-1]
        folded = SparseStage(
            f"({last.name})^T",
            tuple((c, self.perm.map[r], coef) for r, c, coef in last.entries),
        )
        rest = tuple(s.transpose() for s in reversed(self.stages[:-1]))
        return FlowGraph((folded,) + rest, Permutation.identity(), self.name + "^T")


def _block_diag(*blocks) -> list[list[Fraction]]:
    """Block-diagonal dense matrix; scalar blocks are 1x1."""
    mats = []
    for b in blocks:
        b = [[b]] if not isinstance(b, (list, tuple)) else [list(r) for r in b]
        mats.append(b)
    n = sum(len(b) for b in mats)
    out = [[Fraction(0)] * n for _ in range(n)]
    k = 0
    for b in mats:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[k + i][k + j] = Fraction(v)
        k += len(b)
    return out


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


_I4 = _eye(4)
_J4 = [row[::-1] for row in _I4]
_E4 = [[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, -1, 0], [1, 0, 0, -1]]
_B2 = [[1, 1], [1, -1]]

# Even/odd decimation-in-frequency butterfly shared by every factorization.
_A1 = [_I4[i] + _J4[i] for i in range(4)] + [_J4[i] + [-v for v in _I4[i]] for i in range(4)]

_A2 = [
    [1, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 1],
    [0, 1, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, -1, 0, 0],
    [0, 1, -1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, -1, 1],
    [1, 0, 0, -1, 0, 0, 0, 0],
    [0, 0, 0, 0, -1, 0, 0, 0],
]
_A3 = [
    [1, 0, 1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, H, 0, 1, 0],
    [0, 0, 0, 1, 0, 0, 0, 0],
    [1, 0, -1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, -1, 0, H, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
]
_A4 = _block_diag(_E4, 1, 1, [[1, 1], [-1, 1]])
_A5 = _block_diag(_E4, [[-1, 1, -1, 0], [-1, -1, 0, 1], [1, 0, -1, 1], [0, 1, 1, 1]])
_A6 = _block_diag(_B2, -1, _eye(5))
_A7 = _block_diag(_E4, -1, -1, -1, 1)
_A8 = _block_diag(_E4, [[0, 1, 1, 2], [-1, -2, 0, 1], [1, 0, -2, 1], [-2, 1, -1, 0]])
_A9 = _block_diag(_B2, [[1, 2], [-2, 1]], _I4)
_A11 = _block_diag(_E4, _I4)
_A12 = _A6


def _q(a):
    return _block_diag(_B2, [[a, 1], [-1, a]], _I4)


P1 = Permutation.from_cycles("(1)(2 5 6 4 8 7)(3)")
P2 = Permutation.from_cycles("(1)(2 5 8)(3 7 6 4)")
P3 = Permutation.from_cycles("(1)(2 5)(3)(4 7 6)(8)")
P4 = Permutation.from_cycles("(1)(2 5 6 8 4 3 7)")


@lru_cache(maxsize=None)
def _flow(name, param):
    st = SparseStage.from_dense
    a1 = st("A1", _A1)
    if name == "bas2008":
        return FlowGraph((a1, st("A2", _A2), st("A3", _A3)), Permutation.identity(), name)
    if name == "bas2011":
        return FlowGraph((a1, st("A4", _A4), st(f"Q({param})", _q(param))), P1, f"bas2011-a{param}")
    if name == "cb2011":
        return FlowGraph((a1, st("A5", _A5), st("A6", _A6)), P2, name)
    if name == "modcb2011":
        return FlowGraph((a1, st("A7", _A7), st("A6", _A6)), P2, name)
    if name == "multibeam2012":
        return FlowGraph((a1, st("A8", _A8), st("A9", _A9)), P3, name)
    if name == "proposed":
        return FlowGraph((a1, st("A11", _A11), st("A12", _A12)), P4, name)
    raise CatalogError(f"no factorization for {name!r}")


def flow_graph(spec: TransformSpec) -> FlowGraph:
    """Sparse factorization of a catalog transform."""
    if spec.name not in CATALOG_NAMES:
        raise CatalogError(f"no factorization for {spec.name!r}")
    return _flow(spec.name, spec.param)


def flow_to_matrix(flow: FlowGraph) -> np.ndarray:
    """Compose a flow graph into a dense matrix of exact Fractions."""
    m = np.array(_eye(N), dtype=object) * Fraction(1)
    for stage in flow.stages:
        m = stage.matrix().dot(m)
    return flow.perm.matrix().dot(m)


def _is_integer_flow(flow: FlowGraph) -> bool:
    return all(coef.denominator == 1 for s in flow.stages for _, _, coef in s.entries)


def apply_stage(stage: SparseStage, x: np.ndarray) -> np.ndarray:
    """Apply one sparse stage along axis 0 of ``x``.

    Integer arrays stay integer when every coefficient is an integer.
    """
    integer = np.issubdtype(x.dtype, np.integer) or x.dtype == object
    out = np.zeros_like(x) if integer else np.zeros(x.shape, dtype=float)
    for r, row in enumerate(stage.by_row):
        acc = None
        for c, coef in row:
            if integer and coef.denominator == 1:
                term = x[c] * int(coef)
            else:
                term = x[c] * float(coef)
            acc = term if acc is None else acc + term
        if acc is not None:
            out[r] = acc
    return out


def apply_flow(flow: FlowGraph, x) -> np.ndarray:
    """Evaluate the flow graph on ``x``, an 8-vector or an ``(8, ...)`` array.

    Integer input through an all-integer flow is computed exactly in
    integers; anything else is computed in float64.
    """
    x = np.asarray(x)
    if x.shape[:1] != (N,):
        raise ValueError(f"leading dimension must be {N}, got shape {x.shape}")
    if np.issubdtype(x.dtype, np.integer) and not _is_integer_flow(flow):
        x = x.astype(float)
    elif not (np.issubdtype(x.dtype, np.integer) or x.dtype == object):
        x = x.astype(float)
    for stage in flow.stages:
        x = apply_stage(stage, x)
    return flow.perm.apply(x)


def count_ops(flow: FlowGraph) -> OpCount:
    """Additions and shifts needed to evaluate ``flow``.

    A stage row with k nonzero coefficients costs k-1 additions; every
    coefficient of magnitude 2 or 1/2 costs one shift.  Permutations are free.
    """
    adds = shifts = 0
    for stage in flow.stages:
        for row in stage.by_row:
            adds += max(len(row) - 1, 0)
            shifts += sum(1 for _, coef in row if abs(coef) != 1)
    return OpCount(mults=0, adds=adds, shifts=shifts)


# Complexity of the exact DCT, for reference listings only.
EXACT_DCT_REFERENCE = {
    "exact-dct-definition": OpCount(mults=64, adds=56, shifts=0),
    "exact-dct-arai": OpCount(mults=5, adds=29, shifts=0),
}
