from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from approxdct.errors import CatalogError, OrthogonalityError, ParameterError
from approxdct.transforms import (
    BAS2011_PARAMS,
    CATALOG_NAMES,
    OpCount,
    Permutation,
    SparseStage,
    TransformSpec,
    all_specs,
    apply_flow,
    catalog,
    count_ops,
    exact_dct,
    flow_graph,
    flow_to_matrix,
    orthogonal_matrix,
)

mpmath.mp.dps = 30
SPECS = all_specs()
IDS = [s.label for s in SPECS]


def test_exact_dct_values():
    C = exact_dct().C
    inv_2r2 = float(1 / (2 * mpmath.sqrt(2)))
    assert np.allclose(C[0], inv_2r2, atol=1e-15)
    assert C[1, 0] == pytest.approx(float(mpmath.cos(mpmath.pi / 16) / 2), abs=1e-15)
    assert np.abs(C @ C.T - np.eye(8)).max() < 1e-12


def test_exact_dct_matches_cosine_definition():
    # C[k, n] = c_k / 2 * cos((2n + 1) k pi / 16), c_0 = 1/sqrt 2
    C = exact_dct().C
    for k in range(8):
        ck = 1 / mpmath.sqrt(2) if k == 0 else 1
        for n in range(8):
            ref = ck / 2 * mpmath.cos((2 * n + 1) * k * mpmath.pi / 16)
            assert abs(C[k, n] - float(ref)) < 1e-15


def test_catalog_names_and_params():
    assert len(SPECS) == 8
    assert {s.name for s in SPECS} == set(CATALOG_NAMES)
    assert [s.param for s in SPECS if s.name == "bas2011"] == list(BAS2011_PARAMS)
    with pytest.raises(CatalogError):
        catalog("nope")
    with pytest.raises(ParameterError):
        catalog("bas2011", Fraction(1, 2))
    with pytest.raises(ParameterError):
        catalog("bas2011", 3)
    with pytest.raises(ParameterError):
        catalog("proposed", 1)


def test_proposed_row_and_gram():
    p = catalog("proposed")
    assert tuple(p.T[1]) == (0, 1, 0, 0, 0, 0, -1, 0)
    g = p.gram
    assert [g[i, i] for i in range(8)] == [8, 2, 4, 2, 8, 2, 4, 2]
    assert p.is_orthogonal


def test_modcb2011_scaling():
    d = catalog("modcb2011").D
    r8, r2 = 1 / np.sqrt(8), 1 / np.sqrt(2)
    assert np.allclose(d, [r8, r2, 0.5, r2, r8, r2, 0.5, r2], atol=1e-15)


@pytest.mark.parametrize("spec", SPECS, ids=IDS)
def test_orthonormal_and_representable(spec):
    c = orthogonal_matrix(spec)
    assert np.abs(c @ c.T - np.eye(8)).max() < 1e-12
    assert set(np.unique(spec.T * 2).astype(int)) <= set(range(-4, 5))
    g = spec.gram
    assert all(spec.D[i] == pytest.approx(1 / np.sqrt(float(g[i, i])), rel=1e-15) for i in range(8))


def test_proposed_row0_constant():
    assert np.allclose(orthogonal_matrix(catalog("proposed"))[0], 1 / (2 * np.sqrt(2)), atol=1e-15)


def test_corrupted_matrix_raises():
    rows = catalog("proposed").T.tolist()
    rows[2][0] = -rows[2][0]
    bad = TransformSpec.from_rows("corrupted", rows)
    off = [bad.gram[i, j] for i in range(8) for j in range(8) if i != j]
    assert any(v != 0 for v in off)
    with pytest.raises(OrthogonalityError):
        orthogonal_matrix(bad)


def test_entries_must_be_halves():
    with pytest.raises(ValueError):
        TransformSpec.from_rows("x", [[0.25] * 8] * 8)
    with pytest.raises(ValueError):
        TransformSpec.from_rows("x", [[3] * 8] * 8)


@pytest.mark.parametrize("spec", SPECS, ids=IDS)
def test_factorization_exact(spec):
    flow = flow_graph(spec)
    m = flow_to_matrix(flow)
    assert m.dtype == object
    assert np.array_equal(m, spec.exact_T)
    allowed = {Fraction(v) for v in (-2, -1, 1, 2)} | {Fraction(1, 2), Fraction(-1, 2)}
    assert all(c in allowed for s in flow.stages for _, _, c in s.entries)


@pytest.mark.parametrize("spec", SPECS, ids=IDS)
def test_transposed_flow(spec):
    assert np.array_equal(flow_to_matrix(flow_graph(spec).transpose()), spec.exact_T.T)


def test_proposed_flow_structure():
    flow = flow_graph(catalog("proposed"))
    assert len(flow.stages) == 3
    assert flow.perm == Permutation.from_cycles("(1)(2 5 6 8 4 3 7)")


def test_bas2008_first_stage_is_butterfly():
    s = flow_graph(catalog("bas2008")).stages[0].matrix()
    I, J = np.eye(4, dtype=int), np.fliplr(np.eye(4, dtype=int))
    ref = np.block([[I, J], [J, -I]])
    assert np.array_equal(s.astype(int), ref)


def test_permutation_convention():
    p = Permutation.from_cycles("(1 2 3)")
    assert p.apply(np.array([10, 20, 30, 0, 0, 0, 0, 0]))[:3].tolist() == [30, 10, 20]
    x = np.arange(8)
    assert np.array_equal(p.matrix().astype(int) @ x, p.apply(x))
    assert np.array_equal(p.inverse().apply(p.apply(x)), x)
    with pytest.raises(ValueError):
        Permutation((0, 0, 1, 2, 3, 4, 5, 6))


def test_sparse_stage_validation():
    with pytest.raises(ValueError):
        SparseStage("s", ((0, 0, Fraction(3)),))
    with pytest.raises(ValueError):
        SparseStage("s", ((0, 8, Fraction(1)),))
    with pytest.raises(ValueError):
        SparseStage("s", ((0, 0, Fraction(1)), (0, 0, Fraction(-1))))


def test_apply_flow_examples():
    assert apply_flow(flow_graph(catalog("proposed")), np.ones(8, dtype=int)).tolist() == [8, 0, 0, 0, 0, 0, 0, 0]
    e0 = np.eye(8, dtype=int)[0]
    assert apply_flow(flow_graph(catalog("modcb2011")), e0).tolist() == [1, 1, 1, 0, 1, 0, 0, 0]


def test_apply_flow_dense_oracle(rng):
    spec = catalog("multibeam2012")
    T = np.array(spec.halves, dtype=np.int64) // 2
    x = rng.integers(-1000, 1000, size=(8, 1000))
    y = apply_flow(flow_graph(spec), x)
    assert y.dtype.kind == "i"
    assert np.array_equal(y, T @ x)


def test_apply_flow_half_coefficients(rng):
    spec = catalog("bas2008")
    x = rng.normal(size=(8, 50))
    assert np.allclose(apply_flow(flow_graph(spec), x), spec.T @ x, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(
    st.sampled_from(SPECS),
    st.lists(st.integers(-10**6, 10**6), min_size=8, max_size=8),
    st.lists(st.integers(-10**6, 10**6), min_size=8, max_size=8),
)
def test_apply_flow_linear(spec, a, b):
    flow = flow_graph(spec)
    a, b = np.array(a, dtype=float), np.array(b, dtype=float)
    assert np.allclose(apply_flow(flow, a + b), apply_flow(flow, a) + apply_flow(flow, b))
    assert np.allclose(apply_flow(flow, a), spec.T @ a)


PUBLISHED_COUNTS = {
    "bas2008": (18, 2),
    "bas2011-a0": (16, 0),
    "bas2011-a1": (18, 0),
    "bas2011-a2": (18, 2),
    "cb2011": (22, 0),
    "modcb2011": (14, 0),
    "multibeam2012": (24, 6),
    "proposed": (14, 0),
}


@pytest.mark.parametrize("spec", SPECS, ids=IDS)
def test_count_ops(spec):
    adds, shifts = PUBLISHED_COUNTS[spec.label]
    assert count_ops(flow_graph(spec)) == OpCount(0, adds, shifts)


def test_opcount_arithmetic():
    c = OpCount(0, 14, 0) + OpCount(1, 2, 3)
    assert c == OpCount(1, 16, 3)
    assert c.total == 20
