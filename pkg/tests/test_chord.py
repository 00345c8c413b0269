import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsefactor.chord import (
    adjacency,
    build_pattern,
    chord_offsets,
    nnz_accounting,
    pattern_from_json,
    structural_density,
)
from sparsefactor.errors import InputError, InvalidDimensionError


def boolean_power(pattern, hops):
    a = adjacency(pattern).toarray().astype(np.int64)
    reach = a.copy()
    for _ in range(hops - 1):
        reach = ((reach @ a) > 0).astype(np.int64)
    return reach > 0


def test_paper_literal_row_zero():
    p = build_pattern(16, "paper_literal")
    assert p.row(0).tolist() == [0, 1, 2, 4]
    assert p.degree == 4


def test_full_coverage_row_zero():
    p = build_pattern(16, "full_coverage")
    assert p.row(0).tolist() == [0, 1, 2, 4, 8]
    assert p.degree == 5


def test_non_power_of_two_uses_offsets_below_top_exponent():
    p = build_pattern(5, "full_coverage")
    assert chord_offsets(5, "full_coverage") == (0, 1, 2, 4)
    assert p.row(0).tolist() == [0, 1, 2, 4]
    assert p.row(4).tolist() == [0, 1, 3, 4]


def test_default_mode_is_full_coverage():
    assert build_pattern(8).mode == "full_coverage"


@pytest.mark.parametrize("n", [2, 3, 5, 7, 16, 33, 100])
@pytest.mark.parametrize("mode", ["paper_literal", "full_coverage"])
def test_rows_sorted_unique_with_diagonal(n, mode):
    p = build_pattern(n, mode)
    k = int(np.ceil(np.log2(n)))
    for i in range(n):
        row = p.row(i)
        assert i in row
        assert np.all(np.diff(row) > 0)
        assert len(row) <= (k if mode == "paper_literal" else k + 1)


@pytest.mark.parametrize("n", [8, 13, 64])
def test_slot_order_and_flat_map(n):
    p = build_pattern(n)
    np.testing.assert_array_equal(p.slot_columns[:, 0], np.arange(n))
    for s in range(p.degree):
        # every slot column is a circulant shift, hence a permutation
        assert sorted(p.slot_columns[:, s].tolist()) == list(range(n))
    np.testing.assert_array_equal(p.indices[p.slot_to_flat], p.slot_columns)


@pytest.mark.parametrize("n", [16, 64, 256, 1024])
def test_full_coverage_is_full_after_log_n_hops(n):
    p = build_pattern(n, "full_coverage")
    assert structural_density(p, int(np.log2(n))) == 1.0


def test_paper_literal_leaves_gaps():
    p = build_pattern(16, "paper_literal")
    assert structural_density(p, 4) < 1.0
    assert not boolean_power(p, 4)[0, 15]


@pytest.mark.parametrize("n,mode,hops", [(16, "paper_literal", 3), (12, "full_coverage", 2), (9, "paper_literal", 5)])
def test_density_matches_boolean_oracle(n, mode, hops):
    p = build_pattern(n, mode)
    assert structural_density(p, hops) == pytest.approx(boolean_power(p, hops).mean(), abs=0)


def test_one_hop_density_is_pattern_fill():
    p = build_pattern(20, "paper_literal")
    assert structural_density(p, 1) == p.nnz / 400


def test_density_rejects_zero_hops():
    with pytest.raises(InvalidDimensionError):
        structural_density(build_pattern(8), 0)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(min_value=2, max_value=40), hops=st.integers(min_value=1, max_value=6),
       mode=st.sampled_from(["paper_literal", "full_coverage"]))
def test_density_is_monotone_in_hops(n, hops, mode):
    p = build_pattern(n, mode)
    assert structural_density(p, hops + 1) >= structural_density(p, hops)


@settings(max_examples=20, deadline=None)
@given(n=st.integers(min_value=2, max_value=200), mode=st.sampled_from(["paper_literal", "full_coverage"]))
def test_build_pattern_is_pure(n, mode):
    a, b = build_pattern(n, mode), build_pattern(n, mode)
    np.testing.assert_array_equal(a.indices, b.indices)
    np.testing.assert_array_equal(a.slot_columns, b.slot_columns)


@pytest.mark.parametrize("n,mode,m,per_factor,total", [
    (16, "paper_literal", 4, 64, 256),
    (256, "paper_literal", 8, 2048, 16384),
    (16, "full_coverage", 4, 80, 320),
])
def test_nnz_accounting(n, mode, m, per_factor, total):
    account = nnz_accounting(build_pattern(n, mode), m)
    assert account.per_factor == per_factor
    assert account.total == total


@pytest.mark.parametrize("n", [0, 1, -3])
def test_rejects_tiny_sizes(n):
    with pytest.raises(InvalidDimensionError):
        build_pattern(n)


def test_rejects_unknown_mode():
    with pytest.raises(InvalidDimensionError):
        build_pattern(8, "fingers")


def test_json_round_trip():
    p = build_pattern(11, "paper_literal")
    assert pattern_from_json(p.to_json()).same_as(p)


def test_json_with_foreign_rows_is_rejected():
    payload = build_pattern(8).to_json()
    payload["rows"][0] = [0, 3]
    with pytest.raises(InputError):
        pattern_from_json(payload)
