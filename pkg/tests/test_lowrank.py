import logging

import numpy as np
import pytest
import scipy.linalg

from sparsefactor.config import SfConfig
from sparsefactor.errors import InvalidDimensionError
from sparsefactor.factorization import (
    fro_err,
    load_tsvd,
    rank_for_budget,
    reconstruct,
    save_tsvd,
    tsvd,
    tsvd_nnz,
)
from sparsefactor.report import compare_matrix


def tail_error(x, r):
    s = scipy.linalg.svd(x, compute_uv=False)
    return float(np.sqrt(np.sum(s[r:] ** 2)))


def test_rank_one_is_exact(rng):
    x = np.outer(rng.standard_normal(16), rng.standard_normal(16))
    t = tsvd(x, 1)
    assert fro_err(x, reconstruct(t)) <= 1e-10 * np.linalg.norm(x)


def test_identity_full_rank():
    t = tsvd(np.eye(8), 8)
    np.testing.assert_allclose(t.singular_values, np.ones(8), atol=1e-12)
    assert fro_err(np.eye(8), reconstruct(t)) <= 1e-12


def test_tail_formula_on_random_matrix(rng):
    x = rng.standard_normal((32, 32))
    assert fro_err(x, reconstruct(tsvd(x, 5))) == pytest.approx(tail_error(x, 5), abs=1e-8)


@pytest.mark.parametrize("r", [1, 4, 8])
def test_eckart_young_on_twenty_matrices(r):
    rng = np.random.default_rng(r)
    for _ in range(20):
        x = rng.standard_normal((32, 32))
        t = tsvd(x, r)
        err = fro_err(x, reconstruct(t))
        assert err == pytest.approx(tail_error(x, r), abs=1e-8)
        # a rotated rank-r candidate never does better
        q, _ = np.linalg.qr(t.u + 1e-2 * rng.standard_normal(t.u.shape))
        candidate = q @ (q.T @ x)
        assert err <= fro_err(x, candidate) + 1e-12


def test_singular_values_sorted_and_signs_fixed(rng):
    t = tsvd(rng.standard_normal((20, 20)), 6, seed=3)
    assert np.all(np.diff(t.singular_values) <= 0)
    for k in range(t.r):
        v = t.v[:, k]
        assert v[np.argmax(np.abs(v))] >= 0


def test_full_rank_round_trip(rng):
    x = rng.standard_normal((24, 24))
    np.testing.assert_allclose(reconstruct(tsvd(x, 24)), x, atol=1e-8)


def test_is_deterministic_per_seed(rng):
    x = rng.standard_normal((16, 16))
    a, b = tsvd(x, 4, seed=9), tsvd(x, 4, seed=9)
    np.testing.assert_array_equal(a.u, b.u)
    np.testing.assert_array_equal(a.singular_values, b.singular_values)


@pytest.mark.parametrize("r", [0, 17])
def test_rank_out_of_range(r):
    with pytest.raises(InvalidDimensionError):
        tsvd(np.eye(16), r)


def test_non_square_rejected():
    with pytest.raises(InvalidDimensionError):
        tsvd(np.ones((4, 5)), 1)


@pytest.mark.parametrize("n,budget,r", [(256, 16384, 32), (16, 256, 8), (10, 21, 1), (4, 10_000, 4)])
def test_rank_for_budget(n, budget, r):
    assert rank_for_budget(n, budget) == r


def test_budget_rule_covers_the_chain():
    r = rank_for_budget(256, 16384)
    assert tsvd_nnz(256, r) == 16416 >= 16384


def test_budget_below_one_rank():
    with pytest.raises(InvalidDimensionError):
        rank_for_budget(16, 32)


def test_save_and_load(tmp_path, rng):
    t = tsvd(rng.standard_normal((12, 12)), 3)
    save_tsvd(t, str(tmp_path))
    loaded = load_tsvd(str(tmp_path))
    assert loaded.r == 3 and loaded.nnz == 2 * 12 * 3 + 3
    np.testing.assert_array_equal(loaded.v, t.v)
    np.testing.assert_array_equal(reconstruct(loaded), reconstruct(t))


def test_capped_budget_is_logged(caplog):
    # at N=5 the chain stores more non-zeros than a full-rank TSVD
    with caplog.at_level(logging.WARNING, logger="sparsefactor.report"):
        report, chain, _, _ = compare_matrix(np.eye(5), "full_coverage", SfConfig(max_iters=5))
    assert report.rank_r == 5
    assert report.nnz_tsvd == 55 < report.nnz_sf == chain.nnz == 60
    assert "capped" in caplog.text
