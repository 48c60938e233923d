import numpy as np
import pytest

from tulca.tensor import (DenseTensor, fold, matricize, mode_product,
                          project_to_core, unfold)


def _counting_tensor():
    # entry (i, j, k) = 100(i+1) + 10(j+1) + (k+1), so the value spells
    # out its own index and any reshuffle mistake is visible by eye
    v = np.zeros((2, 2, 2))
    for i in range(2):
        for j in range(2):
            for k in range(2):
                v[i, j, k] = 100 * (i + 1) + 10 * (j + 1) + (k + 1)
    return v


def test_mode1_unfolding_rows_by_hand():
    m = unfold(_counting_tensor(), 1)
    expected = np.array([
        [111.0, 112.0, 121.0, 122.0],
        [211.0, 212.0, 221.0, 222.0],
    ])
    np.testing.assert_array_equal(m, expected)


def test_mode2_unfolding_rows_by_hand():
    m = unfold(_counting_tensor(), 2)
    expected = np.array([
        [111.0, 112.0, 211.0, 212.0],
        [121.0, 122.0, 221.0, 222.0],
    ])
    np.testing.assert_array_equal(m, expected)


@pytest.mark.parametrize("shape", [(2, 3), (4, 3, 2), (2, 3, 4, 5)])
def test_fold_inverts_matricize_exactly(shape):
    rng = np.random.default_rng(0)
    v = rng.standard_normal(shape)
    for n in range(1, len(shape) + 1):
        back = fold(unfold(v, n), n, shape)
        np.testing.assert_array_equal(back.values, v)


def test_matricize_records_mode_and_shape():
    t = DenseTensor(np.arange(24.0).reshape(2, 3, 4))
    m = matricize(t, 2)
    assert m.mode == 2
    assert m.source_shape == (2, 3, 4)
    assert m.values.shape == (3, 8)


def test_mode_product_matches_einsum_oracle():
    rng = np.random.default_rng(1)
    v = rng.standard_normal((4, 5, 6))
    u = rng.standard_normal((5, 2))
    out = mode_product(DenseTensor(v), u, 2)
    oracle = np.einsum("ijk,jr->irk", v, u)
    np.testing.assert_allclose(out.values, oracle, atol=1e-12)


def test_project_to_core_equals_sequential_mode_products():
    rng = np.random.default_rng(2)
    v = rng.standard_normal((5, 6, 7))
    u2 = np.linalg.qr(rng.standard_normal((6, 2)))[0]
    u3 = np.linalg.qr(rng.standard_normal((7, 3)))[0]
    core = project_to_core(DenseTensor(v), [u2, u3])
    step = mode_product(mode_product(DenseTensor(v), u2, 2), u3, 3)
    np.testing.assert_allclose(core.values, step.values, atol=1e-12)
    assert core.shape == (5, 2, 3)


def test_project_to_core_rejects_widening():
    rng = np.random.default_rng(3)
    t = DenseTensor(rng.standard_normal((4, 3, 2)))
    with pytest.raises(ValueError):
        project_to_core(t, [rng.standard_normal((3, 5)),
                            rng.standard_normal((2, 1))])


def test_dense_tensor_rejects_bad_input():
    with pytest.raises(ValueError):
        DenseTensor(np.array([1.0, 2.0]))  # needs at least two modes
    bad = np.ones((2, 2))
    bad[0, 0] = np.nan
    with pytest.raises(ValueError):
        DenseTensor(bad)


def test_dense_tensor_values_are_read_only():
    t = DenseTensor(np.ones((2, 2)))
    with pytest.raises(ValueError):
        t.values[0, 0] = 5.0
