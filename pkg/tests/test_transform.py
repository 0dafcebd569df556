import logging
import math

import numpy as np
import pytest

from wavelearn.core.errors import InvalidArgumentError, InvalidLengthError
from wavelearn.engine import transform
from wavelearn.engine.filterbank import classical_filter, classical_ids
from wavelearn.engine.transform import (
    band_layout,
    dwt,
    dwt_step,
    flatten,
    idwt,
    idwt_step,
    level_energies,
    unflatten,
)
from wavelearn.models.coefficients import WaveletDecomposition
from wavelearn.models.filters import FilterPair

SQRT2 = math.sqrt(2)
HAAR = FilterPair(classical_filter("haar"))
DB2 = FilterPair(classical_filter("db2"))
DB4 = FilterPair(classical_filter("db4"))


def brute_force_step(a, pair):
    """逐项求和的单层分解"""
    n = len(a)
    h, g = pair.h.coeffs, pair.g
    approx = np.zeros(n // 2)
    detail = np.zeros(n // 2)
    for p in range(n // 2):
        for m in range(pair.k):
            approx[p] += h[m] * a[(m + 2 * p) % n]
            detail[p] += g[m] * a[(m + 2 * p) % n]
    return approx, detail


def test_dwt_step_constant_signal():
    a_next, d_next = dwt_step([1, 1, 1, 1], HAAR)
    np.testing.assert_allclose(a_next, [SQRT2, SQRT2], atol=1e-15)
    np.testing.assert_allclose(d_next, [0, 0], atol=1e-15)


def test_dwt_step_nyquist_signal():
    a_next, d_next = dwt_step([1, -1, 1, -1], HAAR)
    np.testing.assert_allclose(a_next, [0, 0], atol=1e-15)
    np.testing.assert_allclose(np.abs(d_next), [SQRT2, SQRT2], atol=1e-15)


@pytest.mark.parametrize("pair", [HAAR, DB2], ids=["haar", "db2"])
@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12, 14, 16])
def test_dwt_step_matches_double_loop(pair, n):
    rng = np.random.default_rng(n)
    for _ in range(5):
        a = rng.standard_normal(n)
        expected = brute_force_step(a, pair)
        actual = dwt_step(a, pair)
        np.testing.assert_allclose(actual[0], expected[0], atol=1e-12)
        np.testing.assert_allclose(actual[1], expected[1], atol=1e-12)


def test_dwt_step_rejects_odd_length():
    with pytest.raises(InvalidLengthError):
        dwt_step([1.0, 2.0, 3.0], HAAR)


def test_dwt_step_batches_match_single_signals():
    x = np.random.default_rng(5).standard_normal((3, 16))
    a_batch, d_batch = dwt_step(x, DB2)
    for i in range(3):
        a_single, d_single = dwt_step(x[i], DB2)
        np.testing.assert_array_equal(a_batch[i], a_single)
        np.testing.assert_array_equal(d_batch[i], d_single)


def test_idwt_step_examples():
    np.testing.assert_allclose(idwt_step([SQRT2, SQRT2], [0, 0], HAAR), [1, 1, 1, 1], atol=1e-15)
    np.testing.assert_allclose(idwt_step([1.0], [0.0], HAAR), [1 / SQRT2, 1 / SQRT2], atol=1e-15)


def test_idwt_step_then_dwt_step_is_identity():
    rng = np.random.default_rng(7)
    a_next, d_next = rng.standard_normal(4), rng.standard_normal(4)
    a, d = dwt_step(idwt_step(a_next, d_next, DB4), DB4)
    np.testing.assert_allclose(a, a_next, atol=1e-12)
    np.testing.assert_allclose(d, d_next, atol=1e-12)


def test_idwt_step_rejects_mismatched_lengths():
    with pytest.raises(InvalidArgumentError):
        idwt_step([1.0, 2.0], [1.0], HAAR)


def test_idwt_step_is_adjoint_of_dwt_step():
    rng = np.random.default_rng(11)
    for pair in (HAAR, DB2, DB4):
        u = rng.standard_normal(16)
        va, vd = rng.standard_normal(8), rng.standard_normal(8)
        ua, ud = dwt_step(u, pair)
        lhs = np.dot(ua, va) + np.dot(ud, vd)
        rhs = np.dot(u, idwt_step(va, vd, pair))
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_dwt_constant_signal():
    decomp = dwt(np.ones(8), HAAR, 3)
    for detail in decomp.details:
        np.testing.assert_allclose(detail, 0, atol=1e-15)
    np.testing.assert_allclose(decomp.approx, [2 * SQRT2], atol=1e-14)


def test_dwt_unit_impulse():
    x = np.zeros(8)
    x[0] = 1.0
    decomp = dwt(x, HAAR, 1)
    np.testing.assert_allclose(decomp.details[0], [1 / SQRT2, 0, 0, 0], atol=1e-15)
    np.testing.assert_allclose(decomp.approx, [1 / SQRT2, 0, 0, 0], atol=1e-15)


def test_dwt_preserves_energy():
    x = np.random.default_rng(2).standard_normal(64)
    flat = flatten(dwt(x, DB2, 4))
    assert np.linalg.norm(flat.values) == pytest.approx(np.linalg.norm(x), abs=1e-10)


def test_dwt_rejects_too_many_levels():
    with pytest.raises(InvalidArgumentError):
        dwt(np.ones(8), HAAR, 4)
    with pytest.raises(InvalidArgumentError):
        dwt(np.ones(8), HAAR, 0)
    with pytest.raises(InvalidArgumentError):
        dwt(np.ones(12), HAAR, 3)


def test_dwt_warns_once_when_level_shorter_than_filter(caplog):
    transform._warned_short_levels.clear()
    coif5 = FilterPair(classical_filter("coif5"))
    x = np.random.default_rng(0).standard_normal(16)
    with caplog.at_level(logging.WARNING, logger="wavelearn"):
        dwt(x, coif5, 1)
        dwt(x, coif5, 1)
    warnings = [r for r in caplog.records if r.levelno == logging.WARNING]
    assert len(warnings) == 1


@pytest.mark.parametrize("wavelet_id", classical_ids(), ids=lambda w: w.name)
def test_perfect_reconstruction_all_depths(wavelet_id):
    pair = FilterPair(classical_filter(wavelet_id))
    rng = np.random.default_rng(0)
    for n in (8, 64, 1024):
        x = rng.standard_normal((3, n))
        for levels in range(1, int(math.log2(n)) + 1):
            restored = idwt(dwt(x, pair, levels), pair)
            assert np.max(np.abs(restored - x)) < 1e-9


@pytest.mark.parametrize("wavelet_id", classical_ids(), ids=lambda w: w.name)
def test_perfect_reconstruction_batch_of_100(wavelet_id):
    pair = FilterPair(classical_filter(wavelet_id))
    x = np.random.default_rng(1).standard_normal((100, 1024))
    decomp = dwt(x, pair, 6)
    assert np.max(np.abs(idwt(decomp, pair) - x)) < 1e-9
    energy = np.linalg.norm(flatten(decomp).values, axis=-1)
    np.testing.assert_allclose(energy, np.linalg.norm(x, axis=-1), atol=1e-9)


def test_dwt_is_linear():
    rng = np.random.default_rng(4)
    x, y = rng.standard_normal(64), rng.standard_normal(64)
    alpha, beta = 0.7, -1.3
    combined = flatten(dwt(alpha * x + beta * y, DB4, 3)).values
    separate = alpha * flatten(dwt(x, DB4, 3)).values + beta * flatten(dwt(y, DB4, 3)).values
    np.testing.assert_allclose(combined, separate, atol=1e-12)


def test_idwt_of_zero_coefficients():
    decomp = unflatten(np.zeros(32), 3)
    np.testing.assert_array_equal(idwt(decomp, DB2), np.zeros(32))


def test_idwt_single_haar_atom():
    values = np.zeros(16)
    layout = band_layout(16, 3)
    d3 = layout[2]
    assert d3.level_id == "d3"
    values[d3.offset] = 1.0
    x = idwt(unflatten(values, 3), HAAR)
    expected = np.zeros(16)
    expected[:4] = 2**-1.5
    expected[4:8] = -(2**-1.5)
    np.testing.assert_allclose(x, expected, atol=1e-15)


def test_inconsistent_decomposition_rejected():
    with pytest.raises(InvalidArgumentError):
        WaveletDecomposition(details=[np.zeros(4), np.zeros(3)], approx=np.zeros(2))
    with pytest.raises(InvalidArgumentError):
        WaveletDecomposition(details=[np.zeros(4)], approx=np.zeros(2))


def test_flatten_layout():
    layout = flatten(dwt(np.arange(8.0), HAAR, 2)).layout
    assert [(s.level_id, s.offset, s.stop) for s in layout] == [
        ("d1", 0, 4),
        ("d2", 4, 6),
        ("a2", 6, 8),
    ]


def test_unflatten_inverts_flatten_exactly():
    decomp = dwt(np.random.default_rng(8).standard_normal(32), DB2, 3)
    flat = flatten(decomp)
    restored = unflatten(flat, 3)
    for original, copy in zip(decomp.bands, restored.bands, strict=True):
        np.testing.assert_array_equal(original, copy)
    l1 = sum(np.abs(band).sum() for band in decomp.bands)
    assert np.abs(flat.values).sum() == pytest.approx(l1, rel=1e-12)


def test_unflatten_rejects_mismatch():
    flat = flatten(dwt(np.ones(16), HAAR, 2))
    with pytest.raises(InvalidArgumentError):
        unflatten(flat, 3)
    with pytest.raises(InvalidArgumentError):
        unflatten(np.zeros(12), 3)


def test_level_energies_sum_to_signal_energy():
    x = np.random.default_rng(9).standard_normal(64)
    energies = level_energies(dwt(x, DB4, 4))
    assert list(energies) == ["d1", "d2", "d3", "d4", "a4"]
    assert sum(energies.values()) == pytest.approx(float(np.sum(x**2)), rel=1e-12)


def test_as_batch_validation():
    with pytest.raises(InvalidArgumentError):
        transform.as_batch([])
    with pytest.raises(InvalidArgumentError):
        transform.as_batch([np.zeros(8), np.zeros(16)])
    with pytest.raises(InvalidArgumentError):
        transform.as_signal(np.zeros(12))


def periodized_detail_atoms(pair, n):
    """尺度 2¹ 的周期化小波原子，第 p 行为 ψ 平移 2p 后按周期 n 折叠"""
    atoms = np.zeros((n // 2, n))
    for p in range(n // 2):
        for m, tap in enumerate(pair.g):
            atoms[p, (m + 2 * p) % n] += tap
    return atoms


@pytest.mark.parametrize("pair", [HAAR, DB2], ids=["haar", "db2"])
@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12, 14, 16])
def test_detail_channel_is_inner_product_with_periodized_wavelet(pair, n):
    atoms = periodized_detail_atoms(pair, n)
    rng = np.random.default_rng(100 + n)
    for _ in range(5):
        a = rng.standard_normal(n)
        _, d_next = dwt_step(a, pair)
        np.testing.assert_allclose(d_next, atoms @ a, atol=1e-12)


def test_periodized_atoms_are_orthonormal_for_database_filter():
    atoms = periodized_detail_atoms(DB2, 16)
    np.testing.assert_allclose(atoms @ atoms.T, np.eye(8), atol=1e-12)


def test_dwt_accepts_raw_filter_coefficients():
    x = np.random.default_rng(4).standard_normal(32)
    coeffs = np.array(classical_filter("db2").coeffs)
    from_array = flatten(dwt(x, coeffs, 3)).values
    from_pair = flatten(dwt(x, DB2, 3)).values
    np.testing.assert_array_equal(from_array, from_pair)
    restored = idwt(dwt(x, list(coeffs), 3), coeffs)
    np.testing.assert_allclose(restored, x, atol=1e-12)


def test_dwt_rejects_invalid_filter_coefficients():
    with pytest.raises(InvalidArgumentError):
        dwt(np.ones(8), np.ones(3), 1)
    with pytest.raises(InvalidArgumentError):
        dwt(np.ones(8), np.ones((2, 2)), 1)


@pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
def test_dwt_rejects_non_finite_samples(bad):
    x = np.ones(16)
    x[3] = bad
    with pytest.raises(InvalidArgumentError):
        dwt(x, HAAR, 2)
    with pytest.raises(InvalidArgumentError):
        dwt(np.vstack([np.ones(16), x]), HAAR, 2)


def test_dwt_rejects_non_power_of_two_length():
    with pytest.raises(InvalidArgumentError):
        dwt(np.ones(24), HAAR, 1)
    with pytest.raises(InvalidArgumentError):
        dwt(np.ones((2, 24)), HAAR, 1)
