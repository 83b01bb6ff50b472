import numpy as np
import pytest

from grandsim.channel import (
    ChannelRealization,
    apply,
    csi_error,
    draw_channel,
    frame_rng,
    noise_variance,
    rayleigh_diag,
)


def test_noise_variance_values():
    assert noise_variance(0.0) == pytest.approx(1.0)
    assert noise_variance(10.0) == pytest.approx(0.1)
    assert noise_variance(-3.0) == pytest.approx(10 ** 0.3)


def test_zero_noise_passthrough():
    rng = np.random.default_rng(0)
    h = np.array([1.0 + 1.0j, 2.0, -0.5j])
    x = np.array([1.0, -1.0, 1.0 + 0.0j])
    ch = ChannelRealization(h=h, h_reported=h, sym_var=np.zeros(3))
    y = apply(x, ch, rng)
    assert np.array_equal(y, h * x)


def test_noise_variance_monte_carlo():
    rng = np.random.default_rng(7)
    m = 100_000
    ch = ChannelRealization(
        h=np.ones(m, dtype=complex),
        h_reported=np.ones(m, dtype=complex),
        sym_var=np.full(m, 0.25),
    )
    y = apply(np.ones(m, dtype=complex), ch, rng)
    n = y - 1.0
    assert np.mean(np.abs(n) ** 2) == pytest.approx(0.25, rel=0.02)
    # circular symmetry: real and imaginary rails carry half each
    assert np.mean(n.real**2) == pytest.approx(0.125, rel=0.03)
    assert np.mean(n.imag**2) == pytest.approx(0.125, rel=0.03)


def test_rayleigh_unit_power():
    rng = np.random.default_rng(3)
    h = rayleigh_diag(200_000, rng)
    assert np.mean(np.abs(h) ** 2) == pytest.approx(1.0, rel=0.02)


def test_rayleigh_block_fading():
    rng = np.random.default_rng(3)
    h = rayleigh_diag(64, rng, block_fading=True)
    assert np.all(h == h[0])
    h2 = rayleigh_diag(64, np.random.default_rng(4), block_fading=True)
    assert h2[0] != h[0]


def test_csi_error_mixing():
    rng = np.random.default_rng(5)
    h = rayleigh_diag(200_000, rng)
    exact = csi_error(h, np.random.default_rng(6), 0.0)
    assert np.array_equal(exact, h)
    mixed = csi_error(h, np.random.default_rng(6), 0.1)
    # E|0.9 h + 0.1 g|^2 = 0.81 + 0.01 = 0.82 for independent unit-power h, g
    assert np.mean(np.abs(mixed) ** 2) == pytest.approx(0.82, rel=0.02)
    with pytest.raises(ValueError):
        csi_error(h, rng, -0.1)
    with pytest.raises(ValueError):
        csi_error(h, rng, 1.5)


def test_frame_rng_reproducible_and_independent():
    a = frame_rng(1, 12000, 5).standard_normal(4)
    b = frame_rng(1, 12000, 5).standard_normal(4)
    c = frame_rng(1, 12000, 6).standard_normal(4)
    d = frame_rng(2, 12000, 5).standard_normal(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_draw_channel_profiles():
    rng = np.random.default_rng(0)
    ch = draw_channel("awgn", 8, 0.5, rng)
    assert np.all(ch.h == 1.0)
    assert np.all(ch.h_reported == 1.0)
    assert np.all(ch.sym_var == 0.5)

    ch = draw_channel("rayleigh", 8, 0.5, rng)
    assert np.array_equal(ch.h, ch.h_reported)
    assert not np.all(ch.h == ch.h[0])

    ch = draw_channel("rayleigh-csi-err", 8, 0.5, rng, csi_mix=0.1)
    assert not np.array_equal(ch.h, ch.h_reported)

    ch = draw_channel("rayleigh", 8, 0.5, rng, block_fading=True)
    assert np.all(ch.h == ch.h[0])

    with pytest.raises(ValueError):
        draw_channel("urban-macro", 8, 0.5, rng)
    with pytest.raises(ValueError):
        draw_channel("awgn", 8, -1.0, rng)


def test_vector_symbol_variance_accepted():
    rng = np.random.default_rng(0)
    var = np.array([0.1, 0.2, 0.4, 0.8])
    ch = ChannelRealization(
        h=np.ones(4, dtype=complex),
        h_reported=np.ones(4, dtype=complex),
        sym_var=var,
    )
    y = apply(np.ones(4, dtype=complex), ch, rng)
    assert y.shape == (4,)
