"""Channel draws: diagonal fading, complex noise, and receiver-side CSI.

All shipped profiles use a diagonal channel; the true gains act on the
transmitted symbols while ``h_reported`` is what the receiver gets to use,
so imperfect CSI is just a mismatch between the two.  Noise is circularly
symmetric complex Gaussian with per-symbol variance ``sym_var`` (a constant
vector for white noise, anything positive for colored test profiles).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PROFILES = ("awgn", "rayleigh", "rayleigh-csi-err")


@dataclass
class ChannelRealization:
    h: np.ndarray           # true diagonal gains, complex (M,)
    h_reported: np.ndarray  # gains available to the receiver
    sym_var: np.ndarray     # per-symbol complex noise variance (M,)


def noise_variance(snr_db: float) -> float:
    """Total complex noise variance for unit symbol energy at the given SNR."""
    return 10.0 ** (-snr_db / 10.0)


def frame_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for one frame, stable under execution order.

    Key parts may be negative (e.g. milli-dB below zero); spawn keys must
    not be, so each part goes through the usual zigzag folding.
    """
    folded = tuple(2 * k if k >= 0 else -2 * k - 1 for k in key)
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=folded))


def rayleigh_diag(m: int, rng: np.random.Generator, block_fading: bool = False) -> np.ndarray:
    """I.i.d. CN(0,1) diagonal gains; one shared draw when block fading."""
    count = 1 if block_fading else m
    h = (rng.standard_normal(count) + 1j * rng.standard_normal(count)) / np.sqrt(2.0)
    return np.broadcast_to(h, (m,)).copy() if block_fading else h


def csi_error(h: np.ndarray, rng: np.random.Generator, mix: float = 0.1) -> np.ndarray:
    """Reported gains: (1-mix) * true + mix * independent CN(0,1) draw."""
    if not 0.0 <= mix <= 1.0:
        raise ValueError(f"csi mix must be in [0, 1], got {mix}")
    if mix == 0.0:
        return h.copy()
    m = len(h)
    h_tilde = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2.0)
    return (1.0 - mix) * h + mix * h_tilde


def draw_channel(
    profile: str,
    m: int,
    sym_var: float | np.ndarray,
    rng: np.random.Generator,
    csi_mix: float = 0.1,
    block_fading: bool = False,
) -> ChannelRealization:
    """Draw one frame's channel for a named profile."""
    var = np.broadcast_to(np.asarray(sym_var, dtype=np.float64), (m,)).copy()
    if np.any(var <= 0):
        raise ValueError("noise variance must be positive")
    if profile == "awgn":
        h = np.ones(m, dtype=np.complex128)
        return ChannelRealization(h, h.copy(), var)
    if profile == "rayleigh":
        h = rayleigh_diag(m, rng, block_fading)
        return ChannelRealization(h, h.copy(), var)
    if profile == "rayleigh-csi-err":
        h = rayleigh_diag(m, rng, block_fading)
        return ChannelRealization(h, csi_error(h, rng, csi_mix), var)
    raise ValueError(f"unknown channel profile {profile!r}; expected one of {PROFILES}")


def apply(x: np.ndarray, ch: ChannelRealization, rng: np.random.Generator) -> np.ndarray:
    """Received vector y = h * x + noise."""
    m = len(x)
    noise = np.sqrt(ch.sym_var / 2.0) * (
        rng.standard_normal(m) + 1j * rng.standard_normal(m)
    )
    return ch.h * x + noise
