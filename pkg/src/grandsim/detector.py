"""Soft detection front ends: distances, equalization, and bit LLRs.

All soft values follow one sign convention: an LLR is log P(bit=1)/P(bit=0),
so positive means 1 is more likely.  Distances are noise-weighted,

    d(x) = sum_i |y_i - (Hx)_i|^2 / v_i,

with v the per-symbol complex noise variance, so -d is the log likelihood up
to a constant and LLRs are differences of constrained minima of d.

Two routes produce bit LLRs from a received frame: zero-forcing equalization
followed by per-symbol demapping (linear cost), and exhaustive max-log
detection over the whole symbol lattice (exponential cost, guarded).  For a
diagonal channel with the true noise variances the two agree; the lattice
route additionally accepts per-bit priors, which makes it the max-log MAP
reference the decoders are compared against.

Finite LLRs are kept inside the saturation window +-n/v implied by the
decoder's distance bookkeeping, so detector outputs and synthesized decoder
outputs live on the same scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .modem import Constellation, FrameLayout, per_bit_variance

MAX_LATTICE = 1 << 16


@dataclass
class DetectionResult:
    """Hard detection output: symbol labels, their bits, and the distance."""

    labels: np.ndarray        # (M,) integer labels
    word: np.ndarray          # (M*q,) uint8 bits, padded symbol domain
    d_min: float              # weighted distance of the detected point
    llrs: np.ndarray | None = None


def weighted_distance(
    y: np.ndarray, h: np.ndarray, x: np.ndarray, sym_var: float | np.ndarray
) -> float:
    """Noise-weighted squared distance between y and H x."""
    h = np.asarray(h)
    hx = h @ x if h.ndim == 2 else h * x
    r = np.asarray(y) - hx
    return float(np.sum((r.real**2 + r.imag**2) / sym_var))


def zf_equalize(
    y: np.ndarray, h: np.ndarray, sym_var: float | np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-symbol zero forcing for a diagonal channel.

    Returns the equalized observations y/h and their post-equalization
    noise variances v/|h|^2.
    """
    h = np.asarray(h)
    if h.ndim != 1:
        raise ValueError("zero forcing here expects diagonal gains as a vector")
    if np.any(h == 0):
        raise ValueError("channel gain is zero; cannot equalize")
    gain2 = h.real**2 + h.imag**2
    eq_var = np.broadcast_to(np.asarray(sym_var, dtype=np.float64), h.shape) / gain2
    return np.asarray(y) / h, eq_var


def symbol_bit_llrs(
    y_eq: np.ndarray, eq_var: np.ndarray, cst: Constellation
) -> np.ndarray:
    """Max-log bit LLRs per equalized symbol, shape (M, q).

    Entry (i, j) is the distance of the best point with bit j equal to 0
    minus the best with bit j equal to 1, scaled by the symbol's variance.
    """
    r = np.asarray(y_eq)[:, None] - cst.points[None, :]
    d2 = (r.real**2 + r.imag**2) / np.asarray(eq_var)[:, None]
    q = cst.bits_per_symbol
    bits = cst.label_bits(np.arange(cst.size))  # (P, q)
    out = np.empty((len(y_eq), q))
    for j in range(q):
        ones = bits[:, j] == 1
        out[:, j] = np.min(d2[:, ~ones], axis=1) - np.min(d2[:, ones], axis=1)
    return out


def saturation_cap(n_bits: int, v: np.ndarray) -> np.ndarray:
    """Largest LLR magnitude the decoder bookkeeping can distinguish: n/v."""
    return n_bits / np.asarray(v, dtype=np.float64)


def zf_llrs(
    y: np.ndarray,
    h: np.ndarray,
    sym_var: float | np.ndarray,
    cst: Constellation,
    layout: FrameLayout,
    keep_pads: bool = False,
) -> np.ndarray:
    """Code-domain bit LLRs via zero forcing, clipped to the saturation window.

    With ``keep_pads`` the padded symbol domain is returned instead, filler
    positions pinned to the saturated LLR of bit value 0.
    """
    y_eq, eq_var = zf_equalize(y, h, sym_var)
    flat = symbol_bit_llrs(y_eq, eq_var, cst).reshape(-1)
    v_full = np.repeat(
        np.broadcast_to(np.asarray(sym_var, dtype=np.float64), (layout.n_symbols,)),
        cst.bits_per_symbol,
    )
    cap = saturation_cap(layout.n_bits, v_full)
    flat = np.clip(flat, -cap, cap)
    if layout.pad_count:
        flat[layout.n_bits:] = -cap[layout.n_bits:]
    return flat if keep_pads else layout.strip(flat).copy()


def lattice_labels(cst: Constellation, m: int) -> np.ndarray:
    """All label combinations for m symbols, shape (P^m, m), lex order."""
    count = cst.size**m
    if count > MAX_LATTICE:
        raise ValueError(
            f"lattice of {cst.size}^{m} points exceeds the {MAX_LATTICE} guard"
        )
    idx = np.arange(count)
    scale = cst.size ** np.arange(m - 1, -1, -1)
    return (idx[:, None] // scale) % cst.size


def _lattice_distances(
    y: np.ndarray, h: np.ndarray, sym_var: float | np.ndarray, cst: Constellation
) -> tuple[np.ndarray, np.ndarray]:
    """Weighted distance of y to every lattice point; returns (labels, d)."""
    m = len(y)
    labels = lattice_labels(cst, m)
    xs = cst.points[labels]  # (L, M)
    h = np.asarray(h)
    hx = xs @ h.T if h.ndim == 2 else xs * h
    r = np.asarray(y)[None, :] - hx
    d = np.sum((r.real**2 + r.imag**2) / np.asarray(sym_var), axis=1)
    return labels, d


def ml_detect(
    y: np.ndarray, h: np.ndarray, sym_var: float | np.ndarray, cst: Constellation
) -> DetectionResult:
    """Exhaustive minimum-distance detection; ties keep the lowest lattice index."""
    labels, d = _lattice_distances(y, h, sym_var, cst)
    best = int(np.argmin(d))
    lab = labels[best]
    return DetectionResult(lab, cst.label_bits(lab).reshape(-1), float(d[best]))


def _lattice_bit_llrs(
    y: np.ndarray,
    h: np.ndarray,
    sym_var: float | np.ndarray,
    cst: Constellation,
    prior_llrs: np.ndarray | None,
) -> np.ndarray:
    """Max-log LLR of every padded-domain bit via the full lattice."""
    labels, d = _lattice_distances(y, h, sym_var, cst)
    bits = cst.label_bits(labels).reshape(len(labels), -1)  # (L, M*q)
    metric = -d
    if prior_llrs is not None:
        metric = metric + bits @ np.asarray(prior_llrs, dtype=np.float64)
    out = np.empty(bits.shape[1])
    for n in range(bits.shape[1]):
        ones = bits[:, n] == 1
        out[n] = np.max(metric[ones]) - np.max(metric[~ones])
    return out


def ml_llrs(
    y: np.ndarray,
    h: np.ndarray,
    sym_var: float | np.ndarray,
    cst: Constellation,
    layout: FrameLayout | None = None,
) -> np.ndarray:
    """Max-log bit LLRs from exhaustive detection.

    Padded symbol domain when no layout is given; with a layout, filler bits
    are dropped and the result is clipped to the saturation window.
    """
    flat = _lattice_bit_llrs(y, h, sym_var, cst, None)
    if layout is None:
        return flat
    v = per_bit_variance(np.broadcast_to(sym_var, (layout.n_symbols,)), layout)
    cap = saturation_cap(layout.n_bits, v)
    return np.clip(layout.strip(flat), -cap, cap)


def map_metric(
    word: np.ndarray,
    y: np.ndarray,
    h: np.ndarray,
    sym_var: float | np.ndarray,
    prior_llrs: np.ndarray,
    cst: Constellation,
) -> float:
    """Joint metric of one padded-domain word: -distance + prior log odds.

    The prior term sums the log odds of the bits set to 1, which matches the
    bit-factorized prior up to a word-independent constant.
    """
    from .modem import map_word, make_layout  # cycle-free local import

    word = np.asarray(word, dtype=np.uint8)
    layout = make_layout(len(word), cst)
    if layout.pad_count:
        raise ValueError("word length must fill whole symbols for this metric")
    x = map_word(word, cst, layout)
    prior = float(word @ np.asarray(prior_llrs, dtype=np.float64))
    return -weighted_distance(y, h, x, sym_var) + prior


def map_llrs(
    y: np.ndarray,
    h: np.ndarray,
    sym_var: float | np.ndarray,
    cst: Constellation,
    prior_llrs: np.ndarray,
    layout: FrameLayout | None = None,
) -> np.ndarray:
    """Max-log MAP bit LLRs with per-bit priors over the full lattice.

    With zero priors this equals :func:`ml_llrs` exactly.  Priors are given
    in the padded symbol domain.
    """
    flat = _lattice_bit_llrs(y, h, sym_var, cst, np.asarray(prior_llrs))
    if layout is None:
        return flat
    v = per_bit_variance(np.broadcast_to(sym_var, (layout.n_symbols,)), layout)
    cap = saturation_cap(layout.n_bits, v)
    return np.clip(layout.strip(flat), -cap, cap)
