"""Constellation mapping between code bits and complex symbols.

Labels are integers whose bits read big-endian: bit j of a q-bit label is
``(label >> (q-1-j)) & 1``.  BPSK maps bit 0 to +1.  16-QAM is Gray labeled
per rail (00 -> +3, 01 -> +1, 11 -> -1, 10 -> -3, scaled by 1/sqrt(10)), so
nearest neighbors always differ in exactly one bit.

A frame of n code bits is padded with zero bits at the tail to fill the last
symbol; :class:`FrameLayout` records the split so LLR and bit vectors can be
moved between the padded symbol domain and the code domain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_QAM16_RAIL = {(0, 0): 3.0, (0, 1): 1.0, (1, 1): -1.0, (1, 0): -3.0}


@dataclass(frozen=True)
class Constellation:
    name: str
    points: np.ndarray  # complex128, indexed by label
    bits_per_symbol: int

    @property
    def size(self) -> int:
        return len(self.points)

    def label_bits(self, labels: np.ndarray) -> np.ndarray:
        """(..., q) bit array for integer labels, big-endian."""
        labels = np.asarray(labels)
        shifts = np.arange(self.bits_per_symbol - 1, -1, -1)
        return ((labels[..., None] >> shifts) & 1).astype(np.uint8)

    def bits_to_labels(self, bits: np.ndarray) -> np.ndarray:
        """(M, q) bits -> (M,) integer labels."""
        q = self.bits_per_symbol
        weights = 1 << np.arange(q - 1, -1, -1)
        return bits.reshape(-1, q).astype(np.int64) @ weights


def constellation(name: str) -> Constellation:
    """Build a named constellation: "bpsk" or "qam16", unit mean energy."""
    key = name.lower()
    if key == "bpsk":
        points = np.array([1.0 + 0.0j, -1.0 + 0.0j])
        return Constellation("bpsk", points, 1)
    if key == "qam16":
        points = np.empty(16, dtype=np.complex128)
        for label in range(16):
            b = [(label >> (3 - j)) & 1 for j in range(4)]
            points[label] = complex(
                _QAM16_RAIL[(b[0], b[1])], _QAM16_RAIL[(b[2], b[3])]
            ) / np.sqrt(10.0)
        return Constellation("qam16", points, 4)
    raise ValueError(f"unknown constellation {name!r}")


@dataclass(frozen=True)
class FrameLayout:
    """Padding bookkeeping for one code word mapped onto symbols."""

    n_bits: int
    bits_per_symbol: int
    n_symbols: int
    pad_count: int

    @property
    def padded_len(self) -> int:
        return self.n_symbols * self.bits_per_symbol

    def pad(self, word: np.ndarray) -> np.ndarray:
        """Append zero filler bits to complete the last symbol."""
        if self.pad_count == 0:
            return np.asarray(word)
        fill = np.zeros(self.pad_count, dtype=np.asarray(word).dtype)
        return np.concatenate([word, fill])

    def strip(self, padded: np.ndarray) -> np.ndarray:
        """Drop filler positions, keeping the n code-domain entries."""
        return np.asarray(padded)[: self.n_bits]


def make_layout(n_bits: int, cst: Constellation) -> FrameLayout:
    q = cst.bits_per_symbol
    n_symbols = -(-n_bits // q)
    return FrameLayout(n_bits, q, n_symbols, n_symbols * q - n_bits)


def map_word(word: np.ndarray, cst: Constellation, layout: FrameLayout | None = None) -> np.ndarray:
    """Map an n-bit word to its symbol vector (filler bits transmitted as 0)."""
    word = np.asarray(word, dtype=np.uint8)
    if layout is None:
        layout = make_layout(len(word), cst)
    elif len(word) != layout.n_bits:
        raise ValueError(f"word length {len(word)} != layout n_bits {layout.n_bits}")
    labels = cst.bits_to_labels(layout.pad(word))
    return cst.points[labels]


def slice_symbols(y: np.ndarray, cst: Constellation) -> np.ndarray:
    """Nearest constellation label per received symbol, lowest label on ties."""
    d2 = np.abs(np.asarray(y)[:, None] - cst.points[None, :]) ** 2
    return np.argmin(d2, axis=1)


def hard_demap(labels: np.ndarray, cst: Constellation, layout: FrameLayout) -> np.ndarray:
    """Labels back to the n code bits (filler positions dropped)."""
    bits = cst.label_bits(np.asarray(labels)).reshape(-1)
    return layout.strip(bits).astype(np.uint8)


def per_bit_variance(sym_var: np.ndarray, layout: FrameLayout) -> np.ndarray:
    """Per-code-bit noise variance: each symbol's variance repeated per bit."""
    v = np.broadcast_to(np.asarray(sym_var, dtype=np.float64), (layout.n_symbols,))
    return layout.strip(np.repeat(v, layout.bits_per_symbol)).copy()
