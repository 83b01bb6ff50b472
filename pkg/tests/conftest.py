"""Shared helpers: slow reference implementations used as test oracles."""

from __future__ import annotations

from math import fsum

import numpy as np

from grandsim.codes import LinearCode
from grandsim.detector import saturation_cap, weighted_distance, zf_equalize
from grandsim.guesswork import make_source
from grandsim.modem import (
    Constellation,
    FrameLayout,
    hard_demap,
    map_word,
    per_bit_variance,
    slice_symbols,
)


def all_codewords(code: LinearCode) -> np.ndarray:
    """Every codeword as a (2^k, n) uint8 matrix; keep k small."""
    assert code.k <= 16, "codebook enumeration guard"
    msgs = ((np.arange(1 << code.k)[:, None] >> np.arange(code.k)) & 1).astype(np.uint8)
    return ((msgs.astype(np.uint32) @ code.generator) & 1).astype(np.uint8)


def graded_key(flips: np.ndarray, mags: np.ndarray):
    """The package-wide tie-break: (weight, Hamming weight, position tuple)."""
    pos = tuple(int(i) for i in np.flatnonzero(flips))
    return (fsum(mags[i] for i in pos), len(pos), pos)


def codebook_pick(word: np.ndarray, books: np.ndarray, llrs: np.ndarray) -> np.ndarray:
    """Soft-ML oracle: codeword minimizing the flipped-magnitude sum."""
    mags = np.abs(np.asarray(llrs, dtype=np.float64))
    flips = books ^ word
    rough = flips @ mags
    near = np.flatnonzero(rough <= rough.min() + 1e-9)
    best = min(near, key=lambda i: graded_key(flips[i], mags))
    return books[best]


def hamming_pick(word: np.ndarray, books: np.ndarray) -> np.ndarray:
    """Minimum-Hamming-distance oracle with the position-tuple tie-break."""
    flips = books ^ word
    dist = flips.sum(axis=1)
    near = np.flatnonzero(dist == dist.min())
    best = min(
        near, key=lambda i: tuple(int(p) for p in np.flatnonzero(flips[i]))
    )
    return books[best]


def reference_turbo(
    y: np.ndarray,
    h: np.ndarray,
    sym_var,
    code: LinearCode,
    cst: Constellation,
    layout: FrameLayout,
    budget: int,
    iterations: int,
    source_kind: str = "sgrand",
    llr_in: np.ndarray | None = None,
    abandonment: str = "literal",
) -> dict:
    """Literal one-query-at-a-time transcription of the joint decoder.

    Distances are recomputed from scratch per query; per-bit records use the
    same clamped min-accumulation the engine implements.
    """
    n = code.n
    var = np.broadcast_to(np.asarray(sym_var, dtype=np.float64), (layout.n_symbols,))
    v = per_bit_variance(var, layout)
    y_eq, _ = zf_equalize(y, h, var)
    detected = hard_demap(slice_symbols(y_eq, cst), cst, layout)
    decoded = detected.copy()
    best = np.inf
    best_cw = np.inf
    flip_best = saturation_cap(n, v).copy()
    llr = np.zeros(n) if llr_in is None else np.asarray(llr_in, dtype=np.float64).copy()

    def dist(word: np.ndarray) -> float:
        return weighted_distance(y, h, map_word(word, cst, layout), var)

    queries: list[int] = []
    hits: list[bool] = []
    recorded: list[tuple[np.ndarray, float]] = []
    for _ in range(iterations):
        k = 0
        hit = False
        for pattern in make_source(source_kind, n, llr):
            k += 1
            cand = detected.copy()
            cand[list(pattern)] ^= 1
            d = dist(cand)
            recorded.append((cand.copy(), d))
            diff = list(pattern)
            if d < best:
                flip_best[diff] = np.minimum(flip_best[diff], best)
                best = d
                detected = cand.copy()
            else:
                flip_best[diff] = np.minimum(flip_best[diff], d)
            is_cw = code.is_codeword(cand)
            if is_cw or k == budget:
                if (is_cw or abandonment == "literal") and d < best_cw:
                    best_cw = d
                    decoded = cand.copy()
                hit = is_cw
                break
        queries.append(k)
        hits.append(hit)
        llr = (2.0 * detected - 1.0) * (flip_best - best)
    return {
        "decoded": decoded,
        "detected": detected,
        "llrs": llr,
        "queries": queries,
        "hits": hits,
        "best": best,
        "best_cw": best_cw,
        "flip_best": flip_best,
        "recorded": recorded,
        "abandoned": not code.is_codeword(decoded),
    }
