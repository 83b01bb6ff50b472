"""Guessing-based decoders: syndrome-only GRAND and the joint turbo variant.

Both decoders walk a noise-pattern source in likelihood order and test the
hard word with those bits flipped.  The syndrome-only decoder stops at the
first codeword hit.  The turbo decoder additionally scores every queried
word with the noise-weighted distance to the received frame and keeps three
running records:

* the best distance seen and the word attaining it (the running detection
  decision, which becomes the base the patterns are applied to),
* per bit, the best distance among queried words that disagree with the
  running detection there (initialized at the saturation level n/v, which
  bounds what one bit flip can be distinguished against), and
* the best distance among exit candidates (codeword hits, plus the final
  budget-edge query under the literal abandonment rule), whose argmin is
  the decoded output.

At every iteration exit the per-bit records synthesize fresh soft values,
sign taken from the running detection, magnitude from the distance gap, and
the next iteration rebuilds its pattern source from them.  One iteration
with zero soft input and an unlimited budget is plain soft GRAND; the extra
iterations are what let hard detection errors get guessed jointly with the
channel noise.

The query loop is evaluated in growing blocks: distances come from per-bit
flip deltas against the base word (exact, since symbols factorize), and a
block is consumed only up to its first event (detection improvement,
codeword hit, or budget edge), so the sequential semantics are preserved
while the common no-event stretches stay vectorized.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .codes import LinearCode
from .detector import saturation_cap, zf_equalize
from .guesswork import Pattern, make_source
from .modem import Constellation, FrameLayout, hard_demap, per_bit_variance, slice_symbols

SOURCES = ("hamming", "orbgrand", "sgrand")
ABANDONMENT = ("literal", "conservative")
LLR_SIGNS = ("p1-over-p0", "p0-over-p1")
_BLOCK_START = 32
_BLOCK_MAX = 4096


@dataclass
class DecoderConfig:
    """All decoder knobs in one record."""

    budget: int = 100_000        # queries per iteration
    iterations: int = 2
    source: str = "sgrand"       # pattern order rebuilt from the soft values
    llr_input: str = "zero"      # "zero" | "zf": initial soft input in the harness
    abandonment: str = "literal"  # may the budget-edge word win final selection
    llr_sign: str = "p1-over-p0"  # output sign convention
    dedup: bool = False          # skip bookkeeping for re-queried words
    record_queries: bool = False  # keep (word, distance) per consumed query

    def validate(self) -> None:
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.source not in SOURCES:
            raise ValueError(f"source must be one of {SOURCES}")
        if self.llr_input not in ("zero", "zf"):
            raise ValueError("llr_input must be 'zero' or 'zf'")
        if self.abandonment not in ABANDONMENT:
            raise ValueError(f"abandonment must be one of {ABANDONMENT}")
        if self.llr_sign not in LLR_SIGNS:
            raise ValueError(f"llr_sign must be one of {LLR_SIGNS}")


@dataclass
class TurboState:
    """Running records of the joint search."""

    detected: np.ndarray          # word with the best distance so far
    decoded: np.ndarray           # best exit candidate so far
    best_dist: float
    best_codeword_dist: float
    flip_best_dist: np.ndarray    # per bit: best distance disagreeing there
    llrs: np.ndarray


@dataclass
class DecodeOutcome:
    decoded: np.ndarray
    detected: np.ndarray
    llrs: np.ndarray | None
    queries_per_iteration: list[int]
    hits: list[bool]
    abandoned: bool
    best_dist: float = np.inf
    best_codeword_dist: float = np.inf
    flip_best_dist: np.ndarray | None = None
    distance_evals: int = 0
    recorded: list[tuple[np.ndarray, float]] | None = None

    @property
    def queries(self) -> int:
        return sum(self.queries_per_iteration)


def synthesize_llrs(state: TurboState) -> np.ndarray:
    """Soft output from the running records.

    Magnitude is the distance a bit flip costs over the detection minimum;
    sign says which value the detection currently holds.  Magnitudes can
    only go negative if even the best word scores beyond saturation, which
    the formula reports faithfully.
    """
    sign = 2.0 * state.detected.astype(np.float64) - 1.0
    return sign * (state.flip_best_dist - state.best_dist)


def message_bits(outcome: DecodeOutcome, code: LinearCode) -> tuple[np.ndarray, bool]:
    """Message recovery from a decode, with a validity flag."""
    return code.message_bits(outcome.decoded), bool(code.is_codeword(outcome.decoded))


def _pattern_matrix(pats: list[Pattern], sentinel: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pack ragged patterns into a sentinel-padded rectangle."""
    count = len(pats)
    lens = np.fromiter((len(p) for p in pats), dtype=np.int64, count=count)
    wmax = max(1, int(lens.max()) if count else 0)
    idx = np.full((count, wmax), sentinel, dtype=np.int64)
    mask = np.arange(wmax)[None, :] < lens[:, None]
    total = int(lens.sum())
    if total:
        flat = np.fromiter(
            itertools.chain.from_iterable(pats), dtype=np.int64, count=total
        )
        idx[mask] = flat
    return idx, mask, lens


def _scatter_min(target: np.ndarray, positions: np.ndarray, values: np.ndarray) -> None:
    """target[p] = min(target[p], min of values at p), vectorized."""
    if positions.size == 0:
        return
    order = np.argsort(positions, kind="stable")
    sp = positions[order]
    sv = values[order]
    starts = np.flatnonzero(np.r_[True, sp[1:] != sp[:-1]])
    upos = sp[starts]
    mins = np.minimum.reduceat(sv, starts)
    target[upos] = np.minimum(target[upos], mins)


def hard_grand(
    word: np.ndarray,
    code: LinearCode,
    source,
    budget: int,
) -> DecodeOutcome:
    """Syndrome-only GRAND: first codeword hit in pattern order wins.

    ``source`` is any pattern iterator; handing it a soft-ordered source
    makes this the single-pass soft decoder.  If the budget runs out the
    budget-edge candidate is returned and flagged as abandoned.
    """
    word = np.asarray(word, dtype=np.uint8)
    if budget < 1:
        raise ValueError("budget must be >= 1")
    n = code.n
    target = code.syndrome_int(word)
    synd_ext = np.concatenate([code.bit_syndromes, np.zeros(1, code.bit_syndromes.dtype)])

    k = 0
    block = _BLOCK_START
    last_pattern: Pattern = ()
    while k < budget:
        pats = list(itertools.islice(source, min(block, budget - k)))
        block = min(block * 2, _BLOCK_MAX)
        if not pats:
            break  # source exhausted before the budget
        idx, _, _ = _pattern_matrix(pats, n)
        synd = np.bitwise_xor.reduce(synd_ext[idx], axis=1)
        hit_rows = np.flatnonzero(synd == target)
        if hit_rows.size:
            j = int(hit_rows[0])
            k += j + 1
            decoded = word.copy()
            flips = list(pats[j])
            decoded[flips] ^= 1
            return DecodeOutcome(
                decoded, decoded.copy(), None, [k], [True], abandoned=False
            )
        k += len(pats)
        last_pattern = pats[-1]
    decoded = word.copy()
    decoded[list(last_pattern)] ^= 1
    return DecodeOutcome(decoded, decoded.copy(), None, [k], [False], abandoned=True)


def turbo_grand(
    y: np.ndarray,
    h: np.ndarray,
    sym_var: float | np.ndarray,
    code: LinearCode,
    cst: Constellation,
    layout: FrameLayout,
    config: DecoderConfig | None = None,
    llr_in: np.ndarray | None = None,
) -> DecodeOutcome:
    """Joint detection and decoding by iterated guessing.

    ``h`` holds the diagonal gains the receiver believes in; filler bits of
    the last symbol are held at zero throughout the search, so patterns are
    drawn over the n code positions only.
    """
    cfg = config or DecoderConfig()
    cfg.validate()
    n, q, m = code.n, cst.bits_per_symbol, layout.n_symbols
    if layout.n_bits != n:
        raise ValueError(f"layout carries {layout.n_bits} bits, code has n={n}")
    y = np.asarray(y, dtype=np.complex128)
    h = np.asarray(h, dtype=np.complex128)
    var = np.broadcast_to(np.asarray(sym_var, dtype=np.float64), (m,))
    v = per_bit_variance(var, layout)

    if llr_in is None:
        llr = np.zeros(n)
    else:
        llr = np.asarray(llr_in, dtype=np.float64).copy()
        if llr.shape != (n,):
            raise ValueError(f"llr_in must have shape ({n},)")
        if not np.all(np.isfinite(llr)):
            raise ValueError("llr_in must be finite")

    # Hard start from per-symbol slicing of the equalized frame.
    y_eq, _ = zf_equalize(y, h, var)
    detected = hard_demap(slice_symbols(y_eq, cst), cst, layout)

    # Distance machinery: per-symbol label terms are fixed for the frame,
    # per-position flip deltas follow the current base labels.
    r = y[:, None] - h[:, None] * cst.points[None, :]
    term = (r.real**2 + r.imag**2) / var[:, None]
    labels = cst.bits_to_labels(layout.pad(detected))
    d_base = float(term[np.arange(m), labels].sum())
    pos = np.arange(n)
    pos_sym = pos // q
    pos_mask = (1 << (q - 1 - pos % q)).astype(np.int64)

    def flip_deltas() -> np.ndarray:
        base = term[pos_sym, labels[pos_sym]]
        return term[pos_sym, labels[pos_sym] ^ pos_mask] - base

    delta_ext = np.concatenate([flip_deltas(), [0.0]])
    synd_ext = np.concatenate([code.bit_syndromes, np.zeros(1, code.bit_syndromes.dtype)])
    target = code.syndrome_int(detected)

    st = TurboState(
        detected=detected,
        decoded=detected.copy(),
        best_dist=np.inf,
        best_codeword_dist=np.inf,
        flip_best_dist=saturation_cap(n, v).copy(),
        llrs=llr,
    )
    queries: list[int] = []
    hits: list[bool] = []
    recorded: list[tuple[np.ndarray, float]] | None = [] if cfg.record_queries else None
    seen: set[bytes] | None = set() if cfg.dedup else None
    distance_evals = 0

    def block_distances(pats: list[Pattern]) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        idx, mask, lens = _pattern_matrix(pats, n)
        d = d_base + np.sum(delta_ext[idx], axis=1)
        if q > 1 and idx.shape[1] > 1:
            # Flips sharing a symbol are not additive; redo those rows exactly.
            fake = m + np.arange(idx.shape[1])
            syms = np.where(mask, pos_sym[np.minimum(idx, n - 1)], fake[None, :])
            syms_sorted = np.sort(syms, axis=1)
            for r in np.flatnonzero(
                np.any(syms_sorted[:, 1:] == syms_sorted[:, :-1], axis=1)
            ):
                touched: dict[int, int] = {}
                for p in pats[r]:
                    s = int(pos_sym[p])
                    touched[s] = touched.get(s, 0) ^ int(pos_mask[p])
                d[r] = d_base + sum(
                    term[s, labels[s] ^ msk] - term[s, labels[s]]
                    for s, msk in touched.items()
                )
        synd = np.bitwise_xor.reduce(synd_ext[idx], axis=1)
        return d, synd, idx, mask

    def consume_plain(pats: list[Pattern], d: np.ndarray, idx: np.ndarray, mask: np.ndarray) -> None:
        """Non-event queries: only the per-bit flip records can move."""
        if recorded is not None or seen is not None:
            keep = np.ones(len(pats), dtype=bool)
            for r, p in enumerate(pats):
                wrd = st.detected.copy()
                wrd[list(p)] ^= 1
                if recorded is not None:
                    recorded.append((wrd, float(d[r])))
                if seen is not None:
                    key = wrd.tobytes()
                    if key in seen:
                        keep[r] = False
                    else:
                        seen.add(key)
            idx, mask, d = idx[keep], mask[keep], d[keep]
        flat_pos = idx[mask]
        flat_d = np.repeat(d, mask.sum(axis=1))
        _scatter_min(st.flip_best_dist, flat_pos, flat_d)

    for _ in range(cfg.iterations):
        source = make_source(cfg.source, n, st.llrs)
        k = 0
        hit = False
        ended = False
        block = _BLOCK_START
        pending: list[Pattern] = []
        while not ended:
            if not pending:
                pending = list(itertools.islice(source, min(block, cfg.budget - k)))
                block = min(block * 2, _BLOCK_MAX)
                if not pending:
                    break  # source exhausted; treated like an eventless end
            d, synd, idx, mask = block_distances(pending)
            distance_evals += len(pending)
            hit_rows = synd == target
            event_rows = hit_rows | (d < st.best_dist)
            if k + len(pending) == cfg.budget:
                event_rows[-1] = True  # budget edge always exits
            ev = np.flatnonzero(event_rows)
            if ev.size == 0:
                consume_plain(pending, d, idx, mask)
                k += len(pending)
                pending = []
                continue

            j = int(ev[0])
            consume_plain(pending[:j], d[:j], idx[:j], mask[:j])
            k += j + 1
            flips = list(pending[j])
            d_j = float(d[j])
            candidate = st.detected.copy()
            candidate[flips] ^= 1
            if recorded is not None:
                recorded.append((candidate.copy(), d_j))
            if seen is not None:
                seen.add(candidate.tobytes())

            if d_j < st.best_dist:
                # Flipped bits disagree with the outgoing detection, which
                # held the minimum until now; bank it before moving the base.
                if flips:
                    st.flip_best_dist[flips] = np.minimum(
                        st.flip_best_dist[flips], st.best_dist
                    )
                st.best_dist = d_j
                st.detected = candidate
                d_base = d_j
                for p in flips:
                    labels[pos_sym[p]] ^= pos_mask[p]
                target ^= int(synd[j])
                touched = np.unique(pos_sym[flips]) if flips else ()
                for s in touched:
                    sel = pos_sym == s
                    delta_ext[:-1][sel] = (
                        term[s, labels[s] ^ pos_mask[sel]] - term[s, labels[s]]
                    )
            elif flips:
                st.flip_best_dist[flips] = np.minimum(st.flip_best_dist[flips], d_j)

            if bool(hit_rows[j]) or k == cfg.budget:
                eligible = bool(hit_rows[j]) or cfg.abandonment == "literal"
                if eligible and d_j < st.best_codeword_dist:
                    st.best_codeword_dist = d_j
                    st.decoded = candidate.copy()
                hit = bool(hit_rows[j])
                ended = True
            else:
                pending = pending[j + 1 :]  # re-scored against the new base

        queries.append(k)
        hits.append(hit)
        st.llrs = synthesize_llrs(st)

    out_llrs = st.llrs if cfg.llr_sign == "p1-over-p0" else -st.llrs
    return DecodeOutcome(
        decoded=st.decoded.copy(),
        detected=st.detected.copy(),
        llrs=out_llrs,
        queries_per_iteration=queries,
        hits=hits,
        abandoned=not code.is_codeword(st.decoded),
        best_dist=st.best_dist,
        best_codeword_dist=st.best_codeword_dist,
        flip_best_dist=st.flip_best_dist.copy(),
        distance_evals=distance_evals,
        recorded=recorded,
    )
