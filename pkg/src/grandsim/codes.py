"""Binary linear block codes with fast syndrome checks.

Words are numpy uint8 arrays of length n.  Position ``i`` of a word maps to
the coefficient of ``x**(n-1-i)`` when a word is read as a polynomial, so
message-first systematic encoding writes the k message bits at positions
``0..k-1`` followed by the parity bits.

BCH codes are built from the generator polynomial (least common multiple of
minimal polynomials of the odd powers of alpha up to ``2t-1``); random and
user-supplied generator matrices give generic linear codes through the same
:class:`LinearCode` interface.
"""

from __future__ import annotations

import numpy as np

from .galois import GaloisField, poly_deg, poly_lcm, poly_mod


def _gf2_rref(mat: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2); returns (rref, pivot columns)."""
    m = (mat % 2).astype(np.uint8)
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hit = np.nonzero(m[r:, c])[0]
        if hit.size == 0:
            continue
        if hit[0] != 0:
            m[[r, r + hit[0]]] = m[[r + hit[0], r]]
        elim = np.nonzero(m[:, c])[0]
        elim = elim[elim != r]
        m[elim] ^= m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def _gf2_inv(mat: np.ndarray) -> np.ndarray:
    """Inverse of a square GF(2) matrix; raises ValueError if singular."""
    k = mat.shape[0]
    aug = np.concatenate([mat % 2, np.eye(k, dtype=np.uint8)], axis=1)
    red, pivots = _gf2_rref(aug)
    if pivots[:k] != list(range(k)):
        raise ValueError("matrix is singular over GF(2)")
    return red[:, k:]


class LinearCode:
    """An [n, k] binary linear code.

    Attributes
    ----------
    n, k : int
        Block length and message length.
    generator : (k, n) uint8 array
        Encoding matrix; codewords are ``message @ generator mod 2``.
    parity_check : (n-k, n) uint8 array
        Any word is a codeword iff ``parity_check @ word mod 2`` is zero.
    generator_poly : int or None
        For cyclic constructions, the generator polynomial (bit i holds the
        coefficient of x^i); None for generic matrices.
    bit_syndromes : (n,) array
        Column j of the parity check packed into one integer, so the
        syndrome of a word is the XOR of the entries at its set positions.
        uint64 when n-k <= 64, Python ints (object dtype) beyond that.
    """

    def __init__(self, generator: np.ndarray, generator_poly: int | None = None):
        gen = np.asarray(generator, dtype=np.uint8)
        if gen.ndim != 2:
            raise ValueError("generator must be a 2-D matrix")
        if np.any(gen > 1):
            raise ValueError("generator entries must be 0/1")
        self.k, self.n = (int(d) for d in gen.shape)
        if self.k > self.n:
            raise ValueError(f"k={self.k} exceeds n={self.n}")
        self.generator = gen
        self.generator_poly = generator_poly

        rref, pivots = _gf2_rref(gen)
        if len(pivots) != self.k:
            raise ValueError("generator matrix does not have full row rank")
        self.info_positions = np.asarray(pivots, dtype=np.int64)
        self._info_inverse = _gf2_inv(gen[:, pivots])
        self.systematic = pivots == list(range(self.k)) and bool(
            np.all(gen[:, : self.k] == np.eye(self.k, dtype=np.uint8))
        )

        # Parity check from the RREF: permute pivot columns to the front,
        # read off [A^T | I], then undo the permutation.
        free = [c for c in range(self.n) if c not in set(pivots)]
        a = rref[:, free]
        h_perm = np.concatenate(
            [a.T, np.eye(self.n - self.k, dtype=np.uint8)], axis=1
        )
        order = np.argsort(np.asarray(pivots + free))
        self.parity_check = np.ascontiguousarray(h_perm[:, order])
        assert not np.any((self.generator @ self.parity_check.T) % 2)

        r = self.n - self.k
        weights = 1 << np.arange(r, dtype=np.uint64) if r <= 64 else None
        if weights is not None:
            self.bit_syndromes = (self.parity_check.astype(np.uint64).T @ weights).astype(
                np.uint64
            )
        else:
            cols = [int("".join(map(str, self.parity_check[::-1, j])), 2) for j in range(self.n)]
            self.bit_syndromes = np.asarray(cols, dtype=object)

    def encode(self, message: np.ndarray) -> np.ndarray:
        """Map k message bits to an n-bit codeword."""
        msg = np.asarray(message, dtype=np.uint8)
        if msg.shape != (self.k,):
            raise ValueError(f"message must have shape ({self.k},), got {msg.shape}")
        return ((msg.astype(np.uint32) @ self.generator) & 1).astype(np.uint8)

    def syndrome(self, word: np.ndarray) -> np.ndarray:
        """Parity-check syndrome as an (n-k,) bit vector."""
        w = self._check_word(word)
        return ((self.parity_check.astype(np.uint32) @ w.astype(np.uint32)) & 1).astype(
            np.uint8
        )

    def syndrome_int(self, word: np.ndarray) -> int:
        """Syndrome packed into one integer (bit r = parity row r)."""
        w = self._check_word(word)
        sel = self.bit_syndromes[w != 0]
        if sel.size == 0:
            return 0
        return int(np.bitwise_xor.reduce(sel))

    def is_codeword(self, word: np.ndarray) -> bool:
        return self.syndrome_int(word) == 0

    def message_bits(self, word: np.ndarray) -> np.ndarray:
        """Recover the message from a codeword (undefined on non-codewords).

        For systematic codes this is plain truncation to the first k bits;
        in general it reads the information positions through the inverse of
        the corresponding generator columns.
        """
        w = self._check_word(word)
        return (
            (w[self.info_positions].astype(np.uint32) @ self._info_inverse) & 1
        ).astype(np.uint8)

    def poly_remainder(self, word: np.ndarray) -> int:
        """Remainder of the word polynomial modulo the generator polynomial.

        Only available for cyclic constructions; zero iff the word is a
        codeword, which cross-checks the parity-check route.
        """
        if self.generator_poly is None:
            raise ValueError("code was not built from a generator polynomial")
        w = self._check_word(word)
        value = 0
        for bit in w:
            value = (value << 1) | int(bit)
        return poly_mod(value, self.generator_poly)

    def _check_word(self, word: np.ndarray) -> np.ndarray:
        w = np.asarray(word, dtype=np.uint8)
        if w.shape != (self.n,):
            raise ValueError(f"word must have shape ({self.n},), got {w.shape}")
        return w

    def __repr__(self) -> str:
        return f"LinearCode(n={self.n}, k={self.k}, systematic={self.systematic})"


def build_bch(n: int, t: int, primitive_poly: int | None = None) -> LinearCode:
    """Construct a binary BCH code of length ``2^m - 1`` correcting t errors.

    The generator polynomial is the LCM of the minimal polynomials of
    alpha, alpha^3, ..., alpha^(2t-1); the dimension k follows from its
    degree.  Encoding is systematic (message first).
    """
    m = (n + 1).bit_length() - 1
    if (1 << m) - 1 != n:
        raise ValueError(f"BCH length must be 2^m - 1, got {n}")
    if t < 1:
        raise ValueError("t must be >= 1")
    field = GaloisField(m, primitive_poly)
    gen = 1
    for root_exp in range(1, 2 * t, 2):
        gen = poly_lcm(gen, field.minimal_polynomial(root_exp))
    k = n - poly_deg(gen)
    if k <= 0:
        raise ValueError(f"t={t} leaves no message bits at length {n}")
    assert poly_mod((1 << n) | 1, gen) == 0  # generator divides x^n + 1

    r = n - k
    g = np.zeros((k, n), dtype=np.uint8)
    for i in range(k):
        g[i, i] = 1
        rem = poly_mod(1 << (n - 1 - i), gen)
        for j in range(r):
            g[i, k + j] = (rem >> (r - 1 - j)) & 1
    return LinearCode(g, generator_poly=gen)


def random_linear_code(n: int, k: int, seed: int) -> LinearCode:
    """Random systematic [n, k] code: G = [I | P] with i.i.d. parity bits.

    k = n is allowed and yields the rate-1 identity code (every word is a
    codeword), which the simulator uses for uncoded baselines.
    """
    if not 0 < k <= n:
        raise ValueError(f"need 0 < k <= n, got n={n}, k={k}")
    rng = np.random.default_rng(seed)
    p = rng.integers(0, 2, size=(k, n - k), dtype=np.uint8)
    g = np.concatenate([np.eye(k, dtype=np.uint8), p], axis=1)
    return LinearCode(g)


def load_generator_matrix(path: str) -> LinearCode:
    """Load a generator matrix from plain text.

    One row per line, entries 0/1 either whitespace-separated or contiguous;
    blank lines and lines starting with '#' are skipped.
    """
    rows: list[list[int]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            tokens = text.split() if " " in text or "\t" in text else list(text)
            try:
                row = [int(tok) for tok in tokens]
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric entry") from None
            if any(b not in (0, 1) for b in row):
                raise ValueError(f"{path}:{lineno}: entries must be 0 or 1")
            rows.append(row)
    if not rows:
        raise ValueError(f"{path}: no matrix rows found")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError(f"{path}: ragged rows, widths {sorted(widths)}")
    return LinearCode(np.asarray(rows, dtype=np.uint8))
