"""Arithmetic over GF(2) polynomials and GF(2^m) extension fields.

Polynomials over GF(2) are stored as Python integers, bit ``i`` holding the
coefficient of ``x**i`` (so ``0b1011`` is ``x^3 + x + 1``).  Addition is XOR,
products and remainders stay exact at any degree.

Elements of GF(2^m) are integers in ``[0, 2**m)`` holding the coefficients of
the residue polynomial in the same bit order.  A :class:`GaloisField` builds
discrete exp/log tables for a primitive element, which makes multiplication
and inversion table lookups.
"""

from __future__ import annotations

import numpy as np

# Default primitive polynomials, indexed by extension degree m.  Construction
# verifies primitivity by walking the powers of x, so a wrong entry cannot
# pass silently.
DEFAULT_PRIMITIVE_POLY = {
    2: 0b111,              # x^2 + x + 1
    3: 0b1011,             # x^3 + x + 1
    4: 0b10011,            # x^4 + x + 1
    5: 0b100101,           # x^5 + x^2 + 1
    6: 0b1000011,          # x^6 + x + 1
    7: 0b10001001,         # x^7 + x^3 + 1
    8: 0b100011101,        # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,       # x^9 + x^4 + 1
    10: 0b10000001001,     # x^10 + x^3 + 1
    11: 0b100000000101,    # x^11 + x^2 + 1
    12: 0b1000001010011,   # x^12 + x^6 + x^4 + x + 1
}


def poly_deg(p: int) -> int:
    """Degree of a GF(2) polynomial; the zero polynomial has degree -1."""
    return p.bit_length() - 1


def poly_mul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    """Quotient and remainder of GF(2) polynomial division."""
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = poly_deg(b)
    quot = 0
    while poly_deg(a) >= db:
        shift = poly_deg(a) - db
        quot |= 1 << shift
        a ^= b << shift
    return quot, a


def poly_mod(a: int, b: int) -> int:
    """Remainder of GF(2) polynomial division."""
    return poly_divmod(a, b)[1]


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_lcm(a: int, b: int) -> int:
    """Least common multiple of two GF(2) polynomials."""
    if a == 0 or b == 0:
        return 0
    quot, rem = poly_divmod(poly_mul(a, b), poly_gcd(a, b))
    assert rem == 0
    return quot


class GaloisField:
    """GF(2^m) with exp/log tables over a primitive element.

    Parameters
    ----------
    m : int
        Extension degree; the field has ``2**m`` elements.
    primitive_poly : int, optional
        Degree-m polynomial over GF(2) used for reduction.  Must be
        primitive: the powers of x have to visit every nonzero element
        before returning to 1.  Defaults to a standard choice per degree.

    Raises
    ------
    ValueError
        If the polynomial has the wrong degree or is not primitive.
    """

    def __init__(self, m: int, primitive_poly: int | None = None):
        if primitive_poly is None:
            try:
                primitive_poly = DEFAULT_PRIMITIVE_POLY[m]
            except KeyError:
                raise ValueError(f"no default primitive polynomial for m={m}") from None
        if poly_deg(primitive_poly) != m:
            raise ValueError(
                f"primitive polynomial degree {poly_deg(primitive_poly)} != m={m}"
            )
        if not primitive_poly & 1:
            raise ValueError("primitive polynomial must have a nonzero constant term")
        self.m = int(m)
        self.order = 1 << m
        self.primitive_poly = int(primitive_poly)

        size = self.order - 1
        # exp is doubled so products of two logs never need a modulo.
        exp = np.zeros(2 * size, dtype=np.int64)
        log = np.full(self.order, -1, dtype=np.int64)
        x = 1
        for i in range(size):
            if log[x] >= 0:
                raise ValueError(
                    f"polynomial {primitive_poly:#b} is not primitive over GF(2)"
                )
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & self.order:
                x ^= self.primitive_poly
        if x != 1:
            raise ValueError(
                f"polynomial {primitive_poly:#b} is not primitive over GF(2)"
            )
        exp[size:] = exp[:size]
        self.exp = exp
        self.log = log

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.exp[self.order - 1 - self.log[a]])

    def pow_alpha(self, e: int) -> int:
        """alpha**e for any integer exponent."""
        return int(self.exp[e % (self.order - 1)])

    def minimal_polynomial(self, exponent: int) -> int:
        """Minimal polynomial over GF(2) of alpha**exponent.

        Multiplies out (x + r) over the conjugacy class
        ``{alpha**(exponent * 2^j)}``; the product must come out with 0/1
        coefficients, which is asserted.
        """
        n = self.order - 1
        conj: list[int] = []
        e = exponent % n
        while e not in conj:
            conj.append(e)
            e = (e * 2) % n
        coeffs = [1]  # coeffs[i] multiplies x^i, values in GF(2^m)
        for e in conj:
            root = int(self.exp[e])
            nxt = [0] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i + 1] ^= c
                nxt[i] ^= self.mul(root, c)
            coeffs = nxt
        out = 0
        for i, c in enumerate(coeffs):
            assert c in (0, 1), "conjugacy product left the base field"
            out |= c << i
        return out

    def __repr__(self) -> str:
        return f"GaloisField(m={self.m}, primitive_poly={self.primitive_poly:#b})"
