"""GF(2^m) arithmetic via log/antilog tables.

Addition is XOR; multiplication and inversion go through the discrete
logarithm tables generated from a primitive polynomial.
"""

from __future__ import annotations


class FieldError(ValueError):
    pass


# conventional primitive polynomials, bitmask includes the x^m term
DEFAULT_POLYS = {
    4: 0x13,   # x^4 + x + 1
    8: 0x11D,  # x^8 + x^4 + x^3 + x^2 + 1
}


class GF:
    """Binary extension field GF(2^m).

    Parameters
    ----------
    m : int
        Extension degree (>= 1).
    primitive_poly : int, optional
        Bitmask of a primitive polynomial of degree m. Defaults to a
        conventional choice for m in {4, 8}.
    """

    def __init__(self, m: int, primitive_poly: int | None = None):
        if m < 1:
            raise FieldError("extension degree must be >= 1")
        if primitive_poly is None:
            try:
                primitive_poly = DEFAULT_POLYS[m]
            except KeyError:
                raise FieldError(f"no default primitive polynomial for m={m}")
        if primitive_poly.bit_length() != m + 1:
            raise FieldError("primitive_poly must have degree exactly m")

        self.m = m
        self.q = 1 << m
        self.primitive_poly = primitive_poly

        order = self.q - 1
        antilog = [0] * order
        log = [0] * self.q
        x = 1
        for i in range(order):
            if x == 1 and i > 0:
                # generator cycle shorter than 2^m - 1
                raise FieldError("polynomial is not primitive")
            antilog[i] = x
            log[x] = i
            x <<= 1
            if x & self.q:
                x ^= primitive_poly
        if x != 1:
            raise FieldError("polynomial is not irreducible/primitive")

        self.antilog = antilog
        self.log = log

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.antilog[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(2^m)")
        return self.antilog[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e <= 0:
                raise ZeroDivisionError("0 cannot be raised to a non-positive power")
            return 0
        return self.antilog[(self.log[a] * e) % (self.q - 1)]

    def alpha_pow(self, e: int) -> int:
        """alpha^e for the table generator alpha."""
        return self.antilog[e % (self.q - 1)]

    def mul_noLUT(self, a: int, b: int) -> int:
        """Carry-less polynomial multiply reduced by the primitive polynomial.

        Reference implementation used to cross-check the tables.
        """
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & self.q:
                a ^= self.primitive_poly
        return r

    # -- polynomial helpers (coefficient lists, index = power of x) --

    def poly_mul(self, p: list[int], q: list[int]) -> list[int]:
        r = [0] * (len(p) + len(q) - 1)
        for i, pi in enumerate(p):
            if pi == 0:
                continue
            for j, qj in enumerate(q):
                r[i + j] ^= self.mul(pi, qj)
        return r

    def poly_eval(self, p: list[int], x: int) -> int:
        """Evaluate p at x by Horner's rule."""
        acc = 0
        for c in reversed(p):
            acc = self.mul(acc, x) ^ c
        return acc
