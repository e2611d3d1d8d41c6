from typing import Any, Iterable, List, Tuple

import numpy as np

from locus.core.field import ArrayLike, FieldElement, FieldSpec
from locus.errors import FieldError, FieldMismatchError


class Poly:
    """
    Polynomial over a finite field, coefficients stored low to high without trailing zeros.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: ArrayLike) -> None:
        c = np.atleast_1d(np.asarray(coeffs, dtype=np.int64)).ravel()
        nz = np.nonzero(c)[0]
        self.field = field
        self.coeffs = c[: int(nz[-1]) + 1].copy() if len(nz) else np.zeros(0, dtype=np.int64)

    @classmethod
    def zero(cls, field: FieldSpec) -> "Poly":
        return cls(field, [])

    @classmethod
    def one(cls, field: FieldSpec) -> "Poly":
        return cls(field, [1])

    @classmethod
    def monomial(cls, field: FieldSpec, degree: int, coeff: int = 1) -> "Poly":
        c = np.zeros(degree + 1, dtype=np.int64)
        c[degree] = coeff
        return cls(field, c)

    @classmethod
    def x_pow_minus(cls, field: FieldSpec, n: int, c: int = 1) -> "Poly":
        """x^n - c"""
        coeffs = np.zeros(n + 1, dtype=np.int64)
        coeffs[n] = 1
        coeffs[0] = field.sub(coeffs[0], c)
        return cls(field, coeffs)

    @classmethod
    def from_roots(cls, field: FieldSpec, roots: Iterable[int]) -> "Poly":
        cur = np.ones(1, dtype=np.int64)
        for r in roots:
            nxt = np.zeros(len(cur) + 1, dtype=np.int64)
            nxt[1:] = cur
            nxt[:-1] = field.sub(nxt[:-1], field.mul(r, cur))
            cur = nxt
        return cls(field, cur)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        if self.is_zero():
            raise FieldError("The zero polynomial has no leading coefficient")
        return int(self.coeffs[-1])

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    @property
    def coefficients(self) -> List[FieldElement]:
        return [FieldElement(int(c), self.field) for c in self.coeffs]

    def to_list(self) -> List[int]:
        return [int(c) for c in self.coeffs]

    def padded(self, length: int) -> np.ndarray:
        out = np.zeros(length, dtype=np.int64)
        out[: len(self.coeffs)] = self.coeffs[:length]
        return out

    def weight(self) -> int:
        return int(np.count_nonzero(self.coeffs))

    def __repr__(self) -> str:
        return f"Poly({self.to_list()} over {self.field})"

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.field, tuple(self.to_list())))

    def _check(self, other: "Poly") -> None:
        if other.field != self.field:
            raise FieldMismatchError(self.field, other.field)

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field, self.field.add(self.padded(n), other.padded(n)))

    def __neg__(self) -> "Poly":
        return Poly(self.field, self.field.neg(self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        f = self.field
        if self.is_zero() or other.is_zero():
            return Poly.zero(f)
        if f.m == 1:
            return Poly(f, np.convolve(self.coeffs, other.coeffs) % f.p)
        a, b = (self.coeffs, other.coeffs) if len(self.coeffs) <= len(other.coeffs) else (other.coeffs, self.coeffs)
        acc = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
        for i, ai in enumerate(a):
            if ai:
                acc[i : i + len(b)] = f.add(acc[i : i + len(b)], f.mul(ai, b))
        return Poly(f, acc)

    def scale(self, c: int) -> "Poly":
        return Poly(self.field, self.field.mul(c, self.coeffs))

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k."""
        return Poly(self.field, np.concatenate([np.zeros(k, dtype=np.int64), self.coeffs]))

    def monic(self) -> "Poly":
        return self.scale(int(self.field.inv(self.leading)))

    def __divmod__(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        self._check(other)
        f = self.field
        if other.is_zero():
            raise FieldError("Polynomial division by zero")
        db = other.degree
        rem = self.coeffs.copy()
        if len(rem) - 1 < db:
            return Poly.zero(f), Poly(f, rem)
        quot = np.zeros(len(rem) - db, dtype=np.int64)
        inv_lead = f.inv(other.leading)
        for i in range(len(rem) - 1 - db, -1, -1):
            c = f.mul(rem[i + db], inv_lead)
            if c:
                quot[i] = c
                rem[i : i + db + 1] = f.sub(rem[i : i + db + 1], f.mul(c, other.coeffs))
        return Poly(f, quot), Poly(f, rem[:db] if db > 0 else [])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero()

    def evaluate(self, x: ArrayLike) -> np.ndarray:
        """Horner evaluation at one point or an array of points."""
        f = self.field
        x = np.asarray(x, dtype=np.int64)
        acc = np.zeros_like(x)
        for c in self.coeffs[::-1]:
            acc = f.add(f.mul(acc, x), c)
        return acc

    def __call__(self, x: FieldElement) -> FieldElement:
        if x.field != self.field:
            raise FieldMismatchError(self.field, x.field)
        return FieldElement(int(self.evaluate(x.value)), self.field)

    def reciprocal(self) -> "Poly":
        """x^deg * p(1/x)"""
        return Poly(self.field, self.coeffs[::-1])
