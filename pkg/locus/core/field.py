"""
Finite fields GF(p^m) backed by exponent/logarithm tables.

Elements are encoded as integers in [0, q): for prime fields the residue itself,
for extension fields the polynomial-basis coordinates read as base-p digits
(constant term least significant). All arithmetic kernels are vectorized over
numpy integer arrays; :class:`FieldElement` is a thin scalar wrapper on top.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from locus.errors import FieldError, FieldMismatchError, ParameterError

log = logging.getLogger(__name__)

MAX_ORDER = 1 << 16

ArrayLike = Union[int, Sequence[int], np.ndarray]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> List[int]:
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return factors


def _trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_rem(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    # b is monic, coefficients low to high
    r = _trim(list(a))
    db = len(b) - 1
    while len(r) - 1 >= db:
        c = r[-1]
        shift = len(r) - 1 - db
        for i, bi in enumerate(b):
            r[shift + i] = (r[shift + i] - c * bi) % p
        _trim(r)
    return r


def _poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> List[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_rem(prod, f, p)


def _x_pow_mod(e: int, f: Sequence[int], p: int) -> List[int]:
    result: List[int] = [1]
    base = _poly_rem([0, 1], f, p)
    while e > 0:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _monic_polys(p: int, degree: int) -> Iterator[List[int]]:
    for v in range(p**degree):
        yield [(v // p**i) % p for i in range(degree)] + [1]


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(f)/2."""
    m = len(f) - 1
    for d in range(1, m // 2 + 1):
        for g in _monic_polys(p, d):
            if not _poly_rem(f, g, p):
                return False
    return True


def _x_is_primitive(f: Sequence[int], p: int) -> bool:
    order = p ** (len(f) - 1) - 1
    if _x_pow_mod(order, f, p) != [1]:
        return False
    return all(_x_pow_mod(order // ell, f, p) != [1] for ell in prime_factors(order))


def least_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // ell, p) != 1 for ell in factors):
            return g
    raise FieldError(f"No primitive root modulo {p}")


def least_primitive_polynomial(p: int, m: int) -> Tuple[int, ...]:
    """
    Least monic primitive polynomial of degree m over GF(p), coefficients low to high.
    Candidates are ordered by the base-p value of their lower coefficients with the
    constant term least significant.
    """
    for v in range(1, p**m):
        lower = [(v // p**i) % p for i in range(m)]
        if lower[0] == 0:
            continue
        f = lower + [1]
        if _x_is_primitive(f, p) and is_irreducible(f, p):
            return tuple(f)
    raise FieldError(f"No primitive polynomial of degree {m} over GF({p})")


class FieldSpec:
    """
    GF(p^m) with a fixed modulus and generator.

    ``modulus`` lists the defining polynomial's coefficients from x^0 up to x^m;
    ``generator`` is the integer encoding of the primitive element the tables are
    built from (the least primitive root for prime fields, x otherwise).
    """

    def __init__(self, p: int, m: int, modulus: Tuple[int, ...], generator: int, exp: np.ndarray) -> None:
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = modulus
        self.generator = generator
        order = self.q - 1
        self._exp = np.concatenate([exp, exp]).astype(np.int64)
        self._log = np.zeros(self.q, dtype=np.int64)
        self._log[exp] = np.arange(order, dtype=np.int64)
        self._place = np.array([p**i for i in range(m)], dtype=np.int64)
        self._digits: Optional[np.ndarray] = None
        if m > 1 and p != 2:
            self._digits = (np.arange(self.q, dtype=np.int64)[:, None] // self._place[None, :]) % p

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    @property
    def order(self) -> int:
        return self.q

    def add(self, a: ArrayLike, b: ArrayLike) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        assert self._digits is not None
        return ((self._digits[a] + self._digits[b]) % self.p) @ self._place

    def neg(self, a: ArrayLike) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.m == 1:
            return (-a) % self.p
        if self.p == 2:
            return a.copy()
        assert self._digits is not None
        return ((-self._digits[a]) % self.p) @ self._place

    def sub(self, a: ArrayLike, b: ArrayLike) -> np.ndarray:
        return self.add(a, self.neg(b))

    def mul(self, a: ArrayLike, b: ArrayLike) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a * b) % self.p
        r = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def inv(self, a: ArrayLike) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise FieldError(f"Zero has no inverse in {self}")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: ArrayLike, b: ArrayLike) -> np.ndarray:
        return self.mul(a, self.inv(b))

    def pow(self, a: ArrayLike, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        if e < 0 and np.any(a == 0):
            raise FieldError(f"Zero raised to the negative power {e} in {self}")
        idx = (self._log[a] * (e % (self.q - 1))) % (self.q - 1)
        return np.where(a == 0, 0, self._exp[idx])

    def power_of_generator(self, e: ArrayLike) -> np.ndarray:
        """generator ** e for an integer (array) e, negative exponents allowed."""
        return self._exp[np.asarray(e, dtype=np.int64) % (self.q - 1)]

    def log_of(self, a: ArrayLike) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise FieldError(f"Logarithm of zero in {self}")
        return self._log[a]

    def sum(self, a: np.ndarray, axis: int = 0) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.m == 1:
            return a.sum(axis=axis) % self.p
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        assert self._digits is not None
        return (self._digits[a].sum(axis=axis) % self.p) @ self._place

    def element_order(self, a: ArrayLike) -> int:
        la = int(self.log_of(a))
        return (self.q - 1) // int(np.gcd(la, self.q - 1))

    def in_subfield(self, a: ArrayLike, q_sub: int) -> np.ndarray:
        """Membership in the subfield of order q_sub: a ** q_sub == a."""
        d = next((d for d in range(1, self.m + 1) if self.p**d == q_sub), None)
        if d is None or self.m % d != 0:
            raise ParameterError(f"GF({q_sub}) is not a subfield of {self}", "q_sub")
        a = np.asarray(a, dtype=np.int64)
        return self.pow(a, q_sub) == a

    def random(self, rng: np.random.Generator, size: Any = None) -> np.ndarray:
        return rng.integers(0, self.q, size=size, dtype=np.int64)

    def element(self, value: int) -> "FieldElement":
        if not 0 <= int(value) < self.q:
            raise FieldError(f"{value} is not an element encoding of {self}")
        return FieldElement(int(value), self)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def digits(self, a: int) -> Tuple[int, ...]:
        return tuple((int(a) // self.p**i) % self.p for i in range(self.m))


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: FieldSpec

    def __repr__(self) -> str:
        return f"{self.value}@{self.field}"

    def __int__(self) -> int:
        return self.value

    def _same_field(self, other: Any) -> "FieldElement":
        if other.field != self.field:
            raise FieldMismatchError(self.field, other.field)
        return other

    def _wrap(self, v: np.ndarray) -> "FieldElement":
        return FieldElement(int(v), self.field)

    def __add__(self, other: Any) -> "FieldElement":
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self._wrap(self.field.add(self.value, self._same_field(other).value))

    def __sub__(self, other: Any) -> "FieldElement":
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self._wrap(self.field.sub(self.value, self._same_field(other).value))

    def __mul__(self, other: Any) -> "FieldElement":
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self._wrap(self.field.mul(self.value, self._same_field(other).value))

    def __truediv__(self, other: Any) -> "FieldElement":
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self._wrap(self.field.div(self.value, self._same_field(other).value))

    def __neg__(self) -> "FieldElement":
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, e: int) -> "FieldElement":
        return self._wrap(self.field.pow(self.value, int(e)))

    def inverse(self) -> "FieldElement":
        return self._wrap(self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def order(self) -> int:
        return self.field.element_order(self.value)


def _build_tables(p: int, m: int, modulus: Tuple[int, ...], generator: int) -> np.ndarray:
    q = p**m
    exp = np.zeros(q - 1, dtype=np.int64)
    if m == 1:
        cur = 1
        for i in range(q - 1):
            exp[i] = cur
            cur = (cur * generator) % p
        return exp
    if p == 2:
        mod_int = sum(c << i for i, c in enumerate(modulus))
        cur = 1
        for i in range(q - 1):
            exp[i] = cur
            cur <<= 1
            if cur & q:
                cur ^= mod_int
        return exp
    digits = [1] + [0] * (m - 1)
    place = [p**i for i in range(m)]
    for i in range(q - 1):
        exp[i] = sum(d * w for d, w in zip(digits, place))
        top = digits[-1]
        digits = [0] + digits[:-1]
        if top:
            digits = [(d - top * c) % p for d, c in zip(digits, modulus)]
    return exp


@lru_cache(maxsize=None)
def field_create(p: int, m: int = 1) -> FieldSpec:
    """
    Build (or reuse) GF(p^m). Raises FieldError if p is not prime or p^m exceeds MAX_ORDER.
    """
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    if m < 1:
        raise FieldError(f"Extension degree must be positive, got m={m}")
    q = p**m
    if q > MAX_ORDER:
        raise FieldError(f"q={q} exceeds the supported maximum {MAX_ORDER}")
    if m == 1:
        generator = least_primitive_root(p)
        modulus: Tuple[int, ...] = ((-generator) % p, 1)
    else:
        modulus = least_primitive_polynomial(p, m)
        generator = p
    exp = _build_tables(p, m, modulus, generator)
    if len(set(exp.tolist())) != q - 1:
        raise FieldError(f"Generator {generator} is not primitive for modulus {modulus}")
    fld = FieldSpec(p, m, modulus, generator, exp)
    log.debug(f"Created {fld} with modulus {modulus} and generator {generator}")
    return fld


def root_of_unity(f: FieldSpec, n: int) -> FieldElement:
    """The element generator ** ((q-1)/n), of multiplicative order exactly n."""
    if n < 1 or (f.q - 1) % n != 0:
        raise ParameterError(f"n={n} does not divide q-1={f.q - 1}", "n")
    return FieldElement(int(f.power_of_generator((f.q - 1) // n)), f)
