"""Finite fields, univariate polynomials, and embeddings between extensions.

Every field is an extension of its prime field: GF(p^k) = F_p[x]/(m) where m
is the lexicographically least monic irreducible of degree k (counter order:
the coefficient vector read as a base-p integer, constant digit least
significant).  Elements are coordinate tuples over F_p of length k; the
integer encoding of an element is that same base-p counter value, which fixes
a deterministic total order on each field.

Cross-field comparisons always go through explicit embeddings (the least root
of the source modulus in the destination), never through modulus choices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator

Element = tuple[int, ...]

DEFAULT_FIELD_SIZE_CAP = 2**20


class FieldSizeError(ValueError):
    """Requested field or enumeration exceeds the configured size cap."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# -- dense polynomial arithmetic over the prime field (int coefficient lists,
#    constant term first, no trailing zeros) --------------------------------


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, y in enumerate(m):
            a[shift + i] = (a[shift + i] - c * y) % p
        _trim(a)
    return a


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv_lead = pow(a[-1], p - 2, p)
        a = [x * inv_lead % p for x in a]
    return a


def _ppowmod(base: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def _prime_poly_irreducible(coeffs: list[int], p: int) -> bool:
    """Monic f over F_p is irreducible iff gcd(f, x^(p^i) - x) = 1 for all
    i <= deg(f)/2 (x^(p^i)-x is the product of the irreducibles of degree
    dividing i, and two cofactors of degree > deg/2 cannot coexist)."""
    k = len(coeffs) - 1
    if k == 1:
        return True
    xq = [0, 1]
    for _ in range(k // 2):
        xq = _ppowmod(xq, p, coeffs, p)
        diff = list(xq)
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(coeffs, _trim(diff), p)) != 1:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^k) with a fixed monic modulus over F_p (constant term first)."""

    p: int
    k: int
    modulus: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p**self.k

    # -- encoding ------------------------------------------------------------

    def zero(self) -> Element:
        return (0,) * self.k

    def one(self) -> Element:
        return (1,) + (0,) * (self.k - 1)

    def from_int(self, n: int) -> Element:
        """Counter decoding: base-p digits, constant digit least significant."""
        if not 0 <= n < self.order:
            raise ValueError(f"encoding {n} out of range for field of order {self.order}")
        digits = []
        for _ in range(self.k):
            n, r = divmod(n, self.p)
            digits.append(r)
        return tuple(digits)

    def to_int(self, e: Element) -> int:
        n = 0
        for d in reversed(e):
            n = n * self.p + d
        return n

    def scalar(self, c: int) -> Element:
        """The prime-field element c (mod p) inside this field."""
        return (c % self.p,) + (0,) * (self.k - 1)

    def elements(self) -> Iterator[Element]:
        for n in range(self.order):
            yield self.from_int(n)

    # -- arithmetic ----------------------------------------------------------

    def add(self, a: Element, b: Element) -> Element:
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a: Element, b: Element) -> Element:
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a: Element) -> Element:
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a: Element, b: Element) -> Element:
        prod = _pmod(_pmul(list(a), list(b), self.p), list(self.modulus), self.p)
        return tuple(prod + [0] * (self.k - len(prod)))

    def pow(self, a: Element, e: int) -> Element:
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one()
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a: Element) -> Element:
        if a == self.zero():
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.order - 2)

    def frobenius(self, a: Element) -> Element:
        return self.pow(a, self.p)

    def is_zero(self, a: Element) -> bool:
        return all(x == 0 for x in a)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"


@lru_cache(maxsize=None)
def field(p: int, k: int = 1, size_cap: int = DEFAULT_FIELD_SIZE_CAP) -> FieldSpec:
    """GF(p^k) with the deterministic least monic modulus of degree k."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime; build extensions as field(p, k)")
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    if p**k > size_cap:
        raise FieldSizeError(f"field of order {p}^{k} exceeds the cap {size_cap}")
    for counter in range(p**k):
        coeffs = []
        n = counter
        for _ in range(k):
            n, r = divmod(n, p)
            coeffs.append(r)
        coeffs.append(1)  # monic
        if _prime_poly_irreducible(coeffs, p):
            return FieldSpec(p, k, tuple(coeffs))
    raise RuntimeError("unreachable: an irreducible of every degree exists")


@dataclass(frozen=True)
class Embedding:
    """Ring embedding src -> dst determined by the least root of src.modulus."""

    src: FieldSpec
    dst: FieldSpec
    root: Element

    def __call__(self, e: Element) -> Element:
        dst = self.dst
        out = dst.zero()
        power = dst.one()
        for coord in e:
            if coord:
                out = dst.add(out, dst.mul(dst.scalar(coord), power))
            power = dst.mul(power, self.root)
        return out


@lru_cache(maxsize=None)
def embed(src: FieldSpec, dst: FieldSpec) -> Embedding:
    """The deterministic embedding GF(p^a) -> GF(p^b) for a | b."""
    if src.p != dst.p:
        raise ValueError("embeddings require equal characteristic")
    if dst.k % src.k != 0:
        raise ValueError(f"no embedding: {src.k} does not divide {dst.k}")
    if src == dst:
        # identity: the class of x is its own canonical root
        return Embedding(src, dst, _x_element(dst))
    for n in range(dst.order):
        x = dst.from_int(n)
        acc = dst.zero()
        power = dst.one()
        for c in src.modulus:
            if c:
                acc = dst.add(acc, dst.mul(dst.scalar(c), power))
            power = dst.mul(power, x)
        if dst.is_zero(acc):
            return Embedding(src, dst, x)
    raise RuntimeError("unreachable: the modulus splits in any field of divisible degree")


def _x_element(fs: FieldSpec) -> Element:
    if fs.k == 1:
        return fs.one()
    return (0, 1) + (0,) * (fs.k - 2)


# -- univariate polynomials over an arbitrary FieldSpec ----------------------


@dataclass(frozen=True)
class UniPoly:
    """Polynomial over a FieldSpec; coefficients constant-term first with no
    trailing zeros (the zero polynomial has an empty tuple)."""

    field: FieldSpec
    coeffs: tuple[Element, ...]

    @staticmethod
    def make(fs: FieldSpec, coeffs: list[Element]) -> "UniPoly":
        coeffs = list(coeffs)
        while coeffs and fs.is_zero(coeffs[-1]):
            coeffs.pop()
        return UniPoly(fs, tuple(coeffs))

    @staticmethod
    def from_ints(fs: FieldSpec, encodings: list[int]) -> "UniPoly":
        return UniPoly.make(fs, [fs.from_int(n) for n in encodings])

    @staticmethod
    def parse(fs: FieldSpec, text: str) -> "UniPoly":
        """Comma-separated coefficient encodings, constant term first."""
        parts = [t.strip() for t in text.split(",")]
        return UniPoly.from_ints(fs, [int(t) for t in parts if t])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one()

    def format(self) -> str:
        return ",".join(str(self.field.to_int(c)) for c in self.coeffs)

    def evaluate(self, x: Element, into: Embedding | None = None) -> Element:
        """Horner evaluation at x; x lives in `into.dst` when a coefficient
        embedding is supplied."""
        fs = self.field if into is None else into.dst
        lift: Callable[[Element], Element] = (lambda c: c) if into is None else into
        acc = fs.zero()
        for c in reversed(self.coeffs):
            acc = fs.mul(acc, x)
            acc = fs.add(acc, lift(c))
        return acc

    def mul(self, other: "UniPoly") -> "UniPoly":
        fs = self.field
        if self.is_zero() or other.is_zero():
            return UniPoly(fs, ())
        out = [fs.zero()] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if fs.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = fs.add(out[i + j], fs.mul(a, b))
        return UniPoly.make(fs, out)

    def mod(self, m: "UniPoly") -> "UniPoly":
        fs = self.field
        a = list(self.coeffs)
        dm = m.degree
        inv_lead = fs.inv(m.coeffs[-1])
        while len(a) - 1 >= dm and a:
            c = fs.mul(a[-1], inv_lead)
            shift = len(a) - 1 - dm
            for i, y in enumerate(m.coeffs):
                a[shift + i] = fs.sub(a[shift + i], fs.mul(c, y))
            while a and fs.is_zero(a[-1]):
                a.pop()
        return UniPoly(fs, tuple(a))

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        fs = self.field
        inv_lead = fs.inv(self.coeffs[-1])
        return UniPoly(fs, tuple(fs.mul(c, inv_lead) for c in self.coeffs))

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.mod(b)
        return a.monic()

    def powmod(self, e: int, m: "UniPoly") -> "UniPoly":
        fs = self.field
        result = UniPoly.make(fs, [fs.one()])
        base = self.mod(m)
        while e:
            if e & 1:
                result = result.mul(base).mod(m)
            base = base.mul(base).mod(m)
            e >>= 1
        return result

    def is_irreducible(self) -> bool:
        """gcd test against u^(q^i) - u for i <= degree/2."""
        fs = self.field
        s = self.degree
        if s <= 0:
            return False
        if s == 1:
            return True
        u = UniPoly.make(fs, [fs.zero(), fs.one()])
        xq = u
        for _ in range(s // 2):
            xq = xq.powmod(fs.order, self)
            diff = xq_minus_u(xq, fs)
            if self.gcd(diff).degree != 0:
                return False
        return True


def xq_minus_u(xq: UniPoly, fs: FieldSpec) -> UniPoly:
    coeffs = list(xq.coeffs) + [fs.zero()] * max(0, 2 - len(xq.coeffs))
    coeffs[1] = fs.sub(coeffs[1], fs.one())
    return UniPoly.make(fs, coeffs)


def monic_irreducibles(fs: FieldSpec, degree: int, cap: int = DEFAULT_FIELD_SIZE_CAP) -> list[UniPoly]:
    """All monic irreducibles of the given degree over fs, in counter order
    (the finite places of that degree of the rational function field)."""
    q = fs.order
    if q**degree > cap:
        raise FieldSizeError(f"enumerating q^{degree} = {q**degree} polynomials exceeds cap")
    out = []
    for counter in range(q**degree):
        encodings = []
        n = counter
        for _ in range(degree):
            n, r = divmod(n, q)
            encodings.append(r)
        encodings.append(1)
        f = UniPoly.from_ints(fs, encodings)
        if f.is_irreducible():
            out.append(f)
    return out
