"""Exact coefficient rings: Z, Q, Z/n, and the excision ring R (+) I.

Every element stores a canonical payload, so equality is structural and
hashable.  Inverses are computed exactly; "not a unit" is reported as the
value None rather than an exception.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import CarrierMismatchError, UnsupportedRingError

_FACTOR_LIMIT = 10**9


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (desk-scale moduli)."""
    if n <= 1 or n > _FACTOR_LIMIT:
        raise UnsupportedRingError(f"modulus {n} outside the supported factoring range")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def squarefree_radical(n: int) -> int:
    r = 1
    for p in factorize(n):
        r *= p
    return r


@dataclass(frozen=True)
class RingElement:
    """A value tagged with its ring; payload is always canonical."""

    ring: "Ring"
    payload: object

    @property
    def carrier(self):
        return self.ring

    def __add__(self, other):
        return self.ring.add(self, other)

    def __sub__(self, other):
        return self.ring.add(self, self.ring.neg(other))

    def __mul__(self, other):
        return self.ring.mul(self, other)

    def __neg__(self):
        return self.ring.neg(self)

    def is_zero(self) -> bool:
        return self == self.ring.zero

    def __repr__(self):
        return f"{self.payload!r}@{self.ring.tag()}"


class Ring:
    """Abstract exact ring.  Subclasses define payload canonicalization."""

    def element(self, payload) -> RingElement:
        return RingElement(self, self.canon(payload))

    def canon(self, payload):
        raise NotImplementedError

    def tag(self) -> str:
        raise NotImplementedError

    def _check(self, *xs):
        for x in xs:
            if not isinstance(x, RingElement) or x.ring != self:
                raise CarrierMismatchError(
                    f"element of {getattr(getattr(x, 'ring', None), 'tag', lambda: '?')()} "
                    f"used in {self.tag()}"
                )

    # -- arithmetic -----------------------------------------------------
    def add(self, a: RingElement, b: RingElement) -> RingElement:
        self._check(a, b)
        return self.element(self._add(a.payload, b.payload))

    def mul(self, a: RingElement, b: RingElement) -> RingElement:
        self._check(a, b)
        return self.element(self._mul(a.payload, b.payload))

    def neg(self, a: RingElement) -> RingElement:
        self._check(a)
        return self.element(self._neg(a.payload))

    def inverse(self, a: RingElement):
        """Multiplicative inverse, or None when a is not a unit."""
        self._check(a)
        p = self._inverse(a.payload)
        return None if p is None else self.element(p)

    def is_unit(self, a: RingElement) -> bool:
        return self.inverse(a) is not None

    def is_nilpotent(self, a: RingElement) -> bool:
        self._check(a)
        return self._is_nilpotent(a.payload)

    def from_int(self, k: int) -> RingElement:
        return self.element(self._from_int(k))

    @property
    def zero(self) -> RingElement:
        return self.from_int(0)

    @property
    def one(self) -> RingElement:
        return self.from_int(1)

    def characteristic(self) -> int:
        raise NotImplementedError

    def is_field(self) -> bool:
        return False

    # subclass hooks
    def _add(self, p, q):
        raise NotImplementedError

    def _mul(self, p, q):
        raise NotImplementedError

    def _neg(self, p):
        raise NotImplementedError

    def _inverse(self, p):
        raise NotImplementedError

    def _is_nilpotent(self, p):
        raise NotImplementedError

    def _from_int(self, k):
        raise NotImplementedError


@dataclass(frozen=True)
class IntegerRing(Ring):
    def canon(self, payload):
        return int(payload)

    def tag(self):
        return "Z"

    def _add(self, p, q):
        return p + q

    def _mul(self, p, q):
        return p * q

    def _neg(self, p):
        return -p

    def _inverse(self, p):
        return p if p in (1, -1) else None

    def _is_nilpotent(self, p):
        return p == 0

    def _from_int(self, k):
        return int(k)

    def characteristic(self):
        return 0


@dataclass(frozen=True)
class RationalRing(Ring):
    def canon(self, payload):
        return Fraction(payload)

    def tag(self):
        return "Q"

    def _add(self, p, q):
        return p + q

    def _mul(self, p, q):
        return p * q

    def _neg(self, p):
        return -p

    def _inverse(self, p):
        return None if p == 0 else 1 / Fraction(p)

    def _is_nilpotent(self, p):
        return p == 0

    def _from_int(self, k):
        return Fraction(k)

    def characteristic(self):
        return 0

    def is_field(self):
        return True


@dataclass(frozen=True)
class ModRing(Ring):
    """Z/n with residues stored in [0, n)."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise UnsupportedRingError("modulus must be at least 2")

    def canon(self, payload):
        return int(payload) % self.n

    def tag(self):
        return f"Z/{self.n}"

    def _add(self, p, q):
        return (p + q) % self.n

    def _mul(self, p, q):
        return (p * q) % self.n

    def _neg(self, p):
        return (-p) % self.n

    def _inverse(self, p):
        g = gcd(p, self.n)
        if g != 1:
            return None
        return pow(p, -1, self.n)

    def _is_nilpotent(self, p):
        return p % squarefree_radical(self.n) == 0

    def _from_int(self, k):
        return k % self.n

    def characteristic(self):
        return self.n

    def is_field(self):
        return len(factorize(self.n)) == 1 and squarefree_radical(self.n) == self.n

    def nilpotency_exponent(self) -> int:
        """Smallest e with nil(Z/n)^e = 0."""
        return max(factorize(self.n).values())


@dataclass(frozen=True)
class Ideal:
    """Finitely generated ideal of Z, Q or Z/n with a decidable membership test."""

    ring: Ring
    gens: tuple

    @classmethod
    def from_ints(cls, ring: Ring, gens) -> "Ideal":
        return cls(ring, tuple(ring.from_int(g) for g in gens))

    def __post_init__(self):
        for g in self.gens:
            if g.ring != self.ring:
                raise CarrierMismatchError("ideal generator outside its base ring")

    def _gcd_modulus(self):
        g = 0
        for x in self.gens:
            g = gcd(g, int(x.payload))
        if isinstance(self.ring, ModRing):
            g = gcd(g, self.ring.n)
        return g

    def contains(self, x: RingElement) -> bool:
        if x.ring != self.ring:
            raise CarrierMismatchError("membership test against the wrong ring")
        if isinstance(self.ring, (IntegerRing, ModRing)):
            g = self._gcd_modulus()
            if g == 0:
                return int(x.payload) == 0 or (
                    isinstance(self.ring, ModRing) and x.payload % self.ring.n == 0
                )
            return int(x.payload) % g == 0
        if isinstance(self.ring, RationalRing):
            if any(g.payload != 0 for g in self.gens):
                return True
            return x.payload == 0
        if isinstance(self.ring, ExcisionRing):
            # kernel-style ideals only: every generator of shape (0, g)
            if any(g.payload[0] != self.ring.base.zero for g in self.gens):
                raise UnsupportedRingError(
                    "only kernel ideals (0, g) are decided over excision rings"
                )
            base_ideal = Ideal(self.ring.base, tuple(g.payload[1] for g in self.gens))
            r, i = x.payload
            return r == self.ring.base.zero and base_ideal.contains(i)
        raise UnsupportedRingError("ideal membership only decided over Z, Q and Z/n")

    def is_unit_ideal(self) -> bool:
        return self.contains(self.ring.one)


@dataclass(frozen=True)
class ExcisionRing(Ring):
    """Pairs (r, i) with i constrained to an ideal of the base ring.

    Addition is componentwise; the product of (r1, i1) and (r2, i2) is
    (r1 r2, r1 i2 + r2 i1 + i1 i2).  The base may not itself be an
    excision ring.
    """

    base: Ring
    ideal: Ideal

    def __post_init__(self):
        if isinstance(self.base, ExcisionRing):
            raise UnsupportedRingError("excision rings do not nest")
        if self.ideal.ring != self.base:
            raise CarrierMismatchError("ideal lives over a different base ring")

    def canon(self, payload):
        r, i = payload
        if not isinstance(r, RingElement):
            r = self.base.from_int(r)
        if not isinstance(i, RingElement):
            i = self.base.from_int(i)
        if r.ring != self.base or i.ring != self.base:
            raise CarrierMismatchError("excision components must live in the base ring")
        if not self.ideal.contains(i):
            raise CarrierMismatchError("second excision component outside the ideal")
        return (r, i)

    def tag(self):
        return f"{self.base.tag()}(+)I"

    def pair(self, r, i) -> RingElement:
        return self.element((r, i))

    def _add(self, p, q):
        return (p[0] + q[0], p[1] + q[1])

    def _mul(self, p, q):
        (r1, i1), (r2, i2) = p, q
        return (r1 * r2, r1 * i2 + r2 * i1 + i1 * i2)

    def _neg(self, p):
        return (-p[0], -p[1])

    def _inverse(self, p):
        # (r, i)(x, y) = (1, 0) needs x = r^-1 and (r + i) y = -x i.
        r, i = p
        x = self.base.inverse(r)
        s = self.base.inverse(r + i)
        if x is None or s is None:
            return None
        y = self.base.neg(x * i * s)
        return (x, y)

    def _is_nilpotent(self, p):
        r, i = p
        return self.base.is_nilpotent(r) and self.base.is_nilpotent(r + i)

    def _from_int(self, k):
        return (self.base.from_int(k), self.base.zero)

    def characteristic(self):
        return self.base.characteristic()

    def nilpotency_exponent(self) -> int:
        if isinstance(self.base, ModRing):
            return self.base.nilpotency_exponent()
        return 1


ZZ = IntegerRing()
QQ = RationalRing()


def ring_add(a: RingElement, b: RingElement) -> RingElement:
    return a.ring.add(a, b)


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    return a.ring.mul(a, b)


def ring_neg(a: RingElement) -> RingElement:
    return a.ring.neg(a)


def ring_inverse(a: RingElement):
    """Inverse element or None (None means: not a unit)."""
    return a.ring.inverse(a)


def excision_project(x: RingElement) -> RingElement:
    """The collapse (r, i) -> r + i from an excision ring onto its base."""
    ring = x.ring
    if not isinstance(ring, ExcisionRing):
        raise CarrierMismatchError("excision_project needs an excision-ring element")
    r, i = x.payload
    return r + i


def excision_base_part(x: RingElement) -> RingElement:
    ring = x.ring
    if not isinstance(ring, ExcisionRing):
        raise CarrierMismatchError("excision component of a non-excision element")
    return x.payload[0]


def is_in_jacobson_radical(a: RingElement) -> bool:
    """Exact Jacobson-radical membership for Z/n and excision rings over Z/n.

    For Z/n the radical is generated by the squarefree part of n.  For an
    excision ring both images of the element, under (r, i) -> r and
    (r, i) -> r + i, must land in the radical of the base; either one
    alone is not sufficient.
    """
    ring = a.ring
    if isinstance(ring, ModRing):
        return a.payload % squarefree_radical(ring.n) == 0
    if isinstance(ring, ExcisionRing) and isinstance(ring.base, ModRing):
        r, i = a.payload
        return is_in_jacobson_radical(r) and is_in_jacobson_radical(r + i)
    raise UnsupportedRingError(
        "Jacobson-radical membership is only decided over Z/n and finite excisions"
    )
