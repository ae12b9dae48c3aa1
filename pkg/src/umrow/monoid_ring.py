"""Arithmetic in monoid rings R[M]: finite formal sums coeff * monomial.

Exponents are lattice vectors that must be members of the monoid;
coefficients are ring elements.  Zero coefficients are never stored, so
equality of term maps is equality of elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .errors import CarrierMismatchError, UmrowError, UnsupportedMonoidError
from .lattice import vec_dot, Vec
from .monoids import AffineMonoid, free_monoid
from .rings import Ring, RingElement


@dataclass(frozen=True)
class MonoidRing:
    """Carrier object for R[M]; elements keep a reference to it."""

    ring: Ring
    monoid: AffineMonoid

    def tag(self) -> str:
        return f"{self.ring.tag()}[M(rank {self.monoid.rank})]"

    def _make(self, terms: dict) -> "MonoidRingElement":
        clean = {e: c for e, c in terms.items() if c != self.ring.zero}
        return MonoidRingElement(self, tuple(sorted(clean.items(), key=lambda t: t[0])))

    def element(self, terms) -> "MonoidRingElement":
        """Build an element from {exponent: coefficient}; exponents are validated."""
        out = {}
        for e, c in dict(terms).items():
            e = tuple(int(v) for v in e)
            if not self.monoid.contains(e):
                raise UmrowError(f"exponent {e} is not a member of the monoid")
            if not isinstance(c, RingElement):
                c = self.ring.from_int(c)
            if c.ring != self.ring:
                raise CarrierMismatchError("coefficient from a different ring")
            if e in out:
                c = out[e] + c
            out[e] = c
        return self._make(out)

    def monomial(self, exponent, coefficient=1) -> "MonoidRingElement":
        return self.element({tuple(exponent): coefficient})

    def from_int(self, k: int) -> "MonoidRingElement":
        zero_exp = tuple([0] * self.monoid.ambient_rank)
        return self._make({zero_exp: self.ring.from_int(k)})

    @property
    def zero(self) -> "MonoidRingElement":
        return self._make({})

    @property
    def one(self) -> "MonoidRingElement":
        return self.from_int(1)

    def add(self, f, g):
        self._check(f, g)
        terms = dict(f.terms)
        for e, c in g.terms:
            acc = terms.get(e)
            terms[e] = c if acc is None else acc + c
        return self._make(terms)

    def mul(self, f, g):
        self._check(f, g)
        terms: dict = {}
        for e1, c1 in f.terms:
            for e2, c2 in g.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                acc = terms.get(e)
                terms[e] = c if acc is None else acc + c
        return self._make(terms)

    def neg(self, f):
        self._check(f)
        return self._make({e: -c for e, c in f.terms})

    def inverse(self, f):
        """Inverse of f, or None.

        A unit has a unit constant term and nilpotent higher coefficients;
        the inverse is then the terminating geometric series.
        """
        self._check(f)
        zero_exp = tuple([0] * self.monoid.ambient_rank)
        const = dict(f.terms).get(zero_exp)
        if const is None:
            return None
        c_inv = self.ring.inverse(const)
        if c_inv is None:
            return None
        higher = self._make({e: c for e, c in f.terms if e != zero_exp})
        if higher.is_zero():
            return self._make({zero_exp: c_inv})
        for _, c in higher.terms:
            if not self.ring.is_nilpotent(c):
                return None
        # f = const (1 + h), h nilpotent-coefficiented
        h = self._make({e: -(c_inv * c) for e, c in higher.terms})  # note: -c_inv*higher
        h = self.neg(h)
        # inverse of (1 + h) = 1 - h + h^2 - ...
        acc = self.one
        power = self.one
        sign = -1
        for _ in range(64):
            power = self.mul(power, h)
            if power.is_zero():
                break
            acc = self.add(acc, power if sign > 0 else self.neg(power))
            sign = -sign
        else:
            return None
        result = self.mul(self._make({zero_exp: c_inv}), acc)
        if self.mul(f, result) != self.one:
            return None
        return result

    def is_unit(self, f) -> bool:
        return self.inverse(f) is not None

    def is_nilpotent(self, f) -> bool:
        self._check(f)
        return all(self.ring.is_nilpotent(c) for _, c in f.terms)

    def _check(self, *fs):
        for f in fs:
            if not isinstance(f, MonoidRingElement) or f.carrier != self:
                raise CarrierMismatchError("element from a different monoid ring")


@dataclass(frozen=True)
class MonoidRingElement:
    carrier: MonoidRing
    terms: tuple  # sorted ((exponent, coefficient), ...)

    @property
    def ring(self) -> Ring:
        return self.carrier.ring

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exponent) -> RingElement:
        exponent = tuple(exponent)
        for e, c in self.terms:
            if e == exponent:
                return c
        return self.carrier.ring.zero

    def support(self):
        return [e for e, _ in self.terms]

    def __add__(self, other):
        return self.carrier.add(self, other)

    def __sub__(self, other):
        return self.carrier.add(self, self.carrier.neg(other))

    def __mul__(self, other):
        return self.carrier.mul(self, other)

    def __neg__(self):
        return self.carrier.neg(self)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = [f"{c.payload}*x^{list(e)}" for e, c in self.terms]
        return " + ".join(bits)


@dataclass(frozen=True)
class DegreeAssignment:
    """Integer degree on monomials induced by a linear functional."""

    functional: Vec

    def of(self, exponent) -> int:
        return vec_dot(self.functional, exponent)


def t1_weight(rank: int) -> DegreeAssignment:
    return DegreeAssignment(tuple(1 if i == 0 else 0 for i in range(rank)))


MULTI_TERM = object()  # marker: leading part has several monomials, no single coefficient


@dataclass(frozen=True)
class LeadingTerm:
    head: MonoidRingElement
    degree: int
    coefficient: object  # RingElement, or MULTI_TERM when the head is not a monomial

    @property
    def is_single(self) -> bool:
        return self.coefficient is not MULTI_TERM


def degree_of(f: MonoidRingElement, d: DegreeAssignment) -> int:
    if f.is_zero():
        raise UmrowError("the zero element has no degree")
    return max(d.of(e) for e, _ in f.terms)


def leading_term(f: MonoidRingElement, d: DegreeAssignment) -> LeadingTerm:
    """Top-degree part of f under d, with its coefficient when it is a monomial."""
    if f.is_zero():
        raise UmrowError("the zero element has no leading term")
    top = degree_of(f, d)
    head_terms = {e: c for e, c in f.terms if d.of(e) == top}
    head = f.carrier._make(head_terms)
    if len(head_terms) == 1:
        (coef,) = head_terms.values()
    else:
        coef = MULTI_TERM
    return LeadingTerm(head=head, degree=top, coefficient=coef)


def is_monic_in(f: MonoidRingElement, m, d: DegreeAssignment) -> bool:
    """Is the leading term a unit multiple of a power of the monomial m?"""
    if f.is_zero():
        return False
    m = tuple(int(v) for v in m)
    lt = leading_term(f, d)
    if not lt.is_single:
        return False
    (exp, coef), = lt.head.terms
    if not f.carrier.ring.is_unit(coef):
        return False
    if not any(exp):
        return True  # m^0
    # exp must be a nonnegative integer multiple of m
    ratio = None
    for a, b in zip(exp, m):
        if b == 0:
            if a != 0:
                return False
            continue
        if a % b != 0:
            return False
        r = a // b
        if ratio is None:
            ratio = r
        elif r != ratio:
            return False
    return ratio is not None and ratio >= 0


def _require_free(f: MonoidRingElement):
    r = f.carrier.monoid.ambient_rank
    if f.carrier.monoid != free_monoid(r):
        raise UnsupportedMonoidError("operation is defined over the free monoid Z_+^r")
    return r


def nagata_twist(f: MonoidRingElement, c: int) -> MonoidRingElement:
    """Substitution endomorphism t_j -> t_j + t_1^c (j >= 2), t_1 fixed."""
    r = _require_free(f)
    if c < 1:
        raise UmrowError("twist exponent must be a positive integer")
    ring = f.carrier.ring
    out: dict = {}
    for e, coef in f.terms:
        # expand prod_j (t_j + t_1^c)^{e_j} * t_1^{e_1}
        partial = {(e[0],) + (0,) * (r - 1): coef}
        for j in range(1, r):
            nxt: dict = {}
            ej = e[j]
            for k in range(ej + 1):
                binom = ring.from_int(comb(ej, k))
                if binom == ring.zero:
                    continue
                for exp0, c0 in partial.items():
                    new = list(exp0)
                    new[0] += c * k
                    new[j] += ej - k
                    new = tuple(new)
                    add = c0 * binom
                    acc = nxt.get(new)
                    nxt[new] = add if acc is None else acc + add
            partial = nxt
        for exp0, c0 in partial.items():
            acc = out.get(exp0)
            out[exp0] = c0 if acc is None else acc + c0
    return f.carrier._make(out)


def evaluate_at_t1_zero(f: MonoidRingElement) -> MonoidRingElement:
    """Drop every term with a positive t_1 exponent."""
    _require_free(f)
    return f.carrier._make({e: c for e, c in f.terms if e[0] == 0})


@dataclass(frozen=True)
class TiltedAlgebraDescriptor:
    """Subalgebra of R[t_1..t_r] absorbing monomials under high t_1 powers.

    `membership` decides monomials (exponent tuples); `tilt_exponent` maps a
    monomial to some p with t_1^p * m inside for all larger powers.
    """

    ambient_rank: int
    membership: object
    tilt_exponent: object

    @classmethod
    def full(cls, rank: int) -> "TiltedAlgebraDescriptor":
        return cls(rank, lambda e: True, lambda e: 0)


def tilted_membership(t: TiltedAlgebraDescriptor, f: MonoidRingElement) -> bool:
    _require_free(f)
    return all(t.membership(e) for e, _ in f.terms)
