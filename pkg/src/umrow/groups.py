"""Symplectic/orthogonal forms, elementary generator words and exact matrices.

Words, not matrices, are the primary representation of elementary-subgroup
elements: membership is certified by construction and every word can be
replayed as an exact matrix product.  Indices are 1-based throughout the
public interface.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CarrierMismatchError, InvalidTokenError, PreconditionError
from .monoid_ring import MonoidRing, MonoidRingElement
from .rings import Ideal, Ring, RingElement

SYMPLECTIC = "sp"
ORTHOGONAL = "o"


@dataclass(frozen=True)
class FormKind:
    family: str  # "sp" | "o"
    n: int  # matrices have size 2n

    def __post_init__(self):
        if self.family not in (SYMPLECTIC, ORTHOGONAL):
            raise InvalidTokenError(f"unknown form family {self.family!r}")
        if self.n < 1:
            raise InvalidTokenError("form needs n >= 1")

    @property
    def size(self) -> int:
        return 2 * self.n

    @property
    def is_symplectic(self) -> bool:
        return self.family == SYMPLECTIC


def sigma(i: int) -> int:
    """The pairing involution (1 2)(3 4)...(2n-1 2n) on 1-based indices."""
    return i + 1 if i % 2 == 1 else i - 1


def carrier_of(x):
    if isinstance(x, RingElement):
        return x.ring
    if isinstance(x, MonoidRingElement):
        return x.carrier
    raise CarrierMismatchError(f"not a ring or monoid-ring element: {x!r}")


def carrier_characteristic(carrier) -> int:
    if isinstance(carrier, MonoidRing):
        return carrier.ring.characteristic()
    return carrier.characteristic()


def ensure_form_carrier(form: FormKind, carrier):
    if form.family == ORTHOGONAL and carrier_characteristic(carrier) == 2:
        raise PreconditionError(
            "char-2-orthogonal", "orthogonal forms need characteristic != 2"
        )


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SquareMatrix:
    carrier: object
    rows: tuple  # tuple of tuples of elements

    @property
    def size(self) -> int:
        return len(self.rows)

    @classmethod
    def from_rows(cls, carrier, rows):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        for r in rows:
            if len(r) != n:
                raise CarrierMismatchError("matrix is not square")
            for x in r:
                if carrier_of(x) != carrier:
                    raise CarrierMismatchError("matrix entry from a different carrier")
        return cls(carrier, rows)

    @classmethod
    def identity(cls, carrier, size: int):
        one, zero = carrier.one, carrier.zero
        return cls(carrier, tuple(
            tuple(one if i == j else zero for j in range(size)) for i in range(size)
        ))

    def entry(self, i: int, j: int):
        """1-based entry access."""
        return self.rows[i - 1][j - 1]

    def mul(self, other: "SquareMatrix") -> "SquareMatrix":
        if self.carrier != other.carrier or self.size != other.size:
            raise CarrierMismatchError("matrix product carrier/size mismatch")
        n = self.size
        cols = list(zip(*other.rows))
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = None
                for a, b in zip(self.rows[i], cols[j]):
                    term = a * b
                    acc = term if acc is None else acc + term
                row.append(acc)
            out.append(tuple(row))
        return SquareMatrix(self.carrier, tuple(out))

    def transpose(self) -> "SquareMatrix":
        return SquareMatrix(self.carrier, tuple(zip(*self.rows)))

    def act_on_row(self, u):
        """u . M for a length-matching row of elements."""
        if len(u) != self.size:
            raise CarrierMismatchError("row length does not match the matrix size")
        cols = list(zip(*self.rows))
        out = []
        for j in range(self.size):
            acc = None
            for a, b in zip(u, cols[j]):
                term = a * b
                acc = term if acc is None else acc + term
            out.append(acc)
        return tuple(out)

    def block_diag(self, other: "SquareMatrix") -> "SquareMatrix":
        if self.carrier != other.carrier:
            raise CarrierMismatchError("block carriers differ")
        z = self.carrier.zero
        n, m = self.size, other.size
        rows = []
        for i in range(n):
            rows.append(tuple(self.rows[i]) + tuple(z for _ in range(m)))
        for i in range(m):
            rows.append(tuple(z for _ in range(n)) + tuple(other.rows[i]))
        return SquareMatrix(self.carrier, tuple(rows))


def standard_form(kind: FormKind, carrier) -> SquareMatrix:
    """Block-diagonal iteration of the 2x2 symplectic/orthogonal form."""
    one, zero = carrier.one, carrier.zero
    low = -one if kind.is_symplectic else one
    rows = []
    for i in range(kind.size):
        row = [zero] * kind.size
        if i % 2 == 0:
            row[i + 1] = one
        else:
            row[i - 1] = low
        rows.append(tuple(row))
    return SquareMatrix(carrier, tuple(rows))


def inner_product(u, v, kind: FormKind):
    """Exact bilinear form value u^T F v."""
    if len(u) != kind.size or len(v) != kind.size:
        raise CarrierMismatchError("rows do not match the form size")
    acc = None
    for k in range(kind.n):
        a = u[2 * k] * v[2 * k + 1]
        b = u[2 * k + 1] * v[2 * k]
        term = a - b if kind.is_symplectic else a + b
        acc = term if acc is None else acc + term
    return acc


def is_in_group(mat: SquareMatrix, kind: FormKind) -> bool:
    """Exact test M^T F M = F (invertibility is implied by the identity)."""
    if mat.size != kind.size:
        return False
    f = standard_form(kind, mat.carrier)
    return mat.transpose().mul(f).mul(mat) == f


# ---------------------------------------------------------------------------
# Tokens and words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GE:
    """Long-root generator: Id + lam e_ij -/+ lam e_{sigma(j) sigma(i)}."""

    i: int
    j: int
    lam: object

    def negate(self):
        return GE(self.i, self.j, -self.lam)


@dataclass(frozen=True)
class SEShort:
    """Symplectic short-root generator: Id + lam e_{i sigma(i)}."""

    i: int
    lam: object

    def negate(self):
        return SEShort(self.i, -self.lam)


@dataclass(frozen=True)
class Conjugate:
    """Core word conjugated by another word: matrix(by)^-1 matrix(core) matrix(by)."""

    core: tuple
    by: tuple


Token = object


def validate_token(tok, form: FormKind):
    k = form.size
    if isinstance(tok, GE):
        if not (1 <= tok.i <= k and 1 <= tok.j <= k):
            raise InvalidTokenError(f"index out of range in {tok}")
        if tok.i == tok.j or sigma(tok.i) == tok.j:
            raise InvalidTokenError(f"illegal index pair ({tok.i},{tok.j})")
    elif isinstance(tok, SEShort):
        if not form.is_symplectic:
            raise InvalidTokenError("short-root generators exist only symplectically")
        if not (1 <= tok.i <= k):
            raise InvalidTokenError(f"index out of range in {tok}")
    elif isinstance(tok, Conjugate):
        for t in tok.core + tok.by:
            if isinstance(t, Conjugate):
                raise InvalidTokenError("conjugates must be flat after construction")
            validate_token(t, form)
    else:
        raise InvalidTokenError(f"unknown token {tok!r}")


def _expand_to_bare(tokens):
    """Replace conjugates by the explicit product by^-1 . core . by."""
    out = []
    for t in tokens:
        if isinstance(t, Conjugate):
            core = _expand_to_bare(t.core)
            by = _expand_to_bare(t.by)
            out.extend([tok.negate() for tok in reversed(by)] + core + by)
        else:
            out.append(t)
    return out


def _flatten_conjugates(tokens):
    """Normalize to a sequence of bare tokens and depth-one conjugates.

    Conjugation by g is a homomorphism, so a mixed core splits into runs,
    and conj(conj(w, g), h) becomes conj(w, g ++ h).
    """
    out = []
    for t in tokens:
        if not isinstance(t, Conjugate):
            out.append(t)
            continue
        by = _expand_to_bare(t.by)
        run = []
        for c in _flatten_conjugates(t.core):
            if isinstance(c, Conjugate):
                if run:
                    out.append(Conjugate(tuple(run), tuple(by)))
                    run = []
                out.append(Conjugate(c.core, tuple(c.by) + tuple(by)))
            else:
                run.append(c)
        if run:
            out.append(Conjugate(tuple(run), tuple(by)))
    return out


@dataclass(frozen=True)
class GroupWord:
    form: FormKind
    carrier: object
    tokens: tuple

    @classmethod
    def make(cls, form: FormKind, carrier, tokens) -> "GroupWord":
        ensure_form_carrier(form, carrier)
        toks = tuple(_flatten_conjugates(list(tokens)))
        for t in toks:
            validate_token(t, form)
        return cls(form, carrier, toks)

    def concat(self, other: "GroupWord") -> "GroupWord":
        if self.form != other.form or self.carrier != other.carrier:
            raise CarrierMismatchError("cannot concatenate words over different carriers")
        return GroupWord(self.form, self.carrier, self.tokens + other.tokens)

    def inverse(self) -> "GroupWord":
        inv = []
        for t in reversed(self.tokens):
            if isinstance(t, Conjugate):
                inv.append(Conjugate(tuple(c.negate() for c in reversed(t.core)), t.by))
            else:
                inv.append(t.negate())
        return GroupWord(self.form, self.carrier, tuple(inv))

    def __len__(self):
        return len(self.tokens)


def empty_word(form: FormKind, carrier) -> GroupWord:
    return GroupWord.make(form, carrier, ())


def token_sign(tok: GE, form: FormKind) -> int:
    """The sign in front of the paired correction entry."""
    return (-1) ** (tok.i + tok.j) if form.is_symplectic else 1


def token_matrix(tok, form: FormKind, carrier) -> SquareMatrix:
    validate_token(tok, form)
    ident = SquareMatrix.identity(carrier, form.size)
    rows = [list(r) for r in ident.rows]
    if isinstance(tok, GE):
        lam = tok.lam
        eps = token_sign(tok, form)
        rows[tok.i - 1][tok.j - 1] = rows[tok.i - 1][tok.j - 1] + lam
        corr = lam if eps == 1 else -lam
        si, sj = sigma(tok.i), sigma(tok.j)
        rows[sj - 1][si - 1] = rows[sj - 1][si - 1] - corr
    elif isinstance(tok, SEShort):
        rows[tok.i - 1][sigma(tok.i) - 1] = rows[tok.i - 1][sigma(tok.i) - 1] + tok.lam
    else:
        raise InvalidTokenError("conjugates have no single token matrix")
    return SquareMatrix(carrier, tuple(tuple(r) for r in rows))


def word_matrix(word: GroupWord) -> SquareMatrix:
    """Ordered product of token matrices (conjugates expand exactly)."""
    acc = SquareMatrix.identity(word.carrier, word.form.size)
    for tok in word.tokens:
        if isinstance(tok, Conjugate):
            inner = GroupWord(word.form, word.carrier, tok.core)
            outer = GroupWord(word.form, word.carrier, tok.by)
            g = word_matrix(outer)
            g_inv = word_matrix(outer.inverse())
            m = g_inv.mul(word_matrix(inner)).mul(g)
        else:
            m = token_matrix(tok, word.form, word.carrier)
        acc = acc.mul(m)
    return acc


def act_token_on_row(u: tuple, tok, form: FormKind) -> tuple:
    """Right action of one elementary token on a row, without building a matrix."""
    out = list(u)
    if isinstance(tok, GE):
        lam = tok.lam
        eps = token_sign(tok, form)
        si, sj = sigma(tok.i), sigma(tok.j)
        add_j = lam * u[tok.i - 1]
        corr = lam * u[sj - 1]
        out[tok.j - 1] = out[tok.j - 1] + add_j
        out[si - 1] = out[si - 1] - (corr if eps == 1 else -corr)
        return tuple(out)
    if isinstance(tok, SEShort):
        out[sigma(tok.i) - 1] = out[sigma(tok.i) - 1] + tok.lam * u[tok.i - 1]
        return tuple(out)
    raise InvalidTokenError("conjugates must be applied through a matrix")


def act_on_row(u, word: GroupWord) -> tuple:
    """u . matrix(word), applied token by token."""
    if len(u) != word.form.size:
        raise CarrierMismatchError("row length does not match the form size")
    row = tuple(u)
    for tok in word.tokens:
        if isinstance(tok, Conjugate):
            inner = GroupWord(word.form, word.carrier, tok.by)
            g = word_matrix(inner)
            g_inv = word_matrix(inner.inverse())
            row = g_inv.act_on_row(row)
            for c in tok.core:
                row = act_token_on_row(row, c, word.form)
            row = g.act_on_row(row)
        else:
            row = act_token_on_row(row, tok, word.form)
    return row


def _param_in_ideal(param, ideal: Ideal) -> bool:
    if isinstance(param, RingElement):
        return ideal.contains(param)
    if isinstance(param, MonoidRingElement):
        return all(ideal.contains(c) for _, c in param.terms)
    raise CarrierMismatchError("unknown parameter type")


def word_in_relative_subgroup(word: GroupWord, ideal: Ideal) -> bool:
    """Structural membership certificate for the relative elementary subgroup.

    Every bare parameter and every conjugated-core parameter must lie in
    the ideal; conjugating words are unrestricted.
    """
    for tok in word.tokens:
        if isinstance(tok, Conjugate):
            if not all(_param_in_ideal(t.lam, ideal) for t in tok.core):
                return False
        else:
            if not _param_in_ideal(tok.lam, ideal):
                return False
    return True


def matrix_congruent_identity(mat: SquareMatrix, ideal: Ideal) -> bool:
    carrier = mat.carrier
    ident = SquareMatrix.identity(carrier, mat.size)
    for i in range(mat.size):
        for j in range(mat.size):
            diff = mat.rows[i][j] - ident.rows[i][j]
            if not _param_in_ideal(diff, ideal):
                return False
    return True
