"""Unimodular rows, replayable transcripts, and the reduction procedures.

Transcripts are the only trusted artifact: every procedure replays its own
word against the input row before returning, so a transcript in hand is a
machine-checkable certificate that the row reduces to e1.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import (
    CarrierMismatchError,
    PreconditionError,
    UmrowError,
    UnsupportedRingError,
)
from .groups import (
    GE,
    Conjugate,
    FormKind,
    GroupWord,
    SEShort,
    SquareMatrix,
    act_on_row,
    act_token_on_row,
    carrier_of,
    ensure_form_carrier,
    inner_product,
    is_in_group,
    sigma,
    standard_form,
    token_matrix,
    word_in_relative_subgroup,
    word_matrix,
    _param_in_ideal,
)
from .lattice import hermite_basis, vec_dot
from .monoid_ring import (
    DegreeAssignment,
    MonoidRing,
    MonoidRingElement,
    evaluate_at_t1_zero,
    is_monic_in,
    leading_term,
    nagata_twist,
    t1_weight,
)
from .rings import (
    ExcisionRing,
    Ideal,
    ModRing,
    RationalRing,
    Ring,
    RingElement,
    ZZ,
    factorize,
    is_in_jacobson_radical,
    squarefree_radical,
)


def standard_basis_row(carrier, size: int, k: int = 1) -> tuple:
    return tuple(carrier.one if i == k - 1 else carrier.zero for i in range(size))


@dataclass(frozen=True)
class UnimodularRow:
    """Length-2n row with an optional witness and an optional relative ideal."""

    form: FormKind
    entries: tuple
    witness: tuple | None = None
    relative_ideal: Ideal | None = None

    @classmethod
    def make(cls, form: FormKind, entries, witness=None, relative_ideal=None,
             check_isotropy: bool = True) -> "UnimodularRow":
        entries = tuple(entries)
        if len(entries) != form.size:
            raise CarrierMismatchError("row length does not match the form")
        carrier = carrier_of(entries[0])
        for x in entries:
            if carrier_of(x) != carrier:
                raise CarrierMismatchError("row entries over different carriers")
        ensure_form_carrier(form, carrier)
        if witness is not None:
            witness = tuple(witness)
            dot = None
            for a, b in zip(entries, witness):
                term = a * b
                dot = term if dot is None else dot + term
            if dot != carrier.one:
                raise PreconditionError("witness-dot-product",
                                        "witness dot product is not exactly 1")
        if relative_ideal is not None:
            e1 = standard_basis_row(carrier, form.size)
            for a, b in zip(entries, e1):
                if not _param_in_ideal(a - b, relative_ideal):
                    raise PreconditionError("not-congruent-e1",
                                            "row is not congruent to e1 modulo the ideal")
        if check_isotropy and form.family == "o":
            ip = inner_product(entries, entries, form)
            if ip != carrier.zero:
                raise PreconditionError("isotropy-violated",
                                        "orthogonal rows must satisfy <v,v> = 0")
        return cls(form, entries, witness, relative_ideal)

    @property
    def carrier(self):
        return carrier_of(self.entries[0])

    def is_e1(self) -> bool:
        return self.entries == standard_basis_row(self.carrier, self.form.size)

    def deviations(self) -> tuple:
        """Entrywise difference from e1."""
        e1 = standard_basis_row(self.carrier, self.form.size)
        return tuple(a - b for a, b in zip(self.entries, e1))


@dataclass(frozen=True)
class ReductionTranscript:
    """Replayable certificate: input row, word, claimed output, provenance."""

    input_row: UnimodularRow
    word: GroupWord
    output_claim: tuple
    procedure: str

    def replay(self) -> tuple:
        return act_on_row(self.input_row.entries, self.word)

    def verify(self) -> bool:
        return self.replay() == self.output_claim


def _finish(procedure: str, row: UnimodularRow, tokens) -> ReductionTranscript:
    word = GroupWord.make(row.form, row.carrier, tokens)
    out = act_on_row(row.entries, word)
    expected = standard_basis_row(row.carrier, row.form.size)
    if out != expected:
        raise UmrowError(f"internal: {procedure} word does not replay to e1")
    return ReductionTranscript(row, word, out, procedure)


def transform_witness(witness: tuple, word: GroupWord) -> tuple:
    """Carry a witness along a word: s -> s . (M^-1)^T keeps the dot product 1."""
    m_inv_t = word_matrix(word.inverse()).transpose()
    return m_inv_t.act_on_row(witness)


# ---------------------------------------------------------------------------
# Unimodularity witnesses
# ---------------------------------------------------------------------------

def _ext_gcd_combo(values: list[int]):
    """(g, coeffs) with sum coeffs[i]*values[i] = g = gcd(values)."""
    g, coeffs = 0, []
    for v in values:
        if v == 0:
            coeffs.append(0)
            continue
        if g == 0:
            g = abs(v)
            coeffs = [0] * len(coeffs) + [1 if v > 0 else -1]
            continue
        old_r, r = g, v
        old_s, s = 1, 0
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
        # old_r = gcd, old_s*g + t*v = old_r
        t = (old_r - old_s * g) // v
        coeffs = [c * old_s for c in coeffs] + [t]
        g = old_r
    return g, coeffs


def _hermite_with_transform(rows):
    """H, U with H = U . rows (row-style integer echelon, U unimodular)."""
    n = len(rows)
    ncols = len(rows[0]) if rows else 0
    work = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    h = hermite_basis([tuple(r) for r in work])
    hh = [r[:ncols] for r in h]
    uu = [r[ncols:] for r in h]
    return hh, uu


def _integer_solve(columns: list[tuple], target: tuple):
    """Integer coefficients c with sum c_i * columns[i] = target, or None."""
    if not columns:
        return None
    rows = [tuple(c) for c in columns]
    hh, uu = _hermite_with_transform(rows)
    # back-substitution of target over the echelon rows hh
    rem = list(target)
    coeffs_h = [0] * len(hh)
    for idx, row in enumerate(hh):
        if not any(row):
            continue
        p = next(k for k in range(len(row)) if row[k] != 0)
        if rem[p] % row[p] != 0:
            return None
        q = rem[p] // row[p]
        coeffs_h[idx] = q
        for k in range(len(rem)):
            rem[k] -= q * row[k]
    if any(rem):
        return None
    out = [0] * len(columns)
    for ch, urow in zip(coeffs_h, uu):
        for i, u in enumerate(urow):
            out[i] += ch * u
    return tuple(out)


def _ring_witness(entries: tuple, ring: Ring):
    vals = [x.payload for x in entries]
    if isinstance(ring, RationalRing) or (isinstance(ring, ModRing) and ring.is_field()):
        for k, v in enumerate(vals):
            if v != 0:
                inv = ring.inverse(entries[k])
                return tuple(inv if i == k else ring.zero for i in range(len(entries)))
        return None
    if ring == ZZ:
        g, coeffs = _ext_gcd_combo([int(v) for v in vals])
        if g != 1:
            return None
        return tuple(ring.from_int(c) for c in coeffs)
    if isinstance(ring, ModRing):
        ints = [int(v) for v in vals]
        g, coeffs = _ext_gcd_combo(ints + [ring.n])
        if gcd(g, ring.n) != 1:
            return None
        ginv = pow(g, -1, ring.n)
        return tuple(ring.from_int(c * ginv) for c in coeffs[: len(ints)])
    raise UnsupportedRingError(f"no witness search over {ring.tag()}")


def check_unimodular(entries, bound: int | None = None):
    """Witness row with dot product exactly 1, or None (inconclusive).

    Plain rings are decided exactly.  Monoid rings use a bounded linear
    witness search over monomials of section degree <= bound, so None does
    not certify non-unimodularity there.
    """
    entries = tuple(entries)
    carrier = carrier_of(entries[0])
    if isinstance(carrier, Ring):
        return _ring_witness(entries, carrier)
    if not isinstance(carrier, MonoidRing):
        raise UnsupportedRingError("unsupported carrier for witness search")
    ring = carrier.ring
    if not (isinstance(ring, ModRing) or ring.is_field()):
        raise UnsupportedRingError("monoid-ring witnesses need field or Z/n coefficients")
    monoid = carrier.monoid
    alpha = monoid.section_functional
    degrees = [
        vec_dot(alpha, e) for x in entries for e, _ in x.terms
    ]
    if bound is None:
        bound = 2 * max(degrees) if degrees else 2 * min(
            vec_dot(alpha, g) for g in monoid.generators
        )
    pool = monoid.members_below(bound)
    # unknown x_{i,m}; equations indexed by product monomials
    unknowns = [(i, m) for i in range(len(entries)) for m in pool]
    eq_index: dict = {}
    rows_of: dict = {}
    for col, (i, m) in enumerate(unknowns):
        for e, c in entries[i].terms:
            prod = tuple(a + b for a, b in zip(e, m))
            r = eq_index.setdefault(prod, len(eq_index))
            rows_of.setdefault(r, {})[col] = rows_of.get(r, {}).get(col, ring.zero) + c
    neq = len(eq_index)
    zero_exp = tuple([0] * monoid.ambient_rank)
    target = [0] * neq
    if zero_exp in eq_index:
        target[eq_index[zero_exp]] = 1
    elif neq == 0:
        return None
    else:
        return None

    if isinstance(ring, ModRing):
        n = ring.n
        cols = []
        for col in range(len(unknowns)):
            vec = [0] * neq
            for r, cmap in rows_of.items():
                if col in cmap:
                    vec[r] = int(cmap[col].payload)
            cols.append(tuple(vec))
        for k in range(neq):
            cols.append(tuple(n if i == k else 0 for i in range(neq)))
        sol = _integer_solve(cols, tuple(target))
        if sol is None:
            return None
        coeffs = sol[: len(unknowns)]
        witness = [carrier.zero] * len(entries)
        for (i, m), c in zip(unknowns, coeffs):
            if c % n:
                witness[i] = witness[i] + carrier.monomial(m, ring.from_int(c))
        return tuple(witness)

    # rational coefficients: exact Gaussian elimination
    a_rows = []
    b = []
    for r in range(neq):
        cmap = rows_of.get(r, {})
        a_rows.append([Fraction(cmap[c].payload) if c in cmap else Fraction(0)
                       for c in range(len(unknowns))])
        b.append(Fraction(target[r]))
    from .lattice import solve_rational

    sol = solve_rational(a_rows, b)
    if sol is None:
        return None
    witness = [carrier.zero] * len(entries)
    for (i, m), c in zip(unknowns, sol):
        if c != 0:
            witness[i] = witness[i] + carrier.monomial(m, ring.element(c))
    return tuple(witness)


# ---------------------------------------------------------------------------
# Pivot clearing (unit first coordinate)
# ---------------------------------------------------------------------------

def _pivot_tokens(entries: tuple, form: FormKind, carrier) -> list:
    a = entries[0]
    a_inv = carrier.inverse(a)
    if a_inv is None:
        raise PreconditionError("pivot-not-a-unit", "first coordinate must be a unit")
    zero, one = carrier.zero, carrier.one
    tokens = []
    work = entries
    for j in range(3, form.size + 1):
        if work[j - 1] == zero:
            continue
        tok = GE(1, j, -(work[j - 1] * a_inv))
        work = act_token_on_row(work, tok, form)
        tokens.append(tok)
    a, b = work[0], work[1]
    if form.is_symplectic:
        if a == one:
            if b != zero:
                tok = SEShort(1, -b)
                work = act_token_on_row(work, tok, form)
                tokens.append(tok)
        else:
            for tok in (SEShort(1, a_inv * (one - b)), SEShort(2, one - a),
                        SEShort(1, -one)):
                work = act_token_on_row(work, tok, form)
                tokens.append(tok)
    else:
        if b != zero:
            raise PreconditionError(
                "orthogonal-residual",
                "slot 2 did not vanish; the row is not isotropically reducible",
            )
        if a != one:
            step1 = GE(1, 3, one)
            work = act_token_on_row(work, step1, form)
            step2 = GE(3, 1, a_inv * (one - a))
            work = act_token_on_row(work, step2, form)
            step3 = GE(1, 3, -a)
            work = act_token_on_row(work, step3, form)
            tokens.extend([step1, step2, step3])
    return tokens


def pivot_reduce(row: UnimodularRow) -> ReductionTranscript:
    """Clear a row whose first coordinate is a unit, via that pivot."""
    if row.is_e1():
        return _finish("pivot", row, ())
    tokens = _pivot_tokens(row.entries, row.form, row.carrier)
    return _finish("pivot", row, tokens)


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------

def _field_normalize_tokens(entries: tuple, form: FormKind, ring: Ring) -> list:
    """Tokens making the first coordinate exactly 1 over a field."""
    zero, one = ring.zero, ring.one
    tokens = []
    work = entries

    def apply(tok):
        nonlocal work
        work = act_token_on_row(work, tok, form)
        tokens.append(tok)

    if work[0] == zero:
        src = next((k for k in range(3, form.size + 1) if work[k - 1] != zero), None)
        if src is not None:
            apply(GE(src, 1, ring.inverse(work[src - 1])))
        elif work[1] != zero:
            if form.is_symplectic:
                apply(SEShort(2, ring.inverse(work[1])))
            else:
                apply(GE(2, 3, one))
                apply(GE(3, 1, ring.inverse(work[2])))
        else:
            raise PreconditionError("zero-row", "the zero row is not unimodular")
    if work[0] != one:
        src = next((k for k in range(3, form.size + 1) if work[k - 1] != zero), None)
        delta = one - work[0]
        if src is not None:
            apply(GE(src, 1, delta * ring.inverse(work[src - 1])))
        elif work[1] != zero:
            if form.is_symplectic:
                apply(SEShort(2, delta * ring.inverse(work[1])))
            else:
                apply(GE(2, 3, one))
                apply(GE(3, 1, (one - work[0]) * ring.inverse(work[2])))
        else:
            apply(GE(1, 3, one))
            apply(GE(3, 1, delta * ring.inverse(work[2])))
    return tokens


def reduce_over_field(row: UnimodularRow) -> ReductionTranscript:
    """Reduce any nonzero row over a field to e1 (2n >= 4)."""
    ring = row.carrier
    if not (isinstance(ring, Ring) and ring.is_field()):
        raise PreconditionError("field-carrier-required",
                                "this procedure runs over fields only")
    if row.form.size < 4:
        raise PreconditionError("size-too-small", "need 2n >= 4")
    if all(x == ring.zero for x in row.entries):
        raise PreconditionError("zero-row", "the zero row is not unimodular")
    if row.is_e1():
        return _finish("field", row, ())
    tokens = _field_normalize_tokens(row.entries, row.form, ring)
    work = row.entries
    for t in tokens:
        work = act_token_on_row(work, t, row.form)
    tokens += _pivot_tokens(work, row.form, ring)
    return _finish("field", row, tokens)


# ---------------------------------------------------------------------------
# Rows congruent to e1 modulo an ideal in the Jacobson radical
# ---------------------------------------------------------------------------

def _radical_script(entries: tuple, form: FormKind, carrier) -> list:
    """Explicit clearing script for rows = e1 + (ideal deviations).

    For 2n = 4 runs the five-step pivot-normalization; larger sizes clear
    the top two slots and recurse.  The emitted word keeps every bare or
    conjugated-core parameter inside the ideal: the unit-sized steps are
    wrapped as a conjugation by ge_13(-1), which leaves the matrix product
    unchanged.
    """
    zero, one = carrier.zero, carrier.one
    size = len(entries)
    if size == 4:
        u = entries
        u1_inv = carrier.inverse(u[0])
        if u1_inv is None:
            raise PreconditionError("pivot-not-a-unit",
                                    "1 + i_1 must be a unit (ideal inside the radical)")
        lam1 = -((u[2] - one) * u1_inv)
        t1 = GE(1, 3, lam1)
        s1 = act_token_on_row(u, t1, form)
        t2 = GE(2, 4, u[0] - one)
        s2 = act_token_on_row(s1, t2, form)
        t3 = GE(1, 4, -s2[3])
        s3 = act_token_on_row(s2, t3, form)
        t4 = GE(1, 3, -one)
        s4 = act_token_on_row(s3, t4, form)
        tokens = []
        delta = lam1 - one
        if delta != zero:
            tokens.append(GE(1, 3, delta))
        core = tuple(t for t in (t2, t3) if t.lam != zero)
        tokens.append(Conjugate(core, (GE(1, 3, -one),)))
        if form.is_symplectic:
            if s4[1] != zero:
                tokens.append(SEShort(1, -s4[1]))
        else:
            if s4[1] != zero:
                raise PreconditionError(
                    "orthogonal-residual",
                    "slot 2 residue is nonzero; the row is not isotropically reducible",
                )
        return tokens
    # 2n > 4: clear the last two slots, then recurse on the front block
    u = entries
    u1_inv = carrier.inverse(u[0])
    if u1_inv is None:
        raise PreconditionError("pivot-not-a-unit", "1 + i_1 must be a unit")
    tokens = []
    work = u
    for j in (size, size - 1):
        if work[j - 1] == zero:
            continue
        tok = GE(1, j, -(work[j - 1] * u1_inv))
        work = act_token_on_row(work, tok, form)
        tokens.append(tok)
    sub_form = FormKind(form.family, form.n - 1)
    tokens += _radical_script(work[: size - 2], sub_form, carrier)
    return tokens


def reduce_mod_radical(row: UnimodularRow, ideal: Ideal) -> ReductionTranscript:
    """Reduce a row congruent to e1 modulo an ideal inside the Jacobson radical.

    Every emitted bare/conjugated-core parameter lies in the ideal, so the
    transcript word is a structural member of the relative elementary
    subgroup.
    """
    if row.form.size < 4:
        raise PreconditionError("size-too-small", "need 2n >= 4")
    for g in ideal.gens:
        if not is_in_jacobson_radical(g):
            raise PreconditionError("ideal-not-in-radical",
                                    "ideal generators must lie in the Jacobson radical")
    for d in row.deviations():
        if not _param_in_ideal(d, ideal):
            raise PreconditionError("not-congruent-e1",
                                    "row must be congruent to e1 modulo the ideal")
    if row.is_e1():
        return _finish("radical", row, ())
    tokens = _radical_script(row.entries, row.form, row.carrier)
    return _finish("radical", row, tokens)


# ---------------------------------------------------------------------------
# Semilocal rings Z/n
# ---------------------------------------------------------------------------

def _crt(residues: list[int], moduli: list[int]) -> int:
    x, m = 0, 1
    for r, q in zip(residues, moduli):
        delta = (r - x) % q
        inv = pow(m % q, -1, q)
        x += m * ((delta * inv) % q)
        m *= q
    return x % m


def _crt_param(value: int, position: int, moduli: list[int], ring: ModRing):
    residues = [0] * len(moduli)
    residues[position] = value % moduli[position]
    return ring.from_int(_crt(residues, moduli))


def _map_word_tokens(tokens, fn):
    out = []
    for t in tokens:
        if isinstance(t, Conjugate):
            out.append(Conjugate(tuple(_map_word_tokens(t.core, fn)),
                                 tuple(_map_word_tokens(t.by, fn))))
        elif isinstance(t, GE):
            out.append(GE(t.i, t.j, fn(t.lam)))
        else:
            out.append(SEShort(t.i, fn(t.lam)))
    return out


def reduce_semilocal(row: UnimodularRow) -> ReductionTranscript:
    """Reduce over Z/n: per-prime field reductions, CRT-combined, radical finish."""
    ring = row.carrier
    if not isinstance(ring, ModRing):
        raise PreconditionError("semilocal-carrier", "this procedure runs over Z/n")
    if row.form.size < 4:
        raise PreconditionError("size-too-small", "need 2n >= 4")
    if check_unimodular(row.entries) is None:
        raise PreconditionError("not-unimodular", "no witness over Z/n")
    if row.is_e1():
        return _finish("semilocal", row, ())
    if ring.is_field():
        inner = reduce_over_field(row)
        return ReductionTranscript(row, inner.word, inner.output_claim, "semilocal")
    factors = factorize(ring.n)
    comps = [(p, p ** e) for p, e in sorted(factors.items())]
    moduli = [q for _, q in comps]
    tokens = []
    for pos, (p, q) in enumerate(comps):
        fp = ModRing(p)
        sub_entries = tuple(fp.from_int(int(x.payload)) for x in row.entries)
        if all(x == fp.zero for x in sub_entries):
            raise PreconditionError("not-unimodular", f"row vanishes modulo {p}")
        sub_row = UnimodularRow.make(row.form, sub_entries, check_isotropy=False)
        sub = reduce_over_field(sub_row)
        lifted = _map_word_tokens(
            sub.word.tokens,
            lambda lam: _crt_param(int(lam.payload), pos, moduli, ring),
        )
        tokens.extend(lifted)
    word = GroupWord.make(row.form, ring, tokens)
    mid = act_on_row(row.entries, word)
    rad = squarefree_radical(ring.n)
    ideal = Ideal.from_ints(ring, [rad])
    mid_row = UnimodularRow.make(row.form, mid, relative_ideal=ideal,
                                 check_isotropy=False)
    tail = reduce_mod_radical(mid_row, ideal)
    return _finish("semilocal", row, tokens + list(tail.word.tokens))


# ---------------------------------------------------------------------------
# Word lifting along carrier maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CarrierMap:
    """Surjection between carriers with a computable preimage chooser."""

    source: object
    target: object
    project: object  # source element -> target element
    lift: object  # target element -> source element


def mod_projection(source: ModRing, target: ModRing) -> CarrierMap:
    if source.n % target.n != 0:
        raise CarrierMismatchError("target modulus must divide the source modulus")
    return CarrierMap(
        source,
        target,
        project=lambda x: target.from_int(int(x.payload)),
        lift=lambda y: source.from_int(int(y.payload)),
    )


def excision_collapse_map(excision: ExcisionRing) -> CarrierMap:
    """(r, i) -> r + i with the canonical preimage s -> (s, 0)."""
    from .rings import excision_project

    return CarrierMap(
        excision,
        excision.base,
        project=excision_project,
        lift=lambda s: excision.pair(s, excision.base.zero),
    )


def lift_word(word: GroupWord, cmap: CarrierMap) -> GroupWord:
    """Tokenwise lift: same structure, parameters replaced by chosen preimages."""
    if word.carrier != cmap.target:
        raise CarrierMismatchError("word does not live over the map target")

    def lift_param(lam):
        pre = cmap.lift(lam)
        if cmap.project(pre) != lam:
            raise PreconditionError("preimage-chooser-failed",
                                    "chosen preimage does not project back")
        return pre

    tokens = _map_word_tokens(word.tokens, lift_param)
    return GroupWord.make(word.form, cmap.source, tokens)


def project_word(word: GroupWord, cmap: CarrierMap) -> GroupWord:
    if word.carrier != cmap.source:
        raise CarrierMismatchError("word does not live over the map source")
    tokens = _map_word_tokens(word.tokens, cmap.project)
    return GroupWord.make(word.form, cmap.target, tokens)


# ---------------------------------------------------------------------------
# Relative reduction through the excision ring
# ---------------------------------------------------------------------------

def reduce_relative(row: UnimodularRow) -> ReductionTranscript:
    """Reduce a row congruent to e1 mod I with a word structurally in E(2n,R,I).

    The row is embedded into the excision ring as ((1, u1-1), (0, u2), ...),
    reduced there (per prime-power component of the modulus), and the word
    is pushed back through the collapse (r, i) -> r + i; parameters stay in
    the kernel, hence in I after projection.
    """
    ideal = row.relative_ideal
    if ideal is None:
        raise PreconditionError("relative-ideal-missing",
                                "this procedure needs a declared relative ideal")
    ring = row.carrier
    if not isinstance(ring, ModRing):
        raise PreconditionError("relative-carrier", "v1 supports Z/n carriers")
    if row.form.size < 4:
        raise PreconditionError("size-too-small", "need 2n >= 4")
    if check_unimodular(row.entries) is None:
        raise PreconditionError("not-unimodular", "no witness over Z/n")
    if row.is_e1():
        return _finish("relative", row, ())
    factors = factorize(ring.n)
    moduli = [p ** e for p, e in sorted(factors.items())]
    tokens = []
    for pos, q in enumerate(moduli):
        rq = ModRing(q)
        gens_q = [int(g.payload) % q for g in ideal.gens]
        ideal_q = Ideal.from_ints(rq, gens_q)
        entries_q = tuple(rq.from_int(int(x.payload)) for x in row.entries)
        if ideal_q.is_unit_ideal():
            # the relative condition is vacuous modulo this component
            sub_row = UnimodularRow.make(row.form, entries_q, check_isotropy=False)
            sub = reduce_semilocal(sub_row)
            sub_tokens = sub.word.tokens
        else:
            exc = ExcisionRing(rq, ideal_q)
            kernel = Ideal(exc, tuple(exc.pair(rq.zero, g) for g in ideal_q.gens))
            embedded = [exc.pair(rq.one, entries_q[0] - rq.one)]
            for x in entries_q[1:]:
                embedded.append(exc.pair(rq.zero, x))
            emb_row = UnimodularRow.make(row.form, tuple(embedded),
                                         relative_ideal=kernel, check_isotropy=False)
            exc_transcript = reduce_mod_radical(emb_row, kernel)
            collapsed = project_word(exc_transcript.word, excision_collapse_map(exc))
            sub_tokens = collapsed.tokens
        lifted = _map_word_tokens(
            sub_tokens, lambda lam: _crt_param(int(lam.payload), pos, moduli, ring)
        )
        tokens.extend(lifted)
    transcript = _finish("relative", row, tokens)
    if not word_in_relative_subgroup(transcript.word, ideal):
        raise UmrowError("internal: relative word left the structural subgroup")
    return transcript


# ---------------------------------------------------------------------------
# Stabilization descent
# ---------------------------------------------------------------------------

def stabilization_descent(alpha: SquareMatrix, kind: FormKind):
    """Split a group matrix fixing e_{2n} into (word, smaller group matrix).

    Returns (epsilon, beta) with word_matrix(epsilon) . (beta (+) Id_2) equal
    to alpha exactly; beta lies in the group one size down.
    """
    size = kind.size
    if alpha.size != size:
        raise PreconditionError("size-mismatch", "matrix size does not match the form")
    if size < 6:
        raise PreconditionError("size-too-small", "descent needs 2n >= 6")
    carrier = alpha.carrier
    if not is_in_group(alpha, kind):
        raise PreconditionError("not-in-group", "matrix fails the form identity")
    zero, one = carrier.zero, carrier.one
    last_col = tuple(alpha.rows[i][size - 1] for i in range(size))
    e_last = tuple(one if i == size - 1 else zero for i in range(size))
    if last_col != e_last:
        raise PreconditionError("last-column", "matrix must fix e_{2n} as a column")
    # the form identity then pins the (2n-1)-st row
    if alpha.rows[size - 2] != tuple(
        one if j == size - 2 else zero for j in range(size)
    ):
        raise UmrowError("internal: row 2n-1 not forced to e_{2n-1}")

    small_kind = FormKind(kind.family, kind.n - 1)
    b_rows = tuple(tuple(alpha.rows[i][: size - 2]) for i in range(size - 2))
    beta = SquareMatrix(carrier, b_rows)
    if not is_in_group(beta, small_kind):
        raise UmrowError("internal: upper block is not in the smaller group")
    f_small = standard_form(small_kind, carrier)
    ft = f_small.transpose()  # F^-1 = F^T for both forms (phi^-1 = -phi = phi^T)
    beta_inv = ft.mul(beta.transpose()).mul(f_small)
    v = tuple(alpha.rows[size - 1][: size - 2])
    v_prime = beta_inv.act_on_row(v)

    tokens = [GE(size, j + 1, v_prime[j]) for j in range(size - 2)
              if v_prime[j] != zero]
    ident2 = SquareMatrix.identity(carrier, 2)
    gamma = alpha.mul(beta_inv.block_diag(ident2))
    w = word_matrix(GroupWord.make(kind, carrier, tokens))
    w_inv = word_matrix(GroupWord.make(kind, carrier, tokens).inverse())
    residue = w_inv.mul(gamma)
    ident = SquareMatrix.identity(carrier, size)
    s2 = residue.rows[size - 1][size - 2]
    expected = [list(r) for r in ident.rows]
    expected[size - 1][size - 2] = s2
    if residue.rows != tuple(tuple(r) for r in expected):
        raise UmrowError("internal: descent residue is not a single short root")
    if s2 != zero:
        if kind.is_symplectic:
            tokens.append(SEShort(size, s2))
        else:
            raise PreconditionError(
                "orthogonal-residual",
                "orthogonal descent obstruction: residual short root is nonzero",
            )
    epsilon = GroupWord.make(kind, carrier, tokens)
    if word_matrix(epsilon).mul(beta.block_diag(ident2)) != alpha:
        raise UmrowError("internal: descent reconstruction failed")
    return epsilon, beta


# ---------------------------------------------------------------------------
# Bounded orbit search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchBudget:
    max_states: int = 60000
    max_depth: int = 6
    coeff_pool: tuple | None = None  # nonzero coefficient ring elements
    monomial_degree: int = 2  # section-degree cap for monomial parameters


def _entry_cost(x, target) -> int:
    if x == target:
        return 0
    if isinstance(x, MonoidRingElement):
        return 1 + len(x.terms)
    return 2


def _move_params(carrier, budget: SearchBudget):
    if isinstance(carrier, MonoidRing):
        ring = carrier.ring
        if budget.coeff_pool is not None:
            coeffs = list(budget.coeff_pool)
        elif isinstance(ring, ModRing) and ring.n <= 7:
            coeffs = [ring.from_int(k) for k in range(1, ring.n)]
        else:
            coeffs = [ring.one, -ring.one]
        monos = carrier.monoid.members_below(_mono_cap(carrier, budget))
        params = [carrier.monomial(m, c) for m in monos for c in coeffs]
    else:
        if budget.coeff_pool is not None:
            params = list(budget.coeff_pool)
        elif isinstance(carrier, ModRing) and carrier.n <= 16:
            params = [carrier.from_int(k) for k in range(1, carrier.n)]
        else:
            params = [carrier.one, -carrier.one]
    return params


def _mono_cap(carrier: MonoidRing, budget: SearchBudget) -> int:
    """Monomial pool cap in section-functional units.

    The cap is expressed as `monomial_degree` times the smallest generator
    degree, so degree-1 parameters are always available.
    """
    alpha = carrier.monoid.section_functional
    unit = min(vec_dot(alpha, g) for g in carrier.monoid.generators)
    return budget.monomial_degree * unit


def bounded_orbit_search(row: UnimodularRow, budget: SearchBudget | None = None):
    """Best-first search for an elementary word driving the row to e1.

    Deterministic for a fixed budget; returns a transcript on success and
    None when the budget is exhausted (which proves nothing).
    """
    budget = budget or SearchBudget()
    form, carrier = row.form, row.carrier
    target = standard_basis_row(carrier, form.size)
    if row.entries == target:
        return _finish("search", row, ())
    params = _move_params(carrier, budget)
    moves = []
    for i in range(1, form.size + 1):
        for j in range(1, form.size + 1):
            if i == j or sigma(i) == j:
                continue
            for p in params:
                moves.append(GE(i, j, p))
        if form.is_symplectic:
            for p in params:
                moves.append(SEShort(i, p))

    def score(entries):
        return sum(_entry_cost(x, t) for x, t in zip(entries, target))

    counter = 0
    start = row.entries
    heap = [(score(start), 0, counter, start, ())]
    seen = {start}
    explored = 0
    while heap and explored < budget.max_states:
        _, depth, _, entries, path = heapq.heappop(heap)
        explored += 1
        if entries == target:
            return _finish("search", row, list(path))
        if depth >= budget.max_depth:
            continue
        for mv in moves:
            nxt = act_token_on_row(entries, mv, form)
            if nxt in seen:
                continue
            seen.add(nxt)
            counter += 1
            new_path = path + (mv,)
            if nxt == target:
                return _finish("search", row, list(new_path))
            heapq.heappush(heap, (depth + 1 + score(nxt), depth + 1, counter,
                                  nxt, new_path))
    return None


# ---------------------------------------------------------------------------
# Monic preparation via the Nagata twist
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonicTwistResult:
    """Twisted row plus the data a caller needs to continue with pivot_reduce."""

    entries: tuple
    witness: tuple | None
    c: int
    monic: bool
    degree: DegreeAssignment

    @property
    def retry_needed(self) -> bool:
        return not self.monic


def monic_then_reduce(row: UnimodularRow, degree: DegreeAssignment | None = None,
                      c: int = 1, c_max: int = 64) -> MonicTwistResult:
    """Apply t_j -> t_j + t_1^c to all entries until the last entry is monic in t_1.

    The exponent doubles on failure up to c_max; a result with monic=False
    is the retry-with-larger-c signal.  The height/prime-avoidance
    preprocessing that guarantees success in general is out of scope.
    """
    carrier = row.carrier
    if not isinstance(carrier, MonoidRing):
        raise PreconditionError("monoid-ring-required", "row must live over R[Z_+^r]")
    ring = carrier.ring
    if not (isinstance(ring, ModRing) or ring.is_field()):
        raise PreconditionError("coefficient-ring", "need field or Z/n coefficients")
    rank = carrier.monoid.ambient_rank
    restricted = tuple(evaluate_at_t1_zero(x) for x in row.entries)
    if check_unimodular(restricted) is None:
        raise PreconditionError("restriction-not-unimodular",
                                "the t_1 = 0 restriction must be unimodular")
    d = degree or t1_weight(rank)
    t1 = tuple(1 if k == 0 else 0 for k in range(rank))
    cc = c
    result = None
    while cc <= c_max:
        twisted = tuple(nagata_twist(x, cc) for x in row.entries)
        witness = (tuple(nagata_twist(s, cc) for s in row.witness)
                   if row.witness is not None else None)
        if is_monic_in(twisted[-1], t1, d):
            return MonicTwistResult(twisted, witness, cc, True, d)
        result = MonicTwistResult(twisted, witness, cc, False, d)
        cc *= 2
    return result
