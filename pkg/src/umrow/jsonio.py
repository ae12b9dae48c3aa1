"""Canonical JSON encoding of every interchange value.

Integers are encoded as decimal strings (no 64-bit ambiguity), rationals
as "p/q", and all objects serialize with sorted keys, so a value survives
serialize -> parse -> serialize byte-identically.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import ParseError
from .groups import (
    GE,
    Conjugate,
    FormKind,
    GroupWord,
    SEShort,
    SquareMatrix,
)
from .monoid_ring import MonoidRing, MonoidRingElement
from .monoids import AffineMonoid, SectionPolytope
from .reduction import ReductionTranscript, UnimodularRow
from .rings import (
    ExcisionRing,
    Ideal,
    IntegerRing,
    ModRing,
    QQ,
    RationalRing,
    Ring,
    RingElement,
    ZZ,
)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc


# -- fractions --------------------------------------------------------------

def encode_fraction(x) -> str:
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def decode_fraction(s) -> Fraction:
    try:
        if isinstance(s, str) and "/" in s:
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad fraction {s!r}") from exc


# -- rings ------------------------------------------------------------------

def encode_ring(ring: Ring):
    if isinstance(ring, IntegerRing):
        return {"kind": "int"}
    if isinstance(ring, RationalRing):
        return {"kind": "rat"}
    if isinstance(ring, ModRing):
        return {"kind": "mod", "n": ring.n}
    if isinstance(ring, ExcisionRing):
        return {
            "kind": "excision",
            "base": encode_ring(ring.base),
            "ideal": {"gens": [encode_element(g) for g in ring.ideal.gens]},
        }
    raise ParseError(f"unknown ring {ring!r}")


def decode_ring(data) -> Ring:
    try:
        kind = data["kind"]
    except (TypeError, KeyError) as exc:
        raise ParseError("ring descriptor needs a 'kind'") from exc
    if kind == "int":
        return ZZ
    if kind == "rat":
        return QQ
    if kind == "mod":
        return ModRing(int(data["n"]))
    if kind == "excision":
        base = decode_ring(data["base"])
        gens = tuple(decode_element(base, g) for g in data["ideal"]["gens"])
        return ExcisionRing(base, Ideal(base, gens))
    raise ParseError(f"unknown ring kind {kind!r}")


def encode_element(x: RingElement):
    ring = x.ring
    if isinstance(ring, (IntegerRing, ModRing)):
        return str(x.payload)
    if isinstance(ring, RationalRing):
        return encode_fraction(x.payload)
    if isinstance(ring, ExcisionRing):
        r, i = x.payload
        return {"r": encode_element(r), "i": encode_element(i)}
    raise ParseError(f"unknown ring element {x!r}")


def decode_element(ring: Ring, data) -> RingElement:
    if isinstance(ring, (IntegerRing, ModRing)):
        try:
            return ring.from_int(int(data))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad integer payload {data!r}") from exc
    if isinstance(ring, RationalRing):
        return ring.element(decode_fraction(data))
    if isinstance(ring, ExcisionRing):
        try:
            r = decode_element(ring.base, data["r"])
            i = decode_element(ring.base, data["i"])
        except (TypeError, KeyError) as exc:
            raise ParseError("excision element needs 'r' and 'i'") from exc
        return ring.pair(r, i)
    raise ParseError(f"cannot decode into {ring!r}")


def encode_ideal(ideal: Ideal):
    return {"ring": encode_ring(ideal.ring),
            "gens": [encode_element(g) for g in ideal.gens]}


def decode_ideal(data) -> Ideal:
    ring = decode_ring(data["ring"])
    return Ideal(ring, tuple(decode_element(ring, g) for g in data["gens"]))


# -- monoids ----------------------------------------------------------------

def encode_monoid(m: AffineMonoid):
    return {"rank": m.ambient_rank, "generators": [list(g) for g in m.generators]}


def decode_monoid(data) -> AffineMonoid:
    try:
        rank = int(data["rank"])
        gens = [tuple(int(v) for v in g) for g in data["generators"]]
    except (TypeError, KeyError, ValueError) as exc:
        raise ParseError("monoid needs 'rank' and integer 'generators'") from exc
    from .errors import UmrowError

    try:
        return AffineMonoid(rank, gens)
    except UmrowError as exc:
        raise ParseError(str(exc)) from exc


def encode_polytope(p: SectionPolytope):
    return {
        "alpha": list(p.alpha),
        "level": encode_fraction(p.level),
        "vertices": [[encode_fraction(c) for c in v] for v in p.vertices],
    }


def decode_polytope(data) -> SectionPolytope:
    return SectionPolytope(
        alpha=tuple(int(v) for v in data["alpha"]),
        level=decode_fraction(data["level"]),
        vertices=tuple(
            tuple(decode_fraction(c) for c in v) for v in data["vertices"]
        ),
    )


# -- carriers and carrier elements -------------------------------------------

def encode_carrier(carrier):
    if isinstance(carrier, MonoidRing):
        return {"ring": encode_ring(carrier.ring),
                "monoid": encode_monoid(carrier.monoid)}
    return {"ring": encode_ring(carrier), "monoid": None}


def decode_carrier(data):
    ring = decode_ring(data["ring"])
    if data.get("monoid") is None:
        return ring
    return MonoidRing(ring, decode_monoid(data["monoid"]))


def encode_carrier_element(x):
    if isinstance(x, MonoidRingElement):
        return [{"exp": list(e), "coef": encode_element(c)} for e, c in x.terms]
    return encode_element(x)


def decode_carrier_element(carrier, data):
    if isinstance(carrier, MonoidRing):
        if not isinstance(data, list):
            raise ParseError("monoid-ring element must be a list of terms")
        terms = {}
        for item in data:
            try:
                exp = tuple(int(v) for v in item["exp"])
                coef = decode_element(carrier.ring, item["coef"])
            except (TypeError, KeyError, ValueError) as exc:
                raise ParseError("term needs 'exp' and 'coef'") from exc
            if not carrier.monoid.contains(exp):
                raise ParseError(f"exponent {list(exp)} outside the monoid")
            terms[exp] = terms.get(exp, carrier.ring.zero) + coef
        return carrier._make(terms)
    return decode_element(carrier, data)


# -- forms, words, matrices ---------------------------------------------------

def encode_form(kind: FormKind):
    return {"kind": kind.family, "n": kind.n}


def decode_form(data) -> FormKind:
    try:
        return FormKind(data["kind"], int(data["n"]))
    except (TypeError, KeyError, ValueError) as exc:
        raise ParseError("form needs 'kind' and 'n'") from exc


def encode_token(tok):
    if isinstance(tok, GE):
        return {"op": "ge", "i": tok.i, "j": tok.j,
                "lam": encode_carrier_element(tok.lam)}
    if isinstance(tok, SEShort):
        return {"op": "se", "i": tok.i, "lam": encode_carrier_element(tok.lam)}
    if isinstance(tok, Conjugate):
        return {"op": "conj",
                "core": [encode_token(t) for t in tok.core],
                "by": [encode_token(t) for t in tok.by]}
    raise ParseError(f"unknown token {tok!r}")


def decode_token(carrier, data):
    try:
        op = data["op"]
    except (TypeError, KeyError) as exc:
        raise ParseError("token needs an 'op'") from exc
    if op == "ge":
        return GE(int(data["i"]), int(data["j"]),
                  decode_carrier_element(carrier, data["lam"]))
    if op == "se":
        return SEShort(int(data["i"]), decode_carrier_element(carrier, data["lam"]))
    if op == "conj":
        return Conjugate(
            tuple(decode_token(carrier, t) for t in data["core"]),
            tuple(decode_token(carrier, t) for t in data["by"]),
        )
    raise ParseError(f"unknown token op {op!r}")


def encode_word(word: GroupWord):
    return {
        "form": encode_form(word.form),
        "carrier": encode_carrier(word.carrier),
        "tokens": [encode_token(t) for t in word.tokens],
    }


def decode_word(data) -> GroupWord:
    form = decode_form(data["form"])
    carrier = decode_carrier(data["carrier"])
    tokens = [decode_token(carrier, t) for t in data["tokens"]]
    return GroupWord.make(form, carrier, tokens)


def encode_matrix(mat: SquareMatrix, form: FormKind | None = None):
    out = {
        "carrier": encode_carrier(mat.carrier),
        "entries": [[encode_carrier_element(x) for x in row] for row in mat.rows],
    }
    if form is not None:
        out["form"] = encode_form(form)
    return out


def decode_matrix(data) -> SquareMatrix:
    carrier = decode_carrier(data["carrier"])
    rows = [
        tuple(decode_carrier_element(carrier, x) for x in row)
        for row in data["entries"]
    ]
    return SquareMatrix.from_rows(carrier, rows)


def encode_row(row: UnimodularRow):
    out = {
        "form": encode_form(row.form),
        "carrier": encode_carrier(row.carrier),
        "entries": [encode_carrier_element(x) for x in row.entries],
        "witness": ([encode_carrier_element(x) for x in row.witness]
                    if row.witness is not None else None),
        "relative_ideal": (encode_ideal(row.relative_ideal)
                           if row.relative_ideal is not None else None),
    }
    return out


def decode_row(data, check_isotropy: bool = True) -> UnimodularRow:
    form = decode_form(data["form"])
    carrier = decode_carrier(data["carrier"])
    entries = tuple(decode_carrier_element(carrier, x) for x in data["entries"])
    witness = None
    if data.get("witness") is not None:
        witness = tuple(decode_carrier_element(carrier, x) for x in data["witness"])
    ideal = None
    if data.get("relative_ideal") is not None:
        ideal = decode_ideal(data["relative_ideal"])
    return UnimodularRow.make(form, entries, witness, ideal,
                              check_isotropy=check_isotropy)


def encode_transcript(t: ReductionTranscript):
    return {
        "procedure": t.procedure,
        "input": encode_row(t.input_row),
        "word": [encode_token(tok) for tok in t.word.tokens],
        "output": [encode_carrier_element(x) for x in t.output_claim],
        "relative_ideal": (encode_ideal(t.input_row.relative_ideal)
                           if t.input_row.relative_ideal is not None else None),
    }


def decode_transcript(data) -> ReductionTranscript:
    row = decode_row(data["input"], check_isotropy=False)
    carrier = row.carrier
    tokens = [decode_token(carrier, t) for t in data["word"]]
    word = GroupWord.make(row.form, carrier, tokens)
    output = tuple(decode_carrier_element(carrier, x) for x in data["output"])
    return ReductionTranscript(row, word, output, data["procedure"])
