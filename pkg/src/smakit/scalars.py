"""Exact scalar arithmetic over the supported fields.

Three fields are available: the rationals Q, the Gaussian rationals
Q(i), and prime fields F_p for odd p.  Every operation is exact; there
is no floating point anywhere.  The normalized Jordan product divides
by 2, which is why characteristic 2 is excluded.

Internally a scalar is a lightweight payload (an ``mpq``, a pair of
``mpq`` for Gaussian values, or an int residue) and the field object
carries closures operating directly on payloads.  Hot loops in the
matrix layer use those closures; the ``Scalar`` wrapper is the public
face.

The true complex field admits infinitely many injective multiplicative
self-maps that no finite computation can represent (they exist only via
choice); this module deliberately supports exact subfields where the
catalog {identity, conjugation, cube} is meaningful and testable.
"""

from __future__ import annotations

import operator
import re as _re
from fractions import Fraction

from gmpy2 import is_prime, mpq

from .errors import FieldMismatchError, ParseError, PreconditionError

RATIONAL, GAUSSIAN, MODULAR = 0, 1, 2

_MPQ0 = mpq(0)
_MPQ1 = mpq(1)

_KIND_NAMES = {
    RATIONAL: "RationalField",
    GAUSSIAN: "GaussianRationalField",
    MODULAR: "PrimeField",
}


class FieldDescriptor:
    """One of Q, Q(i), F_p.  Use the module constants QQ, QI or the
    prime_field() constructor; do not instantiate directly."""

    __slots__ = (
        "code", "modulus",
        "k_add", "k_sub", "k_mul", "k_neg", "k_div", "k_inv",
        "k_is0", "k_conj", "k_from_int", "k_random",
        "p_zero", "p_one", "p_half",
        "zero", "one",
    )

    def __init__(self, code, modulus=None):
        self.code = code
        self.modulus = modulus
        if code == RATIONAL:
            self.k_add = operator.add
            self.k_sub = operator.sub
            self.k_mul = operator.mul
            self.k_neg = operator.neg
            self.k_div = operator.truediv
            self.k_inv = lambda a: _MPQ1 / a
            self.k_is0 = lambda a: not a
            self.k_conj = lambda a: a
            self.k_from_int = mpq
            # rng.random() is far cheaper than randint and the tiny
            # float bias is irrelevant for property sampling
            self.k_random = lambda rng, bound: mpq(
                int(rng.random() * (2 * bound + 1)) - bound,
                1 + int(rng.random() * bound))
            self.p_zero = _MPQ0
            self.p_one = _MPQ1
        elif code == GAUSSIAN:
            self.k_add = lambda a, b: (a[0] + b[0], a[1] + b[1])
            self.k_sub = lambda a, b: (a[0] - b[0], a[1] - b[1])
            self.k_mul = lambda a, b: (
                a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])
            self.k_neg = lambda a: (-a[0], -a[1])
            self.k_inv = _gaussian_inv
            self.k_div = lambda a, b: self.k_mul(a, _gaussian_inv(b))
            self.k_is0 = lambda a: not (a[0] or a[1])
            self.k_conj = lambda a: (a[0], -a[1])
            self.k_from_int = lambda v: (mpq(v), _MPQ0)
            self.k_random = lambda rng, bound: (
                mpq(int(rng.random() * (2 * bound + 1)) - bound,
                    1 + int(rng.random() * bound)),
                mpq(int(rng.random() * (2 * bound + 1)) - bound,
                    1 + int(rng.random() * bound)))
            self.p_zero = (_MPQ0, _MPQ0)
            self.p_one = (_MPQ1, _MPQ0)
        elif code == MODULAR:
            p = modulus
            self.k_add = lambda a, b: (a + b) % p
            self.k_sub = lambda a, b: (a - b) % p
            self.k_mul = lambda a, b: a * b % p
            self.k_neg = lambda a: -a % p
            self.k_div = _modular_div(p)
            self.k_inv = _modular_inv(p)
            self.k_is0 = lambda a: not a
            self.k_conj = lambda a: a
            self.k_from_int = lambda v: v % p
            self.k_random = lambda rng, bound: int(rng.random() * p)
            self.p_zero = 0
            self.p_one = 1
        else:
            raise ValueError(f"unknown field code {code}")
        self.p_half = self.k_inv(self.k_from_int(2))
        self.zero = Scalar(self, self.p_zero)
        self.one = Scalar(self, self.p_one)

    @property
    def kind(self) -> str:
        return _KIND_NAMES[self.code]

    @property
    def characteristic(self) -> int:
        return self.modulus if self.code == MODULAR else 0

    @property
    def tag(self) -> str:
        if self.code == RATIONAL:
            return "Q"
        if self.code == GAUSSIAN:
            return "Qi"
        return f"F{self.modulus}"

    def __eq__(self, other):
        return (isinstance(other, FieldDescriptor)
                and self.code == other.code and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.code, self.modulus))

    def __repr__(self):
        return self.tag

    def coerce_payload(self, value):
        """Accept int, Fraction, mpq, a same-field Scalar, or (for the
        Gaussian field) a (re, im) pair of any of those."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatchError(
                    f"scalar of {value.field} given to {self}")
            return value.payload
        if isinstance(value, int):
            return self.k_from_int(value)
        if isinstance(value, (Fraction, type(_MPQ0))):
            if self.code == RATIONAL:
                return mpq(value)
            if self.code == GAUSSIAN:
                return (mpq(value), _MPQ0)
            q = mpq(value)
            den_inv = pow(int(q.denominator), -1, self.modulus)
            return int(q.numerator) * den_inv % self.modulus
        if self.code == GAUSSIAN and isinstance(value, tuple) and len(value) == 2:
            return (mpq(value[0]), mpq(value[1]))
        raise FieldMismatchError(f"cannot coerce {value!r} into {self}")

    def scalar(self, value) -> "Scalar":
        return Scalar(self, self.coerce_payload(value))

    def random_scalar(self, rng, bound=9) -> "Scalar":
        return Scalar(self, self.k_random(rng, bound))


def _gaussian_inv(a):
    norm = a[0] * a[0] + a[1] * a[1]
    return (a[0] / norm, -a[1] / norm)


def _modular_inv(p):
    def inv(a):
        if a % p == 0:
            raise ZeroDivisionError(f"inverse of 0 in F_{p}")
        return pow(a, -1, p)
    return inv


def _modular_div(p):
    def div(a, b):
        if b % p == 0:
            raise ZeroDivisionError(f"division by 0 in F_{p}")
        return a * pow(b, -1, p) % p
    return div


class Scalar:
    """Immutable field element in canonical form.

    Arithmetic works between scalars of the same field and with plain
    ints (coerced).  Equality is structural and never mixes fields.
    """

    __slots__ = ("field", "payload")

    def __init__(self, field: FieldDescriptor, payload):
        self.field = field
        self.payload = payload

    def _rhs(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatchError(
                    f"mixing {self.field} and {other.field} scalars")
            return other.payload
        if isinstance(other, int):
            return self.field.k_from_int(other)
        return None

    def __add__(self, other):
        p = self._rhs(other)
        if p is None:
            return NotImplemented
        return Scalar(self.field, self.field.k_add(self.payload, p))

    __radd__ = __add__

    def __sub__(self, other):
        p = self._rhs(other)
        if p is None:
            return NotImplemented
        return Scalar(self.field, self.field.k_sub(self.payload, p))

    def __rsub__(self, other):
        p = self._rhs(other)
        if p is None:
            return NotImplemented
        return Scalar(self.field, self.field.k_sub(p, self.payload))

    def __mul__(self, other):
        p = self._rhs(other)
        if p is None:
            return NotImplemented
        return Scalar(self.field, self.field.k_mul(self.payload, p))

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._rhs(other)
        if p is None:
            return NotImplemented
        return Scalar(self.field, self.field.k_div(self.payload, p))

    def __rtruediv__(self, other):
        p = self._rhs(other)
        if p is None:
            return NotImplemented
        return Scalar(self.field, self.field.k_div(p, self.payload))

    def __neg__(self):
        return Scalar(self.field, self.field.k_neg(self.payload))

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        f = self.field
        if k < 0:
            return Scalar(f, _payload_pow(f, f.k_inv(self.payload), -k))
        return Scalar(f, _payload_pow(f, self.payload, k))

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.k_inv(self.payload))

    def conjugate(self) -> "Scalar":
        return Scalar(self.field, self.field.k_conj(self.payload))

    @property
    def is_zero(self) -> bool:
        return self.field.k_is0(self.payload)

    def __bool__(self):
        return not self.field.k_is0(self.payload)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.payload == other.payload
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.payload))

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"{format_scalar(self)}:{self.field.tag}"


def _payload_pow(f, p, k):
    acc = f.p_one
    while k:
        if k & 1:
            acc = f.k_mul(acc, p)
        p = f.k_mul(p, p)
        k >>= 1
    return acc


QQ = FieldDescriptor(RATIONAL)
QI = FieldDescriptor(GAUSSIAN)

_PRIME_FIELDS: dict = {}


def prime_field(p: int) -> FieldDescriptor:
    """F_p for an odd prime p.  p = 2 is rejected because the
    normalized Jordan product needs 1/2."""
    f = _PRIME_FIELDS.get(p)
    if f is None:
        if not isinstance(p, int) or p < 3 or not is_prime(p):
            raise PreconditionError(f"modulus must be an odd prime, got {p}")
        f = _PRIME_FIELDS[p] = FieldDescriptor(MODULAR, p)
    return f


def parse_field_tag(tag: str) -> FieldDescriptor:
    if tag == "Q":
        return QQ
    if tag == "Qi":
        return QI
    if tag.startswith("F") and tag[1:].isdigit():
        try:
            return prime_field(int(tag[1:]))
        except PreconditionError as e:
            raise ParseError(str(e)) from None
    raise ParseError(f"unknown field tag {tag!r} (expected Q, Qi or F<p>)")


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Functional dispatch: op is one of add, sub, mul, div."""
    try:
        fn = {"add": operator.add, "sub": operator.sub,
              "mul": operator.mul, "div": operator.truediv}[op]
    except KeyError:
        raise ValueError(f"unknown op {op!r}") from None
    return fn(a, b)


# Text grammar.  Rational: '-3/4'.  Gaussian: '1/2+2/3i', '1-2i', '-1i'
# (pure imaginary keeps its own sign), plain rational when im = 0.
# Modular: the reduced decimal residue.  Round-trips bit-exactly.

_RATIONAL_RE = _re.compile(r"^-?\d+(/\d+)?$")


def _format_q(q) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(s: Scalar) -> str:
    f = s.field
    if f.code == RATIONAL:
        return _format_q(s.payload)
    if f.code == MODULAR:
        return str(s.payload)
    re_, im = s.payload
    if not im:
        return _format_q(re_)
    if not re_:
        return _format_q(im) + "i"
    sign = "+" if im > 0 else "-"
    return f"{_format_q(re_)}{sign}{_format_q(abs(im))}i"


def _parse_q(text: str):
    if not _RATIONAL_RE.match(text):
        raise ParseError(f"bad rational {text!r}")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return mpq(int(num), int(den))
    return mpq(int(text))


def parse_scalar(text: str, field: FieldDescriptor) -> Scalar:
    text = text.strip()
    if not text:
        raise ParseError("empty scalar")
    f = field
    if f.code == RATIONAL:
        return Scalar(f, _parse_q(text))
    if f.code == MODULAR:
        if not text.isdigit():
            raise ParseError(f"bad residue {text!r} for {f.tag}")
        v = int(text)
        if v >= f.modulus:
            raise ParseError(f"residue {v} out of range for {f.tag}")
        return Scalar(f, v)
    if text.endswith("i"):
        body = text[:-1]
        split = None
        for k in range(1, len(body)):
            if body[k] in "+-" and body[k - 1].isdigit():
                split = k
        if split is None:
            re_text, im_text = "0", body
        else:
            re_text, im_text = body[:split], body[split:]
            if im_text[0] == "+":
                im_text = im_text[1:]
        if not im_text:
            raise ParseError(f"bad gaussian scalar {text!r}")
        return Scalar(f, (_parse_q(re_text), _parse_q(im_text)))
    return Scalar(f, (_parse_q(text), _MPQ0))


class ScalarMap:
    """A multiplicative injective self-map of a field: identity,
    complex conjugation on Q(i), or the cube map x -> x^3.  The first
    two are ring endomorphisms; the cube map is multiplicative but not
    additive, which is exactly what makes it counterexample material.
    """

    __slots__ = ("name", "field", "is_ring_endomorphism", "is_additive",
                 "payload_apply")

    def __init__(self, name, field, is_ring_endomorphism, payload_apply):
        self.name = name
        self.field = field
        self.is_ring_endomorphism = is_ring_endomorphism
        self.is_additive = is_ring_endomorphism
        self.payload_apply = payload_apply

    def __call__(self, a: Scalar) -> Scalar:
        if a.field != self.field:
            raise FieldMismatchError(
                f"{self.name} on {self.field} applied to {a.field} scalar")
        return Scalar(self.field, self.payload_apply(a.payload))

    @property
    def code(self) -> str:
        return {"Identity": "id", "Conjugation": "conj", "Cube": "cube"}[self.name]

    def __eq__(self, other):
        return (isinstance(other, ScalarMap)
                and self.name == other.name and self.field == other.field)

    def __hash__(self):
        return hash((self.name, self.field))

    def __repr__(self):
        return f"ScalarMap({self.name}, {self.field.tag})"


def identity_map(field: FieldDescriptor) -> ScalarMap:
    return ScalarMap("Identity", field, True, lambda a: a)


def conjugation_map(field: FieldDescriptor) -> ScalarMap:
    if field.code != GAUSSIAN:
        raise FieldMismatchError("conjugation needs the Gaussian rationals")
    return ScalarMap("Conjugation", field, True, field.k_conj)


def cube_map(field: FieldDescriptor) -> ScalarMap:
    mul = field.k_mul
    return ScalarMap("Cube", field, False, lambda a: mul(mul(a, a), a))


def scalar_map_from_code(code: str, field: FieldDescriptor) -> ScalarMap:
    if code == "id":
        return identity_map(field)
    if code == "conj":
        return conjugation_map(field)
    if code == "cube":
        return cube_map(field)
    raise ParseError(f"unknown scalar map code {code!r}")


def scalar_map_catalog(field: FieldDescriptor, include_cube=False):
    """Candidate maps a sampled omega is matched against.  Certified
    (multi-element) classes admit only ring endomorphisms; singleton
    classes are additionally matched against the cube map.  Every
    catalog entry is injective, so cube is withheld on F_p with
    p = 1 mod 3, where cubing is 3-to-1 on nonzero elements."""
    maps = [identity_map(field)]
    if field.code == GAUSSIAN:
        maps.append(conjugation_map(field))
    if include_cube and (field.characteristic == 0
                         or field.characteristic % 3 != 1):
        maps.append(cube_map(field))
    return maps


def apply_scalar_map(m: ScalarMap, a: Scalar) -> Scalar:
    return m(a)


def entrywise_map(m: ScalarMap, X):
    """Apply m to every entry of a matrix.  Support is preserved since
    every catalog map is injective and fixes 0."""
    if X.field != m.field:
        raise FieldMismatchError(
            f"matrix over {X.field} given to {m.name} on {m.field}")
    return X.map_payloads(m.payload_apply)
