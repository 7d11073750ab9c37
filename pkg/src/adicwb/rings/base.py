"""Exact base rings: integers, prime fields, rationals, polynomial rings, quotients.

Ring objects are immutable value types; elements are plain Python values
(``int``, ``Fraction``) except for polynomial rings, whose elements are
:class:`Poly` instances carrying their ring.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Dict, Iterable, Tuple

Exp = Tuple[int, ...]


class RingError(ValueError):
    """Raised on ring mismatches or operations a ring does not support."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    for d in range(3, math.isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


class Ring:
    """Common interface.  Generic code only calls these methods."""

    kind = "abstract"
    is_field = False
    nvars = 0

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a) -> bool:
        return a == 0

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def __call__(self, x):
        return self.coerce(x)

    def coerce(self, x):
        raise NotImplementedError

    def fmt(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        return parse_element(self, text)

    def power(self, a, n: int):
        r = self.one()
        for _ in range(n):
            r = self.mul(r, a)
        return r


# ---------------------------------------------------------------- scalars


@dataclass(frozen=True)
class IntegerRing(Ring):
    kind = "ZZ"

    def zero(self):
        return 0

    def one(self):
        return 1

    def is_unit(self, a):
        return a in (1, -1)

    def from_int(self, n):
        return int(n)

    def coerce(self, x):
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        raise RingError(f"cannot coerce {x!r} into ZZ")

    def __str__(self):
        return "ZZ"


@dataclass(frozen=True)
class RationalField(Ring):
    kind = "QQ"
    is_field = True

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in QQ")
        return 1 / Fraction(a)

    def from_int(self, n):
        return Fraction(n)

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise RingError(f"cannot coerce {x!r} into QQ")

    def fmt(self, a):
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def __str__(self):
        return "QQ"


@dataclass(frozen=True)
class PrimeField(Ring):
    p: int
    kind = "GF"
    is_field = True

    def __post_init__(self):
        if not is_prime(self.p):
            raise RingError(f"GF({self.p}): modulus is not prime")

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def is_unit(self, a):
        return a % self.p != 0

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"inverse of 0 in GF({self.p})")
        return pow(a, -1, self.p)

    def from_int(self, n):
        return int(n) % self.p

    def coerce(self, x):
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        raise RingError(f"cannot coerce {x!r} into GF({self.p})")

    def __str__(self):
        return f"GF({self.p})"


ZZ = IntegerRing()
QQ = RationalField()


# ------------------------------------------------------------ polynomials


def _grevlex_key(e: Exp):
    return (sum(e), tuple(-x for x in reversed(e)))


def _lex_key(e: Exp):
    return e


MONOMIAL_ORDERS: Dict[str, Callable[[Exp], Any]] = {
    "grevlex": _grevlex_key,
    "lex": _lex_key,
}


class Poly:
    """Immutable polynomial: a mapping exponent-tuple -> nonzero coefficient."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: "PolyRing | QuotientRing", terms: Dict[Exp, Any]):
        self.ring = ring
        self.terms = terms
        self._hash = None

    def _wrap(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        return self.ring.coerce(other)

    def __add__(self, other):
        return self.ring.add(self, self._wrap(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.ring.sub(self, self._wrap(other))

    def __rsub__(self, other):
        return self.ring.sub(self._wrap(other), self)

    def __mul__(self, other):
        return self.ring.mul(self, self._wrap(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self.ring.neg(self)

    def __pow__(self, n: int):
        return self.ring.power(self, n)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            try:
                return self == self.ring.coerce(other)
            except RingError:
                return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Poly({self.ring.fmt(self)})"

    def __str__(self):
        return self.ring.fmt(self)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)


def poly_add(F, a: Dict, b: Dict) -> Dict:
    out = dict(a)
    for e, c in b.items():
        s = F.add(out.get(e, F.zero()), c)
        if F.is_zero(s):
            out.pop(e, None)
        else:
            out[e] = s
    return out


def poly_mul(F, a: Dict, b: Dict) -> Dict:
    out: Dict[Exp, Any] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            s = F.add(out.get(e, F.zero()), F.mul(ca, cb))
            if F.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
    return out


@dataclass(frozen=True)
class PolyRing(Ring):
    """Polynomial ring over QQ or a prime field."""

    field: Ring
    names: Tuple[str, ...]
    order: str = "grevlex"
    kind = "poly"

    def __post_init__(self):
        if not self.field.is_field:
            raise RingError("polynomial coefficients must lie in a field")
        if not self.names:
            raise RingError("polynomial ring needs at least one variable")
        if len(set(self.names)) != len(self.names):
            raise RingError(f"repeated variable names {self.names}")
        if self.order not in MONOMIAL_ORDERS:
            raise RingError(f"unknown monomial order {self.order!r}")

    @property
    def nvars(self):
        return len(self.names)

    @property
    def base(self) -> "PolyRing":
        return self

    @cached_property
    def mono_key(self):
        return MONOMIAL_ORDERS[self.order]

    @cached_property
    def _zero_exp(self):
        return (0,) * len(self.names)

    def make(self, terms: Dict[Exp, Any]) -> Poly:
        return Poly(self, terms)

    def zero(self):
        return Poly(self, {})

    def one(self):
        return Poly(self, {self._zero_exp: self.field.one()})

    def gens(self):
        out = []
        for i in range(self.nvars):
            e = [0] * self.nvars
            e[i] = 1
            out.append(Poly(self, {tuple(e): self.field.one()}))
        return out

    def var(self, name: str) -> Poly:
        return self.gens()[self.names.index(name)]

    def const(self, c) -> Poly:
        c = self.field.coerce(c)
        return Poly(self, {self._zero_exp: c}) if not self.field.is_zero(c) else self.zero()

    def from_int(self, n):
        return self.const(n)

    def coerce(self, x):
        if isinstance(x, Poly):
            if x.ring == self:
                return x
            raise RingError(f"cannot coerce element of {x.ring} into {self}")
        if isinstance(x, (int, Fraction)):
            return self.const(x)
        raise RingError(f"cannot coerce {x!r} into {self}")

    def add(self, a, b):
        return Poly(self, poly_add(self.field, a.terms, b.terms))

    def neg(self, a):
        F = self.field
        return Poly(self, {e: F.neg(c) for e, c in a.terms.items()})

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        return Poly(self, poly_mul(self.field, a.terms, b.terms))

    def is_zero(self, a):
        return not a.terms

    def is_unit(self, a):
        return len(a.terms) == 1 and self._zero_exp in a.terms

    def leading_exp(self, a: Poly) -> Exp:
        return max(a.terms, key=self.mono_key)

    def fmt(self, a) -> str:
        if not a.terms:
            return "0"
        out = []
        for e in sorted(a.terms, key=self.mono_key, reverse=True):
            c = a.terms[e]
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.names, e) if k
            )
            cs = self.field.fmt(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            if mono:
                body = mono if cs == "1" else f"{cs}*{mono}"
            else:
                body = cs
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __str__(self):
        return f"{self.field}[{','.join(self.names)}]"


# --------------------------------------------------------------- quotients


@dataclass(frozen=True)
class QuotientRing(Ring):
    """``base / (relations)`` where ``base`` is ZZ or a PolyRing.

    For ZZ the defining ideal is kept as its nonnegative generator; for a
    polynomial ring as a reduced Groebner basis, so elements are canonical.
    """

    base: Ring
    relations: Tuple[Any, ...]
    kind = "quotient"

    def __post_init__(self):
        if isinstance(self.base, IntegerRing):
            g = 0
            for r in self.relations:
                g = math.gcd(g, int(r))
            object.__setattr__(self, "relations", (g,))
        elif isinstance(self.base, PolyRing):
            from .groebner import groebner_basis

            gb = groebner_basis([self.base.coerce(r) for r in self.relations])
            object.__setattr__(self, "relations", tuple(gb))
        else:
            raise RingError("quotients are supported over ZZ and polynomial rings")

    @property
    def modulus(self) -> int:
        return self.relations[0]

    @property
    def nvars(self):
        return self.base.nvars

    @property
    def names(self):
        return self.base.names

    @property
    def field(self):
        return getattr(self.base, "field", None)

    @property
    def is_field(self):
        return isinstance(self.base, IntegerRing) and is_prime(self.modulus)

    def reduce(self, a):
        """Canonical representative of a base-ring element."""
        if isinstance(self.base, IntegerRing):
            n = self.modulus
            return a % n if n else a
        from .groebner import normal_form_raw

        return Poly(self, normal_form_raw(self.base, a.terms, self.relations))

    def lift(self, a):
        """The canonical representative as an element of the base ring."""
        if isinstance(self.base, IntegerRing):
            return a
        return Poly(self.base, a.terms)

    def zero(self):
        return 0 if isinstance(self.base, IntegerRing) else Poly(self, {})

    def one(self):
        return self.reduce(self.base.one())

    def from_int(self, n):
        return self.reduce(self.base.from_int(n))

    def coerce(self, x):
        if isinstance(x, Poly):
            if x.ring == self:
                return x
            if x.ring == self.base:
                return self.reduce(x)
            raise RingError(f"cannot coerce element of {x.ring} into {self}")
        if isinstance(x, (int, Fraction)):
            return self.reduce(self.base.coerce(x))
        raise RingError(f"cannot coerce {x!r} into {self}")

    def _b(self, a):
        return self.lift(a) if isinstance(a, Poly) else a

    def add(self, a, b):
        return self.reduce(self.base.add(self._b(a), self._b(b)))

    def sub(self, a, b):
        return self.reduce(self.base.sub(self._b(a), self._b(b)))

    def mul(self, a, b):
        return self.reduce(self.base.mul(self._b(a), self._b(b)))

    def neg(self, a):
        return self.reduce(self.base.neg(self._b(a)))

    def is_zero(self, a):
        return (a == 0) if isinstance(self.base, IntegerRing) else not a.terms

    def is_unit(self, a):
        if isinstance(self.base, IntegerRing):
            return math.gcd(a, self.modulus) == 1
        from .groebner import groebner_basis

        gb = groebner_basis(list(self.relations) + [self.lift(a)])
        return len(gb) == 1 and self.base.is_unit(gb[0])

    def fmt(self, a):
        if isinstance(self.base, IntegerRing):
            return str(a)
        return self.base.fmt(a)

    def __str__(self):
        rels = ", ".join(self.base.fmt(r) for r in self.relations)
        return f"{self.base}/({rels})"


# ----------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise RingError(f"bad character in {text!r} at offset {pos}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


def parse_element(ring: Ring, text: str):
    """Parse an infix expression (``+ - * / ^``, parentheses) into ``ring``.

    Division is only allowed by integer constants and is carried out over QQ
    before coercion, so ``x/2`` works in QQ[x] and GF(p)[x].
    """
    toks = _tokenize(text)
    if not toks:
        raise RingError("empty expression")
    pos = 0
    names = tuple(getattr(ring, "names", ()) or ())

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take():
        nonlocal pos
        t = toks[pos]
        pos += 1
        return t

    # values are either Fraction constants or ring elements
    def as_ring(v):
        return ring.coerce(v) if isinstance(v, (int, Fraction)) else v

    def combine(op, a, b):
        if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
            return {"+": a + b, "-": a - b, "*": a * b}[op]
        a, b = as_ring(a), as_ring(b)
        return {"+": ring.add, "-": ring.sub, "*": ring.mul}[op](a, b)

    def expr():
        kind, val = peek()
        sign = 1
        if kind == "op" and val in "+-":
            take()
            sign = -1 if val == "-" else 1
        v = term()
        if sign < 0:
            v = -v if isinstance(v, (int, Fraction)) else ring.neg(v)
        while True:
            kind, val = peek()
            if kind == "op" and val in "+-":
                take()
                v = combine(val, v, term())
            else:
                return v

    def term():
        v = power()
        while True:
            kind, val = peek()
            if kind == "op" and val == "*":
                take()
                v = combine("*", v, power())
            elif kind == "op" and val == "/":
                take()
                d = power()
                if not isinstance(d, (int, Fraction)) or d == 0:
                    raise RingError("division only by nonzero integer constants")
                if isinstance(v, (int, Fraction)):
                    v = Fraction(v) / d
                else:
                    v = ring.mul(v, ring.coerce(1 / Fraction(d)))
            elif kind in ("name", "num") or (kind == "op" and val == "("):
                v = combine("*", v, power())  # implicit multiplication
            else:
                return v

    def power():
        v = atom()
        kind, val = peek()
        if kind == "op" and val == "^":
            take()
            k, n = take()
            if k != "num":
                raise RingError("exponent must be a nonnegative integer")
            if isinstance(v, (int, Fraction)):
                return Fraction(v) ** n
            return ring.power(v, n)
        return v

    def atom():
        kind, val = take() if pos < len(toks) else (None, None)
        if kind == "num":
            return Fraction(val)
        if kind == "name":
            if val not in names:
                raise RingError(f"unknown variable {val!r} in {ring}")
            base = ring.base if isinstance(ring, QuotientRing) else ring
            return ring.coerce(base.var(val))
        if kind == "op" and val == "(":
            v = expr()
            k, x = take() if pos < len(toks) else (None, None)
            if (k, x) != ("op", ")"):
                raise RingError("unbalanced parentheses")
            return v
        raise RingError(f"unexpected token {val!r} in {text!r}")

    v = expr()
    if pos != len(toks):
        raise RingError(f"trailing input in {text!r}")
    if isinstance(v, Fraction):
        if isinstance(ring, IntegerRing) or (
            isinstance(ring, QuotientRing) and isinstance(ring.base, IntegerRing)
        ):
            if v.denominator != 1:
                raise RingError(f"{text!r} is not an integer")
            v = v.numerator
        return ring.coerce(v)
    return v


def base_field(ring: Ring) -> Ring | None:
    """Coefficient field for polynomial-type rings, the ring itself for fields."""
    if isinstance(ring, PolyRing):
        return ring.field
    if isinstance(ring, QuotientRing):
        return ring.field if isinstance(ring.base, PolyRing) else None
    return ring if ring.is_field else None


def elements_equal(ring: Ring, a, b) -> bool:
    return ring.is_zero(ring.sub(a, b))


def iter_ring_values(ring: Ring, values: Iterable[Any]):
    return [ring.coerce(v) for v in values]
