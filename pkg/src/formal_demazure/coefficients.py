"""Exact coefficient ring: rationals, or polynomials over Q in declared parameters.

Values are backed by FLINT multivariate rational polynomials.  A ring is
identified by its tuple of parameter names; coefficients from different
rings never mix.
"""
from __future__ import annotations

from fractions import Fraction

import flint
from flint.utils.flint_exceptions import DomainError


class CoefficientError(ValueError):
    pass


class NonExactDivision(CoefficientError):
    def __init__(self, msg, remainder=None):
        super().__init__(msg)
        self.remainder = remainder


def _fmpq(x):
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    if isinstance(x, str):
        x = Fraction(x)
        return flint.fmpq(x.numerator, x.denominator)
    return flint.fmpq(x)


class CoefficientRing:
    """Q[p_1, ..., p_k] for the declared parameter names (k may be 0)."""

    _cache: dict = {}

    def __new__(cls, params=()):
        params = tuple(params)
        ring = cls._cache.get(params)
        if ring is None:
            ring = super().__new__(cls)
            ring.params = params
            ring.ctx = flint.fmpq_mpoly_ctx.get(params, "lex")
            cls._cache[params] = ring
        return ring

    def __repr__(self):
        return f"CoefficientRing({self.params!r})"

    def __call__(self, value) -> Coefficient:
        if isinstance(value, Coefficient):
            self._check(value)
            return value
        if isinstance(value, flint.fmpq_mpoly):
            return Coefficient(self, value)
        return Coefficient(self, self.ctx.from_dict({(0,) * len(self.params): _fmpq(value)}))

    def param(self, name) -> Coefficient:
        return Coefficient(self, self.ctx.gens()[self.params.index(name)])

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def _check(self, c):
        if c.ring is not self:
            raise CoefficientError(
                f"parameter-set mismatch: {c.ring.params} vs {self.params}")

    def from_json(self, data) -> Coefficient:
        if isinstance(data, (str, int)):
            return self(data)
        terms = {}
        for exps, val in data:
            if len(exps) != len(self.params):
                raise CoefficientError(f"exponent tuple {exps} does not match {self.params}")
            terms[tuple(exps)] = _fmpq(val)
        return Coefficient(self, self.ctx.from_dict(terms))


class Coefficient:
    """Immutable element of a CoefficientRing; FLINT keeps it in normal form."""

    __slots__ = ("ring", "value")

    def __init__(self, ring, value):
        self.ring = ring
        self.value = value

    def _other(self, other):
        if isinstance(other, Coefficient):
            self.ring._check(other)
            return other.value
        return self.ring(other).value

    def __add__(self, other):
        return Coefficient(self.ring, self.value + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Coefficient(self.ring, self.value - self._other(other))

    def __rsub__(self, other):
        return Coefficient(self.ring, self._other(other) - self.value)

    def __mul__(self, other):
        return Coefficient(self.ring, self.value * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return Coefficient(self.ring, -self.value)

    def __pow__(self, k):
        return Coefficient(self.ring, self.value ** k)

    def __eq__(self, other):
        try:
            return self.value == self._other(other)
        except (CoefficientError, TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.value.to_dict().items(), key=str)))

    def is_zero(self):
        return self.value.is_zero()

    def is_rational(self):
        return self.value.is_constant()

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise CoefficientError(f"{self} is not a rational constant")
        if self.value.is_zero():
            return Fraction(0)
        q = self.value.coefficient(0)
        return Fraction(int(q.p), int(q.q))

    def exact_div(self, other) -> Coefficient:
        b = self._other(other)
        if b.is_zero():
            raise ZeroDivisionError("division by the zero coefficient")
        try:
            return Coefficient(self.ring, self.value / b)
        except DomainError:
            _, rem = divmod(self.value, b)
            raise NonExactDivision(f"{self} is not divisible by {Coefficient(self.ring, b)}",
                                   remainder=Coefficient(self.ring, rem)) from None

    def to_json(self):
        if self.is_rational():
            return str(self.value.coefficient(0)) if not self.value.is_zero() else "0"
        return [[[int(v) for v in e], str(c)] for e, c in sorted(self.value.to_dict().items())]

    def __repr__(self):
        return str(self.value) if not self.value.is_zero() else "0"


def coeff_arith(a: Coefficient, b: Coefficient, op: str) -> Coefficient:
    a.ring._check(b)
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown op {op!r}")


def coeff_exact_div(a: Coefficient, b: Coefficient) -> Coefficient:
    return a.exact_div(b)
