"""Fixed-precision p-adic numbers.

A nonzero value is ``p**valuation * unit`` with ``unit`` a p-adic unit known
modulo ``p**precision``; ``precision`` is the number of guaranteed digits
beyond the leading one's position. Zero is represented as "zero modulo
``p**valuation``", i.e. ``unit == 0`` and ``precision == 0``, so its absolute
precision is its valuation field.

Precision propagation:

* ``x + y``: absolute precision ``min(abs(x), abs(y))``; cancellation of
  leading digits shrinks the relative precision accordingly.
* ``x * y``: relative precision ``min(prec(x), prec(y))``.
* ``1 / x``: same relative precision as ``x``.

Comparisons only look at digits guaranteed on both sides.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .errors import DomainError, FieldMismatchError, ParseError, UsageError
from .scalars import Field

DEFAULT_PRECISION = 32


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _split_valuation(n: int, p: int) -> tuple[int, int]:
    """Return ``(v, u)`` with ``n == p**v * u`` and ``p`` not dividing ``u``."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


class PAdic:
    __slots__ = ("prime", "valuation", "unit", "precision")

    def __init__(self, prime: int, valuation: int, unit: int, precision: int):
        if unit != 0:
            if precision < 1:
                raise UsageError("a nonzero p-adic needs at least one digit")
            absprec = valuation + precision
            unit %= prime**precision
            if unit == 0:
                valuation = absprec
            else:
                extra, unit = _split_valuation(unit, prime)
                valuation += extra
                precision -= extra
        if unit == 0:
            precision = 0
        self.prime = prime
        self.valuation = valuation
        self.unit = unit
        self.precision = precision

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, prime: int, absolute_precision: int) -> "PAdic":
        return cls(prime, absolute_precision, 0, 0)

    @classmethod
    def from_rational(cls, prime: int, q, precision: int) -> "PAdic":
        """Expand ``q`` with ``precision`` relative digits (exact zero gets
        absolute precision ``precision``)."""
        q = Fraction(q)
        if q == 0:
            return cls.zero(prime, precision)
        vn, un = _split_valuation(q.numerator, prime)
        vd, ud = _split_valuation(q.denominator, prime)
        mod = prime**precision
        unit = un * pow(ud, -1, mod) % mod
        return cls(prime, vn - vd, unit, precision)

    # -- inspection ---------------------------------------------------------

    @property
    def absolute_precision(self) -> int:
        """Exponent ``k`` such that the value is known modulo ``p**k``."""
        return self.valuation + self.precision

    def is_zero(self) -> bool:
        return self.unit == 0

    def digits(self) -> list[int]:
        """Guaranteed unit digits, least significant first."""
        out = []
        u = self.unit
        for _ in range(self.precision):
            out.append(u % self.prime)
            u //= self.prime
        return out

    def digit(self, k: int) -> int:
        """Coefficient of ``p**k`` in the expansion; must be a guaranteed digit."""
        if k >= self.absolute_precision:
            raise DomainError(f"digit {k} is beyond the known precision")
        if self.is_zero() or k < self.valuation:
            return 0
        return (self.unit // self.prime ** (k - self.valuation)) % self.prime

    def norm(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.prime) ** (-self.valuation)

    def to_fraction(self) -> Fraction:
        """The represented value with all unknown digits taken as 0."""
        return Fraction(self.prime) ** self.valuation * self.unit

    # -- arithmetic ---------------------------------------------------------

    def _lift(self, other) -> "PAdic":
        if isinstance(other, PAdic):
            if other.prime != self.prime:
                raise FieldMismatchError(
                    f"mixed primes {self.prime} and {other.prime}")
            return other
        if isinstance(other, bool):
            other = int(other)
        if isinstance(other, (int, Rational)):
            q = Fraction(other)
            if q == 0:
                return PAdic.zero(self.prime, max(self.absolute_precision, 0) + 1)
            vq = _split_valuation(q.numerator, self.prime)[0] - \
                _split_valuation(q.denominator, self.prime)[0]
            prec = max(self.precision, self.absolute_precision - vq, 1)
            return PAdic.from_rational(self.prime, q, prec)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.prime
        absprec = min(self.absolute_precision, other.absolute_precision)
        vmin = min(self.valuation, other.valuation)
        s = self.unit * p ** (self.valuation - vmin) + other.unit * p ** (other.valuation - vmin)
        width = absprec - vmin
        if width <= 0:
            return PAdic.zero(p, absprec)
        s %= p**width
        if s == 0:
            return PAdic.zero(p, absprec)
        e, u = _split_valuation(s, p)
        return PAdic(p, vmin + e, u, width - e)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return PAdic(self.prime, self.valuation, (-self.unit) % self.prime**self.precision,
                     self.precision)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.prime
        if self.is_zero() or other.is_zero():
            if self.is_zero() and other.is_zero():
                return PAdic.zero(p, self.valuation + other.valuation)
            z, x = (self, other) if self.is_zero() else (other, self)
            return PAdic.zero(p, z.valuation + x.valuation)
        prec = min(self.precision, other.precision)
        return PAdic(p, self.valuation + other.valuation,
                     self.unit * other.unit % p**prec, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PAdic":
        if self.is_zero():
            raise DomainError("p-adic inversion of zero")
        mod = self.prime**self.precision
        return PAdic(self.prime, -self.valuation, pow(self.unit, -1, mod), self.precision)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = PAdic.from_rational(self.prime, 1, max(self.precision, 1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        try:
            other = self._lift(other)
        except FieldMismatchError:
            return False
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __abs__(self):
        return self.norm()

    def __repr__(self):
        return f"PAdic({format_literal(self)!r})"

    def __str__(self):
        if self.is_zero():
            return f"O({self.prime}^{self.valuation})"
        terms = [f"{d}*{self.prime}^{self.valuation + i}"
                 for i, d in enumerate(self.digits()) if d]
        return " + ".join(terms) + f" + O({self.prime}^{self.absolute_precision})"


def check_same_prime(*xs: PAdic) -> int:
    primes = {x.prime for x in xs}
    if len(primes) != 1:
        raise FieldMismatchError(f"mixed primes {sorted(primes)}")
    return primes.pop()


def padic_add(x: PAdic, y: PAdic) -> PAdic:
    check_same_prime(x, y)
    return x + y


def padic_mul(x: PAdic, y: PAdic) -> PAdic:
    check_same_prime(x, y)
    return x * y


def padic_inv(x: PAdic) -> PAdic:
    return x.inverse()


def padic_from_digits(p: int, pairs, precision: int = DEFAULT_PRECISION) -> PAdic:
    """Build ``sum(digit * p**exponent)`` from ``(exponent, digit)`` pairs."""
    seen = set()
    total = Fraction(0)
    for exponent, digit in pairs:
        if exponent in seen:
            raise UsageError(f"repeated exponent {exponent}")
        seen.add(exponent)
        if not 0 <= digit < p:
            raise UsageError(f"digit {digit} out of range for p={p}")
        total += digit * Fraction(p) ** exponent
    return PAdic.from_rational(p, total, precision)


def format_literal(x: PAdic) -> str:
    """Serialize as ``"p:v:d0,d1,..."`` (unit digits, least significant first)."""
    return f"{x.prime}:{x.valuation}:" + ",".join(str(d) for d in x.digits())


def parse_literal(text: str) -> PAdic:
    try:
        p_s, v_s, d_s = text.strip().split(":")
        p, v = int(p_s), int(v_s)
        digits = [int(d) for d in d_s.split(",")] if d_s.strip() else []
    except ValueError as exc:
        raise ParseError(f"bad p-adic literal {text!r}") from exc
    if not _is_prime(p):
        raise ParseError(f"{p} is not prime")
    if any(not 0 <= d < p for d in digits):
        raise ParseError(f"digit out of range in {text!r}")
    if digits and digits[0] == 0:
        raise ParseError(f"leading unit digit must be nonzero in {text!r}")
    unit = sum(d * p**i for i, d in enumerate(digits))
    return PAdic(p, v, unit, len(digits))


class PadicField(Field):
    """Q_p with ``precision`` relative digits for freshly created values."""

    exact = True
    archimedean = False

    def __init__(self, prime: int, precision: int = DEFAULT_PRECISION):
        if not _is_prime(prime):
            raise UsageError(f"{prime} is not prime")
        if precision < 1:
            raise UsageError("precision must be positive")
        self.prime = prime
        self.precision = precision

    @property
    def name(self):
        return f"padic:{self.prime}"

    def from_int(self, n):
        return PAdic.from_rational(self.prime, n, self.precision)

    def from_fraction(self, q):
        return PAdic.from_rational(self.prime, q, self.precision)

    def _coerce_other(self, x):
        if isinstance(x, PAdic):
            if x.prime != self.prime:
                raise FieldMismatchError(f"mixed primes {x.prime} and {self.prime}")
            return x
        return super()._coerce_other(x)

    def parse(self, text):
        text = text.strip()
        if text.count(":") == 2:
            return self._coerce_other(parse_literal(text))
        try:
            return self.from_fraction(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad p-adic value {text!r}") from exc

    def format(self, x):
        return format_literal(x)

    def norm(self, x):
        return self.coerce(x).norm()

    def eq(self, a, b, atol=None, rtol=None):
        return self.coerce(a) == self.coerce(b)

    def power(self, a: int) -> PAdic:
        """``p**a`` with unit digit 1."""
        return PAdic(self.prime, a, 1, self.precision)

    def __repr__(self):
        return f"PadicField({self.prime}, precision={self.precision})"
