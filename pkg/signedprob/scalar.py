"""
Scalar module for the signed probability toolkit.

This module provides exact arithmetic in the ordered field Q(sqrt2).
Every probability handled by the toolkit is a Scalar a + b*sqrt2 with
rational a and b, so all comparisons and equalities are exact.
"""

import logging
import re
from fractions import Fraction
from functools import total_ordering
from typing import Union

from typing_extensions import Self, TypeAlias

from signedprob.errors import ScalarDivisionError, ScalarParseError

logger = logging.getLogger(__name__)

# Rational coefficients use the standard arbitrary precision fraction type.
Rational: TypeAlias = Fraction
ScalarLike: TypeAlias = Union["Scalar", Fraction, int]

SQRT2_FLOAT = 1.4142135623730951


def _sign_of(value: Fraction) -> int:
    return (value > 0) - (value < 0)


@total_ordering
class Scalar:
    """
    Exact element a + b*sqrt2 of Q(sqrt2).

    Both coefficients are stored as canonical fractions, so two Scalars are
    equal exactly when their coefficients are equal.
    """

    __slots__ = ("rat", "root2")

    def __init__(self, rat: Union[Fraction, int, str] = 0, root2: Union[Fraction, int, str] = 0):
        object.__setattr__(self, "rat", Fraction(rat))
        object.__setattr__(self, "root2", Fraction(root2))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def of(cls, value: ScalarLike) -> Self:
        """
        Coerce an int, Fraction or Scalar to a Scalar.

        Args:
            value: The value to coerce

        Returns:
            Scalar equal to value

        Raises:
            TypeError: If value is not a supported number type
        """
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return cls(value, 0)
        raise TypeError(f"cannot use {type(value).__name__} as a Q(sqrt2) scalar")

    # --- arithmetic -----------------------------------------------------

    def __add__(self, other: ScalarLike) -> "Scalar":
        try:
            other = Scalar.of(other)
        except TypeError:
            return NotImplemented
        return Scalar(self.rat + other.rat, self.root2 + other.root2)

    __radd__ = __add__

    def __sub__(self, other: ScalarLike) -> "Scalar":
        try:
            other = Scalar.of(other)
        except TypeError:
            return NotImplemented
        return Scalar(self.rat - other.rat, self.root2 - other.root2)

    def __rsub__(self, other: ScalarLike) -> "Scalar":
        try:
            other = Scalar.of(other)
        except TypeError:
            return NotImplemented
        return other - self

    def __mul__(self, other: ScalarLike) -> "Scalar":
        try:
            other = Scalar.of(other)
        except TypeError:
            return NotImplemented
        a1, b1, a2, b2 = self.rat, self.root2, other.rat, other.root2
        return Scalar(a1 * a2 + 2 * b1 * b2, a1 * b2 + a2 * b1)

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "Scalar":
        try:
            other = Scalar.of(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: ScalarLike) -> "Scalar":
        try:
            other = Scalar.of(other)
        except TypeError:
            return NotImplemented
        return other * self.inverse()

    def __neg__(self) -> "Scalar":
        return Scalar(-self.rat, -self.root2)

    def __pos__(self) -> "Scalar":
        return self

    def __abs__(self) -> "Scalar":
        return -self if self.sign() < 0 else self

    def conjugate(self) -> "Scalar":
        """Return a - b*sqrt2."""
        return Scalar(self.rat, -self.root2)

    def norm(self) -> Fraction:
        """Return the field norm a^2 - 2b^2, zero only for zero."""
        return self.rat * self.rat - 2 * self.root2 * self.root2

    def inverse(self) -> "Scalar":
        """
        Multiplicative inverse by rationalizing with the conjugate.

        Raises:
            ScalarDivisionError: If the scalar is zero
        """
        n = self.norm()
        if n == 0:
            raise ScalarDivisionError("division by zero in Q(sqrt2)")
        return Scalar(self.rat / n, -self.root2 / n)

    # --- ordering -------------------------------------------------------

    def sign(self) -> int:
        """
        Sign of the real number a + b*sqrt2.

        Returns:
            -1, 0 or +1
        """
        sa, sb = _sign_of(self.rat), _sign_of(self.root2)
        if sb == 0:
            return sa
        if sa == 0:
            return sb
        if sa == sb:
            return sa
        # 부호가 다르면 a^2 과 2b^2 의 크기 비교로 결정
        return sa * _sign_of(self.norm())

    def __eq__(self, other) -> bool:
        try:
            other = Scalar.of(other)
        except TypeError:
            return NotImplemented
        return self.rat == other.rat and self.root2 == other.root2

    def __lt__(self, other: ScalarLike) -> bool:
        try:
            other = Scalar.of(other)
        except TypeError:
            return NotImplemented
        return (self - other).sign() < 0

    def __hash__(self) -> int:
        if self.root2 == 0:
            return hash(self.rat)
        return hash((self.rat, self.root2))

    def __bool__(self) -> bool:
        return self.rat != 0 or self.root2 != 0

    def __float__(self) -> float:
        return float(self.rat) + float(self.root2) * SQRT2_FLOAT

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)


ZERO = Scalar(0)
ONE = Scalar(1)
SQRT2 = Scalar(0, 1)


def add(x: Scalar, y: Scalar) -> Scalar:
    return x + y


def sub(x: Scalar, y: Scalar) -> Scalar:
    return x - y


def mul(x: Scalar, y: Scalar) -> Scalar:
    return x * y


def neg(x: Scalar) -> Scalar:
    return -x


def div(x: Scalar, y: Scalar) -> Scalar:
    """
    Exact quotient x / y.

    Raises:
        ScalarDivisionError: If y is zero
    """
    return x / y


def sign(x: Scalar) -> int:
    return Scalar.of(x).sign()


def scalar_sum(values) -> Scalar:
    """Sum an iterable of scalars, starting from ZERO."""
    total = ZERO
    for value in values:
        total = total + value
    return total


def _format_rational(value: Fraction) -> str:
    return str(value)


def format_scalar(x: ScalarLike) -> str:
    """
    Format a scalar in canonical grammar form.

    Args:
        x: The scalar to format

    Returns:
        Text such as ``1/4``, ``1/8-1/8*sqrt2`` or ``0+1/2*sqrt2``
    """
    x = Scalar.of(x)
    head = _format_rational(x.rat)
    if x.root2 == 0:
        return head
    op = "+" if x.root2 > 0 else "-"
    return f"{head}{op}{_format_rational(abs(x.root2))}*sqrt2"


_DIGITS = re.compile(r"\d+")


class _Cursor:
    """Position tracking scanner over whitespace-free text."""

    def __init__(self, text: str):
        self.original = text
        # 공백 제거 후에도 원래 위치를 보고할 수 있도록 매핑 유지
        self.chars = []
        self.positions = []
        for i, ch in enumerate(text):
            if not ch.isspace():
                self.chars.append(ch)
                self.positions.append(i)
        self.text = "".join(self.chars)
        self.index = 0

    def position(self) -> int:
        if self.index < len(self.positions):
            return self.positions[self.index]
        return len(self.original)

    def fail(self, message: str):
        raise ScalarParseError(message, self.original, self.position())

    def peek(self) -> str:
        return self.text[self.index] if self.index < len(self.text) else ""

    def take(self, literal: str) -> bool:
        if self.text.startswith(literal, self.index):
            self.index += len(literal)
            return True
        return False

    def digits(self) -> str:
        match = _DIGITS.match(self.text, self.index)
        if not match:
            self.fail("expected digits")
        self.index = match.end()
        return match.group(0)

    def rational(self) -> Fraction:
        negative = self.take("-")
        numerator = int(self.digits())
        denominator = 1
        if self.take("/"):
            start = self.position()
            denominator = int(self.digits())
            if denominator == 0:
                raise ScalarParseError("zero denominator", self.original, start)
        value = Fraction(numerator, denominator)
        return -value if negative else value


def parse_scalar(text: str) -> Scalar:
    """
    Parse the scalar grammar ``rational (("+"|"-") rational "*" "sqrt2")?``.

    Args:
        text: The text to parse, whitespace insensitive

    Returns:
        The parsed Scalar

    Raises:
        ScalarParseError: On malformed input, with the offending position
    """
    if not isinstance(text, str):
        raise ScalarParseError("expected a string", repr(text), 0)
    cursor = _Cursor(text)
    if not cursor.text:
        cursor.fail("empty scalar")
    rat = cursor.rational()
    root2 = Fraction(0)
    op = cursor.peek()
    if op in ("+", "-"):
        cursor.index += 1
        coefficient = cursor.rational()
        if not cursor.take("*"):
            cursor.fail("expected '*'")
        if not cursor.take("sqrt2"):
            cursor.fail("expected 'sqrt2'")
        root2 = coefficient if op == "+" else -coefficient
    if cursor.index != len(cursor.text):
        cursor.fail("unexpected character")
    return Scalar(rat, root2)


