"""Exact scalars of the form q * pi^(p/2) and half-integer Gamma/binomial helpers.

All combinatorial factors (factorials, binomials with half-integer entries,
Gamma values at half-integers) are kept exact; floats appear only when the
caller explicitly converts at the very end of a pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class GammaPole:
    """Marker for Gamma evaluated at a nonpositive integer.

    A pole is a legitimate value (it signals an absent expansion coefficient
    in even dimension), not an error.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "GammaPole"


POLE = GammaPole()


@dataclass(frozen=True)
class HalfIntScalar:
    """Exact number coeff * pi^(sqrt_pi_power / 2)."""

    coeff: Fraction
    sqrt_pi_power: int = 0

    def __mul__(self, other: "HalfIntScalar | Fraction | int") -> "HalfIntScalar":
        if isinstance(other, HalfIntScalar):
            return HalfIntScalar(self.coeff * other.coeff,
                                 self.sqrt_pi_power + other.sqrt_pi_power)
        return HalfIntScalar(self.coeff * Fraction(other), self.sqrt_pi_power)

    __rmul__ = __mul__

    def __truediv__(self, other: "HalfIntScalar | Fraction | int") -> "HalfIntScalar":
        if isinstance(other, HalfIntScalar):
            if other.coeff == 0:
                raise ZeroDivisionError("division by zero HalfIntScalar")
            return HalfIntScalar(self.coeff / other.coeff,
                                 self.sqrt_pi_power - other.sqrt_pi_power)
        return HalfIntScalar(self.coeff / Fraction(other), self.sqrt_pi_power)

    def __neg__(self) -> "HalfIntScalar":
        return HalfIntScalar(-self.coeff, self.sqrt_pi_power)

    def __float__(self) -> float:
        return float(self.coeff) * math.pi ** (self.sqrt_pi_power / 2)

    def __repr__(self):
        if self.sqrt_pi_power == 0:
            return f"{self.coeff}"
        return f"{self.coeff}*pi^({self.sqrt_pi_power}/2)"


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative integer {n}")
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    """Ordinary integer binomial coefficient, 0 for k outside [0, n]."""
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def half_integer_binomial(j: int, k: int, n: int) -> Fraction:
    """Exact C(j-1+n/2, k+n/2) for integer j >= 1, 0 <= k <= j-1, dimension n >= 1.

    Evaluates the product formula
        prod_{i=k+1}^{j-1} (i + n/2) / (j-1-k)!
    (empty product = 1).  For even n this agrees with the ordinary integer
    binomial C(j-1+n/2, k+n/2).
    """
    if n <= 0:
        raise ValueError(f"dimension must be positive, got {n}")
    if j < 1:
        raise ValueError(f"j must be a positive integer, got {j}")
    if k < 0 or k > j - 1:
        raise ValueError(f"k must satisfy 0 <= k <= j-1, got k={k}, j={j}")
    half_n = Fraction(n, 2)
    prod = Fraction(1)
    for i in range(k + 1, j):
        prod *= i + half_n
    return prod / factorial(j - 1 - k)


def gamma_half_integer(two_z: int) -> HalfIntScalar | GammaPole:
    """Exact Gamma(two_z / 2) for any integer two_z.

    Odd two_z: value is q * sqrt(pi) obtained from Gamma(1/2) = sqrt(pi) and
    the recursion Gamma(z+1) = z * Gamma(z), run in either direction.
    Even two_z > 0: the factorial (two_z/2 - 1)!.
    Even two_z <= 0: the distinguished POLE value.
    """
    if two_z % 2 == 0:
        z = two_z // 2
        if z <= 0:
            return POLE
        return HalfIntScalar(Fraction(factorial(z - 1)), 0)
    # two_z = 2m + 1: walk from Gamma(1/2).
    coeff = Fraction(1)
    if two_z >= 1:
        # Gamma(m + 1/2) = (2m-1)/2 * (2m-3)/2 * ... * 1/2 * Gamma(1/2)
        for odd in range(1, two_z, 2):
            coeff *= Fraction(odd, 2)
    else:
        # Gamma(1/2 - m) = Gamma(1/2) / ((-1/2)(-3/2)...(1/2 - m))
        for odd in range(-1, two_z - 1, -2):
            coeff /= Fraction(odd, 2)
    return HalfIntScalar(coeff, 1)
