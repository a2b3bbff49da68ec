"""Prime field arithmetic, quadratic residues and prime scans."""
import logging
from dataclasses import dataclass
from math import gcd
from typing import Iterator, Optional, Union

from sympy import isprime

from app.core.errors import (
    FieldZeroDivisionError,
    PrimeNotFoundError,
    UnsupportedCharacteristicError,
)

logger = logging.getLogger(__name__)

MAX_MODULUS_BITS = 62


@dataclass(frozen=True)
class Prime:
    """An odd prime modulus.

    sympy's isprime is deterministic below 2**64, which covers every
    modulus accepted here.
    """

    value: int

    def __post_init__(self):
        if not isinstance(self.value, int) or isinstance(self.value, bool):
            raise UnsupportedCharacteristicError(
                f"modulus must be an integer, got {self.value!r}")
        if self.value == 2:
            raise UnsupportedCharacteristicError(
                "characteristic 2 is not supported")
        if self.value < 3 or not isprime(self.value):
            raise UnsupportedCharacteristicError(
                f"{self.value} is not an odd prime")
        if self.value.bit_length() > MAX_MODULUS_BITS:
            raise UnsupportedCharacteristicError(
                f"{self.value} exceeds {MAX_MODULUS_BITS} bits")

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)

    def element(self, value: int) -> "FieldElement":
        """Residue of an integer in this field."""
        return FieldElement(value, self.value)


PrimeLike = Union[Prime, int]


def as_modulus(p: PrimeLike) -> int:
    """Validated integer modulus from a Prime or a plain int."""
    if isinstance(p, Prime):
        return p.value
    return Prime(p).value


class FieldElement:
    """Element of F_p; the residue is kept in [0, p).

    Equal to the ints congruent to it; the hash matches the canonical
    int in [0, p).
    """

    __slots__ = ("residue", "modulus")

    def __init__(self, value: int, modulus: PrimeLike):
        self.modulus = as_modulus(modulus)
        self.residue = int(value) % self.modulus

    @classmethod
    def _wrap(cls, value: int, modulus: int) -> "FieldElement":
        # modulus already validated
        element = cls.__new__(cls)
        element.modulus = modulus
        element.residue = value % modulus
        return element

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ValueError(
                    f"mixed moduli {self.modulus} and {other.modulus}")
            return other.residue
        if isinstance(other, int):
            return other % self.modulus
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement._wrap(self.residue + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement._wrap(self.residue - o, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement._wrap(o - self.residue, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement._wrap(self.residue * o, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement._wrap(-self.residue, self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * fp_inv(FieldElement._wrap(o, self.modulus))

    def __pow__(self, exponent: int):
        if exponent < 0:
            return fp_inv(self) ** (-exponent)
        return FieldElement._wrap(pow(self.residue, exponent, self.modulus), self.modulus)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.modulus == other.modulus and self.residue == other.residue
        if isinstance(other, int):
            return self.residue == other % self.modulus
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.residue)

    def __bool__(self) -> bool:
        return self.residue != 0

    def __int__(self) -> int:
        return self.residue

    def __repr__(self) -> str:
        return f"FieldElement({self.residue} mod {self.modulus})"


def fp_inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse in F_p.

    Raises:
        FieldZeroDivisionError: a is zero
    """
    if a.residue == 0:
        raise FieldZeroDivisionError(a.modulus)
    return FieldElement._wrap(pow(a.residue, -1, a.modulus), a.modulus)


def legendre_symbol(a: int, p: PrimeLike) -> int:
    """Legendre symbol (a/p) via Euler's criterion."""
    modulus = as_modulus(p)
    value = pow(a % modulus, (modulus - 1) // 2, modulus)
    if value == 0:
        return 0
    return 1 if value == 1 else -1


def is_square(a: FieldElement) -> bool:
    """True iff a = x^2 for some x in F_p (zero included)."""
    return legendre_symbol(a.residue, a.modulus) != -1


def is_square_mod(a: int, p: int) -> bool:
    """is_square on a raw residue."""
    return legendre_symbol(a, p) != -1


def discriminant_root_exists(delta: int, p: PrimeLike) -> bool:
    """Whether sqrt(delta) lies in F_p.

    Always true when p = 1 (mod 4|delta|).
    """
    if delta == 0:
        raise ValueError("discriminant must be nonzero")
    return legendre_symbol(delta, p) != -1


def primes_below(
    n: int,
    residue_class: Optional[tuple[int, int]] = None
) -> Iterator[Prime]:
    """Odd primes p <= n in decreasing order, optionally with p = a (mod m)."""
    if residue_class is None:
        a, m = 0, 1
    else:
        a, m = residue_class
        if m < 1:
            raise ValueError(f"modulus of residue class must be positive, got {m}")
        if gcd(a, m) != 1:
            raise ValueError(f"gcd({a}, {m}) != 1: no primes in this class")

    candidate = n - ((n - a) % m)
    while candidate >= 3:
        if isprime(candidate):
            yield Prime(candidate)
        candidate -= m


def scan_prime_below(
    n: int,
    residue_class: Optional[tuple[int, int]] = None
) -> Prime:
    """Largest odd prime p <= n, restricted to p = a (mod m) if a class is given.

    Raises:
        PrimeNotFoundError: no such prime in [3, n]
    """
    if n < 3:
        raise PrimeNotFoundError("range too small", (3, n))

    for prime in primes_below(n, residue_class):
        logger.debug(f"Selected prime {prime} <= {n} (class {residue_class})")
        return prime

    clause = f" with p = {residue_class[0]} (mod {residue_class[1]})" if residue_class else ""
    raise PrimeNotFoundError(f"no prime{clause}", (3, n))
