"""Exact arithmetic over a prime field."""

from __future__ import annotations

__all__ = [
    "DEFAULT_GENERATOR",
    "DEFAULT_MODULUS",
    "DivisionByZero",
    "FieldContext",
    "FieldElement",
    "is_probable_prime",
]

# 2^64 - 2^32 + 1: reduction stays within machine words and
# p - 1 = 2^32 * 3 * 5 * 17 * 257 * 65537 factors completely, so the
# default generator can be verified exactly at construction time.
DEFAULT_MODULUS = 2**64 - 2**32 + 1
DEFAULT_GENERATOR = 7
_DEFAULT_ORDER_FACTORS = (2, 3, 5, 17, 257, 65537)

# Deterministic Miller-Rabin witness set, sound for every n < 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Give up factoring p - 1 past this many trial divisors; callers must then
# supply the generator themselves.
_FACTOR_BUDGET = 1_000_000


class DivisionByZero(ZeroDivisionError):
    """Division by the additive identity of the field."""


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for small in _MR_WITNESSES:
        if n % small == 0:
            return n == small
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _distinct_prime_factors(n: int) -> list[int] | None:
    """Distinct prime factors of n by trial division, or None if n resists
    the division budget (a large cofactor would need real factoring)."""
    factors = []
    if n % 2 == 0:
        factors.append(2)
        while n % 2 == 0:
            n //= 2
    candidate = 3
    steps = 0
    while candidate * candidate <= n:
        if steps > _FACTOR_BUDGET:
            return None
        if n % candidate == 0:
            factors.append(candidate)
            while n % candidate == 0:
                n //= candidate
        candidate += 2
        steps += 1
    if n > 1:
        factors.append(n)
    return factors


def _generates_group(g: int, p: int, order_factors) -> bool:
    return all(pow(g, (p - 1) // q, p) != 1 for q in order_factors)


class FieldElement:
    """Residue in [0, p) tied to a FieldContext; every operator reduces mod p."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: "FieldContext", value: int):
        self.ctx = ctx
        self.value = value % ctx.p

    def _operand(self, other):
        if isinstance(other, FieldElement):
            if other.ctx.p != self.ctx.p:
                raise ValueError(
                    f"mixed field moduli: {self.ctx.p} vs {other.ctx.p}"
                )
            return other.value
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        v = self._operand(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.ctx, self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._operand(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.ctx, self.value - v)

    def __rsub__(self, other):
        v = self._operand(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.ctx, v - self.value)

    def __mul__(self, other):
        v = self._operand(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.ctx, self.value * v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._operand(other)
        if v is None:
            return NotImplemented
        v %= self.ctx.p
        if v == 0:
            raise DivisionByZero("division by zero in field")
        return FieldElement(self.ctx, self.value * pow(v, self.ctx.p - 2, self.ctx.p))

    def __rtruediv__(self, other):
        v = self._operand(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.ctx, v) / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return FieldElement(self.ctx, pow(self.value, exponent, self.ctx.p))

    def __neg__(self):
        return FieldElement(self.ctx, -self.value)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise DivisionByZero("zero has no multiplicative inverse")
        return FieldElement(self.ctx, pow(self.value, self.ctx.p - 2, self.ctx.p))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx.p == other.ctx.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.value))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElement({self.value} mod {self.ctx.p})"


class FieldContext:
    """A prime modulus plus a generator of its multiplicative group.

    The default modulus ships with generator 7, which is checked against the
    known factorization of p - 1. For other moduli the generator is found by
    factoring p - 1 when that is cheap, and otherwise must be supplied and is
    trusted as configured.
    """

    __slots__ = ("p", "generator_value")

    def __init__(self, p: int = DEFAULT_MODULUS, generator: int | None = None):
        if not isinstance(p, int) or p < 3:
            raise ValueError("modulus must be an odd prime")
        if not is_probable_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p
        if generator is not None:
            g = generator % p
            if g in (0, 1):
                raise ValueError("generator must not be 0 or 1")
            if p == DEFAULT_MODULUS:
                if not _generates_group(g, p, _DEFAULT_ORDER_FACTORS):
                    raise ValueError(f"{g} does not generate the group mod {p}")
            self.generator_value = g
        elif p == DEFAULT_MODULUS:
            if not _generates_group(DEFAULT_GENERATOR, p, _DEFAULT_ORDER_FACTORS):
                raise ValueError("default generator failed its order check")
            self.generator_value = DEFAULT_GENERATOR
        else:
            factors = _distinct_prime_factors(p - 1)
            if factors is None:
                raise ValueError(
                    f"cannot factor {p} - 1 cheaply; pass an explicit generator"
                )
            for g in range(2, p):
                if _generates_group(g, p, factors):
                    self.generator_value = g
                    break
            else:  # pragma: no cover - every prime field has a generator
                raise ValueError(f"no generator found for modulus {p}")

    def __call__(self, value: int | FieldElement) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.ctx.p != self.p:
                raise ValueError("element belongs to a different field")
            return value
        return FieldElement(self, value)

    @property
    def generator(self) -> FieldElement:
        return FieldElement(self, self.generator_value)

    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def sample(self, rng) -> FieldElement:
        return FieldElement(self, rng.randrange(self.p))

    def sample_nonzero(self, rng) -> FieldElement:
        return FieldElement(self, rng.randrange(1, self.p))

    def __eq__(self, other):
        if isinstance(other, FieldContext):
            return self.p == other.p and self.generator_value == other.generator_value
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.generator_value))

    def __repr__(self):
        return f"FieldContext(p={self.p}, generator={self.generator_value})"

    def to_json_dict(self) -> dict:
        # Decimal strings keep 64-bit values intact for JSON consumers.
        return {"p": str(self.p), "generator": str(self.generator_value)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "FieldContext":
        return cls(int(data["p"]), int(data["generator"]))
