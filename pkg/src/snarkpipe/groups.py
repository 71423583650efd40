"""Multiplicative-group abstraction with a pluggable bilinear pairing.

Two backends share one element interface:

* ``modular`` exponentiates honestly inside the field's own multiplicative
  group (order p - 1). It offers no pairing, so it can only power the parts
  of the pipeline that never call one.
* ``transparent`` models an idealized cyclic group whose order equals the
  field modulus p. Elements simply store their discrete log, the group law
  adds logs, and the pairing multiplies them into a target group. Exponent
  algebra therefore matches field algebra exactly, which is what lets every
  key equation be executed and tested bit for bit at desk scale.

The transparent backend is deliberately insecure: anyone can read the
exponents straight out of the elements. It exists for demonstrations and
tests, never for protecting secrets.
"""

from __future__ import annotations

from .field import FieldContext, FieldElement

__all__ = [
    "BACKENDS",
    "Group",
    "GroupElement",
    "ModularGroup",
    "PairingUnsupported",
    "TargetGroupElement",
    "TransparentGroup",
    "make_group",
]


class PairingUnsupported(RuntimeError):
    """The selected backend has no bilinear map."""


class GroupElement:
    """An element g^a; the representation of a is backend-dependent."""

    __slots__ = ("group", "value")

    def __init__(self, group: "Group", value: int):
        self.group = group
        self.value = value

    def __mul__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        self.group.require_same(other.group)
        return self.group.combine(self, other)

    def __pow__(self, exponent):
        return self.group.exp(self, exponent)

    def inverse(self) -> "GroupElement":
        return self.group.invert(self)

    def pair(self, other: "GroupElement") -> "TargetGroupElement":
        return self.group.pairing(self, other)

    def __eq__(self, other):
        if isinstance(other, GroupElement):
            return self.group.describes_same(other.group) and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.group.name, self.group.ctx.p, self.value))

    def __repr__(self):
        return f"GroupElement({self.group.name}, {self.value})"


class TargetGroupElement:
    """Output of the pairing; a multiplicative group in its own right."""

    __slots__ = ("group", "value")

    def __init__(self, group: "Group", value: int):
        self.group = group
        self.value = value

    def __mul__(self, other):
        if not isinstance(other, TargetGroupElement):
            return NotImplemented
        self.group.require_same(other.group)
        return TargetGroupElement(self.group, (self.value + other.value) % self.group.order)

    def __pow__(self, exponent):
        e = _exponent_int(exponent) % self.group.order
        return TargetGroupElement(self.group, self.value * e % self.group.order)

    def __eq__(self, other):
        if isinstance(other, TargetGroupElement):
            return self.group.describes_same(other.group) and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash(("target", self.group.ctx.p, self.value))

    def __repr__(self):
        return f"TargetGroupElement({self.group.name}, {self.value})"


def _exponent_int(exponent) -> int:
    if isinstance(exponent, FieldElement):
        return exponent.value
    if isinstance(exponent, int):
        return exponent
    raise TypeError(f"exponent must be int or FieldElement, not {type(exponent)!r}")


class Group:
    """Common interface of both backends."""

    name = "abstract"
    pairs = False

    def __init__(self, ctx: FieldContext):
        self.ctx = ctx

    @property
    def order(self) -> int:
        raise NotImplementedError

    def generator(self) -> GroupElement:
        raise NotImplementedError

    def identity(self) -> GroupElement:
        raise NotImplementedError

    def combine(self, a: GroupElement, b: GroupElement) -> GroupElement:
        raise NotImplementedError

    def exp(self, base: GroupElement, exponent) -> GroupElement:
        raise NotImplementedError

    def invert(self, a: GroupElement) -> GroupElement:
        raise NotImplementedError

    def pairing(self, a: GroupElement, b: GroupElement) -> TargetGroupElement:
        raise PairingUnsupported(f"backend '{self.name}' has no bilinear map")

    def target_identity(self) -> TargetGroupElement:
        raise PairingUnsupported(f"backend '{self.name}' has no bilinear map")

    def element_from_int(self, value: int) -> GroupElement:
        return GroupElement(self, value % self._carrier_modulus())

    def _carrier_modulus(self) -> int:
        raise NotImplementedError

    def require_same(self, other: "Group") -> None:
        if not self.describes_same(other):
            raise ValueError(
                f"elements from different group contexts: {self.name}/{self.ctx.p}"
                f" vs {other.name}/{other.ctx.p}"
            )

    def describes_same(self, other: "Group") -> bool:
        return self.name == other.name and self.ctx == other.ctx


class ModularGroup(Group):
    """Honest exponentiation in the field's multiplicative group F_p^*."""

    name = "modular"
    pairs = False

    @property
    def order(self) -> int:
        return self.ctx.p - 1

    def generator(self) -> GroupElement:
        return GroupElement(self, self.ctx.generator_value)

    def identity(self) -> GroupElement:
        return GroupElement(self, 1)

    def combine(self, a, b):
        return GroupElement(self, a.value * b.value % self.ctx.p)

    def exp(self, base, exponent):
        e = _exponent_int(exponent) % self.order
        return GroupElement(self, pow(base.value, e, self.ctx.p))

    def invert(self, a):
        return GroupElement(self, pow(a.value, self.ctx.p - 2, self.ctx.p))

    def _carrier_modulus(self) -> int:
        return self.ctx.p


class TransparentGroup(Group):
    """Idealized order-p cyclic group whose elements expose their discrete log.

    Insecure by design: GroupElement.value IS the exponent of the generator.
    """

    name = "transparent"
    pairs = True

    @property
    def order(self) -> int:
        return self.ctx.p

    def generator(self) -> GroupElement:
        return GroupElement(self, 1)

    def identity(self) -> GroupElement:
        return GroupElement(self, 0)

    def combine(self, a, b):
        return GroupElement(self, (a.value + b.value) % self.ctx.p)

    def exp(self, base, exponent):
        e = _exponent_int(exponent) % self.ctx.p
        return GroupElement(self, base.value * e % self.ctx.p)

    def invert(self, a):
        return GroupElement(self, (-a.value) % self.ctx.p)

    def pairing(self, a, b):
        self.require_same(a.group)
        self.require_same(b.group)
        return TargetGroupElement(self, a.value * b.value % self.ctx.p)

    def target_identity(self) -> TargetGroupElement:
        return TargetGroupElement(self, 0)

    def _carrier_modulus(self) -> int:
        return self.ctx.p


BACKENDS = {
    ModularGroup.name: ModularGroup,
    TransparentGroup.name: TransparentGroup,
}


def make_group(backend: str, ctx: FieldContext) -> Group:
    try:
        cls = BACKENDS[backend]
    except KeyError:
        raise ValueError(
            f"unknown backend '{backend}'; expected one of {sorted(BACKENDS)}"
        ) from None
    return cls(ctx)
