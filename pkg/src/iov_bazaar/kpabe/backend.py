"""Bilinear group backends.

The symbolic backend tracks every group element as its discrete log to a
fixed generator: G1 elements are exponents of g, GT elements are
exponents of e(g,g).  Group operations become modular arithmetic and the
pairing becomes exponent multiplication, which makes pairing algebra
mechanically checkable.  It offers no security whatsoever and exists for
correctness testing; a production pairing curve can implement the same
interface.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass

# Smallest prime above 2**256, so any 256-bit message embeds injectively.
PRIME = 2**256 + 297


@dataclass(frozen=True)
class G1Element:
    exp: int

    def __mul__(self, other: "G1Element") -> "G1Element":
        return G1Element((self.exp + other.exp) % PRIME)

    def __pow__(self, scalar: int) -> "G1Element":
        return G1Element((self.exp * (scalar % PRIME)) % PRIME)

    def inverse(self) -> "G1Element":
        return G1Element((-self.exp) % PRIME)


@dataclass(frozen=True)
class GTElement:
    exp: int

    def __mul__(self, other: "GTElement") -> "GTElement":
        return GTElement((self.exp + other.exp) % PRIME)

    def __truediv__(self, other: "GTElement") -> "GTElement":
        return GTElement((self.exp - other.exp) % PRIME)

    def __pow__(self, scalar: int) -> "GTElement":
        return GTElement((self.exp * (scalar % PRIME)) % PRIME)


class BilinearBackend(abc.ABC):
    """Prime-order bilinear group interface used by the scheme."""

    order: int

    @abc.abstractmethod
    def generator(self) -> G1Element: ...

    @abc.abstractmethod
    def pair(self, a: G1Element, b: G1Element) -> GTElement: ...

    @abc.abstractmethod
    def random_scalar(self, rng) -> int: ...

    @abc.abstractmethod
    def encode_message(self, data: bytes) -> GTElement: ...

    @abc.abstractmethod
    def decode_message(self, element: GTElement, length: int) -> bytes: ...


class SymbolicBackend(BilinearBackend):
    order = PRIME

    def generator(self) -> G1Element:
        return G1Element(1)

    def pair(self, a: G1Element, b: G1Element) -> GTElement:
        return GTElement((a.exp * b.exp) % PRIME)

    def random_scalar(self, rng) -> int:
        # 40 bytes of entropy keep the mod-q bias negligible
        return 1 + int.from_bytes(rng.bytes(40), "big") % (PRIME - 1)

    def encode_message(self, data: bytes) -> GTElement:
        if len(data) > 32:
            raise ValueError("messages longer than 32 bytes do not embed in the group")
        return GTElement(int.from_bytes(data, "big"))

    def decode_message(self, element: GTElement, length: int) -> bytes:
        return element.exp.to_bytes(length, "big")


def inv(x: int) -> int:
    """Multiplicative inverse modulo the group order."""
    return pow(x, -1, PRIME)
