"""Exact arithmetic in the value group Q^h with the lexicographic order.

A :class:`GroupElement` is a fixed-height vector of rationals; the first
component dominates comparisons.  An :class:`AffineFunction` is a map
``x -> sum m_i x_i + c`` with rational slopes and a group-element constant.
Everything is immutable and exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import DimensionMismatchError, HeightMismatchError

Rational = Fraction


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


class GroupElement:
    """Element of Q^h, ordered lexicographically."""

    __slots__ = ("comps",)

    def __init__(self, comps: Iterable):
        comps = tuple(as_rational(c) for c in comps)
        if not comps:
            raise ValueError("a group element needs height >= 1")
        object.__setattr__(self, "comps", comps)

    def __setattr__(self, name, value):
        raise AttributeError("GroupElement is immutable")

    @classmethod
    def _raw(cls, comps: tuple) -> "GroupElement":
        obj = object.__new__(cls)
        object.__setattr__(obj, "comps", comps)
        return obj

    @classmethod
    def zero(cls, height: int = 1) -> "GroupElement":
        return cls._raw((Fraction(0),) * height)

    @classmethod
    def unit(cls, height: int = 1, level: int = 0) -> "GroupElement":
        """The element with a single 1 at position ``level`` (0 = most significant)."""
        comps = [Fraction(0)] * height
        comps[level] = Fraction(1)
        return cls._raw(tuple(comps))

    @classmethod
    def of(cls, value, height: int = 1) -> "GroupElement":
        """Coerce a scalar (placed in the top component) or a sequence."""
        if isinstance(value, GroupElement):
            return value
        if isinstance(value, (list, tuple)):
            return cls(value)
        comps = [Fraction(0)] * height
        comps[0] = as_rational(value)
        return cls._raw(tuple(comps))

    @property
    def height(self) -> int:
        return len(self.comps)

    def _check(self, other: "GroupElement"):
        if len(self.comps) != len(other.comps):
            raise HeightMismatchError(f"heights differ: {len(self.comps)} vs {len(other.comps)}")

    def __add__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._check(other)
        return GroupElement._raw(tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __sub__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._check(other)
        return GroupElement._raw(tuple(a - b for a, b in zip(self.comps, other.comps)))

    def __neg__(self):
        return GroupElement._raw(tuple(-a for a in self.comps))

    def scale(self, q) -> "GroupElement":
        q = as_rational(q)
        return GroupElement._raw(tuple(q * a for a in self.comps))

    def __mul__(self, q):
        if isinstance(q, (int, Fraction)):
            return self.scale(q)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, q):
        return self.scale(Fraction(1) / as_rational(q))

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.comps == other.comps

    def __hash__(self):
        return hash(("G", self.comps))

    def __lt__(self, other):
        self._check(other)
        return self.comps < other.comps

    def __le__(self, other):
        self._check(other)
        return self.comps <= other.comps

    def __gt__(self, other):
        self._check(other)
        return self.comps > other.comps

    def __ge__(self, other):
        self._check(other)
        return self.comps >= other.comps

    def sign(self) -> int:
        for c in self.comps:
            if c:
                return 1 if c > 0 else -1
        return 0

    def is_zero(self) -> bool:
        return not any(self.comps)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def quotient(self, k: int = 1) -> "GroupElement":
        """Image in the quotient by the ``k`` smallest convex subgroups."""
        if not 0 <= k < self.height:
            raise ValueError(f"cannot drop {k} components from height {self.height}")
        return GroupElement._raw(self.comps[: self.height - k])

    def raise_height(self, extra: int = 1, at_front: bool = False) -> "GroupElement":
        pad = (Fraction(0),) * extra
        return GroupElement._raw(pad + self.comps if at_front else self.comps + pad)

    def __repr__(self):
        return "(" + ", ".join(str(c) for c in self.comps) + ")"


def compare(a: GroupElement, b: GroupElement) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    a._check(b)
    return (a.comps > b.comps) - (a.comps < b.comps)


def norm_inf(x: Sequence[GroupElement]) -> GroupElement:
    """max_i |x_i| for a point of Gamma^n."""
    if not x:
        raise DimensionMismatchError("norm of an empty point")
    best = abs(x[0])
    for xi in x[1:]:
        v = abs(xi)
        if v > best:
            best = v
    return best


def midpoint(a: GroupElement, b: GroupElement) -> GroupElement:
    return (a + b).scale(Fraction(1, 2))


class AffineFunction:
    """x -> sum(coeffs[i] * x[i]) + const on Gamma^n."""

    __slots__ = ("coeffs", "const", "_hash")

    def __init__(self, coeffs: Iterable, const):
        coeffs = tuple(as_rational(c) for c in coeffs)
        if not isinstance(const, GroupElement):
            const = GroupElement.of(const)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "const", const)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("AffineFunction is immutable")

    @classmethod
    def _raw(cls, coeffs: tuple, const: GroupElement) -> "AffineFunction":
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", coeffs)
        object.__setattr__(obj, "const", const)
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def constant(cls, c, dim: int, height: int = 1) -> "AffineFunction":
        return cls._raw((Fraction(0),) * dim, GroupElement.of(c, height))

    @classmethod
    def zero(cls, dim: int, height: int = 1) -> "AffineFunction":
        return cls._raw((Fraction(0),) * dim, GroupElement.zero(height))

    @classmethod
    def coordinate(cls, i: int, dim: int, height: int = 1) -> "AffineFunction":
        coeffs = [Fraction(0)] * dim
        coeffs[i] = Fraction(1)
        return cls._raw(tuple(coeffs), GroupElement.zero(height))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def height(self) -> int:
        return self.const.height

    def is_z_affine(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_constant(self) -> bool:
        return not any(self.coeffs)

    def __call__(self, x: Sequence[GroupElement]) -> GroupElement:
        if len(x) != len(self.coeffs):
            raise DimensionMismatchError(f"point has dimension {len(x)}, function expects {len(self.coeffs)}")
        h = self.const.height
        acc = list(self.const.comps)
        for m, xi in zip(self.coeffs, x):
            if not m:
                continue
            if xi.height != h:
                raise HeightMismatchError(f"point component of height {xi.height}, function height {h}")
            for k, v in enumerate(xi.comps):
                if v:
                    acc[k] += m * v
        return GroupElement._raw(tuple(acc))

    def _check(self, other: "AffineFunction"):
        if self.dim != other.dim:
            raise DimensionMismatchError(f"dimensions differ: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if isinstance(other, GroupElement):
            return AffineFunction._raw(self.coeffs, self.const + other)
        if not isinstance(other, AffineFunction):
            return NotImplemented
        self._check(other)
        return AffineFunction._raw(
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.const + other.const
        )

    def __sub__(self, other):
        if isinstance(other, GroupElement):
            return AffineFunction._raw(self.coeffs, self.const - other)
        if not isinstance(other, AffineFunction):
            return NotImplemented
        self._check(other)
        return AffineFunction._raw(
            tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.const - other.const
        )

    def __neg__(self):
        return AffineFunction._raw(tuple(-a for a in self.coeffs), -self.const)

    def scale(self, q) -> "AffineFunction":
        q = as_rational(q)
        return AffineFunction._raw(tuple(q * a for a in self.coeffs), self.const.scale(q))

    def __mul__(self, q):
        if isinstance(q, (int, Fraction)):
            return self.scale(q)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AffineFunction):
            return NotImplemented
        return self.coeffs == other.coeffs and self.const == other.const

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(("A", self.coeffs, self.const.comps))
            object.__setattr__(self, "_hash", h)
        return h

    def sort_key(self):
        return (self.coeffs, self.const.comps)

    def quotient(self, k: int = 1) -> "AffineFunction":
        return AffineFunction._raw(self.coeffs, self.const.quotient(k))

    def raise_height(self, extra: int = 1, at_front: bool = False) -> "AffineFunction":
        return AffineFunction._raw(self.coeffs, self.const.raise_height(extra, at_front))

    def pullback(self, rows: Sequence[Sequence[Fraction]], offsets: Sequence[GroupElement]) -> "AffineFunction":
        """Compose with the affine map ``y -> (rows[i] . y + offsets[i])_i``."""
        if len(rows) != self.dim:
            raise DimensionMismatchError("map output dimension does not match")
        new_dim = len(rows[0]) if rows else 0
        coeffs = [Fraction(0)] * new_dim
        const = self.const
        for m, row, off in zip(self.coeffs, rows, offsets):
            if not m:
                continue
            for j, r in enumerate(row):
                if r:
                    coeffs[j] += m * r
            const = const + off.scale(m)
        return AffineFunction._raw(tuple(coeffs), const)

    def embed(self, new_dim: int, positions: Sequence[int]) -> "AffineFunction":
        """View as a function on Gamma^new_dim where old variable i sits at positions[i]."""
        coeffs = [Fraction(0)] * new_dim
        for m, p in zip(self.coeffs, positions):
            coeffs[p] += m
        return AffineFunction._raw(tuple(coeffs), self.const)

    def drop_variable(self, i: int) -> "AffineFunction":
        if self.coeffs[i]:
            raise ValueError("variable still occurs")
        return AffineFunction._raw(self.coeffs[:i] + self.coeffs[i + 1:], self.const)

    def integer_scaled(self) -> "AffineFunction":
        """Positive multiple with integer slopes (the lcm of the slope denominators)."""
        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        return self if den == 1 else self.scale(den)

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}*x{i}" if c != 1 else f"x{i}")
        if not self.const.is_zero() or not parts:
            parts.append(repr(self.const))
        return " + ".join(parts)


def eval_affine(f: AffineFunction, x: Sequence[GroupElement]) -> GroupElement:
    return f(x)


def convex_quotient(x, k: int = 1):
    """Quotient by the ``k`` smallest convex subgroups: drop the last ``k`` components."""
    if isinstance(x, (GroupElement, AffineFunction)):
        return x.quotient(k)
    raise TypeError(f"cannot quotient {type(x).__name__}")


def point(*values, height: int = 1) -> tuple:
    """Convenience: build a point of Gamma^n from scalars or component sequences."""
    return tuple(GroupElement.of(v, height) for v in values)
