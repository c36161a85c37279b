"""GF(2) linear algebra on int bitsets.

A vector of length ``n`` is a Python int whose bit ``i`` is coordinate ``i``.
Multiplicative sign data is stored additively: ``+1 -> 0`` and ``-1 -> 1``, so
products of sign functions become XOR.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

DEFAULT_CHARACTER_BOUND = 20


class DimensionError(ValueError):
    pass


class BoundExceeded(ValueError):
    pass


def parity(v: int) -> int:
    return bin(v).count("1") & 1


def popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class F2Vector:
    """A bit vector of fixed length; ``str`` shows coordinate 0 first."""

    bits: int
    dim: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.dim:
            raise DimensionError(f"{self.bits:#x} does not fit in {self.dim} bits")

    @classmethod
    def from_str(cls, s: str) -> "F2Vector":
        s = s.strip()
        if any(ch not in "01" for ch in s):
            raise ValueError(f"not a bit string: {s!r}")
        return cls(sum(1 << i for i, ch in enumerate(s) if ch == "1"), len(s))

    def __str__(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.dim))

    def __xor__(self, other: "F2Vector") -> "F2Vector":
        if other.dim != self.dim:
            raise DimensionError("dimension mismatch")
        return F2Vector(self.bits ^ other.bits, self.dim)

    def dot(self, other: "F2Vector") -> int:
        if other.dim != self.dim:
            raise DimensionError("dimension mismatch")
        return parity(self.bits & other.bits)


def _as_bits(v, dim: int) -> int:
    if isinstance(v, F2Vector):
        if v.dim != dim:
            raise DimensionError(f"vector of length {v.dim} in ambient dimension {dim}")
        return v.bits
    v = int(v)
    if v < 0 or v >> dim:
        raise DimensionError(f"{v:#x} does not fit in {dim} bits")
    return v


def _lowbit(v: int) -> int:
    return (v & -v).bit_length() - 1


@dataclass(frozen=True)
class F2Subspace:
    """Subspace of GF(2)^dim kept in reduced row echelon form.

    Pivots are the lowest set bit of each row, rows are sorted by pivot and no
    other row has a bit in a pivot column, so equal subspaces compare equal.
    """

    rows: tuple[int, ...]
    dim: int

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def size(self) -> int:
        return 1 << len(self.rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(_lowbit(r) for r in self.rows)

    def reduce(self, v: int) -> int:
        for r in self.rows:
            if (v >> _lowbit(r)) & 1:
                v ^= r
        return v

    def __contains__(self, v) -> bool:
        return self.reduce(_as_bits(v, self.dim)) == 0

    def elements(self) -> Iterator[int]:
        """All elements, in Gray-code order starting at 0."""
        v = 0
        yield v
        for k in range(1, self.size):
            v ^= self.rows[_lowbit(k)]
            yield v

    def vectors(self) -> list[F2Vector]:
        return [F2Vector(r, self.dim) for r in self.rows]

    def __le__(self, other: "F2Subspace") -> bool:
        return all(r in other for r in self.rows)


def echelonize(vectors: Iterable, dim: int) -> F2Subspace:
    """Canonical reduced echelon basis of the span of ``vectors``."""
    pivot_rows: dict[int, int] = {}
    for v in vectors:
        v = _as_bits(v, dim)
        for p, r in pivot_rows.items():
            if (v >> p) & 1:
                v ^= r
        if v:
            p = _lowbit(v)
            for q in list(pivot_rows):
                if (pivot_rows[q] >> p) & 1:
                    pivot_rows[q] ^= v
            pivot_rows[p] = v
    return F2Subspace(tuple(pivot_rows[p] for p in sorted(pivot_rows)), dim)


def span(vectors: Iterable, dim: int) -> F2Subspace:
    return echelonize(vectors, dim)


def contains(space: F2Subspace, v) -> bool:
    return v in space


def rank(vectors: Sequence[int], dim: int) -> int:
    return echelonize(vectors, dim).rank


class Coordinates:
    """Coordinates with respect to a fixed, linearly independent basis.

    ``coords(v)`` returns the int ``t`` with ``v == XOR of basis[j] for bits j of t``.
    """

    def __init__(self, basis: Sequence[int], dim: int):
        self.basis = tuple(_as_bits(b, dim) for b in basis)
        self.dim = dim
        self._table: list[tuple[int, int, int]] = []  # (pivot, row, combination)
        for j, b in enumerate(self.basis):
            row, combo = self._reduce(b, 1 << j)
            if row == 0:
                raise ValueError("basis vectors are linearly dependent")
            self._table.append((_lowbit(row), row, combo))

    def _reduce(self, v: int, combo: int) -> tuple[int, int]:
        for p, row, c in self._table:
            if (v >> p) & 1:
                v ^= row
                combo ^= c
        return v, combo

    def coords(self, v) -> int:
        rest, combo = self._reduce(_as_bits(v, self.dim), 0)
        if rest:
            raise ValueError("vector is not in the span of the basis")
        return combo

    def try_coords(self, v: int) -> int | None:
        rest, combo = self._reduce(v, 0)
        return None if rest else combo

    def element(self, t: int) -> int:
        v = 0
        j = 0
        while t:
            if t & 1:
                v ^= self.basis[j]
            t >>= 1
            j += 1
        return v


def characters(G: F2Subspace, bound: int = DEFAULT_CHARACTER_BOUND) -> list[F2Vector]:
    """Every homomorphism G -> {+-1}, as its values on ``G.rows``, in lexicographic order."""
    if G.rank > bound:
        raise BoundExceeded(f"2^{G.rank} characters exceeds the bound 2^{bound}")
    return [F2Vector(c, G.rank) for c in range(1 << G.rank)]


def character_value(G: F2Subspace, chi, g) -> int:
    """Value (0 for +1, 1 for -1) of a character of G at an element g of G."""
    t = Coordinates(G.rows, G.dim).coords(g)
    return parity(_as_bits(chi, G.rank) & t)


def annihilator(S: Iterable, G: F2Subspace) -> F2Subspace:
    """S^perp: the elements of G on which every character in S is +1."""
    chars = [_as_bits(s, G.rank) for s in S]
    # solve t . s = 0 for all s over the coordinate space of G
    perp = _orthogonal(chars, G.rank)
    coords = Coordinates(G.rows, G.dim)
    return echelonize((coords.element(t) for t in perp.rows), G.dim)


def dual_annihilator(H: F2Subspace, G: F2Subspace) -> F2Subspace:
    """All characters of G (values on ``G.rows``) that are trivial on H."""
    if H.dim != G.dim:
        raise DimensionError("dimension mismatch")
    coords = Coordinates(G.rows, G.dim)
    return _orthogonal([coords.coords(h) for h in H.rows], G.rank)


def _orthogonal(vectors: Sequence[int], dim: int) -> F2Subspace:
    """{w : w . v = 0 for all v} inside GF(2)^dim."""
    V = echelonize(vectors, dim)
    pivots = set(V.pivots)
    basis = []
    for free in range(dim):
        if free in pivots:
            continue
        w = 1 << free
        for row in V.rows:
            if (row >> free) & 1:
                w |= 1 << _lowbit(row)
        basis.append(w)
    return echelonize(basis, dim)


def exhaustive_span(vectors: Sequence[int]) -> set[int]:
    """Brute-force span by closure; only for small inputs."""
    out = {0}
    for v in vectors:
        out |= {x ^ v for x in out}
    return out
