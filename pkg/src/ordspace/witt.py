"""Quadratic forms over a space of orderings and powers of the fundamental ideal.

Witt classes are identified with their signature vectors.  Membership in I^n
is decided exactly: the additive generators ``a * <<b_1, ..., b_n>>`` have
signature ``2^n * a`` on the basic set ``H(b_1) & ... & H(b_n)`` and 0 elsewhere,
and lattices of such vectors are compared in Hermite normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .f2core import popcount
from .spaces import OrderingSpace, SpaceError, harrison_set, parse_element

Vector = tuple[int, ...]


@dataclass(frozen=True)
class QuadraticForm:
    entries: tuple[int, ...]  # G elements as masks

    @property
    def dimension(self) -> int:
        return len(self.entries)

    def __add__(self, other: "QuadraticForm") -> "QuadraticForm":
        return QuadraticForm(self.entries + other.entries)

    def __mul__(self, other: "QuadraticForm") -> "QuadraticForm":
        return QuadraticForm(tuple(a ^ b for a in self.entries for b in other.entries))

    def scaled(self, a: int) -> "QuadraticForm":
        return QuadraticForm(tuple(a ^ e for e in self.entries))


@dataclass(frozen=True)
class WittElement:
    signature: Vector
    dim_parity: int

    def __post_init__(self):
        if any((s - self.dim_parity) % 2 for s in self.signature):
            raise SpaceError("signature parity does not match the dimension parity")


def form(S: OrderingSpace, entries: Iterable[int]) -> QuadraticForm:
    entries = tuple(entries)
    for e in entries:
        if e not in S:
            raise SpaceError(f"{S.format_element(e)} is not in G")
    return QuadraticForm(entries)


def parse_form(S: OrderingSpace, text: str) -> QuadraticForm:
    """Comma-separated g-words, e.g. ``1,a,-a*b``; an empty string is the zero form."""
    text = text.strip()
    if not text:
        return QuadraticForm(())
    return QuadraticForm(tuple(parse_element(S, w) for w in text.split(",")))


def format_form(S: OrderingSpace, phi: QuadraticForm) -> str:
    return "(" + ", ".join(S.format_element(e) for e in phi.entries) + ")"


def sign_vector(S: OrderingSpace, a: int) -> Vector:
    return tuple(-1 if (a >> i) & 1 else 1 for i in range(S.n))


def signature_vector(S: OrderingSpace, phi: QuadraticForm) -> Vector:
    sig = [0] * S.n
    for a in phi.entries:
        for i in range(S.n):
            sig[i] += -1 if (a >> i) & 1 else 1
    return tuple(sig)


def witt_element(S: OrderingSpace, phi: QuadraticForm) -> WittElement:
    return WittElement(signature_vector(S, phi), phi.dimension & 1)


def isometric(S: OrderingSpace, phi: QuadraticForm, psi: QuadraticForm) -> bool:
    return phi.dimension == psi.dimension and signature_vector(S, phi) == signature_vector(S, psi)


def witt_equivalent(S: OrderingSpace, phi: QuadraticForm, psi: QuadraticForm) -> bool:
    return witt_element(S, phi) == witt_element(S, psi)


def hyperbolic(S: OrderingSpace, k: int = 1) -> QuadraticForm:
    return QuadraticForm((0, S.minus_one) * k)


def pfister(S: OrderingSpace, elements: Sequence[int]) -> QuadraticForm:
    """<<a_1, ..., a_n>> = (1, a_1) x ... x (1, a_n)."""
    out = QuadraticForm((0,))
    for a in elements:
        out = out * form(S, (0, a))
    return out


# --- integer lattices ---------------------------------------------------------


class Lattice:
    """Integer row lattice kept in Hermite normal form.

    Rows are in echelon form with positive pivots and entries above each pivot
    reduced into [0, pivot), so equal lattices have equal ``rows``.
    """

    def __init__(self, width: int, vectors: Iterable[Sequence[int]] = ()):
        self.width = width
        self._rows: dict[int, list[int]] = {}  # pivot column -> row
        for v in vectors:
            self.add(v)

    def add(self, v: Sequence[int]) -> None:
        v = list(v)
        if len(v) != self.width:
            raise ValueError("vector has the wrong width")
        for col in range(self.width):
            if v[col] == 0:
                continue
            row = self._rows.get(col)
            if row is None:
                if v[col] < 0:
                    v = [-x for x in v]
                self._rows[col] = v
                return
            a, b = row[col], v[col]
            if b % a == 0:
                q = b // a
                v = [x - q * y for x, y in zip(v, row)]
                continue
            g, s, t = _xgcd(a, b)
            new = [s * x + t * y for x, y in zip(row, v)]
            v = [(a // g) * y - (b // g) * x for x, y in zip(row, v)]
            self._rows[col] = new

    def reduce(self, v: Sequence[int]) -> list[int]:
        v = list(v)
        for col in range(self.width):
            row = self._rows.get(col)
            if row is None or v[col] == 0:
                continue
            q = v[col] // row[col]
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        return v

    def __contains__(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    @property
    def rows(self) -> tuple[Vector, ...]:
        cols = sorted(self._rows)
        rows = [list(self._rows[c]) for c in cols]
        # rows[k] vanishes left of cols[k], so reducing earlier rows by it
        # leaves their already reduced entries alone
        for k, c in enumerate(cols):
            for j in range(k):
                q = rows[j][c] // rows[k][c]
                if q:
                    rows[j] = [x - q * y for x, y in zip(rows[j], rows[k])]
        return tuple(tuple(r) for r in rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.width == other.width and self.rows == other.rows

    def __le__(self, other: "Lattice") -> bool:
        return all(tuple(r) in other for r in self._rows.values())


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g = gcd(a, b) > 0 with s*a + t*b = g."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def intersect(L1: Lattice, L2: Lattice) -> Lattice:
    """L1 meet L2, from the echelon form of [[B1, B1], [B2, 0]]."""
    w = L1.width
    big = Lattice(2 * w)
    for r in L1.rows:
        big.add(list(r) + list(r))
    for r in L2.rows:
        big.add(list(r) + [0] * w)
    out = Lattice(w)
    for r in big.rows:
        if not any(r[:w]):
            out.add(r[w:])
    return out


def scaled_identity(width: int, k: int) -> Lattice:
    return Lattice(width, ([k if j == i else 0 for j in range(width)] for i in range(width)))


# --- Witt ring lattices -------------------------------------------------------------


def basic_sets(S: OrderingSpace, n: int) -> list[int]:
    """Intersections of n Harrison sets (nonempty), as X masks, sorted."""
    harrison = {harrison_set(S, g) for g in S.elements}
    level = set(harrison)
    for _ in range(n - 1):
        level = {u & h for u in level for h in harrison}
    return sorted(u for u in level if u)


def restricted_signs(S: OrderingSpace, u: int) -> list[int]:
    """The distinct restrictions a|U of elements of G, as masks inside U."""
    return sorted({g & u for g in S.elements})


def ideal_generators(S: OrderingSpace, n: int) -> list[Vector]:
    """Signatures of a * <<b_1..b_n>>, deduplicated; n = 0 gives the one-dimensional forms."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return sorted({sign_vector(S, g) for g in S.elements})
    scale = 1 << n
    out = set()
    for u in basic_sets(S, n):
        for a in restricted_signs(S, u):
            out.add(tuple(0 if not (u >> i) & 1 else (-scale if (a >> i) & 1 else scale)
                          for i in range(S.n)))
    return sorted(out)


def ideal_lattice(S: OrderingSpace, n: int) -> Lattice:
    return Lattice(S.n, ideal_generators(S, n))


def witt_lattice(S: OrderingSpace) -> Lattice:
    """Signatures of all forms (the reduced Witt ring as a subgroup of Z^X)."""
    return ideal_lattice(S, 0)


def in_ideal_power(S: OrderingSpace, phi: QuadraticForm, n: int,
                   lattice: Lattice | None = None) -> bool:
    if n < 1:
        raise ValueError("n must be at least 1")
    if n == 1:
        return phi.dimension % 2 == 0
    L = lattice if lattice is not None else ideal_lattice(S, n)
    return signature_vector(S, phi) in L


def congruence_lattice(S: OrderingSpace, n: int) -> Lattice:
    """Witt signatures that are 0 mod 2^n at every ordering."""
    return intersect(witt_lattice(S), scaled_identity(S.n, 1 << n))


def lam_b_equivalence(S: OrderingSpace, n: int) -> bool:
    """Whether sgn = 0 mod 2^n everywhere characterises I^n on this space."""
    if n < 1:
        raise ValueError("n must be at least 1")
    ideal = ideal_lattice(S, n)
    if not ideal <= congruence_lattice(S, n):
        raise SpaceError("a generator of I^n has a signature not divisible by 2^n")
    return ideal == congruence_lattice(S, n)


def naive_in_ideal_power(S: OrderingSpace, phi: QuadraticForm, n: int,
                         coefficient_bound: int = 4, box: int = 12) -> bool:
    """Bounded search: is sgn(phi) / 2^n a combination of generator patterns with small coefficients?

    Reachable vectors are tracked in a dense boolean box [-box, box]^X.
    """
    if S.n > 5:
        raise SpaceError("the naive search is limited to |X| <= 5")
    sig = signature_vector(S, phi)
    scale = 1 << n
    if any(s % scale for s in sig):
        return False
    target = tuple(s // scale for s in sig)
    if any(abs(t) > box for t in target):
        return False
    gens = [tuple(v // scale for v in g) for g in ideal_generators(S, n)]
    side = 2 * box + 1
    reach = np.zeros((side,) * S.n, dtype=bool)
    reach[(box,) * S.n] = True
    for g in gens:
        new = reach.copy()
        for k in range(-coefficient_bound, coefficient_bound + 1):
            if k == 0:
                continue
            shift = [k * c for c in g]
            if any(abs(s) >= side for s in shift):
                continue
            src = tuple(slice(max(0, -s), side - max(0, s)) for s in shift)
            dst = tuple(slice(max(0, s), side - max(0, -s)) for s in shift)
            new[dst] |= reach[src]
        reach = new
    return bool(reach[tuple(t + box for t in target)])


def random_form(S: OrderingSpace, rng, max_dim: int = 8) -> QuadraticForm:
    elems = S.elements
    return QuadraticForm(tuple(elems[rng.randrange(len(elems))]
                               for _ in range(rng.randrange(max_dim + 1))))


def all_forms(S: OrderingSpace, dimension: int) -> Iterable[QuadraticForm]:
    """Every form of the given dimension up to reordering of entries."""
    elems = S.elements
    for combo in product(range(len(elems)), repeat=dimension):
        if list(combo) == sorted(combo):
            yield QuadraticForm(tuple(elems[i] for i in combo))


def signature_support(sig: Vector) -> int:
    return sum(1 << i for i, s in enumerate(sig) if s)


def support_size(sig: Vector) -> int:
    return popcount(signature_support(sig))
