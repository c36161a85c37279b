"""Finite candidate spaces of orderings and the brute-force axiom oracle.

An :class:`OrderingSpace` is a pair (X, G) with X a finite list of labels and G
a group of sign functions on X, each stored as an int mask over X (bit i set
means the value -1 at ordering i).  ``gens[0]`` is always the constant -1, so
a character of G, written as its values on ``gens``, sends -1 to -1 exactly
when its bit 0 is set.

Subsets of X are int masks over X throughout.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .f2core import (
    DEFAULT_CHARACTER_BOUND,
    BoundExceeded,
    Coordinates,
    F2Subspace,
    echelonize,
    parity,
    popcount,
)

LABEL_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class OracleConfig:
    """Enumeration bounds, as dimensions of G over GF(2)."""

    max_dim: int = 8
    char_bound: int = DEFAULT_CHARACTER_BOUND

    @classmethod
    def from_env(cls) -> "OracleConfig":
        raw = os.environ.get("ORDSPACE_MAX_DIM")
        return cls(max_dim=int(raw)) if raw else cls()


class SpaceError(ValueError):
    pass


@dataclass(frozen=True)
class OrderingSpace:
    labels: tuple[str, ...]
    gens: tuple[int, ...]
    names: tuple[tuple[str, int], ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        n = len(self.labels)
        if n == 0:
            raise SpaceError("X must be nonempty")
        if len(set(self.labels)) != n:
            raise SpaceError("duplicate ordering labels")
        if not self.gens or self.gens[0] != (1 << n) - 1:
            raise SpaceError("gens[0] must be the constant -1")
        if echelonize(self.gens, n).rank != len(self.gens):
            raise SpaceError("generators are linearly dependent")

    @classmethod
    def from_rows(cls, labels: Sequence[str], rows: Iterable[int], names=()) -> "OrderingSpace":
        """Build the canonical space whose group is spanned by ``rows`` (plus -1)."""
        labels = tuple(labels)
        n = len(labels)
        full = (1 << n) - 1
        R = echelonize([full, *rows], n)
        # -1 is the XOR of all reduced rows; dropping the last one keeps a basis
        gens = (full,) + R.rows[:-1]
        return cls(labels, gens, tuple(names))

    # --- basic data -------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return len(self.gens)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def minus_one(self) -> int:
        return self.full

    @property
    def order(self) -> int:
        return 1 << self.dim

    @cached_property
    def group(self) -> F2Subspace:
        return echelonize(self.gens, self.n)

    @cached_property
    def coordinates(self) -> Coordinates:
        return Coordinates(self.gens, self.n)

    @cached_property
    def index_of(self) -> dict[str, int]:
        return {lbl: i for i, lbl in enumerate(self.labels)}

    @cached_property
    def name_map(self) -> dict[str, int]:
        return dict(self.names)

    @cached_property
    def chars(self) -> tuple[int, ...]:
        """Each ordering as a character: its values on ``gens``."""
        return tuple(
            sum(((g >> i) & 1) << j for j, g in enumerate(self.gens)) for i in range(self.n)
        )

    @cached_property
    def char_index(self) -> dict[int, int]:
        return {c: i for i, c in enumerate(self.chars)}

    @cached_property
    def elements(self) -> tuple[int, ...]:
        """All of G; position t holds the element with coordinate vector t."""
        els = [0]
        for g in self.gens:
            els += [e ^ g for e in els]
        return tuple(els)

    def __contains__(self, mask: int) -> bool:
        return self.coordinates.try_coords(mask) is not None

    def coords(self, mask: int) -> int:
        t = self.coordinates.try_coords(mask)
        if t is None:
            raise SpaceError(f"{self.format_element(mask)} is not in G")
        return t

    def value(self, char: int, mask: int) -> int:
        """Value of a character at an element of G (0 for +1, 1 for -1)."""
        return parity(char & self.coords(mask))

    def is_even(self, char: int) -> bool:
        return not char & 1

    def kernel(self, chars: Iterable[int]) -> F2Subspace:
        """Elements of G on which all given characters are +1."""
        from .f2core import _orthogonal

        perp = _orthogonal(list(chars), self.dim)
        return echelonize((self.coordinates.element(t) for t in perp.rows), self.n)

    def label_set(self, mask: int) -> tuple[str, ...]:
        return tuple(self.labels[i] for i in range(self.n) if (mask >> i) & 1)

    def mask_of(self, labels: Iterable[str]) -> int:
        m = 0
        for lbl in labels:
            m |= 1 << self.index_of[lbl]
        return m

    def format_element(self, mask: int) -> str:
        return "".join("-" if (mask >> i) & 1 else "+" for i in range(self.n))

    def char_word(self, char: int) -> str:
        """A sigma-word for a character in the span of X, or its bit string."""
        if char in self.char_index:
            return self.labels[self.char_index[char]]
        return "chi[" + "".join(str((char >> j) & 1) for j in range(self.dim)) + "]"

    def restrict(self, ymask: int) -> "OrderingSpace":
        """(Y, G|_Y) for a nonempty subset Y of X, keeping labels."""
        if ymask == 0:
            raise SpaceError("empty subset")
        idx = [i for i in range(self.n) if (ymask >> i) & 1]
        rows = [_compress(g, idx) for g in self.gens]
        names = tuple((nm, _compress(m, idx)) for nm, m in self.names)
        return OrderingSpace.from_rows([self.labels[i] for i in idx], rows, names)

    def relabel(self, labels: Sequence[str]) -> "OrderingSpace":
        return OrderingSpace(tuple(labels), self.gens, self.names)


def _compress(mask: int, idx: Sequence[int]) -> int:
    return sum(((mask >> i) & 1) << k for k, i in enumerate(idx))


def space_from_characters(labels: Sequence[str], chars: Sequence[int], rank: int) -> OrderingSpace:
    """Space whose orderings are given characters of a group G with |G| = 2^rank.

    Characters are bit vectors over a basis of chi(G); G acts as linear forms,
    so the basis form e_j is the element whose value at x is bit j of x.  All
    characters must have odd weight so that the all-ones form is -1.
    """
    if any(not parity(c) for c in chars):
        raise SpaceError("every ordering must send -1 to -1 (odd weight)")
    rows = []
    for j in range(rank):
        rows.append(sum(((c >> j) & 1) << i for i, c in enumerate(chars)))
    return OrderingSpace.from_rows(labels, rows)


# --- value sets, Harrison sets, subspaces -----------------------------------


def value_set(S: OrderingSpace, a: int, b: int) -> frozenset[int]:
    """D(a, b): elements of G agreeing at every ordering with a or with b."""
    for g in (a, b):
        if g not in S:
            raise SpaceError(f"{S.format_element(g)} is not in G")
    free = a ^ b
    return frozenset(c for c in S.elements if not (c ^ a) & ~free)


def harrison_set(S: OrderingSpace, a: int) -> int:
    if a not in S:
        raise SpaceError(f"{S.format_element(a)} is not in G")
    return S.full & ~a


def positive_kernel(S: OrderingSpace, ymask: int) -> list[int]:
    """Basis (as masks) of {a in G : a(y) = +1 for every y in Y}."""
    table: list[tuple[int, int, int]] = []
    kernel = []
    for g in S.gens:
        v, combo = g & ymask, g
        for p, row, c in table:
            if (v >> p) & 1:
                v ^= row
                combo ^= c
        if v:
            table.append(((v & -v).bit_length() - 1, v, combo))
        else:
            kernel.append(combo)
    return kernel


def closure(S: OrderingSpace, ymask: int) -> int:
    """Smallest subspace of X containing Y."""
    hull = S.full
    for a in positive_kernel(S, ymask):
        hull &= ~a
    return hull


def is_subspace_set(S: OrderingSpace, ymask: int) -> bool:
    return ymask != 0 and closure(S, ymask) == ymask


def subspace(S: OrderingSpace, gens: Iterable[int] = ()) -> OrderingSpace:
    """(Y, G|_Y) for Y the intersection of the Harrison sets of ``gens``."""
    y = S.full
    for a in gens:
        y &= harrison_set(S, a)
    if y == 0:
        raise SpaceError("the intersection of Harrison sets is empty")
    return S.restrict(y)


def restricted_rank(S: OrderingSpace, ymask: int) -> int:
    return echelonize((g & ymask for g in S.gens), S.n).rank


# --- fans and stability ------------------------------------------------------


def is_fan(S: OrderingSpace) -> bool:
    """X is all characters with x(-1) = -1; X injects there, so count."""
    return 2 * S.n == S.order


def is_fan_subset(S: OrderingSpace, vmask: int) -> bool:
    if vmask == 0:
        raise SpaceError("empty subset")
    if popcount(vmask) <= 2:
        return True
    if not is_subspace_set(S, vmask):
        return False
    return 2 * popcount(vmask) == 1 << restricted_rank(S, vmask)


def four_element_sets_with_trivial_product(S: OrderingSpace) -> list[tuple[int, int, int, int]]:
    """4-subsets {i<j<k<l} of X with sigma_i sigma_j sigma_k sigma_l = 1."""
    by_product: dict[int, list[tuple[int, int]]] = {}
    for i, j in combinations(range(S.n), 2):
        by_product.setdefault(S.chars[i] ^ S.chars[j], []).append((i, j))
    found = set()
    for pairs in by_product.values():
        for (i, j), (k, l) in combinations(pairs, 2):
            if len({i, j, k, l}) == 4:
                found.add(tuple(sorted((i, j, k, l))))
    return sorted(found)


def enumerate_four_fans(S: OrderingSpace) -> list[tuple[int, int, int, int]]:
    return [q for q in four_element_sets_with_trivial_product(S)
            if is_fan_subset(S, sum(1 << i for i in q))]


def fans_by_level(S: OrderingSpace) -> list[set[int]]:
    """levels[k] is the set of fans of size 2^k (as X masks)."""
    levels: list[set[int]] = [{1 << i for i in range(S.n)}]
    while True:
        nxt: set[int] = set()
        for v in levels[-1]:
            members = [i for i in range(S.n) if (v >> i) & 1]
            base = S.chars[members[0]]
            for t in range(S.n):
                if (v >> t) & 1:
                    continue
                shift = base ^ S.chars[t]
                w = v
                ok = True
                for i in members:
                    j = S.char_index.get(S.chars[i] ^ shift)
                    if j is None:
                        ok = False
                        break
                    w |= 1 << j
                if ok and w not in nxt and is_fan_subset(S, w):
                    nxt.add(w)
        if not nxt:
            return levels
        levels.append(nxt)


def stability_index(S: OrderingSpace) -> int:
    return len(fans_by_level(S)) - 1


# --- the axiom oracle ---------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    is_space: bool
    axiom: str | None = None
    witness: tuple | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.is_space


def _element_array(S: OrderingSpace) -> np.ndarray:
    if S.n > 62:
        raise BoundExceeded("the oracle handles at most 62 orderings")
    return np.array(S.elements, dtype=np.int64)


def _subset_matrix(E: np.ndarray) -> np.ndarray:
    """M[e, s] = 1 iff s is -1 only where e is -1, i.e. s in D(e, 1)."""
    return (E[None, :] & ~E[:, None]) == 0


def verify_axioms(S: OrderingSpace, config: OracleConfig | None = None) -> Verdict:
    """Decide by exhaustive search whether the candidate (X, G) is a space of orderings."""
    config = config or OracleConfig.from_env()
    if S.dim > config.max_dim:
        raise BoundExceeded(f"dim G = {S.dim} exceeds the oracle bound {config.max_dim}")

    if S.minus_one not in S:
        return Verdict(False, "minus_one", (), "-1 is not in G")
    seen: dict[int, int] = {}
    for i, c in enumerate(S.chars):
        if c in seen:
            return Verdict(False, "separation", (seen[c], i),
                           f"G does not separate {S.labels[seen[c]]} and {S.labels[i]}")
        seen[c] = i

    E = _element_array(S)
    N = len(E)
    sub = _subset_matrix(E)

    # axiom (1): an odd character with D-closed kernel must come from X.
    # D(a, b) = a * D(1, ab), so the kernel is D-closed iff it is closed
    # under passing from e to any s in D(1, e).
    t = np.arange(N, dtype=np.int64)
    pairs = np.argwhere(sub)
    for char in range(1, 1 << S.dim, 2):
        if char in S.char_index:
            continue
        val = _parity_array(t & char)
        if not np.any((val[pairs[:, 0]] == 0) & (val[pairs[:, 1]] == 1)):
            return Verdict(False, "axiom1", (char,),
                           f"character {S.char_word(char)} has a D-closed kernel but is not in X")

    # axiom (2), normalised to a3 = 1 by translating every entry by a3:
    # for all a1, a2: U_{c in D(a2,1)} D(a1,c)  is inside  U_{d in D(a1,a2)} D(d,1)
    subf = sub.astype(np.float32)
    block = max(1, min(N, (1 << 22) // (N * N)))
    for start in range(0, N, block):
        a1s = np.arange(start, min(N, start + block))
        A = E[a1s]
        # Da1[k, x, y] = y in D(a1_k, x)
        Da1 = ((E[None, None, :] ^ A[:, None, None]) & ~(A[:, None, None] ^ E[None, :, None])) == 0
        Df = Da1.astype(np.float32)
        left = np.matmul(subf[None, :, :], Df) > 0.5
        right = np.matmul(Df, subf[None, :, :]) > 0.5
        bad = left & ~right
        if bad.any():
            k, a2, b = (int(v) for v in np.argwhere(bad)[0])
            a1 = int(a1s[k])
            c = next(c for c in range(N) if sub[a2, c] and Da1[k, c, b])
            w = (int(E[a1]), int(E[a2]), 0, int(E[b]), int(E[c]))
            a1s_, a2s_, a3s_, bs_, cs_ = (S.format_element(v) for v in w)
            return Verdict(False, "axiom2", w,
                           f"b = {bs_} is in D(a1, c) with a1 = {a1s_}, c = {cs_} in D(a2, a3), "
                           f"a2 = {a2s_}, a3 = {a3s_}, but in no D(d, a3) with d in D(a1, a2)")
    return Verdict(True)


def _parity_array(v: np.ndarray) -> np.ndarray:
    v = v.copy()
    out = np.zeros_like(v)
    while np.any(v):
        out ^= v & 1
        v >>= 1
    return out


def replay_witness(S: OrderingSpace, verdict: Verdict) -> bool:
    """Re-check a negative verdict directly from the definitions."""
    if verdict.is_space:
        return False
    if verdict.axiom == "minus_one":
        return S.minus_one not in S
    if verdict.axiom == "separation":
        i, j = verdict.witness
        return i != j and S.chars[i] == S.chars[j]
    if verdict.axiom == "axiom1":
        (char,) = verdict.witness
        if not char & 1 or char in S.char_index:
            return False
        ker = [g for g in S.elements if not S.value(char, g)]
        kset = set(ker)
        return all(value_set(S, a, b) <= kset for a in ker for b in ker)
    if verdict.axiom == "axiom2":
        a1, a2, a3, b, c = verdict.witness
        if not (b in value_set(S, a1, c) and c in value_set(S, a2, a3)):
            return False
        return not any(b in value_set(S, d, a3) for d in value_set(S, a1, a2))
    return False


# --- space file format ---------------------------------------------------------


class SpaceFileError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _significant_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def load_space(text: str) -> OrderingSpace:
    lines = list(_significant_lines(text))
    if not lines or lines[0][1] != "space v1":
        raise SpaceFileError(lines[0][0] if lines else 1, "expected header 'space v1'")
    if len(lines) < 2 or not lines[1][1].startswith("orderings:"):
        raise SpaceFileError(lines[1][0] if len(lines) > 1 else lines[0][0],
                             "expected 'orderings: <label> ...'")
    lineno, line = lines[1]
    labels = line[len("orderings:"):].split()
    if not labels:
        raise SpaceFileError(lineno, "no orderings")
    for lbl in labels:
        if not LABEL_RE.match(lbl):
            raise SpaceFileError(lineno, f"bad ordering label {lbl!r}")
    if len(set(labels)) != len(labels):
        dup = next(lbl for lbl in labels if labels.count(lbl) > 1)
        raise SpaceFileError(lineno, f"duplicate ordering label {dup!r}")
    if len(lines) < 3 or lines[2][1] != "generators:":
        raise SpaceFileError(lines[2][0] if len(lines) > 2 else lineno, "expected 'generators:'")
    names: list[tuple[str, int]] = []
    for lineno, line in lines[3:]:
        name, sep, rest = line.partition(":")
        name = name.strip()
        if not sep:
            raise SpaceFileError(lineno, "expected '<name>: <signs>'")
        if name != "-1" and not LABEL_RE.match(name):
            raise SpaceFileError(lineno, f"bad generator name {name!r}")
        if any(nm == name for nm, _ in names):
            raise SpaceFileError(lineno, f"duplicate generator name {name!r}")
        signs = rest.split()
        if len(signs) != len(labels):
            raise SpaceFileError(lineno, f"expected {len(labels)} signs, got {len(signs)}")
        mask = 0
        for i, s in enumerate(signs):
            if s == "-":
                mask |= 1 << i
            elif s != "+":
                raise SpaceFileError(lineno, f"bad sign {s!r}")
        if not names:
            if name != "-1":
                raise SpaceFileError(lineno, "the first generator must be '-1'")
            if mask != (1 << len(labels)) - 1:
                raise SpaceFileError(lineno, "the '-1' row must be all '-'")
        names.append((name, mask))
    if not names:
        raise SpaceFileError(lines[-1][0], "missing the '-1' generator row")
    return OrderingSpace.from_rows(labels, [m for _, m in names], names)


def dump_space(S: OrderingSpace, comment: str | None = None) -> str:
    out = []
    if comment:
        out += [f"# {line}" for line in comment.splitlines()]
    out += ["space v1", "orderings: " + " ".join(S.labels), "generators:"]
    rows = list(S.names) if S.names else []
    if not rows or rows[0][0] != "-1":
        rows = [("-1", S.minus_one)] + [(f"g{j}", g) for j, g in enumerate(S.gens[1:], 1)]
    for name, mask in rows:
        out.append(f"{name}: " + " ".join(S.format_element(mask)))
    return "\n".join(out) + "\n"


# --- words -----------------------------------------------------------------------


def parse_element(S: OrderingSpace, word: str) -> int:
    """A g-word such as ``1``, ``-1``, ``a*b`` or ``-a*b`` to a mask in G."""
    word = word.strip()
    if not word:
        raise SpaceError("empty word")
    mask = 0
    if word.startswith("-") and word != "-1" and not word.startswith("-1*"):
        mask = S.minus_one
        word = word[1:]
    for factor in word.split("*"):
        factor = factor.strip()
        if factor == "1":
            continue
        if factor == "-1":
            mask ^= S.minus_one
        elif factor in S.name_map:
            mask ^= S.name_map[factor]
        else:
            raise SpaceError(f"unknown generator {factor!r}")
    return mask


def parse_character(S: OrderingSpace, word: str) -> int:
    """A sigma-word ``s1*s2*...`` to the product character; ``1`` is trivial."""
    char = 0
    for factor in word.split("*"):
        factor = factor.strip()
        if factor == "1":
            continue
        if factor not in S.index_of:
            raise SpaceError(f"unknown ordering {factor!r}")
        char ^= S.chars[S.index_of[factor]]
    return char
