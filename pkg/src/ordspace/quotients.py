"""Quotient structures (X0, G0) and the decision of when they are spaces of orderings.

Characters are ints over the parent space's ``gens``; gamma(-1) = 1 means bit 0
is clear.  Presentations are tuples of ordering indices of the parent space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .f2core import F2Subspace, _orthogonal, echelonize, parity, popcount
from .spaces import (
    OracleConfig,
    OrderingSpace,
    SpaceError,
    _compress,
    four_element_sets_with_trivial_product,
    restricted_rank,
    stability_index,
    verify_axioms,
)
from .structure import (
    connected_components,
    extension_base,
    translation_group,
    x_delta,
)

QUOTIENT_SPACE = "QuotientSpace"
NOT_QUOTIENT_SPACE = "NotQuotientSpace"
NECESSARY_ONLY = "NecessaryOnly"


@dataclass(frozen=True)
class QuotientStructure:
    parent: OrderingSpace
    subgroup: F2Subspace
    classes: tuple[int, ...]  # restriction map r: ordering index -> index in X0
    space: OrderingSpace  # the candidate (X0, G0)
    quotient_characters: F2Subspace  # chi(G/G0) inside chi(G)

    @property
    def index_exponent(self) -> int:
        return self.parent.dim - self.subgroup.rank

    @property
    def index(self) -> int:
        return 1 << self.index_exponent

    @property
    def injective(self) -> bool:
        return self.space.n == self.parent.n

    def gamma(self) -> int:
        """The unique gamma != 1 with G0 = ker(gamma); index 2 only."""
        if self.index_exponent != 1:
            raise SpaceError("gamma is only defined for subgroups of index 2")
        return self.quotient_characters.rows[0]


def restrict(S: OrderingSpace, G0: F2Subspace) -> QuotientStructure:
    """X0 = X|G0 with its restriction map and chi(G/G0)."""
    if G0.dim != S.n:
        raise SpaceError("subgroup lives in the wrong ambient space")
    if S.minus_one not in G0:
        raise SpaceError("-1 is not in G0")
    if not G0 <= S.group:
        raise SpaceError("G0 is not a subgroup of G")
    keys: dict[int, int] = {}
    classes = []
    reps = []
    for i in range(S.n):
        key = sum(((h >> i) & 1) << k for k, h in enumerate(G0.rows))
        if key not in keys:
            keys[key] = len(reps)
            reps.append(i)
        classes.append(keys[key])
    space = OrderingSpace.from_rows([S.labels[i] for i in reps],
                                    [_compress(h, reps) for h in G0.rows])
    qchars = _orthogonal([S.coords(h) for h in G0.rows], S.dim)
    return QuotientStructure(S, G0, tuple(classes), space, qchars)


def kernel_subgroup(S: OrderingSpace, gammas: Sequence[int]) -> F2Subspace:
    for g in gammas:
        if g & 1:
            raise SpaceError("every gamma must satisfy gamma(-1) = 1")
    return S.kernel(gammas)


# --- products of orderings --------------------------------------------------------


@dataclass(frozen=True)
class Products:
    """X^2 as a table from product to index pairs; X^4 by meet in the middle."""

    space: OrderingSpace

    @cached_property
    def pairs(self) -> dict[int, list[tuple[int, int]]]:
        table: dict[int, list[tuple[int, int]]] = {0: []}
        chars = self.space.chars
        for i, j in combinations(range(self.space.n), 2):
            table.setdefault(chars[i] ^ chars[j], []).append((i, j))
        return table

    def in_x2(self, gamma: int) -> bool:
        return gamma in self.pairs

    def in_x4(self, gamma: int) -> bool:
        return any((gamma ^ p) in self.pairs for p in self.pairs)

    def x4(self) -> set[int]:
        keys = list(self.pairs)
        return {p ^ q for p in keys for q in keys}

    def presentations(self, gamma: int) -> list[tuple[int, ...]]:
        if gamma == 0:
            raise SpaceError("gamma must be nontrivial")
        if gamma & 1:
            raise SpaceError("gamma must satisfy gamma(-1) = 1")
        if gamma in self.pairs:
            return sorted(self.pairs[gamma])
        found = set()
        for p, plist in self.pairs.items():
            qlist = self.pairs.get(gamma ^ p)
            if not qlist or p == 0:
                continue
            for a in plist:
                for b in qlist:
                    quad = set(a) | set(b)
                    if len(quad) == 4:
                        found.add(tuple(sorted(quad)))
        return sorted(found)


def minimal_presentations(S: OrderingSpace, gamma: int) -> list[tuple[int, ...]]:
    """All shortest ways (length 2, else length 4) of writing gamma as a product of orderings.

    Presentations are sorted index tuples in lexicographic order; an empty list
    means gamma is not in X^4.
    """
    return Products(S).presentations(gamma)


def presentation_words(S: OrderingSpace, pres: Sequence[int]) -> str:
    return "*".join(S.labels[i] for i in pres)


# --- index two ---------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientVerdict:
    status: str
    reasons: tuple[tuple[str, bool, str], ...] = ()
    oracle_status: bool | None = None

    @property
    def is_quotient_space(self) -> bool | None:
        if self.status == QUOTIENT_SPACE:
            return True
        if self.status == NOT_QUOTIENT_SPACE:
            return False
        return None

    @property
    def consistent(self) -> bool:
        if self.oracle_status is None or self.status == NECESSARY_ONLY:
            return True
        return self.oracle_status == self.is_quotient_space

    def with_oracle(self, value: bool) -> "QuotientVerdict":
        return QuotientVerdict(self.status, self.reasons, value)

    def report(self) -> str:
        lines = [f"{'PASS' if ok else 'FAIL'} {name}: {witness}" for name, ok, witness in self.reasons]
        lines.append(f"status: {self.status}")
        if self.oracle_status is not None:
            lines.append(f"oracle: {'space' if self.oracle_status else 'not a space'}"
                         f" ({'agrees' if self.consistent else 'DISAGREES'})")
        return "\n".join(lines)


def _component_index(S: OrderingSpace, comps: Sequence[int]) -> list[int]:
    owner = [0] * S.n
    for k, comp in enumerate(comps):
        for i in range(S.n):
            if (comp >> i) & 1:
                owner[i] = k
    return owner


def _pair_condition(S, comps, owner, a, b) -> bool:
    """sigma_a, sigma_b share a component and it equals X_{sigma_a sigma_b}."""
    if owner[a] != owner[b]:
        return False
    return comps[owner[a]] == x_delta(S, S.chars[a] ^ S.chars[b])


def nec_cond_for_presentation(S: OrderingSpace, pres: Sequence[int],
                              comps: Sequence[int] | None = None) -> tuple[bool, str]:
    """The component condition for one minimal presentation of gamma."""
    comps = list(comps) if comps is not None else connected_components(S)
    owner = _component_index(S, comps)
    used = {owner[i] for i in pres}
    if len(used) == 1:
        return True, "all orderings in one component"
    if all(popcount(comps[k]) == 1 for k in used):
        return True, "all components singleton"
    if len(pres) == 2:
        big = [k for k in used if popcount(comps[k]) > 1]
        if len(big) == 1:
            return True, "k=2, exactly one non-singleton component"
        return False, "k=2 with two non-singleton components"
    for pair in combinations(pres, 2):
        rest = tuple(i for i in pres if i not in pair)
        c, d = pair
        if not _pair_condition(S, comps, owner, c, d):
            continue
        a, b = rest
        if _pair_condition(S, comps, owner, a, b):
            return True, (f"components X_{{{S.labels[a]}*{S.labels[b]}}} and "
                          f"X_{{{S.labels[c]}*{S.labels[d]}}}")
        if popcount(comps[owner[a]]) == 1 and popcount(comps[owner[b]]) == 1:
            return True, (f"{S.labels[a]}, {S.labels[b]} singleton, "
                          f"X_{{{S.labels[c]}*{S.labels[d]}}} a component")
    return False, "no reindexing meets the component condition"


def check_nec_cond_index2(S: OrderingSpace, gamma: int) -> tuple[bool, str]:
    """Necessary condition on gamma = sigma_1...sigma_k; true if any presentation meets it."""
    pres = minimal_presentations(S, gamma)
    if not pres:
        return False, "gamma is not in X^4"
    comps = connected_components(S)
    first_failure = None
    for p in pres:
        ok, why = nec_cond_for_presentation(S, p, comps)
        if ok:
            return True, f"{presentation_words(S, p)}: {why}"
        first_failure = first_failure or f"{presentation_words(S, p)}: {why}"
    return False, first_failure


def _restrict_character(S: OrderingSpace, sub: OrderingSpace, pres: Sequence[int]) -> int:
    c = 0
    for i in pres:
        c ^= sub.chars[sub.index_of[S.labels[i]]]
    return c


def recursive_index2(S: OrderingSpace, gamma: int, trail: list | None = None,
                     depth: int | None = None) -> tuple[bool, list[tuple[str, bool, str]]]:
    """Finite recursive decision for index 2.

    Restrict to the components met by a presentation; several components are
    settled by the component condition; a single component is peeled as a
    group extension by its full translation group and the restriction of gamma
    is examined one level down.
    """
    trail = [] if trail is None else trail
    depth = S.dim if depth is None else depth
    if depth < 0:
        raise RuntimeError("recursion exceeded dim G")
    pres = minimal_presentations(S, gamma)
    if not pres:
        trail.append(("gamma in X^4", False, f"on {len(S.labels)} orderings"))
        return False, trail
    comps = connected_components(S)
    owner = _component_index(S, comps)
    y = 0
    for i in pres[0]:
        y |= comps[owner[i]]
    if y != S.full:
        core = S.restrict(y)
        trail.append(("core", True, "{" + " ".join(core.labels) + "}"))
        return recursive_index2(core, _restrict_character(S, core, pres[0]), trail, depth - 1)
    if len(comps) > 1:
        ok, why = check_nec_cond_index2(S, gamma)
        trail.append(("component condition", ok, why))
        return ok, trail
    T = translation_group(S)
    if gamma in T:
        trail.append(("gamma translates X", True, "quotient is a group extension"))
        return True, trail
    if len(T) == 1:
        raise RuntimeError("connected component is not a proper group extension")
    base, rep_of, _ = extension_base(S, T)
    reduced = 0
    for i in pres[0]:
        reduced ^= base.chars[base.index_of[S.labels[rep_of[i]]]]
    trail.append(("peel extension", True, f"rank {len(T).bit_length() - 1}, "
                  f"{S.n} -> {base.n} orderings"))
    return recursive_index2(base, reduced, trail, depth - 1)


def decide_index2(S: OrderingSpace, gamma: int) -> QuotientVerdict:
    """Decide whether ker(gamma) gives a quotient space, by the stability-index ladder."""
    reasons: list[tuple[str, bool, str]] = []
    pres = minimal_presentations(S, gamma)
    if not pres:
        reasons.append(("gamma in X^4", False, "no product of at most four orderings"))
        return QuotientVerdict(NOT_QUOTIENT_SPACE, tuple(reasons))
    k = len(pres[0])
    reasons.append(("gamma in X^4", True, f"k={k}: {presentation_words(S, pres[0])}"))
    stab = stability_index(S)
    if stab <= 1:
        reasons.append(("SAP sufficiency", True, f"stability index {stab}"))
        return QuotientVerdict(QUOTIENT_SPACE, tuple(reasons))
    if stab == 2:
        ok, why = check_nec_cond_index2(S, gamma)
        reasons.append(("component condition (stability 2)", ok, why))
        return QuotientVerdict(QUOTIENT_SPACE if ok else NOT_QUOTIENT_SPACE, tuple(reasons))
    ok, trail = recursive_index2(S, gamma)
    reasons.append(("recursive conditions", ok, f"stability index {stab}"))
    reasons.extend(trail)
    return QuotientVerdict(QUOTIENT_SPACE if ok else NOT_QUOTIENT_SPACE, tuple(reasons))


# --- general finite index -----------------------------------------------------------


def generator_set_S(S: OrderingSpace, G0: F2Subspace) -> tuple[list[int], bool]:
    """S = X^4 meet chi(G/G0), and whether S^perp = G0."""
    Q = restrict(S, G0)
    prods = Products(S)
    members = [c for c in Q.quotient_characters.elements() if prods.in_x4(c)]
    spans = echelonize(members, S.dim).rank == Q.index_exponent
    return sorted(members), spans


def _basis_in(members: Sequence[int], dim: int) -> list[int]:
    basis: list[int] = []
    for c in members:
        if c and echelonize([*basis, c], dim).rank > len(basis):
            basis.append(c)
    return basis


def core(S: OrderingSpace, G0: F2Subspace,
         choose: Sequence[int] | None = None) -> tuple[OrderingSpace, int]:
    """Union of the components of the orderings in minimal presentations of a basis of S.

    ``choose[k]`` selects which presentation of the k-th basis element is used
    (default: the first).  Returns the core subspace and its X mask.
    """
    members, spans = generator_set_S(S, G0)
    if not spans:
        raise SpaceError("X^4 meet chi(G/G0) does not span chi(G/G0)")
    basis = _basis_in(members, S.dim)
    comps = connected_components(S)
    owner = _component_index(S, comps)
    prods = Products(S)
    y = 0
    for k, gamma in enumerate(basis):
        pres = prods.presentations(gamma)
        p = pres[choose[k] if choose else 0]
        for i in p:
            y |= comps[owner[i]]
    return S.restrict(y), y


def presentation_component_sets(S: OrderingSpace, gamma: int) -> list[frozenset[int]]:
    """For every minimal presentation of gamma, the set of components it meets."""
    comps = connected_components(S)
    owner = _component_index(S, comps)
    return [frozenset(comps[owner[i]] for i in p) for p in minimal_presentations(S, gamma)]


def is_space_by_structure(S: OrderingSpace, depth: int | None = None) -> tuple[bool, str]:
    """Finite recognition from the structure of finite spaces, without the axioms.

    A finite candidate is a space iff it is a single point with G = {+-1}, or
    the direct sum of its 4-point-relation classes with each summand a space,
    or a single class that is a proper group extension of a space.
    """
    depth = S.dim if depth is None else depth
    if S.n == 1:
        return (S.dim == 1), ("singleton" if S.dim == 1 else "singleton with |G| > 2")
    if len(set(S.chars)) != S.n:
        return False, "G does not separate X"
    if depth < 0:
        return False, "recursion bound"
    parent = list(range(S.n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for quad in four_element_sets_with_trivial_product(S):
        for j in quad[1:]:
            parent[find(j)] = find(quad[0])
    classes: dict[int, int] = {}
    for i in range(S.n):
        classes[find(i)] = classes.get(find(i), 0) | (1 << i)
    blocks = sorted(classes.values(), key=lambda m: m & -m)
    if len(blocks) > 1:
        if sum(restricted_rank(S, b) for b in blocks) != S.dim:
            return False, f"not the direct sum of its {len(blocks)} classes"
        for b in blocks:
            ok, why = is_space_by_structure(S.restrict(b), depth - 1)
            if not ok:
                return False, f"summand {{{' '.join(S.label_set(b))}}}: {why}"
        return True, f"direct sum of {len(blocks)} spaces"
    T = translation_group(S)
    if len(T) == 1:
        return False, f"connected class of {S.n} orderings is not a proper group extension"
    base, _, _ = extension_base(S, T)
    ok, why = is_space_by_structure(base, depth - 1)
    rank = len(T).bit_length() - 1
    return ok, (f"extension of rank {rank} of a space" if ok else f"base of rank-{rank} extension: {why}")


def decide_general(S: OrderingSpace, G0: F2Subspace) -> QuotientVerdict:
    """Decide a quotient of finite index: S must span, then the core decides."""
    Q = restrict(S, G0)
    m = Q.index_exponent
    reasons: list[tuple[str, bool, str]] = []
    if m == 0:
        reasons.append(("trivial quotient", True, "G0 = G"))
        return QuotientVerdict(QUOTIENT_SPACE, tuple(reasons))
    members, spans = generator_set_S(S, G0)
    nontrivial = [c for c in members if c]
    reasons.append(("S spans chi(G/G0)", spans,
                    f"|S| = {len(members)}, index 2^{m}, rank of S = "
                    f"{echelonize(members, S.dim).rank}"))
    if not spans:
        return QuotientVerdict(NOT_QUOTIENT_SPACE, tuple(reasons))
    if m == 1:
        sub = decide_index2(S, nontrivial[0])
        return QuotientVerdict(sub.status, tuple(reasons) + sub.reasons)
    core_space, y = core(S, G0)
    reasons.append(("core", True, "{" + " ".join(core_space.labels) + "}"))
    G0_core = echelonize((_compress(h, [i for i in range(S.n) if (y >> i) & 1]) for h in G0.rows),
                         core_space.n)
    Qc = restrict(core_space, G0_core)
    ok, why = is_space_by_structure(Qc.space)
    reasons.append(("core quotient is a space", ok, why))
    return QuotientVerdict(QUOTIENT_SPACE if ok else NOT_QUOTIENT_SPACE, tuple(reasons))


def brute_force_decide(S: OrderingSpace, G0: F2Subspace, config: OracleConfig | None = None) -> bool:
    """Materialise (X0, G0) and run the axiom oracle on it."""
    return verify_axioms(restrict(S, G0).space, config).is_space


def subgroups_of_index(S: OrderingSpace, m: int) -> list[F2Subspace]:
    """Every subgroup G0 with -1 in G0 and (G : G0) = 2^m."""
    even = [c << 1 for c in range(1, 1 << (S.dim - 1))]
    seen = set()
    out = []
    for combo in combinations(even, m):
        E = echelonize(combo, S.dim)
        if E.rank != m or E.rows in seen:
            continue
        seen.add(E.rows)
        out.append(S.kernel(E.rows))
    return out


def is_index2(Q: QuotientStructure) -> bool:
    return Q.index_exponent == 1


def parity_of(c: int) -> int:
    return parity(c)
