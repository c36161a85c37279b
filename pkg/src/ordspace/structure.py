"""Connectivity, direct sums, group extensions and the decomposition of finite spaces."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .f2core import echelonize
from .spaces import (
    OrderingSpace,
    SpaceError,
    _compress,
    enumerate_four_fans,
    is_subspace_set,
)


class StructureError(RuntimeError):
    """A verified space failed to decompose; the oracle and the structure code disagree."""


# --- constructions -------------------------------------------------------------


def singleton(label: str = "s") -> OrderingSpace:
    return OrderingSpace((label,), (1,))


def direct_sum(spaces: Sequence[OrderingSpace]) -> OrderingSpace:
    """Disjoint union of the orderings; G is the product of the summand groups."""
    if not spaces:
        raise SpaceError("a direct sum needs at least one summand")
    labels = [lbl for S in spaces for lbl in S.labels]
    if len(set(labels)) != len(labels):
        labels = [f"c{k}_{lbl}" for k, S in enumerate(spaces) for lbl in S.labels]
    rows = []
    offset = 0
    for S in spaces:
        rows += [g << offset for g in S.gens]
        offset += S.n
    return OrderingSpace.from_rows(labels, rows)


finite_sheaf_sum = direct_sum
"""Over a finite discrete index set the sheaf construction is the direct sum."""


def group_extension(S: OrderingSpace, rank: int) -> OrderingSpace:
    """(X, G) x H with |H| = 2^rank: every character of G x H extending some x in X.

    Ordering (x, h) is labelled ``f"{x}_{bits}"`` where ``bits`` lists h_0 h_1 ...;
    the k-th new generator takes the value h_k there.
    """
    if rank < 1:
        raise SpaceError("extension rank must be at least 1")
    width = 1 << rank
    labels = [f"{lbl}_{_bits(h, rank)}" for lbl in S.labels for h in range(width)]
    rows = []
    for g in S.gens:
        rows.append(sum(((g >> i) & 1) << (i * width + h) for i in range(S.n) for h in range(width)))
    for k in range(rank):
        rows.append(sum(((h >> k) & 1) << (i * width + h) for i in range(S.n) for h in range(width)))
    return OrderingSpace.from_rows(labels, rows)


def _bits(h: int, rank: int) -> str:
    return "".join(str((h >> k) & 1) for k in range(rank))


# --- connectivity -----------------------------------------------------------------


def connected_components(S: OrderingSpace) -> list[int]:
    """Classes of the 4-element-fan relation, as X masks sorted by lowest member."""
    parent = list(range(S.n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for quad in enumerate_four_fans(S):
        root = find(quad[0])
        for j in quad[1:]:
            parent[find(j)] = root
    classes: dict[int, int] = {}
    for i in range(S.n):
        classes[find(i)] = classes.get(find(i), 0) | (1 << i)
    return sorted(classes.values(), key=lambda m: (m & -m))


def component_of(S: OrderingSpace, i: int, components: Sequence[int] | None = None) -> int:
    for comp in components if components is not None else connected_components(S):
        if (comp >> i) & 1:
            return comp
    raise SpaceError(f"ordering {i} in no component")


# --- translations and residue spaces ------------------------------------------------


def x_delta(S: OrderingSpace, delta: int) -> int:
    """X_delta = {sigma in X : sigma * delta in X}, as an X mask."""
    m = 0
    for i, c in enumerate(S.chars):
        if (c ^ delta) in S.char_index:
            m |= 1 << i
    return m


def translation_group(S: OrderingSpace) -> list[int]:
    """All characters delta with delta(-1) = 1 and delta X = X, sorted; includes 1 (= 0)."""
    base = S.chars[0]
    out = []
    for c in S.chars:
        delta = base ^ c
        if all((x ^ delta) in S.char_index for x in S.chars):
            out.append(delta)
    return sorted(out)


def residue_space(S: OrderingSpace, delta: int) -> tuple[OrderingSpace, dict[str, str]]:
    """(X_delta restricted to ker delta, (ker delta)|X_delta).

    Returns the space, labelled by the first member of each {sigma, sigma*delta}
    orbit, and the 2-to-1 map from X_delta labels to those labels.
    """
    if delta == 0 or delta & 1:
        raise SpaceError("delta must be a nontrivial character with delta(-1) = 1")
    xd = x_delta(S, delta)
    if not xd:
        raise SpaceError("X_delta is empty")
    reps: list[int] = []
    fold: dict[str, str] = {}
    for i in range(S.n):
        if not (xd >> i) & 1:
            continue
        j = S.char_index[S.chars[i] ^ delta]
        rep = min(i, j)
        if rep == i:
            reps.append(i)
        fold[S.labels[i]] = S.labels[rep]
    ker = S.kernel([delta])
    rows = [_compress(g, reps) for g in ker.rows]
    space = OrderingSpace.from_rows([S.labels[i] for i in reps], rows)
    return space, fold


def extension_base(S: OrderingSpace, T: Sequence[int]) -> tuple[OrderingSpace, list[int], list[int]]:
    """Quotient of S by the fixed subgroup of a translation group T.

    Returns the base space (labelled by the first ordering of each T-orbit), the
    orbit representative index of each ordering of S, and complement masks
    f_1..f_t with G = T^perp + <f_k>.
    """
    fixed = S.kernel(T)
    rep_of = []
    reps = []
    for i, c in enumerate(S.chars):
        rep = min(S.char_index[c ^ d] for d in T)
        rep_of.append(rep)
        if rep == i:
            reps.append(i)
    base = OrderingSpace.from_rows(
        [S.labels[i] for i in reps], [_compress(g, reps) for g in fixed.rows]
    )
    complement = []
    span = fixed
    for g in S.gens:
        if g not in span:
            complement.append(g)
            span = echelonize([*span.rows, g], S.n)
    return base, rep_of, complement


# --- decomposition -----------------------------------------------------------------


@dataclass(frozen=True)
class DecompositionTree:
    kind: str  # "singleton" | "direct_sum" | "group_extension" | "leaf_fan"
    orderings: tuple[str, ...]
    children: tuple["DecompositionTree", ...] = ()
    extension_rank: int = 0
    dim: int = 1
    # for extensions: (ordering label, base label, complement bits)
    fibres: tuple[tuple[str, str, int], ...] = field(default=(), repr=False)

    def outline(self, indent: int = 0) -> str:
        pad = "  " * indent
        members = " ".join(self.orderings)
        if self.kind == "singleton":
            head = f"{pad}singleton {{{members}}}"
        elif self.kind == "direct_sum":
            head = f"{pad}direct_sum |X|={len(self.orderings)} |G|=2^{self.dim}"
        else:
            head = (f"{pad}{self.kind} rank={self.extension_rank} |X|={len(self.orderings)} "
                    f"|G|=2^{self.dim} {{{members}}}")
        return "\n".join([head] + [c.outline(indent + 1) for c in self.children])

    def shape(self) -> str:
        """Isomorphism-invariant description: kinds, ranks and sorted child shapes."""
        if self.kind == "singleton":
            return "pt"
        kids = sorted(c.shape() for c in self.children)
        if self.kind == "direct_sum":
            return "(" + "+".join(kids) + ")"
        return f"{kids[0]}x{self.extension_rank}"

    def count_components(self) -> int:
        return len(self.children) if self.kind == "direct_sum" else 1


def decompose(S: OrderingSpace, _depth: int | None = None) -> DecompositionTree:
    """Split into connected components and peel each as a group extension."""
    depth = S.dim if _depth is None else _depth
    if depth < 0:
        raise StructureError("decomposition recursion exceeded dim G")
    if S.n == 1:
        return DecompositionTree("singleton", S.labels, dim=S.dim)
    comps = connected_components(S)
    if len(comps) > 1:
        children = []
        for comp in comps:
            if not is_subspace_set(S, comp):
                raise StructureError(f"component {S.label_set(comp)} is not a subspace")
            children.append(decompose(S.restrict(comp), depth - 1))
        total = sum(c.dim for c in children)
        if total != S.dim:
            raise StructureError("G is not the direct sum of the component groups")
        return DecompositionTree("direct_sum", S.labels, tuple(children), dim=S.dim)
    T = translation_group(S)
    t = len(T).bit_length() - 1
    if t == 0:
        raise StructureError(f"connected component {S.labels} is not a proper group extension")
    base, rep_of, complement = extension_base(S, T)
    fibres = []
    for i in range(S.n):
        bits = sum(((f >> i) & 1) << k for k, f in enumerate(complement))
        fibres.append((S.labels[i], S.labels[rep_of[i]], bits))
    child = decompose(base, depth - 1)
    return DecompositionTree("group_extension", S.labels, (child,), extension_rank=t,
                             dim=S.dim, fibres=tuple(fibres))


def reassemble(tree: DecompositionTree) -> tuple[OrderingSpace, dict[str, str]]:
    """Rebuild a space from singletons; returns it and a map to the original labels."""
    if tree.kind == "singleton":
        (lbl,) = tree.orderings
        return singleton(lbl), {lbl: lbl}
    if tree.kind == "direct_sum":
        parts = [reassemble(c) for c in tree.children]
        space = direct_sum([p for p, _ in parts])
        mapping = {}
        for p, m in parts:
            mapping.update(m)
        if set(space.labels) != set(mapping):
            raise StructureError("label clash while reassembling")
        return space, mapping
    if tree.kind == "leaf_fan":
        raise StructureError("leaf_fan nodes are never produced by decompose")
    child_space, child_map = reassemble(tree.children[0])
    rank = tree.extension_rank
    space = group_extension(child_space, rank)
    back = {orig: new for new, orig in child_map.items()}
    mapping = {}
    for lbl, base_lbl, bits in tree.fibres:
        mapping[f"{back[base_lbl]}_{_bits(bits, rank)}"] = lbl
    return space, mapping


def relabel_onto(space: OrderingSpace, mapping: dict[str, str], order: Sequence[str]) -> OrderingSpace:
    """Rename orderings through ``mapping`` and reorder them as ``order``."""
    pos = {mapping[lbl]: i for i, lbl in enumerate(space.labels)}
    perm = [pos[lbl] for lbl in order]
    rows = [sum(((g >> src) & 1) << k for k, src in enumerate(perm)) for g in space.gens]
    return OrderingSpace.from_rows(order, rows)


def character_of_product(S: OrderingSpace, indices: Sequence[int]) -> int:
    c = 0
    for i in indices:
        c ^= S.chars[i]
    return c


def component_count(S: OrderingSpace) -> int:
    return len(connected_components(S))
