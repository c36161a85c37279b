"""Named spaces used throughout the tests and scripts.

The standard examples are given by listing X as characters of a group G
with chosen basis sigma_1..sigma_d of chi(G); labels spell out the products,
so ``s1s2s3`` is sigma_1 sigma_2 sigma_3.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

from .f2core import parity
from .spaces import OrderingSpace, parse_character, space_from_characters
from .structure import direct_sum, group_extension, singleton


def _word_char(word: str) -> int:
    c = 0
    for part in word.split("s")[1:]:
        c ^= 1 << (int(part) - 1)
    return c


def from_words(words: list[str], rank: int) -> OrderingSpace:
    return space_from_characters(words, [_word_char(w) for w in words], rank)


def fan(k: int) -> OrderingSpace:
    """The fan with |X| = 2^k, |G| = 2^(k+1)."""
    chars = [c for c in range(1 << (k + 1)) if parity(c)]
    labels = [f"f{i}" for i in range(1, len(chars) + 1)]
    return space_from_characters(labels, chars, k + 1)


def sap(n: int, prefix: str = "s") -> OrderingSpace:
    """n orderings, G all sign functions (direct sum of n singletons)."""
    return OrderingSpace.from_rows([f"{prefix}{i}" for i in range(1, n + 1)],
                                   [1 << i for i in range(n)])


def four_fan() -> OrderingSpace:
    return from_words(["s1", "s2", "s3", "s1s2s3"], 3)


def six_point_connected() -> OrderingSpace:
    """Connected space on six orderings, a rank-1 extension of a 3-point SAP space."""
    return from_words(["s1", "s2", "s3", "s4", "s1s3s4", "s2s3s4"], 4)


def six_ordering_sap() -> tuple[OrderingSpace, int]:
    S = sap(6)
    return S, parse_character(S, "s1*s2*s3*s4*s5*s6")


STABILITY_TWO_EXAMPLES = {
    1: (["s1", "s2", "s3", "s1s2s3", "s4", "s5", "s6", "s4s5s6"], 6, "s1*s4"),
    2: (["s1", "s2", "s3", "s1s2s3", "s4", "s5", "s6"], 6, "s1*s4*s5*s6"),
    3: (["s1", "s2", "s3", "s4", "s1s3s4", "s2s3s4", "s5", "s6"], 6, "s1*s2*s5*s6"),
    4: (["s1", "s2", "s3", "s4", "s1s3s4", "s2s3s4",
         "s5", "s6", "s7", "s8", "s5s7s8", "s6s7s8"], 8, "s1*s2*s5*s6"),
}


def stability_two_example(case: int) -> tuple[OrderingSpace, int]:
    """The four stability-2 spaces whose index-2 quotient by ker(gamma) is not a space."""
    words, rank, gamma = STABILITY_TWO_EXAMPLES[case]
    S = from_words(words, rank)
    return S, parse_character(S, gamma)


def fans_up_to(size: int) -> list[OrderingSpace]:
    """singleton (|X| = 1) then fans with |X| = 2, 4, ... up to ``size``."""
    out = [singleton("f1")]
    k = 1
    while 1 << k <= size:
        out.append(fan(k))
        k += 1
    return out


def building_blocks() -> dict[str, OrderingSpace]:
    return {"singleton": singleton("p"), "fan4": four_fan(), "six": six_point_connected()}


def stability_two_corpus(max_size: int = 12, max_parts: int = 3) -> list[tuple[str, OrderingSpace]]:
    """Direct sums of up to ``max_parts`` blocks from {singleton, 4-fan, 6-point space}."""
    blocks = building_blocks()
    names = sorted(blocks)
    out = []
    for parts in range(1, max_parts + 1):
        for combo in combinations_with_replacement(names, parts):
            size = sum(blocks[b].n for b in combo)
            if size > max_size:
                continue
            space = blocks[combo[0]] if parts == 1 else direct_sum([blocks[b] for b in combo])
            out.append(("+".join(combo), space))
    return out


def small_space_corpus(max_size: int = 6) -> list[tuple[str, OrderingSpace]]:
    """Every space built from singletons by direct sums and group extensions, |X| <= max_size.

    One representative per isomorphism class (keyed by the decomposition shape),
    named by that shape; orderings are relabelled x1, x2, ...
    """
    from .structure import decompose

    found: dict[str, OrderingSpace] = {}

    def add(S: OrderingSpace) -> bool:
        S = S.relabel([f"x{i}" for i in range(1, S.n + 1)])
        key = decompose(S).shape()
        if key in found:
            return False
        found[key] = S
        return True

    add(singleton("p"))
    grew = True
    while grew:
        grew = False
        current = list(found.values())
        for S in current:
            if 2 * S.n <= max_size:
                grew |= add(group_extension(S, 1))
            for T in current:
                if S.n + T.n <= max_size:
                    grew |= add(direct_sum([S, T]))
    return sorted(found.items(), key=lambda p: (p[1].n, p[1].dim, p[0]))
