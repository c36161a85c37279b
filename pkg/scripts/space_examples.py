"""Worked quotient examples on finite spaces, each cross-checked against the axiom oracle."""

from __future__ import annotations

from ordspace.corpus import stability_two_example, fan, six_ordering_sap, stability_two_corpus
from ordspace.quotients import (
    brute_force_decide,
    decide_general,
    decide_index2,
    minimal_presentations,
    presentation_words,
)
from ordspace.spaces import stability_index


def show(title, S, gamma):
    verdict = decide_index2(S, gamma)
    oracle = brute_force_decide(S, S.kernel([gamma]))
    pres = minimal_presentations(S, gamma)
    print(f"== {title}: |X|={S.n}, stability {stability_index(S)}")
    print("   minimal presentation:", presentation_words(S, pres[0]) if pres else "none (not in X^4)")
    for line in verdict.report().splitlines():
        print("  ", line)
    print(f"   oracle: {'space' if oracle else 'not a space'}")


def main() -> None:
    S, gamma = six_ordering_sap()
    show("six orderings, gamma of length 6", S, gamma)
    for case in (1, 2, 3, 4):
        S, gamma = stability_two_example(case)
        show(f"stability two, case {case}", S, gamma)
    F = fan(3)
    show("8-element fan", F, 6)

    total = agree = quotients = 0
    for _, S in stability_two_corpus(12, 3):
        for gamma in range(2, 1 << S.dim, 2):
            v = decide_index2(S, gamma).is_quotient_space
            total += 1
            quotients += v
            agree += v == brute_force_decide(S, S.kernel([gamma]))
    print(f"== stability-two corpus: {total} index-2 subgroups, {quotients} quotient spaces, "
          f"{agree} agree with the oracle")

    F = fan(3)
    G0 = F.kernel([6, 10])
    print("== 8-element fan, index 4:", decide_general(F, G0).status)


if __name__ == "__main__":
    main()
