"""Finite models of the orderings of Q(x) and the index-2 quotient patterns."""

from __future__ import annotations

import time

from ordspace.qx import (
    ROOT_MINUS,
    ROOT_PLUS,
    QxError,
    Site,
    build_qx_model,
    decide_qx_quotient,
    gamma_from_sites,
    parse_poly,
    profinite_witness,
)
from ordspace.quotients import brute_force_decide
from ordspace.spaces import OracleConfig

CONFIG = OracleConfig(max_dim=10)


def sites(model, spec):
    kinds = {"m": ROOT_MINUS, "p": ROOT_PLUS}
    return [Site(kinds[e], model.A[k], j) for e, k, j in spec]


PATTERNS = [
    ("remove one irreducible", ["x^2-2"], [("m", 0, 0), ("p", 0, 0)]),
    ("remove two irreducibles", ["x^2-2", "x^3-2"], [("m", 0, 1), ("p", 0, 1), ("m", 1, 0), ("p", 1, 0)]),
    ("remove three irreducibles", ["x^3-2", "x^3-3", "x^3-5"],
     [(e, k, 0) for k in range(3) for e in "mp"]),
    ("one quartic, four roots", ["x^4-10x^2+1"], [("m", 0, j) for j in range(4)]),
    ("two quadratics, nested", ["x^2-2", "x^2-3"], [("m", 0, 0), ("m", 1, 0), ("p", 0, 1), ("p", 1, 1)]),
    ("two quadratics, disjoint", ["x^2-2", "x^2-6x+7"], [("m", 0, 0), ("m", 1, 0), ("p", 0, 1), ("p", 1, 1)]),
    ("two quadratics, interleaved", ["x^2-2", "x^2-2x-1"],
     [("m", 0, 0), ("m", 1, 0), ("p", 0, 1), ("p", 1, 1)]),
]


def main() -> None:
    for name, A, spec in PATTERNS:
        model = build_qx_model([parse_poly(a) for a in A], [], config=CONFIG)
        gamma_sites = sites(model, spec)
        G0 = model.space.kernel([gamma_from_sites(model, gamma_sites)])
        verdict = decide_qx_quotient(model, G0)
        oracle = brute_force_decide(model.space, G0, CONFIG)
        word = "*".join(model.label_of[s] for s in gamma_sites)
        print(f"{name:30s} {model.summary()}")
        print(f"{'':30s} gamma = {word}: {verdict.status} (oracle: {'space' if oracle else 'not a space'})")

    model = build_qx_model([parse_poly("x^2-2"), parse_poly("x^2-3")], [])
    gamma_sites = [sites(model, PATTERNS[4][2])]
    for w in ("x^2-5", "(x^2-2)*(x-7)", "x^4-10x^2+1", "x^3-2"):
        t0 = time.perf_counter()
        try:
            witness = profinite_witness(model, gamma_sites, [parse_poly(w)])
        except QxError as exc:  # elements outside G0 are reported, not fatal
            print(f"W = {{{w}}}: {exc}")
            continue
        big = witness.models[1]
        print(f"W = {{{w}}}: enlarged to {big.summary()}, ok={witness.ok} "
              f"({time.perf_counter() - t0:.2f}s)")


if __name__ == "__main__":
    main()
