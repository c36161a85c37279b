"""Write the sample space and model files under data/."""

from __future__ import annotations

from pathlib import Path

from ordspace.corpus import STABILITY_TWO_EXAMPLES, stability_two_example, fan, four_fan, six_ordering_sap, six_point_connected
from ordspace.quotients import restrict
from ordspace.spaces import dump_space

DATA = Path(__file__).resolve().parent.parent / "data"

MODELS = {
    "sqrt2.model": "# A = {x^2 - 2}\npoly: x^2 - 2\n",
    "one_point.model": "# A empty, one archimedean stand-in\npoint: 0\n",
    "two_quadratics.model": "# roots of q1 and q2 interleave\npoly: x^2 - 2\npoly: x^2 - 2x - 1\n",
    "three_cubics.model": "# three polynomials with one real root each\npoly: x^3 - 2\npoly: x^3 - 3\npoly: x^3 - 5\n",
}


def main() -> None:
    DATA.mkdir(exist_ok=True)
    spaces = {
        "four_fan.space": (four_fan(), "4-element fan"),
        "fan8.space": (fan(3), "8-element fan"),
        "six_point_connected.space": (six_point_connected(), "connected, rank-1 extension of 3 points"),
    }
    S, gamma = six_ordering_sap()
    spaces["six_ordering.space"] = (S, "six orderings, G all sign functions; try gamma = s1*...*s6")
    spaces["six_ordering_quotient.space"] = (restrict(S, S.kernel([gamma])).space,
                                             "quotient structure by ker(s1*...*s6); not a space")
    for case in range(1, 5):
        S, gamma = stability_two_example(case)
        spaces[f"stab2_case{case}.space"] = (S, f"stability 2; gamma = {STABILITY_TWO_EXAMPLES[case][2]}")
    for name, (S, comment) in spaces.items():
        (DATA / name).write_text(dump_space(S, comment))
    for name, text in MODELS.items():
        (DATA / name).write_text(text)
    print(f"wrote {len(spaces) + len(MODELS)} files to {DATA}")


if __name__ == "__main__":
    main()
