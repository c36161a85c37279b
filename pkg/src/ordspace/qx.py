"""Finite models of the space of orderings of Q(x).

A model is fixed by a finite set A of real monic irreducible polynomials and a
finite set B of rational stand-ins for transcendental points.  With the real
roots and B points sorted as r_1 < ... < r_m and rational separators s_i
between them, H = <-1, A, x - s_1, ..., x - s_{m+1}> and the orderings of
X|_H are: one at each end of the line, one per B point, and two at each root
(just left and just right of it, i.e. making its polynomial negative or
positive).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import isqrt
from typing import Iterable, Sequence

import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication_application,
    parse_expr,
    rationalize,
    standard_transformations,
)

from .f2core import echelonize
from .quotients import QuotientVerdict, decide_general, restrict
from .spaces import (
    OracleConfig,
    OrderingSpace,
    SpaceError,
    dump_space,
    stability_index,
    verify_axioms,
)
from .structure import connected_components


class QxError(ValueError):
    pass


def _sign(v) -> int:
    return (v > 0) - (v < 0)


# --- polynomials ---------------------------------------------------------------------


@dataclass(frozen=True)
class RationalPoly:
    """Polynomial over Q; ``coeffs[k]`` is the coefficient of x^k, trailing zeros removed."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        c = [Fraction(a) for a in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_ints(cls, *coeffs) -> "RationalPoly":
        """Coefficients from the highest degree down: ``from_ints(1, 0, -2)`` is x^2 - 2."""
        return cls(tuple(Fraction(a) for a in reversed(coeffs)))

    @classmethod
    def x_minus(cls, s) -> "RationalPoly":
        return cls((-Fraction(s), Fraction(1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1]

    @property
    def monic(self) -> bool:
        return not self.is_zero and self.leading == 1

    def __call__(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def __neg__(self) -> "RationalPoly":
        return RationalPoly(tuple(-a for a in self.coeffs))

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RationalPoly(tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        return self + (-other)

    def __mul__(self, other: "RationalPoly") -> "RationalPoly":
        if self.is_zero or other.is_zero:
            return RationalPoly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly(tuple(out))

    def scale(self, c) -> "RationalPoly":
        return RationalPoly(tuple(Fraction(c) * a for a in self.coeffs))

    def make_monic(self) -> "RationalPoly":
        return self.scale(1 / self.leading)

    def derivative(self) -> "RationalPoly":
        return RationalPoly(tuple(k * a for k, a in enumerate(self.coeffs))[1:])

    def divmod(self, other: "RationalPoly") -> tuple["RationalPoly", "RationalPoly"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(0, len(rem) - other.degree)
        while len(rem) - 1 >= other.degree and any(rem):
            shift = len(rem) - 1 - other.degree
            q = rem[-1] / other.leading
            quot[shift] = q
            for k, b in enumerate(other.coeffs):
                rem[shift + k] -= q * b
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return RationalPoly(tuple(quot)), RationalPoly(tuple(rem))

    def __mod__(self, other: "RationalPoly") -> "RationalPoly":
        return self.divmod(other)[1]

    def gcd(self, other: "RationalPoly") -> "RationalPoly":
        a, b = self, other
        while not b.is_zero:
            a, b = b, a % b
        return a.make_monic() if not a.is_zero else a

    def squarefree_part(self) -> "RationalPoly":
        g = self.gcd(self.derivative())
        return self if g.degree <= 0 else self.divmod(g)[0]

    def integer_coefficients(self) -> list[int]:
        """Primitive integer multiple (positive leading coefficient), highest degree first."""
        from math import gcd, lcm

        den = lcm(*(a.denominator for a in self.coeffs))
        ints = [int(a * den) for a in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        ints = [v // g for v in ints]
        if ints[-1] < 0:
            ints = [-v for v in ints]
        return ints[::-1]

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            a = self.coeffs[k]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            mag = abs(a)
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


_X = sympy.Symbol("x")
_TRANSFORMS = standard_transformations + (convert_xor, implicit_multiplication_application, rationalize)


def _to_sympy(text: str):
    text = text.strip()
    if not text:
        raise QxError("empty polynomial")
    if not re.fullmatch(r"[0-9x+\-*/^(). ]+", text):
        raise QxError(f"unexpected characters in polynomial {text!r}")
    try:
        return parse_expr(text, local_dict={"x": _X}, transformations=_TRANSFORMS)
    except Exception as exc:  # sympy raises a zoo of types here
        raise QxError(f"cannot parse {text!r}: {exc}") from None


def _from_sympy_poly(poly: sympy.Poly) -> RationalPoly:
    coeffs = poly.all_coeffs()[::-1]
    return RationalPoly(tuple(Fraction(int(c.p), int(c.q)) for c in coeffs))


def parse_poly(text: str) -> RationalPoly:
    """``x^2 - 2``, ``3/2*x^3 + x``, ``(x-1)(x+2)``: exact rational coefficients."""
    expr = _to_sympy(text)
    try:
        poly = sympy.Poly(expr, _X, domain="QQ")
    except sympy.PolynomialError as exc:
        raise QxError(f"not a polynomial in x: {text!r}") from exc
    return _from_sympy_poly(poly)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise QxError(f"not an exact rational: {text!r}") from None


def factor_rational(p: RationalPoly) -> tuple[Fraction, list[tuple[RationalPoly, int]]]:
    """Constant and monic irreducible factors with multiplicities, via sympy."""
    poly = sympy.Poly([sympy.Rational(a.numerator, a.denominator) for a in reversed(p.coeffs)],
                      _X, domain="QQ")
    const, facs = poly.factor_list()
    out = []
    c = Fraction(int(const.p), int(const.q))
    for f, e in facs:
        rp = _from_sympy_poly(f)
        c *= rp.leading ** e
        out.append((rp.make_monic(), e))
    out.sort(key=lambda fe: (fe[0].degree, [(-a.numerator, a.denominator) for a in fe[0].coeffs]))
    return c, out


# --- real roots ---------------------------------------------------------------------


def sturm_sequence(p: RationalPoly) -> list[RationalPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero:
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def _variations(seq: Sequence[RationalPoly], x: Fraction | None, side: int) -> int:
    """Sign changes at x, or at -inf (side=-1) / +inf (side=+1) when x is None."""
    signs = []
    for q in seq:
        if x is None:
            s = _sign(q.leading) * (side ** q.degree if side < 0 else 1)
        else:
            s = _sign(q(x))
        if s:
            signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: RationalPoly, lo: Fraction | None = None, hi: Fraction | None = None) -> int:
    """Number of distinct real roots of p in (lo, hi]; None means unbounded."""
    if p.degree < 1:
        return 0
    seq = sturm_sequence(p.squarefree_part())
    return _variations(seq, lo, -1) - _variations(seq, hi, 1)


def root_bound(p: RationalPoly) -> Fraction:
    """Every real root lies in (-bound, bound)."""
    return 1 + max(abs(a / p.leading) for a in p.coeffs[:-1]) if p.degree > 0 else Fraction(1)


class RealRoot:
    """A real algebraic number: an exact rational, or the only root of p in (lo, hi)."""

    __slots__ = ("poly", "lo", "hi")

    def __init__(self, poly: RationalPoly | None, lo: Fraction, hi: Fraction):
        self.poly, self.lo, self.hi = poly, Fraction(lo), Fraction(hi)

    @classmethod
    def exact(cls, value) -> "RealRoot":
        return cls(None, value, value)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def refine(self) -> None:
        if self.is_exact:
            return
        mid = (self.lo + self.hi) / 2
        v = self.poly(mid)
        if v == 0:
            self.lo = self.hi = mid
        elif _sign(v) == _sign(self.poly(self.lo)):
            self.lo = mid
        else:
            self.hi = mid

    def compare(self, q: Fraction) -> int:
        """sign(q - self), exactly."""
        q = Fraction(q)
        if q <= self.lo:
            return (q > self.lo) - (q < self.lo) if self.is_exact else -1
        if q >= self.hi:
            return 1
        v = self.poly(q)
        if v == 0:
            return 0
        return -1 if _sign(v) == _sign(self.poly(self.lo)) else 1

    def __repr__(self) -> str:
        return f"RealRoot({self.lo})" if self.is_exact else f"RealRoot({self.poly}, {self.lo}, {self.hi})"


def compare_roots(a: RealRoot, b: RealRoot) -> int:
    """sign(a - b); a and b must be distinct or both exact."""
    if a.is_exact:
        return b.compare(a.lo)
    if b.is_exact:
        return -a.compare(b.lo)
    while not (a.hi <= b.lo or b.hi <= a.lo):
        if a.poly == b.poly and (a.lo, a.hi) == (b.lo, b.hi):
            return 0
        wider = a if a.hi - a.lo >= b.hi - b.lo else b
        wider.refine()
        if a.is_exact or b.is_exact:
            return compare_roots(a, b)
    return -1 if a.hi <= b.lo else 1


def rational_roots(p: RationalPoly) -> list[Fraction]:
    """All rational roots, by the rational root test on the primitive integer multiple."""
    f = p.integer_coefficients()
    out = set()
    if f[-1] == 0:
        out.add(Fraction(0))
        while f[-1] == 0:
            f.pop()
    for num in _divisors(f[-1]):
        for den in _divisors(f[0]):
            for sgn in (1, -1):
                if _int_eval(f, sgn * num, den) == 0:
                    out.add(Fraction(sgn * num, den))
    return sorted(out)


def isolate_real_roots(p: RationalPoly) -> list[RealRoot]:
    """Sorted isolating intervals, one per distinct real root; rational roots come out exact."""
    if p.degree < 1:
        raise QxError("cannot isolate roots of a constant")
    q = p.squarefree_part()
    exact = rational_roots(q)
    for r in exact:
        q = q.divmod(RationalPoly.x_minus(r))[0]
    out = [RealRoot.exact(r) for r in exact]
    if q.degree >= 1:
        # q has no rational roots now, so no bisection point is ever a root
        seq = sturm_sequence(q)
        bound = root_bound(q)
        stack = [(-bound, bound)]
        while stack:
            lo, hi = stack.pop()
            k = _variations(seq, lo, -1) - _variations(seq, hi, 1)
            if k == 1:
                r = RealRoot(q, lo, hi)
                # keep the interval clear of the rational roots so sorting by lo is exact
                while any(r.lo <= e <= r.hi for e in exact):
                    r.refine()
                out.append(r)
            elif k > 1:
                mid = (lo + hi) / 2
                stack += [(lo, mid), (mid, hi)]
    out.sort(key=lambda r: r.lo)
    return out


def check_irreducible(p: RationalPoly, assume: bool = False) -> bool:
    """Irreducibility over Q for degree <= 4; higher degrees need ``assume=True``."""
    if p.degree < 1:
        raise QxError("constants are not irreducible polynomials")
    if p.degree == 1:
        return True
    f = p.integer_coefficients()
    if _has_rational_root(f):
        return False
    if p.degree <= 3:
        return True
    if p.degree == 4:
        return not _has_quadratic_factor(f)
    if assume:
        return True
    raise QxError(f"irreducibility of degree-{p.degree} {p} must be asserted by the caller")


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _int_eval(f: Sequence[int], num: int, den: int) -> int:
    """den^deg * f(num/den) for f given highest degree first."""
    deg = len(f) - 1
    return sum(c * num ** (deg - k) * den ** k for k, c in enumerate(f))


def _has_rational_root(f: Sequence[int]) -> bool:
    if f[-1] == 0:
        return True
    for num in _divisors(f[-1]):
        for den in _divisors(f[0]):
            if _int_eval(f, num, den) == 0 or _int_eval(f, -num, den) == 0:
                return True
    return False


def _has_quadratic_factor(f: Sequence[int]) -> bool:
    """Search (a x^2 + b x + c)(d x^2 + e x + g) = f over integers, |b| bounded by 2 ||f||_2."""
    f4, f3, f2, f1, f0 = f
    bound = 2 * isqrt(sum(c * c for c in f)) + 2
    for a in _divisors(f4):
        d = f4 // a
        for c_abs in _divisors(f0):
            for c in (c_abs, -c_abs):
                g = f0 // c
                for b in range(-bound, bound + 1):
                    num = f3 - b * d
                    if num % a:
                        continue
                    e = num // a
                    if a * g + b * e + c * d == f2 and b * g + c * e == f1:
                        return True
    return False


# --- simplest rationals -----------------------------------------------------------------


def _above(lo: RealRoot | None, q: Fraction) -> bool:
    return lo is None or lo.compare(q) > 0


def _below(hi: RealRoot | None, q: Fraction) -> bool:
    return hi is None or hi.compare(q) < 0


class _Neg:
    def __init__(self, r: RealRoot):
        self.r = r

    def compare(self, q: Fraction) -> int:
        return -self.r.compare(-q)


def simplest_between(lo, hi) -> Fraction:
    """The rational with least denominator (then least |numerator|) strictly between lo and hi.

    ``lo`` and ``hi`` are RealRoots or None for -inf / +inf.
    """
    zero = Fraction(0)
    if _above(lo, zero) and _below(hi, zero):
        return zero
    if not _below(hi, zero):  # interval is negative: mirror it
        return -simplest_between(None if hi is None else _Neg(hi), None if lo is None else _Neg(lo))
    # 0 <= lo < hi: Stern-Brocot descent with exponential runs
    ln, ld, rn, rd = 0, 1, 1, 0
    while True:
        m = Fraction(ln + rn, ld + rd)
        if not _above(lo, m):
            k = _longest_run(lambda k: not _above(lo, Fraction(ln + k * rn, ld + k * rd)))
            ln, ld = ln + k * rn, ld + k * rd
        elif not _below(hi, m):
            k = _longest_run(lambda k: not _below(hi, Fraction(rn + k * ln, rd + k * ld)))
            rn, rd = rn + k * ln, rd + k * ld
        else:
            return m


def _longest_run(holds) -> int:
    """Largest k >= 1 with holds(k), given holds(1) and monotonicity."""
    hi = 2
    while holds(hi):
        hi *= 2
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            lo = mid
        else:
            hi = mid
    return lo


# --- sites and models -----------------------------------------------------------------------

ROOT_MINUS = "root_minus"
ROOT_PLUS = "root_plus"
PLUS_INF = "plus_inf"
MINUS_INF = "minus_inf"
ARCHIMEDEAN = "archimedean"


@dataclass(frozen=True)
class Site:
    kind: str
    polynomial: RationalPoly | None = None
    root_index: int | None = None  # position among the real roots of ``polynomial``
    point: Fraction | None = None

    def describe(self) -> str:
        if self.kind in (PLUS_INF, MINUS_INF):
            return self.kind
        if self.kind == ARCHIMEDEAN:
            return f"{self.kind} {self.point}"
        return f"{self.kind} {self.polynomial} #{self.root_index + 1}"


@dataclass(frozen=True)
class QxModel:
    A: tuple[RationalPoly, ...]
    B: tuple[Fraction, ...]
    points: tuple[RealRoot, ...] = field(repr=False)
    owners: tuple[int | None, ...]  # index into A for roots, None for B points
    separators: tuple[Fraction, ...]
    space: OrderingSpace
    site_labels: tuple[tuple[str, Site], ...]
    asserted: tuple[int, ...] = ()  # A entries whose irreducibility was asserted
    oracle_checked: bool = False

    @property
    def m(self) -> int:
        return len(self.points)

    @cached_property
    def site_of(self) -> dict[str, Site]:
        return dict(self.site_labels)

    @cached_property
    def label_of(self) -> dict[Site, str]:
        return {s: lbl for lbl, s in self.site_labels}

    def real_root_count(self, k: int) -> int:
        return sum(1 for o in self.owners if o == k)

    def generator_names(self) -> list[str]:
        return [name for name, _ in self.space.names]

    def generator_mask(self, name: str) -> int:
        return self.space.name_map[name]

    def x_p(self, k: int) -> int:
        """X_p for p = A[k], as an X mask."""
        p = self.A[k]
        return sum(1 << self.space.index_of[lbl] for lbl, s in self.site_labels
                   if s.polynomial == p and s.kind in (ROOT_MINUS, ROOT_PLUS))

    def sidecar(self) -> str:
        lines = ["sites v1"]
        lines += [f"{lbl}: {s.describe()}" for lbl, s in self.site_labels]
        lines += [f"separator s{i}: {s}" for i, s in enumerate(self.separators, 1)]
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        return (f"|A|={len(self.A)} |B|={len(self.B)} m={self.m} |X|={self.space.n} "
                f"|H|={self.space.order} (2^{self.space.dim})")


def build_qx_model(A: Sequence[RationalPoly], B: Sequence = (), *,
                   assume_irreducible: Iterable[int] = (),
                   config: OracleConfig | None = None, check_oracle: bool = True) -> QxModel:
    """Construct the finite model (X|_H, H) and check its invariants.

    The axiom oracle runs when dim H is within ``config.max_dim`` and
    ``check_oracle`` is set; ``oracle_checked`` records whether it did.
    """
    A = tuple(A)
    B = tuple(Fraction(b) for b in B)
    assume = set(assume_irreducible)
    asserted = []
    if len(set(A)) != len(A):
        raise QxError("A contains a repeated polynomial")
    if len(set(B)) != len(B):
        raise QxError("B contains a repeated point")
    points: list[tuple[RealRoot, int | None, int | None]] = []
    for k, p in enumerate(A):
        if not p.monic:
            raise QxError(f"{p} is not monic")
        if not check_irreducible(p, assume=k in assume):
            raise QxError(f"{p} is reducible")
        if p.degree >= 5:
            asserted.append(k)
        roots = isolate_real_roots(p)
        if not roots:
            raise QxError(f"{p} has no real root")
        points += [(r, k, j) for j, r in enumerate(roots)]
    for b in B:
        for p in A:
            if p(b) == 0:
                raise QxError(f"point {b} is a root of {p}")
        points.append((RealRoot.exact(b), None, None))

    # sort by exact comparison (insertion keeps the number of refinements small)
    ordered: list[tuple[RealRoot, int | None, int | None]] = []
    for item in points:
        pos = len(ordered)
        while pos and compare_roots(item[0], ordered[pos - 1][0]) < 0:
            pos -= 1
        ordered.insert(pos, item)
    m = len(ordered)
    roots_only = [r for r, _, _ in ordered]
    seps = [simplest_between(None if i == 0 else roots_only[i - 1],
                             None if i == m else roots_only[i]) for i in range(m + 1)]

    def signs_at_region(i: int) -> tuple[list[int], list[int]]:
        """Signs (1 = negative) of A and of x - s_j on region i (between s_i and s_{i+1})."""
        lin = [1 if j >= i else 0 for j in range(m + 1)]
        if i == 0:
            pol = [p.degree & 1 for p in A]
        elif i == m + 1:
            pol = [0] * len(A)
        else:
            pol = [1 if p(seps[i - 1]) < 0 else 0 for p in A]  # sign just right of s_i
        return pol, lin

    labels: list[str] = []
    sites: list[tuple[str, Site]] = []
    columns: list[list[int]] = []  # per ordering: value bits on [-1, A..., x - s...]

    def add(label, site, pol, lin):
        labels.append(label)
        sites.append((label, site))
        columns.append([1] + pol + lin)

    add("ninf", Site(MINUS_INF), *signs_at_region(0))
    for i, (r, owner, j) in enumerate(ordered, 1):
        pol, lin = signs_at_region(i)
        if owner is None:
            add(f"t{i}", Site(ARCHIMEDEAN, point=r.lo), pol, lin)
            continue
        p = A[owner]
        for kind, suffix, value in ((ROOT_MINUS, "m", 1), (ROOT_PLUS, "p", 0)):
            bits = list(pol)
            bits[owner] = value
            add(f"r{i}{suffix}", Site(kind, p, j), bits, lin)
    add("pinf", Site(PLUS_INF), *signs_at_region(m + 1))

    names = ["-1"] + [f"p{k}" for k in range(1, len(A) + 1)] + [f"l{i}" for i in range(1, m + 2)]
    masks = [sum(col[g] << i for i, col in enumerate(columns)) for g in range(len(names))]
    if echelonize(masks, len(labels)).rank != len(masks):
        raise QxError("model generators are dependent; the construction is inconsistent")
    space = OrderingSpace.from_rows(labels, masks[1:], list(zip(names, masks)))
    model = QxModel(A, B, tuple(roots_only), tuple(o for _, o, _ in ordered), tuple(seps),
                    space, tuple(sites), tuple(asserted))
    _check_model(model)
    config = config or OracleConfig.from_env()
    if check_oracle and space.dim <= config.max_dim:
        verdict = verify_axioms(space, config)
        if not verdict.is_space:
            raise QxError(f"model fails the oracle: {verdict.detail}")
        model = QxModel(model.A, model.B, model.points, model.owners, model.separators,
                        model.space, model.site_labels, model.asserted, True)
    return model


def _check_model(model: QxModel) -> None:
    S = model.space
    counts = [model.real_root_count(k) for k in range(len(model.A))]
    if model.m != sum(counts) + len(model.B):
        raise QxError("m differs from sum n_p + |B|")
    if S.dim != len(model.A) + model.m + 2:
        raise QxError(f"|H| = 2^{S.dim}, expected 2^{len(model.A) + model.m + 2}")
    if S.n != 2 + 2 * sum(counts) + len(model.B):
        raise QxError("|X| differs from 2 + 2 sum n_p + |B|")
    for k in range(len(model.A)):
        if bin(model.x_p(k)).count("1") != 2 * counts[k]:
            raise QxError(f"|X_p| != 2 n_p for {model.A[k]}")
    big = sorted(c for c in connected_components(S) if c & (c - 1))
    expected = sorted(model.x_p(k) for k in range(len(model.A)) if counts[k] >= 2)
    if big != expected:
        raise QxError("non-singleton components are not the X_p with n_p >= 2")


def ordering_at(model: QxModel, site: Site) -> int:
    """The character of the model ordering at ``site``."""
    if site not in model.label_of:
        raise QxError(f"no ordering at {site.describe()} in this model")
    S = model.space
    return S.chars[S.index_of[model.label_of[site]]]


def site_word(model: QxModel, sites: Sequence[Site]) -> str:
    return "*".join(model.label_of[s] for s in sites)


def decide_qx_quotient(model: QxModel, G0) -> QuotientVerdict:
    if model.space.minus_one not in G0:
        raise QxError("-1 is not in G0")
    return decide_general(model.space, G0)


def site_sign(model: QxModel, site: Site, w: RationalPoly) -> int:
    """Sign (+1 / -1) of a nonzero polynomial w at the ordering ``site``, from w alone."""
    if w.is_zero:
        raise QxError("0 has no sign")
    if site.kind == PLUS_INF:
        return _sign(w.leading)
    if site.kind == MINUS_INF:
        return _sign(w.leading) * (-1) ** w.degree
    if site.kind == ARCHIMEDEAN:
        v = w(site.point)
        if v == 0:
            raise QxError(f"{w} vanishes at {site.point}")
        return _sign(v)
    p = site.polynomial
    e = 0
    u = w
    while True:
        q, r = u.divmod(p)
        if not r.is_zero:
            break
        u, e = q, e + 1
    k = model.A.index(p)
    root = [r for r, o in zip(model.points, model.owners) if o == k][site.root_index]
    root = RealRoot(root.poly, root.lo, root.hi)
    if root.is_exact:
        v = u(root.lo)
    else:
        while sturm_count(u, root.lo, root.hi) or u(root.hi) == 0:
            root.refine()
            if root.is_exact:
                break
        v = u(root.lo) if root.is_exact else u(root.hi)
    side = -1 if site.kind == ROOT_MINUS else 1
    return _sign(v) * side ** e


def gamma_from_sites(model: QxModel, sites: Sequence[Site]) -> int:
    c = 0
    for s in sites:
        c ^= ordering_at(model, s)
    return c


# --- model files ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelSpec:
    A: tuple[RationalPoly, ...]
    B: tuple[Fraction, ...]
    assume: tuple[int, ...] = ()


def load_model_spec(text: str) -> ModelSpec:
    """Lines ``poly: x^2 - 2`` (``poly!:`` asserts irreducibility) and ``point: 3/2``."""
    A: list[RationalPoly] = []
    B: list[Fraction] = []
    assume: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep:
            raise QxError(f"line {lineno}: expected 'poly: ...' or 'point: ...'")
        try:
            if key in ("poly", "poly!"):
                p = parse_poly(rest)
                if p.degree < 1:
                    raise QxError("constant polynomial")
                if key == "poly!":
                    assume.append(len(A))
                A.append(p.make_monic())
            elif key == "point":
                B.append(parse_rational(rest))
            else:
                raise QxError(f"unknown key {key!r}")
        except QxError as exc:
            raise QxError(f"line {lineno}: {exc}") from None
    return ModelSpec(tuple(A), tuple(B), tuple(assume))


def build_from_text(text: str, config: OracleConfig | None = None) -> QxModel:
    spec = load_model_spec(text)
    return build_qx_model(spec.A, spec.B, assume_irreducible=spec.assume, config=config)


def dump_model(model: QxModel) -> str:
    return dump_space(model.space, "model " + model.summary()) + "\n" + model.sidecar()


# --- profinite witnesses -----------------------------------------------------------------------


@dataclass(frozen=True)
class ProfiniteWitness:
    models: tuple[QxModel, ...]
    verdicts: tuple[QuotientVerdict, ...]
    nested: bool

    @property
    def ok(self) -> bool:
        return self.nested and all(v.is_quotient_space for v in self.verdicts)


def element_in_model(model: QxModel, w: RationalPoly) -> int:
    """The mask of a nonzero polynomial w in H, which must lie in H."""
    if w.is_zero:
        raise QxError("0 is not in G")
    const, facs = factor_rational(w)
    mask = model.space.minus_one if const < 0 else 0
    index = {p: k for k, p in enumerate(model.A)}
    seps = {RationalPoly.x_minus(s): i for i, s in enumerate(model.separators, 1)}
    for f, e in facs:
        if not e & 1:
            continue
        if f in index:
            mask ^= model.generator_mask(f"p{index[f] + 1}")
        elif f in seps:
            mask ^= model.generator_mask(f"l{seps[f]}")
        elif sturm_count(f) == 0:
            continue  # positive definite: trivial in G
        else:
            raise QxError(f"factor {f} of {w} is not in H")
    return mask


def _restrict_values(model: QxModel, polys: Sequence[RationalPoly]) -> set[tuple[int, ...]]:
    masks = [model.space.minus_one] + [element_in_model(model, p) for p in polys]
    return {tuple((mask >> i) & 1 for mask in masks) for i in range(model.space.n)}


def profinite_witness(seed: QxModel, gamma_sites: Sequence[Sequence[Site]],
                      W: Sequence[RationalPoly], *, config: OracleConfig | None = None,
                      check_oracle: bool = False) -> ProfiniteWitness:
    """Enlarge ``seed`` so that H contains W and re-run the quotient check.

    ``gamma_sites`` lists each generator of chi(G/G0) as a product of sites, so
    G0 is the common kernel on any model containing those sites.  The new A
    also contains x - s for the seed's separators, which makes the seed a
    quotient of the enlarged model; that nesting is verified.
    """
    A = list(seed.A)
    for w in W:
        if w.is_zero:
            raise QxError("0 is not in G")
        _, facs = factor_rational(w)
        for f, _ in facs:
            if sturm_count(f) == 0 or f in A:
                continue
            for b in seed.B:
                if f(b) == 0:
                    raise QxError(f"factor {f} vanishes at the point {b}")
            A.append(f)
    for s in seed.separators:
        lin = RationalPoly.x_minus(s)
        if lin not in A:
            A.append(lin)
    assume = [k for k, p in enumerate(A) if p.degree >= 5]  # sympy factors are irreducible
    big = build_qx_model(A, seed.B, assume_irreducible=assume, config=config,
                         check_oracle=check_oracle)
    gammas = [gamma_from_sites(big, sites) for sites in gamma_sites]
    G0 = big.space.kernel(gammas)
    for w in W:
        if element_in_model(big, w) not in G0:
            raise QxError(f"{w} is not in G0")
    verdicts = (decide_qx_quotient(seed, seed.space.kernel(
                    [gamma_from_sites(seed, s) for s in gamma_sites])),
                decide_qx_quotient(big, G0))
    old_gens = list(seed.A) + [RationalPoly.x_minus(s) for s in seed.separators]
    nested = _restrict_values(big, old_gens) == _restrict_values(seed, old_gens)
    return ProfiniteWitness((seed, big), verdicts, nested)


def nested_restriction(big: QxModel, small: QxModel) -> bool:
    """Restricting ``big`` to the H of ``small`` reproduces small's orderings."""
    polys = list(small.A) + [RationalPoly.x_minus(s) for s in small.separators]
    return _restrict_values(big, polys) == _restrict_values(small, polys)


def model_stability(model: QxModel) -> int:
    return stability_index(model.space)


def all_root_sites(model: QxModel, k: int) -> list[tuple[Site, Site]]:
    """(minus, plus) site pairs at each real root of A[k]."""
    p = model.A[k]
    n = model.real_root_count(k)
    return [(Site(ROOT_MINUS, p, j), Site(ROOT_PLUS, p, j)) for j in range(n)]


def quotient_by_sites(model: QxModel, gamma_sites: Sequence[Sequence[Site]]):
    gammas = [gamma_from_sites(model, s) for s in gamma_sites]
    return restrict(model.space, model.space.kernel(gammas))


def sign_table(model: QxModel) -> list[tuple[str, str]]:
    """Each ordering with its signs on the named generators, for reports."""
    S = model.space
    return [(lbl, "".join("-" if (mask >> i) & 1 else "+" for _, mask in S.names))
            for i, lbl in enumerate(S.labels)]


def product_sites(*groups: Sequence[Site]) -> list[Site]:
    return [s for g in groups for s in g]

