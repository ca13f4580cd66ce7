"""Polynomials over a finite ring and their difference structure.

The central quantity is the derivational degree of P: the least k such that
every (k+1)-fold iterated difference

    d_{n_1, ..., n_{k+1}} P(x)

vanishes at every point of the ring. It is computed exactly by breadth-first
exploration of difference functions (deduplicating value tables), or bounded
cheaply from the exponents of P:

  * characteristic a prime p: the maximum base-p digit sum of the exponents
    is an upper bound, and is the exact formal answer for a single monomial;
  * any characteristic whose prime factors all exceed deg P: the bound
    deg P is attained exactly (the leading iterated difference is
    (deg P)! times the leading coefficient times a product of directions,
    and (deg P)! is a unit);
  * squarefree composite characteristic: the ring splits into prime
    characteristic factors, so the max over prime divisors of the digit-sum
    bound applies;
  * otherwise only the trivial bound deg P is sound. In particular the
    per-prime digit sum is not a bound once the characteristic has a square
    factor: x^4 over Z/4 has derivational degree 2, but the base-2 digit sum
    of 4 is 1.

Exact verification over all direction tuples is guarded: confirming degree k
inspects |R|^(k+1) tuples in the worst case, and the guard refuses once that
exceeds the work budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .budget import work_guard
from .errors import ParseError, WorkGuardExceeded
from .rings import Ring, WorkError, factorize, is_prime

# Keeps the deduplicated difference frontier from exhausting memory on rings
# where the tuple-count guard alone would admit it.
_FRONTIER_CELL_CAP = 1 << 26


@dataclass(frozen=True)
class RingPoly:
    """A univariate polynomial with coefficients given by element indices,
    ascending degree, trailing zeros trimmed (the zero polynomial has no
    coefficients at all)."""

    ring: Ring
    coeffs: tuple[int, ...]

    @staticmethod
    def make(ring: Ring, coeffs: Sequence[int]) -> "RingPoly":
        cs = [int(c) % ring.order for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return RingPoly(ring, tuple(cs))

    @staticmethod
    def from_int_coeffs(ring: Ring, ints: Sequence[int]) -> "RingPoly":
        return RingPoly.make(ring, [ring.from_int(c) for c in ints])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def evaluate(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = self.ring.add(self.ring.mul(acc, x), c)
        return acc

    def values(self) -> np.ndarray:
        """P(x) for every x, in element order."""
        xs = np.arange(self.ring.order, dtype=np.int64)
        return self.ring.eval_poly_vec(self.coeffs, xs)

    def constant_term(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def monomials(self) -> list[tuple[int, int]]:
        """(exponent, coefficient) pairs with nonzero coefficient."""
        return [(j, c) for j, c in enumerate(self.coeffs) if c != 0]

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for j, c in self.monomials():
            s = self.ring.element_str(c)
            if j == 0:
                parts.append(s)
            else:
                head = "" if c == self.ring.one else f"({s})"
                parts.append(f"{head}x" if j == 1 else f"{head}x^{j}")
        return " + ".join(parts)


def parse_poly_literal(ring: Ring, text: str) -> RingPoly:
    """Parse 'c0,c1,...,cd'. Plain integers map through the canonical image
    of Z in the ring; a '#' prefix gives a raw element index instead."""
    items = [t.strip() for t in text.split(",")]
    coeffs = []
    for item in items:
        if item.startswith("#"):
            body = item[1:]
            if not body.isdigit():
                raise ParseError(f"bad raw element index {item!r}")
            idx = int(body)
            if not 0 <= idx < ring.order:
                raise ParseError(
                    f"raw index {idx} out of range for order {ring.order}"
                )
            coeffs.append(idx)
        else:
            try:
                coeffs.append(ring.from_int(int(item)))
            except ValueError:
                raise ParseError(f"bad polynomial coefficient {item!r}") from None
    return RingPoly(ring, _trim(coeffs))


def _trim(cs: Sequence[int]) -> tuple[int, ...]:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def forward_difference(P: RingPoly, n: int) -> RingPoly:
    """The polynomial P(x + n) - P(x), coefficients computed by binomial
    expansion inside the ring."""
    R = P.ring
    d = P.degree
    if d < 1:
        return RingPoly(R, ())
    npow = [R.one]
    for _ in range(d):
        npow.append(R.mul(npow[-1], n))
    out = [0] * d
    for m, a_m in P.monomials():
        for j in range(m):
            binom = R.from_int(math.comb(m, j))
            term = R.mul(a_m, R.mul(binom, npow[m - j]))
            out[j] = R.add(out[j], term)
    return RingPoly(R, _trim(out))


def digit_sum(n: int, p: int) -> int:
    total = 0
    while n:
        n, d = divmod(n, p)
        total += d
    return total


def b_constant(d: int, c) -> int:
    """B(d, c) = c^(2 floor(log_c d)) when c is a prime, and 1 otherwise
    (composite characteristic or the infinite sentinel)."""
    if d < 1:
        raise ValueError("b_constant needs d >= 1")
    if not (isinstance(c, int) and is_prime(c)):
        return 1
    k = 0
    power = c
    while power <= d:
        k += 1
        power *= c
    return c ** (2 * k)


@dataclass(frozen=True)
class DdegResult:
    """Outcome of a derivational degree computation.

    `method` is one of "exact" (full functional verification), "degree"
    (deg P, exact when every prime factor of the characteristic exceeds it,
    otherwise just a bound), or "digit-sum" (exponent digit sums; an upper
    bound in general). `certified` is True when k is the exact functional
    value rather than an upper bound.
    """

    k: int
    method: str
    certified: bool


@dataclass(frozen=True)
class BoundParams:
    """Exponent and constant actually used in the exponential-sum bound
    B(d, c) (k - 1) / lpf and its derived estimates.

    `k`, `method`, `certified` describe the exponent; `b` is the constant;
    `functional_k` is the derivational degree of P as a function on the
    ring (or its certified-or-not upper bound, per the DdegResult it came
    from), kept for reporting.
    """

    k: int
    method: str
    certified: bool
    b: int
    functional_k: int


def bound_parameters(ring: Ring, degree: int, dres: DdegResult) -> BoundParams:
    """Select the exponent k and constant B for the exponential-sum bound.

    A ring of prime characteristic p is an algebra over its prime field,
    and the difference induction behind the bound runs on functions there,
    so the functional derivational degree is the exponent and B(deg P, p)
    the constant. Every other characteristic forces the constant-1 route,
    whose induction differentiates a lift of P over a characteristic-zero
    domain; each difference lowers the lift's degree by exactly one, so the
    sound exponent is deg P, not the functional degree. Substituting the
    functional degree there fails: x + x^2 + x^4 over prod(GF(4);GF(9)) is
    functionally of degree 2, yet the character supported on the GF(9)
    factor has |S|^2 = 1/3, above (k - 1)/lpf = 1/4.
    """
    if dres.k == 0:
        return BoundParams(0, dres.method, dres.certified, 1, 0)
    if is_prime(ring.characteristic):
        b = b_constant(degree, ring.characteristic)
        return BoundParams(dres.k, dres.method, dres.certified, b, dres.k)
    return BoundParams(degree, "degree", True, 1, dres.k)


def derivational_degree(
    ring: Ring,
    P: RingPoly,
    mode: str = "auto",
    guard: int | None = None,
) -> DdegResult:
    """Derivational degree of P as a function on the ring.

    mode "exact" forces full verification (WorkGuardExceeded if the tuple
    space is too big), "bound" forces the cheap estimate, and "auto" tries
    exact first and falls back to the bound.
    """
    if mode not in ("exact", "bound", "auto"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exact":
        return _exact_ddeg(ring, P, guard)
    if mode == "bound":
        return _bound_ddeg(ring, P)
    try:
        return _exact_ddeg(ring, P, guard)
    except WorkGuardExceeded:
        return _bound_ddeg(ring, P)


def _exact_ddeg(ring: Ring, P: RingPoly, guard: int | None) -> DdegResult:
    budget = work_guard(guard)
    n = ring.order
    if n > budget:
        raise WorkGuardExceeded(
            f"exact derivational degree needs at least {n} work, budget {budget}"
        )
    values = P.values()
    if not values.any():
        return DdegResult(0, "exact", True)
    # Distinct nonzero difference functions at the current depth. The answer
    # is the largest depth at which one exists: differences of constants
    # vanish, and a depth whose functions are all zero stays zero forever.
    frontier: dict[bytes, np.ndarray] = {values.tobytes(): values}
    idx = np.arange(n, dtype=np.int64)
    try:
        add_table = ring.add_table()
    except WorkError:
        add_table = None
    level = 0
    while True:
        active = [g for g in frontier.values() if not (g == g[0]).all()]
        if not active:
            # Every child difference is the zero function.
            return DdegResult(level, "exact", True)
        if n ** (level + 2) > budget:
            raise WorkGuardExceeded(
                f"exact derivational degree of {P} on {ring.spec_string()} "
                f"needs {n}^{level + 2} tuple work, budget {budget}"
            )
        next_frontier: dict[bytes, np.ndarray] = {}
        for v in range(1, n):
            perm = add_table[:, v] if add_table is not None else ring.add_vec(idx, v)
            for g in active:
                child = ring.sub_vec(g[perm], g)
                if child.any():
                    next_frontier[child.tobytes()] = child
            if (len(next_frontier) + 1) * n > _FRONTIER_CELL_CAP:
                raise WorkGuardExceeded(
                    "difference frontier exceeded the memory budget"
                )
        frontier = next_frontier
        level += 1


def _bound_ddeg(ring: Ring, P: RingPoly) -> DdegResult:
    if P.is_constant:
        # Constant polynomials are constant functions.
        return DdegResult(0, "degree", True)
    d = P.degree
    char = ring.characteristic
    char_factors = factorize(char)
    smallest = char_factors[0][0]
    if d < smallest:
        # The d-fold difference in directions (1, ..., 1) equals d! times the
        # leading coefficient plus lower terms' contributions of degree 0;
        # d! is a unit, so the degree is attained exactly.
        return DdegResult(d, "degree", True)
    if len(char_factors) == 1 and char_factors[0][1] == 1:
        p = smallest
        k = max(digit_sum(m, p) for m, _ in P.monomials() if m >= 1)
        return DdegResult(k, "digit-sum", False)
    if all(e == 1 for _, e in char_factors):
        # Squarefree characteristic: the ring is a product of prime
        # characteristic rings, and the digit-sum bound applies factorwise.
        k = max(
            digit_sum(m, p)
            for p, _ in char_factors
            for m, _ in P.monomials()
            if m >= 1
        )
        return DdegResult(k, "digit-sum", False)
    return DdegResult(d, "degree", False)
