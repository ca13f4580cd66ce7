"""Finite principal ideal rings with integer-indexed elements.

Five constructions are supported: integers mod N, finite fields GF(p^e),
quotients of a polynomial ring over a finite field by an arbitrary monic
modulus, Galois rings Z[w]/(p^n, f(w)), and finite products of any of these.

Every ring enumerates its elements as indices 0..order-1. The additive group
is a direct sum of cyclic groups and the index is the mixed-radix encoding of
the coordinate vector, least significant coordinate first. Index 0 is always
the zero element, and the multiplicative identity is always index 1 for the
single-component constructions. Element indices are plain Python ints, which
keeps bulk arithmetic vectorisable with numpy and makes reports JSON-stable.

Ring specs use a small textual grammar:

    Z/12
    GF(9)                    canonical defining polynomial
    GF(9;h=2,2,1)            explicit defining polynomial, ascending degree
    PQ(q=2;g=0,0,1)          F_2[t]/(t^2); g need not be irreducible
    GR(2,3,2)                Galois ring Z[w]/(2^3, f(w)), deg f = 2
    GR(2,3,2;f=1,1,1)        explicit f, irreducible mod p
    prod(Z/4;GF(4))          finite product, first factor least significant
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from typing import Iterable, Sequence

import numpy as np

from .budget import order_guard
from .errors import NotIrreducible, NotMonic, OrderTooLarge, ParseError

_DIGIT_MATRIX_MAX_ORDER = 1 << 16
_ADD_TABLE_MAX_ORDER = 1 << 11


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorisation of n >= 1 as (prime, exponent) pairs, ascending."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: list[tuple[int, int]] = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def is_prime(n: int) -> bool:
    if not isinstance(n, int) or isinstance(n, bool):
        return False
    if n < 2:
        return False
    return factorize(n) == [(n, 1)]


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p^e, or raise ParseError if q is not one."""
    if q < 2:
        raise ParseError(f"{q} is not a prime power")
    fac = factorize(q)
    if len(fac) != 1:
        raise ParseError(f"{q} is not a prime power")
    return fac[0]


# ---------------------------------------------------------------------------
# Dense univariate polynomial helpers over a coefficient ring.
#
# Polynomials are tuples of element indices, ascending degree, no trailing
# zeros. These helpers are only used at construction time (canonical moduli,
# irreducibility checks, factoring quotient moduli), so scalar arithmetic on
# the coefficient ring is fast enough.
# ---------------------------------------------------------------------------


def _ptrim(c: Sequence[int]) -> tuple[int, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pmul(a: Sequence[int], b: Sequence[int], F: "Ring") -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj == 0:
                continue
            out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return _ptrim(out)


def _pdivmod(a: Sequence[int], b: Sequence[int], F: "Ring") -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Divide a by monic b over F, returning (quotient, remainder)."""
    if not b or b[-1] != F.one:
        raise ValueError("division requires a monic divisor")
    rem = list(a)
    db = len(b) - 1
    if db == 0:
        return _ptrim(a), ()
    quot = [0] * max(len(rem) - db, 0)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        if c == 0:
            continue
        quot[i - db] = c
        for j in range(db + 1):
            rem[i - db + j] = F.sub(rem[i - db + j], F.mul(c, b[j]))
    return _ptrim(quot), _ptrim(rem)


def _monic_polys(F: "Ring", degree: int) -> Iterable[tuple[int, ...]]:
    """All monic polynomials of the given degree over F, lexicographic in the
    ascending-degree coefficient vector."""
    for low in itertools.product(range(F.order), repeat=degree):
        yield low + (F.one,)


def poly_is_irreducible(poly: Sequence[int], F: "Ring") -> bool:
    """Trial-division irreducibility over a finite field F (poly monic)."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for cand in _monic_polys(F, d):
            _, rem = _pdivmod(poly, cand, F)
            if not rem:
                return False
    return True


def factor_poly(poly: Sequence[int], F: "Ring") -> list[tuple[tuple[int, ...], int]]:
    """Factor a monic polynomial over a finite field F into monic irreducibles.

    Returns (factor, multiplicity) pairs ordered by (degree, coefficient
    vector). Trial division in that order only ever splits off irreducible
    factors, because any proper divisor of smaller degree would have been
    found first.
    """
    rem = _ptrim(poly)
    if len(rem) - 1 < 1:
        return []
    out: list[tuple[tuple[int, ...], int]] = []
    d = 1
    while len(rem) - 1 >= 2 * d:
        for cand in _monic_polys(F, d):
            mult = 0
            while True:
                quot, r = _pdivmod(rem, cand, F)
                if r:
                    break
                rem = quot
                mult += 1
            if mult:
                out.append((cand, mult))
            if len(rem) - 1 < 2 * d:
                break
        d += 1
    if len(rem) - 1 >= 1:
        out.append((rem, 1))
    out.sort(key=lambda fm: (len(fm[0]), fm[0]))
    return out


@functools.lru_cache(maxsize=None)
def canonical_irreducible(p: int, e: int) -> tuple[int, ...]:
    """The lexicographically smallest monic irreducible of degree e over Z/p,
    comparing ascending-degree coefficient vectors."""
    field = ZModRing(p, _guard_checked=True)
    if e == 1:
        return (0, 1)
    for cand in _monic_polys(field, e):
        if poly_is_irreducible(cand, field):
            return cand
    raise RuntimeError(f"no irreducible of degree {e} over Z/{p}")


# ---------------------------------------------------------------------------
# Ring base class
# ---------------------------------------------------------------------------


class Ring:
    """Common element-index arithmetic over a fixed additive coordinate system.

    Subclasses must set `order`, `characteristic`, `_radices` and implement
    `mul`, `mul_vec`, `prime_ideal_profile`, `residue_fields` and
    `spec_string`. Addition is generic: it acts digit-wise on the mixed-radix
    coordinates.
    """

    order: int
    characteristic: int
    one: int
    _radices: tuple[int, ...]

    def __init__(self) -> None:
        self._digit_cache: np.ndarray | None = None
        self._add_table: np.ndarray | None = None
        radices = np.asarray(self._radices, dtype=np.int64)
        self._radices_arr = radices
        places = np.ones(len(self._radices), dtype=np.int64)
        for i in range(1, len(self._radices)):
            places[i] = places[i - 1] * self._radices[i - 1]
        self._places = places

    # -- scalar coordinate arithmetic --------------------------------------

    def additive_orders(self) -> tuple[int, ...]:
        return self._radices

    def digits(self, x: int) -> tuple[int, ...]:
        out = []
        for m in self._radices:
            x, d = divmod(x, m)
            out.append(d)
        return tuple(out)

    def from_digits(self, ds: Sequence[int]) -> int:
        x = 0
        for d, m, pl in zip(ds, self._radices, self._places):
            x += (d % m) * int(pl)
        return x

    def add(self, a: int, b: int) -> int:
        da, db = self.digits(a), self.digits(b)
        return self.from_digits([x + y for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        return self.from_digits([-d for d in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("negative exponents are not defined here")
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def from_int(self, n: int) -> int:
        ds = self.digits(self.one)
        return self.from_digits([n * d for d in ds])

    # -- derived structure ---------------------------------------------------

    def prime_ideal_profile(self) -> list[tuple[int, int]]:
        """(residue field size, multiplicity) per prime ideal, sorted."""
        raise NotImplementedError

    def residue_fields(self) -> list[tuple[int, "Ring"]]:
        """(residue field size, quotient ring) per prime ideal."""
        raise NotImplementedError

    def lpf(self) -> int:
        """Least prime factor: the smallest residue field size."""
        return min(size for size, _ in self.prime_ideal_profile())

    def units_count(self) -> int:
        count = self.order
        for size, _ in self.prime_ideal_profile():
            count = count // size * (size - 1)
        return count

    @property
    def is_field(self) -> bool:
        profile = self.prime_ideal_profile()
        return len(profile) == 1 and profile[0] == (self.order, 1)

    def spec_string(self) -> str:
        raise NotImplementedError

    def element_str(self, x: int) -> str:
        return str(x)

    def info_dict(self) -> dict:
        return {
            "spec": self.spec_string(),
            "order": self.order,
            "characteristic": self.characteristic,
            "lpf": self.lpf(),
            "units": self.units_count(),
            "prime_profile": [list(entry) for entry in self.prime_ideal_profile()],
            "additive_invariants": list(self._radices),
        }

    def __repr__(self) -> str:
        return f"<Ring {self.spec_string()}>"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Ring) and self.spec_string() == other.spec_string()

    def __hash__(self) -> int:
        return hash(self.spec_string())

    # -- vectorised coordinate arithmetic -----------------------------------

    def digit_matrix(self) -> np.ndarray:
        """(order x k) matrix of mixed-radix coordinates, cached when small."""
        if self._digit_cache is not None:
            return self._digit_cache
        mat = self._digits_of(np.arange(self.order, dtype=np.int64))
        if self.order <= _DIGIT_MATRIX_MAX_ORDER:
            self._digit_cache = mat
        return mat

    def _digits_of(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        out = np.empty(a.shape + (len(self._radices),), dtype=np.int64)
        rest = a
        for i, m in enumerate(self._radices):
            rest, d = np.divmod(rest, m)
            out[..., i] = d
        return out

    def _from_digit_array(self, ds: np.ndarray) -> np.ndarray:
        return (ds % self._radices_arr) @ self._places

    def add_vec(self, a, b) -> np.ndarray:
        da = self._digits_of(np.asarray(a, dtype=np.int64))
        db = self._digits_of(np.asarray(b, dtype=np.int64))
        return self._from_digit_array(da + db)

    def neg_vec(self, a) -> np.ndarray:
        da = self._digits_of(np.asarray(a, dtype=np.int64))
        return self._from_digit_array(-da)

    def sub_vec(self, a, b) -> np.ndarray:
        da = self._digits_of(np.asarray(a, dtype=np.int64))
        db = self._digits_of(np.asarray(b, dtype=np.int64))
        return self._from_digit_array(da - db)

    def mul_vec(self, a, b) -> np.ndarray:
        raise NotImplementedError

    def pow_vec(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        result = np.full(a.shape, self.one, dtype=np.int64)
        base = a
        while e:
            if e & 1:
                result = self.mul_vec(result, base)
            base = self.mul_vec(base, base)
            e >>= 1
        return result

    def eval_poly_vec(self, coeffs: Sequence[int], xs) -> np.ndarray:
        """Evaluate sum_j coeffs[j] x^j at every x in xs (Horner)."""
        xs = np.asarray(xs, dtype=np.int64)
        if not coeffs:
            return np.zeros(xs.shape, dtype=np.int64)
        acc = np.full(xs.shape, coeffs[-1], dtype=np.int64)
        for c in reversed(coeffs[:-1]):
            acc = self.mul_vec(acc, xs)
            if c != 0:
                acc = self.add_vec(acc, np.full(xs.shape, c, dtype=np.int64))
        return acc

    def add_table(self) -> np.ndarray:
        """Full (order x order) addition table; entry [x, v] is x + v."""
        if self._add_table is not None:
            return self._add_table
        n = self.order
        if n > _ADD_TABLE_MAX_ORDER:
            raise WorkError(
                f"addition table refused for order {n} > {_ADD_TABLE_MAX_ORDER}"
            )
        idx = np.arange(n, dtype=np.int64)
        da = self._digits_of(idx)[:, None, :]
        db = self._digits_of(idx)[None, :, :]
        table = self._from_digit_array(da + db).astype(np.int32)
        self._add_table = table
        return table


class WorkError(RuntimeError):
    """Internal marker: a convenience table is too large. Callers fall back
    to streaming arithmetic; this never escapes the public API."""


# ---------------------------------------------------------------------------
# Z/N
# ---------------------------------------------------------------------------


class ZModRing(Ring):
    """Integers modulo N, N >= 2."""

    def __init__(self, n: int, _guard_checked: bool = False, guard: int | None = None):
        if n < 2:
            raise ParseError(f"Z/{n}: modulus must be at least 2")
        if not _guard_checked:
            _check_order(n, guard)
        self.n = n
        self.order = n
        self.characteristic = n
        self.one = 1
        self._radices = (n,)
        self._factorization = factorize(n)
        super().__init__()

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.n

    def neg(self, a: int) -> int:
        return (-a) % self.n

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.n

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.n

    def from_int(self, n: int) -> int:
        return n % self.n

    def add_vec(self, a, b) -> np.ndarray:
        return (np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)) % self.n

    def neg_vec(self, a) -> np.ndarray:
        return (-np.asarray(a, dtype=np.int64)) % self.n

    def sub_vec(self, a, b) -> np.ndarray:
        return (np.asarray(a, dtype=np.int64) - np.asarray(b, dtype=np.int64)) % self.n

    def mul_vec(self, a, b) -> np.ndarray:
        return (np.asarray(a, dtype=np.int64) * np.asarray(b, dtype=np.int64)) % self.n

    def prime_ideal_profile(self) -> list[tuple[int, int]]:
        return [(p, e) for p, e in self._factorization]

    def residue_fields(self) -> list[tuple[int, Ring]]:
        return [(p, ZModRing(p, _guard_checked=True)) for p, _ in self._factorization]

    def spec_string(self) -> str:
        return f"Z/{self.n}"


# ---------------------------------------------------------------------------
# Modulus-based constructions: coefficients mod a base modulus, reduced by a
# monic polynomial. Covers GF(p^e) (base Z/p) and Galois rings (base Z/p^n).
# ---------------------------------------------------------------------------


class _PolyModRing(Ring):
    """Shared machinery for GF(p^e) and GR(p,n,r): elements are polynomials
    of degree < r with integer coefficients mod `modulus`, multiplied modulo
    a monic defining polynomial whose reduction rows are precomputed."""

    modulus: int
    defining: tuple[int, ...]

    def _setup_poly(self, modulus: int, defining: tuple[int, ...]) -> None:
        self.modulus = modulus
        self.defining = defining
        r = len(defining) - 1
        self._deg = r
        # rows[j] = coefficient vector of w^(r+j) mod defining, fully reduced
        rows = []
        if r >= 2:
            current = [(-c) % modulus for c in defining[:-1]]
            rows.append(list(current))
            for _ in range(1, r - 1):
                shifted = [0] + current[:-1]
                lead = current[-1]
                current = [
                    (shifted[i] + lead * rows[0][i]) % modulus for i in range(r)
                ]
                rows.append(list(current))
        self._red_rows = (
            np.array(rows, dtype=np.int64) if rows else np.zeros((0, r), dtype=np.int64)
        )

    def _coeffs(self, x: int) -> list[int]:
        out = []
        for _ in range(self._deg):
            x, d = divmod(x, self.modulus)
            out.append(d)
        return out

    def mul(self, a: int, b: int) -> int:
        ca, cb = self._coeffs(a), self._coeffs(b)
        r = self._deg
        conv = [0] * (2 * r - 1)
        for i, ai in enumerate(ca):
            if ai == 0:
                continue
            for j, bj in enumerate(cb):
                conv[i + j] += ai * bj
        out = [c % self.modulus for c in conv[:r]]
        for j in range(r - 1):
            hi = conv[r + j] % self.modulus if r + j < len(conv) else 0
            if hi:
                row = self._red_rows[j]
                for i in range(r):
                    out[i] = (out[i] + hi * int(row[i])) % self.modulus
        return self.from_digits(out)

    def mul_vec(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        r = self._deg
        da = self._digits_of(a)
        db = self._digits_of(b)
        conv = np.zeros(a.shape + (2 * r - 1,), dtype=np.int64)
        for i in range(r):
            for j in range(r):
                conv[..., i + j] += da[..., i] * db[..., j]
        conv %= self.modulus
        out = conv[..., :r]
        if r > 1:
            out = (out + conv[..., r:] @ self._red_rows) % self.modulus
        return out @ self._places


class FiniteFieldRing(_PolyModRing):
    """GF(p^e) as Z/p[u] modulo a monic irreducible of degree e."""

    def __init__(self, q: int, h: tuple[int, ...] | None = None, guard: int | None = None):
        p, e = prime_power(q)
        _check_order(q, guard)
        if h is None:
            h = canonical_irreducible(p, e)
            self._h_is_canonical = True
        else:
            h = tuple(c % p for c in h)
            if len(h) != e + 1:
                raise ParseError(
                    f"GF({q}): defining polynomial must have degree {e}"
                )
            if h[-1] != 1:
                raise NotMonic(f"GF({q}): defining polynomial must be monic")
            if not poly_is_irreducible(h, ZModRing(p, _guard_checked=True)):
                raise NotIrreducible(
                    f"GF({q}): {list(h)} is reducible over Z/{p}"
                )
            self._h_is_canonical = h == canonical_irreducible(p, e)
        self.p = p
        self.e = e
        self.q = q
        self.order = q
        self.characteristic = p
        self.one = 1
        self._radices = (p,) * e
        super().__init__()
        self._setup_poly(p, h)

    def prime_ideal_profile(self) -> list[tuple[int, int]]:
        return [(self.q, 1)]

    def residue_fields(self) -> list[tuple[int, Ring]]:
        return [(self.q, self)]

    def spec_string(self) -> str:
        if self._h_is_canonical:
            return f"GF({self.q})"
        return f"GF({self.q};h={','.join(str(c) for c in self.defining)})"

    def element_str(self, x: int) -> str:
        return _poly_str(self._coeffs(x), "u")


class GaloisRingRing(_PolyModRing):
    """Galois ring Z[w]/(p^n, f(w)) with f monic of degree r, irreducible
    mod p. Order p^(n r), characteristic p^n, residue field GF(p^r)."""

    def __init__(
        self,
        p: int,
        n: int,
        r: int,
        f: tuple[int, ...] | None = None,
        guard: int | None = None,
    ):
        if not is_prime(p):
            raise ParseError(f"GR({p},{n},{r}): {p} is not prime")
        if n < 1 or r < 1:
            raise ParseError(f"GR({p},{n},{r}): n and r must be positive")
        order = p ** (n * r)
        _check_order(order, guard)
        pn = p**n
        if f is None:
            f = tuple(c % pn for c in canonical_irreducible(p, r))
            self._f_is_canonical = True
        else:
            f = tuple(c % pn for c in f)
            if len(f) != r + 1:
                raise ParseError(f"GR({p},{n},{r}): f must have degree {r}")
            if f[-1] != 1:
                raise NotMonic(f"GR({p},{n},{r}): f must be monic")
            f_mod_p = tuple(c % p for c in f[:-1]) + (1,)
            if not poly_is_irreducible(f_mod_p, ZModRing(p, _guard_checked=True)):
                raise NotIrreducible(
                    f"GR({p},{n},{r}): f reduces mod {p}"
                )
            canon = tuple(c % pn for c in canonical_irreducible(p, r))
            self._f_is_canonical = f == canon
        self.p = p
        self.n_exp = n
        self.r = r
        self.order = order
        self.characteristic = pn
        self.one = 1
        self._radices = (pn,) * r
        super().__init__()
        self._setup_poly(pn, f)

    def prime_ideal_profile(self) -> list[tuple[int, int]]:
        return [(self.p**self.r, self.n_exp)]

    def residue_fields(self) -> list[tuple[int, Ring]]:
        q = self.p**self.r
        field: Ring
        if self.r == 1:
            field = ZModRing(self.p, _guard_checked=True)
        else:
            field = FiniteFieldRing(q)
        return [(q, field)]

    def spec_string(self) -> str:
        base = f"GR({self.p},{self.n_exp},{self.r})"
        if self._f_is_canonical:
            return base
        return base[:-1] + f";f={','.join(str(c) for c in self.defining)})"

    def element_str(self, x: int) -> str:
        return _poly_str(self._coeffs(x), "w")


# ---------------------------------------------------------------------------
# F_q[t] / (g), g monic but not necessarily irreducible
# ---------------------------------------------------------------------------


class PolyQuotientRing(Ring):
    """Quotient of a polynomial ring over GF(q) by a monic modulus g.

    Elements are polynomials in t of degree < deg g with coefficients in the
    base field, encoded base q: coefficient j occupies digit-place q^j.
    """

    def __init__(self, base: Ring, g: tuple[int, ...], guard: int | None = None):
        g = tuple(int(c) for c in g)
        if len(g) < 2:
            raise ParseError("PQ: modulus must have degree at least 1")
        if any(not 0 <= c < base.order for c in g):
            raise ParseError("PQ: modulus coefficients must be base field indices")
        if g[-1] != base.one:
            raise NotMonic("PQ: modulus must be monic")
        if not base.is_field:
            raise ParseError("PQ: coefficient ring must be a field")
        m = len(g) - 1
        order = base.order**m
        _check_order(order, guard)
        self.base = base
        self.g = g
        self.m = m
        self.q = base.order
        self.order = order
        self.characteristic = base.characteristic
        self.one = 1
        self._radices = base.additive_orders() * m
        super().__init__()
        # rows[j] = coefficients of t^(m+j) mod g, fully reduced
        rows = []
        if m >= 2:
            current = [base.neg(c) for c in g[:-1]]
            rows.append(list(current))
            for _ in range(1, m - 1):
                shifted = [0] + current[:-1]
                lead = current[-1]
                current = [
                    base.add(shifted[i], base.mul(lead, rows[0][i]))
                    for i in range(m)
                ]
                rows.append(list(current))
        self._red_rows = rows
        self._factors: list[tuple[tuple[int, ...], int]] | None = None

    def coeffs(self, x: int) -> list[int]:
        out = []
        for _ in range(self.m):
            x, d = divmod(x, self.q)
            out.append(d)
        return out

    def from_coeffs(self, cs: Sequence[int]) -> int:
        x = 0
        for c in reversed(list(cs)):
            x = x * self.q + c
        return x

    def mul(self, a: int, b: int) -> int:
        ca, cb = self.coeffs(a), self.coeffs(b)
        m = self.m
        conv = [0] * (2 * m - 1)
        for i, ai in enumerate(ca):
            if ai == 0:
                continue
            for j, bj in enumerate(cb):
                if bj == 0:
                    continue
                conv[i + j] = self.base.add(conv[i + j], self.base.mul(ai, bj))
        out = conv[:m]
        for j in range(m - 1):
            hi = conv[m + j]
            if hi:
                row = self._red_rows[j]
                for i in range(m):
                    out[i] = self.base.add(out[i], self.base.mul(hi, row[i]))
        return self.from_coeffs(out)

    def _coeff_cols(self, a: np.ndarray) -> list[np.ndarray]:
        cols = []
        rest = a
        for _ in range(self.m):
            rest, d = np.divmod(rest, self.q)
            cols.append(d)
        return cols

    def mul_vec(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        m = self.m
        ca = self._coeff_cols(a)
        cb = self._coeff_cols(b)
        zeros = np.zeros(a.shape, dtype=np.int64)
        conv: list[np.ndarray] = [zeros] * (2 * m - 1)
        for i in range(m):
            for j in range(m):
                conv[i + j] = self.base.add_vec(
                    conv[i + j], self.base.mul_vec(ca[i], cb[j])
                )
        out = list(conv[:m])
        for j in range(m - 1):
            hi = conv[m + j]
            row = self._red_rows[j]
            for i in range(m):
                if row[i] != 0:
                    out[i] = self.base.add_vec(
                        out[i], self.base.mul_vec(hi, np.int64(row[i]))
                    )
        result = np.zeros(a.shape, dtype=np.int64)
        for c in reversed(out):
            result = result * self.q + c
        return result

    def modulus_factors(self) -> list[tuple[tuple[int, ...], int]]:
        if self._factors is None:
            self._factors = factor_poly(self.g, self.base)
        return self._factors

    def prime_ideal_profile(self) -> list[tuple[int, int]]:
        profile = [
            (self.q ** (len(f) - 1), mult) for f, mult in self.modulus_factors()
        ]
        profile.sort()
        return profile

    def residue_fields(self) -> list[tuple[int, Ring]]:
        out: list[tuple[int, Ring]] = []
        for f, _ in self.modulus_factors():
            deg = len(f) - 1
            if deg == 1:
                out.append((self.q, self.base))
            else:
                out.append((self.q**deg, PolyQuotientRing(self.base, f)))
        out.sort(key=lambda sr: sr[0])
        return out

    def spec_string(self) -> str:
        return f"PQ(q={self.q};g={','.join(str(c) for c in self.g)})"

    def element_str(self, x: int) -> str:
        if self.q == self.characteristic:
            return _poly_str(self.coeffs(x), "t")
        parts = [f"({self.base.element_str(c)})" for c in self.coeffs(x)]
        return _poly_str_generic(parts, self.coeffs(x), "t")


# ---------------------------------------------------------------------------
# Finite products
# ---------------------------------------------------------------------------


class ProductRing(Ring):
    """Direct product of rings; the first factor is least significant in the
    element index."""

    def __init__(self, factors: Sequence[Ring], guard: int | None = None):
        if not factors:
            raise ParseError("prod: at least one factor required")
        order = 1
        for f in factors:
            order *= f.order
        _check_order(order, guard)
        self.factors = tuple(factors)
        self.order = order
        self.characteristic = math.lcm(*(f.characteristic for f in factors))
        self._radices = tuple(
            m for f in factors for m in f.additive_orders()
        )
        self.one = self.join([f.one for f in factors])
        super().__init__()

    def split(self, x: int) -> list[int]:
        out = []
        for f in self.factors:
            x, c = divmod(x, f.order)
            out.append(c)
        return out

    def join(self, comps: Sequence[int]) -> int:
        x = 0
        for f, c in zip(reversed(self.factors), reversed(list(comps))):
            x = x * f.order + c
        return x

    def mul(self, a: int, b: int) -> int:
        return self.join(
            [
                f.mul(ca, cb)
                for f, ca, cb in zip(self.factors, self.split(a), self.split(b))
            ]
        )

    def mul_vec(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        rest_a, rest_b = a, b
        comps = []
        for f in self.factors:
            rest_a, ca = np.divmod(rest_a, f.order)
            rest_b, cb = np.divmod(rest_b, f.order)
            comps.append(f.mul_vec(ca, cb))
        result = np.zeros(a.shape, dtype=np.int64)
        for f, c in zip(reversed(self.factors), reversed(comps)):
            result = result * f.order + c
        return result

    def prime_ideal_profile(self) -> list[tuple[int, int]]:
        profile = [
            entry for f in self.factors for entry in f.prime_ideal_profile()
        ]
        profile.sort()
        return profile

    def residue_fields(self) -> list[tuple[int, Ring]]:
        out = [pair for f in self.factors for pair in f.residue_fields()]
        out.sort(key=lambda sr: sr[0])
        return out

    def spec_string(self) -> str:
        return f"prod({';'.join(f.spec_string() for f in self.factors)})"

    def element_str(self, x: int) -> str:
        parts = [
            f.element_str(c) for f, c in zip(self.factors, self.split(x))
        ]
        return "(" + ", ".join(parts) + ")"


# ---------------------------------------------------------------------------
# Formatting and parsing
# ---------------------------------------------------------------------------


def _poly_str(coeffs: Sequence[int], var: str) -> str:
    terms = []
    for j, c in enumerate(coeffs):
        if c == 0:
            continue
        if j == 0:
            terms.append(str(c))
        else:
            head = "" if c == 1 else str(c)
            terms.append(f"{head}{var}" if j == 1 else f"{head}{var}^{j}")
    return " + ".join(terms) if terms else "0"


def _poly_str_generic(parts: Sequence[str], coeffs: Sequence[int], var: str) -> str:
    terms = []
    for j, (part, c) in enumerate(zip(parts, coeffs)):
        if c == 0:
            continue
        if j == 0:
            terms.append(part)
        else:
            terms.append(f"{part}{var}" if j == 1 else f"{part}{var}^{j}")
    return " + ".join(terms) if terms else "0"


def _check_order(order: int, guard: int | None) -> None:
    limit = order_guard(guard)
    if order > limit:
        raise OrderTooLarge(
            f"ring order {order} exceeds the enumeration guard {limit}"
        )


def _split_top_level(body: str, sep: str) -> list[str]:
    parts = []
    depth = 0
    current = []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {body!r}")
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    if depth != 0:
        raise ParseError(f"unbalanced parentheses in {body!r}")
    parts.append("".join(current))
    return parts


def _parse_int_list(text: str, what: str) -> tuple[int, ...]:
    items = [t.strip() for t in text.split(",")]
    if not items or any(not re.fullmatch(r"-?\d+", t) for t in items):
        raise ParseError(f"{what}: expected a comma-separated integer list, got {text!r}")
    return tuple(int(t) for t in items)


def make_ring(spec: str, guard: int | None = None) -> Ring:
    """Parse a ring spec string and construct the ring.

    Raises ParseError for malformed specs, NotMonic / NotIrreducible for bad
    defining polynomials, and OrderTooLarge when the order exceeds the guard
    (default 2^20, override via argument or RINGLAB_ORDER_GUARD).
    """
    spec = spec.strip()
    m = re.fullmatch(r"Z/(\d+)", spec)
    if m:
        return ZModRing(int(m.group(1)), guard=guard)

    m = re.fullmatch(r"GF\((\d+)\)", spec)
    if m:
        return FiniteFieldRing(int(m.group(1)), guard=guard)

    m = re.fullmatch(r"GF\((\d+);h=([^)]+)\)", spec)
    if m:
        return FiniteFieldRing(
            int(m.group(1)), h=_parse_int_list(m.group(2), "GF h"), guard=guard
        )

    m = re.fullmatch(r"PQ\(q=(\d+);g=([^)]+)\)", spec)
    if m:
        q = int(m.group(1))
        g = _parse_int_list(m.group(2), "PQ g")
        base = FiniteFieldRing(q, guard=guard)
        return PolyQuotientRing(base, g, guard=guard)

    m = re.fullmatch(r"GR\((\d+),(\d+),(\d+)\)", spec)
    if m:
        return GaloisRingRing(
            int(m.group(1)), int(m.group(2)), int(m.group(3)), guard=guard
        )

    m = re.fullmatch(r"GR\((\d+),(\d+),(\d+);f=([^)]+)\)", spec)
    if m:
        return GaloisRingRing(
            int(m.group(1)),
            int(m.group(2)),
            int(m.group(3)),
            f=_parse_int_list(m.group(4), "GR f"),
            guard=guard,
        )

    if spec.startswith("prod(") and spec.endswith(")"):
        body = spec[len("prod(") : -1]
        parts = _split_top_level(body, ";")
        if any(not p.strip() for p in parts):
            raise ParseError(f"prod: empty factor in {spec!r}")
        factors = [make_ring(p, guard=guard) for p in parts]
        return ProductRing(factors, guard=guard)

    raise ParseError(f"unrecognised ring spec {spec!r}")
