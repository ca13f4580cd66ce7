"""Additive characters of a finite ring's underlying abelian group.

The additive group is a direct sum of cyclic groups Z/m_1 + ... + Z/m_k, so
every character is determined by a coefficient tuple (s_1, ..., s_k) with
s_i mod m_i, acting by

    chi(x) = e( sum_i s_i c_i(x) / m_i ),   e(theta) = exp(2 pi i theta),

where c_i(x) are the mixed-radix coordinates of x. All angle arithmetic is
exact: angles live in Z/L with L = lcm(m_i), and a complex exponential is
evaluated only once per angle class. Character sums are computed through an
integer histogram of angles, never by accumulating floats per element.

Characters are enumerated in lexicographic coefficient order, so the trivial
character always comes first. The coefficient tuples range over the same
coordinate system as the elements, which realises the self-duality of the
additive group: annihilators of subgroups can be read off exactly by integer
comparisons.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import WorkGuardExceeded
from .rings import Ring

_ANNIHILATOR_MAX_ORDER = 1 << 12


class Character:
    """A single additive character, identified by its coefficient tuple."""

    __slots__ = ("group", "coeffs", "index")

    def __init__(self, group: "CharacterGroup", coeffs: tuple[int, ...], index: int):
        self.group = group
        self.coeffs = coeffs
        self.index = index

    @property
    def is_trivial(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def angle(self, x: int) -> int:
        """Exact angle of chi(x) as an integer mod L."""
        g = self.group
        total = 0
        for d, s, w in zip(g.ring.digits(x), self.coeffs, g.coord_weights):
            total += d * s * w
        return total % g.L

    def value(self, x: int) -> complex:
        return complex(self.group.unit_table[self.angle(x)])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Character)
            and self.group.ring == other.group.ring
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.group.ring.spec_string(), self.coeffs))

    def __repr__(self) -> str:
        return f"<Character {self.coeffs} on {self.group.ring.spec_string()}>"


class CharacterGroup:
    """The full dual of (R, +), with vectorised angle computations."""

    def __init__(self, ring: Ring):
        self.ring = ring
        radices = ring.additive_orders()
        self.radices = radices
        self.L = math.lcm(*radices)
        self.coord_weights = tuple(self.L // m for m in radices)
        self.unit_table = np.exp(2j * np.pi * np.arange(self.L) / self.L)
        self.count = ring.order
        self._coeff_matrix: np.ndarray | None = None

    # -- enumeration ---------------------------------------------------------

    def coeff_matrix(self) -> np.ndarray:
        """(count x k) matrix of coefficient tuples in lexicographic order."""
        if self._coeff_matrix is None:
            grids = np.meshgrid(
                *[np.arange(m, dtype=np.int64) for m in self.radices],
                indexing="ij",
            )
            self._coeff_matrix = np.stack(grids, axis=-1).reshape(
                -1, len(self.radices)
            )
        return self._coeff_matrix

    def char_at(self, position: int) -> Character:
        coeffs = tuple(int(c) for c in self.coeff_matrix()[position])
        return Character(self, coeffs, position)

    def char_from_coeffs(self, coeffs: Sequence[int]) -> Character:
        coeffs = tuple(int(s) % m for s, m in zip(coeffs, self.radices))
        if len(coeffs) != len(self.radices):
            raise ValueError(
                f"expected {len(self.radices)} coefficients, got {len(coeffs)}"
            )
        position = 0
        for s, m in zip(coeffs, self.radices):
            position = position * m + s
        return Character(self, coeffs, position)

    def __iter__(self) -> Iterator[Character]:
        for position in range(self.count):
            yield self.char_at(position)

    # -- vectorised angles -----------------------------------------------------

    def weight_matrix(self) -> np.ndarray:
        """(count x k) matrix: row j holds s_i * (L / m_i) for character j."""
        return self.coeff_matrix() * np.asarray(self.coord_weights, dtype=np.int64)

    def angles_for_elements(self, elements: np.ndarray) -> np.ndarray:
        """(len(elements) x count) exact angle matrix mod L."""
        D = self.ring._digits_of(np.asarray(elements, dtype=np.int64))
        return (D @ self.weight_matrix().T) % self.L

    def angles_single(self, coeffs: Sequence[int], elements: np.ndarray) -> np.ndarray:
        w = np.asarray(
            [s * wt for s, wt in zip(coeffs, self.coord_weights)], dtype=np.int64
        )
        D = self.ring._digits_of(np.asarray(elements, dtype=np.int64))
        return (D @ w) % self.L


_GROUP_CACHE: dict[Ring, CharacterGroup] = {}


def character_group(ring: Ring) -> CharacterGroup:
    group = _GROUP_CACHE.get(ring)
    if group is None:
        group = CharacterGroup(ring)
        _GROUP_CACHE[ring] = group
    return group


def characters(ring: Ring) -> Iterator[Character]:
    """All additive characters, trivial first, lexicographic coefficients."""
    return iter(character_group(ring))


def char_sum(ring: Ring, char: Character, values: Iterable[int]) -> complex:
    """Sum of chi over a multiset of ring elements, via an exact angle
    histogram followed by one complex evaluation per angle class."""
    group = char.group
    values_arr = np.asarray(list(values), dtype=np.int64)
    if values_arr.size == 0:
        return 0j
    angles = group.angles_single(char.coeffs, values_arr)
    hist = np.bincount(angles, minlength=group.L)
    return complex(hist @ group.unit_table)


def all_char_sums(ring: Ring, counts: np.ndarray) -> np.ndarray:
    """Vector of sum_x counts[x] chi(x) over every character, in enumeration
    order. counts is indexed by element and may be any real weights; exact
    integer counts stay exact through the histogram."""
    group = character_group(ring)
    n = ring.order
    counts = np.asarray(counts)
    angles = group.angles_for_elements(np.arange(n, dtype=np.int64))
    out = np.empty(group.count, dtype=np.complex128)
    for j in range(group.count):
        hist = np.bincount(angles[:, j], weights=counts, minlength=group.L)
        out[j] = hist @ group.unit_table
    return out


def character_table(ring: Ring) -> np.ndarray:
    """(order x count) complex matrix of chi_j(x). Rows are elements, columns
    characters in enumeration order. Intended for rings of modest order."""
    group = character_group(ring)
    angles = group.angles_for_elements(np.arange(ring.order, dtype=np.int64))
    return group.unit_table[angles]


def annihilator_mask(ring: Ring, generators: Sequence[int]) -> np.ndarray:
    """Boolean mask over the character enumeration: True where the character
    kills every generator. Exact: a character kills x iff its angle is 0."""
    group = character_group(ring)
    gens = np.asarray(list(generators), dtype=np.int64)
    if gens.size == 0:
        return np.ones(group.count, dtype=bool)
    angles = group.angles_for_elements(gens)
    return (angles == 0).all(axis=0)


def annihilator(ring: Ring, subgroup, guard: int | None = None) -> list[Character]:
    """All characters annihilating the given subgroup (a SubgroupSet or any
    iterable of elements). Guarded to rings of order at most 2^12."""
    limit = _ANNIHILATOR_MAX_ORDER if guard is None else guard
    if ring.order > limit:
        raise WorkGuardExceeded(
            f"annihilator enumeration refused for order {ring.order} > {limit}"
        )
    gens = getattr(subgroup, "generators", None)
    if gens is None:
        gens = list(subgroup)
    mask = annihilator_mask(ring, list(gens))
    group = character_group(ring)
    return [group.char_at(int(j)) for j in np.flatnonzero(mask)]
