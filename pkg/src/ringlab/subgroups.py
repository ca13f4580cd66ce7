"""Subgroups of the additive group generated by polynomial value sets.

A SubgroupSet is a verified additive subgroup stored as a sorted element
tuple plus a bitmask for O(1) membership. The main constructor closes a
generating set under addition by breadth-first search; sets supplied as
already-closed are re-verified unless they came from the closure itself.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import NotASubgroup
from .polynomials import RingPoly
from .rings import Ring


class SubgroupSet:
    """An additive subgroup with fast membership and stable identity."""

    __slots__ = ("ring", "elements", "generators", "_mask")

    def __init__(self, ring: Ring, elements: tuple[int, ...], generators: tuple[int, ...]):
        self.ring = ring
        self.elements = elements
        self.generators = generators
        mask = 0
        for e in elements:
            mask |= 1 << e
        self._mask = mask

    def __contains__(self, x: int) -> bool:
        return bool((self._mask >> x) & 1)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SubgroupSet)
            and self.ring == other.ring
            and self.elements == other.elements
        )

    def __hash__(self) -> int:
        return hash((self.ring.spec_string(), self.elements))

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.ring.order // len(self.elements)

    @property
    def is_full(self) -> bool:
        return len(self.elements) == self.ring.order

    def coset(self, shift: int) -> np.ndarray:
        """Element indices of the coset H + shift."""
        base = np.asarray(self.elements, dtype=np.int64)
        if shift == 0:
            return base
        return np.sort(self.ring.add_vec(base, shift))

    def sample_generators(self, limit: int = 8) -> list[int]:
        return list(self.generators[:limit])

    def info_dict(self, extra: dict | None = None) -> dict:
        out = {
            "size": self.size,
            "index": self.index,
            "is_full": self.is_full,
            "generators_sample": self.sample_generators(),
        }
        if extra:
            out.update(extra)
        return out

    def __repr__(self) -> str:
        return (
            f"<SubgroupSet size={self.size} of {self.ring.spec_string()}>"
        )


def _closure(ring: Ring, generators: Sequence[int]) -> tuple[int, ...]:
    """Close a generating set under addition (0 is always included)."""
    gens = np.unique(np.asarray(list(generators), dtype=np.int64))
    known = np.zeros(ring.order, dtype=bool)
    known[0] = True
    if gens.size == 0:
        return (0,)
    frontier = gens[~known[gens]]
    known[frontier] = True
    while frontier.size:
        sums = ring.add_vec(frontier[:, None], gens[None, :]).ravel()
        sums = np.unique(sums)
        fresh = sums[~known[sums]]
        known[fresh] = True
        frontier = fresh
    return tuple(int(x) for x in np.flatnonzero(known))


def from_generators(ring: Ring, generators: Iterable[int]) -> SubgroupSet:
    gens = tuple(int(g) for g in generators)
    return SubgroupSet(ring, _closure(ring, gens), gens)


def from_elements(ring: Ring, elements: Iterable[int], verify: bool = True) -> SubgroupSet:
    """Wrap an explicit element set, checking it really is a subgroup."""
    elems = tuple(sorted({int(e) for e in elements}))
    if verify:
        if not elems or elems[0] != 0:
            raise NotASubgroup("a subgroup must contain 0")
        closed = _closure(ring, elems)
        if closed != elems:
            raise NotASubgroup(
                f"set of size {len(elems)} closes to size {len(closed)}"
            )
    return SubgroupSet(ring, elems, elems)


def trivial_subgroup(ring: Ring) -> SubgroupSet:
    return SubgroupSet(ring, (0,), ())


def full_subgroup(ring: Ring) -> SubgroupSet:
    return SubgroupSet(ring, tuple(range(ring.order)), (ring.one,))


_VALUE_SUBGROUP_CACHE: dict[tuple[str, tuple[int, ...], bool], SubgroupSet] = {}


def value_subgroup(ring: Ring, P: RingPoly, subtract_constant: bool = True) -> SubgroupSet:
    """The subgroup generated by the values of P, optionally recentred by
    subtracting P(0) from every value first."""
    key = (ring.spec_string(), P.coeffs, subtract_constant)
    cached = _VALUE_SUBGROUP_CACHE.get(key)
    if cached is not None:
        return cached
    values = P.values()
    if subtract_constant:
        c = int(values[0])
        if c != 0:
            values = ring.sub_vec(values, c)
    gens = tuple(int(v) for v in np.unique(values))
    result = SubgroupSet(ring, _closure(ring, gens), gens)
    _VALUE_SUBGROUP_CACHE[key] = result
    return result


def constant_in_subgroup(ring: Ring, P: RingPoly) -> bool:
    """Whether P(0) lies in the subgroup generated by {P(x) - P(0)}."""
    H = value_subgroup(ring, P, subtract_constant=True)
    return P.evaluate(0) in H


def coset_average(
    ring: Ring,
    H: SubgroupSet,
    f: Callable[[int], complex] | np.ndarray,
    shift: int = 0,
) -> complex:
    """Average of f over the coset H + shift."""
    coset = H.coset(shift)
    if isinstance(f, np.ndarray):
        return complex(f[coset].mean())
    return complex(sum(f(int(x)) for x in coset) / len(coset))
