"""Configuration counts, difference-free sets, the size bound, and the
intersectivity oracle. The maximum-set sizes asserted here were frozen
after brute-force sweeps over every subset (see the oracle tests below,
which repeat that enumeration for rings small enough to afford it).
"""

import numpy as np
import pytest

from ringlab.errors import HypothesisUnmet, WorkGuardExceeded
from ringlab.combinatorics import (
    config_count,
    config_count_fourier,
    difference_free_max,
    forbidden_differences,
    intersectivity_oracle,
    sarkozy_bound_check,
    verify_difference_free,
)
from ringlab.polynomials import RingPoly
from ringlab.rings import make_ring


def test_config_count_full_sets():
    ring = make_ring("Z/12")
    P = RingPoly.make(ring, (0, 0, 1))
    every = list(range(ring.order))
    rep = config_count(ring, P, every, every)
    assert rep.count == ring.order**2
    assert rep.expectation == pytest.approx(ring.order**2)
    assert rep.deviation == pytest.approx(0.0, abs=1e-9)


def test_config_count_empty_set():
    ring = make_ring("Z/12")
    P = RingPoly.make(ring, (0, 0, 1))
    rep = config_count(ring, P, [], [0, 1, 2])
    assert rep.count == 0


def test_config_count_manual():
    """Hand count on Z/5, P = x^2: pairs (x, y) with x in A and
    x + y^2 in B."""
    ring = make_ring("Z/5")
    P = RingPoly.make(ring, (0, 0, 1))
    A, B = [0, 1], [1, 2]
    want = sum(
        1 for x in A for y in range(5) if ring.add(x, P.evaluate(y)) in set(B)
    )
    rep = config_count(ring, P, A, B)
    assert rep.count == want
    assert rep.size_a == 2 and rep.size_b == 2


def test_config_count_fourier_route():
    """The exact count and the character-sum reconstruction agree to well
    under the integer spacing."""
    rng = np.random.default_rng(31)
    for spec in ("Z/12", "GF(16)", "GR(3,2,2)", "prod(Z/4;GF(4))"):
        ring = make_ring(spec)
        P = RingPoly.make(ring, (1, 2, 1))
        n = ring.order
        for _ in range(5):
            A = [int(x) for x in np.flatnonzero(rng.integers(0, 2, n))]
            B = [int(x) for x in np.flatnonzero(rng.integers(0, 2, n))]
            rep = config_count(ring, P, A, B)
            approx = config_count_fourier(ring, P, A, B)
            assert abs(rep.count - approx) < 0.5, spec


def test_forbidden_differences_excludes_zero():
    ring = make_ring("Z/13")
    P = RingPoly.make(ring, (0, 0, 1))
    D = forbidden_differences(ring, P)
    assert 0 not in D
    values = {int(v) for v in P.values()}
    for d in D:
        assert d in values or ring.neg(d) in values


@pytest.mark.parametrize(
    "spec,size",
    [("Z/5", 2), ("Z/13", 3), ("PQ(q=2;g=0,0,1)", 2)],
)
def test_difference_free_frozen_sizes(spec, size):
    ring = make_ring(spec)
    P = RingPoly.make(ring, (0, 0, 1))
    rep = difference_free_max(ring, P, mode="exact")
    assert rep.size == size
    assert rep.verified
    assert len(rep.witness) == size


def brute_force_max_free(ring, P):
    """Every subset, pairwise-checked. Only for tiny rings."""
    n = ring.order
    D = set(forbidden_differences(ring, P))
    best = 0
    for mask in range(1 << n):
        if mask.bit_count() <= best:
            continue
        members = [i for i in range(n) if mask >> i & 1]
        ok = all(
            ring.sub(a, b) not in D for a in members for b in members if a != b
        )
        if ok:
            best = mask.bit_count()
    return best


@pytest.mark.parametrize("spec", ["Z/5", "Z/8", "Z/13", "PQ(q=2;g=0,0,1)", "GF(9)"])
def test_exact_search_matches_brute_force(spec):
    ring = make_ring(spec)
    P = RingPoly.make(ring, (0, 0, 1))
    rep = difference_free_max(ring, P, mode="exact")
    assert rep.size == brute_force_max_free(ring, P)


def test_witnesses_pass_independent_scan():
    for spec in ("Z/13", "Z/16", "GF(25)", "GR(2,2,2)"):
        ring = make_ring(spec)
        P = RingPoly.make(ring, (0, 0, 1))
        rep = difference_free_max(ring, P, mode="exact")
        assert verify_difference_free(ring, P, rep.witness)
        assert rep.verified


def test_greedy_never_beats_exact():
    for seed in range(5):
        ring = make_ring("Z/13")
        P = RingPoly.make(ring, (0, 0, 1))
        exact = difference_free_max(ring, P, mode="exact")
        greedy = difference_free_max(ring, P, mode="greedy", seed=seed)
        assert greedy.size <= exact.size
        assert verify_difference_free(ring, P, greedy.witness)


def test_greedy_seed_recorded():
    ring = make_ring("Z/29")
    P = RingPoly.make(ring, (0, 0, 1))
    rep = difference_free_max(ring, P, mode="greedy", seed=7)
    assert rep.seed == 7
    assert rep.mode == "greedy"


def test_exact_mode_capped():
    ring = make_ring("Z/100")
    P = RingPoly.make(ring, (0, 0, 1))
    with pytest.raises(WorkGuardExceeded):
        difference_free_max(ring, P, mode="exact")


def test_zero_polynomial_frees_everything():
    """P identically zero forbids nothing, so the whole ring qualifies."""
    ring = make_ring("Z/6")
    P = RingPoly.make(ring, (0,))
    rep = difference_free_max(ring, P, mode="exact")
    assert rep.size == 6


def test_product_size_monotonicity():
    """A difference-free set survives the embedding into a product with a
    second factor, so the maximum cannot drop."""
    P5 = RingPoly.make(make_ring("Z/5"), (0, 0, 1))
    base = difference_free_max(make_ring("Z/5"), P5, mode="exact")
    prod_ring = make_ring("prod(Z/5;Z/4)")
    Pp = RingPoly.make(prod_ring, (0, 0, prod_ring.one))
    lifted = difference_free_max(prod_ring, Pp, mode="exact")
    assert lifted.size >= base.size


def test_sarkozy_bound_frozen_z5():
    ring = make_ring("Z/5")
    P = RingPoly.make(ring, (0, 0, 1))
    rep = sarkozy_bound_check(ring, P, 2)
    assert rep.hypothesis == "root"
    assert rep.constant_c == pytest.approx(1.0)
    assert rep.bound == pytest.approx(5**0.5 + 2, abs=1e-9)
    assert rep.satisfied


def test_sarkozy_bound_frozen_z13():
    ring = make_ring("Z/13")
    P = RingPoly.make(ring, (0, 0, 1))
    rep = sarkozy_bound_check(ring, P, 3)
    assert rep.bound == pytest.approx(13**0.5 + 2, abs=1e-9)
    assert rep.satisfied


def test_sarkozy_constant_in_subgroup_route():
    """x^2 + 1 over Z/8 has no root, but 1 lies in the value subgroup, so
    the bound still applies via the recentred polynomial."""
    ring = make_ring("Z/8")
    P = RingPoly.make(ring, (1, 0, 1))
    rep = sarkozy_bound_check(ring, P, 2)
    assert rep.hypothesis == "constant-in-subgroup"
    assert rep.bound == pytest.approx(8 / 2**0.5 + 8, abs=1e-9)


def test_sarkozy_hypothesis_unmet():
    """x^2 + t over the dual numbers: no root and the constant escapes the
    value subgroup, so the theorem does not speak."""
    ring = make_ring("PQ(q=2;g=0,0,1)")
    t = ring.from_digits((0, 1))
    P = RingPoly.make(ring, (t, 0, 1))
    with pytest.raises(HypothesisUnmet):
        sarkozy_bound_check(ring, P, 1)


def test_sarkozy_rejects_constant_polynomial():
    ring = make_ring("Z/8")
    with pytest.raises(HypothesisUnmet):
        sarkozy_bound_check(ring, RingPoly.make(ring, (3,)), 1)


def test_intersective_x2_minus_1():
    v = intersectivity_oracle("INTEGERS", [-1, 0, 1], 30)
    assert v.status == "INTERSECTIVE_UP_TO_BOUND"
    assert v.unresolved == []
    assert v.moduli_resolved > 0


def test_intersective_x2_minus_2_witness():
    """No root mod 3; the minimum over all witnesses is 3 even though the
    prime 2 also fails (at modulus 4)."""
    v = intersectivity_oracle("INTEGERS", [-2, 0, 1], 30)
    assert v.status == "WITNESS_FOUND"
    assert v.witness == {"prime": 3, "exponent": 1, "modulus": 3}
    assert v.witness_verified


def test_intersective_x2_minus_3_witness_at_prime_power():
    """x^2 - 3 has roots mod 2, 3, 5 but none mod 4: a witness only
    visible above level one, through the singular root at 2."""
    v = intersectivity_oracle("INTEGERS", [-3, 0, 1], 30)
    assert v.status == "WITNESS_FOUND"
    assert v.witness == {"prime": 2, "exponent": 2, "modulus": 4}
    assert v.witness_verified


def test_intersective_witness_reverified_independently():
    v = intersectivity_oracle("INTEGERS", [-2, 0, 1], 50)
    assert v.witness_verified
    m = v.witness["modulus"]
    assert all(pow(x, 2, m) != 2 % m for x in range(m))


def test_intersective_linear_always_passes():
    v = intersectivity_oracle("INTEGERS", [4, 1], 40)
    assert v.status == "INTERSECTIVE_UP_TO_BOUND"
    assert v.unresolved == []


def test_intersective_fpt_linear():
    """x + 1 over F_3[t]: the constant root -1 settles every modulus."""
    v = intersectivity_oracle("FPT(3)", [1, 1], 4)
    assert v.status == "INTERSECTIVE_UP_TO_BOUND"
    assert v.p == 3
    assert v.unresolved == []


def test_intersective_fpt_witness():
    """y^2 + y + 1 has no root in F_2, so the degree-one modulus t is
    already a witness."""
    v = intersectivity_oracle("FPT(2)", [1, 1, 1], 4)
    assert v.status == "WITNESS_FOUND"
    assert v.witness["g"] == [0, 1]
    assert v.witness["exponent"] == 1
    assert v.witness_verified


def test_intersective_fpt_integer_encoding():
    """Integer coefficients embed by base-p digits: 2 becomes t in F_2[t].
    y^2 + t has no root mod t^2 (squares there are 0 and 1), so the level-2
    modulus is a witness."""
    v = intersectivity_oracle("FPT(2)", [2, 0, 1], 3)
    assert v.family == "FPT"
    assert v.p == 2
    assert v.poly[0] == [0, 1]
    assert v.status == "WITNESS_FOUND"
    assert v.witness == {"g": [0, 1], "exponent": 2, "quotient_order": 4}
    assert v.witness_verified


def test_intersective_rejects_constant():
    with pytest.raises(Exception):
        intersectivity_oracle("INTEGERS", [5], 10)


def test_intersective_rejects_unknown_family():
    with pytest.raises(Exception):
        intersectivity_oracle("RATIONALS", [0, 1], 10)
