"""Ring constructions against independent oracles.

The Galois ring tables are rebuilt here from scratch (dict-based modular
polynomial arithmetic, no shared code) and compared entry by entry.
"""

import numpy as np
import pytest

from ringlab.errors import NotIrreducible, NotMonic, OrderTooLarge, ParseError
from ringlab.rings import Ring, make_ring


def test_zmod_info():
    ring = make_ring("Z/12")
    assert ring.order == 12
    assert ring.characteristic == 12
    assert ring.lpf() == 2
    assert ring.units_count() == 4
    assert ring.prime_ideal_profile() == [(2, 2), (3, 1)]


def test_z360_profile():
    info = make_ring("Z/360").info_dict()
    assert info["lpf"] == 2
    assert info["prime_profile"] == [[2, 3], [3, 2], [5, 1]]
    assert info["units"] == 96


def test_field_info():
    ring = make_ring("GF(9)")
    assert ring.order == 9
    assert ring.characteristic == 3
    assert ring.lpf() == 9
    assert ring.units_count() == 8
    assert ring.is_field
    assert ring.prime_ideal_profile() == [(9, 1)]


def test_gf4_canonical_modulus():
    """Without an explicit modulus the smallest monic irreducible is chosen,
    so GF(4) is F_2[u]/(u^2+u+1)."""
    ring = make_ring("GF(4)")
    assert ring.defining == (1, 1, 1)


def test_galois_ring_invariants():
    ring = make_ring("GR(3,2,2)")
    assert ring.order == 81
    assert ring.characteristic == 9
    assert ring.lpf() == 9
    assert ring.units_count() == 72
    assert ring.prime_ideal_profile() == [(9, 2)]
    assert ring.additive_orders() == (9, 9)


def _poly_oracle_tables(p, n, defining):
    """Independent arithmetic for (Z/p^n)[x]/(f): coefficient tuples,
    schoolbook multiplication, remainder by the monic f."""
    mod = p**n
    deg = len(defining) - 1

    def red(cs):
        cs = list(cs)
        while len(cs) > deg:
            lead = cs.pop()
            for i in range(deg):
                cs[-deg + i] = (cs[-deg + i] - lead * defining[i]) % mod
        while len(cs) < deg:
            cs.append(0)
        return tuple(c % mod for c in cs)

    def mul(a, b):
        out = [0] * (2 * deg - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return red(out)

    def add(a, b):
        return tuple((x + y) % mod for x, y in zip(a, b))

    return add, mul


def test_galois_ring_tables_match_oracle():
    ring = make_ring("GR(3,2,2)")
    add, mul = _poly_oracle_tables(3, 2, ring.defining)
    coeffs = [ring.digits(i) for i in range(ring.order)]
    index = {c: i for i, c in enumerate(coeffs)}
    for a in range(ring.order):
        for b in range(ring.order):
            assert ring.add(a, b) == index[add(coeffs[a], coeffs[b])]
            assert ring.mul(a, b) == index[mul(coeffs[a], coeffs[b])]


def test_poly_quotient_reducible_modulus():
    """g = t^2 + t splits, so the quotient is GF(2) x GF(2)."""
    ring = make_ring("PQ(q=2;g=0,1,1)")
    assert ring.order == 4
    assert ring.lpf() == 2
    assert ring.prime_ideal_profile() == [(2, 1), (2, 1)]
    assert ring.units_count() == 1
    assert not ring.is_field


def test_poly_quotient_local():
    ring = make_ring("PQ(q=2;g=0,0,1)")
    assert ring.order == 4
    assert ring.prime_ideal_profile() == [(2, 2)]
    assert ring.units_count() == 2
    t = ring.from_int(2)
    assert ring.mul(t, t) == 0


def test_product_encoding():
    """First factor occupies the least significant digits."""
    ring = make_ring("prod(Z/4;GF(4))")
    assert ring.order == 16
    assert ring.characteristic == 4
    assert ring.one == 5
    assert ring.units_count() == 6
    assert ring.additive_orders() == (4, 2, 2)
    assert sorted(ring.prime_ideal_profile()) == [(2, 2), (4, 1)]


def test_element_index_conventions():
    for spec in ("Z/7", "GF(8)", "GR(2,2,2)", "PQ(q=3;g=0,0,1)"):
        ring = make_ring(spec)
        assert ring.from_int(0) == 0
        assert ring.one == 1
        assert ring.add(0, 5 % ring.order) == 5 % ring.order
        assert ring.mul(ring.one, 3 % ring.order) == 3 % ring.order


def test_digits_round_trip():
    for spec in ("Z/12", "GF(27)", "GR(5,2,2)", "prod(Z/9;Z/4)"):
        ring = make_ring(spec)
        for i in range(ring.order):
            assert ring.from_digits(ring.digits(i)) == i


def test_ring_axioms_random_sweep():
    """Seeded triples through associativity, commutativity, distributivity
    on one ring of each variant."""
    rng = np.random.default_rng(20240814)
    specs = ("Z/36", "GF(16)", "PQ(q=3;g=1,1,1)", "GR(2,3,2)", "prod(Z/5;GF(4))")
    for spec in specs:
        ring = make_ring(spec)
        n = ring.order
        for _ in range(200):
            a, b, c = (int(v) for v in rng.integers(0, n, 3))
            assert ring.add(a, b) == ring.add(b, a)
            assert ring.mul(a, b) == ring.mul(b, a)
            assert ring.add(ring.add(a, b), c) == ring.add(a, ring.add(b, c))
            assert ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c))
            assert ring.mul(a, ring.add(b, c)) == ring.add(
                ring.mul(a, b), ring.mul(a, c)
            )
            assert ring.add(a, ring.neg(a)) == 0
            assert ring.mul(a, ring.one) == a
            assert ring.sub(a, b) == ring.add(a, ring.neg(b))


def test_vector_ops_match_scalar():
    rng = np.random.default_rng(7)
    ring = make_ring("GR(3,2,2)")
    a = rng.integers(0, ring.order, 50)
    b = rng.integers(0, ring.order, 50)
    assert all(ring.add_vec(a, b)[i] == ring.add(int(a[i]), int(b[i])) for i in range(50))
    assert all(ring.mul_vec(a, b)[i] == ring.mul(int(a[i]), int(b[i])) for i in range(50))
    assert all(ring.neg_vec(a)[i] == ring.neg(int(a[i])) for i in range(50))
    assert all(ring.pow_vec(a, 3)[i] == ring.pow(int(a[i]), 3) for i in range(50))


def test_units_count_multiplicative():
    r1 = make_ring("Z/8")
    r2 = make_ring("GF(9)")
    prod = make_ring("prod(Z/8;GF(9))")
    assert prod.units_count() == r1.units_count() * r2.units_count()
    assert prod.lpf() == min(r1.lpf(), r2.lpf())


def test_lpf_is_min_residue_field_size():
    for spec in ("Z/35", "GR(2,2,3)", "prod(GF(4);GF(9))"):
        ring = make_ring(spec)
        assert ring.lpf() == min(size for size, _ in ring.prime_ideal_profile())


@pytest.mark.parametrize(
    "spec",
    ["Z/1", "Z/0", "Z/-3", "GF(6)", "GF(1)", "GR(4,2,2)", "nonsense", "prod()"],
)
def test_parse_rejects(spec):
    with pytest.raises(ParseError):
        make_ring(spec)


def test_parse_rejects_nonmonic_modulus():
    with pytest.raises(NotMonic):
        make_ring("PQ(q=2;g=1,1,0)")


def test_parse_rejects_reducible_field_modulus():
    with pytest.raises(NotIrreducible):
        make_ring("GF(4;h=1,0,1)")


def test_order_guard():
    with pytest.raises(OrderTooLarge):
        make_ring("Z/1048577")


def test_order_guard_env_override(monkeypatch):
    monkeypatch.setenv("RINGLAB_ORDER_GUARD", "100")
    with pytest.raises(OrderTooLarge):
        make_ring("Z/128")
    monkeypatch.setenv("RINGLAB_ORDER_GUARD", "200")
    assert make_ring("Z/128").order == 128


def test_spec_string_round_trip():
    specs = ("Z/12", "GF(4)", "GF(27)", "GR(3,2,2)", "PQ(q=2;g=0,1,1)", "prod(Z/4;GF(4))")
    for spec in specs:
        ring = make_ring(spec)
        again = make_ring(ring.spec_string())
        assert again.order == ring.order
        assert again.prime_ideal_profile() == ring.prime_ideal_profile()


def test_eval_poly_vec_matches_horner():
    ring = make_ring("Z/9")
    coeffs = (2, 0, 3, 1)
    xs = np.arange(ring.order)
    got = ring.eval_poly_vec(coeffs, xs)
    for x in range(ring.order):
        acc = 0
        for c in reversed(coeffs):
            acc = ring.add(ring.mul(acc, x), c)
        assert got[x] == acc
