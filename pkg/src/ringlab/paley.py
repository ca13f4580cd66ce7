"""Paley-type Cayley graphs and their quasirandomness certificates.

P(R, d) joins x and y when x - y or y - x is a d-th power. The connection
set S = ({x^d} union {-x^d}) minus {0} is symmetric, so the graph is
r-regular with r = |S|, and every additive character chi is an eigenvector
of the adjacency operator with eigenvalue

    lambda(chi) = sum over s in S of chi(s).

Spectra are computed exclusively through these character sums (exact
integer angles into one table of roots of unity), never with a numerical
eigensolver. Around them: the epsilon-uniformity measure (exhaustive on
tiny rings, sampled or structured otherwise), the spectral floor
lambda_2 / (8r), the sufficient unit-density criterion, and the
residue-field necessary floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .characters import character_group
from .errors import CharDividesDegree, ParseError, WorkGuardExceeded
from .polynomials import RingPoly, bound_parameters, derivational_degree
from .rings import Ring, WorkError

#: exhaustive uniformity sweeps iterate all 2^|R| subsets; 10 keeps the
#: sweep near a thousand set choices
EXHAUSTIVE_UNIFORMITY_CAP = 10
_EIGENVECTOR_CHECK_CAP = 64


@dataclass
class PaleyGraph:
    ring: Ring
    d: int
    connection_set: tuple[int, ...]
    r: int
    kernel_size: int
    pm_halving_factor: float
    minus_one_is_power: bool
    char_divides_degree: bool

    def spec_dict(self) -> dict:
        return {
            "ring_spec": self.ring.spec_string(),
            "d": self.d,
            "connection_set": list(self.connection_set),
            "r": self.r,
            "kernel_size": self.kernel_size,
            "pm_halving_factor": self.pm_halving_factor,
            "minus_one_is_power": self.minus_one_is_power,
            "char_divides_degree": self.char_divides_degree,
        }


def build_paley(ring: Ring, d: int) -> PaleyGraph:
    """Construct P(R, d). Allowed even when char(R) divides d, but then the
    graph may be disconnected and verdicts are refused; the report carries
    the flag."""
    if d < 2:
        raise ParseError("Paley construction needs d >= 2")
    xs = np.arange(ring.order, dtype=np.int64)
    powers = np.unique(ring.pow_vec(xs, d))
    S = np.union1d(powers, ring.neg_vec(powers))
    S = S[S != 0]
    kernel = int((ring.pow_vec(xs, d) == ring.one).sum())
    minus_one = int(ring.neg(ring.one)) in set(int(v) for v in powers)
    return PaleyGraph(
        ring=ring,
        d=d,
        connection_set=tuple(int(s) for s in S),
        r=int(S.size),
        kernel_size=kernel,
        pm_halving_factor=0.5 if minus_one else 1.0,
        minus_one_is_power=minus_one,
        char_divides_degree=ring.characteristic % d == 0,
    )


@dataclass
class SpectrumReport:
    ring_spec: str
    d: int
    r: int
    eigenvalues: np.ndarray
    lambda2: float
    lambda2_witness: tuple[int, ...]
    epsilon_star: float
    imag_residue_max: float
    trace: float
    trace_squared: float

    def to_dict(self) -> dict:
        return {
            "ring_spec": self.ring_spec,
            "d": self.d,
            "r": self.r,
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "lambda2": self.lambda2,
            "lambda2_witness": list(self.lambda2_witness),
            "epsilon_star": self.epsilon_star,
            "imag_residue_max": self.imag_residue_max,
            "trace": self.trace,
            "trace_squared": self.trace_squared,
        }


_SPECTRA: dict[tuple[str, int], SpectrumReport] = {}


def spectrum(graph: PaleyGraph) -> SpectrumReport:
    """One eigenvalue per character, by exact angle histogram sums over the
    connection set. lambda2 takes the first maximizer in character
    enumeration order."""
    key = (graph.ring.spec_string(), graph.d)
    cached = _SPECTRA.get(key)
    if cached is not None:
        return cached
    ring = graph.ring
    group = character_group(ring)
    S = np.asarray(graph.connection_set, dtype=np.int64)
    if S.size:
        angles = group.angles_for_elements(S)
        evals_complex = group.unit_table[angles].sum(axis=0)
    else:
        evals_complex = np.zeros(group.count, dtype=np.complex128)
    imag_max = float(np.abs(evals_complex.imag).max())
    evals = evals_complex.real
    moduli = np.abs(evals)
    idx = 1 + int(np.argmax(moduli[1:]))
    witness = tuple(int(c) for c in group.coeff_matrix()[idx])
    lambda2 = float(moduli[idx])
    report = SpectrumReport(
        ring_spec=ring.spec_string(),
        d=graph.d,
        r=graph.r,
        eigenvalues=evals,
        lambda2=lambda2,
        lambda2_witness=witness,
        epsilon_star=lambda2 / (8 * graph.r) if graph.r else math.inf,
        imag_residue_max=imag_max,
        trace=float(evals.sum()),
        trace_squared=float((evals**2).sum()),
    )
    _SPECTRA[key] = report
    return report


def adjacency_matrix(graph: PaleyGraph) -> np.ndarray:
    """Dense 0/1 adjacency, for the eigenvector identity on small rings."""
    ring = graph.ring
    n = ring.order
    if n > _EIGENVECTOR_CHECK_CAP:
        raise WorkGuardExceeded(
            f"dense adjacency is limited to order {_EIGENVECTOR_CHECK_CAP}"
        )
    A = np.zeros((n, n), dtype=np.int64)
    idx = np.arange(n, dtype=np.int64)
    for s in graph.connection_set:
        A[idx, ring.add_vec(idx, int(s))] = 1
    return A


def eigenvector_identity_error(graph: PaleyGraph) -> float:
    """max over characters chi and points x of |(A chi)(x) - lambda(chi)
    chi(x)|; exact spectral confirmation with no eigensolver."""
    from .characters import character_table

    A = adjacency_matrix(graph)
    table = character_table(graph.ring)
    evals = spectrum(graph).eigenvalues
    return float(np.abs(A @ table - table * evals[None, :]).max())


def edges(graph: PaleyGraph) -> list[tuple[int, int]]:
    """Edge list with u < v, one line per unordered edge."""
    ring = graph.ring
    out = []
    for u in range(ring.order):
        for s in graph.connection_set:
            v = ring.add(u, int(s))
            if u < v:
                out.append((u, v))
    return sorted(set(out))


@dataclass
class UniformityReport:
    ring_spec: str
    d: int
    mode: str
    pairs_examined: int
    max_normalized_deviation: float
    epsilon_lower_bound: float
    witness_a: list[int]
    witness_b: list[int]
    mixing_checked_pairs: int
    mixing_all_satisfied: bool
    mixing_worst_slack: float
    seed: int | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _neighbor_masks(graph: PaleyGraph) -> list[int]:
    ring = graph.ring
    n = ring.order
    nbr = [0] * n
    idx = np.arange(n, dtype=np.int64)
    for s in graph.connection_set:
        shifted = ring.add_vec(idx, int(s))
        for x in range(n):
            nbr[x] |= 1 << int(shifted[x])
    return nbr


def _degrees_into(graph: PaleyGraph, a01: np.ndarray) -> np.ndarray:
    """deg_A(x) = #{a in A : x ~ a} for every x, via gathers."""
    ring = graph.ring
    n = ring.order
    out = np.zeros(n)
    idx = np.arange(n, dtype=np.int64)
    try:
        table = ring.add_table()
        for s in graph.connection_set:
            out += a01[table[:, s]]
    except WorkError:
        for s in graph.connection_set:
            out += a01[ring.add_vec(idx, int(s))]
    return out


def _mask_to_list(mask: int, n: int) -> list[int]:
    return [v for v in range(n) if mask >> v & 1]


def uniformity_measure(
    graph: PaleyGraph,
    mode: str = "exhaustive",
    count: int = 200,
    seed: int = 0,
    pairs: Sequence[tuple[Sequence[int], Sequence[int]]] | None = None,
) -> UniformityReport:
    """Lower bound for the best epsilon-uniformity parameter.

    The statistic per pair is |N(A,B) - (r/|V|) |A||B|| / (r |V|) with
    N(A,B) counting ordered adjacent pairs in A x B. Exhaustive mode
    (|R| <= 10) maximizes exactly: for each A the optimal B is a sign
    class of the centered degree vector, so only 2^|R| set choices are
    scanned. Sampled and structured modes report the maximum over the
    examined pairs only; each examined pair is also checked against the
    expander mixing certificate lambda2 sqrt(|A||B|) + 0.5.
    """
    ring = graph.ring
    n = ring.order
    r = graph.r
    if r == 0:
        raise ParseError("uniformity is undefined for an empty connection set")
    best = -1.0
    best_a: list[int] = []
    best_b: list[int] = []
    mixing_checked = 0
    mixing_ok = True
    mixing_worst = -math.inf
    lam2 = spectrum(graph).lambda2
    used_seed: int | None = None

    if mode == "exhaustive":
        if n > EXHAUSTIVE_UNIFORMITY_CAP:
            raise WorkGuardExceeded(
                f"exhaustive uniformity is limited to order "
                f"{EXHAUSTIVE_UNIFORMITY_CAP}, ring has order {n}"
            )
        nbr = _neighbor_masks(graph)
        pairs_examined = 0
        for amask in range(1 << n):
            size_a = amask.bit_count()
            centered = [
                (nbr[x] & amask).bit_count() - r * size_a / n for x in range(n)
            ]
            pos = sum(c for c in centered if c > 0)
            neg = -sum(c for c in centered if c < 0)
            dev = max(pos, neg)
            pairs_examined += 1
            if dev > best:
                best = dev
                best_a = _mask_to_list(amask, n)
                sign = 1 if pos >= neg else -1
                best_b = [x for x in range(n) if sign * centered[x] > 0]
        best /= r * n
        pair_list = [(best_a, best_b)]
    else:
        if mode == "sampled":
            rng = np.random.default_rng(seed)
            used_seed = seed
            pair_list = []
            for _ in range(count):
                a = np.flatnonzero(rng.integers(0, 2, n)).tolist()
                b = np.flatnonzero(rng.integers(0, 2, n)).tolist()
                pair_list.append((a, b))
        elif mode == "structured":
            families = [
                [],
                [0],
                sorted({0, *graph.connection_set}),
                list(range(n // 2)),
                list(range(n)),
            ]
            pair_list = [(a, b) for a in families for b in families]
        elif mode == "explicit":
            if pairs is None:
                raise ParseError("explicit mode needs set pairs")
            pair_list = [(list(a), list(b)) for a, b in pairs]
        else:
            raise ParseError(f"unknown uniformity mode {mode!r}")
        pairs_examined = len(pair_list)
        for a, b in pair_list:
            a01 = np.zeros(n)
            if a:
                a01[np.asarray(a, dtype=np.int64)] = 1.0
            deg_a = _degrees_into(graph, a01)
            N = float(deg_a[np.asarray(b, dtype=np.int64)].sum()) if b else 0.0
            raw_dev = abs(N - r * len(a) * len(b) / n)
            dev = raw_dev / (r * n)
            if dev > best:
                best = dev
                best_a, best_b = sorted(a), sorted(b)
            cert = lam2 * math.sqrt(len(a) * len(b)) + 0.5
            mixing_checked += 1
            slack = raw_dev - cert
            mixing_worst = max(mixing_worst, slack)
            if slack > 0:
                mixing_ok = False

    if mode == "exhaustive":
        a01 = np.zeros(n)
        if best_a:
            a01[np.asarray(best_a, dtype=np.int64)] = 1.0
        deg_a = _degrees_into(graph, a01)
        N = float(deg_a[np.asarray(best_b, dtype=np.int64)].sum()) if best_b else 0.0
        raw_dev = abs(N - r * len(best_a) * len(best_b) / n)
        cert = lam2 * math.sqrt(len(best_a) * len(best_b)) + 0.5
        mixing_checked = 1
        mixing_worst = raw_dev - cert
        mixing_ok = mixing_worst <= 0

    return UniformityReport(
        ring_spec=ring.spec_string(),
        d=graph.d,
        mode=mode,
        pairs_examined=pairs_examined,
        max_normalized_deviation=float(best),
        epsilon_lower_bound=float(best),
        witness_a=best_a,
        witness_b=best_b,
        mixing_checked_pairs=mixing_checked,
        mixing_all_satisfied=mixing_ok,
        mixing_worst_slack=float(mixing_worst),
        seed=used_seed,
    )


@dataclass
class QuasirandomnessVerdict:
    ring_spec: str
    d: int
    k: int
    k_certified: bool
    b_const: int
    unit_density: float
    sufficient_epsilon: float | None
    bad_prime_sizes: list[int]
    necessary_epsilon_floor: float | None
    spectral_epsilon_floor: float
    lambda2: float
    r: int
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def quasirandomness_verdict(graph: PaleyGraph) -> QuasirandomnessVerdict:
    """Three epsilon thresholds for P(R, d).

    sufficient_epsilon: unit density u = |R^x|/|R| forces epsilon-uniformity
    for every epsilon > 3 d B(d, char) (k-1) (1-u)^(1/2^(k-1)), with k the
    derivational degree of x^d. None when k < 2 (the criterion needs k - 1
    positive).

    necessary_epsilon_floor: any residue field where the plus-minus d-th
    powers miss an element forces epsilon >= sqrt((d-1) / (64 d^2 q)).

    spectral_epsilon_floor: lambda2 / (8r); epsilon-uniformity for smaller
    epsilon would contradict the eigenvalue bound.
    """
    if graph.char_divides_degree:
        raise CharDividesDegree(
            f"characteristic {graph.ring.characteristic} divides d = {graph.d}; "
            "the graph may be disconnected and no verdict is asserted"
        )
    ring = graph.ring
    d = graph.d
    monomial = RingPoly.make(ring, (0,) * d + (ring.one,))
    dres = derivational_degree(ring, monomial)
    bp = bound_parameters(ring, d, dres)
    k = bp.k
    B = bp.b
    u = ring.units_count() / ring.order
    notes = []
    if k >= 2:
        sufficient = 3 * d * B * (k - 1) * (1 - u) ** (1.0 / 2 ** (k - 1))
    else:
        sufficient = None
        notes.append(
            "x^d has derivational degree below 2; the unit-density "
            "criterion does not apply"
        )
    if not bp.certified:
        notes.append("derivational degree is an uncertified upper bound")

    bad_sizes = []
    for size, fld in ring.residue_fields():
        if size == ring.order:
            # the zero ideal of a field: its residue field is the ring
            # itself, where Weil-bound behavior takes over and no fiber
            # structure persists, so it is left out of the census
            xs = np.arange(fld.order, dtype=np.int64)
            powers = np.unique(fld.pow_vec(xs, d))
            pm = np.union1d(powers, fld.neg_vec(powers))
            if pm.size < fld.order:
                notes.append(
                    "plus-minus d-th powers do not cover the field itself; "
                    "zero-ideal residue field excluded from the bad-prime census"
                )
            continue
        xs = np.arange(fld.order, dtype=np.int64)
        powers = np.unique(fld.pow_vec(xs, d))
        pm = np.union1d(powers, fld.neg_vec(powers))
        if pm.size < fld.order:
            bad_sizes.append(size)
    if bad_sizes:
        necessary = max(
            math.sqrt((d - 1) / (64 * d * d * q)) for q in bad_sizes
        )
    else:
        necessary = None
    spec_report = spectrum(graph)
    return QuasirandomnessVerdict(
        ring_spec=ring.spec_string(),
        d=d,
        k=k,
        k_certified=bp.certified,
        b_const=B,
        unit_density=u,
        sufficient_epsilon=None if sufficient is None else float(sufficient),
        bad_prime_sizes=sorted(bad_sizes),
        necessary_epsilon_floor=None if necessary is None else float(necessary),
        spectral_epsilon_floor=spec_report.epsilon_star,
        lambda2=spec_report.lambda2,
        r=graph.r,
        notes=notes,
    )
