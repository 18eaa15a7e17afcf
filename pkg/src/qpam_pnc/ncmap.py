"""Linear NC mapping over GF(q): clustering, minimum set distance, optimal
coefficients, and the high-SNR error-rate bound."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .constellation import (
    OVERLAP_TOL,
    JointSymbol,
    SuperimposedConstellation,
    as_ratio,
    build_constellation,
    is_exact,
    neighbor_report,
)
from .gf import ConfigurationError, check_element, check_modulus, gf_inv


class NcPair(NamedTuple):
    alpha: int
    beta: int

    def validate(self, q: int) -> "NcPair":
        for c in self:
            check_element(c, q)
            if c == 0:
                raise ConfigurationError(f"NC coefficients must be nonzero, got {tuple(self)}")
        return self

    def scaled(self, k: int, q: int) -> "NcPair":
        return NcPair(self.alpha * k % q, self.beta * k % q)

    def canonical(self, q: int) -> "NcPair":
        """Class representative with beta = 1."""
        self.validate(q)
        return self.scaled(gf_inv(self.beta, q), q)


def nc_map(pair, s, q: int) -> int:
    alpha, beta = pair
    w_a, w_b = s
    return (alpha * w_a + beta * w_b) % q


def nc_map_array(pair, w_a, w_b, q: int) -> np.ndarray:
    alpha, beta = pair
    return (alpha * np.asarray(w_a, dtype=np.int64) + beta * np.asarray(w_b, dtype=np.int64)) % q


def cluster_partition(q: int, pair) -> dict:
    """NC symbol -> frozenset of joint symbols mapping to it."""
    q = check_modulus(q)
    pair = NcPair(*pair).validate(q)
    out = {v: set() for v in range(q)}
    for w_a in range(q):
        for w_b in range(q):
            out[nc_map(pair, (w_a, w_b), q)].add(JointSymbol(w_a, w_b))
    return {k: frozenset(v) for k, v in out.items()}


def partition_blocks(q: int, pair) -> frozenset:
    """The clustering as an unlabeled set partition."""
    return frozenset(cluster_partition(q, pair).values())


def cluster_of(s, pair, q: int) -> frozenset:
    """Joint symbols sharing ``s``'s NC symbol, generated as s + nu*(-beta, alpha)."""
    alpha, beta = pair
    w_a, w_b = s
    return frozenset(JointSymbol((w_a - nu * beta) % q, (w_b + nu * alpha) % q) for nu in range(q))


def clustering_pairs(s1, s2, q: int) -> set:
    """All NC pairs that map ``s1`` and ``s2`` to the same NC symbol."""
    if tuple(s1) == tuple(s2):
        raise ValueError("clustering_pairs needs two distinct joint symbols")
    d_a = (s1[0] - s2[0]) % q
    d_b = (s1[1] - s2[1]) % q
    if d_a == 0 or d_b == 0:
        return set()
    return {NcPair((-d_b * nu) % q, (d_a * nu) % q) for nu in range(1, q)}


def same_cluster_condition(diff12, diff34, q: int) -> bool:
    """True iff the two differences are proportional over GF(q).

    Equivalently, any pair clustering one pair of symbols also clusters the other.
    """
    a1, b1 = diff12[0] % q, diff12[1] % q
    a2, b2 = diff34[0] % q, diff34[1] % q
    if (a1, b1) == (0, 0) or (a2, b2) == (0, 0):
        raise ValueError("differences must be nonzero mod q")
    return (a1 * b2 - a2 * b1) % q == 0


@dataclass(frozen=True)
class DminResult:
    """Minimum set distance of a clustering and its multiplicity.

    ``a_min`` counts unordered pairs of distinct constellation points (an
    overlap group is one point) at exactly ``d_min`` with different NC
    symbols. When ``d_min == 0`` it counts overlap groups holding more than
    one NC symbol.
    """

    d_min: object
    a_min: int
    witnesses: tuple = field(default=(), repr=False)


def _labels(c: SuperimposedConstellation, pairs) -> np.ndarray:
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    return (pairs[:, :1] * c.w_a[None, :] + pairs[:, 1:] * c.w_b[None, :]) % c.q


def _same_point(c: SuperimposedConstellation) -> np.ndarray:
    gaps = np.diff(c.keys)
    return gaps == 0 if c.exact else gaps <= OVERLAP_TOL


def _dmin_keys(c: SuperimposedConstellation, labels: np.ndarray) -> tuple:
    """Per-pair d_min (in key units) and a 'mixed overlap' flag.

    The nearest differently-labelled pair of sorted points is always
    adjacent, so only neighbouring gaps need checking.
    """
    gaps = np.diff(c.keys)
    same = _same_point(c)
    differ = labels[:, 1:] != labels[:, :-1]
    mixed = (differ & same[None, :]).any(axis=1)
    big = np.iinfo(np.int64).max if c.exact else np.inf
    masked = np.where(differ & ~same[None, :], gaps[None, :], big)
    d = masked.min(axis=1)
    d = np.where(mixed, 0, d)
    return d, mixed


def d_min(c: SuperimposedConstellation, pair) -> DminResult:
    pair = NcPair(*pair).validate(c.q)
    labels = _labels(c, [pair])
    d_keys, mixed = _dmin_keys(c, labels)
    lab = labels[0]
    syms = c.symbols()
    if mixed[0]:
        bad = [g for g in c.groups if len({int(lab[i]) for i in g}) > 1]
        wit = tuple(tuple(syms[i] for i in g) for g in bad)
        return DminResult(c.value(0), len(bad), wit)
    d_key = d_keys[0]
    # one label per group; walk adjacent groups
    witnesses = []
    for g0, g1 in zip(c.groups[:-1], c.groups[1:]):
        if lab[g0[0]] == lab[g1[0]]:
            continue
        gap = c.keys[g1[0]] - c.keys[g0[0]]
        hit = gap == d_key if c.exact else abs(gap - d_key) <= OVERLAP_TOL
        if hit:
            witnesses.append((syms[g0[0]], syms[g1[0]]))
    return DminResult(c.value(d_key), len(witnesses), tuple(witnesses))


def symbol_weighted_multiplicity(c: SuperimposedConstellation, pair) -> int:
    """Ordered (joint symbol, wrong-cluster point at d_min) pairs.

    Unlike ``DminResult.a_min`` this counts both directions of each nearest
    pair and weights a point by the number of joint symbols sitting on it,
    which is what the nearest-neighbour error estimate actually needs.
    """
    res = d_min(c, pair)
    if res.d_min == 0:
        return 0
    lab = _labels(c, [pair])[0]
    total = 0
    for g0, g1 in zip(c.groups[:-1], c.groups[1:]):
        gap = c.value(c.keys[g1[0]] - c.keys[g0[0]])
        close = gap == res.d_min if c.exact else abs(gap - res.d_min) <= OVERLAP_TOL
        if close and lab[g0[0]] != lab[g1[0]]:
            total += len(g0) + len(g1)
    return total


def all_pairs(q: int) -> list:
    return [NcPair(a, b) for a in range(1, q) for b in range(1, q)]


def dmin_table(c: SuperimposedConstellation) -> tuple:
    """d_min (key units) for every NC pair in lexicographic order."""
    pairs = all_pairs(c.q)
    d, _ = _dmin_keys(c, _labels(c, pairs))
    return pairs, d


@dataclass(frozen=True)
class OptimalPair:
    pair: NcPair
    result: DminResult
    maximizers: tuple

    def classes(self, q: int) -> frozenset:
        return frozenset(p.canonical(q) for p in self.maximizers)


def optimal_ab_bruteforce(c: SuperimposedConstellation) -> OptimalPair:
    """Maximise d_min over all (q-1)^2 pairs; lexicographically smallest wins."""
    pairs, d = dmin_table(c)
    best = d.max()
    if c.exact:
        winners = [p for p, v in zip(pairs, d) if v == best]
    else:
        winners = [p for p, v in zip(pairs, d) if v >= best - OVERLAP_TOL]
    return OptimalPair(winners[0], d_min(c, winners[0]), tuple(winners))


def optimal_ab_closed(q: int, eta) -> NcPair:
    """Pair minimising |alpha/eta - beta|, lexicographic ties."""
    q = check_modulus(q)
    eta = as_ratio(eta)
    best, best_val = None, None
    for a in range(1, q):
        for b in range(1, q):
            v = abs(a / eta - b) if not is_exact(eta) else abs(Fraction(a) / eta - b)
            if best_val is None or v < best_val:
                best, best_val = NcPair(a, b), v
    return best


def clustering_candidates_at_trough(c: SuperimposedConstellation) -> dict:
    """Canonical pairs clustering the reference with its left / right neighbour."""
    rep = neighbor_report(c)
    if rep.overlapping:
        raise ValueError("reference overlaps another symbol; not a trough")
    out = {}
    for side, nbrs in (("left", rep.left), ("right", rep.right)):
        nb = min(nbrs)
        cands = clustering_pairs(rep.reference, nb, c.q)
        if not cands:
            raise ValueError(f"{side} neighbour {nb} cannot be clustered with the reference")
        out[side] = min(p.canonical(c.q) for p in cands)
    return out


def mu_squared(q: int) -> float:
    return (q * q - 1) / 12.0


class BoundValue(NamedTuple):
    value: float
    vacuous: bool


def gaussian_tail(x: float) -> float:
    """Q(x) = P(Z > x)."""
    from scipy.special import ndtr  # deferred: keeps the exact-curve CLI fast to start

    return float(ndtr(-x))


def ser_bound(q: int, rho: float, d: DminResult) -> BoundValue:
    """(1/q^2) * A_min * Q(d_min * sqrt(rho / (2 mu^2))); rho is linear P/N0."""
    q = check_modulus(q)
    if rho <= 0:
        raise ConfigurationError(f"rho must be positive, got {rho}")
    dm = float(d.d_min)
    if dm == 0:
        return BoundValue(1.0, True)
    arg = dm * math.sqrt(rho / (2.0 * mu_squared(q)))
    return BoundValue(min(1.0, d.a_min * gaussian_tail(arg) / q**2), False)


def nearest_neighbour_ser(q: int, rho: float, c: SuperimposedConstellation, pair) -> float:
    """Bound form with the symbol-weighted, two-sided multiplicity."""
    res = d_min(c, pair)
    weighted = DminResult(res.d_min, symbol_weighted_multiplicity(c, pair))
    return ser_bound(q, rho, weighted).value


def analyse(q: int, eta, pair=None) -> tuple:
    """Convenience: constellation plus d_min for ``pair`` (or the optimum)."""
    c = build_constellation(q, eta)
    if pair is None:
        opt = optimal_ab_bruteforce(c)
        return c, opt.pair, opt.result
    return c, NcPair(*pair), d_min(c, pair)
