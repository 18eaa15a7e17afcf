"""Superimposed constellation geometry for a channel-gain ratio eta >= 1.

With ``h_B = 1`` the relay sees the superimposed symbol ``w_S = eta*w_A + w_B``.
For rational ``eta = m/n`` every position is an integer multiple of ``1/n``,
so positions are stored as int64 numerators over a common denominator and all
comparisons are exact. Float ``eta`` is accepted and flagged inexact; overlap
is then decided with an absolute tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import NamedTuple, Union

import numpy as np

from .gf import ConfigurationError, check_modulus

Ratio = Union[Fraction, float]

OVERLAP_TOL = 1e-12


class JointSymbol(NamedTuple):
    w_a: int
    w_b: int


def as_ratio(eta) -> Ratio:
    """Coerce ``eta`` to an exact Fraction, or leave a float as inexact.

    Strings such as ``"7/6"`` or ``"1.17"`` parse exactly.
    """
    if isinstance(eta, Fraction):
        return eta
    if isinstance(eta, (bool, np.bool_)):
        raise ConfigurationError(f"bad channel ratio {eta!r}")
    if isinstance(eta, (int, np.integer, Rational)):
        return Fraction(eta)
    if isinstance(eta, str):
        try:
            return Fraction(eta.strip())
        except ValueError as exc:
            raise ConfigurationError(f"cannot parse channel ratio {eta!r}") from exc
    if isinstance(eta, (float, np.floating)):
        return float(eta)
    raise ConfigurationError(f"bad channel ratio {eta!r}")


def is_exact(eta) -> bool:
    return isinstance(eta, Fraction)


def reference_symbol(q: int) -> JointSymbol:
    return JointSymbol(0, q - 1)


@dataclass(frozen=True)
class SuperimposedConstellation:
    """All q^2 joint symbols sorted by superimposed position.

    ``keys`` holds ``w_S * den`` (int64) for exact eta, or ``w_S`` (float64)
    otherwise. Ties in position are broken by ``w_A``.
    """

    q: int
    eta: Ratio
    w_a: np.ndarray
    w_b: np.ndarray
    keys: np.ndarray
    den: int = 1
    groups: tuple = field(default=(), repr=False)

    @property
    def exact(self) -> bool:
        return is_exact(self.eta)

    def __len__(self):
        return len(self.w_a)

    def value(self, key):
        """Convert an internal key (or key difference) to a position/distance."""
        if self.exact:
            return Fraction(int(key), self.den)
        return float(key)

    def position(self, s) -> Ratio:
        w_a, w_b = s
        if self.exact:
            return self.eta * w_a + w_b
        return self.eta * w_a + w_b

    def symbols(self):
        return [JointSymbol(int(a), int(b)) for a, b in zip(self.w_a, self.w_b)]

    def points(self):
        """``(JointSymbol, w_S)`` pairs in sorted order."""
        return [(s, self.value(k)) for s, k in zip(self.symbols(), self.keys)]

    def positions(self):
        return [self.value(k) for k in self.keys]

    @cached_property
    def group_keys(self) -> np.ndarray:
        """Position key of each overlap group, ascending."""
        return np.array([self.keys[g[0]] for g in self.groups], dtype=self.keys.dtype)

    @cached_property
    def group_index(self) -> np.ndarray:
        """Map from sorted point index to overlap-group index."""
        idx = np.empty(len(self), dtype=np.int64)
        for gi, g in enumerate(self.groups):
            idx[list(g)] = gi
        return idx

    def overlap_groups(self):
        """Partition of joint symbols by equal superimposed position."""
        syms = self.symbols()
        return [tuple(syms[i] for i in g) for g in self.groups]

    def distinct_positions(self) -> int:
        return len(self.groups)

    def float_positions(self) -> np.ndarray:
        if self.exact:
            return self.keys.astype(np.float64) / self.den
        return self.keys.astype(np.float64)


def build_constellation(q: int, eta) -> SuperimposedConstellation:
    q = check_modulus(q)
    eta = as_ratio(eta)
    if eta < 1:
        raise ConfigurationError(
            f"eta={eta} < 1; normalize gains so that |h_A| >= |h_B| first")
    w_a, w_b = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
    w_a, w_b = w_a.ravel(), w_b.ravel()
    if is_exact(eta):
        m, n = eta.numerator, eta.denominator
        if (m + n) * q >= 2**62:
            raise ConfigurationError(f"eta={eta} too large for exact int64 positions")
        keys = m * w_a.astype(np.int64) + n * w_b.astype(np.int64)
        den = n
    else:
        keys = eta * w_a + w_b.astype(np.float64)
        den = 1
    order = np.lexsort((w_a, keys))
    w_a, w_b, keys = w_a[order], w_b[order], keys[order]
    if is_exact(eta):
        breaks = np.flatnonzero(np.diff(keys) != 0) + 1
    else:
        breaks = np.flatnonzero(np.diff(keys) > OVERLAP_TOL) + 1
    bounds = np.concatenate(([0], breaks, [len(keys)]))
    groups = tuple(tuple(range(lo, hi)) for lo, hi in zip(bounds[:-1], bounds[1:]))
    return SuperimposedConstellation(q, eta, w_a, w_b, keys, den, groups)


def l_min(c: SuperimposedConstellation) -> Ratio:
    """Minimum distance between superimposed symbols of distinct joint symbols."""
    if any(len(g) > 1 for g in c.groups):
        return c.value(0)
    return c.value(np.diff(c.keys).min())


@dataclass(frozen=True)
class NeighborReport:
    reference: JointSymbol
    left: frozenset
    right: frozenset
    overlapping: frozenset
    d_left: Ratio
    d_right: Ratio

    def local_l_min(self) -> Ratio:
        if self.overlapping:
            return self.d_left * 0
        return min(self.d_left, self.d_right)


def neighbor_report(c: SuperimposedConstellation) -> NeighborReport:
    """Symbols overlapping and immediately neighbouring the reference (0, q-1)."""
    ref = reference_symbol(c.q)
    syms = c.symbols()
    ref_idx = syms.index(ref)
    gi = int(c.group_index[ref_idx])
    ref_key = c.keys[ref_idx]
    overlapping = frozenset(syms[i] for i in c.groups[gi] if syms[i] != ref)
    if gi == 0 or gi == len(c.groups) - 1:
        raise ConfigurationError("reference symbol has no neighbour on one side")
    left_g, right_g = c.groups[gi - 1], c.groups[gi + 1]
    return NeighborReport(
        reference=ref,
        left=frozenset(syms[i] for i in left_g),
        right=frozenset(syms[i] for i in right_g),
        overlapping=overlapping,
        d_left=c.value(ref_key - c.keys[left_g[0]]),
        d_right=c.value(c.keys[right_g[0]] - ref_key),
    )


def canonical_sign(d):
    """Flip a difference pair so its first nonzero component is positive."""
    a, b = d
    if a < 0 or (a == 0 and b < 0):
        return (-a, -b)
    return (a, b)


def min_distance_difference(c: SuperimposedConstellation) -> set:
    """All (Delta_A, Delta_B) minimising |eta*delta_A + delta_B| (sign-canonical)."""
    q = c.q
    da, db = np.meshgrid(np.arange(-(q - 1), q), np.arange(-(q - 1), q), indexing="ij")
    da, db = da.ravel(), db.ravel()
    keep = (da != 0) | (db != 0)
    da, db = da[keep], db[keep]
    if c.exact:
        vals = np.abs(c.eta.numerator * da.astype(np.int64) + c.eta.denominator * db)
        hit = vals == vals.min()
    else:
        vals = np.abs(c.eta * da + db)
        hit = vals <= vals.min() + OVERLAP_TOL
    return {canonical_sign((int(a), int(b))) for a, b in zip(da[hit], db[hit])}
