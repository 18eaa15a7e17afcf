"""Baseband q-PAM two-user uplink: modulation, gain normalisation, and
synchronous / misaligned sampling at the relay."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .gf import ConfigurationError, check_modulus
from .ncmap import NcPair


def mu(q: int) -> float:
    """Amplitude scale giving unit average power for uniform symbols."""
    return math.sqrt((q * q - 1) / 12.0)


@dataclass(frozen=True)
class ModulationParams:
    q: int
    n0: float
    power: float = 1.0

    def __post_init__(self):
        check_modulus(self.q)
        if self.n0 < 0 or self.power <= 0:
            raise ConfigurationError("need N0 >= 0 and P > 0")

    @classmethod
    def from_snr_db(cls, q: int, snr_db: float, power: float = 1.0):
        return cls(q, power / 10.0 ** (snr_db / 10.0), power)

    @property
    def mu(self) -> float:
        return mu(self.q)

    @property
    def rho(self) -> float:
        return math.inf if self.n0 == 0 else self.power / self.n0

    @property
    def amplitude(self) -> float:
        return math.sqrt(self.power)


def pam_modulate(q: int, w) -> np.ndarray:
    """Centred, unit-power amplitude (w - (q-1)/2) / mu."""
    w = np.asarray(w)
    if np.any((w < 0) | (w >= q)):
        raise ConfigurationError(f"symbols outside GF({q})")
    return (w - (q - 1) / 2.0) / mu(q)


def _exact_or_float(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return float(x)


@dataclass(frozen=True)
class GainNormalization:
    """Maps a raw gain pair to the canonical form ``eta >= 1, h_B = 1``.

    A user with a negative gain is treated as sending the mirrored symbol
    ``q-1-w``. If ``|h_A| < |h_B|`` the two users exchange roles. Both
    transforms are undone by :meth:`to_raw`.
    """

    h_a: object
    h_b: object
    eta: object
    swapped: bool
    negate_a: bool
    negate_b: bool
    q: Optional[int] = None

    def normalized_symbols(self, w_a, w_b, q: int):
        """Raw user symbols -> (strong user, weak user) symbols in the canonical frame."""
        w_a = np.asarray(w_a)
        w_b = np.asarray(w_b)
        if self.negate_a:
            w_a = q - 1 - w_a
        if self.negate_b:
            w_b = q - 1 - w_b
        return (w_b, w_a) if self.swapped else (w_a, w_b)

    def to_raw(self, pair, q: int):
        """Coefficients for raw symbols and the constant NC offset.

        Returns ``(raw_pair, offset)`` such that for every raw joint symbol
        ``nc_canonical == raw_pair . (w_A, w_B) + offset (mod q)``.
        """
        alpha, beta = pair
        c_a, c_b = (beta, alpha) if self.swapped else (alpha, beta)
        offset = 0
        if self.negate_a:
            offset += c_a * (q - 1)
            c_a = -c_a
        if self.negate_b:
            offset += c_b * (q - 1)
            c_b = -c_b
        return NcPair(c_a % q, c_b % q), offset % q

    def raw_nc(self, nc_canonical, pair, q: int):
        """Convert an NC symbol detected in the canonical frame to the raw one."""
        _, offset = self.to_raw(pair, q)
        return (np.asarray(nc_canonical) - offset) % q


def normalize_gains(h_a, h_b) -> GainNormalization:
    h_a, h_b = _exact_or_float(h_a), _exact_or_float(h_b)
    if h_a == 0 or h_b == 0:
        raise ConfigurationError("zero channel gain: the relay cannot hear that user")
    big, small = abs(h_a), abs(h_b)
    swapped = big < small
    if swapped:
        big, small = small, big
    eta = big / small
    return GainNormalization(h_a, h_b, eta, swapped, h_a < 0, h_b < 0)


@dataclass(frozen=True)
class SampleBlock:
    """Relay observations. ``samples`` may be 1-D or (batch, length)."""

    mode: str  # "sync" or "async"
    samples: np.ndarray
    variances: np.ndarray  # per-sample noise variance, length = samples.shape[-1]
    misalignment: Optional[float] = None

    @property
    def degenerate(self) -> bool:
        return bool(np.any(~np.isfinite(self.variances)))


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.Philox(seed))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def _noise(rng, shape, std):
    return rng.standard_normal(shape) * std


def sync_transmit(params: ModulationParams, eta, w_a, w_b, rng_seed=None) -> SampleBlock:
    """y = eta*sqrt(P)*x_A + sqrt(P)*x_B + z, Var(z) = N0/2."""
    w_a, w_b = np.asarray(w_a), np.asarray(w_b)
    if w_a.shape != w_b.shape:
        raise ConfigurationError("symbol sequences differ in length")
    q = params.q
    clean = params.amplitude * (float(eta) * pam_modulate(q, w_a) + pam_modulate(q, w_b))
    var = params.n0 / 2.0
    rng = make_rng(rng_seed)
    y = clean + _noise(rng, clean.shape, math.sqrt(var))
    return SampleBlock("sync", y, np.full(1, var))


def async_variances(n0: float, d: float, n: int) -> np.ndarray:
    """Per-sample noise variance for 2N+1 samples: windows D, 1-D, ..., D."""
    with np.errstate(divide="ignore"):
        odd = n0 / (2.0 * d) if d > 0 else math.inf
        even = n0 / (2.0 * (1.0 - d))
    v = np.empty(2 * n + 1)
    v[0::2] = odd
    v[1::2] = even
    return v


def check_misalignment(d) -> float:
    d = float(d)
    if not 0.0 < d < 1.0:
        raise ConfigurationError(f"misalignment D must lie in (0, 1), got {d}")
    return d


def async_mean(params: ModulationParams, eta, w_a, w_b) -> np.ndarray:
    """Noiseless oversampled sequence; the last axis has length 2N+1."""
    q = params.q
    xa = float(eta) * params.amplitude * pam_modulate(q, w_a)
    xb = params.amplitude * pam_modulate(q, w_b)
    n = xa.shape[-1]
    out = np.zeros(xa.shape[:-1] + (2 * n + 1,))
    out[..., 0:2 * n:2] = xa  # 2n-1 (1-based): x_A[n] + x_B[n-1]
    out[..., 2:2 * n:2] += xb[..., :-1]
    out[..., 1:2 * n:2] = xa + xb  # 2n: x_A[n] + x_B[n]
    out[..., 2 * n] = xb[..., -1]  # tail: x_B[N] alone
    return out


def async_transmit(params: ModulationParams, eta, d, w_a, w_b, rng_seed=None) -> SampleBlock:
    """2N+1 samples for user B lagging user A by D symbol periods.

    ``w_a``, ``w_b`` may be (N,) or (batch, N); x_B[0] is taken as 0.
    """
    d = check_misalignment(d)
    w_a, w_b = np.asarray(w_a), np.asarray(w_b)
    if w_a.shape != w_b.shape:
        raise ConfigurationError("symbol sequences differ in length")
    clean = async_mean(params, eta, w_a, w_b)
    var = async_variances(params.n0, d, w_a.shape[-1])
    rng = make_rng(rng_seed)
    y = clean + _noise(rng, clean.shape, np.sqrt(var))
    return SampleBlock("async", y, var, d)
