"""Monte Carlo symbol-error-rate engine.

Trials are split into fixed-size shards. Each shard draws from its own
Philox stream keyed by ``(seed, snr_index, shard_index)``, so results do not
depend on how many worker threads run the shards.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from .channel import ModulationParams, async_transmit, make_rng, normalize_gains, sync_transmit
from .constellation import as_ratio, build_constellation, is_exact
from .curve import eval_curve
from .detect import bp_detect, md_detect, ml_detect
from .gf import ConfigurationError, check_modulus
from .ncmap import NcPair, clustering_candidates_at_trough, d_min, nc_map_array

SHARD_SYMBOLS = 1 << 16
Z95 = 1.959963984540054
WILSON_BELOW = 30

VALID_RULES = {"sync": {"md", "ml"}, "async": {"bp"}}


class UnreachableTarget(RuntimeError):
    """Target SER not met anywhere inside the search bracket."""


def parse_sweep(text: str) -> tuple:
    """``"start:stop:step"`` (stop inclusive) or a comma list -> dB values."""
    text = str(text).strip()
    if ":" in text:
        try:
            start, stop, step = (float(x) for x in text.split(":"))
        except ValueError as exc:
            raise ConfigurationError(f"bad SNR sweep {text!r}") from exc
        if step <= 0 or stop < start:
            raise ConfigurationError(f"bad SNR sweep {text!r}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + i * step, 10) for i in range(count))
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise ConfigurationError(f"bad SNR list {text!r}") from exc


def parse_pair(text) -> NcPair:
    try:
        a, b = (int(x) for x in str(text).replace("(", "").replace(")", "").split(","))
    except ValueError as exc:
        raise ConfigurationError(f"bad NC pair {text!r}; expected 'alpha,beta'") from exc
    return NcPair(a, b)


@dataclass(frozen=True)
class SimConfig:
    q: int = 5
    eta: Optional[str] = "1"
    h_a: Optional[float] = None
    h_b: Optional[float] = None
    snr_db: tuple = (10.0,)
    mode: str = "sync"
    rule: str = "md"
    clustering: str = "auto"  # auto | left | right | "alpha,beta"
    misalignment: float = 0.5
    block_len: int = 64
    trials: int = 100_000
    seed: int = 1
    output: Optional[str] = None

    def __post_init__(self):
        check_modulus(self.q)
        if self.mode not in VALID_RULES:
            raise ConfigurationError(f"mode must be sync or async, got {self.mode!r}")
        if self.rule not in VALID_RULES[self.mode]:
            raise ConfigurationError(f"rule {self.rule!r} is not available in {self.mode} mode")
        if self.mode == "async" and not 0 < self.misalignment < 1:
            raise ConfigurationError("misalignment D must lie in (0, 1)")
        if self.trials <= 0 or self.block_len <= 0:
            raise ConfigurationError("trials and block_len must be positive")
        if (self.h_a is None) != (self.h_b is None):
            raise ConfigurationError("give both h_a and h_b, or neither")
        if self.clustering not in ("auto", "left", "right"):
            parse_pair(self.clustering).validate(self.q)
        self.channel_ratio()

    def channel_ratio(self):
        """Normalised eta >= 1, exact when given as a string or rational."""
        if self.h_a is not None:
            return as_ratio(normalize_gains(self.h_a, self.h_b).eta)
        eta = as_ratio(self.eta)
        if eta < 1:
            raise ConfigurationError(f"eta={eta} < 1; supply raw gains h_a, h_b instead")
        return eta


CONFIG_TYPES = {f.name: f.type for f in fields(SimConfig)}


def _coerce(key: str, value: str):
    if key == "snr_db":
        return parse_sweep(value)
    if key in ("q", "block_len", "trials", "seed"):
        return int(float(value))
    if key in ("h_a", "h_b", "misalignment"):
        return float(value)
    return value


def read_config(path) -> dict:
    """Flat ``key = value`` file; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in CONFIG_TYPES:
                raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = _coerce(key, value)
    return out


def make_config(file_values: Optional[dict] = None, **overrides) -> SimConfig:
    """File values first, then non-None overrides (CLI flags win)."""
    merged = dict(file_values or {})
    merged.update({k: v for k, v in overrides.items() if v is not None})
    if isinstance(merged.get("snr_db"), str):
        merged["snr_db"] = parse_sweep(merged["snr_db"])
    return SimConfig(**merged)


@dataclass(frozen=True)
class SerEstimate:
    snr_db: float
    errors: int
    symbols: int
    ser: float
    ci95: float
    ci_low: float
    ci_high: float
    interval: str  # "normal" or "wilson"

    @classmethod
    def from_counts(cls, snr_db: float, errors: int, symbols: int) -> "SerEstimate":
        p = errors / symbols
        if errors < WILSON_BELOW:
            z2 = Z95 * Z95
            centre = (p + z2 / (2 * symbols)) / (1 + z2 / symbols)
            half = Z95 * math.sqrt(p * (1 - p) / symbols + z2 / (4 * symbols**2)) / (1 + z2 / symbols)
            lo, hi = max(0.0, centre - half), min(1.0, centre + half)
            lo = 0.0 if errors == 0 else min(lo, p)  # pin the endpoints against roundoff
            hi = 1.0 if errors == symbols else max(hi, p)
            return cls(snr_db, errors, symbols, p, (hi - lo) / 2, lo, hi, "wilson")
        half = Z95 * math.sqrt(p * (1 - p) / symbols)
        return cls(snr_db, errors, symbols, p, half, max(0.0, p - half), min(1.0, p + half), "normal")

    @property
    def std_error(self) -> float:
        return math.sqrt(self.ser * (1 - self.ser) / self.symbols)

    def separated_below(self, other: "SerEstimate") -> bool:
        """True if this estimate's CI lies entirely below ``other``'s."""
        return self.ci_high < other.ci_low


def resolve_pair(config: SimConfig) -> NcPair:
    """Pick (alpha, beta) for the normalised channel."""
    q, eta = config.q, config.channel_ratio()
    if config.clustering in ("left", "right"):
        return clustering_candidates_at_trough(build_constellation(q, eta))[config.clustering]
    if config.clustering != "auto":
        return parse_pair(config.clustering).validate(q)
    point = eval_curve(q, eta)
    if len(point.classes) == 1:
        return point.nc_class
    # at a trough both sides tie on d_min; the smaller multiplicity wins
    c = build_constellation(q, eta)
    return min(point.classes, key=lambda p: (d_min(c, p).a_min, p))


def _threads() -> int:
    raw = os.environ.get("PNC_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigurationError(f"PNC_THREADS must be an integer, got {raw!r}") from exc
    if n < 0:
        raise ConfigurationError("PNC_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def _shard_plan(config: SimConfig) -> list:
    """Symbol (sync) or block (async) count per shard."""
    if config.mode == "sync":
        unit, total = SHARD_SYMBOLS, config.trials
    else:
        unit = max(1, SHARD_SYMBOLS // config.block_len)
        total = -(-config.trials // config.block_len)
    sizes = [unit] * (total // unit)
    if total % unit:
        sizes.append(total % unit)
    return sizes


def _run_shard(config: SimConfig, eta, pair, params, snr_idx, shard_idx, size) -> tuple:
    rng = make_rng(np.random.SeedSequence([config.seed, snr_idx, shard_idx]))
    q = config.q
    if config.mode == "sync":
        w_a = rng.integers(0, q, size)
        w_b = rng.integers(0, q, size)
        y = sync_transmit(params, eta, w_a, w_b, rng).samples
        if config.rule == "md":
            det = md_detect(y, q, eta, pair, params).nc
        else:
            det = ml_detect(y, q, eta, pair, params)[0].nc
    else:
        shape = (size, config.block_len)
        w_a = rng.integers(0, q, shape)
        w_b = rng.integers(0, q, shape)
        block = async_transmit(params, eta, config.misalignment, w_a, w_b, rng)
        det = bp_detect(block, q, eta, config.misalignment, pair, params)[0].nc
    truth = nc_map_array(pair, w_a, w_b, q)
    return int(np.count_nonzero(det != truth)), int(truth.size)


def ser_point(config: SimConfig, snr_db: float, snr_idx: int = 0, pair=None,
              executor=None) -> SerEstimate:
    eta = config.channel_ratio()
    pair = resolve_pair(config) if pair is None else NcPair(*pair)
    params = ModulationParams.from_snr_db(config.q, snr_db)
    jobs = list(enumerate(_shard_plan(config)))

    def work(job):
        return _run_shard(config, eta, pair, params, snr_idx, *job)

    if executor is None:
        results = [work(j) for j in jobs]
    else:
        results = list(executor.map(work, jobs))
    errors = sum(e for e, _ in results)
    symbols = sum(s for _, s in results)
    return SerEstimate.from_counts(snr_db, errors, symbols)


def run_ser(config: SimConfig) -> list:
    """One SerEstimate per SNR in the sweep; deterministic for a given config."""
    pair = resolve_pair(config)
    threads = _threads()
    if threads == 1:
        return [ser_point(config, s, i, pair) for i, s in enumerate(config.snr_db)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return [ser_point(config, s, i, pair, pool) for i, s in enumerate(config.snr_db)]


@dataclass(frozen=True)
class RequiredSnr:
    snr_db: float
    bracket: tuple  # (lower dB, upper dB) around the crossing
    estimates: tuple = field(default=(), repr=False)
    saturated: bool = False


def required_snr(config: SimConfig, target_ser: float, lo_db: float = 0.0,
                 hi_db: float = 50.0, tol_db: float = 0.05) -> RequiredSnr:
    """Bisect on SNR for the point where SER falls to ``target_ser``.

    Every probe reuses the same seed, so successive probes see the same
    symbols and noise shapes and the estimated SER is monotone in SNR in
    practice. The final answer interpolates log(SER) linearly in dB.
    """
    if not 0 < target_ser < 1:
        raise ConfigurationError("target SER must lie in (0, 1)")
    pair = resolve_pair(config)
    probes = {}

    def probe(snr):
        if snr not in probes:
            probes[snr] = ser_point(config, snr, 0, pair)
        return probes[snr]

    if probe(hi_db).ser > target_ser:
        raise UnreachableTarget(
            f"SER {probe(hi_db).ser:.3g} at {hi_db} dB exceeds target {target_ser:g}")
    if probe(lo_db).ser <= target_ser:
        return RequiredSnr(lo_db, (lo_db, lo_db), tuple(probes.values()), saturated=True)
    lo, hi = lo_db, hi_db
    while hi - lo > tol_db:
        mid = 0.5 * (lo + hi)
        if probe(mid).ser > target_ser:
            lo = mid
        else:
            hi = mid
    p_lo, p_hi = probe(lo).ser, probe(hi).ser
    if p_hi > 0 and p_lo > p_hi:
        frac = (math.log(p_lo) - math.log(target_ser)) / (math.log(p_lo) - math.log(p_hi))
        snr = lo + min(max(frac, 0.0), 1.0) * (hi - lo)
    else:
        snr = hi
    est = tuple(probes[k] for k in sorted(probes))
    return RequiredSnr(snr, (lo, hi), est)


def bound_required_snr(q: int, d_min_value, a_min: int, target_ser: float) -> float:
    """SNR (dB) at which the high-SNR bound equals ``target_ser``."""
    from scipy.special import ndtri

    x = -float(ndtri(target_ser * q * q / a_min))
    rho = 2.0 * (q * q - 1) / 12.0 * (x / float(d_min_value)) ** 2
    return 10.0 * math.log10(rho)


def estimate_dict(e: SerEstimate) -> dict:
    return asdict(e)


SER_HEADER = ["snr_db", "errors", "symbols", "ser", "ci95", "ci_low", "ci_high", "interval"]


def ser_rows(estimates) -> list:
    return [[f"{e.snr_db:g}", e.errors, e.symbols, f"{e.ser:.6e}", f"{e.ci95:.6e}",
             f"{e.ci_low:.6e}", f"{e.ci_high:.6e}", e.interval] for e in estimates]
