"""NC-symbol detection at the relay and end-node recovery."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .channel import ModulationParams, SampleBlock, check_misalignment, pam_modulate
from .constellation import build_constellation
from .gf import ConfigurationError, gf_inv
from .ncmap import NcPair, nc_map_array

CHUNK = 1 << 15
NOISELESS_TOL = 1e-9


@dataclass(frozen=True)
class DetectionResult:
    nc: np.ndarray
    rule: str
    joint: Optional[tuple] = None  # (w_A, w_B) arrays, MD only


@lru_cache(maxsize=64)
def _geometry(q: int, eta):
    c = build_constellation(q, eta)
    pos = c.float_positions()[[g[0] for g in c.groups]]
    heads = np.array([g[0] for g in c.groups])
    return c, pos, c.w_a[heads], c.w_b[heads]


def md_metric(y, q: int, eta, params: ModulationParams) -> np.ndarray:
    """Rescale a sample onto the w_S axis: mu*y/sqrt(P) + (q-1)(eta+1)/2."""
    return params.mu * np.asarray(y, dtype=float) / params.amplitude + (q - 1) * (float(eta) + 1) / 2.0


def md_detect_metric(r, q: int, eta, pair) -> DetectionResult:
    """Nearest superimposed point to metric values ``r``.

    Ties go to the smaller w_S; within an overlap group to the smaller w_A.
    """
    _, pos, ga, gb = _geometry(q, eta)
    r = np.asarray(r, dtype=float)
    hi = np.clip(np.searchsorted(pos, r), 1, len(pos) - 1)
    lo = hi - 1
    pick = np.where(r - pos[lo] > pos[hi] - r, hi, lo)
    w_a, w_b = ga[pick], gb[pick]
    return DetectionResult(nc_map_array(pair, w_a, w_b, q), "MD", (w_a, w_b))


def md_detect(y, q: int, eta, pair, params: ModulationParams) -> DetectionResult:
    return md_detect_metric(md_metric(y, q, eta, params), q, eta, pair)


def _loglik(resid, var):
    """Gaussian log-likelihood up to a constant; var = 0 is a point mass."""
    if var == 0:
        return np.where(np.abs(resid) < NOISELESS_TOL, 0.0, -np.inf)
    return -(resid * resid) / (2.0 * var)


def _lse(x, axis):
    m = np.max(x, axis=axis, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(divide="ignore"):
        return np.log(np.sum(np.exp(x - m), axis=axis)) + np.squeeze(m, axis=axis)


def _normalize_log(x, axis=-1):
    p = np.exp(x - np.max(x, axis=axis, keepdims=True))
    return p / p.sum(axis=axis, keepdims=True)


@lru_cache(maxsize=64)
def _cluster_layout(q: int, pair):
    """Flat joint indices (a*q + b) grouped by NC symbol: shape (q, q)."""
    a, b = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
    lab = nc_map_array(pair, a.ravel(), b.ravel(), q)
    return np.argsort(lab, kind="stable").reshape(q, q)


def ml_detect(y, q: int, eta, pair, params: ModulationParams, log_max: bool = False):
    """Per-sample NC posterior from summed Gaussian likelihoods.

    Returns ``(DetectionResult, posterior)`` with posterior shape (n, q).
    ``log_max=True`` keeps only the best term per cluster.
    """
    pair = NcPair(*pair)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    a, b = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
    means = params.amplitude * (float(eta) * pam_modulate(q, a.ravel()) + pam_modulate(q, b.ravel()))
    layout = _cluster_layout(q, pair)
    var = params.n0 / 2.0
    post = np.empty((len(y), q))
    for s in range(0, len(y), CHUNK):
        ll = _loglik(y[s:s + CHUNK, None] - means[None, :], var)[:, layout]
        cl = ll.max(axis=2) if log_max else _lse(ll, axis=2)
        post[s:s + CHUNK] = _normalize_log(cl)
    return DetectionResult(np.argmax(post, axis=1), "ML"), post


def _pair_tables(params, q, eta):
    xa = float(eta) * params.amplitude * pam_modulate(q, np.arange(q))
    xb = params.amplitude * pam_modulate(q, np.arange(q))
    return xa, xb


def bp_detect(block: SampleBlock, q: int, eta, d, pair, params: ModulationParams,
              return_joint: bool = False):
    """Exact sum-product over the chain A1 - B1 - A2 - ... - BN.

    ``block.samples`` is (2N+1,) or (batch, 2N+1). Returns
    ``(DetectionResult, nc_posterior[, joint_posterior])`` where the NC
    posterior has shape (batch, N, q) and the joint one (batch, N, q, q).
    """
    check_misalignment(d)
    if block.mode != "async":
        raise ConfigurationError("bp_detect needs an async sample block")
    pair = NcPair(*pair)
    y = np.asarray(block.samples, dtype=float)
    squeeze = y.ndim == 1
    y = np.atleast_2d(y)
    n = (y.shape[1] - 1) // 2
    var = block.variances
    xa, xb = _pair_tables(params, q, eta)
    ab = xa[:, None] + xb[None, :]  # mean of a sample seeing (a, b)

    # unary factors on A1 (x_B[0] = 0) and on B_N (tail)
    head = _loglik(y[:, 0, None] - xa[None, :], var[0])
    tail = _loglik(y[:, 2 * n, None] - xb[None, :], var[2 * n])
    # lab[:, k-1, a, b]: sample 2k (1-based) sees (A_k, B_k)
    lab = _loglik(y[:, 1:2 * n:2, None, None] - ab[None, None], var[1])
    # lba[:, k-1, b, a]: sample 2k+1 sees (B_k, A_{k+1})
    lba = _loglik(y[:, 2:2 * n:2, None, None] - ab.T[None, None], var[0])

    def norm(m):
        mx = np.max(m, axis=1, keepdims=True)
        return m - np.where(np.isfinite(mx), mx, 0.0)

    # fwd[k]: message into A_k from the left; bwd[k]: into B_k from the right
    fwd = [None] * (n + 1)
    fwd[1] = norm(head)
    for k in range(1, n):
        into_b = _lse(fwd[k][:, :, None] + lab[:, k - 1], axis=1)
        fwd[k + 1] = norm(_lse(into_b[:, :, None] + lba[:, k - 1], axis=1))
    bwd = [None] * (n + 1)
    bwd[n] = norm(tail)
    for k in range(n - 1, 0, -1):
        into_a = _lse(lab[:, k] + bwd[k + 1][:, None, :], axis=2)
        bwd[k] = norm(_lse(lba[:, k - 1] + into_a[:, None, :], axis=2))

    lj = np.stack([fwd[k][:, :, None] + lab[:, k - 1] + bwd[k][:, None, :]
                   for k in range(1, n + 1)], axis=1)
    joint = _normalize_log(lj.reshape(y.shape[0], n, q * q)).reshape(-1, n, q, q)
    layout = _cluster_layout(q, pair)
    nc_post = joint.reshape(y.shape[0], n, q * q)[:, :, layout].sum(axis=3)
    det = nc_post.argmax(axis=2)
    if squeeze:
        det, nc_post, joint = det[0], nc_post[0], joint[0]
    res = DetectionResult(det, "BP")
    return (res, nc_post, joint) if return_joint else (res, nc_post)


def bc_recover(w_n, own, pair, side: str, q: int):
    """Partner's symbol from the broadcast NC symbol and one's own symbol."""
    alpha, beta = pair
    w_n, own = np.asarray(w_n), np.asarray(own)
    if side == "A":
        out = gf_inv(beta, q) * (w_n - alpha * own) % q
    elif side == "B":
        out = gf_inv(alpha, q) * (w_n - beta * own) % q
    else:
        raise ConfigurationError(f"side must be 'A' or 'B', got {side!r}")
    return out if out.ndim else int(out)
