"""Counter-based random fields for schedule-independent simulation.

Every variate is a pure function of (seed, frame_index, tag, pixel index,
draw counter): a splitmix64-style avalanche hash turns those integers into
uniform bits, normals come from the inverse CDF, and Poisson counts from
Knuth's product method (small means) or Hormann's PTRS transformed rejection
(large means).  Because no generator state is shared between pixels, frames
can be simulated in any order, split across any number of workers, or
re-evaluated for a single pixel, always with bit-identical results.
"""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln, ndtri

from .exceptions import DomainError

_MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)

# Poisson means below this use Knuth's method, at or above it PTRS.
_PTRS_MIN_MU = 10.0
_U53 = 2.0 ** -53
_U54 = 2.0 ** -54


def _mix(z: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer; full avalanche on uint64 words."""
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _u64(value: int) -> np.uint64:
    return np.uint64(int(value) & _MASK64)


def stream_key(seed: int, frame_index: int, tag: int) -> np.uint64:
    """Fold (seed, frame_index, tag) into one 64-bit stream key."""
    with np.errstate(over="ignore"):
        z = _mix(_u64(seed) + _GOLDEN)
        z = _mix(z + _u64(frame_index) * _GOLDEN)
        z = _mix(z + _u64(tag) * _GOLDEN)
    return np.uint64(z)


def uniforms(key: np.uint64, lattice, draw: int) -> np.ndarray:
    """Uniform(0, 1) field indexed by ``lattice`` (flat pixel indices).

    Values are in the open interval (never exactly 0 or 1) so inverse-CDF
    transforms stay finite.
    """
    lat = np.asarray(lattice, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = _mix(np.uint64(key) + lat * _GOLDEN)
        z = _mix(z + _u64(draw) * _GOLDEN)
    return (z >> np.uint64(11)).astype(np.float64) * _U53 + _U54


def normals(key: np.uint64, lattice, draw: int = 0) -> np.ndarray:
    """Standard normal field via the inverse normal CDF."""
    return ndtri(uniforms(key, lattice, draw))


def poissons(key: np.uint64, lattice, mu) -> np.ndarray:
    """Poisson field with per-element mean ``mu`` (int64 counts).

    Each element consumes only its own draw counters, so any sub-lattice
    evaluates identically to the same positions within the full lattice.
    """
    lat = np.asarray(lattice, dtype=np.uint64).ravel()
    mu_arr = np.broadcast_to(np.asarray(mu, dtype=np.float64).ravel(), lat.shape)
    if np.any(mu_arr < 0) or not np.all(np.isfinite(mu_arr)):
        raise DomainError("Poisson mean must be finite and >= 0")
    out = np.zeros(lat.shape, dtype=np.int64)

    small = (mu_arr > 0) & (mu_arr < _PTRS_MIN_MU)
    if np.any(small):
        out[small] = _poisson_knuth(key, lat[small], mu_arr[small])
    big = mu_arr >= _PTRS_MIN_MU
    if np.any(big):
        out[big] = _poisson_ptrs(key, lat[big], mu_arr[big])

    shape = np.asarray(lattice).shape
    return out.reshape(shape)


def _poisson_knuth(key, lat, mu):
    target = np.exp(-mu)
    prod = np.ones_like(mu)
    out = np.zeros(lat.shape, dtype=np.int64)
    alive = np.arange(lat.size)
    for draw in range(512):
        u = uniforms(key, lat[alive], draw)
        prod[alive] = prod[alive] * u
        done = prod[alive] <= target[alive]
        out[alive[done]] = draw
        alive = alive[~done]
        if alive.size == 0:
            return out
    raise RuntimeError("Poisson sampling (Knuth) failed to terminate")


def _poisson_ptrs(key, lat, lam):
    # Transformed rejection with squeeze (Hormann, 1993); valid for lam >= 10.
    loglam = np.log(lam)
    b = 0.931 + 2.53 * np.sqrt(lam)
    a = -0.059 + 0.02483 * b
    invalpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2.0)

    out = np.zeros(lat.shape, dtype=np.int64)
    alive = np.arange(lat.size)
    for it in range(256):
        idx = alive
        u = uniforms(key, lat[idx], 2 * it) - 0.5
        v = uniforms(key, lat[idx], 2 * it + 1)
        us = 0.5 - np.abs(u)
        k = np.floor((2.0 * a[idx] / us + b[idx]) * u + lam[idx] + 0.43)

        accept = (us >= 0.07) & (v <= vr[idx])
        reject = (k < 0) | ((us < 0.013) & (v > us))
        rest = ~(accept | reject)
        if np.any(rest):
            kr = np.where(k < 0, 0.0, k)
            lhs = np.log(v) + np.log(invalpha[idx]) - np.log(a[idx] / (us * us) + b[idx])
            rhs = k * loglam[idx] - lam[idx] - gammaln(kr + 1.0)
            accept = accept | (rest & (lhs <= rhs))

        out[idx[accept]] = k[accept].astype(np.int64)
        alive = idx[~accept]
        if alive.size == 0:
            return out
    raise RuntimeError("Poisson sampling (PTRS) failed to terminate")


def lattice_for(shape: tuple[int, int]) -> np.ndarray:
    """Row-major flat pixel indices for a (height, width) field."""
    h, w = shape
    return np.arange(h * w, dtype=np.uint64).reshape(h, w)


def lattice_at(rows, cols, width: int) -> np.ndarray:
    """Flat pixel indices for explicit (row, col) positions."""
    r = np.asarray(rows, dtype=np.uint64)
    c = np.asarray(cols, dtype=np.uint64)
    return r * np.uint64(width) + c
