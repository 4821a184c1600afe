"""Photon and dark-current physics used by the sensor simulator.

Scalar helpers are kept numpy-friendly: they accept floats or arrays and
broadcast, which lets the capture pipeline reuse them per pixel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants, frozen after construction.

    h        Planck constant, J*s
    c        speed of light, m/s
    q        electron charge, coulomb
    k_J      Boltzmann constant, J/K
    k_eV     Boltzmann constant, eV/K (companion for bandgap arithmetic)
    """

    h: float = 6.626e-34
    c: float = 2.998e8
    q: float = 1.6e-19
    k_J: float = 1.38e-23
    k_eV: float = 8.617e-5


CONSTANTS = PhysicalConstants()


def photon_energy(wavelength_m):
    """Energy in joules of a photon at the given wavelength (h*c/lambda)."""
    lam = np.asarray(wavelength_m, dtype=np.float64)
    if np.any(lam <= 0) or not np.all(np.isfinite(lam)):
        raise DomainError(f"wavelength must be > 0 m, got {wavelength_m}")
    out = CONSTANTS.h * CONSTANTS.c / lam
    return float(out) if out.ndim == 0 else out


def shot_sigma(mu):
    """Shot-noise standard deviation for an expected count mu: sqrt(mu)."""
    mu_arr = np.asarray(mu, dtype=np.float64)
    if np.any(mu_arr < 0) or not np.all(np.isfinite(mu_arr)):
        raise DomainError(f"expected count must be >= 0, got {mu}")
    out = np.sqrt(mu_arr)
    return float(out) if out.ndim == 0 else out


def max_snr(mu_e):
    """Shot-noise-limited SNR of an otherwise noise-free pixel: sqrt(mu_e)."""
    mu_arr = np.asarray(mu_e, dtype=np.float64)
    if np.any(mu_arr < 0) or not np.all(np.isfinite(mu_arr)):
        raise DomainError(f"electron count must be >= 0, got {mu_e}")
    out = np.sqrt(mu_arr)
    return float(out) if out.ndim == 0 else out


def dark_density(profile, temperature: float):
    """Mean dark-current density (A/m^2) of a sensor at ``temperature``.

    Follows the T^2 * exp(delta_e / (k*T)) law with the proportionality
    constant anchored so the value at ``profile.t_ref`` equals
    ``profile.dark_density_ref``.
    """
    t = float(temperature)
    if not np.isfinite(t) or t <= 0:
        raise DomainError(f"temperature must be > 0 K, got {temperature}")
    k = CONSTANTS.k_eV
    t_ref = profile.t_ref
    scale = (t / t_ref) ** 2 * np.exp(
        profile.delta_e / (k * t) - profile.delta_e / (k * t_ref)
    )
    return profile.dark_density_ref * scale


def dark_electrons(j_d, area, t_int):
    """Mean dark electrons collected: J_D * A_D * t_int / q.

    Accepts scalars or arrays (broadcasting); linear in every argument.
    """
    j = np.asarray(j_d, dtype=np.float64)
    a = np.asarray(area, dtype=np.float64)
    t = np.asarray(t_int, dtype=np.float64)
    for name, v in (("dark current density", j), ("detector area", a), ("integration time", t)):
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise DomainError(f"{name} must be >= 0")
    out = j * a * t / CONSTANTS.q
    return float(out) if out.ndim == 0 else out
