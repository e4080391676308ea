"""Closed-form oracles for the canned scenarios"""
import math

import numpy as np

from models.units import rayleigh_length


def gaussian_waist_reference(z, u):
    """Positive waist line x(z) = sqrt(w0^2 + (lambda0 z / (pi w0))^2)"""
    z = np.asarray(z, dtype=float)
    x = np.sqrt(u.w0 ** 2 + (u.lambda0 * z / (math.pi * u.w0)) ** 2)
    return float(x) if x.ndim == 0 else x


def paraxial_ray_family(x0, z, u):
    """
    Paraxial Gaussian rays launched at x0, evaluated at distance z

    Returns:
        tuple: (x, px) with px = p0 dx/dz
    """
    x0 = np.asarray(x0, dtype=float)
    zeta = np.asarray(z, dtype=float) / rayleigh_length(u)
    sigma = np.sqrt(1.0 + zeta ** 2)
    x = x0 * sigma
    px = u.p0 * x0 * zeta / (rayleigh_length(u) * sigma)
    return x, px


def paraxial_uncertainty_product(z, u):
    """Delta x Delta p_x / hbar of the paraxial Gaussian family: |z| / (2 z_R)"""
    return 0.5 * abs(z) / rayleigh_length(u)


def fraunhofer_spacing(z_screen, slit_separation, u):
    """Two-slit far-field fringe spacing lambda0 L / d"""
    return u.lambda0 * z_screen / slit_separation
