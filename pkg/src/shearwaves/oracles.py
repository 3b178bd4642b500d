"""Independent slow-path evaluations used to cross-check the spectral core.

Nothing here touches the Fourier-multiplier implementations: the smoothing
operator is evaluated by panel Gauss quadrature against the exponential
kernel, derivatives by high-order finite differences, and the classical
quadratic-flux right-hand side is coded directly from its textbook form.
"""
from __future__ import annotations

import numpy as np

from .spectral import Field

__all__ = [
    "line_kernel",
    "helmholtz_inverse_quadrature",
    "fd_derivative6",
    "camassa_holm_rhs",
]


def line_kernel(z):
    """(1/2) exp(-|z|), the Green's function of 1 - dxx on the line."""
    return 0.5 * np.exp(-np.abs(z))


def _wrap_half(z, length):
    """Wrap displacements into [-L/2, L/2) (nearest periodic image)."""
    return (z + 0.5 * length) % length - 0.5 * length


def trig_eval(f: Field, points) -> np.ndarray:
    """Evaluate the band-limited interpolant of f at arbitrary points."""
    grid = f.grid
    hat = f.hat.copy()
    # split the Nyquist coefficient between +/- n/2 so the interpolant is real
    ny = grid.nyquist_index
    k = grid.k.copy()
    phases = np.exp(1j * np.outer(np.asarray(points, dtype=float), k))
    vals = phases @ hat
    extra = hat[ny] * 0.5 * (np.exp(1j * np.outer(points, [-k[ny]])) -
                             np.exp(1j * np.outer(points, [k[ny]])))
    return (vals + extra[:, 0]).real


def helmholtz_inverse_quadrature(f: Field, gauss_order: int = 8) -> np.ndarray:
    """Convolution with the nearest-image exponential kernel by composite
    Gauss-Legendre quadrature, one panel per grid cell.

    The kernel kink sits on panel boundaries (grid nodes and their
    antipodes), so the integrand is smooth inside every panel and the rule
    converges far below the kernel's periodization tail exp(-L/2), which is
    the accuracy floor of the nearest-image approximation.
    """
    grid = f.grid
    nodes, weights = np.polynomial.legendre.leggauss(gauss_order)
    # map to panels [x_m, x_m + dx]
    starts = grid.x
    half = 0.5 * grid.dx
    y = (starts[:, None] + half * (nodes[None, :] + 1.0)).ravel()
    w = np.tile(half * weights, grid.n)
    fy = trig_eval(f, y)
    out = np.empty(grid.n)
    for i, xi in enumerate(grid.x):
        out[i] = np.sum(w * line_kernel(_wrap_half(xi - y, grid.length)) * fy)
    return out


# 6th-order centred first-derivative stencil
_FD6 = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0


def fd_derivative6(values: np.ndarray, dx: float) -> np.ndarray:
    """Periodic 6th-order centred finite-difference first derivative."""
    out = np.zeros_like(values)
    for offset, coeff in zip(range(-3, 4), _FD6):
        if coeff != 0.0:
            out += coeff * np.roll(values, -offset)
    return out / dx


def camassa_holm_rhs(u: Field, drift: float = 0.0) -> Field:
    """Textbook quadratic-flux nonlocal right-hand side,

        du/dt = -(drift + u) u_x - d/dx (1-dxx)^-1 (u^2 + u_x^2 / 2),

    coded against raw transforms (independent of the multiplier helpers)."""
    grid = u.grid
    n = grid.n
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=grid.length / n)
    ik = 1j * k
    ik[n // 2] = 0.0
    uhat = np.fft.fft(u.values)
    ux = np.fft.ifft(ik * uhat).real
    flux = u.values**2 + 0.5 * ux**2
    smooth_dx = np.fft.ifft(ik / (1.0 + k**2) * np.fft.fft(flux)).real
    return Field(grid, -(drift + u.values) * ux - smooth_dx)
