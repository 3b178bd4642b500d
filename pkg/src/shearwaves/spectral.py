"""Periodic grid, spectral differentiation and the smoothing operator (1 - dxx)^-1.

Transform convention (pinned, tests rely on it): the forward transform divides
by n, so ``f.hat[j]`` is the coefficient of exp(i*k_j*x) and Fourier multipliers
apply directly to ``hat``.  Wavenumbers follow numpy's fft ordering.
"""
from __future__ import annotations

import numpy as np

# Dealiasing cutoffs as fractions of the Nyquist wavenumber.  two_thirds is the
# classic rule for quadratic products; "strong" keeps |j| <= n/(p+1) with p = 6,
# which is alias-safe for the sixth-power fluxes of the model.
DEALIAS_FRACTIONS = {
    "two_thirds": 2.0 / 3.0,
    "strong": 2.0 / 7.0,
}


class Grid:
    """Uniform sampling of the periodic interval [0, L)."""

    def __init__(self, n: int, length: float):
        if n % 2 != 0 or n < 16:
            raise ValueError(f"grid size must be even and >= 16, got {n}")
        if not (length > 0 and np.isfinite(length)):
            raise ValueError(f"grid length must be positive and finite, got {length}")
        self.n = int(n)
        self.length = float(length)
        self.dx = self.length / self.n
        self.x = np.arange(self.n) * self.dx
        self.k = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)
        self.k_max = np.pi * self.n / self.length
        self.nyquist_index = self.n // 2

    @property
    def wavenumbers(self) -> np.ndarray:
        return self.k

    def __eq__(self, other):
        return isinstance(other, Grid) and self.n == other.n and self.length == other.length

    def __hash__(self):
        return hash((self.n, self.length))

    def __repr__(self):
        return f"Grid(n={self.n}, length={self.length})"


class Field:
    """Real function sampled on a Grid, with lazily maintained spectrum."""

    __slots__ = ("grid", "values", "_hat")

    def __init__(self, grid: Grid, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.n,):
            raise ValueError(f"expected {grid.n} samples, got shape {values.shape}")
        self.grid = grid
        self.values = values
        self._hat = None

    @classmethod
    def from_spectrum(cls, grid: Grid, hat, imag_tol: float = 1e-12) -> "Field":
        """Build a field from forward-normalized coefficients.

        The spectrum must be Hermitian-symmetric so the inverse transform is
        real; the residual imaginary part is checked against ``imag_tol``
        relative to the field magnitude.
        """
        hat = np.asarray(hat, dtype=complex)
        if hat.shape != (grid.n,):
            raise ValueError(f"expected {grid.n} coefficients, got shape {hat.shape}")
        samples = np.fft.ifft(hat) * grid.n
        scale = max(np.max(np.abs(samples.real)), 1.0)
        if np.max(np.abs(samples.imag)) > imag_tol * scale:
            raise ValueError("spectrum is not Hermitian-symmetric: inverse transform is not real")
        f = cls(grid, samples.real)
        f._hat = hat
        return f

    @property
    def hat(self) -> np.ndarray:
        if self._hat is None:
            self._hat = np.fft.fft(self.values) / self.grid.n
        return self._hat

    @property
    def samples(self) -> np.ndarray:
        return self.values

    @property
    def spectrum(self) -> np.ndarray:
        return self.hat

    def copy(self) -> "Field":
        f = Field(self.grid, self.values.copy())
        f._hat = None if self._hat is None else self._hat.copy()
        return f

    # value-like arithmetic, enough for time stepping
    def __add__(self, other):
        if isinstance(other, Field):
            if other.grid != self.grid:
                raise ValueError("grid mismatch")
            return Field(self.grid, self.values + other.values)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Field):
            if other.grid != self.grid:
                raise ValueError("grid mismatch")
            return Field(self.grid, self.values - other.values)
        return NotImplemented

    def __mul__(self, scalar):
        if np.isscalar(scalar):
            return Field(self.grid, self.values * scalar)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"Field({self.grid!r}, max|u|={np.max(np.abs(self.values)):.3e})"


def _apply_multiplier(f: Field, multiplier: np.ndarray) -> Field:
    hat = f.hat * multiplier
    out = Field(f.grid, (np.fft.ifft(hat) * f.grid.n).real)
    out._hat = hat
    return out


def derivative(f: Field) -> Field:
    """Spectral d/dx; the Nyquist bin of the odd multiplier is zeroed to keep
    the result real."""
    g = f.grid
    mult = 1j * g.k
    mult[g.nyquist_index] = 0.0
    return _apply_multiplier(f, mult)


def helmholtz_inverse(f: Field) -> Field:
    """(1 - dxx)^-1 as the multiplier 1/(1+k^2); equals convolution with the
    periodization of (1/2)exp(-|x|)."""
    return _apply_multiplier(f, 1.0 / (1.0 + f.grid.k**2))


def helmholtz_inverse_dx(f: Field) -> Field:
    """d/dx (1 - dxx)^-1, multiplier ik/(1+k^2), Nyquist zeroed."""
    g = f.grid
    mult = 1j * g.k / (1.0 + g.k**2)
    mult[g.nyquist_index] = 0.0
    return _apply_multiplier(f, mult)


def dealias(f: Field, policy: str = "two_thirds") -> Field:
    """Zero every mode with |k| above the policy fraction of the Nyquist
    wavenumber."""
    try:
        fraction = DEALIAS_FRACTIONS[policy]
    except KeyError:
        raise ValueError(f"unknown dealias policy {policy!r}; options: {sorted(DEALIAS_FRACTIONS)}")
    g = f.grid
    mask = np.abs(g.k) <= fraction * g.k_max
    return _apply_multiplier(f, mask.astype(float))


def mean(f: Field) -> float:
    return float(np.mean(f.values))


def sup_norm(f: Field) -> float:
    return float(np.max(np.abs(f.values)))


def l2_norm(f: Field) -> float:
    return float(np.sqrt(f.grid.dx * np.sum(f.values**2)))


def sobolev_norm(f: Field, s: float) -> float:
    """H^s norm from the spectrum: sqrt(L * sum (1+k^2)^s |hat|^2).

    Normalized so that s = 0 reproduces the L^2 quadrature norm and s = 1
    squares to the energy integral of u^2 + u_x^2.
    """
    g = f.grid
    weights = (1.0 + g.k**2) ** s
    return float(np.sqrt(g.length * np.sum(weights * np.abs(f.hat) ** 2)))


def random_mode_coefficients(rng, max_mode: int, decay: float = 0.3):
    """Random cosine/sine coefficients for modes 1..max_mode with geometric
    taper; deterministic for a seeded generator."""
    j = np.arange(1, max_mode + 1)
    taper = np.exp(-decay * (j - 1))
    return rng.standard_normal(max_mode) * taper, rng.standard_normal(max_mode) * taper


def trig_field(grid: Grid, cos_coeffs, sin_coeffs, amplitude: float | None = None) -> Field:
    """Band-limited field sum_j a_j cos(k_j x) + b_j sin(k_j x) built from
    explicit mode coefficients (grid-independent content, usable across
    resolutions).  When ``amplitude`` is given, coefficients are rescaled so
    sum |a_j| + |b_j| = amplitude, bounding the sup norm by it."""
    a = np.asarray(cos_coeffs, dtype=float)
    b = np.asarray(sin_coeffs, dtype=float)
    if a.size >= grid.n // 2 or b.size >= grid.n // 2:
        raise ValueError("mode content exceeds the grid band")
    if amplitude is not None:
        total = np.sum(np.abs(a)) + np.sum(np.abs(b))
        if total > 0:
            scale = amplitude / total
            a, b = a * scale, b * scale
    values = np.zeros(grid.n)
    for j in range(1, a.size + 1):
        k = 2.0 * np.pi * j / grid.length
        values += a[j - 1] * np.cos(k * grid.x) + b[j - 1] * np.sin(k * grid.x)
    return Field(grid, values)


def field_to_csv(f: Field, path) -> None:
    """Write snapshot rows x,u(x) with 17 significant digits."""
    with open(path, "w") as fh:
        fh.write("x,u\n")
        for x, u in zip(f.grid.x, f.values):
            fh.write(f"{x:.17g},{u:.17g}\n")


def field_from_csv(grid: Grid, path) -> Field:
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    if data.shape[0] != grid.n:
        raise ValueError(f"snapshot has {data.shape[0]} rows, grid expects {grid.n}")
    return Field(grid, data[:, 1])
