"""Central finite-difference operators on periodic grids.

The gradient/divergence pair uses the standard centred first-derivative
stencil of order ``2m`` and the pressure Laplacian uses the matching
centred second-derivative stencil, so that all operators diagonalize in
Fourier space.  The coefficient formulas are

    a_k = (-1)**(k+1) / k * (m!)**2 / ((m+k)! (m-k)!),   k = 1..m
    b_k = 2 a_k / k,                                     k = 1..m

with ``b_0`` fixed by the zero row sum.  The associated trigonometric
symbols are

    a(phi) = 2 sum_k a_k sin(k phi)        (first derivative: i a(phi)/h)
    b(phi) = b_0 + 2 sum_k b_k cos(k phi)  (second derivative: b(phi)/h**2)

FFT-based solvers are provided for the pressure Poisson problem and the
constant-coefficient Helmholtz problems arising from implicit diffusion.
"""

import math

import numpy as np


def stencil_coefficients(m):
    """Return (a, b0, b) for the order-2m centred stencils; a, b are 1..m."""
    m = int(m)
    if m < 1:
        raise ValueError("m must be >= 1")
    a = np.array(
        [
            (-1.0) ** (k + 1)
            / k
            * (math.factorial(m) ** 2)
            / (math.factorial(m + k) * math.factorial(m - k))
            for k in range(1, m + 1)
        ]
    )
    b = 2.0 * a / np.arange(1, m + 1)
    b0 = -2.0 * float(np.sum(b))
    return a, b0, b


def symbol_a(m, phi):
    """First-derivative symbol a(phi) = 2 sum_k a_k sin(k phi)."""
    a, _, _ = stencil_coefficients(m)
    phi = np.asarray(phi, dtype=float)
    out = np.zeros_like(phi)
    for k in range(1, m + 1):
        out += 2.0 * a[k - 1] * np.sin(k * phi)
    return out


def symbol_b(m, phi):
    """Second-derivative symbol b(phi) = b0 + 2 sum_k b_k cos(k phi)."""
    _, b0, b = stencil_coefficients(m)
    phi = np.asarray(phi, dtype=float)
    out = np.full_like(phi, b0)
    for k in range(1, m + 1):
        out += 2.0 * b[k - 1] * np.cos(k * phi)
    return out


def mode_beta(m, thetas):
    """Per-mode stabilization ratio beta = 1 - sum a(t)^2 / (-sum b(t)).

    ``thetas`` is a sequence of angle arrays, one per axis.  The zero
    mode (all angles zero) is undefined and returned as 1.
    """
    num = sum(symbol_a(m, t) ** 2 for t in thetas)
    den = -sum(symbol_b(m, t) for t in thetas)
    with np.errstate(divide="ignore", invalid="ignore"):
        beta = 1.0 - num / den
    return np.where(den > 0, beta, 1.0)


class PeriodicOperators:
    """Gradient, divergence and Laplacians on a PeriodicGrid, order 2m."""

    def __init__(self, grid, m=1):
        self.grid = grid
        self.m = int(m)
        self.a, self.b0, self.b = stencil_coefficients(self.m)
        n, h, dim = grid.n, grid.h, grid.dim
        theta = 2.0 * np.pi * np.fft.fftfreq(n)  # angle per unit index
        sym1 = 1j * symbol_a(self.m, theta) / h
        sym2 = symbol_b(self.m, theta) / h**2
        shape_axes = []
        for ax in range(dim):
            sh = [1] * dim
            sh[ax] = n
            shape_axes.append(tuple(sh))
        self.grad_symbol = [sym1.reshape(shape_axes[ax]) for ax in range(dim)]
        self.lap_symbol = sum(sym2.reshape(shape_axes[ax]) for ax in range(dim))

    def diff1(self, f, axis):
        """Centred first derivative along grid axis ``axis`` (0..dim-1).

        Works on plain scalar fields and on fields with extra leading
        axes (velocity components), since grid axes are addressed from
        the back.
        """
        ax = axis - self.grid.dim
        out = np.zeros_like(f)
        for k in range(1, self.m + 1):
            out += self.a[k - 1] * (np.roll(f, -k, axis=ax) - np.roll(f, k, axis=ax))
        return out / self.grid.h

    def grad(self, p):
        return np.stack([self.diff1(p, ax) for ax in range(self.grid.dim)])

    def div(self, u):
        return sum(self.diff1(u[ax], ax) for ax in range(self.grid.dim))

    def lap(self, f):
        """Compact second-derivative Laplacian (sum of 1-d b-stencils)."""
        h2 = self.grid.h**2
        out = self.b0 * self.grid.dim * f
        for axis in range(self.grid.dim):
            ax = axis - self.grid.dim
            for k in range(1, self.m + 1):
                out = out + self.b[k - 1] * (
                    np.roll(f, -k, axis=ax) + np.roll(f, k, axis=ax)
                )
        return out / h2

    def stab(self, p):
        """Pressure stabilization operator: div(grad p) - lap p (>= 0)."""
        return self.div(self.grad(p)) - self.lap(p)

    def solve_lap(self, rhs):
        """Solve lap(p) = rhs with zero-mean p (zero mode discarded)."""
        rhat = np.fft.fftn(rhs)
        lam = self.lap_symbol.copy()
        # broadcast to full shape to index the zero mode safely
        lam = np.broadcast_to(lam, rhs.shape).copy()
        zero = (0,) * self.grid.dim
        lam[zero] = 1.0
        phat = rhat / lam
        phat[zero] = 0.0
        return np.real(np.fft.ifftn(phat))

    def solve_helmholtz(self, rhs, coef):
        """Solve (I - coef*lap) w = rhs for each component of rhs."""
        lam = 1.0 - coef * self.lap_symbol
        what = np.fft.fftn(rhs, axes=tuple(range(-self.grid.dim, 0)))
        return np.real(np.fft.ifftn(what / lam, axes=tuple(range(-self.grid.dim, 0))))
