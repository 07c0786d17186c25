"""Structured grids and discrete field utilities.

Two grid flavours are provided:

* ``PeriodicGrid`` -- a uniform grid on a periodic box ``(0, length)^dim``
  with ``n`` nodes per direction.  Scalar fields are arrays of shape
  ``grid.shape``; velocity fields carry a leading component axis,
  ``(dim,) + grid.shape``.

* ``TensorGrid`` -- a 2-d tensor-product grid on a rectangle, possibly
  non-uniform, including the boundary nodes.  Node volumes use half
  cells at the boundary, which makes the discrete inner product a
  trapezoidal-type quadrature.

The grid objects own the quadrature weights, inner products and the
projections onto the discrete velocity/pressure spaces (zero boundary
velocities; zero-mean pressures with pinned corner values on the
tensor grid).
"""

import numpy as np


class PeriodicGrid:
    """Uniform periodic grid on ``(0, length)^dim`` with ``n`` points per axis."""

    periodic = True

    def __init__(self, dim, n, length=2.0 * np.pi):
        if dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        self.dim = dim
        self.n = int(n)
        self.length = float(length)
        self.h = self.length / self.n
        self.shape = (self.n,) * dim
        self.num_nodes = self.n**dim
        # quadrature weight of one node (all nodes carry the same volume)
        self.node_volume = self.h**dim
        axes = [np.arange(self.n) * self.h for _ in range(dim)]
        self.coords = np.meshgrid(*axes, indexing="ij")

    def field(self, fill=0.0):
        return np.full(self.shape, fill, dtype=float)

    def velocity(self, fill=0.0):
        return np.full((self.dim,) + self.shape, fill, dtype=float)

    def inner(self, f, g):
        """Discrete L2 inner product; sums over components if present."""
        return self.node_volume * float(np.sum(f * g))

    def norm(self, f):
        return np.sqrt(max(self.inner(f, f), 0.0))

    def mean(self, p):
        """Volume-weighted mean of a scalar field (weights are uniform)."""
        return float(np.mean(p))

    def project_pressure(self, p):
        """Projection onto the zero-mean pressure space."""
        return p - self.mean(p)

    def project_velocity(self, u):
        """The periodic velocity space is unconstrained."""
        return u

    def kinetic_energy(self, u):
        return 0.5 * self.inner(u, u)

    def sample_scalar(self, func):
        return np.asarray(func(*self.coords), dtype=float)

    def sample_velocity(self, funcs):
        return np.stack([np.asarray(f(*self.coords), dtype=float) for f in funcs])


class TensorGrid:
    """2-d tensor-product grid with boundary nodes on ``[x0,x1] x [y0,y1]``.

    ``x`` and ``y`` are the 1-d node coordinate arrays (monotone, including
    the endpoints).  Node volumes are products of the 1-d cell sizes,
    where the cell attached to node j spans half the distance to each
    neighbour and boundary nodes get half cells.
    """

    periodic = False

    def __init__(self, x, y):
        self.x = np.asarray(x, dtype=float)
        self.y = np.asarray(y, dtype=float)
        if self.x.ndim != 1 or self.y.ndim != 1:
            raise ValueError("x and y must be 1-d coordinate arrays")
        if np.any(np.diff(self.x) <= 0) or np.any(np.diff(self.y) <= 0):
            raise ValueError("coordinates must be strictly increasing")
        self.dim = 2
        self.shape = (self.x.size, self.y.size)
        self.num_nodes = self.x.size * self.y.size
        self.dvx = self._cell_sizes(self.x)
        self.dvy = self._cell_sizes(self.y)
        self.weights = np.outer(self.dvx, self.dvy)
        self.coords = np.meshgrid(self.x, self.y, indexing="ij")

        nx, ny = self.shape
        self.interior = np.zeros(self.shape, dtype=bool)
        self.interior[1:-1, 1:-1] = True
        self.boundary = ~self.interior
        self.corners = np.zeros(self.shape, dtype=bool)
        for i in (0, nx - 1):
            for j in (0, ny - 1):
                self.corners[i, j] = True
        self._noncorner_volume = float(np.sum(self.weights[~self.corners]))

    @staticmethod
    def uniform(nx, ny, x_range=(0.0, 1.0), y_range=(0.0, 1.0)):
        return TensorGrid(
            np.linspace(x_range[0], x_range[1], nx + 1),
            np.linspace(y_range[0], y_range[1], ny + 1),
        )

    @staticmethod
    def _cell_sizes(t):
        dv = np.empty_like(t)
        dv[0] = 0.5 * (t[1] - t[0])
        dv[-1] = 0.5 * (t[-1] - t[-2])
        dv[1:-1] = 0.5 * (t[2:] - t[:-2])
        return dv

    def field(self, fill=0.0):
        return np.full(self.shape, fill, dtype=float)

    def velocity(self, fill=0.0):
        return np.full((2,) + self.shape, fill, dtype=float)

    def inner(self, f, g):
        prod = f * g
        if prod.ndim == 3:
            prod = prod.sum(axis=0)
        return float(np.sum(self.weights * prod))

    def norm(self, f):
        return np.sqrt(max(self.inner(f, f), 0.0))

    def mean(self, p):
        """Volume-weighted mean over the whole domain (unit total volume aside)."""
        total = float(np.sum(self.weights))
        return float(np.sum(self.weights * p)) / total

    def project_velocity(self, u):
        """Projection onto the velocity space: zero at every boundary node."""
        v = u.copy()
        v[..., self.boundary] = 0.0
        return v

    def project_pressure(self, p):
        """Projection onto the pressure space: zero weighted mean, zero corners.

        The corner nodes are decoupled from every discrete operator
        (the pressure Laplacian never reads them), so they are pinned
        to zero; the mean is then removed over the remaining nodes to
        keep the zero-mean constraint exact.
        """
        q = p - self.mean(p)
        q[self.corners] = 0.0
        shift = float(np.sum(self.weights * q)) / self._noncorner_volume
        q[~self.corners] -= shift
        return q

    def kinetic_energy(self, u):
        return 0.5 * self.inner(u, u)

    def sample_scalar(self, func):
        return np.asarray(func(*self.coords), dtype=float)

    def sample_velocity(self, funcs):
        return np.stack([np.asarray(f(*self.coords), dtype=float) for f in funcs])


def max_node_error(numeric, exact):
    """Max over nodes of the Euclidean norm of the pointwise difference.

    Works for scalar fields and for velocity fields with a leading
    component axis.
    """
    diff = np.asarray(numeric) - np.asarray(exact)
    if diff.ndim > 2 and diff.shape[0] <= 3:
        diff = np.sqrt(np.sum(diff**2, axis=0))
    else:
        diff = np.abs(diff)
    return float(np.max(diff))


def node_average_norm(grid, f):
    """Root mean square over nodes: sqrt(sum_j f_j^2 / #nodes)."""
    return float(np.sqrt(np.sum(np.asarray(f) ** 2) / grid.num_nodes))
