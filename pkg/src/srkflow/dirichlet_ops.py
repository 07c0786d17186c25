"""Mimetic finite-difference operators on 2-d tensor grids with walls.

Velocities live in the space of node fields vanishing on the boundary;
pressures live in the space of zero-weighted-mean fields with pinned
(zero) corner values.  The discrete operators are

* ``grad``   -- centred gradient at interior nodes, zero on the boundary;
* ``div``    -- centred divergence at interior nodes, one-sided at the
  boundary, with out-of-range values treated as zero (the negative
  adjoint of ``grad`` w.r.t. the weighted inner product);
* ``lap_pressure`` -- a flux-form Laplacian whose edge weights drop
  boundary-boundary edges and halve interior-boundary edges, which makes
  the stabilization operator ``div grad - lap`` vanish exactly on
  linear functions;
* ``lap_velocity`` -- the plain flux-form Laplacian (all edge weights
  one) used for viscous terms, reading boundary values as data.

The pressure Laplacian is singular (constants, plus the four corner
values which no stencil ever reads).  Systems are solved by pinning the
corners and one interior node, solving the symmetrized positive
definite system with preconditioned conjugate gradients, and projecting
the result back onto the pressure space.
"""

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla


def _edge_list(grid):
    """All nearest-neighbour edges as pairs of flat indices plus geometry."""
    nx, ny = grid.shape
    idx = np.arange(nx * ny).reshape(nx, ny)
    edges = []
    # x-direction edges
    for j in range(nx - 1):
        for k in range(ny):
            edges.append((idx[j, k], idx[j + 1, k], grid.dvy[k] / (grid.x[j + 1] - grid.x[j])))
    # y-direction edges
    for j in range(nx):
        for k in range(ny - 1):
            edges.append((idx[j, k], idx[j, k + 1], grid.dvx[j] / (grid.y[k + 1] - grid.y[k])))
    return edges


def _graph_laplacian(n, edges):
    """Weighted graph Laplacian (negative semidefinite) from an edge list."""
    rows, cols, vals = [], [], []
    for a, b, c in edges:
        if c == 0.0:
            continue
        rows += [a, b, a, b]
        cols += [a, b, b, a]
        vals += [-c, -c, c, c]
    return sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()


class DirichletOperators:
    """Discrete gradient/divergence/Laplacian bundle for a TensorGrid."""

    def __init__(self, grid, pin_node=(1, 1), cg_tol=1e-12):
        self.grid = grid
        self.cg_tol = cg_tol
        nx, ny = grid.shape
        n = nx * ny
        self.wflat = grid.weights.reshape(-1)
        boundary = grid.boundary

        edges = _edge_list(grid)
        # velocity Laplacian: every edge has unit weight
        self.kv = _graph_laplacian(n, edges)
        # pressure Laplacian: halve interior-boundary edges, drop
        # boundary-boundary edges
        bflat = boundary.reshape(-1)
        p_edges = []
        for a, b, c in edges:
            nb = int(bflat[a]) + int(bflat[b])
            phi = (1.0, 0.5, 0.0)[nb]
            p_edges.append((a, b, phi * c))
        self.kl = _graph_laplacian(n, p_edges)

        # pinned symmetric positive definite system for the pressure solve
        pins = list(np.flatnonzero(grid.corners.reshape(-1)))
        pin_flat = pin_node[0] * ny + pin_node[1]
        if pin_flat in pins:
            raise ValueError("pin node must not be a corner")
        pins.append(pin_flat)
        self._pins = np.array(pins)
        mat = (-self.kl).tolil()
        for i in self._pins:
            mat[i, :] = 0.0
            mat[:, i] = 0.0
            mat[i, i] = 1.0
        self._pinned = mat.tocsr()
        diag = self._pinned.diagonal()
        self._precond = spla.LinearOperator(
            (n, n), matvec=lambda v: v / diag, dtype=float
        )
        self._maxiter = 10 * n

    # -- first-order operators -------------------------------------------

    def grad(self, p):
        g = self.grid.velocity()
        dx2 = 2.0 * self.grid.dvx[1:-1, None]
        dy2 = 2.0 * self.grid.dvy[None, 1:-1]
        g[0, 1:-1, 1:-1] = (p[2:, 1:-1] - p[:-2, 1:-1]) / dx2
        g[1, 1:-1, 1:-1] = (p[1:-1, 2:] - p[1:-1, :-2]) / dy2
        return g

    def div_full(self, f):
        """Divergence of a general node field: centred inside, one-sided
        at the boundary rows of each direction."""
        x, y = self.grid.x, self.grid.y
        fx, fy = f[0], f[1]
        d = self.grid.field()
        d[1:-1, :] += (fx[2:, :] - fx[:-2, :]) / (x[2:] - x[:-2])[:, None]
        d[0, :] += (fx[1, :] - fx[0, :]) / (x[1] - x[0])
        d[-1, :] += (fx[-1, :] - fx[-2, :]) / (x[-1] - x[-2])
        d[:, 1:-1] += (fy[:, 2:] - fy[:, :-2]) / (y[2:] - y[:-2])[None, :]
        d[:, 0] += (fy[:, 1] - fy[:, 0]) / (y[1] - y[0])
        d[:, -1] += (fy[:, -1] - fy[:, -2]) / (y[-1] - y[-2])
        return d

    def div(self, u):
        return self.div_full(u)

    # -- Laplacians -------------------------------------------------------

    def lap_pressure(self, p):
        return (self.kl @ p.reshape(-1) / self.wflat).reshape(self.grid.shape)

    def lap_velocity(self, w):
        """Flux-form Laplacian of a full (data-carrying) field at interior
        nodes; boundary rows are zeroed."""
        comps = w if w.ndim == 3 else w[None]
        out = np.empty_like(comps)
        for i, c in enumerate(comps):
            r = (self.kv @ c.reshape(-1) / self.wflat).reshape(self.grid.shape)
            r[self.grid.boundary] = 0.0
            out[i] = r
        return out if w.ndim == 3 else out[0]

    def stab(self, p):
        return self.div(self.grad(p)) - self.lap_pressure(p)

    # -- solvers ----------------------------------------------------------

    def solve_lap(self, rhs):
        """Solve lap_pressure(x) = rhs for x in the pressure space."""
        b = -(self.wflat * rhs.reshape(-1))
        b = b.copy()
        b[self._pins] = 0.0
        x, info = spla.cg(
            self._pinned,
            b,
            rtol=self.cg_tol,
            atol=0.0,
            maxiter=self._maxiter,
            M=self._precond,
        )
        if info != 0:
            raise RuntimeError(f"pressure CG did not converge (info={info})")
        return self.grid.project_pressure(x.reshape(self.grid.shape))

    def solve_helmholtz(self, rhs, coef):
        """Solve (I - coef*lap_velocity) w = rhs for w with zero boundary.

        ``rhs`` may be a scalar field or a stacked velocity field; its
        boundary values are ignored (the solution is in the velocity
        space).
        """
        if coef == 0.0:
            out = rhs.copy()
            out[..., self.grid.boundary] = 0.0
            return out
        bidx = np.flatnonzero(self.grid.boundary.reshape(-1))
        cache = getattr(self, "_helm_cache", None)
        if cache is None:
            cache = self._helm_cache = {}
        if coef not in cache:
            mat = (sp.diags(self.wflat) - coef * self.kv).tolil()
            for i in bidx:
                mat[i, :] = 0.0
                mat[:, i] = 0.0
                mat[i, i] = 1.0
            mat = mat.tocsr()
            diag = mat.diagonal()
            cache[coef] = (
                mat,
                spla.LinearOperator(mat.shape, matvec=lambda v, d=diag: v / d),
            )
        mat, precond = cache[coef]
        comps = rhs if rhs.ndim == 3 else rhs[None]
        out = np.empty_like(comps)
        for i, c in enumerate(comps):
            b = self.wflat * c.reshape(-1)
            b = b.copy()
            b[bidx] = 0.0
            x, info = spla.cg(
                mat, b, rtol=self.cg_tol, atol=0.0, maxiter=self._maxiter, M=precond
            )
            if info != 0:
                raise RuntimeError(f"velocity CG did not converge (info={info})")
            out[i] = x.reshape(self.grid.shape)
        return out if rhs.ndim == 3 else out[0]
