"""Per-angular-mode elliptic inversions on the log-radial grid.

Two problems, both reduced to banded radial systems after the angular FFT:

* Poisson: Delta phi = w with phi = 0 on the boundary ring and decay-matched
  far conditions (Robin d_r phi + (m/r) phi = 0 for m >= 1, Neumann for the
  circulation-free m = 0).
* Stream-Helmholtz: (Delta - alpha^2 Delta^2) phi = q with the no-slip pair
  phi = d_r phi = 0 at r = 1 and the truncation pair phi = d_r phi = 0 at
  r_max.  Solved as a coupled first-order system in (phi, Delta phi): the
  composed fourth-order operator squares the condition number, the coupled
  form does not, and the extra accuracy is what the inverse-consistency
  budget needs.

The no-slip Neumann rows reuse the exact one-sided stencil of perp_grad, so
returned velocities satisfy the no-slip ring check to roundoff.  Every solve
re-evaluates its PDE residual with the 2D operators and rejects the result
if it exceeds 1e-10 relative.  Factorizations are cached on the grid, keyed
by (kind, mode, alpha).
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import CirculationError, ConfigError, EllipticSolveError
from .fields import ScalarField, VectorField, laplacian, perp_grad, curl_perp, norm_l2
from .grid import ExteriorGrid

_RESIDUAL_TOL = 1e-10


def _factorize(mat, m: int):
    """Returns (matrix, LU); the matrix is kept for residual checks."""
    try:
        return mat, spla.splu(mat)
    except RuntimeError as exc:
        raise EllipticSolveError("singular radial operator at mode %d: %s"
                                 % (m, exc), mode=m)


def _poisson_factor(grid: ExteriorGrid, m: int):
    key = ("poisson", m)
    cached = grid.solver_cache.get(key)
    if cached is not None:
        return cached
    n = grid.spec.n_r
    h = grid.ds
    inv_h2 = 1.0 / (h * h)
    i = np.arange(1, n - 1)
    rows = np.concatenate([[0], i, i, i, [n - 1] * 3])
    cols = np.concatenate([[0], i - 1, i, i + 1, [n - 3, n - 2, n - 1]])
    vals = np.concatenate([
        [1.0],
        np.full(n - 2, inv_h2),
        np.full(n - 2, -2.0 * inv_h2 - m * m),
        np.full(n - 2, inv_h2),
        # far edge: one-sided d/ds + m, matching r^-m decay (Neumann at m=0)
        [1.0 / (2.0 * h), -4.0 / (2.0 * h), 3.0 / (2.0 * h) + m],
    ])
    lu = _factorize(sp.csc_matrix((vals, (rows, cols)), shape=(n, n)), m)
    with grid.cache_lock:
        grid.solver_cache[key] = lu
    return lu


def _stream_factor(grid: ExteriorGrid, m: int, alpha: float):
    key = ("stream", m, alpha)
    cached = grid.solver_cache.get(key)
    if cached is not None:
        return cached
    n = grid.spec.n_r
    h = grid.ds
    inv_h2 = 1.0 / (h * h)
    c = np.exp(-2.0 * grid.s_nodes[1:-1])
    a2 = alpha * alpha
    i = np.arange(1, n - 1)

    # unknowns interleaved: x[2i] = phi_i, x[2i+1] = (Delta phi)_i
    rows = np.concatenate([
        2 * i, 2 * i, 2 * i, 2 * i,                      # definition rows
        2 * i + 1, 2 * i + 1, 2 * i + 1,                 # PDE rows
        [0, 1, 1, 1],                                    # boundary ring
        [2 * n - 2, 2 * n - 1, 2 * n - 1, 2 * n - 1],    # truncation edge
    ])
    cols = np.concatenate([
        2 * (i - 1), 2 * i, 2 * (i + 1), 2 * i + 1,
        2 * (i - 1) + 1, 2 * i + 1, 2 * (i + 1) + 1,
        [0, 0, 2, 4],
        [2 * n - 2, 2 * n - 2, 2 * n - 4, 2 * n - 6],
    ])
    od = 1.0 / (2.0 * h)
    vals = np.concatenate([
        c * inv_h2, c * (-2.0 * inv_h2 - m * m), c * inv_h2, np.full(n - 2, -1.0),
        -a2 * c * inv_h2, 1.0 - a2 * c * (-2.0 * inv_h2 - m * m), -a2 * c * inv_h2,
        # phi = 0 and the same one-sided stencil perp_grad uses for d_s phi
        [1.0, -3.0 * od, 4.0 * od, -1.0 * od],
        [1.0, 3.0 * od, -4.0 * od, 1.0 * od],
    ])
    lu = _factorize(sp.csc_matrix((vals, (rows, cols)), shape=(2 * n, 2 * n)), m)
    with grid.cache_lock:
        grid.solver_cache[key] = lu
    return lu


def _solve_modes(factor, rhs_mode: np.ndarray):
    """Complex solve through a real factorization via stacked columns.

    Returns (solution, residual^2, rhs^2) so callers can enforce the
    relative residual bound across all modes of one inversion.
    """
    mat, lu = factor
    stacked = np.column_stack([rhs_mode.real, rhs_mode.imag])
    out = lu.solve(stacked)
    res = mat @ out - stacked
    return (out[:, 0] + 1j * out[:, 1],
            float(np.sum(res * res)), float(np.sum(stacked * stacked)))


def total_mass(w: ScalarField) -> float:
    """Quadrature integral of w over the annulus."""
    return float(np.sum(w.grid.weights * w.values))


def solve_poisson(w: ScalarField, mass_tol: float = 1e-6) -> ScalarField:
    """Stream function of the vorticity w, vanishing on the boundary ring."""
    g = w.grid
    mass = total_mass(w)
    scale = norm_l2(w)
    if abs(mass) > mass_tol * max(scale, 1.0):
        raise CirculationError(
            "net vorticity mass %.3e exceeds tolerance; the mode-0 far "
            "condition requires zero circulation" % mass, mode=0)

    n_theta = g.spec.n_theta
    coeff = np.fft.rfft(w.values, axis=1)
    e2s = np.exp(2.0 * g.s_nodes)
    phi_hat = np.zeros_like(coeff)
    for m in range(n_theta // 2 + 1):
        rhs = np.zeros(g.spec.n_r, dtype=complex)
        rhs[1:-1] = e2s[1:-1] * coeff[1:-1, m]
        if not rhs.any():
            continue
        phi_hat[:, m], _, _ = _solve_modes(_poisson_factor(g, m), rhs)
    phi = ScalarField(g, np.fft.irfft(phi_hat, n=n_theta, axis=1))

    res = laplacian(phi).values - w.values
    res_norm = float(np.sqrt(np.sum(g.weights[1:-1] * res[1:-1] ** 2)))
    if res_norm > _RESIDUAL_TOL * max(scale, 1e-30):
        raise EllipticSolveError("poisson residual %.3e exceeds %.0e relative"
                                 % (res_norm, _RESIDUAL_TOL))
    return phi


def solve_stream_helmholtz(q: ScalarField, alpha: float):
    """Invert (Delta - alpha^2 Delta^2) with no-slip and truncation pairs.

    Returns (phi, w, u) with w = laplacian(phi) and u = perp_grad(phi)
    carrying the no-slip tag.
    """
    if not alpha > 0.0:
        raise ConfigError(
            "alpha=%r must be positive; the no-slip Poisson problem is "
            "overdetermined at alpha=0" % (alpha,), key="alpha")
    g = q.grid
    n_theta = g.spec.n_theta
    n = g.spec.n_r
    coeff = np.fft.rfft(q.values, axis=1)
    phi_hat = np.zeros_like(coeff)
    res2 = 0.0
    rhs2 = 0.0
    for m in range(n_theta // 2 + 1):
        rhs = np.zeros(2 * n, dtype=complex)
        rhs[3:-2:2] = coeff[1:-1, m]
        if not rhs.any():
            continue
        x, r2, b2 = _solve_modes(_stream_factor(g, m, alpha), rhs)
        phi_hat[:, m] = x[0::2]
        res2 += r2
        rhs2 += b2
    phi = ScalarField(g, np.fft.irfft(phi_hat, n=n_theta, axis=1))
    w = laplacian(phi)

    # residual of the banded system itself; recomposing Delta^2 in physical
    # space would amplify roundoff by alpha^2/h^4 and prove nothing more
    res_norm = float(np.sqrt(res2))
    scale = max(float(np.sqrt(rhs2)), 1e-30)
    if res_norm > _RESIDUAL_TOL * scale:
        raise EllipticSolveError("stream residual %.3e exceeds %.0e relative"
                                 % (res_norm, _RESIDUAL_TOL))
    u = perp_grad(phi)
    u = VectorField(g, u.u_r, u.u_theta, tag="no-slip")
    return phi, w, u


def recover_q(u: VectorField, alpha: float) -> ScalarField:
    """Filtered vorticity q = w - alpha^2 Delta w of a velocity field."""
    w = curl_perp(u)
    if alpha == 0.0:
        return w
    g = u.grid
    return ScalarField(g, w.values - alpha * alpha * laplacian(w).values)
