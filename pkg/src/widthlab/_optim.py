"""Small vectorized solvers shared by the body oracles and the sphere solver.

Everything here operates on batches: an array of shape (B, n) is B independent
problem instances solved in lockstep with numpy.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


def golden_min(f: Callable[[np.ndarray], np.ndarray], a: np.ndarray, b: np.ndarray,
               tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Minimize convex scalar functions f(theta) elementwise over [a, b].

    Returns (theta_star, f(theta_star)).  a, b, and f's output share a shape.
    """
    a = np.asarray(a, dtype=float).copy()
    b = np.asarray(b, dtype=float).copy()
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    span = np.max(b - a) if a.size else 0.0
    n_iter = int(np.ceil(np.log(max(tol, 1e-300) / max(span, tol)) / np.log(_INV_PHI))) + 1
    for _ in range(max(n_iter, 1)):
        left = f1 <= f2
        b = np.where(left, x2, b)
        a = np.where(left, a, x1)
        new_x1 = b - _INV_PHI * (b - a)
        new_x2 = a + _INV_PHI * (b - a)
        # one fresh evaluation per step, the other value is recycled
        xq = np.where(left, new_x1, new_x2)
        fq = f(xq)
        x1_next = np.where(left, xq, x2)
        f1_next = np.where(left, fq, f2)
        x2_next = np.where(left, x1, xq)
        f2_next = np.where(left, f1, fq)
        x1, x2, f1, f2 = x1_next, x2_next, f1_next, f2_next
    theta = 0.5 * (a + b)
    return theta, f(theta)


def project_l2(X: np.ndarray, radius: float) -> np.ndarray:
    nrm = np.linalg.norm(X, axis=-1, keepdims=True)
    scale = np.where(nrm > radius, radius / np.maximum(nrm, 1e-300), 1.0)
    return X * scale


def project_linf(X: np.ndarray, radius: float) -> np.ndarray:
    return np.clip(X, -radius, radius)


def project_l1(X: np.ndarray, radius: float) -> np.ndarray:
    """Euclidean projection of each row onto the l1 ball of the given radius."""
    X = np.atleast_2d(X)
    A = np.abs(X)
    need = A.sum(axis=1) > radius
    if not np.any(need):
        return X.copy() if X.ndim == 2 else X
    out = X.copy()
    U = np.sort(A[need], axis=1)[:, ::-1]
    css = np.cumsum(U, axis=1) - radius
    ks = np.arange(1, U.shape[1] + 1)
    cond = U - css / ks > 0
    rho = cond.shape[1] - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(len(rho)), rho] / (rho + 1)
    out[need] = np.sign(X[need]) * np.maximum(A[need] - theta[:, None], 0.0)
    return out


def project_ellipsoid(X: np.ndarray, axes: np.ndarray) -> np.ndarray:
    """Project rows of X onto {y : sum (y_i/a_i)^2 <= 1} (bisection on the multiplier)."""
    X = np.atleast_2d(X).astype(float)
    a2 = axes.astype(float) ** 2
    inside = np.sum(X ** 2 / a2, axis=1) <= 1.0
    out = X.copy()
    if np.all(inside):
        return out
    V = X[~inside]

    def constraint(lam):
        Y = V * (a2 / (a2 + lam[:, None]))
        return np.sum(Y ** 2 / a2, axis=1) - 1.0

    lo = np.zeros(len(V))
    hi = np.full(len(V), float(np.max(axes)) ** 2 + np.linalg.norm(V, axis=1) * np.max(axes))
    grow = constraint(hi) > 0
    while np.any(grow):
        hi[grow] *= 2.0
        grow = constraint(hi) > 0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        pos = constraint(mid) > 0
        lo = np.where(pos, mid, lo)
        hi = np.where(pos, hi, mid)
    lam = 0.5 * (lo + hi)
    out[~inside] = V * (a2 / (a2 + lam[:, None]))
    return out


def dykstra(projections: Sequence[Callable[[np.ndarray], np.ndarray]], X0: np.ndarray,
            iters: int = 100, tol: float = 1e-12) -> np.ndarray:
    """Dykstra's alternating projections onto the intersection of convex sets."""
    X = np.atleast_2d(X0).astype(float)
    corr = [np.zeros_like(X) for _ in projections]
    for _ in range(iters):
        prev = X
        for j, proj in enumerate(projections):
            Y = proj(X + corr[j])
            corr[j] = X + corr[j] - Y
            X = Y
        if np.max(np.abs(X - prev)) < tol:
            break
    return X


def _unit_rows(Z: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(Z, axis=-1, keepdims=True)
    nrm = np.where(nrm == 0, 1.0, nrm)
    return Z / nrm


def random_unit(rng: np.random.Generator, count: int, dim: int,
                with_axes: bool = True) -> np.ndarray:
    """Batch of starting directions: random unit rows plus +-e_i seeds."""
    Z = _unit_rows(rng.standard_normal((count, dim)))
    if with_axes:
        k = min(dim, max(1, count // 4))
        eye = np.eye(dim)[:k]
        Z = np.vstack([Z, eye, -eye])
    return Z


def sphere_min(eval_fn: Callable[[np.ndarray], tuple],
               dim: int, rng: np.random.Generator,
               restarts: int = 64, iters: int = 300,
               step0: float = 0.1) -> tuple[float, np.ndarray]:
    """Multi-start projected subgradient descent over the unit sphere.

    eval_fn(Z) returns (values, subgradients) in one pass.  Returns
    (best value, best unit witness); the value is always from an actually
    evaluated point, hence an upper bound on the true infimum.
    """
    Z = random_unit(rng, restarts, dim)
    best_val, best_z = np.inf, Z[0]
    for k in range(1, iters + 1):
        vals, G = eval_fn(Z)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val, best_z = float(vals[i]), Z[i].copy()
        gn = np.linalg.norm(G, axis=-1, keepdims=True)
        G = G / np.where(gn == 0, 1.0, gn)
        Z = _unit_rows(Z - (step0 / np.sqrt(k)) * G)
    vals, _ = eval_fn(Z)
    i = int(np.argmin(vals))
    if vals[i] < best_val:
        best_val, best_z = float(vals[i]), Z[i].copy()
    return best_val, best_z


def support_sphere_max(support_fn: Callable[[np.ndarray], np.ndarray],
                       extreme_fn: Callable[[np.ndarray], np.ndarray],
                       dim: int, rng: np.random.Generator,
                       restarts: int = 64, iters: int = 100) -> tuple[float, np.ndarray]:
    """Maximize a support function over the unit sphere.

    Uses the monotone fixed-point iteration z <- e(z)/||e(z)|| (each step cannot
    decrease h), so the result is a certified lower bound on the supremum.
    """
    Z = random_unit(rng, restarts, dim)
    for _ in range(iters):
        E = extreme_fn(Z)
        nrm = np.linalg.norm(E, axis=-1, keepdims=True)
        stuck = nrm[:, 0] < 1e-300
        Znew = np.where(stuck[:, None], Z, E / np.where(nrm == 0, 1.0, nrm))
        if np.max(np.abs(Znew - Z)) < 1e-14:
            Z = Znew
            break
        Z = Znew
    vals = support_fn(Z)
    i = int(np.argmax(vals))
    return float(vals[i]), Z[i].copy()
