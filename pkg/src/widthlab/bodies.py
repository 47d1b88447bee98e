"""Centrally symmetric convex bodies with exact or oracle support functions.

Each body exposes:

* ``support(x)``     -- h(x) = sup_{t in body} <t, x>, the norm of the polar body
* ``extreme_point(x)`` -- a maximizer t with <t, x> = support(x)
* ``euclidean_radius()`` -- sup of the Euclidean norm over the body
* ``membership(p, tol)`` -- three-valued inclusion test with a separating
  direction on refutation
* ``project(x)``     -- Euclidean projection, for the kinds where it is cheap

All oracles accept a single vector (shape (n,)) or a batch (B, n); batches are
evaluated in lockstep.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _optim
from ._rng import derive_rng

__all__ = [
    "BodyError", "UnsupportedOperation", "Membership", "ConvexBody",
    "EuclideanBall", "L1Ball", "CubeBall", "Ellipsoid", "SymmetricPolytope",
    "IntersectionL1L2", "LinearImage", "CapIntersection", "body_from_descriptor",
]

_CAP_SEED = 0x5D0C  # internal stream for the deterministic cap-ascent restarts
_MAX_POLY_VERTICES_EXACT = 10_000


class BodyError(ValueError):
    """Invalid body construction or invalid input to a body oracle."""


class UnsupportedOperation(RuntimeError):
    """The requested operation is not available for this body kind."""


@dataclass
class Membership:
    """Three-valued membership verdict; ``separator`` certifies refutation."""
    status: str  # "inside" | "outside" | "inconclusive"
    separator: Optional[np.ndarray] = None

    def __bool__(self) -> bool:
        return self.status == "inside"


class ConvexBody:
    kind = "abstract"

    def __init__(self, dim: int):
        if int(dim) < 1:
            raise BodyError(f"dimension must be positive, got {dim}")
        self.dim = int(dim)

    # -- batching helpers ---------------------------------------------------
    def _as_batch(self, x) -> tuple[np.ndarray, bool]:
        X = np.asarray(x, dtype=float)
        single = X.ndim == 1
        if single:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != self.dim:
            raise BodyError(f"expected vectors of dimension {self.dim}, got shape {np.shape(x)}")
        if not np.all(np.isfinite(X)):
            raise BodyError("non-finite entries in input vector")
        return X, single

    def support(self, x):
        X, single = self._as_batch(x)
        v = self._support(X)
        return float(v[0]) if single else v

    def extreme_point(self, x):
        X, single = self._as_batch(x)
        E = self._extreme(X)
        zero = np.all(X == 0, axis=1)
        if np.any(zero):
            E = E.copy()
            E[zero] = 0.0  # convention for the degenerate direction
        return E[0] if single else E

    # subclasses implement the batched kernels
    def _support(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _extreme(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    # -- geometry -----------------------------------------------------------
    radius_exact = True

    def euclidean_radius(self) -> float:
        raise NotImplementedError

    def radius_point(self) -> np.ndarray:
        """A body point (near-)achieving the Euclidean radius."""
        raise NotImplementedError

    def membership(self, p, tol: float = 0.0) -> Membership:
        if tol < 0:
            raise BodyError("tol must be nonnegative")
        P, _ = self._as_batch(np.asarray(p, dtype=float))
        return self._membership(P[0], float(tol))

    def _membership(self, p: np.ndarray, tol: float) -> Membership:
        raise NotImplementedError

    def project(self, x):
        raise UnsupportedOperation(f"no cheap Euclidean projection for kind '{self.kind}'")

    def scaled(self, lam: float) -> "ConvexBody":
        """The body lam * T (lam > 0)."""
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


def _norm_ball_membership(p, value, bound, tol, separator):
    if value <= bound + tol:
        return Membership("inside")
    return Membership("outside", separator)


class EuclideanBall(ConvexBody):
    kind = "l2"

    def __init__(self, radius: float, dim: int):
        super().__init__(dim)
        if radius <= 0:
            raise BodyError("radius must be positive")
        self.radius = float(radius)

    def _support(self, X):
        return self.radius * np.linalg.norm(X, axis=1)

    def _extreme(self, X):
        nrm = np.linalg.norm(X, axis=1, keepdims=True)
        return self.radius * X / np.where(nrm == 0, 1.0, nrm)

    def euclidean_radius(self):
        return self.radius

    def radius_point(self):
        e = np.zeros(self.dim)
        e[0] = self.radius
        return e

    def _membership(self, p, tol):
        nrm = np.linalg.norm(p)
        return _norm_ball_membership(p, nrm, self.radius, tol,
                                     p / nrm if nrm > 0 else None)

    def project(self, x):
        X, single = self._as_batch(x)
        Y = _optim.project_l2(X, self.radius)
        return Y[0] if single else Y

    def scaled(self, lam):
        return EuclideanBall(lam * self.radius, self.dim)

    def descriptor(self):
        return {"kind": "l2", "dim": self.dim, "radius": self.radius}


class L1Ball(ConvexBody):
    kind = "l1"

    def __init__(self, radius: float, dim: int):
        super().__init__(dim)
        if radius <= 0:
            raise BodyError("radius must be positive")
        self.radius = float(radius)

    def _support(self, X):
        return self.radius * np.max(np.abs(X), axis=1)

    def _extreme(self, X):
        j = np.argmax(np.abs(X), axis=1)  # lowest index wins on ties
        E = np.zeros_like(X)
        rows = np.arange(len(X))
        E[rows, j] = self.radius * np.where(X[rows, j] >= 0, 1.0, -1.0)
        return E

    def euclidean_radius(self):
        return self.radius

    def radius_point(self):
        e = np.zeros(self.dim)
        e[0] = self.radius
        return e

    def _membership(self, p, tol):
        return _norm_ball_membership(p, np.abs(p).sum(), self.radius, tol, np.sign(p))

    def project(self, x):
        X, single = self._as_batch(x)
        Y = _optim.project_l1(X, self.radius)
        return Y[0] if single else Y

    def scaled(self, lam):
        return L1Ball(lam * self.radius, self.dim)

    def descriptor(self):
        return {"kind": "l1", "dim": self.dim, "radius": self.radius}


class CubeBall(ConvexBody):
    """The cube [-radius, radius]^dim (unit ball of the sup norm)."""
    kind = "linf"

    def __init__(self, radius: float, dim: int):
        super().__init__(dim)
        if radius <= 0:
            raise BodyError("radius must be positive")
        self.radius = float(radius)

    def _support(self, X):
        return self.radius * np.abs(X).sum(axis=1)

    def _extreme(self, X):
        return self.radius * np.sign(X)

    def euclidean_radius(self):
        return self.radius * np.sqrt(self.dim)

    def radius_point(self):
        return np.full(self.dim, self.radius)

    def _membership(self, p, tol):
        j = int(np.argmax(np.abs(p)))
        e = np.zeros(self.dim)
        e[j] = np.sign(p[j]) if p[j] != 0 else 1.0
        return _norm_ball_membership(p, np.max(np.abs(p)), self.radius, tol, e)

    def project(self, x):
        X, single = self._as_batch(x)
        Y = _optim.project_linf(X, self.radius)
        return Y[0] if single else Y

    def scaled(self, lam):
        return CubeBall(lam * self.radius, self.dim)

    def descriptor(self):
        return {"kind": "linf", "dim": self.dim, "radius": self.radius}


class Ellipsoid(ConvexBody):
    """{t : sum (t_i / a_i)^2 <= 1} for semi-axes a."""
    kind = "ellipsoid"

    def __init__(self, axes):
        axes = np.asarray(axes, dtype=float)
        if axes.ndim != 1 or np.any(axes <= 0) or not np.all(np.isfinite(axes)):
            raise BodyError("semi-axes must be a vector of positive finite reals")
        super().__init__(len(axes))
        self.axes = axes

    def _support(self, X):
        return np.linalg.norm(self.axes * X, axis=1)

    def _extreme(self, X):
        h = self._support(X)
        h = np.where(h == 0, 1.0, h)
        return (self.axes ** 2) * X / h[:, None]

    def euclidean_radius(self):
        return float(np.max(self.axes))

    def radius_point(self):
        e = np.zeros(self.dim)
        j = int(np.argmax(self.axes))
        e[j] = self.axes[j]
        return e

    def _membership(self, p, tol):
        q = np.linalg.norm(p / self.axes)
        z = p / self.axes ** 2
        nrm = np.linalg.norm(z)
        # <p, z> = q^2 > q = h(z) whenever q > 1, so z separates
        return _norm_ball_membership(p, q, 1.0, tol / float(np.min(self.axes)),
                                     z / nrm if nrm > 0 else None)

    def project(self, x):
        X, single = self._as_batch(x)
        Y = _optim.project_ellipsoid(X, self.axes)
        return Y[0] if single else Y

    def scaled(self, lam):
        return Ellipsoid(lam * self.axes)

    def descriptor(self):
        return {"kind": "ellipsoid", "axes": self.axes.tolist()}


class SymmetricPolytope(ConvexBody):
    """conv(+-v_1, ..., +-v_M); only one representative per +- pair is stored."""
    kind = "polytope"

    def __init__(self, vertices):
        V = np.atleast_2d(np.asarray(vertices, dtype=float))
        if V.ndim != 2 or V.shape[0] < 1 or not np.all(np.isfinite(V)):
            raise BodyError("vertices must be a nonempty finite matrix")
        super().__init__(V.shape[1])
        self.vertices = V

    def _support(self, X):
        return np.max(np.abs(X @ self.vertices.T), axis=1)

    def _extreme(self, X):
        P = X @ self.vertices.T
        j = np.argmax(np.abs(P), axis=1)
        rows = np.arange(len(X))
        sgn = np.where(P[rows, j] >= 0, 1.0, -1.0)
        return sgn[:, None] * self.vertices[j]

    def euclidean_radius(self):
        return float(np.max(np.linalg.norm(self.vertices, axis=1)))

    def radius_point(self):
        return self.vertices[int(np.argmax(np.linalg.norm(self.vertices, axis=1)))].copy()

    def _membership(self, p, tol):
        from scipy.optimize import linprog
        # p = V^T (lam+ - lam-), sum(lam+ + lam-) <= 1, lam >= 0 (feasibility LP)
        M = len(self.vertices)
        A_eq = np.hstack([self.vertices.T, -self.vertices.T])
        A_ub = np.ones((1, 2 * M))
        res = linprog(np.zeros(2 * M), A_ub=A_ub, b_ub=[1.0 + tol],
                      A_eq=A_eq, b_eq=p, bounds=(0, None), method="highs")
        if res.status == 0:
            return Membership("inside")
        rng = derive_rng(_CAP_SEED, "poly-separate")
        val, z = _optim.sphere_min(
            lambda Z: (self._support(Z) - Z @ p, self._extreme(Z) - p),
            self.dim, rng, restarts=32, iters=200)
        if val < -tol:
            return Membership("outside", z)
        return Membership("outside", None)  # LP infeasibility is rigorous

    def scaled(self, lam):
        return SymmetricPolytope(lam * self.vertices)

    def descriptor(self):
        return {"kind": "polytope", "vertices": self.vertices.tolist()}


class IntersectionL1L2(ConvexBody):
    """B_1^n intersected with rho * B_2^n.

    The support function is the inf-convolution
    h(x) = min_{theta in [0, ||x||_inf]} theta + rho * ||(|x| - theta)_+||_2,
    a one-dimensional convex problem solved by golden-section search.
    """
    kind = "intersection_l1_l2"

    def __init__(self, rho: float, dim: int):
        super().__init__(dim)
        if rho <= 0:
            raise BodyError("rho must be positive")
        self.rho = float(rho)

    def _theta_star(self, X):
        A = np.abs(X)
        hi = np.max(A, axis=1)

        def objective(theta):
            return theta + self.rho * np.linalg.norm(np.maximum(A - theta[:, None], 0.0), axis=1)

        theta, val = _optim.golden_min(objective, np.zeros(len(X)), hi, tol=1e-10)
        return theta, val

    def _support(self, X):
        return self._theta_star(X)[1]

    def _extreme(self, X):
        theta, _ = self._theta_star(X)
        A = np.abs(X)
        S = np.sign(X)
        V = np.maximum(A - theta[:, None], 0.0)
        vn = np.linalg.norm(V, axis=1)
        # interior candidate: t = rho * s * v / ||v||, shrunk into B_1 if needed
        with np.errstate(invalid="ignore", divide="ignore"):
            T1 = self.rho * S * V / np.where(vn == 0, 1.0, vn)[:, None]
        l1 = np.abs(T1).sum(axis=1)
        shrink = np.maximum(l1, 1.0)
        T1 = T1 / shrink[:, None]
        # boundary candidate: uniform over the argmax set, shrunk into rho*B_2
        is_max = A >= np.max(A, axis=1, keepdims=True) - 1e-13
        m = is_max.sum(axis=1)
        T2 = S * is_max / m[:, None]
        l2 = 1.0 / np.sqrt(m)
        T2 = T2 * np.minimum(1.0, self.rho / l2)[:, None]
        pick1 = (T1 * X).sum(axis=1) >= (T2 * X).sum(axis=1)
        return np.where(pick1[:, None], T1, T2)

    def euclidean_radius(self):
        return min(self.rho, 1.0)

    def radius_point(self):
        e = np.zeros(self.dim)
        e[0] = min(self.rho, 1.0)
        return e

    def _membership(self, p, tol):
        if np.abs(p).sum() > 1.0 + tol:
            return Membership("outside", np.sign(p))
        nrm = np.linalg.norm(p)
        if nrm > self.rho + tol:
            return Membership("outside", p / nrm)
        return Membership("inside")

    def project(self, x):
        X, single = self._as_batch(x)
        Y = _optim.dykstra(
            [lambda Z: _optim.project_l1(Z, 1.0),
             lambda Z: _optim.project_l2(Z, self.rho)], X, iters=200)
        return Y[0] if single else Y

    def scaled(self, lam):
        # lam * (B_1 cap rho B_2) is not of this kind; expose it as a linear image
        return LinearImage(self, lam * np.eye(self.dim))

    def descriptor(self):
        return {"kind": "intersection_l1_l2", "dim": self.dim, "rho": self.rho}


class LinearImage(ConvexBody):
    """A @ base, for a matrix A of shape (m, base.dim); h(x) = h_base(A^T x)."""
    kind = "image"

    def __init__(self, base: ConvexBody, matrix):
        A = np.atleast_2d(np.asarray(matrix, dtype=float))
        if A.ndim != 2 or A.shape[1] != base.dim or not np.all(np.isfinite(A)):
            raise BodyError(f"matrix must be (m, {base.dim}) and finite, got {A.shape}")
        super().__init__(A.shape[0])
        self.base = base
        self.matrix = A

    def _support(self, X):
        return self.base._support(X @ self.matrix)

    def _extreme(self, X):
        return self.base._extreme(X @ self.matrix) @ self.matrix.T

    @property
    def radius_exact(self):
        if isinstance(self.base, (EuclideanBall, Ellipsoid)):
            return True
        if isinstance(self.base, L1Ball):
            return True
        if isinstance(self.base, SymmetricPolytope) and \
                len(self.base.vertices) <= _MAX_POLY_VERTICES_EXACT:
            return True
        if isinstance(self.base, LinearImage):
            return LinearImage(self.base.base, self.matrix @ self.base.matrix).radius_exact
        return False

    def _radius_and_point(self):
        if isinstance(self.base, EuclideanBall):
            U, s, Vt = np.linalg.svd(self.matrix, full_matrices=False)
            t = self.base.radius * Vt[0]
            return float(self.base.radius * s[0]), self.matrix @ t
        if isinstance(self.base, Ellipsoid):
            U, s, Vt = np.linalg.svd(self.matrix * self.base.axes, full_matrices=False)
            t = self.base.axes * Vt[0]
            return float(s[0]), self.matrix @ t
        if isinstance(self.base, L1Ball):
            norms = np.linalg.norm(self.matrix, axis=0)
            j = int(np.argmax(norms))
            return float(self.base.radius * norms[j]), self.base.radius * self.matrix[:, j]
        if isinstance(self.base, SymmetricPolytope) and \
                len(self.base.vertices) <= _MAX_POLY_VERTICES_EXACT:
            P = self.base.vertices @ self.matrix.T
            norms = np.linalg.norm(P, axis=1)
            j = int(np.argmax(norms))
            return float(norms[j]), P[j]
        if isinstance(self.base, LinearImage):
            inner = LinearImage(self.base.base, self.matrix @ self.base.matrix)
            return inner._radius_and_point()
        # multi-start heuristic (a lower estimate, flagged via radius_exact=False)
        rng = derive_rng(_CAP_SEED, "image-radius", self.dim, self.base.dim)
        val, z = _optim.support_sphere_max(
            lambda Z: self._support(Z), lambda Z: self._extreme(Z),
            self.dim, rng, restarts=64, iters=120)
        return val, self._extreme(z[None, :])[0]

    def euclidean_radius(self):
        return self._radius_and_point()[0]

    def radius_point(self):
        return self._radius_and_point()[1]

    def _membership(self, p, tol):
        # Gilbert-style Frank-Wolfe: minimize ||q - p|| over q in the body
        q = self._extreme(p[None, :])[0]
        scale = max(1.0, np.linalg.norm(p))
        for _ in range(600):
            g = p - q
            if np.linalg.norm(g) <= max(tol, 1e-9 * scale):
                break
            s = self._extreme(g[None, :])[0]
            d = s - q
            dd = float(d @ d)
            if dd <= 0:
                break
            gamma = float(np.clip((g @ d) / dd, 0.0, 1.0))
            if gamma <= 0:
                break
            q = q + gamma * d
        dist = np.linalg.norm(p - q)
        if dist <= max(tol, 1e-6 * scale):
            return Membership("inside")
        rng = derive_rng(_CAP_SEED, "image-separate", self.dim)
        val, z = _optim.sphere_min(
            lambda Z: (self._support(Z) - Z @ p, self._extreme(Z) - p),
            self.dim, rng, restarts=64, iters=300)
        if val < -tol:
            return Membership("outside", z)
        return Membership("inconclusive")

    def scaled(self, lam):
        return LinearImage(self.base, lam * self.matrix)

    def descriptor(self):
        return {"kind": "image", "base": self.base.descriptor(),
                "matrix": self.matrix.tolist()}


_PROJECTABLE = (EuclideanBall, L1Ball, CubeBall, Ellipsoid, IntersectionL1L2)


class CapIntersection(ConvexBody):
    """base intersected with r * B_2; only projection-friendly bases are admitted.

    The support function is evaluated by projected ascent of the linear
    functional <t, x> over the intersection, with Dykstra's alternating
    projections supplying feasibility (200 ascent steps, 8 restarts).
    """
    kind = "cap"

    def __init__(self, base: ConvexBody, r: float):
        if not isinstance(base, _PROJECTABLE):
            raise UnsupportedOperation(
                f"CapIntersection base must have a cheap Euclidean projection, got '{base.kind}'")
        if r <= 0:
            raise BodyError("cap radius must be positive")
        super().__init__(base.dim)
        self.base = base
        self.r = float(r)

    def project(self, x):
        X, single = self._as_batch(x)
        Y = _optim.dykstra(
            [lambda Z: self.base.project(Z), lambda Z: _optim.project_l2(Z, self.r)],
            X, iters=120)
        return Y[0] if single else Y

    def _ascend(self, X, restarts: int = 8, iters: int = 200):
        B = len(X)
        nrm = np.linalg.norm(X, axis=1, keepdims=True)
        Xhat = X / np.where(nrm == 0, 1.0, nrm)
        best_val = np.full(B, -np.inf)
        best_T = np.zeros_like(X)
        rng = derive_rng(_CAP_SEED, "cap-ascent", self.dim, restarts)
        for s in range(restarts):
            if s == 0:
                T0 = self.base._extreme(X)
            else:
                T0 = rng.standard_normal(X.shape)
            T = self.project(T0)
            prev = (T * X).sum(axis=1)
            for k in range(1, iters + 1):
                T = self.project(T + (0.5 * self.r / np.sqrt(k)) * Xhat)
                val = (T * X).sum(axis=1)
                if np.max(np.abs(val - prev)) < 1e-12 * max(1.0, np.max(np.abs(val))):
                    prev = val
                    break
                prev = val
            improved = prev > best_val
            best_T = np.where(improved[:, None], T, best_T)
            best_val = np.maximum(prev, best_val)
        return best_val, best_T

    def _support(self, X):
        return self._ascend(X)[0]

    def _extreme(self, X):
        return self._ascend(X)[1]

    radius_exact = False

    def euclidean_radius(self):
        return min(self.base.euclidean_radius(), self.r)

    def radius_point(self):
        p = self.base.radius_point()
        n = np.linalg.norm(p)
        return p if n <= self.r else p * (self.r / n)

    def _membership(self, p, tol):
        nrm = np.linalg.norm(p)
        if nrm > self.r + tol:
            return Membership("outside", p / nrm)
        return self.base._membership(p, tol)

    def scaled(self, lam):
        return CapIntersection(self.base.scaled(lam), lam * self.r)

    def descriptor(self):
        return {"kind": "cap", "base": self.base.descriptor(), "r": self.r}


def _load_matrix(spec) -> np.ndarray:
    if isinstance(spec, str):
        return np.loadtxt(spec, delimiter=",", ndmin=2)
    return np.asarray(spec, dtype=float)


def body_from_descriptor(desc: dict) -> ConvexBody:
    """Build a body from its JSON descriptor, e.g. {"kind": "l1", "dim": 64, "radius": 1.0}.

    Matrices may be inline lists or a path to a header-free row-major CSV file.
    """
    if not isinstance(desc, dict) or "kind" not in desc:
        raise BodyError(f"body descriptor must be a dict with a 'kind' field, got {desc!r}")
    kind = desc["kind"]
    if kind in ("l2", "ball"):
        return EuclideanBall(desc.get("radius", 1.0), desc["dim"])
    if kind == "l1":
        return L1Ball(desc.get("radius", 1.0), desc["dim"])
    if kind in ("linf", "cube"):
        return CubeBall(desc.get("radius", 1.0), desc["dim"])
    if kind == "ellipsoid":
        return Ellipsoid(desc["axes"])
    if kind == "polytope":
        return SymmetricPolytope(_load_matrix(desc["vertices"]))
    if kind == "intersection_l1_l2":
        return IntersectionL1L2(desc["rho"], desc["dim"])
    if kind == "image":
        return LinearImage(body_from_descriptor(desc["base"]), _load_matrix(desc["matrix"]))
    if kind == "cap":
        return CapIntersection(body_from_descriptor(desc["base"]), desc["r"])
    raise BodyError(f"unknown body kind '{kind}'")
