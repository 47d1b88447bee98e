"""Scalar subgaussian laws, random sample matrices, and psi2-norm estimation.

The projection operator Gamma maps t to (<X_i, t>)_{i=1..N} for N independent
isotropic rows with iid coordinates drawn from one of the shipped laws.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from ._rng import derive_rng
from .bodies import (BodyError, ConvexBody, CubeBall, Ellipsoid, EuclideanBall,
                     IntersectionL1L2, L1Ball, LinearImage, SymmetricPolytope,
                     UnsupportedOperation)

__all__ = [
    "ConfigError", "ScalarLaw", "GAUSSIAN", "RADEMACHER", "UNIFORM_SCALED",
    "law_from_descriptor", "SampleMatrix", "sample_matrix", "project_body",
    "coordinate_restrict", "psi2_estimate", "psi1_estimate", "moment_psi2_proxy",
]

_MAX_ENTRIES = 200_000_000  # resource cap on N * n


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScalarLaw:
    """A mean-zero variance-one scalar law with a declared subgaussian norm."""
    kind: str
    declared_psi2: float

    def __post_init__(self):
        if self.declared_psi2 <= 0:
            raise ConfigError("declared_psi2 must be positive")

    def sample(self, rng: np.random.Generator, shape) -> np.ndarray:
        if self.kind == "gaussian":
            return rng.standard_normal(shape)
        if self.kind == "rademacher":
            return rng.integers(0, 2, size=shape).astype(float) * 2.0 - 1.0
        if self.kind == "uniform_scaled":
            return rng.uniform(-np.sqrt(3.0), np.sqrt(3.0), size=shape)
        raise ConfigError(f"unknown law kind '{self.kind}'")


# analytic psi2 norms: gaussian solves (1 - 2/c^2)^{-1/2} = 2, rademacher
# solves exp(1/c^2) = 2; the uniform value is a numerical solve, cached here.
GAUSSIAN = ScalarLaw("gaussian", float(np.sqrt(8.0 / 3.0)))
RADEMACHER = ScalarLaw("rademacher", float(1.0 / np.sqrt(np.log(2.0))))
UNIFORM_SCALED = ScalarLaw("uniform_scaled", 1.3558)

_LAWS = {"gaussian": GAUSSIAN, "rademacher": RADEMACHER, "uniform_scaled": UNIFORM_SCALED}


def law_from_descriptor(desc: Union[str, dict]) -> ScalarLaw:
    """Accepts "rademacher" or {"law": "rademacher"}."""
    name = desc.get("law") if isinstance(desc, dict) else desc
    try:
        return _LAWS[name]
    except KeyError:
        raise ConfigError(f"unknown law '{name}' (choose from {sorted(_LAWS)})") from None


@dataclass
class SampleMatrix:
    """N iid rows in R^n; regenerating with the same seed is bit-exact."""
    rows: np.ndarray
    law: ScalarLaw
    seed: int

    @property
    def N(self) -> int:
        return self.rows.shape[0]

    @property
    def n(self) -> int:
        return self.rows.shape[1]

    def restrict(self, index_set: Sequence[int]) -> "SampleMatrix":
        I = _check_index_set(index_set, self.N)
        return SampleMatrix(self.rows[I], self.law, self.seed)

    def to_csv(self, path) -> None:
        np.savetxt(path, self.rows, delimiter=",")


def sample_matrix(law: ScalarLaw, N: int, n: int, seed: int) -> SampleMatrix:
    if N < 1 or n < 1:
        raise ConfigError(f"N and n must be >= 1, got {N}, {n}")
    if N * n > _MAX_ENTRIES:
        raise ConfigError(f"sample matrix of {N}x{n} exceeds the resource cap")
    rng = derive_rng(seed, "sample-matrix", N, n)
    return SampleMatrix(law.sample(rng, (N, n)), law, seed)


def project_body(T: ConvexBody, gamma: SampleMatrix) -> LinearImage:
    """Gamma T, the coordinate projection of the linear class indexed by T."""
    if gamma.n != T.dim:
        raise BodyError(f"matrix columns ({gamma.n}) != body dimension ({T.dim})")
    return LinearImage(T, gamma.rows)


def _check_index_set(I, N: int) -> np.ndarray:
    I = np.asarray(I, dtype=int)
    if I.ndim != 1 or len(I) == 0:
        raise BodyError("index set must be a nonempty 1-D sequence")
    if np.any(np.diff(I) <= 0):
        raise BodyError("index set must be sorted and duplicate-free")
    if I[0] < 0 or I[-1] >= N:
        raise BodyError(f"index out of range for ambient dimension {N}")
    return I


def coordinate_restrict(V: ConvexBody, index_set: Sequence[int]) -> ConvexBody:
    """Q_I V, the restriction of V to the coordinates of I."""
    I = _check_index_set(index_set, V.dim)
    if isinstance(V, LinearImage):
        return LinearImage(V.base, V.matrix[I])
    if isinstance(V, EuclideanBall):
        return EuclideanBall(V.radius, len(I))
    if isinstance(V, L1Ball):
        return L1Ball(V.radius, len(I))
    if isinstance(V, CubeBall):
        return CubeBall(V.radius, len(I))
    if isinstance(V, Ellipsoid):
        return Ellipsoid(V.axes[I])
    if isinstance(V, SymmetricPolytope):
        return SymmetricPolytope(V.vertices[:, I])
    if isinstance(V, IntersectionL1L2):
        # zero-padding a restricted point changes neither norm, so Q_I keeps the kind
        return IntersectionL1L2(V.rho, len(I))
    raise UnsupportedOperation(f"coordinate_restrict not available for kind '{V.kind}'")


def _smallest_exp_moment_root(x: np.ndarray, power: int) -> float:
    """Bisect for the smallest c with mean(exp(|x/c|^power)) <= 2."""
    x = np.abs(np.asarray(x, dtype=float))
    top = float(np.max(x))
    if top == 0.0:
        return 0.0

    def ok(c: float) -> bool:
        z = (x / c) ** power
        if np.max(z) > 700.0:  # exp would overflow: c is certainly too small
            return False
        return float(np.mean(np.exp(z))) <= 2.0

    hi = top
    while not ok(hi):
        hi *= 2.0
    lo = hi / 2.0
    while ok(lo):  # keep ok(hi) true and ok(lo) false before bisecting
        hi = lo
        lo /= 2.0
        if lo < 1e-12 * top:
            break
    while (hi - lo) > 1e-3 * hi:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _as_sample(law_or_sample, seed: int, size: int) -> np.ndarray:
    if isinstance(law_or_sample, ScalarLaw):
        return law_or_sample.sample(derive_rng(seed, "psi-sample"), size)
    x = np.asarray(law_or_sample, dtype=float)
    if x.size == 0:
        raise ConfigError("empty sample")
    if x.size < 1000:
        raise ConfigError("need at least 10^3 points to estimate a psi norm from data")
    return x


def psi2_estimate(law_or_sample, seed: int = 0, size: int = 100_000) -> float:
    """Empirical psi2 norm: smallest c with E exp((x/c)^2) <= 2, to 1e-3 relative."""
    return _smallest_exp_moment_root(_as_sample(law_or_sample, seed, size), 2)


def psi1_estimate(law_or_sample, seed: int = 0, size: int = 100_000) -> float:
    """Empirical psi1 norm (E exp(|x|/c) <= 2), used by the Bernstein-tail harness."""
    return _smallest_exp_moment_root(_as_sample(law_or_sample, seed, size), 1)


def moment_psi2_proxy(sample, p_max: int = 20) -> float:
    """Cross-check diagnostic: sup_p p^{-1/2} * (E|x|^p)^{1/p} over even p."""
    x = np.abs(np.asarray(sample, dtype=float))
    best = 0.0
    for p in range(2, p_max + 1, 2):
        best = max(best, float(np.mean(x ** p) ** (1.0 / p) / np.sqrt(p)))
    return best
