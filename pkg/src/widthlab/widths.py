"""Monte Carlo width estimators and sample-based diameter statistics.

The gaussian mean width E sup_{t in T} <g, t> is the single complexity
parameter used throughout; everything else here (critical dimensions, the
oscillation function, empirical diameters, rearrangement statistics) is
derived from it or from a fixed sample matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import _optim
from ._rng import derive_rng
from .bodies import (BodyError, CapIntersection, ConvexBody, CubeBall,
                     Ellipsoid, EuclideanBall, IntersectionL1L2, L1Ball,
                     LinearImage, SymmetricPolytope)
from .ensembles import SampleMatrix, coordinate_restrict, project_body

__all__ = [
    "WidthEstimate", "DiameterEstimate", "mean_width", "critical_dimension",
    "eps_critical_dimension", "oscillation", "empirical_diameter",
    "rearrangement_stat", "projected_width",
]

_MC_CHUNK = 2_000_000  # cap on samples*dim entries evaluated at once


@dataclass
class WidthEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int

    def to_json(self) -> str:
        return json.dumps({"mean": self.mean, "std_error": self.std_error,
                           "samples": self.samples, "seed": self.seed})


@dataclass
class DiameterEstimate:
    """sup of the Euclidean norm over Gamma T; heuristic results are flagged."""
    value: float
    exact: bool
    witness: np.ndarray = field(repr=False, default=None)  # maximizing t in T

    def __float__(self) -> float:
        return self.value


def mean_width(T: ConvexBody, samples: int = 10_000, seed: int = 0) -> WidthEstimate:
    """Average of support(T, G) over iid standard gaussian directions."""
    if samples < 2:
        raise BodyError("need at least 2 Monte Carlo samples")
    rng = derive_rng(seed, "mean-width")
    chunk = max(2, _MC_CHUNK // T.dim)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        vals = T.support(rng.standard_normal((m, T.dim)))
        total += float(np.sum(vals))
        total_sq += float(np.sum(vals ** 2))
        done += m
    mean = total / samples
    var = max(total_sq / samples - mean ** 2, 0.0)
    return WidthEstimate(mean, float(np.sqrt(var / samples)), samples, seed)


def critical_dimension(T: ConvexBody, width: WidthEstimate) -> float:
    """(mean width / Euclidean radius)^2: the scale at which projections go round."""
    d = T.euclidean_radius()
    if d <= 0:
        raise BodyError("degenerate body: Euclidean radius is zero")
    return (width.mean / d) ** 2


def eps_critical_dimension(k_star: float, eps: float) -> float:
    """k* scaled by eps^2 / ln(1/eps) (natural log)."""
    if not 0 < eps < 0.5:
        raise BodyError(f"eps must be in (0, 1/2), got {eps}")
    if k_star < 0:
        raise BodyError("k_star must be nonnegative")
    return (eps ** 2 / np.log(1.0 / eps)) * k_star


def oscillation(T: ConvexBody, r: float, samples: int = 10_000, seed: int = 0) -> WidthEstimate:
    """Mean width of T intersected with r * B_2.

    IntersectionL1L2 and Euclidean balls reduce in closed form; other
    projection-friendly bases go through the CapIntersection ascent solver.
    """
    if r <= 0:
        raise BodyError("oscillation radius must be positive")
    if isinstance(T, IntersectionL1L2):
        capped = IntersectionL1L2(min(T.rho, r), T.dim)
    elif isinstance(T, EuclideanBall):
        capped = EuclideanBall(min(T.radius, r), T.dim)
    else:
        capped = CapIntersection(T, r)  # raises UnsupportedOperation for bad bases
    return mean_width(capped, samples, seed)


def _diameter_restarts_rng(gamma: SampleMatrix, tag: str):
    return derive_rng(gamma.seed, tag, gamma.N, gamma.n)


def empirical_diameter(T: ConvexBody, gamma: SampleMatrix, restarts: int = 64) -> DiameterEstimate:
    """sup_{t in T} ||Gamma t||_2, exact where the geometry allows it."""
    if gamma.n != T.dim:
        raise BodyError("incompatible dimensions")
    A = gamma.rows
    if isinstance(T, EuclideanBall):
        _, s, Vt = np.linalg.svd(A, full_matrices=False)
        return DiameterEstimate(float(T.radius * s[0]), True, T.radius * Vt[0])
    if isinstance(T, Ellipsoid):
        _, s, Vt = np.linalg.svd(A * T.axes, full_matrices=False)
        return DiameterEstimate(float(s[0]), True, T.axes * Vt[0])
    if isinstance(T, L1Ball):
        norms = np.linalg.norm(A, axis=0)
        j = int(np.argmax(norms))
        t = np.zeros(T.dim)
        t[j] = T.radius
        return DiameterEstimate(float(T.radius * norms[j]), True, t)
    if isinstance(T, SymmetricPolytope) and len(T.vertices) <= 10_000:
        norms = np.linalg.norm(T.vertices @ A.T, axis=1)
        j = int(np.argmax(norms))
        return DiameterEstimate(float(norms[j]), True, T.vertices[j].copy())
    V = project_body(T, gamma)
    rng = _diameter_restarts_rng(gamma, "empirical-diameter")
    val, z = _optim.support_sphere_max(
        lambda Z: V._support(Z), lambda Z: V._extreme(Z),
        V.dim, rng, restarts=restarts, iters=120)
    t_best = T._extreme((z[None, :] @ A))[0]
    return DiameterEstimate(val, False, t_best)


def _top_k_mass(a: np.ndarray, k: int) -> float:
    """l2 norm of the k largest entries of |a| (monotone rearrangement head)."""
    idx = np.argpartition(np.abs(a), len(a) - k)[len(a) - k:]
    return float(np.linalg.norm(a[idx]))


def rearrangement_stat(T: ConvexBody, gamma: SampleMatrix, k: int,
                       restarts: int = 8) -> float:
    """Lower estimate of sup_{t in T} l2-mass of the top-k coordinates of Gamma t.

    SymmetricPolytope bodies are scanned exactly; otherwise we alternate between
    selecting the top-k coordinate set I and maximizing ||Q_I Gamma t|| over T.
    """
    N = gamma.N
    if not 1 <= k <= N:
        raise BodyError(f"k must be in [1, {N}], got {k}")
    if gamma.n != T.dim:
        raise BodyError("incompatible dimensions")
    if isinstance(T, SymmetricPolytope) and len(T.vertices) <= 10_000:
        P = np.abs(T.vertices @ gamma.rows.T)  # (M, N)
        if k == N:
            return float(np.max(np.linalg.norm(P, axis=1)))
        part = -np.partition(-P, k - 1, axis=1)[:, :k]
        return float(np.max(np.linalg.norm(part, axis=1)))
    if k == N:
        return empirical_diameter(T, gamma, restarts=8 * restarts).value
    rng = _diameter_restarts_rng(gamma, "rearrangement")
    best = 0.0
    for s in range(restarts):
        if s == 0:
            t = empirical_diameter(T, gamma, restarts=16).witness
        else:
            t = T.extreme_point(rng.standard_normal(T.dim))
        I_prev = None
        for _ in range(20):
            a = gamma.rows @ t
            I = np.sort(np.argpartition(np.abs(a), N - k)[N - k:])
            if I_prev is not None and np.array_equal(I, I_prev):
                break
            I_prev = I
            est = empirical_diameter(T, gamma.restrict(I), restarts=16)
            t = est.witness
        best = max(best, _top_k_mass(gamma.rows @ t, k))
    return best


def projected_width(T: ConvexBody, gamma: SampleMatrix, samples: int = 10_000,
                    seed: int = 0) -> WidthEstimate:
    """Mean width of Gamma T (the quantity entering the lower half of the good event)."""
    return mean_width(project_body(T, gamma), samples, seed)
