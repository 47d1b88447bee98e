"""Coordinate-subset search and packing constructions.

``subset_cube_search`` realizes the cube-extraction existence statement as a
greedy backward elimination: the witness direction of the current best
inscribed cube is the binding separating functional, and the coordinate it
loads most is removed.  ``hamming_separated_supports`` and ``separated_net``
provide the packing constructions used for the l1-ball intersection body.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from ._rng import derive_rng
from .bodies import BodyError, ConvexBody, SymmetricPolytope
from .ensembles import coordinate_restrict
from .inclusion import InclusionOpts, max_cube_side

__all__ = [
    "SubsetResult", "PackingResult", "subset_cube_search", "separated_net",
    "hamming_separated_supports", "wk_vertices", "rho_k", "support_size_m",
]


@dataclass
class SubsetResult:
    I: np.ndarray
    cube_side: float
    score: float                         # cube_side * sqrt(|I|)
    trace: List[tuple] = field(default_factory=list)  # (iteration, removed index, margin)

    def to_json_dict(self) -> dict:
        return {"I": self.I.tolist(), "cube_side": self.cube_side, "score": self.score}


@dataclass
class PackingResult:
    sets: List[np.ndarray]
    log_cardinality: float
    complete: bool                       # False when the retry cap was hit


def _greedy_eliminate(V: ConvexBody, target_size: int, search_opts: InclusionOpts,
                      rng: np.random.Generator, tie_scale: float):
    I = np.arange(V.dim)
    trace = []
    it = 0
    while len(I) > target_size:
        QIV = coordinate_restrict(V, I)
        est = max_cube_side(QIV, search_opts)
        w = np.abs(est.witness)
        if tie_scale > 0:
            w = w + tie_scale * np.max(w) * rng.random(len(w))
        j = int(np.argmax(w))
        trace.append((it, int(I[j]), est.value))
        I = np.delete(I, j)
        it += 1
    return I, trace


def subset_cube_search(V: ConvexBody, target_size: int, budget: int = 4,
                       seed: int = 0, search_opts: Optional[InclusionOpts] = None,
                       final_opts: Optional[InclusionOpts] = None) -> SubsetResult:
    """Best coordinate subset of the given size by greedy backward elimination.

    ``budget`` counts random-restart perturbations of the greedy tie-breaking;
    restart 0 is the unperturbed greedy pass.  Deterministic under ``seed``.
    """
    if not 1 <= target_size <= V.dim:
        raise BodyError(f"target_size must be in [1, {V.dim}]")
    search_opts = search_opts or InclusionOpts(restarts=16, iters=150)
    final_opts = final_opts or InclusionOpts(restarts=64, iters=300)
    best = None
    for b in range(max(1, budget)):
        rng = derive_rng(seed, "subset-cube", b)
        I, trace = _greedy_eliminate(V, target_size, search_opts, rng,
                                     tie_scale=0.0 if b == 0 else 0.05)
        side = max_cube_side(coordinate_restrict(V, I), final_opts).value
        score = side * np.sqrt(len(I))
        if best is None or score > best.score:
            best = SubsetResult(I, float(side), float(score), trace)
    return best


def separated_net(points: Sequence[np.ndarray], separation: float) -> List[np.ndarray]:
    """Maximal separated subset by a greedy scan in input order.

    Every kept pair is at Euclidean distance >= separation and every rejected
    point is within separation of some kept point.
    """
    if separation <= 0:
        raise BodyError("separation must be positive")
    kept: List[np.ndarray] = []
    for p in points:
        p = np.asarray(p, dtype=float)
        if not kept:
            kept.append(p)
            continue
        dists = np.linalg.norm(np.asarray(kept) - p, axis=1)
        if np.all(dists >= separation):
            kept.append(p)
    return kept


def hamming_separated_supports(n: int, m: int, min_sep: int, count: int,
                               seed: int = 0, retry_factor: int = 50) -> PackingResult:
    """Rejection-sample m-subsets of {0..n-1} pairwise >= min_sep apart in
    symmetric-difference size, until ``count`` sets or the retry cap."""
    if m > n:
        raise BodyError("m must not exceed n")
    if min_sep > 2 * m:
        raise BodyError("min_sep above 2m is unsatisfiable for m-sets")
    rng = derive_rng(seed, "hamming-pack", n, m)
    kept: List[np.ndarray] = []
    masks = np.zeros((0, n), dtype=bool)
    tries = 0
    cap = retry_factor * max(count, 1)
    while len(kept) < count and tries < cap:
        tries += 1
        I = np.sort(rng.choice(n, size=m, replace=False))
        mask = np.zeros(n, dtype=bool)
        mask[I] = True
        if len(kept):
            # |A symm-diff B| = 2m - 2|A intersect B|
            inter = (masks & mask).sum(axis=1)
            if np.any(2 * (m - inter) < min_sep):
                continue
        kept.append(I)
        masks = np.vstack([masks, mask])
    return PackingResult(kept, float(np.log(len(kept))) if kept else -np.inf,
                         complete=len(kept) >= count)


def rho_k(n: int, k: int) -> float:
    """sqrt(ln(e*n/k) / k), the critical Euclidean scale of the l1 intersection body."""
    return float(np.sqrt(np.log(np.e * n / k) / k))


def support_size_m(n: int, k: int) -> int:
    """m ~ k / ln(e*n/k), the support size of the packing vectors."""
    return max(1, int(round(k / np.log(np.e * n / k))))


def wk_vertices(n: int, k: int, c1: Optional[float] = None, seed: int = 0,
                max_count: int = 4096) -> SymmetricPolytope:
    """Vertex polytope of uniform vectors on Hamming-separated supports.

    Each vertex is (c1 * rho / sqrt(m)) * sum of e_i over a support set; with
    the default c1 = min(1, 1/(rho*sqrt(m))) all vertices lie exactly in
    B_1^n intersected with rho_k * B_2^n.
    """
    if not 1 <= k <= n:
        raise BodyError("need 1 <= k <= n")
    m = support_size_m(n, k)
    rho = rho_k(n, k)
    if c1 is None:
        c1 = min(1.0, 1.0 / (rho * np.sqrt(m)))
    count = int(min(2.0 ** min(k, 30), max_count))
    packing = hamming_separated_supports(n, m, int(round(m / 2)), count, seed)
    scale = c1 * rho / np.sqrt(m)
    vertices = np.zeros((len(packing.sets), n))
    for row, I in enumerate(packing.sets):
        vertices[row, I] = scale
    return SymmetricPolytope(vertices)
