"""Distance geometry over cube-rooted series and the 2-D layout that renders it.

The layout pipeline is deliberately deterministic: a Torgerson double-centering
spectral start, refined by SMACOF majorization with unit weights. Reductions
run in fixed order and the final axes are orientation-fixed (each axis is
flipped, if needed, so its first nonzero loading is positive), so identical
inputs give bit-identical coordinates regardless of worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    NonFiniteInput,
    SpanMismatch,
    TooFewPoints,
)
from .ingest import SeriesKey
from .transform import DenseSeries

DEFAULT_MAX_ITER = 500
DEFAULT_TOL = 1e-8

# Relative floor below which an eigenvalue of the centered Gram matrix is
# treated as exactly zero; keeps degenerate (collinear) inputs from leaking
# sqrt(noise) into the second axis.
_EIG_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric non-negative distances with zero diagonal, in key order."""

    keys: tuple[SeriesKey, ...]
    d: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        n = len(self.keys)
        if d.shape != (n, n):
            raise DimensionMismatch(f"distance matrix shape {d.shape} does not match {n} keys")
        if not np.all(np.isfinite(d)):
            raise NonFiniteInput("distance matrix contains non-finite entries")
        if np.any(d < 0):
            raise ValueError("distances must be >= 0")
        if np.any(np.diagonal(d) != 0):
            raise ValueError("distance matrix diagonal must be exactly zero")
        if not np.array_equal(d, d.T):
            raise ValueError("distance matrix must be exactly symmetric")
        object.__setattr__(self, "d", d)

    def __len__(self) -> int:
        return len(self.keys)


@dataclass(frozen=True, eq=False)
class Embedding:
    """2-D layout for a key list: coordinates, final stress, iteration count."""

    keys: tuple[SeriesKey, ...]
    coords: np.ndarray
    stress: float
    iterations: int
    stress_trace: tuple[float, ...] = field(default=())

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.ndim != 2 or coords.shape[0] != len(self.keys):
            raise DimensionMismatch(
                f"coords shape {coords.shape} does not match {len(self.keys)} keys"
            )
        if not np.all(np.isfinite(coords)):
            raise NonFiniteInput("embedding coordinates contain non-finite entries")
        if self.stress < 0:
            raise ValueError("stress must be >= 0")
        object.__setattr__(self, "coords", coords)


def pairwise_distances(series: list[DenseSeries]) -> DistanceMatrix:
    """Euclidean distances between aligned dense vectors.

    All series must share one year range (densified to the global span and
    already cube-rooted by the caller). The result is exactly symmetric with
    an exactly zero diagonal: the upper triangle is computed once and
    mirrored.
    """
    if not series:
        raise SpanMismatch("no series given")
    first = series[0]
    for s in series[1:]:
        if s.first_year != first.first_year or len(s.values) != len(first.values):
            raise SpanMismatch(
                f"series {s.key} spans {s.first_year}..{s.last_year}, "
                f"expected {first.first_year}..{first.last_year}"
            )
    x = np.vstack([s.values for s in series])
    n = x.shape[0]
    d = np.zeros((n, n))
    for i in range(n):
        diff = x[i + 1 :] - x[i]
        d[i, i + 1 :] = np.sqrt((diff * diff).sum(axis=1))
    d = d + d.T
    return DistanceMatrix(keys=tuple(s.key for s in series), d=d)


def _coord_distances(coords: np.ndarray) -> np.ndarray:
    diff = coords[:, None, :] - coords[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def _fix_orientation(coords: np.ndarray) -> np.ndarray:
    """Flip each axis so its lowest-index nonzero loading is non-negative."""
    out = coords.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        scale = np.max(np.abs(col))
        if scale == 0.0:
            continue
        nonzero = np.nonzero(np.abs(col) > 1e-12 * scale)[0]
        if nonzero.size and col[nonzero[0]] < 0:
            out[:, j] = -col
    return out


def _finalize(coords: np.ndarray) -> np.ndarray:
    centered = coords - coords.mean(axis=0)
    return _fix_orientation(centered)


def stress(distances: DistanceMatrix, coords: np.ndarray) -> float:
    """Normalized stress-1: sqrt(sum (|x_i-x_j| - d_ij)^2 / sum d_ij^2) over i<j.

    Zero iff the configuration reproduces every distance exactly. An all-zero
    target matrix returns 0 for coincident points by convention (and +inf if
    the points are somehow spread).
    """
    delta = distances.d
    coords = np.asarray(coords, dtype=float)
    if coords.ndim != 2 or coords.shape[0] != delta.shape[0]:
        raise DimensionMismatch(
            f"coords shape {coords.shape} does not match {delta.shape[0]} targets"
        )
    iu = np.triu_indices(delta.shape[0], k=1)
    fitted = _coord_distances(coords)[iu]
    num = float(((fitted - delta[iu]) ** 2).sum())
    den = float((delta[iu] ** 2).sum())
    if den == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return math.sqrt(num / den)


def classical_mds(distances: DistanceMatrix, dim: int = 2) -> Embedding:
    """Torgerson double-centering layout: spectral coordinates of -J D^2 J / 2.

    When the input is exactly realizable in `dim` dimensions the layout
    reproduces it to spectral accuracy; eigenvalues at or below the relative
    floor are zeroed so rank-deficient inputs give exactly-zero trailing
    axes instead of sqrt-of-noise.
    """
    n = len(distances)
    if n < 3:
        raise TooFewPoints(f"need at least 3 points, got {n}")
    d = distances.d
    if not np.all(np.isfinite(d)):
        raise NonFiniteInput("distance matrix contains non-finite entries")

    d2 = d * d
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * (j @ d2 @ j)
    b = (b + b.T) / 2.0

    evals, evecs = np.linalg.eigh(b)  # ascending
    evals = evals[::-1][:dim].copy()
    evecs = evecs[:, ::-1][:, :dim]
    floor = _EIG_FLOOR * max(float(evals[0]), 0.0)
    evals[evals <= floor] = 0.0
    coords = _finalize(evecs * np.sqrt(evals))
    sigma = stress(distances, coords)
    return Embedding(
        keys=distances.keys,
        coords=coords,
        stress=sigma,
        iterations=0,
        stress_trace=(sigma,),
    )


def _guttman_step(delta: np.ndarray, coords: np.ndarray) -> np.ndarray:
    # Unit-weight majorizer: X+ = B(X) X / n, with B built from delta/dist
    # ratios and zero contribution from coincident pairs.
    dist = _coord_distances(coords)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(dist > 0.0, delta / np.where(dist > 0.0, dist, 1.0), 0.0)
    b = -ratio
    np.fill_diagonal(b, ratio.sum(axis=1))
    return (b @ coords) / delta.shape[0]


def smacof_refine(
    distances: DistanceMatrix,
    init: Embedding,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
) -> Embedding:
    """Majorize stress from an initial layout; the stress trace never increases.

    Iteration stops when the relative stress decrease falls below `tol`,
    when stress hits zero, or after `max_iter` Guttman steps. The returned
    stress is never above the initial stress (up to 1e-12 float wobble),
    and the per-iteration trace is exposed for convergence checks.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    if init.keys != distances.keys:
        raise DimensionMismatch("initial embedding keys do not match the distance matrix")
    if init.coords.shape[0] != len(distances):
        raise DimensionMismatch("initial coordinates do not match the distance matrix size")

    delta = distances.d
    coords = init.coords.copy()
    trace = [stress(distances, coords)]
    iterations = 0
    for _ in range(max_iter):
        previous = trace[-1]
        if previous <= 1e-15:
            break
        coords = _guttman_step(delta, coords)
        current = stress(distances, coords)
        trace.append(current)
        iterations += 1
        if (previous - current) < tol * previous:
            break
    return Embedding(
        keys=distances.keys,
        coords=_finalize(coords),
        stress=trace[-1],
        iterations=iterations,
        stress_trace=tuple(trace),
    )


def embed_distances(
    distances: DistanceMatrix,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
) -> Embedding:
    """Full layout pipeline: classical initialization refined by SMACOF."""
    return smacof_refine(distances, classical_mds(distances), max_iter=max_iter, tol=tol)
