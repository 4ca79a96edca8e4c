"""Exact Gaussian path sampling: fGn, fBm, integrated fBm, and stationary kernels.

All samplers are built on circulant embedding of the Toeplitz covariance
(Davies-Harte): the autocovariance sequence is embedded into a circulant
matrix diagonalized by the FFT, which is exact in distribution whenever the
embedding eigenvalues are nonnegative.  For fGn this is known to hold; for the
dual stationary kernels a policy decides what to do with tiny negative
eigenvalues (clip and renormalize, or pad and retry).

Randomness comes from the counter-based Philox4x64 generator keyed by
(master_seed, stream_index), so a given SeedSpec always yields bit-identical
paths and distinct stream indices yield independent streams regardless of how
batches are scheduled.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .kernels import KernelId, check_hurst, kernel_corr

__all__ = [
    "SampleGrid",
    "SeedSpec",
    "PathBundle",
    "EigenvaluePolicy",
    "EmbeddingError",
    "fgn_autocovariance",
    "sample_fgn",
    "sample_fbm",
    "sample_ifbm",
    "sample_stationary",
]

EIG_TOL_FACTOR = 1e-9  # relative to the largest embedding eigenvalue
PAD_MAX = 4


class EmbeddingError(RuntimeError):
    """Raised when the circulant embedding is not nonnegative definite."""


@dataclass(frozen=True)
class SampleGrid:
    """Uniform grid k*dt, k = 0..n-1."""

    n: int
    dt: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"grid needs at least 2 points, got {self.n}")
        if self.dt <= 0:
            raise ValueError(f"mesh spacing must be positive, got {self.dt}")

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n) * self.dt

    @property
    def extent(self) -> float:
        return (self.n - 1) * self.dt


@dataclass(frozen=True)
class SeedSpec:
    """Reproducible stream identity: (master_seed, stream_index)."""

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must fit in 64 bits")
        if self.stream_index < 0:
            raise ValueError("stream_index must be nonnegative")

    def generator(self) -> np.random.Generator:
        # Distinct (seed, stream) pairs map to distinct Philox keys, which
        # gives independent counter-based streams by construction.
        key = self.master_seed | (self.stream_index << 64)
        return np.random.Generator(np.random.Philox(key=key))


class EigenvaluePolicy(Enum):
    CLIP = "clip"
    PAD = "pad"


@dataclass
class PathBundle:
    """A batch of sampled paths with full provenance."""

    grid: SampleGrid
    paths: np.ndarray  # (batch, n)
    process: str
    seed: SeedSpec
    method: str
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.paths.ndim != 2 or self.paths.shape[1] != self.grid.n:
            raise ValueError(
                f"paths shape {self.paths.shape} does not match grid n={self.grid.n}"
            )

    @property
    def batch(self) -> int:
        return self.paths.shape[0]

    def header(self) -> dict:
        return {
            "process": self.process,
            "n": self.grid.n,
            "dt": self.grid.dt,
            "batch": self.batch,
            "master_seed": self.seed.master_seed,
            "stream_index": self.seed.stream_index,
            "method": self.method,
            "notes": self.notes,
        }

    def save_binary(self, path: str | Path) -> None:
        """Write the matrix column-major (float64) with a JSON header sidecar."""
        path = Path(path)
        np.asfortranarray(self.paths).T.tofile(path)  # column-major layout
        path.with_suffix(path.suffix + ".json").write_text(
            json.dumps(self.header(), indent=2, sort_keys=True) + "\n"
        )

    def save_csv(self, path: str | Path) -> None:
        path = Path(path)
        with path.open("w") as fh:
            fh.write("# " + json.dumps(self.header(), sort_keys=True) + "\n")
            fh.write("t," + ",".join(f"path{i}" for i in range(self.batch)) + "\n")
            for k, t in enumerate(self.grid.times):
                row = ",".join(format(v, ".17g") for v in self.paths[:, k])
                fh.write(f"{format(t, '.17g')},{row}\n")


def _next_pow2(n: int) -> int:
    m = 1
    while m < n:
        m *= 2
    return m


def _embedding_eigenvalues(gamma: np.ndarray) -> np.ndarray:
    """Eigenvalues of the circulant embedding of the autocovariance gamma[0..m]."""
    c = np.concatenate([gamma, gamma[-2:0:-1]])
    lam = np.fft.fft(c).real
    return lam


def _circulant_draw(lam: np.ndarray, batch: int, rng: np.random.Generator) -> np.ndarray:
    """Draw `batch` exact stationary Gaussian rows of length len(lam)//2 + 1.

    Only the hermitian half-spectrum is drawn (endpoints real, inner bins
    complex with half variance per component); the inverse real FFT then gives
    real rows whose covariance is the circulant one exactly.
    """
    nfull = lam.size
    m = nfull // 2
    z = np.empty((batch, m + 1), dtype=complex)
    z[:, 0] = rng.standard_normal(batch)
    z[:, m] = rng.standard_normal(batch)
    v = rng.standard_normal((batch, m - 1, 2))
    z[:, 1:m] = (v[:, :, 0] + 1j * v[:, :, 1]) / np.sqrt(2.0)
    return np.sqrt(nfull) * np.fft.irfft(np.sqrt(lam[: m + 1]) * z, n=nfull, axis=1)[:, : m + 1]


def fgn_autocovariance(H: float, dt: float, nlags: int) -> np.ndarray:
    """Autocovariance of fGn increments on mesh dt: gamma(k) for k = 0..nlags."""
    H = check_hurst(H)
    k = np.arange(nlags + 1, dtype=float)
    g = 0.5 * dt ** (2 * H) * (
        np.abs(k + 1) ** (2 * H) - 2 * np.abs(k) ** (2 * H) + np.abs(k - 1) ** (2 * H)
    )
    return g


def _chunks(batch: int, chunk: int):
    start = 0
    while start < batch:
        yield start, min(chunk, batch - start)
        start += chunk


def _fgn_eigenvalues(H: float, dt: float, nincs: int) -> np.ndarray:
    """Embedding eigenvalues for nincs fGn increments, checked nonnegative.

    Nonnegativity is provable for fGn, so a violation beyond tolerance signals
    an implementation bug and raises rather than being repaired.
    """
    m = _next_pow2(nincs)
    lam = _embedding_eigenvalues(fgn_autocovariance(H, dt, m))
    tol = EIG_TOL_FACTOR * float(lam.max())
    if lam.min() < -tol:
        raise EmbeddingError(
            f"fGn embedding produced eigenvalue {lam.min():.3e} < -{tol:.3e}; "
            "this should be impossible for fGn"
        )
    return np.maximum(lam, 0.0)


def _stream_chunks(lam, nincs, batch, rng, chunk, out, transform):
    # transform maps a (size, nincs) increment block to its (size, n_out) rows.
    for start, size in _chunks(batch, chunk):
        incs = _circulant_draw(lam, size, rng)[:, :nincs]
        out[start : start + size] = transform(incs)


def sample_fgn(
    H: float,
    grid: SampleGrid,
    batch: int,
    seed: SeedSpec,
    chunk: int = 1024,
) -> PathBundle:
    """Exact fractional Gaussian noise increments: batch x n, increment k covering
    [k dt, (k+1) dt]."""
    H = check_hurst(H)
    if batch < 1:
        raise ValueError("batch must be positive")
    lam = _fgn_eigenvalues(H, grid.dt, grid.n)
    out = np.empty((batch, grid.n))
    _stream_chunks(lam, grid.n, batch, seed.generator(), chunk, out, lambda incs: incs)
    return PathBundle(
        grid=grid,
        paths=out,
        process=f"fGn(H={H})",
        seed=seed,
        method="circulant-embedding",
    )


def _fbm_from_incs(incs: np.ndarray) -> np.ndarray:
    w = np.zeros((incs.shape[0], incs.shape[1] + 1))
    np.cumsum(incs, axis=1, out=w[:, 1:])
    return w


def sample_fbm(
    H: float,
    grid: SampleGrid,
    batch: int,
    seed: SeedSpec,
    chunk: int = 1024,
) -> PathBundle:
    """fBm paths on the grid: w(0) = 0, then the cumulative sum of fGn increments."""
    H = check_hurst(H)
    if batch < 1:
        raise ValueError("batch must be positive")
    lam = _fgn_eigenvalues(H, grid.dt, grid.n - 1)
    out = np.empty((batch, grid.n))
    _stream_chunks(lam, grid.n - 1, batch, seed.generator(), chunk, out, _fbm_from_incs)
    return PathBundle(
        grid=grid,
        paths=out,
        process=f"fBm(H={H})",
        seed=seed,
        method="circulant-embedding+cumulative-sum",
    )


def sample_ifbm(
    H: float,
    grid: SampleGrid,
    batch: int,
    seed: SeedSpec,
    chunk: int = 1024,
) -> PathBundle:
    """Integrated-fBm paths: trapezoidal cumulative integral of sampled fBm.

    The path stays an exact linear functional of the fBm values; the weak
    discretization bias of the trapezoid rule is O(dt^2).
    """
    H = check_hurst(H)
    if batch < 1:
        raise ValueError("batch must be positive")
    lam = _fgn_eigenvalues(H, grid.dt, grid.n - 1)

    def to_ifbm(incs):
        w = _fbm_from_incs(incs)
        paths = np.zeros_like(w)
        np.cumsum(0.5 * grid.dt * (w[:, 1:] + w[:, :-1]), axis=1, out=paths[:, 1:])
        return paths

    out = np.empty((batch, grid.n))
    _stream_chunks(lam, grid.n - 1, batch, seed.generator(), chunk, out, to_ifbm)
    return PathBundle(
        grid=grid,
        paths=out,
        process=f"IFBM(H={H})",
        seed=seed,
        method="circulant-embedding+trapezoid",
    )


def sample_stationary(
    kernel: KernelId,
    grid: SampleGrid,
    batch: int,
    seed: SeedSpec,
    policy: EigenvaluePolicy = EigenvaluePolicy.PAD,
    chunk: int = 1024,
) -> PathBundle:
    """Stationary Gaussian paths with the given dual correlation kernel.

    If the minimal embedding eigenvalue is negative within tolerance, the
    policy either clips (zero out, rescale to preserve total variance) or pads
    (double the embedding length and retry, up to PAD_MAX times).  The action
    taken and the covariance perturbation bound are recorded in the bundle
    notes.
    """
    if batch < 1:
        raise ValueError("batch must be positive")
    notes: dict = {}
    m = _next_pow2(grid.n)
    for attempt in range(PAD_MAX + 1):
        lags = np.arange(m + 1) * grid.dt
        gamma = np.asarray(kernel_corr(kernel, lags), dtype=float)
        lam = _embedding_eigenvalues(gamma)
        lam_max = float(lam.max())
        lam_min = float(lam.min())
        tol = EIG_TOL_FACTOR * lam_max
        if lam_min >= -tol:
            break
        if policy is EigenvaluePolicy.CLIP:
            # sup-norm covariance perturbation of clipping is bounded by the
            # total clipped mass / embedding length
            clipped = float(-lam[lam < 0].sum())
            notes["policy_action"] = f"clipped eigenvalue mass {clipped:.3e} at m={m}"
            notes["covariance_perturbation_bound"] = clipped / lam.size
            break
        if attempt == PAD_MAX:
            raise EmbeddingError(
                f"kernel {kernel.label()}: eigenvalue {lam_min:.3e} below "
                f"tolerance -{tol:.3e} persists after {PAD_MAX} pad doublings (m={m})"
            )
        notes["policy_action"] = f"padded embedding to m={2 * m}"
        m *= 2
    if policy is EigenvaluePolicy.CLIP and lam.min() < 0.0:
        scale = lam.sum() / np.maximum(lam, 0.0).sum()
        lam = np.maximum(lam, 0.0) * scale
    else:
        lam = np.maximum(lam, 0.0)
    out = np.empty((batch, grid.n))
    _stream_chunks(lam, grid.n, batch, seed.generator(), chunk, out, lambda incs: incs)
    return PathBundle(
        grid=grid,
        paths=out,
        process=f"Stationary({kernel.label()})",
        seed=seed,
        method="circulant-embedding",
        notes=notes,
    )
