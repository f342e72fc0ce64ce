"""Haar sampling on U(n) and boundary integration (Monte Carlo + circle quadrature).

Reproducibility contract: sample i is generated from a counter-based stream
keyed by (seed, i // BLOCK) with a fixed internal block length, and block
results are merged in block order.  The estimate is therefore a pure function
of (seed, samples) - bitwise identical no matter how many workers run the
blocks.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .domains import DomainSpec, LineBundleParams, poisson_kernel_batch
from .errors import InvalidArgumentError, NonFiniteSampleError

__all__ = [
    "BLOCK",
    "McEstimate",
    "BoundaryFunction",
    "haar_unitary",
    "mc_integrate",
    "mc_integrate_vector",
    "circle_quadrature",
    "poisson_transform",
]

# Fixed algorithmic block length; part of the reproducibility contract,
# never tied to the worker count.
BLOCK = 8192

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo mean with its standard error and provenance.

    stderr combines the sample variances of the real and imaginary parts in
    quadrature: sqrt((var_re + var_im) / samples).
    """

    mean: complex
    stderr: float
    samples: int
    seed: int

    def z_score(self, reference: complex) -> float:
        if self.stderr == 0.0:
            return 0.0 if self.mean == reference else float("inf")
        return abs(self.mean - reference) / self.stderr


@dataclass(frozen=True)
class BoundaryFunction:
    """Scalar integrand on U(n); ``batch`` is an optional vectorized form.

    ``fn`` maps one (n, n) unitary to a complex number; ``batch`` maps a
    (B, n, n) stack to a length-B complex array and must agree with ``fn``.
    """

    fn: Callable[[np.ndarray], complex]
    tag: str = ""
    batch: Callable[[np.ndarray], np.ndarray] | None = None


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """One Haar-distributed n x n unitary.

    Complex Ginibre matrix, QR factorization, then each column rescaled by
    the unit phase of the matching diagonal entry of R.
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _haar_block(n: int, seed: int, block_index: int, count: int) -> np.ndarray:
    """Haar samples for one block, from its private counter-based stream."""
    key = np.array([seed & _MASK64, block_index], dtype=np.uint64)
    rg = np.random.Generator(np.random.Philox(key=key))
    z = (rg.standard_normal((count, n, n)) + 1j * rg.standard_normal((count, n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def _merge(stats_a, stats_b):
    """Chan merge of (count, mean, m2) accumulators (vector-valued)."""
    na, mean_a, m2a = stats_a
    nb, mean_b, m2b = stats_b
    n = na + nb
    delta = mean_b - mean_a
    mean = mean_a + delta * (nb / n)
    m2 = m2a + m2b + np.abs(delta) ** 2 * (na * nb / n)
    return n, mean, m2


def _block_stats(values: np.ndarray, start_index: int):
    vals = np.asarray(values, dtype=complex)
    if vals.ndim == 1:
        vals = vals[:, None]
    bad = ~(np.isfinite(vals.real) & np.isfinite(vals.imag))
    if np.any(bad):
        offender = start_index + int(np.argwhere(bad.any(axis=1))[0][0])
        raise NonFiniteSampleError(offender)
    mean = vals.mean(axis=0)
    m2 = np.sum(np.abs(vals - mean) ** 2, axis=0)
    return vals.shape[0], mean, m2


def _run_blocks(batch_values, n: int, samples: int, seed: int, workers: int):
    """Evaluate `batch_values(us, start)` over Haar blocks and merge in order."""
    if samples < 2:
        raise InvalidArgumentError(f"samples must be >= 2, got {samples}")
    seed = int(seed) & _MASK64
    nblocks = (samples + BLOCK - 1) // BLOCK

    def one_block(bi: int):
        start = bi * BLOCK
        count = min(BLOCK, samples - start)
        us = _haar_block(n, seed, bi, count)
        return _block_stats(batch_values(us), start)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one_block, range(nblocks)))
    else:
        results = [one_block(bi) for bi in range(nblocks)]
    acc = results[0]
    for stats in results[1:]:
        acc = _merge(acc, stats)
    count, mean, m2 = acc
    stderr = np.sqrt(m2 / (count - 1) / count)
    return mean, stderr, count


def mc_integrate(
    f: BoundaryFunction, n: int, samples: int, seed: int, *, workers: int = 1
) -> McEstimate:
    """Monte Carlo integral of f over U(n) with normalized Haar measure."""

    def batch_values(us: np.ndarray) -> np.ndarray:
        if f.batch is not None:
            return np.asarray(f.batch(us), dtype=complex)
        return np.array([f.fn(u) for u in us], dtype=complex)

    mean, stderr, count = _run_blocks(batch_values, n, samples, seed, workers)
    return McEstimate(mean=complex(mean[0]), stderr=float(stderr[0]), samples=count, seed=int(seed))


def mc_integrate_vector(
    batch_fn: Callable[[np.ndarray], np.ndarray], n: int, samples: int, seed: int, *, workers: int = 1
) -> list[McEstimate]:
    """Monte Carlo integrals of a vector-valued batched integrand.

    ``batch_fn`` maps a (B, n, n) stack of unitaries to a (B, K) array; all K
    components share the same Haar samples, which is what the multi-check CLI
    commands want.
    """

    def batch_values(us: np.ndarray) -> np.ndarray:
        vals = np.asarray(batch_fn(us), dtype=complex)
        if vals.ndim == 1:
            vals = vals[:, None]
        return vals

    mean, stderr, count = _run_blocks(batch_values, n, samples, seed, workers)
    return [
        McEstimate(mean=complex(m), stderr=float(s), samples=count, seed=int(seed))
        for m, s in zip(mean, stderr)
    ]


def circle_quadrature(f: Callable[[complex], complex], nodes: int) -> complex:
    """Trapezoidal rule on the unit circle with normalized measure.

    Equispaced angles make this spectrally accurate for analytic integrands
    (exact for trigonometric polynomials of degree < nodes).
    """
    if nodes < 8:
        raise InvalidArgumentError(f"need at least 8 nodes, got {nodes}")
    thetas = 2.0 * np.pi * np.arange(nodes) / nodes
    us = np.exp(1j * thetas)
    vals = np.array([f(u) for u in us], dtype=complex)
    if not np.all(np.isfinite(vals.real) & np.isfinite(vals.imag)):
        raise NonFiniteSampleError(int(np.argmax(~np.isfinite(vals.real))))
    return complex(vals.mean())


def poisson_transform(
    spec: DomainSpec,
    params: LineBundleParams,
    f: BoundaryFunction,
    z,
    samples: int,
    seed: int,
    *,
    workers: int = 1,
    nodes: int = 512,
) -> McEstimate:
    """The Poisson integral of boundary data f at the interior point z.

    Disk evaluations use exact circle quadrature (stderr 0); type I uses
    Haar Monte Carlo with the module's reproducible stream layout.
    """
    if spec.kind == "disk":
        zm = complex(np.asarray(z, dtype=complex).reshape(-1)[0])

        def g(u: complex) -> complex:
            h_zz = 1.0 - abs(zm) ** 2
            h_zu = 1.0 - zm * np.conj(u)
            s = (params.lam + spec.eta - params.nu) / 2.0
            kern = np.exp(s * np.log(h_zz / abs(h_zu) ** 2)) * h_zu ** (-params.nu)
            return kern * f.fn(np.array([[u]], dtype=complex))

        val = circle_quadrature(g, nodes)
        return McEstimate(mean=val, stderr=0.0, samples=nodes, seed=int(seed))

    def batch_values(us: np.ndarray) -> np.ndarray:
        kern = poisson_kernel_batch(spec, params, z, us)
        if f.batch is not None:
            fv = np.asarray(f.batch(us), dtype=complex)
        else:
            fv = np.array([f.fn(u) for u in us], dtype=complex)
        return kern * fv

    mean, stderr, count = _run_blocks(batch_values, spec.matrix_size, samples, seed, workers)
    return McEstimate(mean=complex(mean[0]), stderr=float(stderr[0]), samples=count, seed=int(seed))
